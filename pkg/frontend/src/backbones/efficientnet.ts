import { Tensor, add, swish } from "../tensor.js";
import { WeightSource } from "../weights.js";
import { Net } from "./common.js";

/** MBConv blocks with squeeze-excite and swish; head conv gives 1280. */
export function efficientNetB0(ws: WeightSource, input: Tensor): Tensor {
  const net = new Net(ws);
  let x = net.convBnSwish("stem", input, 3, 32, 2, "same");
  // (expansion, channels, repeats, first stride, kernel)
  const stages: Array<[number, number, number, number, number]> = [
    [1, 16, 1, 1, 3], [6, 24, 2, 2, 3], [6, 40, 2, 2, 5], [6, 80, 3, 2, 3],
    [6, 112, 3, 1, 5], [6, 192, 4, 2, 5], [6, 320, 1, 1, 3],
  ];
  stages.forEach(([t, cOut, n, s, k], si) => {
    for (let bi = 0; bi < n; bi++) {
      const name = `stage${si}/block${bi}`;
      const stride = bi === 0 ? s : 1;
      const inC = x.c;
      let y = x;
      if (t !== 1) {
        y = net.convBnSwish(`${name}/expand`, y, 1, inC * t, 1, "same");
      }
      y = swish(net.depthwiseBn(`${name}/dw`, y, k, stride, "same"));
      y = net.squeezeExcite(`${name}/se`, y, Math.max(1, Math.floor(inC / 4)));
      y = net.convBn(`${name}/project`, y, 1, cOut, 1, "same");
      x = stride === 1 && inC === cOut ? add(x, y) : y;
    }
  });
  return net.convBnSwish("head", x, 1, 1280, 1, "same");
}
