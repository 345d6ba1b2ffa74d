import { Tensor, add, relu } from "../tensor.js";
import { WeightSource } from "../weights.js";
import { Net } from "./common.js";

/** Depthwise-separable stack; final map 1024 channels. */
export function mobileNet(ws: WeightSource, input: Tensor): Tensor {
  const net = new Net(ws);
  let x = relu(net.convBn("stem", input, 3, 32, 2, "same"), 6);
  const stages: Array<[number, number]> = [
    [64, 1], [128, 2], [128, 1], [256, 2], [256, 1], [512, 2],
    [512, 1], [512, 1], [512, 1], [512, 1], [512, 1], [1024, 2], [1024, 1],
  ];
  stages.forEach(([cOut, stride], i) => {
    const name = `sep${i}`;
    x = relu(net.depthwiseBn(`${name}/dw`, x, 3, stride, "same"), 6);
    x = relu(net.convBn(`${name}/pw`, x, 1, cOut, 1, "same"), 6);
  });
  return x;
}

/** Inverted residuals with linear bottlenecks; head conv gives 1280. */
export function mobileNetV2(ws: WeightSource, input: Tensor): Tensor {
  const net = new Net(ws);
  let x = relu(net.convBn("stem", input, 3, 32, 2, "same"), 6);
  // (expansion, channels, repeats, first stride)
  const stages: Array<[number, number, number, number]> = [
    [1, 16, 1, 1], [6, 24, 2, 2], [6, 32, 3, 2], [6, 64, 4, 2],
    [6, 96, 3, 1], [6, 160, 3, 2], [6, 320, 1, 1],
  ];
  stages.forEach(([t, cOut, n, s], si) => {
    for (let bi = 0; bi < n; bi++) {
      const name = `stage${si}/block${bi}`;
      const stride = bi === 0 ? s : 1;
      const inC = x.c;
      let y = x;
      if (t !== 1) {
        y = relu(net.convBn(`${name}/expand`, y, 1, inC * t, 1, "same"), 6);
      }
      y = relu(net.depthwiseBn(`${name}/dw`, y, 3, stride, "same"), 6);
      y = net.convBn(`${name}/project`, y, 1, cOut, 1, "same");
      x = stride === 1 && inC === cOut ? add(x, y) : y;
    }
  });
  return relu(net.convBn("head", x, 1, 1280, 1, "same"), 6);
}
