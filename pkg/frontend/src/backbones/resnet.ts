import { Tensor, add, maxPool, relu } from "../tensor.js";
import { WeightSource } from "../weights.js";
import { Net } from "./common.js";

/**
 * Bottleneck residual networks, v1 (post-activation) and v2
 * (pre-activation). Both end at 2048 channels before pooling.
 */
function resNetV1(blocks: number[], ws: WeightSource, input: Tensor): Tensor {
  const net = new Net(ws);
  let x = net.convBnRelu("stem", input, 7, 64, 2, "same");
  x = maxPool(x, 3, 2, "same");
  const widths = [64, 128, 256, 512];
  blocks.forEach((count, si) => {
    const mid = widths[si];
    for (let bi = 0; bi < count; bi++) {
      const name = `stage${si}/block${bi}`;
      const stride = bi === 0 && si > 0 ? 2 : 1;
      const shortcut =
        bi === 0 ? net.convBn(`${name}/proj`, x, 1, mid * 4, stride, "same") : x;
      let y = net.convBnRelu(`${name}/a`, x, 1, mid, stride, "same");
      y = net.convBnRelu(`${name}/b`, y, 3, mid, 1, "same");
      y = net.convBn(`${name}/c`, y, 1, mid * 4, 1, "same");
      x = relu(add(y, shortcut));
    }
  });
  return x;
}

function resNetV2(blocks: number[], ws: WeightSource, input: Tensor): Tensor {
  const net = new Net(ws);
  let x = net.conv("stem", input, 7, 64, 2, "same", true);
  x = maxPool(x, 3, 2, "same");
  const widths = [64, 128, 256, 512];
  blocks.forEach((count, si) => {
    const mid = widths[si];
    for (let bi = 0; bi < count; bi++) {
      const name = `stage${si}/block${bi}`;
      const stride = bi === count - 1 && si < blocks.length - 1 ? 2 : 1;
      const pre = net.bnRelu(`${name}/pre`, x);
      const shortcut =
        bi === 0
          ? net.conv(`${name}/proj`, pre, 1, mid * 4, stride, "same")
          : stride === 1
            ? x
            : maxPool(x, 1, stride, "same");
      let y = net.convBnRelu(`${name}/a`, pre, 1, mid, 1, "same");
      y = net.convBnRelu(`${name}/b`, y, 3, mid, stride, "same");
      y = net.conv(`${name}/c`, y, 1, mid * 4, 1, "same");
      x = add(y, shortcut);
    }
  });
  return net.bnRelu("final", x);
}

export const resNet50 = (ws: WeightSource, x: Tensor) => resNetV1([3, 4, 6, 3], ws, x);
export const resNet152 = (ws: WeightSource, x: Tensor) => resNetV1([3, 8, 36, 3], ws, x);
export const resNet50V2 = (ws: WeightSource, x: Tensor) => resNetV2([3, 4, 6, 3], ws, x);
export const resNet101V2 = (ws: WeightSource, x: Tensor) => resNetV2([3, 4, 23, 3], ws, x);
export const resNet152V2 = (ws: WeightSource, x: Tensor) => resNetV2([3, 8, 36, 3], ws, x);
