import { Tensor, maxPool, relu } from "../tensor.js";
import { WeightSource } from "../weights.js";
import { Net } from "./common.js";

/** Plain 3x3 conv stacks with 2x2 max pooling; final map has 512 channels. */
function vgg(convsPerBlock: number[], ws: WeightSource, input: Tensor): Tensor {
  const net = new Net(ws);
  const widths = [64, 128, 256, 512, 512];
  let x = input;
  convsPerBlock.forEach((count, bi) => {
    for (let ci = 0; ci < count; ci++) {
      x = relu(net.conv(`block${bi}/conv${ci}`, x, 3, widths[bi], 1, "same", true));
    }
    x = maxPool(x, 2, 2, "valid");
  });
  return x;
}

export const vgg16 = (ws: WeightSource, x: Tensor) => vgg([2, 2, 3, 3, 3], ws, x);
export const vgg19 = (ws: WeightSource, x: Tensor) => vgg([2, 2, 4, 4, 4], ws, x);
