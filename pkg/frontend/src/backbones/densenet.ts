import { Tensor, avgPool, concat, maxPool, relu } from "../tensor.js";
import { WeightSource } from "../weights.js";
import { Net } from "./common.js";

const GROWTH = 32;

/**
 * Densely connected network: every layer's output is concatenated onto
 * the running feature map. Block counts (6,12,32,32) give the 169-layer
 * variant whose final map has 1664 channels.
 */
export function denseNet(blocks: number[], ws: WeightSource, input: Tensor): Tensor {
  const net = new Net(ws);
  let x = net.conv("stem/conv", input, 7, 2 * GROWTH, 2, "same");
  x = net.bnRelu("stem/bn", x);
  x = maxPool(x, 3, 2, "same");

  blocks.forEach((layers, bi) => {
    for (let li = 0; li < layers; li++) {
      const name = `block${bi}/layer${li}`;
      // bottleneck: BN-ReLU-1x1 (4x growth) -> BN-ReLU-3x3 (growth)
      let y = net.bnRelu(`${name}/bn0`, x);
      y = net.conv(`${name}/conv1`, y, 1, 4 * GROWTH, 1, "same");
      y = net.bnRelu(`${name}/bn1`, y);
      y = net.conv(`${name}/conv3`, y, 3, GROWTH, 1, "same");
      x = concat([x, y]);
    }
    if (bi < blocks.length - 1) {
      const name = `transition${bi}`;
      let t = net.bnRelu(`${name}/bn`, x);
      t = net.conv(`${name}/conv`, t, 1, Math.floor(x.c / 2), 1, "same");
      x = avgPool(t, 2, 2, "valid");
    }
  });
  return relu(net.bn("final/bn", x));
}

export const denseNet121 = (ws: WeightSource, x: Tensor) => denseNet([6, 12, 24, 16], ws, x);
export const denseNet169 = (ws: WeightSource, x: Tensor) => denseNet([6, 12, 32, 32], ws, x);
export const denseNet201 = (ws: WeightSource, x: Tensor) => denseNet([6, 12, 48, 32], ws, x);
