import { Tensor, add, maxPool, relu } from "../tensor.js";
import { WeightSource } from "../weights.js";
import { Net } from "./common.js";

/** Separable convolutions with residual connections; final map 2048. */
export function xception(ws: WeightSource, input: Tensor): Tensor {
  const net = new Net(ws);
  let x = net.convBnRelu("entry/conv1", input, 3, 32, 2, "valid");
  x = net.convBnRelu("entry/conv2", x, 3, 64, 1, "valid");

  for (const [i, cOut] of [128, 256, 728].entries()) {
    const name = `entry/block${i}`;
    const shortcut = net.convBn(`${name}/proj`, x, 1, cOut, 2, "same");
    let y = i === 0 ? x : relu(x);
    y = net.separableBn(`${name}/sep1`, y, 3, cOut, 1, "same");
    y = relu(y);
    y = net.separableBn(`${name}/sep2`, y, 3, cOut, 1, "same");
    y = maxPool(y, 3, 2, "same");
    x = add(y, shortcut);
  }

  for (let i = 0; i < 8; i++) {
    const name = `middle/block${i}`;
    let y = x;
    for (let j = 0; j < 3; j++) {
      y = relu(y);
      y = net.separableBn(`${name}/sep${j}`, y, 3, 728, 1, "same");
    }
    x = add(y, x);
  }

  const shortcut = net.convBn("exit/proj", x, 1, 1024, 2, "same");
  let y = relu(x);
  y = net.separableBn("exit/sep1", y, 3, 728, 1, "same");
  y = relu(y);
  y = net.separableBn("exit/sep2", y, 3, 1024, 1, "same");
  y = maxPool(y, 3, 2, "same");
  x = add(y, shortcut);

  x = relu(net.separableBn("exit/sep3", x, 3, 1536, 1, "same"));
  x = relu(net.separableBn("exit/sep4", x, 3, 2048, 1, "same"));
  return x;
}
