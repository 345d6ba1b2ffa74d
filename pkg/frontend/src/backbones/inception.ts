import { Tensor, avgPool, concat, maxPool, relu } from "../tensor.js";
import { WeightSource } from "../weights.js";
import { Net } from "./common.js";

/** Factorized-convolution inception towers; final map 2048 channels. */
export function inceptionV3(ws: WeightSource, input: Tensor): Tensor {
  const net = new Net(ws);
  const cbr = (name: string, x: Tensor, kh: number, kw: number, cOut: number,
               stride = 1, pad: "same" | "valid" = "valid") =>
    relu(net.bn(`${name}/bn`, net.convRect(name, x, kh, kw, cOut, stride, pad)));

  let x = cbr("stem/c0", input, 3, 3, 32, 2);
  x = cbr("stem/c1", x, 3, 3, 32);
  x = cbr("stem/c2", x, 3, 3, 64, 1, "same");
  x = maxPool(x, 3, 2, "valid");
  x = cbr("stem/c3", x, 1, 1, 80);
  x = cbr("stem/c4", x, 3, 3, 192);
  x = maxPool(x, 3, 2, "valid");

  // inception-A towers
  for (const [i, poolC] of [32, 64, 64].entries()) {
    const name = `mixedA${i}`;
    const b0 = cbr(`${name}/b0`, x, 1, 1, 64, 1, "same");
    let b1 = cbr(`${name}/b1a`, x, 1, 1, 48, 1, "same");
    b1 = cbr(`${name}/b1b`, b1, 5, 5, 64, 1, "same");
    let b2 = cbr(`${name}/b2a`, x, 1, 1, 64, 1, "same");
    b2 = cbr(`${name}/b2b`, b2, 3, 3, 96, 1, "same");
    b2 = cbr(`${name}/b2c`, b2, 3, 3, 96, 1, "same");
    const b3 = cbr(`${name}/b3`, avgPool(x, 3, 1, "same"), 1, 1, poolC, 1, "same");
    x = concat([b0, b1, b2, b3]);
  }

  // grid reduction to 17x17
  {
    const b0 = cbr("reduceA/b0", x, 3, 3, 384, 2);
    let b1 = cbr("reduceA/b1a", x, 1, 1, 64, 1, "same");
    b1 = cbr("reduceA/b1b", b1, 3, 3, 96, 1, "same");
    b1 = cbr("reduceA/b1c", b1, 3, 3, 96, 2);
    x = concat([b0, b1, maxPool(x, 3, 2, "valid")]);
  }

  // inception-B towers with 1x7 / 7x1 factors
  for (const [i, c7] of [128, 160, 160, 192].entries()) {
    const name = `mixedB${i}`;
    const b0 = cbr(`${name}/b0`, x, 1, 1, 192, 1, "same");
    let b1 = cbr(`${name}/b1a`, x, 1, 1, c7, 1, "same");
    b1 = cbr(`${name}/b1b`, b1, 1, 7, c7, 1, "same");
    b1 = cbr(`${name}/b1c`, b1, 7, 1, 192, 1, "same");
    let b2 = cbr(`${name}/b2a`, x, 1, 1, c7, 1, "same");
    b2 = cbr(`${name}/b2b`, b2, 7, 1, c7, 1, "same");
    b2 = cbr(`${name}/b2c`, b2, 1, 7, c7, 1, "same");
    b2 = cbr(`${name}/b2d`, b2, 7, 1, c7, 1, "same");
    b2 = cbr(`${name}/b2e`, b2, 1, 7, 192, 1, "same");
    const b3 = cbr(`${name}/b3`, avgPool(x, 3, 1, "same"), 1, 1, 192, 1, "same");
    x = concat([b0, b1, b2, b3]);
  }

  // grid reduction to 8x8
  {
    let b0 = cbr("reduceB/b0a", x, 1, 1, 192, 1, "same");
    b0 = cbr("reduceB/b0b", b0, 3, 3, 320, 2);
    let b1 = cbr("reduceB/b1a", x, 1, 1, 192, 1, "same");
    b1 = cbr("reduceB/b1b", b1, 1, 7, 192, 1, "same");
    b1 = cbr("reduceB/b1c", b1, 7, 1, 192, 1, "same");
    b1 = cbr("reduceB/b1d", b1, 3, 3, 192, 2);
    x = concat([b0, b1, maxPool(x, 3, 2, "valid")]);
  }

  // inception-C towers with split 1x3 / 3x1 tips
  for (let i = 0; i < 2; i++) {
    const name = `mixedC${i}`;
    const b0 = cbr(`${name}/b0`, x, 1, 1, 320, 1, "same");
    const b1 = cbr(`${name}/b1a`, x, 1, 1, 384, 1, "same");
    const b1l = cbr(`${name}/b1b`, b1, 1, 3, 384, 1, "same");
    const b1r = cbr(`${name}/b1c`, b1, 3, 1, 384, 1, "same");
    let b2 = cbr(`${name}/b2a`, x, 1, 1, 448, 1, "same");
    b2 = cbr(`${name}/b2b`, b2, 3, 3, 384, 1, "same");
    const b2l = cbr(`${name}/b2c`, b2, 1, 3, 384, 1, "same");
    const b2r = cbr(`${name}/b2d`, b2, 3, 1, 384, 1, "same");
    const b3 = cbr(`${name}/b3`, avgPool(x, 3, 1, "same"), 1, 1, 192, 1, "same");
    x = concat([b0, b1l, b1r, b2l, b2r, b3]);
  }
  return x;
}
