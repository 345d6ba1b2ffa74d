import { Tensor, avgPool, concat, maxPool, relu } from "../tensor.js";
import { WeightSource } from "../weights.js";
import { Net } from "./common.js";

function residualScale(x: Tensor, up: Tensor, scale: number): Tensor {
  const out = new Float32Array(x.data.length);
  for (let i = 0; i < out.length; i++) out[i] = x.data[i] + scale * up.data[i];
  return new Tensor(x.h, x.w, x.c, out);
}

/** Inception towers with scaled residual shortcuts; final map 1536. */
export function inceptionResNetV2(ws: WeightSource, input: Tensor): Tensor {
  const net = new Net(ws);
  const cbr = (name: string, x: Tensor, kh: number, kw: number, cOut: number,
               stride = 1, pad: "same" | "valid" = "same") =>
    relu(net.bn(`${name}/bn`, net.convRect(name, x, kh, kw, cOut, stride, pad)));

  let x = cbr("stem/c0", input, 3, 3, 32, 2, "valid");
  x = cbr("stem/c1", x, 3, 3, 32, 1, "valid");
  x = cbr("stem/c2", x, 3, 3, 64);
  x = maxPool(x, 3, 2, "valid");
  x = cbr("stem/c3", x, 1, 1, 80, 1, "valid");
  x = cbr("stem/c4", x, 3, 3, 192, 1, "valid");
  x = maxPool(x, 3, 2, "valid");

  // mixed 5b: plain inception tower -> 320 channels
  {
    const b0 = cbr("m5b/b0", x, 1, 1, 96);
    let b1 = cbr("m5b/b1a", x, 1, 1, 48);
    b1 = cbr("m5b/b1b", b1, 5, 5, 64);
    let b2 = cbr("m5b/b2a", x, 1, 1, 64);
    b2 = cbr("m5b/b2b", b2, 3, 3, 96);
    b2 = cbr("m5b/b2c", b2, 3, 3, 96);
    const b3 = cbr("m5b/b3", avgPool(x, 3, 1, "same"), 1, 1, 64);
    x = concat([b0, b1, b2, b3]);
  }

  for (let i = 0; i < 10; i++) {  // block35, scale 0.17
    const name = `b35_${i}`;
    const b0 = cbr(`${name}/b0`, x, 1, 1, 32);
    let b1 = cbr(`${name}/b1a`, x, 1, 1, 32);
    b1 = cbr(`${name}/b1b`, b1, 3, 3, 32);
    let b2 = cbr(`${name}/b2a`, x, 1, 1, 32);
    b2 = cbr(`${name}/b2b`, b2, 3, 3, 48);
    b2 = cbr(`${name}/b2c`, b2, 3, 3, 64);
    const up = net.conv(`${name}/up`, concat([b0, b1, b2]), 1, x.c, 1, "same", true);
    x = relu(residualScale(x, up, 0.17));
  }

  {  // reduction to 17x17x1088
    const b0 = cbr("redA/b0", x, 3, 3, 384, 2, "valid");
    let b1 = cbr("redA/b1a", x, 1, 1, 256);
    b1 = cbr("redA/b1b", b1, 3, 3, 256);
    b1 = cbr("redA/b1c", b1, 3, 3, 384, 2, "valid");
    x = concat([b0, b1, maxPool(x, 3, 2, "valid")]);
  }

  for (let i = 0; i < 20; i++) {  // block17, scale 0.10
    const name = `b17_${i}`;
    const b0 = cbr(`${name}/b0`, x, 1, 1, 192);
    let b1 = cbr(`${name}/b1a`, x, 1, 1, 128);
    b1 = cbr(`${name}/b1b`, b1, 1, 7, 160);
    b1 = cbr(`${name}/b1c`, b1, 7, 1, 192);
    const up = net.conv(`${name}/up`, concat([b0, b1]), 1, x.c, 1, "same", true);
    x = relu(residualScale(x, up, 0.1));
  }

  {  // reduction to 8x8x2080
    let b0 = cbr("redB/b0a", x, 1, 1, 256);
    b0 = cbr("redB/b0b", b0, 3, 3, 384, 2, "valid");
    let b1 = cbr("redB/b1a", x, 1, 1, 256);
    b1 = cbr("redB/b1b", b1, 3, 3, 288, 2, "valid");
    let b2 = cbr("redB/b2a", x, 1, 1, 256);
    b2 = cbr("redB/b2b", b2, 3, 3, 288);
    b2 = cbr("redB/b2c", b2, 3, 3, 320, 2, "valid");
    x = concat([b0, b1, b2, maxPool(x, 3, 2, "valid")]);
  }

  for (let i = 0; i < 10; i++) {  // block8, scale 0.20; last block unactivated
    const name = `b8_${i}`;
    const b0 = cbr(`${name}/b0`, x, 1, 1, 192);
    let b1 = cbr(`${name}/b1a`, x, 1, 1, 192);
    b1 = cbr(`${name}/b1b`, b1, 1, 3, 224);
    b1 = cbr(`${name}/b1c`, b1, 3, 1, 256);
    const up = net.conv(`${name}/up`, concat([b0, b1]), 1, x.c, 1, "same", true);
    const last = i === 9;
    x = residualScale(x, up, last ? 1.0 : 0.2);
    if (!last) x = relu(x);
  }

  return cbr("conv7b", x, 1, 1, 1536);
}
