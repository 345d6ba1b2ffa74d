import { Tensor, add, avgPool, concat, maxPool, relu } from "../tensor.js";
import { WeightSource } from "../weights.js";
import { Net } from "./common.js";

/**
 * NASNet-A (4 @ 1056) mobile variant. Cells follow the published A-cell
 * wiring: normal cells concatenate six branches of `filters` channels,
 * reduction cells four, and the previous cell's output is adjusted by a
 * factorized reduction whenever spatial sizes or widths disagree.
 */
export function nasNetMobile(ws: WeightSource, input: Tensor): Tensor {
  const net = new Net(ws);
  let counter = 0;
  const uid = () => `cell${counter++}`;

  // doubled separable conv: relu-sepconv-bn twice, stride on the first
  function sep(name: string, x: Tensor, k: number, filters: number, stride: number): Tensor {
    let y = relu(x);
    y = net.separableBn(`${name}/s1`, y, k, filters, stride, "same");
    y = relu(y);
    y = net.separableBn(`${name}/s2`, y, k, filters, 1, "same");
    return y;
  }

  // bring the previous cell's output to the current spatial size / width
  function adjust(name: string, p: Tensor | null, ref: Tensor, filters: number): Tensor {
    if (p === null) return ref;
    if (p.h !== ref.h) {
      // factorized reduction: two offset stride-2 average-pool paths
      const pr = relu(p);
      const a = net.conv(`${name}/fr_a`, avgPool(pr, 1, 2, "valid"), 1,
                         Math.ceil(filters / 2), 1, "same");
      const b = net.conv(`${name}/fr_b`, avgPool(shiftPad(pr), 1, 2, "valid"), 1,
                         Math.floor(filters / 2), 1, "same");
      return net.bn(`${name}/fr_bn`, concat([a, b]));
    }
    if (p.c !== filters) {
      return net.bn(`${name}/proj_bn`,
                    net.conv(`${name}/proj`, relu(p), 1, filters, 1, "same"));
    }
    return p;
  }

  function normalCell(p0: Tensor | null, ip: Tensor, filters: number): Tensor {
    const name = uid();
    const p = adjust(`${name}/adj`, p0, ip, filters);
    const h = net.bn(`${name}/sq_bn`,
                     net.conv(`${name}/sq`, relu(ip), 1, filters, 1, "same"));
    const x1 = add(sep(`${name}/b1l`, h, 5, filters, 1), sep(`${name}/b1r`, p, 3, filters, 1));
    const x2 = add(sep(`${name}/b2l`, p, 5, filters, 1), sep(`${name}/b2r`, p, 3, filters, 1));
    const x3 = add(avgPool(h, 3, 1, "same"), p);
    const x4 = add(avgPool(p, 3, 1, "same"), avgPool(p, 3, 1, "same"));
    const x5 = add(sep(`${name}/b5`, h, 3, filters, 1), h);
    return concat([p, x1, x2, x3, x4, x5]);
  }

  function reductionCell(p0: Tensor | null, ip: Tensor, filters: number): Tensor {
    const name = uid();
    const p = adjust(`${name}/adj`, p0, ip, filters);
    const h = net.bn(`${name}/sq_bn`,
                     net.conv(`${name}/sq`, relu(ip), 1, filters, 1, "same"));
    const x1 = add(sep(`${name}/b1l`, h, 5, filters, 2), sep(`${name}/b1r`, p, 7, filters, 2));
    const x2 = add(maxPool(h, 3, 2, "same"), sep(`${name}/b2r`, p, 7, filters, 2));
    const x3 = add(avgPool(h, 3, 2, "same"), sep(`${name}/b3r`, p, 5, filters, 2));
    const x4 = add(avgPool(x1, 3, 1, "same"), x2);
    const x5 = add(sep(`${name}/b5l`, x1, 3, filters, 1), maxPool(h, 3, 2, "same"));
    return concat([x2, x3, x4, x5]);
  }

  const penultimate = 1056;
  const filters = penultimate / 24; // 44

  let x = net.bn("stem/bn", net.conv("stem/conv", input, 3, 32, 2, "valid"));
  let prev: Tensor | null = null;
  let cur = x;

  // two stem reduction cells at reduced widths
  let next = reductionCell(prev, cur, Math.floor(filters / 4));
  prev = cur; cur = next;
  next = reductionCell(prev, cur, Math.floor(filters / 2));
  prev = cur; cur = next;

  for (const mult of [1, 2, 4]) {
    const f = filters * mult;
    if (mult > 1) {
      next = reductionCell(prev, cur, f);
      prev = cur; cur = next;
    }
    for (let i = 0; i < 4; i++) {
      next = normalCell(prev, cur, f);
      prev = cur; cur = next;
    }
  }
  return relu(cur);
}

/** Shift the grid one pixel up-left, zero-filling the far edge, so the
 * second reduction path pools an offset grid of the SAME size. */
function shiftPad(p: Tensor): Tensor {
  const out = new Float32Array(p.data.length);
  for (let y = 0; y < p.h - 1; y++) {
    for (let x = 0; x < p.w - 1; x++) {
      const src = ((y + 1) * p.w + (x + 1)) * p.c;
      out.set(p.data.subarray(src, src + p.c), (y * p.w + x) * p.c);
    }
  }
  return new Tensor(p.h, p.w, p.c, out);
}
