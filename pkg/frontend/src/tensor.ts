/**
 * Minimal HWC tensor type and the convolution-network operations the
 * backbones need. Everything is plain loops over Float32Array with
 * float64 accumulation, so results are bit-reproducible across runs.
 */

export class Tensor {
  constructor(
    public readonly h: number,
    public readonly w: number,
    public readonly c: number,
    public readonly data: Float32Array,
  ) {
    if (data.length !== h * w * c) {
      throw new Error(`tensor data length ${data.length} != ${h}x${w}x${c}`);
    }
  }

  static zeros(h: number, w: number, c: number): Tensor {
    return new Tensor(h, w, c, new Float32Array(h * w * c));
  }

  at(y: number, x: number, ch: number): number {
    return this.data[(y * this.w + x) * this.c + ch];
  }
}

export type Padding = "same" | "valid";

function outSize(size: number, kernel: number, stride: number, pad: Padding): number {
  if (pad === "same") return Math.ceil(size / stride);
  return Math.floor((size - kernel) / stride) + 1;
}

/** TF-style padding offsets: total pad split with the extra pixel at the end. */
function padBefore(size: number, kernel: number, stride: number, pad: Padding): number {
  if (pad === "valid") return 0;
  const out = Math.ceil(size / stride);
  const total = Math.max(0, (out - 1) * stride + kernel - size);
  return Math.floor(total / 2);
}

/**
 * 2-D convolution, kernel layout (kh, kw, cIn, cOut) flattened row-major.
 * Accumulates in float64 per output cell; bias optional.
 */
export function conv2d(
  input: Tensor,
  kernel: Float32Array,
  kh: number,
  kw: number,
  cOut: number,
  stride: number,
  pad: Padding,
  bias?: Float32Array,
): Tensor {
  const { h, w, c } = input;
  const oh = outSize(h, kh, stride, pad);
  const ow = outSize(w, kw, stride, pad);
  const py = padBefore(h, kh, stride, pad);
  const px = padBefore(w, kw, stride, pad);
  const out = new Float32Array(oh * ow * cOut);
  const acc = new Float64Array(cOut);
  const src = input.data;
  for (let oy = 0; oy < oh; oy++) {
    const baseY = oy * stride - py;
    for (let ox = 0; ox < ow; ox++) {
      const baseX = ox * stride - px;
      if (bias) {
        for (let m = 0; m < cOut; m++) acc[m] = bias[m];
      } else {
        acc.fill(0);
      }
      for (let ky = 0; ky < kh; ky++) {
        const y = baseY + ky;
        if (y < 0 || y >= h) continue;
        for (let kx = 0; kx < kw; kx++) {
          const x = baseX + kx;
          if (x < 0 || x >= w) continue;
          const sOff = (y * w + x) * c;
          const kOff = (ky * kw + kx) * c * cOut;
          for (let ci = 0; ci < c; ci++) {
            const v = src[sOff + ci];
            if (v === 0) continue;
            const kRow = kOff + ci * cOut;
            for (let m = 0; m < cOut; m++) {
              acc[m] += v * kernel[kRow + m];
            }
          }
        }
      }
      const oOff = (oy * ow + ox) * cOut;
      for (let m = 0; m < cOut; m++) out[oOff + m] = acc[m];
    }
  }
  return new Tensor(oh, ow, cOut, out);
}

/** Depthwise convolution, kernel layout (kh, kw, c). */
export function depthwiseConv2d(
  input: Tensor,
  kernel: Float32Array,
  kh: number,
  kw: number,
  stride: number,
  pad: Padding,
): Tensor {
  const { h, w, c } = input;
  const oh = outSize(h, kh, stride, pad);
  const ow = outSize(w, kw, stride, pad);
  const py = padBefore(h, kh, stride, pad);
  const px = padBefore(w, kw, stride, pad);
  const out = new Float32Array(oh * ow * c);
  const acc = new Float64Array(c);
  const src = input.data;
  for (let oy = 0; oy < oh; oy++) {
    const baseY = oy * stride - py;
    for (let ox = 0; ox < ow; ox++) {
      const baseX = ox * stride - px;
      acc.fill(0);
      for (let ky = 0; ky < kh; ky++) {
        const y = baseY + ky;
        if (y < 0 || y >= h) continue;
        for (let kx = 0; kx < kw; kx++) {
          const x = baseX + kx;
          if (x < 0 || x >= w) continue;
          const sOff = (y * w + x) * c;
          const kOff = (ky * kw + kx) * c;
          for (let ci = 0; ci < c; ci++) {
            acc[ci] += src[sOff + ci] * kernel[kOff + ci];
          }
        }
      }
      const oOff = (oy * ow + ox) * c;
      for (let ci = 0; ci < c; ci++) out[oOff + ci] = acc[ci];
    }
  }
  return new Tensor(oh, ow, c, out);
}

/** Inference batch norm folded to per-channel scale and shift. */
export function scaleShift(input: Tensor, scale: Float32Array, shift: Float32Array): Tensor {
  const out = new Float32Array(input.data.length);
  const c = input.c;
  for (let i = 0; i < input.data.length; i += c) {
    for (let ci = 0; ci < c; ci++) {
      out[i + ci] = input.data[i + ci] * scale[ci] + shift[ci];
    }
  }
  return new Tensor(input.h, input.w, input.c, out);
}

export function relu(input: Tensor, cap = Infinity): Tensor {
  const out = new Float32Array(input.data.length);
  for (let i = 0; i < out.length; i++) {
    const v = input.data[i];
    out[i] = v < 0 ? 0 : v > cap ? cap : v;
  }
  return new Tensor(input.h, input.w, input.c, out);
}

export function swish(input: Tensor): Tensor {
  const out = new Float32Array(input.data.length);
  for (let i = 0; i < out.length; i++) {
    const v = input.data[i];
    out[i] = v / (1 + Math.exp(-v));
  }
  return new Tensor(input.h, input.w, input.c, out);
}

export function sigmoidVec(values: Float32Array): Float32Array {
  const out = new Float32Array(values.length);
  for (let i = 0; i < values.length; i++) out[i] = 1 / (1 + Math.exp(-values[i]));
  return out;
}

export function add(a: Tensor, b: Tensor): Tensor {
  if (a.data.length !== b.data.length) {
    throw new Error(`residual add shape mismatch: ${a.h}x${a.w}x${a.c} vs ${b.h}x${b.w}x${b.c}`);
  }
  const out = new Float32Array(a.data.length);
  for (let i = 0; i < out.length; i++) out[i] = a.data[i] + b.data[i];
  return new Tensor(a.h, a.w, a.c, out);
}

export function concat(parts: Tensor[]): Tensor {
  const { h, w } = parts[0];
  let c = 0;
  for (const p of parts) {
    if (p.h !== h || p.w !== w) {
      throw new Error("concat spatial mismatch");
    }
    c += p.c;
  }
  const out = new Float32Array(h * w * c);
  for (let y = 0; y < h; y++) {
    for (let x = 0; x < w; x++) {
      let off = (y * w + x) * c;
      for (const p of parts) {
        const pOff = (y * p.w + x) * p.c;
        out.set(p.data.subarray(pOff, pOff + p.c), off);
        off += p.c;
      }
    }
  }
  return new Tensor(h, w, c, out);
}

export function maxPool(input: Tensor, k: number, stride: number, pad: Padding): Tensor {
  const { h, w, c } = input;
  const oh = outSize(h, k, stride, pad);
  const ow = outSize(w, k, stride, pad);
  const py = padBefore(h, k, stride, pad);
  const px = padBefore(w, k, stride, pad);
  const out = new Float32Array(oh * ow * c).fill(-Infinity);
  for (let oy = 0; oy < oh; oy++) {
    for (let ox = 0; ox < ow; ox++) {
      const oOff = (oy * ow + ox) * c;
      for (let ky = 0; ky < k; ky++) {
        const y = oy * stride - py + ky;
        if (y < 0 || y >= h) continue;
        for (let kx = 0; kx < k; kx++) {
          const x = ox * stride - px + kx;
          if (x < 0 || x >= w) continue;
          const sOff = (y * w + x) * c;
          for (let ci = 0; ci < c; ci++) {
            const v = input.data[sOff + ci];
            if (v > out[oOff + ci]) out[oOff + ci] = v;
          }
        }
      }
    }
  }
  return new Tensor(oh, ow, c, out);
}

/** Average pool; padded cells are excluded from the mean (TF "same" rule). */
export function avgPool(input: Tensor, k: number, stride: number, pad: Padding): Tensor {
  const { h, w, c } = input;
  const oh = outSize(h, k, stride, pad);
  const ow = outSize(w, k, stride, pad);
  const py = padBefore(h, k, stride, pad);
  const px = padBefore(w, k, stride, pad);
  const out = new Float32Array(oh * ow * c);
  const acc = new Float64Array(c);
  for (let oy = 0; oy < oh; oy++) {
    for (let ox = 0; ox < ow; ox++) {
      acc.fill(0);
      let count = 0;
      for (let ky = 0; ky < k; ky++) {
        const y = oy * stride - py + ky;
        if (y < 0 || y >= h) continue;
        for (let kx = 0; kx < k; kx++) {
          const x = ox * stride - px + kx;
          if (x < 0 || x >= w) continue;
          count++;
          const sOff = (y * w + x) * c;
          for (let ci = 0; ci < c; ci++) acc[ci] += input.data[sOff + ci];
        }
      }
      const oOff = (oy * ow + ox) * c;
      for (let ci = 0; ci < c; ci++) out[oOff + ci] = acc[ci] / count;
    }
  }
  return new Tensor(oh, ow, c, out);
}

/** Global average pooling over the spatial grid: the feature vector. */
export function globalAvgPool(input: Tensor): Float32Array {
  const { h, w, c } = input;
  const acc = new Float64Array(c);
  for (let i = 0; i < input.data.length; i += c) {
    for (let ci = 0; ci < c; ci++) acc[ci] += input.data[i + ci];
  }
  const out = new Float32Array(c);
  const n = h * w;
  for (let ci = 0; ci < c; ci++) out[ci] = acc[ci] / n;
  return out;
}

/** Channel-wise multiply by a per-channel gate (squeeze-excite). */
export function channelScale(input: Tensor, gate: Float32Array): Tensor {
  const out = new Float32Array(input.data.length);
  const c = input.c;
  for (let i = 0; i < input.data.length; i += c) {
    for (let ci = 0; ci < c; ci++) out[i + ci] = input.data[i + ci] * gate[ci];
  }
  return new Tensor(input.h, input.w, input.c, out);
}
