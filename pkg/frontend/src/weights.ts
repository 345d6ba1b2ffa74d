/**
 * Deterministic weight generation. Every layer draws from a PRNG seeded
 * by (backbone name, layer name), so extraction is reproducible byte for
 * byte across runs and machines, and independent of layer build order.
 *
 * Distribution is He-normal scaled by fan-in, which keeps activation
 * magnitudes stable through very deep stacks.
 */

function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193);
  }
  return hash >>> 0;
}

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export class WeightSource {
  constructor(private readonly modelKey: string) {}

  private generator(layer: string): () => number {
    return mulberry32(fnv1a(`${this.modelKey}/${layer}`));
  }

  /** He-normal tensor of the given element count and fan-in. */
  heNormal(layer: string, count: number, fanIn: number): Float32Array {
    const rand = this.generator(layer);
    const std = Math.sqrt(2 / Math.max(1, fanIn));
    const out = new Float32Array(count);
    for (let i = 0; i < count; i += 2) {
      // Box-Muller; u in (0, 1]
      const u = 1 - rand();
      const v = rand();
      const r = Math.sqrt(-2 * Math.log(u)) * std;
      out[i] = r * Math.cos(2 * Math.PI * v);
      if (i + 1 < count) out[i + 1] = r * Math.sin(2 * Math.PI * v);
    }
    return out;
  }

  convKernel(layer: string, kh: number, kw: number, cIn: number, cOut: number): Float32Array {
    return this.heNormal(layer, kh * kw * cIn * cOut, kh * kw * cIn);
  }

  depthwiseKernel(layer: string, kh: number, kw: number, c: number): Float32Array {
    return this.heNormal(layer, kh * kw * c, kh * kw);
  }

  /** Inference batch norm folded to identity-like scale/shift. */
  batchNorm(layer: string, c: number): { scale: Float32Array; shift: Float32Array } {
    const rand = this.generator(layer);
    const scale = new Float32Array(c);
    const shift = new Float32Array(c);
    for (let i = 0; i < c; i++) {
      scale[i] = 1 + 0.02 * (rand() - 0.5);
      shift[i] = 0.02 * (rand() - 0.5);
    }
    return { scale, shift };
  }

  bias(layer: string, c: number): Float32Array {
    return new Float32Array(c); // zero biases
  }
}
