import { PreprocessingId } from "./backbones/index.js";
import { Tensor } from "./tensor.js";

/**
 * Canonical published input transforms, applied to 0..255 RGB tensors:
 *  - caffe: convert to BGR and subtract the ImageNet channel means
 *  - tf:    scale to [-1, 1]
 *  - torch: scale to [0, 1], then normalize by ImageNet mean/std
 */
export function preprocess(input: Tensor, id: PreprocessingId): Tensor {
  const out = new Float32Array(input.data.length);
  const n = input.h * input.w;
  if (id === "caffe") {
    const mean = [103.939, 116.779, 123.68]; // BGR order
    for (let p = 0; p < n; p++) {
      const r = input.data[p * 3];
      const g = input.data[p * 3 + 1];
      const b = input.data[p * 3 + 2];
      out[p * 3] = b - mean[0];
      out[p * 3 + 1] = g - mean[1];
      out[p * 3 + 2] = r - mean[2];
    }
  } else if (id === "tf") {
    for (let i = 0; i < out.length; i++) {
      out[i] = input.data[i] / 127.5 - 1;
    }
  } else {
    const mean = [0.485, 0.456, 0.406];
    const std = [0.229, 0.224, 0.225];
    for (let p = 0; p < n; p++) {
      for (let ch = 0; ch < 3; ch++) {
        out[p * 3 + ch] = (input.data[p * 3 + ch] / 255 - mean[ch]) / std[ch];
      }
    }
  }
  return new Tensor(input.h, input.w, input.c, out);
}
