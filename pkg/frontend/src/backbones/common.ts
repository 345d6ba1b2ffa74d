import {
  Padding,
  Tensor,
  conv2d,
  depthwiseConv2d,
  globalAvgPool,
  relu,
  scaleShift,
  sigmoidVec,
  swish,
  channelScale,
} from "../tensor.js";
import { WeightSource } from "../weights.js";

/** Convenience wrapper tying layer construction to a weight source. */
export class Net {
  constructor(private readonly ws: WeightSource) {}

  conv(
    name: string,
    x: Tensor,
    k: number,
    cOut: number,
    stride: number,
    pad: Padding,
    withBias = false,
  ): Tensor {
    const kernel = this.ws.convKernel(name, k, k, x.c, cOut);
    const bias = withBias ? this.ws.bias(`${name}/bias`, cOut) : undefined;
    return conv2d(x, kernel, k, k, cOut, stride, pad, bias);
  }

  /** Rectangular convolution (Inception towers use 1x7 / 7x1 factors). */
  convRect(
    name: string,
    x: Tensor,
    kh: number,
    kw: number,
    cOut: number,
    stride: number,
    pad: Padding,
  ): Tensor {
    const kernel = this.ws.convKernel(name, kh, kw, x.c, cOut);
    return conv2d(x, kernel, kh, kw, cOut, stride, pad);
  }

  bn(name: string, x: Tensor): Tensor {
    const { scale, shift } = this.ws.batchNorm(name, x.c);
    return scaleShift(x, scale, shift);
  }

  bnRelu(name: string, x: Tensor): Tensor {
    return relu(this.bn(name, x));
  }

  convBn(name: string, x: Tensor, k: number, cOut: number, stride: number, pad: Padding): Tensor {
    return this.bn(`${name}/bn`, this.conv(name, x, k, cOut, stride, pad));
  }

  convBnRelu(name: string, x: Tensor, k: number, cOut: number, stride: number, pad: Padding): Tensor {
    return relu(this.convBn(name, x, k, cOut, stride, pad));
  }

  convBnSwish(name: string, x: Tensor, k: number, cOut: number, stride: number, pad: Padding): Tensor {
    return swish(this.convBn(name, x, k, cOut, stride, pad));
  }

  depthwise(name: string, x: Tensor, k: number, stride: number, pad: Padding): Tensor {
    const kernel = this.ws.depthwiseKernel(name, k, k, x.c);
    return depthwiseConv2d(x, kernel, k, k, stride, pad);
  }

  depthwiseBn(name: string, x: Tensor, k: number, stride: number, pad: Padding): Tensor {
    return this.bn(`${name}/bn`, this.depthwise(name, x, k, stride, pad));
  }

  /** Xception-style separable conv: depthwise then 1x1 pointwise. */
  separable(name: string, x: Tensor, k: number, cOut: number, stride: number, pad: Padding): Tensor {
    const dw = this.depthwise(`${name}/dw`, x, k, stride, pad);
    return this.conv(`${name}/pw`, dw, 1, cOut, 1, "same");
  }

  separableBn(name: string, x: Tensor, k: number, cOut: number, stride: number, pad: Padding): Tensor {
    return this.bn(`${name}/bn`, this.separable(name, x, k, cOut, stride, pad));
  }

  /** Squeeze-and-excite gate on the channel means. */
  squeezeExcite(name: string, x: Tensor, reduced: number): Tensor {
    const pooled = globalAvgPool(x);
    const w1 = this.ws.convKernel(`${name}/reduce`, 1, 1, x.c, reduced);
    const b1 = this.ws.bias(`${name}/reduce/bias`, reduced);
    const mid = new Float32Array(reduced);
    for (let m = 0; m < reduced; m++) {
      let acc = b1[m];
      for (let ci = 0; ci < x.c; ci++) acc += pooled[ci] * w1[ci * reduced + m];
      const v = acc;
      mid[m] = v / (1 + Math.exp(-v)); // swish
    }
    const w2 = this.ws.convKernel(`${name}/expand`, 1, 1, reduced, x.c);
    const b2 = this.ws.bias(`${name}/expand/bias`, x.c);
    const gateRaw = new Float32Array(x.c);
    for (let m = 0; m < x.c; m++) {
      let acc = b2[m];
      for (let ci = 0; ci < reduced; ci++) acc += mid[ci] * w2[ci * x.c + m];
      gateRaw[m] = acc;
    }
    return channelScale(x, sigmoidVec(gateRaw));
  }
}
