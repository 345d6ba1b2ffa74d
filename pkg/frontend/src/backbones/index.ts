import { Tensor, globalAvgPool } from "../tensor.js";
import { WeightSource } from "../weights.js";
import { denseNet121, denseNet169, denseNet201 } from "./densenet.js";
import { efficientNetB0 } from "./efficientnet.js";
import { inceptionV3 } from "./inception.js";
import { inceptionResNetV2 } from "./inceptionresnet.js";
import { mobileNet, mobileNetV2 } from "./mobilenet.js";
import { nasNetMobile } from "./nasnet.js";
import { resNet101V2, resNet152, resNet152V2, resNet50, resNet50V2 } from "./resnet.js";
import { vgg16, vgg19 } from "./vgg.js";
import { xception } from "./xception.js";

export type PreprocessingId = "caffe" | "tf" | "torch";

export interface BackboneSpec {
  name: string;
  /** Width of the pooled feature vector; fixed by the architecture. */
  featureCount: number;
  /** Canonical published input transform family. */
  preprocessing: PreprocessingId;
  build: (ws: WeightSource, input: Tensor) => Tensor;
}

/** The supported extractor backbones; DenseNet169 is the default. */
export const DEFAULT_BACKBONE = "DenseNet169";

const SPECS: BackboneSpec[] = [
  { name: "Xception", featureCount: 2048, preprocessing: "tf", build: xception },
  { name: "VGG16", featureCount: 512, preprocessing: "caffe", build: vgg16 },
  { name: "VGG19", featureCount: 512, preprocessing: "caffe", build: vgg19 },
  { name: "ResNet50", featureCount: 2048, preprocessing: "caffe", build: resNet50 },
  { name: "ResNet152", featureCount: 2048, preprocessing: "caffe", build: resNet152 },
  { name: "ResNet50V2", featureCount: 2048, preprocessing: "tf", build: resNet50V2 },
  { name: "ResNet101V2", featureCount: 2048, preprocessing: "tf", build: resNet101V2 },
  { name: "ResNet152V2", featureCount: 2048, preprocessing: "tf", build: resNet152V2 },
  { name: "InceptionV3", featureCount: 2048, preprocessing: "tf", build: inceptionV3 },
  { name: "InceptionResNetV2", featureCount: 1536, preprocessing: "tf", build: inceptionResNetV2 },
  { name: "MobileNet", featureCount: 1024, preprocessing: "tf", build: mobileNet },
  { name: "MobileNetV2", featureCount: 1280, preprocessing: "tf", build: mobileNetV2 },
  { name: "DenseNet121", featureCount: 1024, preprocessing: "torch", build: denseNet121 },
  { name: "DenseNet169", featureCount: 1664, preprocessing: "torch", build: denseNet169 },
  { name: "DenseNet201", featureCount: 1920, preprocessing: "torch", build: denseNet201 },
  { name: "NASNetMobile", featureCount: 1056, preprocessing: "tf", build: nasNetMobile },
  { name: "EfficientNetB0", featureCount: 1280, preprocessing: "torch", build: efficientNetB0 },
];

const BY_NAME = new Map(SPECS.map((s) => [s.name.toLowerCase(), s]));

export function listBackbones(): string[] {
  return SPECS.map((s) => s.name);
}

export function getBackbone(name: string): BackboneSpec {
  const spec = BY_NAME.get(name.toLowerCase());
  if (!spec) {
    throw new Error(
      `unknown backbone ${JSON.stringify(name)}; available: ${listBackbones().join(", ")}`,
    );
  }
  return spec;
}

/** Headless forward pass: backbone body then global average pooling. */
export function extractFeatures(spec: BackboneSpec, input: Tensor): Float32Array {
  const ws = new WeightSource(spec.name);
  const featureMap = spec.build(ws, input);
  const pooled = globalAvgPool(featureMap);
  if (pooled.length !== spec.featureCount) {
    throw new Error(
      `${spec.name} produced ${pooled.length} features, expected ${spec.featureCount}`,
    );
  }
  return pooled;
}
