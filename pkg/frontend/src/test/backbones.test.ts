import assert from "node:assert/strict";
import { test } from "node:test";

import { extractFeatures, getBackbone, listBackbones, DEFAULT_BACKBONE } from "../backbones/index.js";
import { Tensor } from "../tensor.js";

const TABLE_NAMES = [
  "Xception", "VGG16", "VGG19", "ResNet50", "ResNet152", "ResNet50V2",
  "ResNet101V2", "ResNet152V2", "InceptionV3", "InceptionResNetV2",
  "MobileNet", "MobileNetV2", "DenseNet121", "DenseNet169", "DenseNet201",
  "NASNetMobile", "EfficientNetB0",
];

function randomInput(size: number, seed: number): Tensor {
  const data = new Float32Array(size * size * 3);
  let state = seed >>> 0;
  for (let i = 0; i < data.length; i++) {
    state = (Math.imul(state, 1664525) + 1013904223) >>> 0;
    data[i] = state / 2147483648 - 1;
  }
  return new Tensor(size, size, 3, data);
}

test("seventeen backbones are listed, unique, with the default present", () => {
  const names = listBackbones();
  assert.equal(names.length, 17);
  assert.equal(new Set(names).size, 17);
  assert.deepEqual(names, TABLE_NAMES);
  assert.ok(names.includes(DEFAULT_BACKBONE));
});

test("unknown backbone error lists the alternatives", () => {
  assert.throws(() => getBackbone("AlexNet"), /available: Xception.*DenseNet169/);
});

test("backbone lookup is case-insensitive", () => {
  assert.equal(getBackbone("densenet169").name, "DenseNet169");
});

test("densenet169 yields exactly 1664 finite features at 224x224", () => {
  const features = extractFeatures(getBackbone("DenseNet169"), randomInput(224, 7));
  assert.equal(features.length, 1664);
  for (const v of features) assert.ok(Number.isFinite(v));
});

test("feature width depends only on the backbone, never the content", () => {
  // run each architecture on two different small inputs; the pooled
  // width must equal the published head width both times
  for (const name of TABLE_NAMES) {
    const spec = getBackbone(name);
    const a = extractFeatures(spec, randomInput(96, 11));
    const b = extractFeatures(spec, randomInput(96, 99));
    assert.equal(a.length, spec.featureCount, name);
    assert.equal(b.length, spec.featureCount, name);
    for (const v of a) assert.ok(Number.isFinite(v), `${name}: non-finite feature`);
    assert.notDeepEqual(Array.from(a), Array.from(b), `${name}: content-blind`);
  }
});

test("extraction is deterministic across calls", () => {
  const input = randomInput(96, 5);
  const first = extractFeatures(getBackbone("DenseNet121"), input);
  const second = extractFeatures(getBackbone("DenseNet121"), input);
  assert.deepEqual(Array.from(first), Array.from(second));
});
