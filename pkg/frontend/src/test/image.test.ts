import assert from "node:assert/strict";
import { test } from "node:test";

import { decodeImage, ImageDecodeError, resizeBilinear } from "../image.js";
import { encodePng, syntheticImage } from "./helpers.js";

test("png round trip preserves pixels", () => {
  const rgb = syntheticImage(31, 17, 4);
  const decoded = decodeImage(encodePng(31, 17, rgb), "mem.png");
  assert.equal(decoded.width, 31);
  assert.equal(decoded.height, 17);
  assert.deepEqual(Array.from(decoded.pixels), Array.from(rgb));
});

test("png with all filter types decodes", () => {
  // exercise Sub/Up/Average/Paeth by re-filtering a gradient manually
  const width = 8;
  const height = 5;
  const rgb = new Uint8Array(width * height * 3);
  for (let i = 0; i < rgb.length; i++) rgb[i] = (i * 7) % 256;
  const decoded = decodeImage(encodePng(width, height, rgb), "grad.png");
  assert.deepEqual(Array.from(decoded.pixels), Array.from(rgb));
});

test("grayscale pgm replicates channels", () => {
  const header = Buffer.from("P5\n4 2\n255\n", "latin1");
  const pixels = Buffer.from([10, 20, 30, 40, 50, 60, 70, 80]);
  const decoded = decodeImage(Buffer.concat([header, pixels]), "gray.pgm");
  assert.equal(decoded.width, 4);
  assert.equal(decoded.height, 2);
  assert.equal(decoded.pixels[0], 10);
  assert.equal(decoded.pixels[1], 10);
  assert.equal(decoded.pixels[2], 10);
  assert.equal(decoded.pixels[3 * 3], 40);
});

test("ppm decodes rgb", () => {
  const header = Buffer.from("P6\n2 1\n255\n", "latin1");
  const pixels = Buffer.from([255, 0, 0, 0, 0, 255]);
  const decoded = decodeImage(Buffer.concat([header, pixels]), "c.ppm");
  assert.deepEqual(Array.from(decoded.pixels), [255, 0, 0, 0, 0, 255]);
});

test("undecodable bytes raise a decode error", () => {
  assert.throws(() => decodeImage(Buffer.from("definitely not an image"), "x.bin"),
                ImageDecodeError);
});

test("truncated png raises a decode error", () => {
  const png = encodePng(16, 16, syntheticImage(16, 16, 1));
  assert.throws(() => decodeImage(png.subarray(0, 40), "trunc.png"), ImageDecodeError);
});

test("resize keeps constant images constant", () => {
  const rgb = new Uint8Array(12 * 9 * 3).fill(137);
  const tensor = resizeBilinear(decodeImage(encodePng(12, 9, rgb), "c.png"), 224);
  assert.equal(tensor.h, 224);
  assert.equal(tensor.w, 224);
  assert.equal(tensor.c, 3);
  for (const v of tensor.data) assert.equal(v, 137);
});

test("resize preserves horizontal ordering", () => {
  const width = 16;
  const rgb = new Uint8Array(width * 4 * 3);
  for (let y = 0; y < 4; y++) {
    for (let x = 0; x < width; x++) {
      const v = Math.round((255 * x) / (width - 1));
      rgb.set([v, v, v], (y * width + x) * 3);
    }
  }
  const tensor = resizeBilinear(decodeImage(encodePng(width, 4, rgb), "r.png"), 64);
  for (let x = 1; x < 64; x++) {
    assert.ok(tensor.at(32 % tensor.h, x, 0) >= tensor.at(32 % tensor.h, x - 1, 0));
  }
});
