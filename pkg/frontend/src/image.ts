/**
 * Image decoding and geometry. PNG (all standard filter types, 8/16-bit,
 * gray/palette/RGB/alpha, non-interlaced) and binary PGM/PPM are decoded
 * in-package on top of node's zlib; grayscale sources are replicated to
 * three channels, and everything is bilinearly resized to the backbone
 * input grid.
 */

import { inflateSync } from "node:zlib";
import { Tensor } from "./tensor.js";

export interface DecodedImage {
  width: number;
  height: number;
  /** RGB, row-major, 0..255. */
  pixels: Uint8Array;
}

export class ImageDecodeError extends Error {}

const PNG_SIGNATURE = [0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a];

export function decodeImage(buffer: Buffer, fileName: string): DecodedImage {
  if (PNG_SIGNATURE.every((b, i) => buffer[i] === b)) {
    return decodePng(buffer, fileName);
  }
  const magic = buffer.subarray(0, 2).toString("latin1");
  if (magic === "P5" || magic === "P6") {
    return decodePnm(buffer, fileName);
  }
  throw new ImageDecodeError(`${fileName}: not a PNG or binary PGM/PPM file`);
}

function decodePng(buffer: Buffer, fileName: string): DecodedImage {
  let offset = 8;
  let width = 0;
  let height = 0;
  let bitDepth = 0;
  let colorType = 0;
  let palette: Uint8Array | null = null;
  const idat: Buffer[] = [];
  while (offset + 8 <= buffer.length) {
    const length = buffer.readUInt32BE(offset);
    const type = buffer.subarray(offset + 4, offset + 8).toString("latin1");
    const data = buffer.subarray(offset + 8, offset + 8 + length);
    offset += 12 + length;
    if (type === "IHDR") {
      width = data.readUInt32BE(0);
      height = data.readUInt32BE(4);
      bitDepth = data[8];
      colorType = data[9];
      if (data[12] !== 0) {
        throw new ImageDecodeError(`${fileName}: interlaced PNG is not supported`);
      }
      if (bitDepth !== 8 && bitDepth !== 16) {
        throw new ImageDecodeError(`${fileName}: unsupported PNG bit depth ${bitDepth}`);
      }
    } else if (type === "PLTE") {
      palette = new Uint8Array(data);
    } else if (type === "IDAT") {
      idat.push(Buffer.from(data));
    } else if (type === "IEND") {
      break;
    }
  }
  if (!width || !height) throw new ImageDecodeError(`${fileName}: missing IHDR`);
  if (!idat.length) throw new ImageDecodeError(`${fileName}: no pixel data`);

  let raw: Buffer;
  try {
    raw = inflateSync(Buffer.concat(idat));
  } catch {
    throw new ImageDecodeError(`${fileName}: corrupt PNG pixel stream`);
  }

  const channels = { 0: 1, 2: 3, 3: 1, 4: 2, 6: 4 }[colorType];
  if (channels === undefined) {
    throw new ImageDecodeError(`${fileName}: unsupported PNG color type ${colorType}`);
  }
  const sampleBytes = bitDepth / 8;
  const bpp = channels * sampleBytes;
  const stride = width * bpp;
  if (raw.length < height * (stride + 1)) {
    throw new ImageDecodeError(`${fileName}: truncated PNG pixel stream`);
  }

  // undo per-scanline filters in place
  const lines = new Uint8Array(height * stride);
  for (let y = 0; y < height; y++) {
    const filter = raw[y * (stride + 1)];
    const src = raw.subarray(y * (stride + 1) + 1, (y + 1) * (stride + 1));
    const row = lines.subarray(y * stride, (y + 1) * stride);
    const above = y > 0 ? lines.subarray((y - 1) * stride, y * stride) : null;
    for (let i = 0; i < stride; i++) {
      const left = i >= bpp ? row[i - bpp] : 0;
      const up = above ? above[i] : 0;
      const upLeft = above && i >= bpp ? above[i - bpp] : 0;
      let value = src[i];
      switch (filter) {
        case 0: break;
        case 1: value += left; break;
        case 2: value += up; break;
        case 3: value += (left + up) >> 1; break;
        case 4: value += paeth(left, up, upLeft); break;
        default:
          throw new ImageDecodeError(`${fileName}: bad PNG filter ${filter}`);
      }
      row[i] = value & 0xff;
    }
  }

  const pixels = new Uint8Array(width * height * 3);
  for (let p = 0; p < width * height; p++) {
    const at = (ch: number) => lines[p * bpp + ch * sampleBytes]; // high byte for 16-bit
    let r: number, g: number, b: number;
    if (colorType === 0 || colorType === 4) {
      r = g = b = at(0);
    } else if (colorType === 3) {
      if (!palette) throw new ImageDecodeError(`${fileName}: palette PNG missing PLTE`);
      const idx = lines[p * bpp] * 3;
      r = palette[idx];
      g = palette[idx + 1];
      b = palette[idx + 2];
    } else {
      r = at(0);
      g = at(1);
      b = at(2);
    }
    pixels[p * 3] = r;
    pixels[p * 3 + 1] = g;
    pixels[p * 3 + 2] = b;
  }
  return { width, height, pixels };
}

function paeth(a: number, b: number, c: number): number {
  const p = a + b - c;
  const pa = Math.abs(p - a);
  const pb = Math.abs(p - b);
  const pc = Math.abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

function decodePnm(buffer: Buffer, fileName: string): DecodedImage {
  const rgb = buffer[1] === 0x36; // P6
  let pos = 2;
  const fields: number[] = [];
  while (fields.length < 3 && pos < buffer.length) {
    const ch = String.fromCharCode(buffer[pos]);
    if (ch === "#") {
      while (pos < buffer.length && buffer[pos] !== 0x0a) pos++;
      pos++;
    } else if (/\s/.test(ch)) {
      pos++;
    } else {
      let token = "";
      while (pos < buffer.length && !/\s/.test(String.fromCharCode(buffer[pos]))) {
        token += String.fromCharCode(buffer[pos]);
        pos++;
      }
      const value = Number(token);
      if (!Number.isFinite(value)) {
        throw new ImageDecodeError(`${fileName}: bad PNM header token ${token}`);
      }
      fields.push(value);
    }
  }
  pos++; // single whitespace after maxval
  const [width, height, maxval] = fields;
  if (!width || !height || !maxval) {
    throw new ImageDecodeError(`${fileName}: incomplete PNM header`);
  }
  const perSample = maxval > 255 ? 2 : 1;
  const samples = width * height * (rgb ? 3 : 1);
  if (buffer.length < pos + samples * perSample) {
    throw new ImageDecodeError(`${fileName}: truncated PNM pixel data`);
  }
  const pixels = new Uint8Array(width * height * 3);
  for (let p = 0; p < width * height; p++) {
    const base = pos + p * (rgb ? 3 : 1) * perSample;
    const read = (i: number) =>
      perSample === 2 ? buffer[base + i * 2] : buffer[base + i];
    const r = read(0);
    const g = rgb ? read(1) : r;
    const b = rgb ? read(2) : r;
    pixels[p * 3] = r;
    pixels[p * 3 + 1] = g;
    pixels[p * 3 + 2] = b;
  }
  return { width, height, pixels };
}

/** Bilinear resize with half-pixel centers onto a size x size RGB grid. */
export function resizeBilinear(image: DecodedImage, size: number): Tensor {
  const out = new Float32Array(size * size * 3);
  const scaleY = image.height / size;
  const scaleX = image.width / size;
  for (let oy = 0; oy < size; oy++) {
    const sy = Math.min(Math.max((oy + 0.5) * scaleY - 0.5, 0), image.height - 1);
    const y0 = Math.floor(sy);
    const y1 = Math.min(y0 + 1, image.height - 1);
    const fy = sy - y0;
    for (let ox = 0; ox < size; ox++) {
      const sx = Math.min(Math.max((ox + 0.5) * scaleX - 0.5, 0), image.width - 1);
      const x0 = Math.floor(sx);
      const x1 = Math.min(x0 + 1, image.width - 1);
      const fx = sx - x0;
      for (let ch = 0; ch < 3; ch++) {
        const v00 = image.pixels[(y0 * image.width + x0) * 3 + ch];
        const v01 = image.pixels[(y0 * image.width + x1) * 3 + ch];
        const v10 = image.pixels[(y1 * image.width + x0) * 3 + ch];
        const v11 = image.pixels[(y1 * image.width + x1) * 3 + ch];
        const top = v00 + (v01 - v00) * fx;
        const bottom = v10 + (v11 - v10) * fx;
        out[(oy * size + ox) * 3 + ch] = top + (bottom - top) * fy;
      }
    }
  }
  return new Tensor(size, size, 3, out);
}
