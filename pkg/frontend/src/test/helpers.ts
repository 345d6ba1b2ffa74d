/** Test utilities: a minimal valid PNG encoder and temp-dir helpers. */

import { mkdirSync, mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { deflateSync } from "node:zlib";

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(data: Buffer): number {
  let crc = 0xffffffff;
  for (const byte of data) {
    crc = CRC_TABLE[(crc ^ byte) & 0xff] ^ (crc >>> 8);
  }
  return (crc ^ 0xffffffff) >>> 0;
}

function chunk(type: string, data: Buffer): Buffer {
  const head = Buffer.alloc(4);
  head.writeUInt32BE(data.length);
  const body = Buffer.concat([Buffer.from(type, "latin1"), data]);
  const crc = Buffer.alloc(4);
  crc.writeUInt32BE(crc32(body));
  return Buffer.concat([head, body, crc]);
}

/** Encode 8-bit RGB pixels as a valid non-interlaced PNG. */
export function encodePng(width: number, height: number, rgb: Uint8Array): Buffer {
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(width, 0);
  ihdr.writeUInt32BE(height, 4);
  ihdr[8] = 8;  // bit depth
  ihdr[9] = 2;  // color type: RGB
  const stride = width * 3;
  const raw = Buffer.alloc(height * (stride + 1));
  for (let y = 0; y < height; y++) {
    raw[y * (stride + 1)] = 0; // filter: none
    raw.set(rgb.subarray(y * stride, (y + 1) * stride), y * (stride + 1) + 1);
  }
  return Buffer.concat([
    Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    chunk("IHDR", ihdr),
    chunk("IDAT", deflateSync(raw)),
    chunk("IEND", Buffer.alloc(0)),
  ]);
}

/** Deterministic synthetic X-ray-like image: soft radial ramp + bands. */
export function syntheticImage(width: number, height: number, seed: number): Uint8Array {
  const rgb = new Uint8Array(width * height * 3);
  for (let y = 0; y < height; y++) {
    for (let x = 0; x < width; x++) {
      const dx = x / width - 0.5;
      const dy = y / height - 0.5;
      const radial = Math.max(0, 1 - 2.2 * Math.hypot(dx, dy));
      const bands = 0.5 + 0.5 * Math.sin((x + seed * 13) / 9) * Math.sin((y - seed * 7) / 11);
      const value = Math.round(255 * Math.min(1, 0.75 * radial + 0.25 * bands));
      const base = (y * width + x) * 3;
      rgb[base] = rgb[base + 1] = rgb[base + 2] = value;
    }
  }
  return rgb;
}

export function makeImageDir(classes: Record<string, number>): string {
  const root = mkdtempSync(join(tmpdir(), "extract-test-"));
  let seed = 1;
  for (const [className, count] of Object.entries(classes)) {
    const dir = join(root, className);
    mkdirSync(dir, { recursive: true });
    for (let i = 0; i < count; i++) {
      const png = encodePng(64, 48, syntheticImage(64, 48, seed));
      writeFileSync(join(dir, `img_${i}.png`), png);
      seed++;
    }
  }
  return root;
}
