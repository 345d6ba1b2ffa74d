import assert from "node:assert/strict";
import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { test } from "node:test";

import { main, runExtraction } from "../extract.js";
import { makeImageDir } from "./helpers.js";

function pythonWithBoostray(): string | null {
  try {
    execFileSync("python3", ["-c", "import boostray"], { stdio: "ignore" });
    return "python3";
  } catch {
    return null;
  }
}

test("end-to-end extraction: fmx layout, determinism, harness load", { timeout: 600_000 }, () => {
  const images = makeImageDir({ covid: 2, normal: 1 });
  const out = mkdtempSync(join(tmpdir(), "extract-out-"));
  const first = join(out, "features.fmx");
  runExtraction(images, "DenseNet169", first);

  const bytes = readFileSync(first);
  assert.equal(bytes.subarray(0, 4).toString("latin1"), "FMX1");
  assert.equal(bytes.readUInt32LE(4), 1);
  assert.equal(Number(bytes.readBigUInt64LE(8)), 3);      // rows
  assert.equal(Number(bytes.readBigUInt64LE(16)), 1664);  // DenseNet169 width
  assert.equal(bytes.readUInt32LE(24), 2);                 // classes
  assert.equal(bytes.length, 28 + 4 * 3 + 4 * 3 * 1664);

  const classes = readFileSync(join(out, "features.classes"), "utf-8");
  assert.equal(classes, "covid\nnormal\n");
  const meta = JSON.parse(readFileSync(join(out, "features.meta"), "utf-8"));
  assert.equal(meta.backbone, "DenseNet169");
  assert.equal(meta.feature_count, 1664);

  // byte-identical on a second run
  const second = join(out, "again.fmx");
  runExtraction(images, "DenseNet169", second);
  assert.deepEqual(readFileSync(second), bytes);

  // the boosting harness must load it with every invariant intact
  const python = pythonWithBoostray();
  if (python) {
    const checked = execFileSync(python, ["-c", `
import boostray
ds = boostray.load_fmx(${JSON.stringify(first)})
assert ds.n_rows == 3 and ds.n_cols == 1664 and ds.n_classes == 2
assert ds.class_names == ("covid", "normal")
assert ds.labels.tolist() == [0, 0, 1]
print("loaded-ok")
`]).toString();
    assert.match(checked, /loaded-ok/);
  }
});

test("manifest csv mode preserves row order and first-appearance labels", () => {
  const images = makeImageDir({ b_late: 1, a_early: 2 });
  const manifest = join(mkdtempSync(join(tmpdir(), "manifest-")), "list.csv");
  // order chosen so the csv, not the name sort, determines indices
  writeFileSync(manifest, [
    "path,label",
    `${join(images, "b_late", "img_0.png")},late`,
    `${join(images, "a_early", "img_0.png")},early`,
    `${join(images, "a_early", "img_1.png")},late`,
  ].join("\n") + "\n");
  const out = join(mkdtempSync(join(tmpdir(), "manifest-out-")), "f.fmx");
  runExtraction(manifest, "MobileNet", out);
  const bytes = readFileSync(out);
  assert.equal(Number(bytes.readBigUInt64LE(8)), 3);
  assert.equal(Number(bytes.readBigUInt64LE(16)), 1024);
  const labels = [bytes.readUInt32LE(28), bytes.readUInt32LE(32), bytes.readUInt32LE(36)];
  assert.deepEqual(labels, [0, 1, 0]); // late first, early second
});

test("cli flag handling", () => {
  assert.equal(main(["--list-backbones"]), 0);
  assert.equal(main([]), 3);
  assert.equal(main(["--bogus"]), 3);
  assert.equal(main(["--images", "/nonexistent/dir", "--out", "/tmp/x.fmx"]), 2);
});

test("undecodable image names the file", () => {
  const dir = makeImageDir({ only: 1 });
  const bad = join(dir, "only", "broken.png");
  writeFileSync(bad, Buffer.from("not a png at all"));
  const out = join(mkdtempSync(join(tmpdir(), "bad-out-")), "f.fmx");
  assert.throws(() => runExtraction(dir, "MobileNet", out),
                new RegExp("broken\\.png"));
});
