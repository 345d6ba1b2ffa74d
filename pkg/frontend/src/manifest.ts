/**
 * Extraction manifests: either an explicit path,label CSV or a directory
 * whose class subdirectories name the labels. Row order is the manifest
 * order (directory mode sorts class directories and files for
 * reproducibility); class indices follow first appearance.
 */

import { readFileSync, readdirSync, statSync } from "node:fs";
import { join } from "node:path";

export interface ManifestRow {
  path: string;
  className: string;
}

export interface Manifest {
  rows: ManifestRow[];
  classNames: string[];
  labels: Uint32Array;
}

const IMAGE_EXTENSIONS = new Set([".png", ".pgm", ".ppm", ".pnm"]);

function hasImageExtension(name: string): boolean {
  const dot = name.lastIndexOf(".");
  return dot >= 0 && IMAGE_EXTENSIONS.has(name.slice(dot).toLowerCase());
}

export function loadManifest(source: string): Manifest {
  const stats = statSync(source, { throwIfNoEntry: false });
  if (!stats) throw new Error(`images source not found: ${source}`);
  const rows = stats.isDirectory() ? fromDirectory(source) : fromCsv(source);
  if (!rows.length) throw new Error(`no images found in ${source}`);
  return index(rows);
}

function fromDirectory(root: string): ManifestRow[] {
  const rows: ManifestRow[] = [];
  const classDirs = readdirSync(root, { withFileTypes: true })
    .filter((e) => e.isDirectory())
    .map((e) => e.name)
    .sort();
  for (const className of classDirs) {
    const files = readdirSync(join(root, className)).filter(hasImageExtension).sort();
    for (const file of files) {
      rows.push({ path: join(root, className, file), className });
    }
  }
  return rows;
}

function fromCsv(path: string): ManifestRow[] {
  const lines = readFileSync(path, "utf-8").split(/\r?\n/).filter((l) => l.trim());
  if (!lines.length) throw new Error(`${path}: empty manifest`);
  let start = 0;
  if (lines[0].trim().toLowerCase() === "path,label") start = 1;
  const rows: ManifestRow[] = [];
  for (let i = start; i < lines.length; i++) {
    const comma = lines[i].lastIndexOf(",");
    if (comma < 1) {
      throw new Error(`${path}: line ${i + 1} is not path,label`);
    }
    const imagePath = lines[i].slice(0, comma).trim();
    const className = lines[i].slice(comma + 1).trim();
    if (!className) throw new Error(`${path}: line ${i + 1} has an empty label`);
    rows.push({ path: imagePath, className });
  }
  return rows;
}

function index(rows: ManifestRow[]): Manifest {
  const classNames: string[] = [];
  const byName = new Map<string, number>();
  const labels = new Uint32Array(rows.length);
  rows.forEach((row, i) => {
    let idx = byName.get(row.className);
    if (idx === undefined) {
      idx = classNames.length;
      classNames.push(row.className);
      byName.set(row.className, idx);
    }
    labels[i] = idx;
  });
  return { rows, classNames, labels };
}
