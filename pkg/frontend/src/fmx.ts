/**
 * FMX1 writer: the binary interchange format the boosting harness loads.
 * Little-endian: magic "FMX1", u32 version 1, u64 rows, u64 cols, u32
 * class count, then u32 labels and float32 row-major features. Class
 * names go to a sibling .classes file, one per line, order = index.
 */

import { writeFileSync } from "node:fs";

export interface FeatureTable {
  nRows: number;
  nCols: number;
  /** Row-major float32 features, length nRows * nCols. */
  features: Float32Array;
  labels: Uint32Array;
  classNames: string[];
}

export function encodeFmx(table: FeatureTable): Buffer {
  const { nRows, nCols, features, labels, classNames } = table;
  if (features.length !== nRows * nCols) {
    throw new Error(`feature length ${features.length} != ${nRows}x${nCols}`);
  }
  if (labels.length !== nRows) {
    throw new Error(`label count ${labels.length} != ${nRows}`);
  }
  for (const value of features) {
    if (!Number.isFinite(value)) throw new Error("non-finite feature value");
  }
  const header = Buffer.alloc(28);
  header.write("FMX1", 0, "latin1");
  header.writeUInt32LE(1, 4);
  header.writeBigUInt64LE(BigInt(nRows), 8);
  header.writeBigUInt64LE(BigInt(nCols), 16);
  header.writeUInt32LE(classNames.length, 24);
  const labelBytes = Buffer.alloc(4 * nRows);
  for (let i = 0; i < nRows; i++) labelBytes.writeUInt32LE(labels[i], 4 * i);
  const featureBytes = Buffer.alloc(4 * features.length);
  for (let i = 0; i < features.length; i++) {
    featureBytes.writeFloatLE(features[i], 4 * i);
  }
  return Buffer.concat([header, labelBytes, featureBytes]);
}

export function writeFmx(table: FeatureTable, path: string): void {
  writeFileSync(path, encodeFmx(table));
  const classesPath = path.replace(/\.[^./\\]*$/, "") + ".classes";
  writeFileSync(classesPath, table.classNames.map((n) => n + "\n").join(""), "utf-8");
}
