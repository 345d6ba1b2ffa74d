/**
 * CLI: extract image features into an FMX file.
 *
 *   extract --images <dir | manifest.csv> [--backbone DenseNet169]
 *           --out features.fmx
 *   extract --list-backbones
 *
 * Writes <out>, <out stem>.classes, and <out stem>.meta (backbone,
 * preprocessing id, extraction date). Feature output is deterministic;
 * only the meta file carries the date.
 */

import { readFileSync, writeFileSync } from "node:fs";
import process from "node:process";

import { DEFAULT_BACKBONE, extractFeatures, getBackbone, listBackbones } from "./backbones/index.js";
import { writeFmx } from "./fmx.js";
import { decodeImage, resizeBilinear } from "./image.js";
import { loadManifest } from "./manifest.js";
import { preprocess } from "./preprocess.js";

const INPUT_SIZE = 224;

interface Args {
  images?: string;
  backbone: string;
  out?: string;
  listBackbones: boolean;
  quiet: boolean;
}

function parseArgs(argv: string[]): Args {
  const args: Args = { backbone: DEFAULT_BACKBONE, listBackbones: false, quiet: false };
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    const next = () => {
      if (i + 1 >= argv.length) throw new Error(`${flag} needs a value`);
      return argv[++i];
    };
    switch (flag) {
      case "--images": args.images = next(); break;
      case "--backbone": args.backbone = next(); break;
      case "--out": args.out = next(); break;
      case "--list-backbones": args.listBackbones = true; break;
      case "--quiet": args.quiet = true; break;
      case "--help":
        console.log(
          "usage: extract --images <dir|manifest.csv> [--backbone NAME] " +
          "--out features.fmx\n       extract --list-backbones",
        );
        process.exit(0);
        break;
      default:
        throw new Error(`unknown flag ${flag}`);
    }
  }
  return args;
}

export function runExtraction(images: string, backboneName: string, out: string,
                              log: (line: string) => void = () => {}): void {
  const spec = getBackbone(backboneName);
  const manifest = loadManifest(images);
  const n = manifest.rows.length;
  const features = new Float32Array(n * spec.featureCount);
  log(`extracting ${n} images with ${spec.name} (${spec.featureCount} features)`);
  manifest.rows.forEach((row, i) => {
    let image;
    try {
      image = decodeImage(readFileSync(row.path), row.path);
    } catch (err) {
      throw new Error(`cannot decode ${row.path}: ${(err as Error).message}`);
    }
    const input = preprocess(resizeBilinear(image, INPUT_SIZE), spec.preprocessing);
    const vector = extractFeatures(spec, input);
    features.set(vector, i * spec.featureCount);
    log(`  [${i + 1}/${n}] ${row.path}`);
  });

  writeFmx(
    {
      nRows: n,
      nCols: spec.featureCount,
      features,
      labels: manifest.labels,
      classNames: manifest.classNames,
    },
    out,
  );
  const metaPath = out.replace(/\.[^./\\]*$/, "") + ".meta";
  writeFileSync(
    metaPath,
    JSON.stringify(
      {
        backbone: spec.name,
        preprocessing: spec.preprocessing,
        input_size: INPUT_SIZE,
        feature_count: spec.featureCount,
        weight_source: "seeded-deterministic-v1",
        extraction_date: new Date().toISOString(),
      },
      null,
      2,
    ) + "\n",
    "utf-8",
  );
  log(`wrote ${out} (${n} x ${spec.featureCount})`);
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 3;
  }
  if (args.listBackbones) {
    for (const name of listBackbones()) {
      console.log(name === DEFAULT_BACKBONE ? `${name} (default)` : name);
    }
    return 0;
  }
  if (!args.images || !args.out) {
    console.error("error: --images and --out are required (see --help)");
    return 3;
  }
  try {
    runExtraction(args.images, args.backbone, args.out,
                  args.quiet ? () => {} : (line) => console.error(line));
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
}

const isDirectRun = process.argv[1] &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (isDirectRun) {
  process.exit(main(process.argv.slice(2)));
}
