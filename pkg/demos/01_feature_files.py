#!/usr/bin/env python3
"""Feature datasets on disk: CSV in, FMX out, and back again.

The FMX1 container is the binary interchange format between the feature
extractor and this library: a 28-byte little-endian header (magic FMX1,
version, row/column/class counts), u32 labels, then float32 features in
row-major order, with class names in a companion .classes file.
"""

import tempfile
from pathlib import Path

import numpy as np

from boostray import Dataset, load_csv, load_fmx, write_csv, write_fmx

workdir = Path(tempfile.mkdtemp(prefix="boostray-demo-"))

# A tiny labeled dataset: the label column holds class-name strings and
# class indices follow first appearance, so "covid" becomes class 0 here.
csv_path = workdir / "toy.csv"
csv_path.write_text(
    "label,f0,f1,f2\n"
    "covid,0.12,3.4,-1.0\n"
    "normal,0.95,1.1,0.5\n"
    "covid,0.07,2.9,-0.8\n"
    "normal,1.10,0.7,0.9\n"
)

ds = load_csv(csv_path)
print("rows x cols:", ds.n_rows, "x", ds.n_cols)
print("classes:", ds.class_names)          # ('covid', 'normal')
print("labels:", ds.labels.tolist())       # [0, 1, 0, 1]

# Round-trip through the binary container. Features are float32 on disk,
# so the trip is bit-exact.
fmx_path = workdir / "toy.fmx"
write_fmx(ds, fmx_path)
back = load_fmx(fmx_path)
assert back.features.tobytes() == ds.features.tobytes()
assert back.class_names == ds.class_names
print("fmx file size:", fmx_path.stat().st_size, "bytes")
print("  = 28 header + 4*%d labels + 4*%d features" % (ds.n_rows, ds.n_rows * ds.n_cols))

# Writing the loaded dataset back to CSV preserves every stored digit.
csv_again = workdir / "toy_again.csv"
write_csv(back, csv_again)
print("csv round-trip identical:", load_csv(csv_again).features.tobytes() == ds.features.tobytes())

# Building a dataset directly from arrays works the same way; invariants
# (finite values, labels in range, every class present) are checked here.
rng = np.random.default_rng(0)
big = Dataset(
    rng.standard_normal((100, 8)).astype(np.float32),
    np.array([0, 1] * 50, dtype=np.int32),
    ("covid", "normal"),
)
write_fmx(big, workdir / "big.fmx")
print("wrote", workdir / "big.fmx")
