#!/usr/bin/env python3
"""Regenerate the bundled case-study dataset (data/thyroidlike-train.data).

The real UCI Thyroid "ann" files cannot be redistributed here, so the
bundled case study uses a synthetic stand-in written in the identical
format: 21 attributes (6 continuous, 15 binary) plus a class label in
{1,2,3}. The class structure is an imbalanced screening-style task: a
gate feature separates the small abnormal classes from the majority, and
the two abnormal classes differ by an XOR arrangement of two further
features, which keeps a 3-hidden-unit network capacity-tight.

Deterministic: re-running this script reproduces the file byte for byte.
"""

import argparse
from pathlib import Path

import numpy as np

from restartkit.dataset import Dataset, save_thyroid

GENERATOR_SEED = 1729
N_ROWS = 1000
P_CLASS1 = 0.10
P_CLASS2 = 0.10
GATE_HI = (0.70, 0.95)
GATE_LO = (0.05, 0.40)
XOR_LO = (0.05, 0.25)
XOR_HI = (0.75, 0.95)
BINARY_RATES = [
    0.31, 0.05, 0.12, 0.02, 0.08, 0.04, 0.10, 0.03,
    0.15, 0.06, 0.02, 0.25, 0.07, 0.04, 0.09,
]


def build_dataset() -> Dataset:
    rng = np.random.default_rng(GENERATOR_SEED)
    n = N_ROWS
    labels = rng.choice([1, 2, 3], size=n, p=[P_CLASS1, P_CLASS2, 1.0 - P_CLASS1 - P_CLASS2])
    minority = labels != 3
    x = np.zeros((n, 21))
    # col 0: gate separating abnormal (high) from normal (low)
    x[:, 0] = np.where(
        minority, rng.uniform(*GATE_HI, size=n), rng.uniform(*GATE_LO, size=n)
    )
    # cols 1-2: XOR quadrants distinguishing class 1 from class 2
    lo1 = rng.uniform(*XOR_LO, size=n)
    hi1 = rng.uniform(*XOR_HI, size=n)
    lo2 = rng.uniform(*XOR_LO, size=n)
    hi2 = rng.uniform(*XOR_HI, size=n)
    quadrant = rng.integers(0, 2, size=n)
    x1 = np.where(quadrant == 0, hi1, lo1)
    x2_class1 = np.where(quadrant == 0, hi2, lo2)
    x2_class2 = np.where(quadrant == 0, lo2, hi2)
    x[:, 1] = np.where(minority, x1, rng.uniform(0, 1, size=n))
    x[:, 2] = np.where(
        labels == 1,
        x2_class1,
        np.where(labels == 2, x2_class2, rng.uniform(0, 1, size=n)),
    )
    # cols 3-5: uninformative continuous attributes
    x[:, 3] = rng.beta(2, 3, size=n)
    x[:, 4] = rng.beta(1.5, 5, size=n)
    x[:, 5] = rng.beta(4, 2, size=n)
    # cols 6-20: uninformative binary attributes
    for j, rate in enumerate(BINARY_RATES):
        x[:, 6 + j] = (rng.random(n) < rate).astype(float)
    x = np.round(x, 6)
    y = np.zeros((n, 3))
    y[np.arange(n), labels - 1] = 1.0
    return Dataset(features=x, targets=y)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "out",
        nargs="?",
        default=str(Path(__file__).resolve().parent.parent / "data" / "thyroidlike-train.data"),
    )
    args = parser.parse_args()
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_thyroid(build_dataset(), out)
    print(f"wrote {N_ROWS} rows to {out}")


if __name__ == "__main__":
    main()
