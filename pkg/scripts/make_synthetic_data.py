"""Regenerate the bundled synthetic datasets in src/pairdiff/data.

    python scripts/make_synthetic_data.py

The files are committed; rerunning with the default seed reproduces them byte for byte.
"""

import argparse
import csv
from pathlib import Path

import numpy as np

DATA = Path(__file__).resolve().parents[1] / "src" / "pairdiff" / "data"


def exposures(rng, n):
    # heavy-tailed exposure sizes so that a handful of loans dominate the weights
    return np.round(rng.lognormal(mean=11.0, sigma=1.2, size=n), 2)


def lgd(rng, n=100):
    ead = exposures(rng, n)
    pred = np.clip(rng.beta(2.0, 3.5, size=n), 0.03, 0.95)
    big = ead > np.quantile(ead, 0.8)
    # large exposures recover better than predicted
    mean = np.clip(np.where(big, 0.55 * pred, 1.05 * pred), 0.02, 0.98)
    obs = rng.beta(mean * 2.0, (1 - mean) * 2.0)
    u = rng.random(n)
    obs = np.where(u < 0.12, 0.0, np.where(u > 0.94, 1.0, obs))
    return {"obs": np.round(obs, 4), "pred": np.round(pred, 4), "raw.w": ead}


def pd(rng, n=100):
    ead = exposures(rng, n)
    pred = np.clip(np.exp(rng.normal(np.log(0.06), 0.9, size=n)), 0.002, 0.4)
    big = ead > np.quantile(ead, 0.8)
    prob = np.where(big, np.minimum(2.5 * pred, 0.9), 0.9 * pred)
    obs = (rng.random(n) < prob).astype(int)
    return {"obs": obs, "pred": np.round(pred, 5), "raw.w": ead}


def ead(rng, n=100):
    limit = exposures(rng, n)
    pred = np.round(limit * rng.uniform(0.5, 1.0, size=n), 2)
    obs = np.round(rng.gamma(shape=4.0, scale=pred / 4.0), 2)
    return {"obs": obs, "pred": pred, "raw.w": limit}


def write(path, cols):
    names = list(cols)
    with path.open("w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(names)
        for row in zip(*(cols[c] for c in names)):
            out.writerow(row)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=23)
    args = ap.parse_args()
    DATA.mkdir(parents=True, exist_ok=True)
    for name, gen in (("lgd", lgd), ("pd", pd), ("ead", ead)):
        rng = np.random.default_rng([args.seed, len(name), ord(name[0])])
        write(DATA / f"{name}_synthetic.csv", gen(rng))
        print("wrote", DATA / f"{name}_synthetic.csv")


if __name__ == "__main__":
    main()
