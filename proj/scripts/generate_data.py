#!/usr/bin/env python3
"""Generate the bundled data snapshot under data/.

The snapshot is synthetic: 19 monthly macroeconomic indicator extracts in the
public DATE,VALUE format plus a quarterly charge-off-rate target, engineered so
the reproduction profile exercises every pipeline stage.

Two phases (the target is a function of the pipeline's own feature columns, so
the C++ feature dump sits between them):

  python3 scripts/generate_data.py indicators
  c++ -std=c++20 -O2 -Icore/include -Ivendor scripts/dump_features.cpp \
      build/core/liblossforecast_core.a -o build/dump_features
  build/dump_features /tmp/feature_dump.csv <id path resample>...   # see below
  python3 scripts/generate_data.py target

Running `python3 scripts/generate_data.py all` performs all three steps,
assuming the static library has been built.
"""

import csv
import math
import os
import subprocess
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DATA = os.path.join(ROOT, "data")
DUMP = os.path.join(ROOT, "build", "feature_dump.csv")

N_MONTHS = 414  # 1985-01 .. 2019-06
N_QUARTERS = 138  # 1985Q1 .. 2019Q2

import numpy as np

# ---------------------------------------------------------------- indicators

# id -> (resample, generator)
#
# A shared "stress" path drives the recession-sensitive series: bumps around
# 1990-91, 2001, 2008-09, a 2015-16 slowdown, and a gentle late-sample rise
# that produces the forecast-window uptrend.


def stress_path():
    m = np.arange(N_MONTHS, dtype=float)

    def bump(center, width, height):
        return height * np.exp(-((m - center) / width) ** 2)

    s = (
        bump(66, 11, 0.85)
        + bump(195, 9, 0.65)
        + bump(286, 15, 1.0)
        + bump(372, 8, 0.22)
    )
    ramp = np.clip((m - 390) / 24.0, 0.0, 1.0)
    s = s + 0.30 * ramp
    return s


def smooth_noise(rng, n, sd, rho=0.85, taper_from=384, taper=0.3):
    eps = rng.normal(0.0, 1.0, n)
    x = np.zeros(n)
    for t in range(1, n):
        x[t] = rho * x[t - 1] + eps[t]
    x *= sd * math.sqrt(1 - rho * rho)
    amp = np.ones(n)
    amp[taper_from:] = taper
    return x * amp


def shift(x, k):
    """x delayed by k steps (k>0: past values arrive later)."""
    if k == 0:
        return x.copy()
    out = np.empty_like(x)
    if k > 0:
        out[k:] = x[:-k]
        out[:k] = x[0]
    else:
        out[:k] = x[-k:]
        out[k:] = x[-1]
    return out


def build_indicators():
    rng = np.random.default_rng(1985)
    m = np.arange(N_MONTHS, dtype=float)
    s = stress_path()

    def cyc(period, phase=0.0):
        return np.sin(2 * math.pi * m / period + phase)

    series = {}
    series["building_permits"] = (
        "mean",
        1250 + 240 * cyc(240, 0.4) - 680 * s + smooth_noise(rng, N_MONTHS, 28),
    )
    series["housing_starts"] = (
        "mean",
        1500 + 210 * cyc(200, 1.0) - 780 * shift(s, 1) + smooth_noise(rng, N_MONTHS, 42),
    )
    series["initial_claims"] = (
        "mean",
        320 + 265 * s + smooth_noise(rng, N_MONTHS, 6.5),
    )
    series["unemployment_rate"] = (
        "mean",
        4.6 + 5.1 * shift(s, 4) + smooth_noise(rng, N_MONTHS, 0.045),
    )
    series["cci"] = (
        "mean",
        100 - 34 * s + 8 * cyc(150, 0.0) + smooth_noise(rng, N_MONTHS, 1.2),
    )
    series["umich_sentiment"] = (
        "mean",
        90 - 24 * shift(s, 2) + 6 * cyc(170, 2.0) + smooth_noise(rng, N_MONTHS, 1.5),
    )
    series["sp500"] = (
        "last",
        np.exp(5.15 + 0.0062 * m - 0.45 * s + smooth_noise(rng, N_MONTHS, 0.035, rho=0.9)),
    )
    series["dow_jones"] = (
        "last",
        np.exp(7.35 + 0.0058 * m - 0.40 * shift(s, 1)
               + smooth_noise(rng, N_MONTHS, 0.035, rho=0.9)),
    )
    series["total_credit_utilization"] = (
        "mean",
        0.28 + 0.05 * cyc(260, 0.8) + 0.04 * shift(s, 2)
        + smooth_noise(rng, N_MONTHS, 0.004),
    )
    series["revolving_credit_utilization"] = (
        "mean",
        0.33 + 0.04 * cyc(230, 2.1) + 0.05 * shift(s, 3)
        + smooth_noise(rng, N_MONTHS, 0.005),
    )
    series["nonrevolving_credit_utilization"] = (
        "mean",
        0.24 + 0.03 * cyc(300, 1.3) + 0.02 * shift(s, 5)
        + smooth_noise(rng, N_MONTHS, 0.004),
    )
    series["industrial_production"] = (
        "mean",
        60 * np.exp(0.0034 * m) * (1 - 0.11 * s) + smooth_noise(rng, N_MONTHS, 0.6),
    )
    series["ism_new_orders"] = (
        "mean",
        56 - 13 * s + smooth_noise(rng, N_MONTHS, 1.0),
    )
    series["pmi"] = (
        "mean",
        54 - 11 * s + 2 * cyc(130, 0.6) + smooth_noise(rng, N_MONTHS, 0.7),
    )
    series["weekly_hours_mfg"] = (
        "mean",
        41.3 - 1.6 * s + 0.3 * cyc(220, 1.8) + smooth_noise(rng, N_MONTHS, 0.05),
    )
    sig = 1.0 / (1.0 + np.exp(-(m - 286) / 18.0))
    series["m1"] = (
        "mean",
        700 * np.exp(0.0040 * m + 0.35 * sig)
        * (1 + smooth_noise(rng, N_MONTHS, 0.004)),
    )
    series["m2"] = (
        "mean",
        2400 * np.exp(0.0046 * m) * (1 + smooth_noise(rng, N_MONTHS, 0.003)),
    )
    series["yield_10y_3m"] = (
        "mean",
        1.4 + 1.1 * cyc(140, 0.5) - 1.6 * shift(s, -8) + smooth_noise(rng, N_MONTHS, 0.08),
    )
    series["yield_10y_ffr"] = (
        "mean",
        1.2 + 1.0 * cyc(160, 1.4) - 1.5 * shift(s, -6) + smooth_noise(rng, N_MONTHS, 0.09),
    )
    return series


def month_date(i):
    return f"{1985 + i // 12:04d}-{1 + i % 12:02d}-01"


def quarter_date(q):
    return f"{1985 + q // 4:04d}-{1 + 3 * (q % 4):02d}-01"


def fmt(v):
    return repr(float(v))


def write_indicators():
    os.makedirs(DATA, exist_ok=True)
    for name, (_, values) in build_indicators().items():
        with open(os.path.join(DATA, name + ".csv"), "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["DATE", "VALUE"])
            for i, v in enumerate(values):
                w.writerow([month_date(i), fmt(v)])
    print(f"wrote 19 indicator extracts to {DATA}")


RESAMPLE = {name: rs for name, (rs, _) in build_indicators().items()}

# -------------------------------------------------------------------- target

# (indicator, lag, weight): the charge-off YoY path is a fixed linear blend of
# these pipeline feature columns plus a little noise, so Lasso recovers them.
TARGET_RECIPE = [
    ("building_permits", 1, -0.70),
    ("initial_claims", 1, +0.95),
    ("m1", 4, -0.35),
    ("pmi", 4, -0.55),
    ("weekly_hours_mfg", 0, -0.50),
    ("unemployment_rate", 1, +1.00),
]


def run_dump():
    exe = os.path.join(ROOT, "build", "dump_features")
    src = os.path.join(ROOT, "scripts", "dump_features.cpp")
    lib = os.path.join(ROOT, "build", "core", "liblossforecast_core.a")
    subprocess.run(
        ["c++", "-std=c++20", "-O2", "-I", os.path.join(ROOT, "core", "include"),
         "-I", os.path.join(ROOT, "vendor"), src, lib, "-o", exe],
        check=True,
    )
    args = [exe, DUMP]
    for name, rs in RESAMPLE.items():
        args += [name, os.path.join(DATA, name + ".csv"), rs]
    subprocess.run(args, check=True)


def load_dump():
    with open(DUMP, newline="") as f:
        rows = list(csv.reader(f))
    header = rows[0]
    quarters = [r[0] for r in rows[1:]]
    cols = {header[j]: np.array([float(r[j]) for r in rows[1:]])
            for j in range(1, len(header))}
    return quarters, cols


def quarter_index(qstr):
    year, qq = qstr.split("Q")
    return (int(year) - 1985) * 4 + int(qq) - 1


def write_target():
    quarters, cols = load_dump()
    start = quarter_index(quarters[0])

    combo = np.zeros(len(quarters))
    for name, lag, w in TARGET_RECIPE:
        c = cols[f"{name}_lag{lag}"]
        combo += w * (c / np.std(c))
    combo -= combo.mean()

    scale = min(0.14 / np.std(combo), 0.55 / np.max(np.abs(combo)))
    yoy = combo * scale
    rng = np.random.default_rng(2019)
    yoy = yoy + rng.normal(0.0, 0.12 * np.std(yoy), len(yoy))

    # integrate the YoY path into levels: level_t = level_{t-4} * (1 + yoy_t).
    levels = np.zeros(N_QUARTERS)
    levels[:4] = [4.00, 4.08, 4.15, 4.10]
    # smooth filler before the feature columns begin
    for q in range(4, start):
        levels[q] = levels[q - 4] * (1.0 + 0.01 * (q % 3 - 1))
    for i, qstr in enumerate(quarters):
        q = quarter_index(qstr)
        levels[q] = levels[q - 4] * (1.0 + yoy[i])

    with open(os.path.join(DATA, "chargeoff_rate.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["DATE", "VALUE"])
        for q in range(N_QUARTERS):
            w.writerow([quarter_date(q), fmt(levels[q])])
    print(f"wrote target to {DATA}/chargeoff_rate.csv "
          f"(yoy sd {np.std(yoy):.4f}, levels {levels.min():.2f}..{levels.max():.2f})")
    write_profile()


def write_profile():
    import json

    profile = {
        "indicators": [
            {"id": name, "path": name + ".csv", "resample": rs}
            for name, rs in RESAMPLE.items()
        ],
        "target": {"id": "chargeoff_rate", "path": "chargeoff_rate.csv",
                   "resample": "mean"},
        "mode": "optimal_lags",
        "learners": ["lasso", "ridge", "gbm", "rf"],
        "classifiers": ["logistic_regression"],
        "chunk_span": 16,
        "horizon": 5,
        "split": "2011Q1",
        "origin": "2018Q1",
        "p1": [24, 27, 30, 33],
        "seed": 20190630,
        "out": "out",
    }
    with open(os.path.join(DATA, "reproduction.json"), "w") as f:
        json.dump(profile, f, indent=2)
        f.write("\n")
    print(f"wrote {DATA}/reproduction.json")


def main():
    phase = sys.argv[1] if len(sys.argv) > 1 else "all"
    if phase in ("indicators", "all"):
        write_indicators()
    if phase == "all":
        run_dump()
    if phase in ("target", "all"):
        write_target()


if __name__ == "__main__":
    main()
