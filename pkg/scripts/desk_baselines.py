#!/usr/bin/env python3
"""Recompute the regression baselines in tests/data/desk_baselines.json.

Run once after an intentional numerical change:

    python scripts/desk_baselines.py

Reference values are computed at rel_tol=1e-10.  Upper-bound contracts are
rounded up to three significant digits; the persistence floor is half the
observed minimum, rounded down.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

import numpy as np  # noqa: E402

import scenarios  # noqa: E402
from holling_dyn import experiments, fitting  # noqa: E402
from holling_dyn.integrator import IntegratorConfig  # noqa: E402

REFERENCE = IntegratorConfig(rel_tol=1e-10, abs_tol=1e-12)


def round_up(x, digits=3):
    scale = 10 ** (digits - 1 - math.floor(math.log10(abs(x))))
    return math.ceil(x * scale) / scale


def round_down(x, digits=2):
    scale = 10 ** (digits - 1 - math.floor(math.log10(abs(x))))
    return math.floor(x * scale) / scale


def compute() -> dict:
    d = fitting.load_dataset()
    sse = fitting.objective_sse(fitting.table2_params(), d, REFERENCE)

    p, ic = scenarios.limit_inputs()
    study = experiments.singular_limit_study(p, scenarios.LIMIT_EPS, ic, scenarios.LIMIT_TAU, cfg=REFERENCE)

    minima = [
        experiments.persistence_probe(q, ics, grid_step=scenarios.PERSISTENCE_GRID, cfg=REFERENCE).min()
        for q, ics in scenarios.persistence_cases()
    ]
    observed = float(np.min(minima))

    return {
        "table2_sse": sse,
        "limit_study": {
            "epsilons": list(study.epsilons),
            "rel_err_N": list(study.rel_err_N),
            "rel_err_P": list(study.rel_err_P),
            "baseline_rel_err_N": round_up(study.rel_err_N[-1]),
            "baseline_rel_err_P": round_up(study.rel_err_P[-1]),
        },
        "persistence": {
            "observed_minimum": observed,
            "floor": round_down(0.5 * observed),
        },
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=scenarios.BASELINE_PATH)
    args = ap.parse_args(argv)
    result = compute()
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(result, indent=2) + "\n")
    print(json.dumps(result, indent=2))


if __name__ == "__main__":
    main()
