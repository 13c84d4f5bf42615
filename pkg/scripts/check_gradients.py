#!/usr/bin/env python3
"""Gradient sanity report: analytic BPTT vs central finite differences.

Prints the max relative error per seed. Anything above 1e-4 means the
backward pass is wrong.
"""

import sys
import time

import numpy as np

from stratincon import matchgen, predictor
from stratincon.telemetry import compute_normalization


def main():
    log, _ = matchgen.generate_match(matchgen.GenConfig(seed=11, n_frames=40))
    stats = compute_normalization([log])
    sample = predictor.build_windows(log, stats)[0]

    t0 = time.time()
    worst = 0.0
    for seed in range(5):
        model = predictor.init_model(stats, hidden_size=12, seed=seed)
        err = predictor.gradient_check(model, sample, eps=1e-5, n_params=100, seed=seed)
        worst = max(worst, err)
        print(f"seed {seed}: max relative error {err:.3e}")
    print(f"worst {worst:.3e} in {time.time() - t0:.1f}s")
    return 0 if worst < 1e-4 else 1


if __name__ == "__main__":
    sys.exit(main())
