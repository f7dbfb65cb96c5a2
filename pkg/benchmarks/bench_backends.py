#!/usr/bin/env python3
"""Benchmark the jitted Monte Carlo kernels against the plain-numpy fallback.

The hot loops (martingale evolution, jump-sum accumulation, multiplier
recovery rows) share one source; this script times both execution modes on
identical inputs and verifies that the outputs agree to roundoff.

    python benchmarks/bench_backends.py [--paths N] [--seed S]
"""

import argparse
import time

import numpy as np

from levymult import scenarios as sc
from levymult import stochastic as st
from levymult._accel import get_backend


def time_call(fn, repeats=3):
    best = np.inf
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--paths", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    scn = sc.scenario_by_name("two_scale_signs")
    lat = scn.lattice
    # shared inputs: identical paths for both backends
    counts, offsets, times, aidx = st.sample_ensemble(
        lat, scn.window, args.paths, args.seed)
    sizes = np.asarray(lat.sizes, dtype=np.int64)
    fhat = lat.fft(scn.f)
    cps = np.asarray(scn.checkpoints, dtype=float)
    s, u = scn.window

    jobs = {
        "evolve": lambda k: k.evolve_ensemble(
            sizes, lat.psi, fhat, lat.sphi, lat.phase, lat.atom_steps,
            lat.phi, scn.f.astype(complex), scn.x0, s, u,
            counts, offsets, times, aidx, cps),
        "levy_sums": lambda k: k.levy_ensemble(
            sizes, lat.h, lat.atom_steps, s, counts, offsets, times, aidx,
            4, 1.0, float(lat.sizes[0])),
        "projection": lambda k: k.projection_ensemble(
            sizes, lat.psi, fhat, lat.sphi, lat.phase, lat.atom_steps,
            lat.phi, s, u, counts, offsets, times, aidx),
    }

    nb = get_backend("numba")
    pl = get_backend("numpy")
    for name, job in jobs.items():
        job(nb)  # compile before timing
    print(f"{args.paths} paths, lattice {lat.sizes}, "
          f"{len(lat.weights)} jump atoms")
    print(f"{'kernel':>12} {'numba [s]':>12} {'numpy [s]':>12} {'speedup':>9}"
          f" {'max |diff|':>12}")
    for name, job in jobs.items():
        t_nb, out_nb = time_call(lambda: job(nb))
        t_pl, out_pl = time_call(lambda: job(pl), repeats=1)
        if isinstance(out_nb, tuple):
            diff = max(float(np.abs(np.asarray(a) - np.asarray(b)).max())
                       for a, b in zip(out_nb, out_pl))
        else:
            diff = float(np.abs(out_nb - out_pl).max())
        print(f"{name:>12} {t_nb:12.4f} {t_pl:12.4f} {t_pl / t_nb:9.1f}"
              f" {diff:12.3e}")


if __name__ == "__main__":
    main()
