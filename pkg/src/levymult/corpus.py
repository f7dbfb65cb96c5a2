"""Deterministic test-function corpora for norm-ratio sweeps.

A corpus is reproducible from its seed alone (counter-based Philox stream),
so sweeps are bitwise stable across runs and machines.  Families: smooth
bumps (Gaussian and compactly supported cosine), box/disk indicators, random
band-limited trigonometric polynomials, and oscillatory near-extremal
members (axis-aligned waves under a smooth envelope).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError
from .grid import GridFunction

__all__ = ["CorpusConfig", "build_corpus", "gaussian_bump", "cosine_bump"]

DEFAULT_MIX = (("gauss", 0.25), ("cosbump", 0.15), ("indicator", 0.2),
               ("trig", 0.25), ("wave", 0.15))


@dataclass(frozen=True)
class CorpusConfig:
    d: int = 2
    n: int = 256
    period: float = 2 * np.pi
    count: int = 40
    seed: int = 2024
    mean_zero: bool = False


def _family_counts(count):
    counts = {name: int(round(frac * count)) for name, frac in DEFAULT_MIX}
    drift = count - sum(counts.values())
    counts["trig"] += drift
    return counts


def gaussian_bump(sizes, period, center, width, amp=1.0):
    """Periodised Gaussian; integral amp * (sqrt(2 pi) width)^d for width << L."""
    sizes = tuple(np.atleast_1d(sizes))
    period = tuple(np.atleast_1d(period))
    axes = [np.arange(n) * (L / n) for n, L in zip(sizes, period)]
    grids = np.meshgrid(*axes, indexing="ij")
    r2 = np.zeros(grids[0].shape)
    for g, c, L in zip(grids, np.atleast_1d(center), period):
        dx = np.remainder(g - c + L / 2, L) - L / 2
        r2 += dx * dx
    return amp * np.exp(-r2 / (2 * width * width))


def cosine_bump(sizes, period, center, width, amp=1.0):
    """Compact support: amp * cos^2(pi r / (2 w)) inside r < w, zero outside."""
    sizes = tuple(np.atleast_1d(sizes))
    period = tuple(np.atleast_1d(period))
    axes = [np.arange(n) * (L / n) for n, L in zip(sizes, period)]
    grids = np.meshgrid(*axes, indexing="ij")
    r2 = np.zeros(grids[0].shape)
    for g, c, L in zip(grids, np.atleast_1d(center), period):
        dx = np.remainder(g - c + L / 2, L) - L / 2
        r2 += dx * dx
    r = np.sqrt(r2)
    out = np.where(r < width, amp * np.cos(np.pi * r / (2 * width)) ** 2, 0.0)
    return out


def build_corpus(config: CorpusConfig):
    """Return (list of GridFunction, list of ids), deterministic in the seed."""
    if config.count < 1:
        raise InvalidInputError("corpus count must be positive")
    rng = np.random.Generator(np.random.Philox(key=np.uint64(config.seed)))
    d, n, L = config.d, config.n, config.period
    sizes = (n,) * d
    period = (L,) * d
    counts = _family_counts(config.count)
    members, ids = [], []

    def emit(name, arr):
        if config.mean_zero:
            arr = arr - arr.mean()
        members.append(GridFunction(sizes, period, arr.astype(complex)))
        ids.append(name)

    for i in range(counts["gauss"]):
        center = rng.uniform(0, L, size=d)
        width = rng.uniform(0.03, 0.12) * L
        emit(f"gauss{i}", gaussian_bump(sizes, period, center, width))
    for i in range(counts["cosbump"]):
        center = rng.uniform(0, L, size=d)
        width = rng.uniform(0.05, 0.2) * L
        emit(f"cosbump{i}", cosine_bump(sizes, period, center, width))
    axes = [np.arange(m) * (L / m) for m in sizes]
    grids = np.meshgrid(*axes, indexing="ij")
    for i in range(counts["indicator"]):
        center = rng.uniform(0, L, size=d)
        if d == 2 and i % 2 == 0:
            radius = rng.uniform(0.05, 0.2) * L
            r2 = sum((np.remainder(g - c + L / 2, L) - L / 2) ** 2
                     for g, c in zip(grids, center))
            emit(f"disk{i}", (r2 < radius * radius).astype(float))
        else:
            half = rng.uniform(0.05, 0.25, size=d) * L
            inside = np.ones(grids[0].shape, dtype=bool)
            for g, c, hw in zip(grids, center, half):
                inside &= np.abs(np.remainder(g - c + L / 2, L) - L / 2) < hw
            emit(f"box{i}", inside.astype(float))
    for i in range(counts["trig"]):
        band = int(rng.integers(2, max(3, n // 16)))
        spec = np.zeros(sizes, dtype=complex)
        modes = [np.fft.fftfreq(m, d=1.0 / m).astype(int) for m in sizes]
        sel = np.meshgrid(*[np.abs(k) <= band for k in modes], indexing="ij")
        mask = np.logical_and.reduce(sel)
        coeffs = rng.normal(size=mask.sum()) + 1j * rng.normal(size=mask.sum())
        spec[mask] = coeffs
        arr = np.fft.ifftn(spec)
        arr = arr.real  # hermitian projection: keep the real part
        emit(f"trig{i}", arr)
    for i in range(counts["wave"]):
        k = int(rng.integers(4, n // 4))
        axis = int(rng.integers(0, d))
        center = rng.uniform(0, L, size=d)
        width = rng.uniform(0.1, 0.3) * L
        env = gaussian_bump(sizes, period, center, width)
        phase = rng.uniform(0, 2 * np.pi)
        carrier = np.cos(2 * np.pi * k * grids[axis] / L + phase)
        emit(f"wave{i}_k{k}", env * carrier)
    return members, ids
