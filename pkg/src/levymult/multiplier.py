"""Spectral application of multiplier symbols and operator-norm ratio sweeps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError
from .grid import GridFunction, PStar, lp_norm
from .symbols import ConstantSymbol, MultiplierSymbol

__all__ = ["apply_multiplier", "symbol_on_grid", "norm_ratio_sweep", "SweepRow"]

RATIO_SLACK = 5e-3  # a ratio above (p*-1)(1+slack) counts as a violation


def symbol_on_grid(f: GridFunction, symbol: MultiplierSymbol) -> np.ndarray:
    """Symbol values aligned with the FFT bins of ``f``.

    Bin k of the forward FFT carries the e^{+i xi_k . x} component of f, on
    which the operator acts by M(-xi_k); for the even symbols in this package
    the reflection is invisible, but odd reference symbols rely on it.
    """
    return symbol.evaluate(-f.frequencies())


def apply_multiplier(f: GridFunction, symbol: MultiplierSymbol) -> GridFunction:
    """Forward FFT, multiply by the symbol at each grid frequency, inverse FFT.

    The zero bin is governed by the symbol's own value at xi = 0 (zero for
    every measure-backed or homogeneous kind, c for the constant kind).
    """
    if isinstance(symbol, ConstantSymbol):
        # c * identity needs no transform; keeps the c == 1 case bitwise exact
        return f.with_samples(f.samples * symbol.value)
    if symbol.dimension != f.d:
        raise InvalidInputError(
            f"symbol dimension {symbol.dimension} != grid dimension {f.d}")
    spec = np.fft.fftn(f.samples)
    out = np.fft.ifftn(spec * symbol_on_grid(f, symbol))
    return f.with_samples(out)


@dataclass(frozen=True)
class SweepRow:
    p: float
    bound: float  # p* - 1
    max_ratio: float
    argmax_id: str
    violation: bool


def norm_ratio_sweep(symbol: MultiplierSymbol, corpus, p_list,
                     ids=None) -> list[SweepRow]:
    """Max over the corpus of ||Mf||_p / ||f||_p for each p, against p* - 1.

    The ratios are lower bounds on the operator norm; the check is one-sided
    (a finite corpus can falsify the bound, never certify it).
    """
    corpus = list(corpus)
    if not corpus:
        raise InvalidInputError("corpus must be nonempty")
    if ids is None:
        ids = [f"f{i}" for i in range(len(corpus))]
    transformed = [apply_multiplier(f, symbol) for f in corpus]
    rows = []
    for p in p_list:
        bound = PStar(p).bound
        best, best_id = -np.inf, ""
        for f, g, fid in zip(corpus, transformed, ids):
            nf = lp_norm(f, p)
            if nf == 0.0:
                raise InvalidInputError(f"corpus member {fid} has zero norm")
            ratio = lp_norm(g, p) / nf
            if ratio > best:
                best, best_id = ratio, fid
        rows.append(SweepRow(p, bound, best, best_id,
                             best > bound * (1.0 + RATIO_SLACK)))
    return rows
