"""Periodic lattice state space for the jump-martingale construction.

Boundary functions live on a cyclic lattice Z_{n1} (x Z_{n2}) with spacing h.
Jumps are integer steps, so convolution by the transition measure is exact:
the cyclic convolution semigroup diagonalises under the DFT with eigenvalues
e^{t psi_k}, where

    psi_k = sum_a w_a (cos(2 pi k . z_a / n) - 1)

is the characteristic exponent evaluated at the lattice frequencies.  This
matches the truncated-series transition measure wrapped onto the torus term
by term, with no truncation error at all.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError
from .measures import DiscreteLevyMeasure, JumpModulator

__all__ = ["PeriodicLattice"]


@dataclass
class PeriodicLattice:
    """Geometry + spectral tables shared by every stochastic check.

    atoms/weights describe the jump measure in integer lattice steps; ``phi``
    holds the modulator values aligned with the atom list.
    """

    sizes: tuple
    h: float
    atom_steps: np.ndarray  # (A, d) int64
    weights: np.ndarray  # (A,)
    phi: np.ndarray  # (A,) complex

    def __post_init__(self):
        sizes = tuple(int(n) for n in np.atleast_1d(self.sizes))
        if len(sizes) not in (1, 2):
            raise InvalidInputError("lattice dimension must be 1 or 2")
        if any(n < 2 for n in sizes):
            raise InvalidInputError("lattice sizes must be at least 2")
        steps = np.atleast_2d(np.asarray(self.atom_steps, dtype=np.int64))
        if steps.shape[1] != len(sizes):
            raise InvalidInputError("atom step dimension mismatch")
        w = np.asarray(self.weights, dtype=float).ravel()
        phi = np.asarray(self.phi, dtype=complex).ravel()
        if len(w) != len(steps) or len(phi) != len(steps):
            raise InvalidInputError("atoms, weights and phi must align")
        if len(w) == 0 or np.any(w <= 0):
            raise InvalidInputError("need at least one atom, all weights positive")
        if np.any(np.abs(phi) > 1 + 1e-12):
            raise InvalidInputError("|phi| must not exceed 1 on the atoms")
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "atom_steps", steps)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "phi", phi)
        self._build()

    @classmethod
    def from_measure(cls, measure: DiscreteLevyMeasure,
                     modulator: JumpModulator, sizes, h: float = 1.0):
        """Wrap a lattice-supported discrete measure onto the torus."""
        steps = measure.locations / h
        if not np.allclose(steps, np.round(steps), rtol=0, atol=1e-9):
            raise InvalidInputError("measure atoms are not on the lattice")
        phi = modulator.validate_on(measure)
        return cls(sizes, h, np.round(steps).astype(np.int64),
                   measure.weights.copy(), phi)

    # -- derived tables ------------------------------------------------------
    def _build(self):
        sizes = self.sizes
        self.d = len(sizes)
        self.n_points = int(np.prod(sizes))
        ks = [np.arange(n) for n in sizes]
        kg = np.meshgrid(*ks, indexing="ij")
        # psi_k on the flat mode index
        psi = np.zeros(sizes)
        sphi = np.zeros(sizes, dtype=complex)
        for step, w, ph in zip(self.atom_steps, self.weights, self.phi):
            angle = sum(2 * np.pi * kg[a] * step[a] / sizes[a]
                        for a in range(self.d))
            psi += w * (np.cos(angle) - 1.0)
            sphi += w * ph * (np.exp(1j * angle) - 1.0)
        self.psi = psi.ravel()
        self.sphi = sphi.ravel()  # sum_a w_a phi_a (e^{i 2 pi k.z/n} - 1)
        # full phase table: phase[k, x] = e^{+2 pi i k.x / n} on flat indices
        blocks = []
        for a, n in enumerate(sizes):
            kk, xx = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
            blocks.append(np.exp(2j * np.pi * kk * xx / n))
        table = blocks[0]
        for b in blocks[1:]:
            table = np.kron(table, b)
        self.phase = np.ascontiguousarray(table)
        self.cum_weights = np.cumsum(self.weights) / self.weights.sum()

    @property
    def total_rate(self) -> float:
        return float(self.weights.sum())

    # -- helpers -------------------------------------------------------------
    def flat_index(self, coords) -> int:
        coords = np.atleast_1d(np.asarray(coords, dtype=np.int64))
        idx = 0
        for a, n in enumerate(self.sizes):
            idx = idx * n + (int(coords[a]) % n)
        return idx

    def alias_coords(self, flat: int) -> np.ndarray:
        """Signed alias coordinates (physical units) of a flat lattice index."""
        out = np.empty(self.d)
        rem = int(flat)
        for a in range(self.d - 1, -1, -1):
            n = self.sizes[a]
            i = rem % n
            rem //= n
            out[a] = ((i + n // 2) % n - n // 2) * self.h
        return out

    def fft(self, f) -> np.ndarray:
        return np.fft.fftn(np.asarray(f, dtype=complex).reshape(self.sizes)).ravel()

    def ifft(self, spec) -> np.ndarray:
        return np.fft.ifftn(np.asarray(spec, dtype=complex).reshape(self.sizes)).ravel()

    def parabolic(self, f, dt: float) -> np.ndarray:
        """P_{t, t+dt} f  =  f * p_dt as a flat array (exact on the torus)."""
        if dt < 0:
            raise InvalidInputError("dt must be nonnegative")
        return self.ifft(self.fft(f) * np.exp(dt * self.psi))

    def transition_array(self, t: float) -> np.ndarray:
        """p_t on the torus as a flat array (spectral, exact)."""
        if t < 0:
            raise InvalidInputError("t must be nonnegative")
        return self.ifft(np.exp(t * self.psi)).real
