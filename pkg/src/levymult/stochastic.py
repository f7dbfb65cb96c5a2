"""Monte Carlo verification of the jump-martingale construction.

A compound Poisson path on a window (s, u] drives two coupled processes for
a boundary function f on a periodic lattice:

* the parabolic martingale  G_t = P_{t,u} f(x + X_{s,t}),
* the transformed martingale F_t, whose jumps are those of G weighted by the
  modulator phi and whose drift is removed by the compensator integral.

The checks below verify, at Monte Carlo resolution: the jump-compensation
identity (expected jump sums against the intensity measure), the pathwise
quadratic-variation domination of F by G, the moment inequality with the
constant (p* - 1)^p, the L1 mass formula for the dominating process, and the
recovery of the finite-time multiplier by duality against lattice
indicators.  All ensembles are reproducible from (seed, path index) alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _accel
from ._accel import rng as _rng
from .exceptions import InvalidInputError
from .grid import PStar
from .lattice import PeriodicLattice

__all__ = [
    "PoissonPath",
    "MartingalePair",
    "Scenario",
    "sample_path",
    "sample_ensemble",
    "evolve_martingales",
    "evolve_ensemble",
    "martingale_property_check",
    "burkholder_bound_check",
    "subordination_check",
    "levy_system_check",
    "LEVY_FUNCTIONALS",
    "projection_identity_check",
    "l1_mass_check",
    "exchangeability_times",
]


@dataclass(frozen=True)
class PoissonPath:
    """One realisation of jump times and lattice jumps on (s, u]."""

    window: tuple
    times: np.ndarray  # strictly increasing in (s, u]
    atom_indices: np.ndarray
    jumps: np.ndarray  # (n, d) integer lattice steps
    seed: int
    path_index: int

    @property
    def n_jumps(self) -> int:
        return len(self.times)

    def positions(self) -> np.ndarray:
        """Cumulative lattice displacement after each jump (n+1, d), row 0 = 0."""
        if self.n_jumps == 0:
            return np.zeros((1, self.jumps.shape[1] if self.jumps.ndim > 1 else 1),
                            dtype=np.int64)
        return np.vstack([np.zeros((1, self.jumps.shape[1]), dtype=np.int64),
                          np.cumsum(self.jumps, axis=0)])


@dataclass(frozen=True)
class Scenario:
    """A shipped verification setup: lattice, measure, modulator, boundary f."""

    name: str
    lattice: PeriodicLattice
    f: np.ndarray  # flat complex boundary values
    x0: int  # flat base-point index
    window: tuple
    checkpoints: tuple = ()

    def __post_init__(self):
        f = np.asarray(self.f, dtype=complex).ravel()
        if f.size != self.lattice.n_points:
            raise InvalidInputError("boundary function size mismatch")
        if not 0 <= self.x0 < self.lattice.n_points:
            raise InvalidInputError("base point is off the lattice")
        s, u = self.window
        if not s < u:
            raise InvalidInputError("window must satisfy s < u")
        for t in self.checkpoints:
            if not s < t <= u:
                raise InvalidInputError("checkpoints must lie in (s, u]")
        object.__setattr__(self, "f", f)


def sample_ensemble(lat: PeriodicLattice, window, n_paths: int, seed: int,
                    first_path: int = 0):
    """Packed jump data (counts, offsets, times, atom_idx) for an ensemble."""
    s, u = window
    return _rng.sample_ensemble(seed, n_paths, lat.total_rate, s, u,
                                lat.cum_weights, first_path)


def sample_path(lat: PeriodicLattice, window, seed: int,
                path_index: int = 0) -> PoissonPath:
    """A single reproducible path (stream determined by seed and index)."""
    if lat.total_rate <= 0:
        raise InvalidInputError("measure has no mass")
    counts, offsets, times, aidx = sample_ensemble(lat, window, 1, seed,
                                                   first_path=path_index)
    jumps = lat.atom_steps[aidx]
    return PoissonPath(tuple(window), times, aidx, jumps, seed, path_index)


# ---------------------------------------------------------------------------
# single-path trajectories (plain numpy walk; the ensemble kernels are the
# fast path and the two are cross-checked in the test suite)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MartingalePair:
    """Sampled (G_t, F_t) trajectory of one path with quadratic variations."""

    path: PoissonPath
    x0: int
    times: np.ndarray  # jump times then u
    g_values: np.ndarray
    f_values: np.ndarray
    qv_g: np.ndarray  # [G,G] at the sampled times
    qv_f: np.ndarray  # [F,F] at the sampled times
    qv_g_increments: np.ndarray  # per-jump |dG|^2 (before accumulation)
    qv_f_increments: np.ndarray  # per-jump |dF|^2
    p_su_f_x0: complex  # P_{s,u} f (x0)

    @property
    def g_terminal(self) -> complex:
        return complex(self.g_values[-1])

    @property
    def f_terminal(self) -> complex:
        return complex(self.f_values[-1])


def evolve_martingales(lat: PeriodicLattice, path: PoissonPath, x0: int,
                       f) -> MartingalePair:
    """Walk one path, recording G, F and both quadratic variations.

    The compensator between jumps is integrated in closed form per Fourier
    mode, so the trajectory identities are exact to roundoff.
    """
    f = np.asarray(f, dtype=complex).ravel()
    s, u = path.window
    fhat = lat.fft(f)
    psi, sphi, phase = lat.psi, lat.sphi, lat.phase
    n_modes = lat.n_points

    def point(flat, v):
        return (fhat * np.exp((u - v) * psi) * phase[:, flat]).sum() / n_modes

    def panel(v1, v2, flat):
        safe = np.where(psi == 0.0, 1.0, psi)
        ik = np.where(psi == 0.0, v2 - v1,
                      (np.exp((u - v1) * psi) - np.exp((u - v2) * psi)) / safe)
        return ik * phase[:, flat]

    flat = int(x0)
    coords = None
    pf0 = point(flat, s)
    comp_fourier = np.zeros(n_modes, dtype=complex)
    jsum = 0.0 + 0.0j
    qv_g_run = abs(pf0) ** 2
    qv_f_run = 0.0
    v_prev = s
    times_out, g_out, f_out, qvg_out, qvf_out = [], [], [], [], []
    inc_g, inc_f = [], []
    steps = lat.atom_steps
    d = steps.shape[1]
    coords = np.array(np.unravel_index(flat, lat.sizes), dtype=np.int64)
    for t, a in zip(path.times, path.atom_indices):
        comp_fourier += panel(v_prev, t, flat)
        v_prev = t
        old_flat = flat
        coords = (coords + steps[a]) % np.array(lat.sizes)
        flat = int(np.ravel_multi_index(coords, lat.sizes))
        dg = point(flat, t) - point(old_flat, t)
        df = lat.phi[a] * dg
        jsum += df
        inc_g.append(abs(dg) ** 2)
        inc_f.append(abs(df) ** 2)
        qv_g_run += abs(dg) ** 2
        qv_f_run += abs(df) ** 2
        comp = (fhat * sphi * comp_fourier).sum() / n_modes
        times_out.append(t)
        g_out.append(point(flat, t))
        f_out.append(jsum - comp)
        qvg_out.append(qv_g_run)
        qvf_out.append(qv_f_run)
    comp_fourier += panel(v_prev, u, flat)
    comp = (fhat * sphi * comp_fourier).sum() / n_modes
    times_out.append(u)
    g_out.append(f[flat])
    f_out.append(jsum - comp)
    qvg_out.append(qv_g_run)
    qvf_out.append(qv_f_run)
    return MartingalePair(path, int(x0), np.array(times_out),
                          np.array(g_out), np.array(f_out),
                          np.array(qvg_out), np.array(qvf_out),
                          np.array(inc_g), np.array(inc_f), complex(pf0))


# ---------------------------------------------------------------------------
# ensemble checks
# ---------------------------------------------------------------------------

@dataclass
class EnsembleResult:
    n_paths: int
    checkpoints: np.ndarray
    f_cp: np.ndarray
    g_cp: np.ndarray
    f_u: np.ndarray
    g_u: np.ndarray
    qv_f: np.ndarray
    qv_g: np.ndarray
    violations: np.ndarray
    lemma_residual: np.ndarray
    p_su_f_x0: complex


def evolve_ensemble(scn: Scenario, n_paths: int, seed: int,
                    backend=None) -> EnsembleResult:
    lat = scn.lattice
    kern = _accel.get_backend(backend)
    counts, offsets, times, aidx = sample_ensemble(lat, scn.window, n_paths, seed)
    s, u = scn.window
    cps = np.asarray(scn.checkpoints, dtype=float)
    fhat = lat.fft(scn.f)
    out = kern.evolve_ensemble(
        np.asarray(lat.sizes, dtype=np.int64), lat.psi, fhat, lat.sphi,
        lat.phase, lat.atom_steps, lat.phi, scn.f.astype(complex),
        int(scn.x0), float(s), float(u), counts, offsets, times, aidx, cps)
    f_cp, g_cp, f_u, g_u, qv_f, qv_g, viol, lemma = out
    pf0 = (fhat * np.exp((u - s) * lat.psi) * lat.phase[:, scn.x0]).sum() / lat.n_points
    return EnsembleResult(n_paths, cps, f_cp, g_cp, f_u, g_u, qv_f, qv_g,
                          viol, lemma, complex(pf0))


def _mean_se(values):
    values = np.asarray(values)
    n = len(values)
    mean = values.mean(axis=0)
    if np.iscomplexobj(values):
        var = values.real.var(axis=0, ddof=1) + values.imag.var(axis=0, ddof=1)
    else:
        var = values.var(axis=0, ddof=1)
    return mean, np.sqrt(var / n)


@dataclass
class DriftRow:
    t1: float
    t2: float
    process: str
    drift: complex
    stderr: float

    @property
    def sigmas(self) -> float:
        return abs(self.drift) / self.stderr if self.stderr > 0 else 0.0


def martingale_property_check(scn: Scenario, n_paths: int, seed: int,
                              backend=None):
    """Drift rows E[F_{t2} - F_{t1}] and E[G_{t2} - G_{t1}] per checkpoint pair,
    plus rows comparing E[G_t] with P_{s,u}f(x0) (the tower identity)."""
    if len(scn.checkpoints) < 1:
        raise InvalidInputError("scenario needs checkpoints")
    res = evolve_ensemble(scn, n_paths, seed, backend)
    rows = []
    grid = list(res.checkpoints) + [scn.window[1]]
    f_all = np.column_stack([res.f_cp, res.f_u])
    g_all = np.column_stack([res.g_cp, res.g_u])
    start_f = np.zeros(n_paths, dtype=complex)  # F_s == 0
    start_g = np.full(n_paths, res.p_su_f_x0)  # G_s is deterministic
    f_seq = [start_f] + [f_all[:, i] for i in range(len(grid))]
    g_seq = [start_g] + [g_all[:, i] for i in range(len(grid))]
    tgrid = [scn.window[0]] + grid
    for i in range(len(tgrid) - 1):
        for name, seq in (("F", f_seq), ("G", g_seq)):
            mean, se = _mean_se(seq[i + 1] - seq[i])
            rows.append(DriftRow(tgrid[i], tgrid[i + 1], name, complex(mean),
                                 float(se)))
    tower = []
    for i, t in enumerate(grid):
        mean, se = _mean_se(g_all[:, i])
        tower.append((t, complex(mean), float(se), res.p_su_f_x0))
    return rows, tower


@dataclass
class MomentRow:
    p: float
    lhs: float  # E |F_u|^p
    lhs_se: float
    rhs: float  # (p*-1)^p E |G_u|^p
    rhs_se: float

    @property
    def margin_sigmas(self) -> float:
        se = math.hypot(self.lhs_se, self.rhs_se)
        return (self.rhs - self.lhs) / se if se > 0 else math.inf

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs + 3.0 * math.hypot(self.lhs_se, self.rhs_se)


def burkholder_bound_check(scn: Scenario, p_list, n_paths: int, seed: int,
                           backend=None) -> list[MomentRow]:
    """E|F_u|^p against (p* - 1)^p E|G_u|^p, with Monte Carlo errors."""
    res = evolve_ensemble(scn, n_paths, seed, backend)
    rows = []
    for p in p_list:
        cp = PStar(p).bound ** p
        lm, ls = _mean_se(np.abs(res.f_u) ** p)
        rm, rs = _mean_se(cp * np.abs(res.g_u) ** p)
        rows.append(MomentRow(p, float(lm), float(ls), float(rm), float(rs)))
    return rows


def subordination_check(scn: Scenario, n_paths: int, seed: int, backend=None):
    """Exact pathwise check: jumps of [G,G] dominate jumps of [F,F].

    Returns (violation count, max Lemma-residual, qv domination failures).
    The residual |F_t + P_{s,u}f(x0) - G_t| is the phi == 1 pathwise identity
    and is only meaningful for such scenarios.
    """
    res = evolve_ensemble(scn, n_paths, seed, backend)
    qv_fail = int((res.qv_f > res.qv_g + 1e-12).sum())
    return int(res.violations.sum()), float(res.lemma_residual.max()), qv_fail


# ---------------------------------------------------------------------------
# the jump-compensation (Levy system) identity
# ---------------------------------------------------------------------------

# fid, needs (p1, p2); rhs computed by deterministic quadrature
LEVY_FUNCTIONALS = {
    "ones": (0, 0.0, 0.0),
    "jump_is_atom0": (1, 0.0, 0.0),
    "jump_coord_1": (2, 1.0, 0.0),
    "time_weighted_jump_1": (3, 1.0, 0.0),
    "position_cos_jump_1": (4, 1.0, 0.0),  # p2 filled with the lattice period
}


def _levy_functional_grid(lat: PeriodicLattice, fid: int, p1: float, p2: float,
                          v: float, s: float) -> np.ndarray:
    """F(v, y, y + z_a) on the whole lattice, shape (A, P)."""
    P = lat.n_points
    d = lat.d
    coords = np.unravel_index(np.arange(P), lat.sizes)
    alias = np.stack([((coords[a] + lat.sizes[a] // 2) % lat.sizes[a]
                       - lat.sizes[a] // 2) * lat.h for a in range(d)])
    A = len(lat.weights)
    out = np.empty((A, P))
    for a in range(A):
        z = lat.atom_steps[a] * lat.h
        if fid == 0:
            out[a] = 1.0
        elif fid == 1:
            out[a] = 1.0 if a == int(p1) else 0.0
        elif fid == 2:
            out[a] = z[int(p1) - 1]
        elif fid == 3:
            out[a] = (v - s) * z[int(p1) - 1]
        elif fid == 4:
            j = int(p1) - 1
            out[a] = np.cos(2 * np.pi * alias[j] / p2) * z[j]
        else:
            raise InvalidInputError(f"unknown functional id {fid}")
    return out


def _levy_rhs(lat: PeriodicLattice, fid: int, p1: float, p2: float,
              s: float, t: float, tol: float = 1e-10) -> float:
    """integral_s^t sum_a w_a E F(v, X_{s,v-}, X_{s,v-} + z_a) dv by
    Gauss-Legendre panels doubled until stable."""
    def integrand(v):
        p = lat.transition_array(v - s)  # distribution of X_{s,v-}
        grid = _levy_functional_grid(lat, fid, p1, p2, v, s)
        return float((lat.weights[:, None] * grid * p[None, :]).sum())

    panels = 4
    prev = None
    while panels <= 512:
        nodes, weights = np.polynomial.legendre.leggauss(8)
        total = 0.0
        edges = np.linspace(s, t, panels + 1)
        for a, b in zip(edges[:-1], edges[1:]):
            mid, half = 0.5 * (a + b), 0.5 * (b - a)
            total += half * sum(w * integrand(mid + half * x)
                                for x, w in zip(nodes, weights))
        if prev is not None and abs(total - prev) < tol * max(1.0, abs(total)):
            return total
        prev = total
        panels *= 2
    return prev


@dataclass
class LevySystemRow:
    name: str
    lhs: float
    stderr: float
    rhs: float

    @property
    def sigmas(self) -> float:
        if self.stderr == 0.0:
            return 0.0 if self.lhs == self.rhs else math.inf
        return abs(self.lhs - self.rhs) / self.stderr

    @property
    def passed(self) -> bool:
        return abs(self.lhs - self.rhs) <= 3.0 * self.stderr or \
            abs(self.lhs - self.rhs) <= 1e-12


def levy_system_check(lat: PeriodicLattice, window, n_paths: int, seed: int,
                      functionals=None, backend=None) -> list[LevySystemRow]:
    """Monte Carlo jump sums against the compensator integral, per functional."""
    s, t = window
    kern = _accel.get_backend(backend)
    counts, offsets, times, aidx = sample_ensemble(lat, window, n_paths, seed)
    rows = []
    names = functionals if functionals is not None else list(LEVY_FUNCTIONALS)
    for name in names:
        if name not in LEVY_FUNCTIONALS:
            raise InvalidInputError(
                f"unknown functional {name!r}; the shipped library has "
                f"{sorted(LEVY_FUNCTIONALS)} (all bounded on the lattice)")
        fid, p1, p2 = LEVY_FUNCTIONALS[name]
        if fid == 4:
            p2 = lat.sizes[int(p1) - 1] * lat.h
        sums = kern.levy_ensemble(np.asarray(lat.sizes, dtype=np.int64), lat.h,
                                  lat.atom_steps, float(s), counts, offsets,
                                  times, aidx, fid, float(p1), float(p2))
        mean, se = _mean_se(sums)
        rhs = _levy_rhs(lat, fid, p1, p2, s, t)
        rows.append(LevySystemRow(name, float(mean), float(se), rhs))
    return rows


# ---------------------------------------------------------------------------
# multiplier recovery by duality
# ---------------------------------------------------------------------------

@dataclass
class ProjectionResult:
    h_mc: np.ndarray
    h_spec: np.ndarray
    l2_error: float
    stderr_norm: float
    spec_norm: float
    mode_table: list  # (k, h_spec_k, h_mc_k, se_k)
    error_curve: list  # (n, l2 error) over nested prefixes
    grouped_curve: list  # (n, mean l2 error over disjoint n-path groups)


def finite_time_lattice_symbol(lat: PeriodicLattice, s: float) -> np.ndarray:
    """m_s at the lattice frequencies: (1 - e^{2|s| psi}) sphi / psi, 0 at zeros."""
    out = np.zeros(lat.n_points, dtype=complex)
    nz = lat.psi != 0.0
    # sphi equals the modulated exponent: the sine parts cancel by symmetry
    out[nz] = (1.0 - np.exp(2.0 * abs(s) * lat.psi[nz])) \
        * lat.sphi[nz] / lat.psi[nz]
    return out


def projection_identity_check(lat: PeriodicLattice, f, s: float,
                              n_paths: int, seed: int, n_curve=None,
                              backend=None,
                              max_rate_window: float = 50.0) -> ProjectionResult:
    """Recover the finite-time multiplier from path functionals.

    The duality pairing of F_u against lattice indicators recovers, path by
    path, H(w) = F_u(w - X_{s,u}); its ensemble mean converges to the
    function with spectrum m_s(k) fhat(k).  Works on the window (s, 0].
    Long windows blow up the per-path jump count and hence the Monte Carlo
    variance, so |s| * rate is guarded.
    """
    if not s < 0:
        raise InvalidInputError("s must be negative (window (s, 0])")
    if abs(s) * lat.total_rate > max_rate_window:
        raise InvalidInputError(
            f"window depth |s| * rate = {abs(s) * lat.total_rate:.3g} exceeds "
            f"the variance guard {max_rate_window}")
    f = np.asarray(f, dtype=complex).ravel()
    if f.size != lat.n_points:
        raise InvalidInputError("boundary function size mismatch")
    u = 0.0
    kern = _accel.get_backend(backend)
    counts, offsets, times, aidx = sample_ensemble(lat, (s, u), n_paths, seed)
    fhat = lat.fft(f)
    rows = kern.projection_ensemble(
        np.asarray(lat.sizes, dtype=np.int64), lat.psi, fhat, lat.sphi,
        lat.phase, lat.atom_steps, lat.phi, float(s), float(u),
        counts, offsets, times, aidx)
    h_spec = lat.ifft(finite_time_lattice_symbol(lat, s) * fhat)
    mean_rows = rows.mean(axis=0)
    var_rows = (rows.real.var(axis=0, ddof=1) + rows.imag.var(axis=0, ddof=1))
    se_rows = np.sqrt(var_rows / n_paths)
    h_mc = lat.ifft(mean_rows)
    err = float(np.linalg.norm(h_mc - h_spec))
    stderr_norm = float(np.sqrt((var_rows / n_paths).sum() / lat.n_points))
    table = [(int(k), complex(hs), complex(hm), float(se))
             for k, (hs, hm, se) in enumerate(
                 zip(finite_time_lattice_symbol(lat, s) * fhat, mean_rows, se_rows))]
    curve = []
    grouped = []
    if n_curve:
        for n in n_curve:
            if n > n_paths:
                raise InvalidInputError("curve size exceeds the ensemble")
            hm = lat.ifft(rows[:n].mean(axis=0))
            curve.append((int(n), float(np.linalg.norm(hm - h_spec))))
            # rms of the error over disjoint n-path groups: its square has
            # expectation trace(cov)/n exactly, so the n^{-1/2} scale is
            # pinned far more tightly than by a single prefix
            k = n_paths // n
            sq = [np.linalg.norm(
                lat.ifft(rows[g * n:(g + 1) * n].mean(axis=0)) - h_spec) ** 2
                for g in range(k)]
            grouped.append((int(n), float(np.sqrt(np.mean(sq)))))
    return ProjectionResult(h_mc, h_spec, err, stderr_norm,
                            float(np.linalg.norm(h_spec)), table, curve,
                            grouped)


# ---------------------------------------------------------------------------
# L1 mass of the dominating process
# ---------------------------------------------------------------------------

def l1_mass_check(lat: PeriodicLattice, f, window, n_paths: int, seed: int):
    """Space-integrated mean of the dominating process |F|_t vs its closed form.

    The exact value is 4 (t-s) (sum_a w_a |phi_a|) ||f||_1, which reduces to
    4 (t-s) |nu| ||f||_1 when |phi| == 1.  The jump half of the estimator is
    the only random part: each jump contributes 2 ||f||_1 |phi(jump)|, the
    compensator half is deterministic.  Returns (mc, stderr, closed_form).
    """
    s, t = window
    f = np.asarray(f, dtype=complex).ravel()
    norm1 = float(np.abs(f).sum() * lat.h ** lat.d)
    counts, offsets, times, aidx = sample_ensemble(lat, window, n_paths, seed)
    abs_phi = np.abs(lat.phi)
    csum = np.concatenate([[0.0], np.cumsum(abs_phi[aidx])])
    per_path = csum[offsets[1:]] - csum[offsets[:-1]]
    modulated_rate = float((lat.weights * abs_phi).sum())
    comp_part = (t - s) * modulated_rate
    values = 2.0 * norm1 * (per_path + comp_part)
    mean, se = _mean_se(values)
    closed = 4.0 * (t - s) * modulated_rate * norm1
    return float(mean), float(se), closed


def exchangeability_times(lat: PeriodicLattice, window, n_paths: int,
                          seed: int):
    """Pooled jump times of the modal-count paths, normalised to (0, 1].

    Conditioned on the jump count these are uniform order statistics, so the
    pooled sample should pass a uniformity test.
    """
    s, u = window
    counts, offsets, times, aidx = sample_ensemble(lat, window, n_paths, seed)
    pos = counts[counts > 0]
    if len(pos) == 0:
        raise InvalidInputError("no jumps in the ensemble")
    modal = int(np.bincount(pos).argmax())
    sel = np.zeros(len(times), dtype=bool)
    for m in np.nonzero(counts == modal)[0]:
        sel[offsets[m]:offsets[m + 1]] = True
    return (times[sel] - s) / (u - s)
