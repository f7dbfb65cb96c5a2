"""The planar singular kernel of the axis power symbol at alpha = 1.

The one-dimensional Cauchy semigroup p_t(x) = t / (pi (t^2 + x^2)) generates,
through the time integral

    K(x, y) = integral_0^inf  (d/dt p_t)(x) p_t(y) dt
            = (-x^2 + y^2 + x^2 log|x/y| - y^2 log|y/x|) / (pi^2 (x^2 - y^2)^2),

a -2-homogeneous kernel, antisymmetric under the swap (x, y) -> (y, x) and
vanishing on the diagonal.  Its distributional Fourier transform (with the
e^{+i xi.x} transform) is -M(xi) for M(xi) = |xi_1| / (|xi_1| + |xi_2|),
carried as  -M = (1/2 - M) + (-1/2):  a mean-zero principal-value part plus
a -1/2 point mass at the origin.  Consequently the operator with symbol M is

    (M f)(x) = f(x)/2 - p.v. integral K(y) f(x - y) dy,

which is what :func:`pv_convolve` discretises; the swap identity K(y, x) =
-K(x, y) makes the two axis orientations sum to the identity.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from .exceptions import ConvergenceError, InvalidInputError, SingularPointError
from .grid import GridFunction

__all__ = [
    "cauchy_density",
    "cauchy_density_dt",
    "kernel_closed_form",
    "kernel_numeric",
    "kernel_truncated",
    "kernel_weight_table",
    "pv_convolve",
    "annular_integral",
]

PI2 = math.pi ** 2

# (atanh(q) - q)/q^2 = sum_{m >= 1} q^(2m-1)/(2m+1); 26 terms cover |q| <= 1/2
# to below machine precision, and the closed form is stable for |q| > 1/2
_G_TERMS = 26
_Q_SERIES = 0.5


def cauchy_density(t: float, x) -> np.ndarray | float:
    """p_t(x) = t / (pi (t^2 + x^2)), the 1-stable transition density."""
    if not t > 0:
        raise InvalidInputError("t must be positive")
    x = np.asarray(x, dtype=float)
    out = t / (math.pi * (t * t + x * x))
    return float(out) if out.ndim == 0 else out


def cauchy_density_dt(t: float, x) -> np.ndarray | float:
    """d/dt p_t(x) = (x^2 - t^2) / (pi (t^2 + x^2)^2)."""
    if not t > 0:
        raise InvalidInputError("t must be positive")
    x = np.asarray(x, dtype=float)
    out = (x * x - t * t) / (math.pi * (t * t + x * x) ** 2)
    return float(out) if out.ndim == 0 else out


def _g_of_q(q):
    """(atanh(q) - q) / q^2, odd in q and smooth on (-1, 1).

    The direct expression cancels badly for small q, but there the odd
    series q/3 + q^3/5 + q^5/7 + ... converges geometrically, so the two
    branches overlap with uniform near-machine accuracy.
    """
    q = np.asarray(q, dtype=float)
    out = np.empty_like(q)
    small = np.abs(q) <= _Q_SERIES
    qs = q[small]
    q2 = qs * qs
    acc = np.full_like(qs, 1.0 / (2 * _G_TERMS + 1))
    for m in range(_G_TERMS - 1, 0, -1):
        acc = acc * q2 + 1.0 / (2 * m + 1)
    out[small] = acc * qs
    qb = q[~small]
    out[~small] = (np.arctanh(qb) - qb) / (qb * qb)
    return out


def kernel_closed_form(x, y):
    """K(x, y) in closed form; array-valued over broadcast inputs.

    With S = x^2 + y^2 and q = (x^2 - y^2)/S the kernel is exactly
    (atanh(q) - q) / (pi^2 S q^2), evaluated through a cancellation-free
    branch pair; the swap antisymmetry and the vanishing on the diagonal
    are automatic (the bracket is odd in q).  The kernel is log-singular on
    the coordinate axes and critically singular at the origin; evaluation
    exactly on those lines raises.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    shape = np.broadcast(x, y).shape
    x, y = np.broadcast_to(x, shape), np.broadcast_to(y, shape)
    x2, y2 = x * x, y * y
    s = x2 + y2
    if np.any(s == 0):
        raise SingularPointError("K is singular at the origin")
    if np.any(x2 == 0) or np.any(y2 == 0):
        raise SingularPointError("K is log-singular on the coordinate axes")
    q = (x2 - y2) / s
    out = _g_of_q(q) / (PI2 * s)
    return float(out) if out.ndim == 0 else out


def _integrand(t, x2, y2):
    return t * (x2 - t * t) / ((t * t + x2) ** 2 * (t * t + y2))


def kernel_numeric(x: float, y: float, tol: float = 1e-10) -> float:
    """K(x, y) by adaptive quadrature of the semigroup time integral.

    Rescales to max(|x|, |y|) = 1 (the kernel is -2-homogeneous), splits at
    the sign change t = |x| and at t = |y|, and closes the range with the
    asymptotic tail - independent of the closed form, used as its oracle.
    """
    if x == 0.0 and y == 0.0:
        raise SingularPointError("K is singular at the origin")
    s = max(abs(x), abs(y))
    xb, yb = abs(x) / s, abs(y) / s
    x2, y2 = xb * xb, yb * yb
    big = 1e3
    val, err = integrate.quad(
        _integrand, 0.0, big, args=(x2, y2),
        points=[xb, yb, 1.0], limit=400, epsabs=tol * 0.5, epsrel=1e-13)
    # integrand = -t^-3 (1 - (3 x^2 + y^2)/t^2 + O(t^-4)) for large t
    tail = -1.0 / (2 * big * big) + (3 * x2 + y2) / (4 * big ** 4)
    if err > tol:
        raise ConvergenceError(
            f"kernel quadrature reached {err:.2e} > tol {tol:.2e}",
            estimate=(val + tail) / (PI2 * s * s), error_bound=err)
    return (val + tail) / (PI2 * s * s)


def kernel_truncated(eps: float, T: float, x: float, y: float,
                     tol: float = 1e-10) -> float:
    """Finite-window kernel: integral_eps^T (d/dt p_t)(x) p_t(y) dt."""
    if eps < 0 or T < eps:
        raise InvalidInputError("need 0 <= eps <= T")
    if eps == T:
        return 0.0
    pts = [p for p in sorted({abs(x), abs(y)}) if eps < p < T]
    val, err = integrate.quad(
        lambda t: cauchy_density_dt(t, x) * cauchy_density(t, y),
        eps, T, points=pts or None, limit=400, epsabs=tol * 0.5, epsrel=1e-13)
    if err > tol:
        raise ConvergenceError(
            f"truncated-kernel quadrature reached {err:.2e} > tol {tol:.2e}",
            estimate=val, error_bound=err)
    return val


def annular_integral(a: float, b: float, n_theta: int = 2048,
                     n_r: int = 64) -> float:
    """integral of K over the annulus a < |(x,y)| < b (vanishes exactly:
    the swap antisymmetry makes every circle mean-free)."""
    if not 0 < a < b:
        raise InvalidInputError("need 0 < a < b")
    theta = (np.arange(n_theta) + 0.5) * (2 * np.pi / n_theta)
    nodes, weights = np.polynomial.legendre.leggauss(n_r)
    r = 0.5 * (b - a) * nodes + 0.5 * (b + a)
    vals = np.array([
        (kernel_closed_form(rr * np.cos(theta), rr * np.sin(theta))).sum()
        * (2 * np.pi / n_theta) * rr
        for rr in r])
    return float((weights * vals).sum() * 0.5 * (b - a))


# ---------------------------------------------------------------------------
# discrete principal-value convolution
# ---------------------------------------------------------------------------

def _axis_safe(values, cell):
    """Replace exact zeros by the transverse offset cell/(2e).

    The log singularity along an axis is integrable; sampling the cell at
    that offset reproduces the cell average of the log profile to leading
    order, which is what a midpoint rule should carry there.
    """
    off = cell / (2.0 * math.e)
    return np.where(values == 0.0, off, values)


def _auto_images(n: int) -> int:
    if n <= 128:
        return 3
    if n <= 256:
        return 4
    return 6


def kernel_weight_table(sizes, period, rho: float, images: int | None = None,
                        orientation: int = 1) -> np.ndarray:
    """Midpoint-sampled, periodised kernel weights with the cutoff ball removed.

    Entry (i, j) holds cellarea * sum_images K(offset + m L), the cyclic
    convolution weights of the p.v. sum; offsets inside |y| <= rho are zeroed
    (symmetric exclusion).  ``images`` grows with resolution by default so the
    periodisation tail refines together with the mesh.
    """
    if orientation not in (1, 2):
        raise InvalidInputError("orientation must be 1 or 2")
    n1, n2 = sizes
    L1, L2 = period
    h1, h2 = L1 / n1, L2 / n2
    if images is None:
        images = _auto_images(max(n1, n2))
    off1 = np.fft.fftfreq(n1, d=1.0 / n1) * h1
    off2 = np.fft.fftfreq(n2, d=1.0 / n2) * h2
    X, Y = np.meshgrid(off1, off2, indexing="ij")
    W = np.zeros((n1, n2))
    for m1 in range(-images, images + 1):
        for m2 in range(-images, images + 1):
            XX = _axis_safe(X + m1 * L1, h1)
            YY = _axis_safe(Y + m2 * L2, h2)
            if orientation == 1:
                W += kernel_closed_form(XX, YY)
            else:
                W += kernel_closed_form(YY, XX)
    W *= h1 * h2
    W[X * X + Y * Y <= rho * rho] = 0.0
    return W


def pv_convolve(f: GridFunction, rho: float, orientation: int = 1,
                images: int | None = None) -> GridFunction:
    """Apply the axis multiplier through its kernel: f/2 minus the p.v. sum.

    The cyclic convolution sum_{|y| > rho} K(y) f(x - y) h^2 is evaluated by
    FFT (exactly the same finite sum, up to roundoff); the f/2 term carries
    the kernel's point mass at the origin, which no shrinking-ball sum can
    see.  As rho -> 0 and the grid refines, the result approaches the
    spectral application of |xi_j| / (|xi_1| + |xi_2|) with j = orientation.
    """
    if f.d != 2:
        raise InvalidInputError("pv_convolve requires a 2-d grid")
    min_cell = min(L / n for L, n in zip(f.period, f.sizes))
    if rho < min_cell:
        raise InvalidInputError("cutoff radius is smaller than a grid cell")
    W = kernel_weight_table(f.sizes, f.period, rho, images, orientation)
    conv = np.fft.ifftn(np.fft.fftn(W) * np.fft.fftn(f.samples))
    return f.with_samples(0.5 * f.samples - conv)
