"""The four Mellin cutoff kernels and their contour-integral identities.

A Dirichlet series D(s) = sum a(n) n^{-s} turns into a weighted coefficient
sum under each of these vertical-line transforms:

* Cesaro / Riesz:   (1/2 pi i) int Y^s / (s(s+1)...(s+k)) ds
                      = (1/k!) (1 - 1/Y)^k   for Y >= 1, else 0,
* exponential:      e^{-x} = (1/2 pi i) int x^{-s} Gamma(s) ds,
* concentrating:    (1/2 pi i) int_(sigma) exp(pi s^2/Y^2) X^s / Y ds
                      = (1/2 pi) exp(-Y^2 log^2 X / 4 pi),
* compact cutoff:   phi_Y smooth, 1 below 1, 0 above 1 + 1/Y, with Mellin
                    transform Phi_Y(s) = 1/s + O(1/Y).

``apply_kernel`` is the single entry point the counting modules use; it
always evaluates on the coefficient side.  The ``*_contour`` functions
exist to verify the identities by trapezoidal quadrature with explicit
truncation-tail bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import CoefficientTable, TableCoverageError

_WEIGHT_FLOOR = 1e-12  # kernel mass allowed beyond the end of a table


@dataclass(frozen=True)
class Quadrature:
    """Vertical-line trapezoid: abscissa sigma, truncation T, point count."""

    sigma: float
    T: float
    steps: int

    def __post_init__(self):
        if self.T <= 0 or self.steps < 2:
            raise ValueError("need T > 0 and at least 2 quadrature steps")


@dataclass(frozen=True)
class KernelSpec:
    """One of the four cutoffs with its parameters and quadrature settings."""

    kind: str  # "cesaro" | "exponential" | "concentrating" | "compact"
    k: int | None = None
    Y: float | None = None
    quadrature: Quadrature | None = None

    def __post_init__(self):
        if self.kind == "cesaro":
            if self.k is None or self.k < 1:
                raise ValueError("cesaro kernel needs k >= 1")
        elif self.kind == "concentrating":
            if self.Y is None or self.Y <= 0:
                raise ValueError("concentrating kernel needs Y > 0")
        elif self.kind == "compact":
            if self.Y is None or self.Y < 2:
                raise ValueError("compact kernel needs Y >= 2")
        elif self.kind != "exponential":
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.quadrature is not None and self.kind in ("cesaro", "exponential"):
            if self.quadrature.sigma <= 0:
                raise ValueError(f"{self.kind} kernel needs sigma > 0")

    @classmethod
    def cesaro(cls, k, quadrature=None):
        return cls("cesaro", k=int(k), quadrature=quadrature)

    @classmethod
    def exponential(cls, quadrature=None):
        return cls("exponential", quadrature=quadrature)

    @classmethod
    def concentrating(cls, Y, quadrature=None):
        return cls("concentrating", Y=float(Y), quadrature=quadrature)

    @classmethod
    def compact(cls, Y, quadrature=None):
        return cls("compact", Y=float(Y), quadrature=quadrature)


def _vertical_trapezoid(integrand, quad, chunk=1 << 20):
    """(1/2 pi i) int_(sigma) f(s) ds by the trapezoid rule on |Im s| <= T."""
    t = np.linspace(-quad.T, quad.T, quad.steps + 1)
    total = 0.0 + 0.0j
    h = t[1] - t[0]
    for start in range(0, len(t), chunk):
        seg = t[start : start + chunk]
        vals = integrand(quad.sigma + 1j * seg)
        weights = np.ones(len(seg))
        if start == 0:
            weights[0] = 0.5
        if start + chunk >= len(t):
            weights[-1] = 0.5
        total += np.sum(vals * weights)
    return total * h / (2 * np.pi)


# ---------------------------------------------------------------------------
# Cesaro / Riesz means
# ---------------------------------------------------------------------------

def cesaro_closed(Y, k):
    """(1/k!) (1 - 1/Y)^k for Y >= 1, and 0 for Y < 1."""
    Y = float(Y)
    k = int(k)
    if Y < 1.0:
        return 0.0
    return (1.0 - 1.0 / Y) ** k / math.factorial(k)


def cesaro_contour(Y, k, quad):
    """Trapezoidal quadrature of (1/2 pi i) int Y^s / (s...(s+k)) ds.

    The integrand decays like |t|^{-(k+1)}, so the truncation tail beyond
    |Im s| = T is bounded by ``cesaro_tail_bound``.
    """
    Y = float(Y)
    k = int(k)
    if quad.sigma <= 0:
        raise ValueError("cesaro contour needs sigma > 0")

    def integrand(s):
        denom = s.copy()
        for j in range(1, k + 1):
            denom = denom * (s + j)
        return Y**s / denom

    return _vertical_trapezoid(integrand, quad).real


def cesaro_tail_bound(Y, k, quad):
    """Rigorous truncation tail: |integrand| <= Y^sigma / |t|^(k+1) off-axis."""
    return float(Y) ** quad.sigma / (math.pi * k * quad.T**k)


def concentrating_tail_bound(X, Y, quad):
    """Truncation tail of the Gaussian kernel: super-exponential in T/Y.

    |integrand| = exp(pi (sigma^2 - t^2)/Y^2) X^sigma / Y, and
    int_T^inf exp(-pi t^2/Y^2) dt <= (Y^2 / (2 pi T)) exp(-pi T^2/Y^2).
    """
    X, Y = float(X), float(Y)
    sigma, T = quad.sigma, quad.T
    gauss_tail = (Y * Y / (2 * math.pi * T)) * math.exp(-math.pi * T * T / (Y * Y))
    return (X**sigma * math.exp(math.pi * sigma * sigma / (Y * Y)) / Y) * gauss_tail / math.pi


def exp_tail_bound(x, quad):
    """Truncation tail of the Gamma kernel, exponential in T.

    Uses |Gamma(sigma+it)| <= 2 sqrt(2 pi) |t|^{sigma-1/2} e^{-pi|t|/2} for
    |t| >= max(1, 2 sigma) and int_T^inf t^a e^{-bt} dt <= 2 T^a e^{-bT}/b
    when a <= bT/2; requires T comfortably past the abscissa.
    """
    x = float(x)
    sigma, T = quad.sigma, quad.T
    if T < max(2.0, 2.0 * sigma) or (sigma - 0.5) > math.pi * T / 4:
        raise ValueError("tail bound needs T well past the abscissa")
    integral = 2.0 * T ** (sigma - 0.5) * math.exp(-math.pi * T / 2) / (math.pi / 2)
    return x ** (-sigma) * 2.0 * math.sqrt(2 * math.pi) * integral / math.pi


# ---------------------------------------------------------------------------
# Exponential (Gamma) kernel
# ---------------------------------------------------------------------------

_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_vertical(s):
    """Gamma(s) for complex s with Re(s) > 0, vectorized.

    Fixed-coefficient Lanczos approximation (g = 7, 9 terms), relative
    error well below 1e-10 on vertical lines with Re(s) >= 0.5; arguments
    with Re(s) < 0.5 are lifted by the recurrence Gamma(s) = Gamma(s+1)/s.
    """
    s = np.asarray(s, dtype=np.complex128)
    scalar = s.ndim == 0
    s = np.atleast_1d(s)
    if np.any(s.real <= 0):
        raise ValueError("gamma_vertical needs Re(s) > 0")
    shift = s.real < 0.5
    z = np.where(shift, s + 1.0, s)
    x = np.full(z.shape, _LANCZOS_COEFFS[0], dtype=np.complex128)
    for i, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        x = x + c / (z - 1.0 + i)
    t = z + _LANCZOS_G - 0.5
    out = math.sqrt(2 * math.pi) * t ** (z - 0.5) * np.exp(-t) * x
    out = np.where(shift, out / s, out)
    return complex(out[0]) if scalar else out


def exp_contour(x, quad):
    """Quadrature of e^{-x} = (1/2 pi i) int x^{-s} Gamma(s) ds, sigma > 0."""
    x = float(x)
    if x <= 0:
        raise ValueError("x must be positive")
    if quad.sigma <= 0:
        raise ValueError("the Gamma kernel needs sigma > 0")

    def integrand(s):
        return x ** (-s) * gamma_vertical(s)

    return _vertical_trapezoid(integrand, quad).real


# ---------------------------------------------------------------------------
# Concentrating (Gaussian) kernel
# ---------------------------------------------------------------------------

def concentrating_closed(X, Y):
    """(1/2 pi) exp(-Y^2 log^2 X / 4 pi); even in log X."""
    X = float(X)
    Y = float(Y)
    if X <= 0 or Y <= 0:
        raise ValueError("need X > 0 and Y > 0")
    return math.exp(-(Y**2) * math.log(X) ** 2 / (4 * math.pi)) / (2 * math.pi)


def concentrating_contour(X, Y, quad):
    """Quadrature of (1/2 pi i) int exp(pi s^2/Y^2) X^s / Y ds.

    The integrand is entire with Gaussian decay, so any abscissa works and
    T >= 10 Y already puts the truncation tail below 1e-8.
    """
    X = float(X)
    Y = float(Y)

    def integrand(s):
        return np.exp(np.pi * s * s / (Y * Y)) * X**s / Y

    return _vertical_trapezoid(integrand, quad).real


# ---------------------------------------------------------------------------
# Compact cutoff phi_Y / Phi_Y
# ---------------------------------------------------------------------------

def _bump_sigma(u):
    """The standard exp(-1/t) partition step: 0 at u<=0, 1 at u>=1,
    g(u)/(g(u)+g(1-u)) in between; C-infinity and symmetric."""
    u = np.asarray(u, dtype=np.float64)
    lo = u <= 0.0
    hi = u >= 1.0
    mid = ~(lo | hi)
    out = np.zeros(u.shape)
    out[hi] = 1.0
    um = u[mid]
    g = np.exp(-1.0 / um)
    g1 = np.exp(-1.0 / (1.0 - um))
    out[mid] = g / (g + g1)
    return out


def compact_phi(Y, x):
    """Smooth cutoff: 1 for x <= 1, 0 for x >= 1 + 1/Y, monotone between.

    The transition band uses sigma(Y (1 + 1/Y - x)) with the exp(-1/t)
    partition, so phi is C-infinity with phi(1 + 1/(2Y)) = 1/2.
    """
    Y = float(Y)
    if Y < 2:
        raise ValueError("compact cutoff needs Y >= 2")
    x_arr = np.asarray(x, dtype=np.float64)
    scalar = x_arr.ndim == 0
    x_arr = np.atleast_1d(x_arr)
    if np.any(x_arr <= 0):
        raise ValueError("x must be positive")
    out = _bump_sigma(Y * (1.0 + 1.0 / Y - x_arr))
    out[x_arr <= 1.0] = 1.0
    out[x_arr >= 1.0 + 1.0 / Y] = 0.0
    return float(out[0]) if scalar else out


def compact_Phi(Y, s, quad=None):
    """Mellin transform Phi_Y(s) = int_0^infty t^{s-1} phi_Y(t) dt, Re s > 0.

    The piece over [0, 1] integrates to 1/s exactly; the transition band
    [1, 1 + 1/Y] is integrated by composite Gauss-Legendre with the panel
    count scaled to the oscillation t^{i Im s}.  Satisfies
    |Phi_Y(s) - 1/s| <= 2/Y for |s| <= Y/2.
    """
    Y = float(Y)
    s = complex(s)
    if s.real <= 0:
        raise ValueError("Phi_Y is defined for Re(s) > 0")
    if quad is not None:
        nodes_budget = max(int(quad.steps), 32)
    else:
        nodes_budget = 0
    cycles = abs(s.imag) * math.log1p(1.0 / Y) / (2 * math.pi)
    panels = max(8, int(4 * cycles) + 1)
    per_panel = 24
    if nodes_budget:
        panels = max(panels, nodes_budget // per_panel)
    x_gl, w_gl = np.polynomial.legendre.leggauss(per_panel)
    edges = np.linspace(1.0, 1.0 + 1.0 / Y, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    t = (mid[:, None] + half[:, None] * x_gl[None, :]).ravel()
    w = (half[:, None] * w_gl[None, :]).ravel()
    band = np.sum(w * np.exp((s - 1.0) * np.log(t)) * compact_phi(Y, t))
    return 1.0 / s + complex(band)


# ---------------------------------------------------------------------------
# The coefficient-side entry point
# ---------------------------------------------------------------------------

def kernel_weights(kernel, n, X):
    """Per-coefficient weights w(n) the kernel assigns at scale X."""
    n = np.asarray(n, dtype=np.float64)
    if kernel.kind == "exponential":
        return np.exp(-n / X)
    if kernel.kind == "cesaro":
        w = 1.0 - n / X
        w[w < 0] = 0.0
        return w**kernel.k / math.factorial(kernel.k)
    if kernel.kind == "concentrating":
        lg = np.log(X / n)
        return np.exp(-(kernel.Y**2) * lg * lg / (4 * np.pi)) / (2 * np.pi)
    if kernel.kind == "compact":
        return compact_phi(kernel.Y, n / X)
    raise ValueError(f"unknown kernel kind {kernel.kind!r}")


def kernel_support(kernel, X):
    """Largest n at which the kernel weight still exceeds the 1e-12 floor."""
    if kernel.kind == "exponential":
        return int(math.ceil(-X * math.log(_WEIGHT_FLOOR)))
    if kernel.kind == "cesaro":
        return int(math.floor(X))
    if kernel.kind == "concentrating":
        spread = math.sqrt(-4 * math.pi * math.log(2 * math.pi * _WEIGHT_FLOOR))
        return int(math.ceil(X * math.exp(spread / kernel.Y)))
    if kernel.kind == "compact":
        return int(math.ceil(X * (1.0 + 1.0 / kernel.Y)))
    raise ValueError(f"unknown kernel kind {kernel.kind!r}")


def apply_kernel(coeffs, exponent_shift, kernel, X, strict=True):
    """sum_{n >= 1} a(n) n^{-shift} w_kernel(n; X), on the coefficient side.

    With ``strict`` (the default) the table must extend past the point
    where the kernel weight drops below 1e-12.  ``strict=False`` evaluates
    the truncated sum anyway; with nonnegative coefficients that truncation
    only discards nonnegative mass, which is what positivity-domination
    arguments need.
    """
    if not isinstance(coeffs, CoefficientTable):
        raise TypeError("apply_kernel wants a CoefficientTable")
    X = float(X)
    if X <= 0:
        raise ValueError("X must be positive")
    needed = kernel_support(kernel, X)
    if strict and coeffs.n_max < needed:
        raise TableCoverageError(
            f"table '{coeffs.label}' ends at {coeffs.n_max} but the "
            f"{kernel.kind} kernel at X={X:g} carries weight out to n={needed}"
        )
    top = min(coeffs.n_max, needed)
    if top < 1:
        return 0.0
    n = np.arange(1, top + 1, dtype=np.float64)
    a = coeffs.floats()[1 : top + 1]
    w = kernel_weights(kernel, n, X)
    if exponent_shift:
        w = w * n ** (-float(exponent_shift))
    return float(np.dot(a, w))
