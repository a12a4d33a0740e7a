"""Ramanujan tau, cusp-form partial sums, and their moment statistics.

The discriminant form Delta(z) = q prod (1-q^n)^24 = sum tau(n) q^n is the
one built-in cusp form (weight 12, level 1); other forms load from the
coefficient cache format.  The module computes

* tau(1..N) exactly, as the coefficients of q * (eta-cube series)^8 where
  the eta-cube series sum (-1)^m (2m+1) q^{m(m+1)/2} has sparse triangular
  support, so the eighth power is seven sparse-by-dense multiplications,
* partial sums S^nu(n) = sum_{m <= n} a(m)/m^nu (exact integers at nu = 0,
  compensated floating accumulation otherwise),
* the exponentially smoothed second moment
  sum S(n)^2 / n^{k-1} e^{-n/X}, which grows like C X^{3/2} with
  C = Gamma(3/2)/(4 pi^2) * L(3/2, f x f~) / zeta(3); the zeta(3) in the
  Rankin-Selberg normalization cancels, leaving
  C = Gamma(3/2)/(4 pi^2) * sum a(n)^2 / n^{k + 1/2},
* sign-change scans of S^nu over short windows,
* sharp-sum averages over long ranges and short intervals.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .arith import CoefficientTable, TableCoverageError

_TAU_N_LIMIT = 10**6  # keeps every ladder intermediate far inside 128 bits

# Five 31-bit primes: products (2m+1) * residue stay under 2^43 and the
# sparse accumulation under 2^54, so the int64 passes are exact; the CRT
# modulus (~2^155) covers anything a 128-bit table can legally hold.
_CRT_PRIMES = (2147483647, 2147483629, 2147483587, 2147483579, 2147483563)


def _eta_cube_support(degree):
    """Exponents m(m+1)/2 <= degree and coefficients (-1)^m (2m+1)."""
    exps = []
    coeffs = []
    m = 0
    while m * (m + 1) // 2 <= degree:
        exps.append(m * (m + 1) // 2)
        coeffs.append((2 * m + 1) * (-1 if m % 2 else 1))
        m += 1
    return np.array(exps, dtype=np.int64), np.array(coeffs, dtype=np.int64)


def tau_table(n_max):
    """Exact tau(n) for 1 <= n <= n_max (index 0 = 0).

    Seven sparse-by-dense multiplications per residue class, followed by an
    exact CRT reconstruction.  Any value outside the signed 128-bit range
    would fail table construction loudly, so the reconstruction can never
    wrap silently.
    """
    n_max = int(n_max)
    if n_max < 1:
        raise ValueError("need n_max >= 1")
    if n_max > _TAU_N_LIMIT:
        raise ValueError(f"tau table limited to N <= {_TAU_N_LIMIT}")
    degree = n_max - 1  # tau(n) = [q^(n-1)] (eta-cube series)^8
    exps, coeffs = _eta_cube_support(degree)
    residues = []
    for p in _CRT_PRIMES:
        base = np.zeros(degree + 1, dtype=np.int64)
        base[exps] = coeffs % p
        cur = base.copy()
        for _ in range(7):
            acc = np.zeros(degree + 1, dtype=np.int64)
            for e, c in zip(exps.tolist(), coeffs.tolist()):
                acc[e:] += c * cur[: degree + 1 - e]
            cur = acc % p
        residues.append(cur)
    modulus = 1
    for p in _CRT_PRIMES:
        modulus *= p
    basis = []
    for p in _CRT_PRIMES:
        m_i = modulus // p
        basis.append(m_i * pow(m_i, -1, p))
    half = modulus // 2
    combined = sum(
        res.astype(object) * b for res, b in zip(residues, basis)
    ) % modulus
    values = [0] * (n_max + 1)
    for n in range(1, n_max + 1):
        v = combined[n - 1]
        values[n] = v - modulus if v > half else v
    return CoefficientTable("tau", values)


def tau_bruteforce(n_max):
    """tau by direct expansion of q * prod_{j <= N}(1 - q^j)^24, exact ints.

    Quadratic-cost oracle for small N; shares nothing with the sparse ladder.
    """
    n_max = int(n_max)
    degree = n_max - 1
    poly = [1] + [0] * degree
    for j in range(1, degree + 1):
        for _ in range(24):
            # multiply by (1 - q^j)
            for i in range(degree, j - 1, -1):
                poly[i] -= poly[i - j]
    values = [0] * (n_max + 1)
    for n in range(1, n_max + 1):
        values[n] = poly[n - 1]
    return CoefficientTable("tau", values)


@dataclass
class CuspFormSeries:
    """A cusp form as (weight, exact coefficient table a(1..N), label)."""

    weight: int
    coeffs: CoefficientTable
    label: str
    _prefix_floats: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.weight < 1:
            raise ValueError("weight must be positive")
        if self.weight == 12 and self.label == "delta" and self.coeffs[1] != 1:
            raise ValueError("delta must be normalized with a(1) = 1")

    @property
    def n_max(self):
        return self.coeffs.n_max

    def prefix_floats(self):
        """S_f(0..N) as float64 (exact integer prefix sums, then rounded)."""
        if self._prefix_floats is None:
            acc = list(itertools.accumulate(self.coeffs.tolist()))
            self._prefix_floats = np.array([float(v) for v in acc])
        return self._prefix_floats


def delta_form(n_max):
    """The built-in weight-12 form with tau coefficients."""
    return CuspFormSeries(weight=12, coeffs=tau_table(n_max), label="delta")


@dataclass
class PartialSumSeries:
    """S^nu(n) = sum_{m <= n} a(m)/m^nu, with exact ints kept at nu = 0."""

    base: CuspFormSeries
    nu: float
    values: np.ndarray
    exact_values: list | None = None

    @property
    def n_max(self):
        return len(self.values) - 1


def partial_sums(form, nu):
    """Prefix sums of a(m)/m^nu; Kahan-compensated for nu > 0."""
    nu = float(nu)
    if nu < 0:
        raise ValueError("nu must be nonnegative")
    coeffs = form.coeffs
    if nu == 0.0:
        exact = list(itertools.accumulate(coeffs.tolist()))
        values = np.array([float(v) for v in exact])
        return PartialSumSeries(form, 0.0, values, exact_values=exact)
    n = np.arange(len(coeffs), dtype=np.float64)
    n[0] = 1.0
    terms = coeffs.floats() * n ** (-nu)
    terms[0] = 0.0
    values = np.empty(len(terms))
    total = 0.0
    comp = 0.0
    for i, t in enumerate(terms.tolist()):
        y = t - comp
        s = total + y
        comp = (s - total) - y
        total = s
        values[i] = total
    return PartialSumSeries(form, nu, values)


def smoothed_second_moment(form, X):
    """sum_{n <= 40X} S_f(n)^2 / n^{k-1} e^{-n/X}.

    The 40X truncation leaves exponential mass below 1e-17, invisible at
    double precision; partial sums convert to float before squaring.
    """
    X = float(X)
    if X <= 0:
        raise ValueError("X must be positive")
    top = int(math.ceil(40 * X))
    if form.n_max < top:
        raise TableCoverageError(
            f"form '{form.label}' tabulated to {form.n_max}, needs {top} for X={X:g}"
        )
    S = form.prefix_floats()[1 : top + 1]
    n = np.arange(1, top + 1, dtype=np.float64)
    return float(np.sum(S * S * n ** (1 - form.weight) * np.exp(-n / X)))


def rankin_constant(form, n_trunc):
    """Truncated smoothed-moment constant and a tail-size estimate.

    C = Gamma(3/2)/(4 pi^2) sum_{n <= N} a(n)^2 / n^{k + 1/2}.  The Deligne
    bound a(n)^2 <= d(n)^2 n^{k-1} leaves a tail ~ sum_{n > N} d(n)^2 n^{-3/2};
    the returned bound uses the average order sum_{n<=x} d(n)^2 ~ x log^3 x / pi^2
    by partial summation (a calibrated overestimate, decreasing in N).
    """
    n_trunc = int(n_trunc)
    if n_trunc < 1 or n_trunc > form.n_max:
        raise ValueError("n_trunc must lie within the tabulated range")
    a = form.coeffs.floats()[1 : n_trunc + 1]
    n = np.arange(1, n_trunc + 1, dtype=np.float64)
    series = float(np.sum(a * a * n ** (-(form.weight + 0.5))))
    front = math.gamma(1.5) / (4 * math.pi**2)
    # Partial summation against sum_{n<=x} d(n)^2 ~ x log^3 x / pi^2, with a
    # 3x safety factor absorbing the positive lower-order average terms
    # (checked against explicit extension of the series during calibration).
    L = math.log(max(n_trunc, 3))
    poly = 2 * L**3 + 18 * L**2 + 72 * L + 144
    tail = front * 3.0 * poly / (math.pi**2 * math.sqrt(n_trunc))
    return front * series, tail


def sign_changes(series, X, r):
    """Positions n in [X, X + X^r] where S^nu changes sign.

    Zeros are bridged: a zero value is skipped and the comparison uses the
    last nonzero sign, so an exact zero never counts as two changes.
    """
    X = int(X)
    r = float(r)
    if not 0 < r <= 1:
        raise ValueError("r must lie in (0, 1]")
    window = int(math.floor(X**r))
    hi = X + window
    if hi + 1 > series.n_max:
        raise TableCoverageError(
            f"sign scan window [{X}, {hi}] exceeds the table (n_max={series.n_max})"
        )
    vals = series.values
    changes = []
    prev_sign = 0
    prev_n = None
    for n in range(X, hi + 1):
        v = vals[n]
        if v == 0.0:
            continue
        sign = 1 if v > 0 else -1
        if prev_sign and sign != prev_sign:
            changes.append(prev_n)
        prev_sign = sign
        prev_n = n
    return changes


def classical_average_ratio(form, X):
    """sum_{n <= X} S_f(n)^2 / X^{k + 1/2}: the sharp-moment ratio that
    stabilizes as X grows (its log-log slope against X is k + 1/2)."""
    X = int(X)
    if form.n_max < X:
        raise TableCoverageError(f"table ends at {form.n_max}, need {X}")
    S = form.prefix_floats()[1 : X + 1]
    return float(np.sum(S * S)) / float(X) ** (form.weight + 0.5)


def short_interval_average(form, X):
    """Window-normalized second moment around X:

        (1 / (X^{2/3} (log X)^{1/6})) sum_{|n - X| < X^{2/3} (log X)^{1/6}} S_f(n)^2.
    """
    X = int(X)
    width = X ** (2.0 / 3.0) * math.log(X) ** (1.0 / 6.0)
    lo = max(1, int(math.floor(X - width)) + 1)
    hi = int(math.ceil(X + width)) - 1
    if form.n_max < hi:
        raise TableCoverageError(f"table ends at {form.n_max}, window needs {hi}")
    S = form.prefix_floats()[lo : hi + 1]
    return float(np.sum(S * S)) / width
