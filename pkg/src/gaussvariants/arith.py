"""Exact integer and character arithmetic shared by every counting engine.

This module provides the primitives everything else is built on:

* ``r_d(n)``, the number of representations of n as an ordered sum of d
  squares of integers (signs counted), tabulated exactly by repeated
  additive convolution of the one-dimensional squares indicator,
* divisor-count sieves d(n) and d_o(n) (all / odd divisors),
* the Kronecker symbol (a/n) extended to all integer bottoms,
* the Gauss-sum sign eps_d (1 for d = 1 mod 4, i for d = 3 mod 4),
* truncated Dirichlet L-series with removed Euler factors and an honest
  integral tail bound,
* the little-endian binary cache format used to persist coefficient
  tables between runs.

All tables hold exact integers.  Entries are checked against the signed
128-bit range at construction time so that a silent wraparound can never
poison a downstream identity check.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

INT128_MAX = (1 << 127) - 1
INT128_MIN = -(1 << 127)

# Largest accumulation allowed on the fast int64 path; convolutions whose
# worst-case partial sums could exceed this fall back to exact Python ints.
_INT64_SAFE = 1 << 62

CACHE_MAGIC = b"GVCT"
CACHE_VERSION = 1


class TableCoverageError(ValueError):
    """A coefficient table is too short for the requested computation."""


class TableOverflowError(OverflowError):
    """A table entry left the signed 128-bit range."""


class CoefficientTable:
    """Exact integer sequence a(0..N) with 128-bit-bounded entries.

    Values are stored as a numpy int64 array when every entry fits, and as
    a plain list of Python ints otherwise.  Tables are immutable after
    construction and safe to share across threads.
    """

    __slots__ = ("label", "n_max", "_small", "_big")

    def __init__(self, label, values):
        self.label = str(label)
        if isinstance(values, np.ndarray):
            if not np.issubdtype(values.dtype, np.integer):
                raise TypeError("coefficient tables hold integers")
            arr = values.astype(np.int64, copy=True)
            arr.setflags(write=False)
            self._small = arr
            self._big = None
            self.n_max = len(arr) - 1
        else:
            vals = [int(v) for v in values]
            lo, hi = min(vals), max(vals)
            if lo < INT128_MIN or hi > INT128_MAX:
                raise TableOverflowError(
                    f"table '{label}' has an entry outside the signed 128-bit range"
                )
            if lo >= np.iinfo(np.int64).min and hi <= np.iinfo(np.int64).max:
                arr = np.array(vals, dtype=np.int64)
                arr.setflags(write=False)
                self._small = arr
                self._big = None
            else:
                self._small = None
                self._big = vals
            self.n_max = len(vals) - 1
        if self.n_max < 0:
            raise ValueError("empty coefficient table")

    def __len__(self):
        return self.n_max + 1

    def __getitem__(self, n):
        if isinstance(n, slice):
            src = self._big if self._small is None else self._small
            return [int(v) for v in src[n]]
        return int(self._small[n]) if self._big is None else self._big[n]

    def __eq__(self, other):
        if not isinstance(other, CoefficientTable):
            return NotImplemented
        return (
            self.label == other.label
            and self.n_max == other.n_max
            and self.tolist() == other.tolist()
        )

    def __repr__(self):
        return f"CoefficientTable(label={self.label!r}, n_max={self.n_max})"

    def tolist(self):
        return list(self._big) if self._small is None else self._small.tolist()

    def floats(self):
        """Entries as float64 (lossy for entries beyond 2^53)."""
        if self._small is not None:
            return self._small.astype(np.float64)
        return np.array([float(v) for v in self._big], dtype=np.float64)

    def ints(self):
        """Entries as an int64 numpy array; raises if any entry is too wide."""
        if self._small is None:
            raise TableOverflowError(f"table '{self.label}' does not fit in int64")
        return self._small

    def require(self, n, what=""):
        if n > self.n_max:
            raise TableCoverageError(
                f"table '{self.label}' covers n <= {self.n_max}, "
                f"but {what or 'the computation'} needs n <= {n}"
            )


# ---------------------------------------------------------------------------
# Kronecker symbol and eps_d
# ---------------------------------------------------------------------------

def kronecker(a, n):
    """Kronecker symbol (a/n), extended to all integer bottoms.

    Agrees with the Jacobi symbol for odd positive n and is completely
    multiplicative in both arguments; (a/1) = 1 and (a/0) = [|a| = 1].
    """
    a = int(a)
    n = int(n)
    if n == 0:
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -sign
    # (a/2) factor per power of two in n: 0 unless a odd, then +-1 by a mod 8
    v2 = 0
    while n % 2 == 0:
        n //= 2
        v2 += 1
    if v2 % 2 == 1 and a % 8 in (3, 5):
        sign = -sign
    # Jacobi loop on the odd part
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def epsilon(d):
    """Sign of the quadratic Gauss sum: 1 if d = 1 mod 4, i if d = 3 mod 4.

    Exact: returns complex(1, 0) or complex(0, 1). Rejects even d.
    """
    d = int(d)
    if d % 2 == 0:
        raise ValueError(f"eps_d needs odd d, got {d}")
    return complex(1, 0) if d % 4 == 1 else complex(0, 1)


def epsilon_quarter(d, power=1):
    """Exponent q mod 4 with eps_d**power = i**q.  Exact integer bookkeeping."""
    d = int(d)
    if d % 2 == 0:
        raise ValueError(f"eps_d needs odd d, got {d}")
    base = 0 if d % 4 == 1 else 1
    return (base * power) % 4


# ---------------------------------------------------------------------------
# Prime machinery (shared sieves, lazily grown)
# ---------------------------------------------------------------------------

_SPF = np.zeros(2, dtype=np.int64)  # smallest prime factor; grown on demand


def smallest_prime_factors(limit):
    """Smallest-prime-factor array for 0..limit (spf[0] = spf[1] = 0)."""
    global _SPF
    if len(_SPF) <= limit:
        n = int(limit) + 1
        spf = np.zeros(n, dtype=np.int64)
        for p in range(2, int(math.isqrt(n - 1)) + 1):
            if spf[p] == 0:
                sl = spf[p * p :: p]
                sl[sl == 0] = p
        rest = np.arange(n, dtype=np.int64)
        spf[spf == 0] = rest[spf == 0]
        spf[0] = spf[1] = 0
        _SPF = spf
    return _SPF


def primes_up_to(limit):
    spf = smallest_prime_factors(limit)
    idx = np.arange(len(spf))
    return idx[(idx >= 2) & (spf == idx) & (idx <= limit)]


def factorize(n):
    """Prime factorization [(p, multiplicity), ...] via the shared SPF sieve."""
    n = int(n)
    if n <= 0:
        raise ValueError("factorize needs a positive integer")
    spf = smallest_prime_factors(n)
    out = []
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


# ---------------------------------------------------------------------------
# Sums of d squares
# ---------------------------------------------------------------------------

def _squares_indicator(n_max):
    r1 = np.zeros(n_max + 1, dtype=np.int64)
    r1[0] = 1
    m = np.arange(1, math.isqrt(n_max) + 1)
    r1[m * m] = 2
    return r1


def _convolve_with_r1(cur, n_max):
    """One additive convolution with the squares indicator, exactly.

    With nonnegative entries the largest possible partial accumulation is
    (1 + 2*sqrt(N)) * max(cur); if that certificate fits comfortably in
    int64 we convolve with numpy, otherwise with Python ints.
    """
    root = math.isqrt(n_max)
    if isinstance(cur, np.ndarray):
        worst = (1 + 2 * root) * int(cur.max(initial=0))
        if worst < _INT64_SAFE:
            out = cur.copy()
            for m in range(1, root + 1):
                sq = m * m
                out[sq:] += 2 * cur[: n_max + 1 - sq]
            return out
        cur = [int(v) for v in cur]
    out = list(cur)
    for m in range(1, root + 1):
        sq = m * m
        for i in range(sq, n_max + 1):
            out[i] += 2 * cur[i - sq]
    return out


def r_d_table(d, n_max):
    """Exact table of r_d(n), 0 <= n <= n_max, by d-fold convolution of r_1.

    r_1(0) = 1 and r_1(m^2) = 2 for m >= 1 (the two signs), so each
    convolution step adds one squared coordinate.  All arithmetic exact.
    """
    d = int(d)
    n_max = int(n_max)
    if d < 1 or n_max < 0:
        raise ValueError("need d >= 1 and n_max >= 0")
    cur = _squares_indicator(n_max)
    for _ in range(d - 1):
        cur = _convolve_with_r1(cur, n_max)
    return CoefficientTable(f"r_{d}", cur)


_HALF_COUNT_CACHE = {}


def _enumerated_norm_counts(dim, n_max):
    """#{x in Z^dim : |x|^2 = n} for n <= n_max by raw grid enumeration.

    Direct enumeration only; no coefficient tables involved.  dim <= 4.
    """
    key = (dim, n_max)
    hit = _HALF_COUNT_CACHE.get(key)
    if hit is not None:
        return hit
    root = math.isqrt(n_max)
    side = np.arange(-root, root + 1, dtype=np.int64)
    sq = side * side
    norms = sq
    for _ in range(dim - 1):
        norms = norms[:, None] + sq[None, :]
        norms = norms.ravel()
        norms = norms[norms <= n_max]
    counts = np.bincount(norms, minlength=n_max + 1)
    _HALF_COUNT_CACHE[key] = counts
    return counts


def r_d_bruteforce(d, n):
    """Independent enumeration oracle for r_d(n).

    Enumerates lattice vectors directly (splitting d > 3 into two
    enumerated halves joined on the target norm) and never touches the
    convolution tables.  Guarded so the enumeration stays desk-scale.
    """
    d = int(d)
    n = int(n)
    if d < 1 or n < 0:
        raise ValueError("need d >= 1 and n >= 0")
    if d > 8 or n > 10**4 or (d >= 7 and n > 10**3):
        raise ValueError(f"brute-force guard exceeded for d={d}, n={n}")
    if d <= 4:
        counts = _enumerated_norm_counts(d, n)
        return int(counts[n])
    lo = d // 2
    hi = d - lo
    a = _enumerated_norm_counts(lo, n)
    b = _enumerated_norm_counts(hi, n)
    return int(sum(int(a[j]) * int(b[n - j]) for j in range(n + 1)))


# ---------------------------------------------------------------------------
# Divisor counts
# ---------------------------------------------------------------------------

def divisor_counts(n_max):
    """Sieve d(n) and d_o(n) (all / odd positive divisors) for 1 <= n <= n_max.

    d_o(n) = d(n / 2^v2(n)); the two tables share index 0 = 0.
    """
    n_max = int(n_max)
    d_all = np.zeros(n_max + 1, dtype=np.int64)
    d_odd = np.zeros(n_max + 1, dtype=np.int64)
    for k in range(1, n_max + 1):
        d_all[k::k] += 1
        if k % 2 == 1:
            d_odd[k::k] += 1
    return CoefficientTable("d", d_all), CoefficientTable("d_odd", d_odd)


# ---------------------------------------------------------------------------
# Characters and truncated L-series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CharacterSpec:
    """A real character: Kronecker symbol (top/.) or the constant 1,
    with the Euler factors at ``removed_primes`` deleted."""

    kind: str  # "kronecker-top" | "principal"
    top: int = 1
    removed_primes: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.kind not in ("kronecker-top", "principal"):
            raise ValueError(f"unknown character kind {self.kind!r}")
        object.__setattr__(self, "removed_primes", frozenset(int(p) for p in self.removed_primes))

    def __call__(self, n):
        n = int(n)
        for p in self.removed_primes:
            if n % p == 0:
                return 0
        if self.kind == "principal":
            return 1 if n != 0 else 0
        return kronecker(self.top, n)

    def values(self, n_max):
        """chi(0..n_max) as int8, sieved completely multiplicatively."""
        n_max = int(n_max)
        tab = np.ones(n_max + 1, dtype=np.int8)
        tab[0] = 0
        for p in primes_up_to(n_max):
            p = int(p)
            v = self(p)
            if v == 1:
                continue
            if v == 0:
                tab[p::p] = 0
                continue
            q = p
            while q <= n_max:
                tab[q::q] *= -1
                q *= p
        return tab


def principal_character(removed_primes=()):
    return CharacterSpec("principal", 1, frozenset(removed_primes))


def kronecker_character(top, removed_primes=()):
    return CharacterSpec("kronecker-top", int(top), frozenset(removed_primes))


def truncated_L(s, chi, n_trunc):
    """Partial Dirichlet series sum_{n <= N} chi(n) n^{-s} with a tail bound.

    Only valid in the absolute-convergence half-plane Re(s) > 1; the tail
    bound is the integral estimate N^(1 - Re s) / (Re s - 1), which majorizes
    sum_{n > N} n^{-Re s} regardless of the character.
    """
    s = complex(s)
    n_trunc = int(n_trunc)
    if s.real <= 1:
        raise ValueError(f"truncated_L needs Re(s) > 1, got {s}")
    if n_trunc < 1:
        raise ValueError("need at least one term")
    chi_vals = chi.values(n_trunc)[1:].astype(np.float64)
    n = np.arange(1, n_trunc + 1, dtype=np.float64)
    if s.imag == 0.0:
        terms = chi_vals * n ** (-s.real)
        value = complex(math.fsum(terms))
    else:
        value = complex(np.sum(chi_vals * np.exp(-s * np.log(n))))
    tail = n_trunc ** (1.0 - s.real) / (s.real - 1.0)
    return value, tail


# ---------------------------------------------------------------------------
# Coefficient cache files
# ---------------------------------------------------------------------------

def write_table_cache(path, table):
    """Persist a table: magic 'GVCT', u16 version, u16 label length + label,
    u64 N, then (N+1) signed 128-bit little-endian entries.  Atomic."""
    label_bytes = table.label.encode("utf-8")
    if len(label_bytes) > 0xFFFF:
        raise ValueError("label too long")
    header = (
        CACHE_MAGIC
        + CACHE_VERSION.to_bytes(2, "little")
        + len(label_bytes).to_bytes(2, "little")
        + label_bytes
        + table.n_max.to_bytes(8, "little")
    )
    payload = b"".join(v.to_bytes(16, "little", signed=True) for v in table.tolist())
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".gvct-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(header)
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_table_cache(path):
    """Load a table written by ``write_table_cache``; verifies magic/version."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != CACHE_MAGIC:
        raise ValueError(f"{path}: bad magic, not a coefficient cache file")
    version = int.from_bytes(blob[4:6], "little")
    if version != CACHE_VERSION:
        raise ValueError(f"{path}: unsupported cache version {version}")
    label_len = int.from_bytes(blob[6:8], "little")
    label = blob[8 : 8 + label_len].decode("utf-8")
    off = 8 + label_len
    n_max = int.from_bytes(blob[off : off + 8], "little")
    off += 8
    body = blob[off:]
    if len(body) != 16 * (n_max + 1):
        raise ValueError(f"{path}: truncated cache body")
    raw = np.frombuffer(body, dtype=np.uint8).reshape(n_max + 1, 16)
    lo = raw[:, :8].copy().view("<u8").ravel()
    hi = raw[:, 8:].copy().view("<i8").ravel()
    small_mask = (hi == 0) & (lo < (1 << 63)) | (hi == -1) & (lo >= (1 << 63))
    if bool(small_mask.all()):
        values = lo.view("<i8")
        return CoefficientTable(label, values.astype(np.int64))
    values = [
        int.from_bytes(body[16 * i : 16 * (i + 1)], "little", signed=True)
        for i in range(n_max + 1)
    ]
    return CoefficientTable(label, values)
