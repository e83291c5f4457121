"""Multiplicative arithmetic functions and the Dirichlet ring.

Values are kept as exact Python integers (or Fractions, if a caller
supplies them) so that the ring laws

    (f*g)(n) = sum_{d|n} f(d) g(n/d),   f*epsilon = f,   f*g = g*f

hold exactly; widening to floating point happens only when a Dirichlet
series is evaluated numerically.  Factor queries go through a smallest
prime factor sieve, so mu(n), lambda(n), phi(n) cost O(log n) once the
sieve covers n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

GENERAL = "general"
MULTIPLICATIVE = "multiplicative"
COMPLETELY_MULTIPLICATIVE = "completely_multiplicative"

_SPF_DEFAULT = 10**5
_SPF_MAX = 10**7  # beyond this, scalar queries fall back to trial division

_spf = np.zeros(0, dtype=np.int32)


def _ensure_spf(limit: int) -> np.ndarray:
    """Grow the smallest-prime-factor sieve to cover 0..limit.

    Single-writer initialization: rebuilding replaces the module-level
    array atomically, so concurrent readers only ever see a complete sieve.
    """
    global _spf
    if limit < len(_spf):
        return _spf
    n = max(limit, _SPF_DEFAULT, 2 * len(_spf))
    spf = np.zeros(n + 1, dtype=np.int32)
    for p in range(2, math.isqrt(n) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.nonzero(spf[2:] == 0)[0] + 2  # untouched entries are prime
    spf[rest] = rest.astype(np.int32)
    _spf = spf
    return _spf


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n >= 1 as [(p, exponent), ...], p ascending."""
    if n < 1:
        raise ValueError(f"factorize requires n >= 1, got {n}")
    if n == 1:
        return []
    out: list[tuple[int, int]] = []
    if n <= _SPF_MAX:
        spf = _ensure_spf(n)
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out
    # trial division fallback for occasional large scalars
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def mobius(n: int) -> int:
    """mu(n): 1 at n=1, (-1)^k for a product of k distinct primes, else 0."""
    if n < 1:
        raise ValueError(f"mobius requires n >= 1, got {n}")
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def liouville(n: int) -> int:
    """lambda(n) = (-1)^Omega(n), Omega counting prime factors with multiplicity."""
    if n < 1:
        raise ValueError(f"liouville requires n >= 1, got {n}")
    omega = sum(e for _, e in factorize(n))
    return -1 if omega % 2 else 1


def euler_phi(n: int) -> int:
    """phi(n): count of 1 <= k <= n coprime to n."""
    if n < 1:
        raise ValueError(f"euler_phi requires n >= 1, got {n}")
    out = n
    for p, _ in factorize(n):
        out -= out // p
    return out


def _primes_up_to(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0]


def mobius_range(n: int) -> np.ndarray:
    """mu(k) for k = 0..n as an int8 array (index 0 unused, set to 0)."""
    if n < 1:
        raise ValueError(f"mobius_range requires n >= 1, got {n}")
    mu = np.ones(n + 1, dtype=np.int8)
    mu[0] = 0
    for p in _primes_up_to(n):
        mu[p::p] *= -1
        sq = int(p) * int(p)
        if sq <= n:
            mu[sq::sq] = 0
    return mu


def liouville_range(n: int) -> np.ndarray:
    """lambda(k) for k = 0..n as an int8 array (index 0 unused, set to 0)."""
    if n < 1:
        raise ValueError(f"liouville_range requires n >= 1, got {n}")
    lam = np.ones(n + 1, dtype=np.int8)
    lam[0] = 0
    for p in _primes_up_to(n):
        pk = int(p)
        while pk <= n:
            lam[pk::pk] *= -1
            pk *= int(p)
    return lam


def euler_phi_range(n: int) -> np.ndarray:
    """phi(k) for k = 0..n as an int64 array (index 0 unused, set to 0)."""
    if n < 1:
        raise ValueError(f"euler_phi_range requires n >= 1, got {n}")
    phi = np.arange(n + 1, dtype=np.int64)
    for p in _primes_up_to(n):
        phi[p::p] -= phi[p::p] // p
    return phi


@dataclass(frozen=True)
class ArithmeticFunction:
    """A coefficient sequence a_n for n = 1..n_max with multiplicativity metadata.

    vals is indexed directly by n; vals[0] is a 0 placeholder.  kind is one
    of GENERAL, MULTIPLICATIVE, COMPLETELY_MULTIPLICATIVE and is trusted by
    algebraic shortcuts (see dirichlet_inverse_cm); verify_multiplicative
    checks it exhaustively.
    """

    vals: tuple
    kind: str = GENERAL
    name: str = "f"

    def __post_init__(self):
        if len(self.vals) < 2:
            raise ValueError("ArithmeticFunction needs values for n >= 1")
        if self.kind not in (GENERAL, MULTIPLICATIVE, COMPLETELY_MULTIPLICATIVE):
            raise ValueError(f"unknown kind {self.kind!r}")
        # f(1) = 1 is necessary for multiplicativity
        if self.kind != GENERAL and self.vals[1] != 1:
            raise ValueError(f"{self.name}: multiplicative kind requires f(1) = 1")

    @property
    def n_max(self) -> int:
        return len(self.vals) - 1

    def __call__(self, n: int):
        if not 1 <= n <= self.n_max:
            raise ValueError(f"{self.name} is defined for 1 <= n <= {self.n_max}, got {n}")
        return self.vals[n]

    @classmethod
    def from_callable(cls, fn, n_max: int, kind: str = GENERAL, name: str = "f"):
        vals = (0,) + tuple(fn(n) for n in range(1, n_max + 1))
        return cls(vals, kind, name)

    @classmethod
    def from_values(cls, values, kind: str = GENERAL, name: str = "f"):
        """values[i] is a_{i+1}; the internal 0 placeholder is prepended."""
        return cls((0,) + tuple(values), kind, name)

    def coefficient_array(self, n: int | None = None) -> np.ndarray:
        """Float64 view a_0..a_n for numeric work (a_0 = 0)."""
        n = self.n_max if n is None else n
        if n > self.n_max:
            raise ValueError(f"{self.name} only defined up to {self.n_max}, need {n}")
        return np.asarray(self.vals[: n + 1], dtype=np.float64)


def unit_function(n_max: int) -> ArithmeticFunction:
    return ArithmeticFunction((0,) + (1,) * n_max, COMPLETELY_MULTIPLICATIVE, "unit")


def epsilon_function(n_max: int) -> ArithmeticFunction:
    """Convolution identity: eps(1) = 1, eps(n) = 0 otherwise."""
    return ArithmeticFunction((0, 1) + (0,) * (n_max - 1), COMPLETELY_MULTIPLICATIVE, "eps")


def identity_function(n_max: int) -> ArithmeticFunction:
    return ArithmeticFunction(tuple(range(n_max + 1)), COMPLETELY_MULTIPLICATIVE, "id")


def mobius_function(n_max: int) -> ArithmeticFunction:
    vals = (0,) + tuple(int(v) for v in mobius_range(n_max)[1:])
    return ArithmeticFunction(vals, MULTIPLICATIVE, "mu")


def liouville_function(n_max: int) -> ArithmeticFunction:
    vals = (0,) + tuple(int(v) for v in liouville_range(n_max)[1:])
    return ArithmeticFunction(vals, COMPLETELY_MULTIPLICATIVE, "lambda")


def euler_phi_function(n_max: int) -> ArithmeticFunction:
    vals = (0,) + tuple(int(v) for v in euler_phi_range(n_max)[1:])
    return ArithmeticFunction(vals, MULTIPLICATIVE, "phi")


def dirichlet_convolve(
    f: ArithmeticFunction, g: ArithmeticFunction, n_max: int | None = None
) -> ArithmeticFunction:
    """(f*g)(n) = sum_{d|n} f(d) g(n/d) for n <= n_max, by divisor sieve.

    O(n_max log n_max) additions in exact arithmetic.  The convolution of
    two multiplicative functions is multiplicative (completely
    multiplicative inputs do not stay completely multiplicative).
    """
    if n_max is None:
        n_max = min(f.n_max, g.n_max)
    if n_max > f.n_max or n_max > g.n_max:
        raise ValueError(
            f"convolution to {n_max} exceeds input range "
            f"({f.name}: {f.n_max}, {g.name}: {g.n_max})"
        )
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    h = [0] * (n_max + 1)
    fv, gv = f.vals, g.vals
    for d in range(1, n_max + 1):
        fd = fv[d]
        if fd == 0:
            continue
        for q in range(1, n_max // d + 1):
            h[d * q] += fd * gv[q]
    both_mult = f.kind != GENERAL and g.kind != GENERAL
    return ArithmeticFunction(
        tuple(h), MULTIPLICATIVE if both_mult else GENERAL, f"({f.name}*{g.name})"
    )


def pointwise_product(f: ArithmeticFunction, g: ArithmeticFunction) -> ArithmeticFunction:
    """h(n) = f(n) g(n) on a shared range."""
    if f.n_max != g.n_max:
        raise ValueError(
            f"range mismatch: {f.name} up to {f.n_max}, {g.name} up to {g.n_max}"
        )
    vals = (0,) + tuple(f.vals[n] * g.vals[n] for n in range(1, f.n_max + 1))
    if f.kind == COMPLETELY_MULTIPLICATIVE and g.kind == COMPLETELY_MULTIPLICATIVE:
        kind = COMPLETELY_MULTIPLICATIVE
    elif f.kind != GENERAL and g.kind != GENERAL:
        kind = MULTIPLICATIVE
    else:
        kind = GENERAL
    return ArithmeticFunction(vals, kind, f"({f.name}.{g.name})")


def dirichlet_inverse_cm(f: ArithmeticFunction) -> ArithmeticFunction:
    """Convolution inverse of a completely multiplicative f: n -> mu(n) f(n).

    The formula is specific to completely multiplicative inputs, so anything
    weaker is rejected rather than silently inverted by recursion.
    """
    if f.kind != COMPLETELY_MULTIPLICATIVE:
        raise ValueError(
            f"{f.name} is not completely multiplicative; mu(n) f(n) would not invert it"
        )
    mu = mobius_range(f.n_max)
    vals = (0,) + tuple(int(mu[n]) * f.vals[n] for n in range(1, f.n_max + 1))
    # mu kills prime squares, so the inverse is multiplicative but not completely
    return ArithmeticFunction(vals, MULTIPLICATIVE, f"({f.name}^-1)")


def verify_multiplicative(
    f: ArithmeticFunction, n_max: int | None = None, completely: bool | None = None
) -> tuple[bool, tuple[int, int] | None]:
    """Exhaustively check f(mn) = f(m) f(n) for pairs with mn <= n_max.

    Coprime pairs only, unless completely is set (default: taken from
    f.kind).  Returns (True, None) or (False, first witness (m, n)) with
    m <= n, m ascending then n ascending.
    """
    if n_max is None:
        n_max = f.n_max
    if n_max > f.n_max:
        raise ValueError(f"{f.name} only defined up to {f.n_max}")
    if completely is None:
        completely = f.kind == COMPLETELY_MULTIPLICATIVE
    if f.vals[1] != 1:
        return False, (1, 1)
    for m in range(2, math.isqrt(n_max) + 1):
        fm = f.vals[m]
        for n in range(m, n_max // m + 1):
            if not completely and math.gcd(m, n) != 1:
                continue
            if f.vals[m * n] != fm * f.vals[n]:
                return False, (m, n)
    return True, None
