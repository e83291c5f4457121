"""Numerical evaluation of the Dirichlet-type series that normalize every
degree distribution and appear in every threshold formula.

All evaluation is restricted to real s strictly above the abscissa of
absolute convergence; there is no analytic continuation anywhere in this
package.  The zeta-type sums are accelerated with Euler-Maclaurin:

    sum_{n>=0} (n+c)^(-s) = sum_{n<M} (n+c)^(-s) + (M+c)^(1-s)/(s-1)
                            + (M+c)^(-s)/2
                            + sum_{k=1}^{K} B_{2k}/(2k)! (s)_{2k-1} (M+c)^(-s-2k+1)
                            + R_K,

with |R_K| <= |B_{2K+2}|/(2K+2)! * (s)_{2K+1} * (M+c)^(-s-2K-1) because the
integrand x -> (x+c)^(-s) is completely monotone for s > 0.  Every result
carries that remainder plus a floating-point allowance as a rigorous
tail_bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import ArithmeticFunction, liouville_range, mobius_range
from .errors import ConvergenceDomainError, UnboundedCoefficientError

DEFAULT_TOL = 1e-12
_EM_ORDER = 7  # correction terms B_2..B_14; remainder bounded via B_16
_EPS = np.finfo(np.float64).eps


def _bernoulli_even(count: int) -> list[Fraction]:
    """B_2, B_4, ..., B_{2*count} by the defining recurrence, exact."""
    n_max = 2 * count
    b = [Fraction(0)] * (n_max + 1)
    b[0] = Fraction(1)
    for n in range(1, n_max + 1):
        acc = Fraction(0)
        for j in range(n):
            acc += Fraction(math.comb(n + 1, j)) * b[j]
        b[n] = -acc / (n + 1)
    return [b[2 * k] for k in range(1, count + 1)]

_BERN_EVEN = _bernoulli_even(_EM_ORDER + 1)
_EM_COEF = [float(_BERN_EVEN[k - 1] / math.factorial(2 * k)) for k in range(1, _EM_ORDER + 1)]
_EM_REM_COEF = abs(float(_BERN_EVEN[_EM_ORDER] / math.factorial(2 * _EM_ORDER + 2)))


@dataclass(frozen=True)
class EvalResult:
    """A numeric value with a rigorous truncation bound.

    |value - exact| <= tail_bound whenever the coefficient bound fed into
    the evaluation is honest.
    """

    value: float
    tail_bound: float
    terms_used: int


def _hurwitz_core(s: float, c: float, tol: float) -> EvalResult:
    """sum_{n>=0} (n+c)^(-s) for s > 1, c > 0, by Euler-Maclaurin."""
    m = 16
    while True:
        base = m + c
        # remainder bound: first omitted correction term
        poch = 1.0
        x = s
        for _ in range(2 * _EM_ORDER + 1):
            poch *= x
            x += 1.0
        rem = _EM_REM_COEF * poch * base ** (-s - 2 * _EM_ORDER - 1)
        if rem <= tol / 2 or m >= (1 << 22):
            break
        m *= 2
    head = math.fsum((n + c) ** (-s) for n in range(m))
    value = head + base ** (1.0 - s) / (s - 1.0) + 0.5 * base ** (-s)
    poch = s
    scale = base ** (-s - 1)
    inv2 = 1.0 / (base * base)
    for k in range(1, _EM_ORDER + 1):
        value += _EM_COEF[k - 1] * poch * scale
        poch *= (s + 2 * k - 1) * (s + 2 * k)
        scale *= inv2
    fp = 8.0 * _EPS * (m + _EM_ORDER) * abs(value)
    return EvalResult(value, rem + fp, m + _EM_ORDER)


def riemann_zeta(s: float, tol: float = DEFAULT_TOL) -> EvalResult:
    """zeta(s) on the series domain s > 1."""
    if not s > 1:
        raise ConvergenceDomainError(f"zeta(s) requires s > 1 (abscissa 1), got s = {s}")
    return _hurwitz_core(float(s), 1.0, tol)


def hurwitz_zeta(s: float, k0: float, tol: float = DEFAULT_TOL) -> EvalResult:
    """sum_{k>=1} (k+k0)^(-s), the shifted zeta with summation starting at 1."""
    if not s > 1:
        raise ConvergenceDomainError(f"hurwitz_zeta requires s > 1, got s = {s}")
    if not k0 > -1:
        raise ConvergenceDomainError(f"hurwitz_zeta requires k0 > -1, got k0 = {k0}")
    return _hurwitz_core(float(s), 1.0 + float(k0), tol)


def barnes_zeta(s: float, w: float, a: float, tol: float = DEFAULT_TOL) -> EvalResult:
    """sum_{m,n>=0} (w + m a + n a)^(-s) for s > 2, equal lattice parameters.

    Diagonal counting collapses the double sum: there are t+1 pairs with
    m+n = t, so the sum equals a^(-s) [H(s-1, w/a) + (1 - w/a) H(s, w/a)]
    with H the single-index core above.  This is exact, not asymptotic.
    """
    if not s > 2:
        raise ConvergenceDomainError(f"barnes_zeta requires s > 2 (abscissa 2), got s = {s}")
    if not (w > 0 and a > 0):
        raise ValueError(f"barnes_zeta requires w > 0 and a > 0, got w = {w}, a = {a}")
    c = w / a
    h1 = _hurwitz_core(s - 1.0, c, tol / 2)
    h2 = _hurwitz_core(float(s), c, tol / 2)
    pref = a ** (-float(s))
    value = pref * (h1.value + (1.0 - c) * h2.value)
    bound = pref * (h1.tail_bound + abs(1.0 - c) * h2.tail_bound) + 4.0 * _EPS * abs(value)
    return EvalResult(value, bound, h1.terms_used + h2.terms_used)


def _ratio(num: EvalResult, den: EvalResult) -> EvalResult:
    if den.value - den.tail_bound <= 0:
        raise ZeroDivisionError("denominator bound does not exclude zero")
    value = num.value / den.value
    bound = (num.tail_bound + abs(value) * den.tail_bound) / (den.value - den.tail_bound)
    return EvalResult(value, bound + 2.0 * _EPS * abs(value), num.terms_used + den.terms_used)


def partial_sum_tail_bound(coeff_bound: float, n_terms: int, s: float) -> float:
    """Integral bound B * N^(1-s)/(s-1) on |sum_{n>N} a_n n^(-s)| for |a_n| <= B."""
    return coeff_bound * n_terms ** (1.0 - s) / (s - 1.0)


@lru_cache(maxsize=8)
def _coefficient_range(tag: str, n: int) -> np.ndarray:
    if tag == "zeta":
        out = np.ones(n + 1)
        out[0] = 0.0
        return out
    if tag == "mobius":
        return mobius_range(n).astype(np.float64)
    if tag == "liouville":
        return liouville_range(n).astype(np.float64)
    raise ValueError(f"no coefficient sequence for family {tag!r}")


@dataclass(frozen=True)
class LSeries:
    """A Dirichlet-type series L(s) with rigorous evaluation.

    tag selects the family: "zeta", "mobius" (1/zeta), "liouville"
    (zeta(2s)/zeta(s)), "hurwitz" (shifted terms (k+k0)^(-s)), "barnes"
    (two-index lattice sum), or "generic" (user coefficients, partial sums
    only).  sigma_a is the abscissa of absolute convergence enforced by
    every evaluation.
    """

    tag: str
    sigma_a: float
    k0: float = 0.0
    w: float = 1.0
    a: float = 1.0
    coeffs: ArithmeticFunction | None = None
    coeff_bound: float | None = None
    name: str = ""
    _memo: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def closed_form(self) -> str | None:
        return {
            "zeta": "riemann_zeta",
            "mobius": "inverse_zeta",
            "liouville": "zeta2s_over_zetas",
            "hurwitz": "hurwitz",
            "barnes": "barnes",
        }.get(self.tag)

    def family_params(self) -> dict:
        out: dict = {"family": self.tag}
        if self.tag == "hurwitz":
            out["k0"] = self.k0
        elif self.tag == "barnes":
            out["w"] = self.w
            out["a"] = self.a
        return out

    def _check_domain(self, s: float) -> None:
        if not s > self.sigma_a:
            raise ConvergenceDomainError(
                f"{self.name}(s) requires s > sigma_a = {self.sigma_a}, got s = {s}"
            )

    def eval(self, s: float, tol: float = DEFAULT_TOL) -> EvalResult:
        """L(s) by closed form where available, else a tolerance-sized partial sum."""
        s = float(s)
        key = (s, tol)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        self._check_domain(s)
        if self.tag == "zeta":
            out = _hurwitz_core(s, 1.0, tol)
        elif self.tag == "mobius":
            z = _hurwitz_core(s, 1.0, tol)
            out = _ratio(EvalResult(1.0, 0.0, 0), z)
        elif self.tag == "liouville":
            out = _ratio(_hurwitz_core(2.0 * s, 1.0, tol), _hurwitz_core(s, 1.0, tol))
        elif self.tag == "hurwitz":
            out = _hurwitz_core(s, 1.0 + self.k0, tol)
        elif self.tag == "barnes":
            out = barnes_zeta(s, self.w, self.a, tol)
        else:
            out = self._partial_for_tol(s, tol)
        if len(self._memo) < 4096:
            self._memo[key] = out
        return out

    def _partial_for_tol(self, s: float, tol: float) -> EvalResult:
        if self.coeff_bound is None:
            raise UnboundedCoefficientError(
                f"{self.name}: no coefficient bound supplied, cannot size the partial sum"
            )
        need = (self.coeff_bound / ((s - 1.0) * tol)) ** (1.0 / (s - 1.0))
        n = int(math.ceil(need)) + 1
        if self.coeffs is None or n > self.coeffs.n_max:
            have = 0 if self.coeffs is None else self.coeffs.n_max
            raise ValueError(
                f"{self.name}: tolerance {tol} at s = {s} needs {n} coefficients, have {have}"
            )
        return self.series_partial(s, n)

    def series_partial(self, s: float, n_terms: int) -> EvalResult:
        """Plain truncated sum of the defining series with its integral tail bound.

        Available for coefficient-backed families (zeta, mobius, liouville,
        hurwitz, generic); the barnes family has no single-index series.
        """
        s = float(s)
        self._check_domain(s)
        if n_terms < 1:
            raise ValueError("n_terms must be >= 1")
        if self.tag == "barnes":
            raise ValueError("barnes family has no single-index series form")
        k = np.arange(1, n_terms + 1, dtype=np.float64)
        if self.tag == "hurwitz":
            terms = (k + self.k0) ** (-s)
            tail = (n_terms + self.k0) ** (1.0 - s) / (s - 1.0)
        else:
            if self.tag == "generic":
                if self.coeffs is None:
                    raise UnboundedCoefficientError(f"{self.name}: no coefficients")
                coef = self.coeffs.coefficient_array(n_terms)[1:]
                bound = self.coeff_bound
                if bound is None:
                    raise UnboundedCoefficientError(
                        f"{self.name}: no coefficient bound for the tail estimate"
                    )
            else:
                coef = _coefficient_range(self.tag, n_terms)[1 : n_terms + 1]
                bound = 1.0
            terms = coef * k ** (-s)
            tail = partial_sum_tail_bound(bound, n_terms, s)
        value = float(np.sum(terms))
        fp = 64.0 * _EPS * float(np.sum(np.abs(terms)))
        return EvalResult(value, tail + fp, n_terms)

    def term(self, k: int, s: float) -> float:
        """The k-th series term a_k k^(-s) (or (k+k0)^(-s) for hurwitz)."""
        if k < 1:
            raise ValueError("series terms start at k = 1")
        if self.tag == "hurwitz":
            return (k + self.k0) ** (-s)
        if self.tag == "zeta":
            return float(k) ** (-s)
        if self.tag == "mobius":
            from .arith import mobius

            return mobius(k) * float(k) ** (-s)
        if self.tag == "liouville":
            from .arith import liouville

            return liouville(k) * float(k) ** (-s)
        if self.tag == "generic":
            if self.coeffs is None:
                raise UnboundedCoefficientError(f"{self.name}: no coefficients")
            return float(self.coeffs(k)) * float(k) ** (-s)
        raise ValueError(f"{self.name}: family {self.tag!r} has no single-index terms")

    def term_array(self, k_max: int, s: float) -> np.ndarray:
        """Terms for k = 0..k_max (index 0 = 0), vectorized."""
        k = np.arange(k_max + 1, dtype=np.float64)
        out = np.zeros(k_max + 1)
        if self.tag == "hurwitz":
            out[1:] = (k[1:] + self.k0) ** (-s)
        elif self.tag in ("zeta", "mobius", "liouville"):
            coef = _coefficient_range(self.tag, k_max) if self.tag != "zeta" else None
            out[1:] = k[1:] ** (-s)
            if coef is not None:
                out[1:] *= coef[1:]
        elif self.tag == "generic":
            if self.coeffs is None:
                raise UnboundedCoefficientError(f"{self.name}: no coefficients")
            out[1:] = self.coeffs.coefficient_array(k_max)[1:] * k[1:] ** (-s)
        else:
            raise ValueError(f"{self.name}: family {self.tag!r} has no single-index terms")
        return out

    def term_tail_bound(self, k_max: int, s: float) -> float:
        """Rigorous bound on |sum_{k>k_max} a_k k^(-s)| (series terms beyond a cut)."""
        if self.tag == "hurwitz":
            return (k_max + self.k0) ** (1.0 - s) / (s - 1.0)
        bound = 1.0 if self.tag in ("zeta", "mobius", "liouville") else self.coeff_bound
        if bound is None:
            raise UnboundedCoefficientError(f"{self.name}: no coefficient bound")
        return partial_sum_tail_bound(bound, k_max, s)

    def moment(self, j: int, s: float, tol: float = DEFAULT_TOL) -> EvalResult:
        """sum_k k^j a_k k^(-s) in closed form: the j-th moment of the series terms.

        Dirichlet families shift the argument, L(s - j).  The hurwitz family
        expands k^j = ((k+k0) - k0)^j binomially into shifted evaluations.
        """
        s = float(s)
        if self.tag == "hurwitz":
            if not s - j > self.sigma_a:
                raise ConvergenceDomainError(
                    f"{self.name}: moment {j} at s = {s} needs s - {j} > {self.sigma_a}"
                )
            value = 0.0
            bound = 0.0
            terms = 0
            for i in range(j + 1):
                c = math.comb(j, i) * (-self.k0) ** (j - i)
                h = _hurwitz_core(s - i, 1.0 + self.k0, tol)
                value += c * h.value
                bound += abs(c) * h.tail_bound
                terms += h.terms_used
            return EvalResult(value, bound + 4.0 * _EPS * abs(value), terms)
        if self.tag == "barnes":
            raise ValueError("barnes family has no single-index moments")
        return self.eval(s - j, tol)


def make_family(tag: str, *, k0: float = 0.0, w: float = 1.0, a: float = 1.0,
                coeffs: ArithmeticFunction | None = None,
                coeff_bound: float | None = None,
                sigma_a: float | None = None) -> LSeries:
    """Construct a named series family.

    Tags: zeta (alias unit), mobius, liouville, hurwitz (needs k0 > -1),
    barnes (needs w, a > 0), generic (needs coeffs and, for tail bounds,
    coeff_bound and sigma_a).
    """
    tag = tag.lower()
    if tag in ("zeta", "unit"):
        return LSeries("zeta", 1.0, name="zeta")
    if tag == "mobius":
        return LSeries("mobius", 1.0, name="mobius_series")
    if tag == "liouville":
        return LSeries("liouville", 1.0, name="liouville_series")
    if tag == "hurwitz":
        if not k0 > -1:
            raise ValueError(f"hurwitz family requires k0 > -1, got {k0}")
        return LSeries("hurwitz", 1.0, k0=float(k0), name=f"hurwitz(k0={k0:g})")
    if tag == "barnes":
        if not (w > 0 and a > 0):
            raise ValueError(f"barnes family requires w > 0 and a > 0, got w={w}, a={a}")
        return LSeries("barnes", 2.0, w=float(w), a=float(a), name=f"barnes(w={w:g},a={a:g})")
    if tag == "generic":
        if coeffs is None:
            raise ValueError("generic family requires coefficient values")
        if sigma_a is None:
            raise ValueError("generic family requires an explicit sigma_a")
        return LSeries("generic", float(sigma_a), coeffs=coeffs,
                       coeff_bound=coeff_bound, name=coeffs.name)
    raise ValueError(f"unknown family tag {tag!r}")


def lseries_eval(L: LSeries, s: float, tol: float = DEFAULT_TOL,
                 n_terms: int | None = None) -> EvalResult:
    """Evaluate L(s): closed form when the family has one, else a partial sum.

    With n_terms set, the plain truncated series is returned regardless of
    closed form (used for cross-checks); its tail_bound stays rigorous.
    """
    if n_terms is not None:
        return L.series_partial(s, n_terms)
    return L.eval(s, tol)
