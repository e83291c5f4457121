"""Degree distributions whose weights are L-series terms, and the
generating-function calculus on them.

A bipartite family is a pair of laws p_m = a_m m^(-alpha)/L1(alpha) and
q_n = b_n n^(-beta)/L2(beta) with p_0 = q_0 = 0, truncated at k_max with a
reported tail-mass bound.  Signed coefficient sequences (mobius, liouville)
produce formal signed objects: threshold algebra accepts them, sampling
does not.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ZeroNormalizerError
from .lseries import DEFAULT_TOL, LSeries

_POLYVAL = np.polynomial.polynomial.polyval


@dataclass(frozen=True)
class DegreeDistribution:
    """Truncated probability (or signed formal) mass function over degrees.

    weights[k] for k = 0..k_max with weights[0] = 0.  tail_mass bounds the
    normalization defect |sum_k weights[k] - 1| from truncating the series
    and from the normalizer's own evaluation error.
    """

    weights: np.ndarray
    normalizer: float
    signed: bool
    alpha: float
    source: LSeries | None
    tail_mass: float
    name: str = "dist"

    @property
    def k_max(self) -> int:
        return len(self.weights) - 1

    def truncated_moment(self, j: int) -> float:
        k = np.arange(len(self.weights), dtype=np.float64)
        return float(np.dot(k**j, self.weights))

    @classmethod
    def from_weights(cls, weights, alpha: float = math.nan, name: str = "explicit"):
        w = np.asarray(weights, dtype=np.float64).copy()
        if len(w) < 2:
            raise ValueError("need weights up to degree >= 1")
        if w[0] != 0.0:
            raise ValueError("weight at degree 0 must be 0")
        return cls(w, 1.0, bool(np.any(w < 0)), alpha, None, 0.0, name)

    @classmethod
    def point_mass(cls, k: int):
        w = np.zeros(k + 1)
        w[k] = 1.0
        return cls.from_weights(w, name=f"delta_{k}")

    def to_json_dict(self) -> dict:
        fam = self.source.family_params() if self.source is not None else {"family": "explicit"}
        return {
            **fam,
            "alpha": self.alpha,
            "k_max": self.k_max,
            "normalizer": self.normalizer,
            "signed": self.signed,
            "tail_mass": self.tail_mass,
        }


def make_degree_distribution(
    L: LSeries, alpha: float, k_max: int, tol: float = DEFAULT_TOL, name: str | None = None
) -> DegreeDistribution:
    """Single degree law w_k = term_k(alpha)/L(alpha), k = 1..k_max."""
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    if not alpha > max(1.0, L.sigma_a):
        # alpha > 1 keeps the weights summable even when sigma_a < 1
        from .errors import ConvergenceDomainError

        raise ConvergenceDomainError(
            f"{L.name}: exponent must exceed max(1, sigma_a = {L.sigma_a}), got {alpha}"
        )
    norm = L.eval(alpha, tol)
    if abs(norm.value) <= norm.tail_bound:
        raise ZeroNormalizerError(
            f"{L.name}({alpha}) = {norm.value} within {norm.tail_bound} of zero"
        )
    weights = L.term_array(k_max, alpha) / norm.value
    tail = (L.term_tail_bound(k_max, alpha) + norm.tail_bound) / abs(norm.value)
    return DegreeDistribution(
        weights=weights,
        normalizer=norm.value,
        signed=bool(np.any(weights < 0)),
        alpha=float(alpha),
        source=L,
        tail_mass=tail,
        name=name or f"{L.name}(alpha={alpha:g})",
    )


def make_bipartite_lgraph(
    L1: LSeries, alpha: float, L2: LSeries, beta: float, k_max: int, tol: float = DEFAULT_TOL
) -> tuple[DegreeDistribution, DegreeDistribution]:
    """The two degree laws of a bipartite graph family, truncated at k_max."""
    p = make_degree_distribution(L1, alpha, k_max, tol)
    q = make_degree_distribution(L2, beta, k_max, tol)
    return p, q


def mean_degree(d: DegreeDistribution, tol: float = DEFAULT_TOL) -> float:
    """Exact family mean sum_k k w_k.

    For Dirichlet-coefficient families this is L(alpha-1)/L(alpha); the
    hurwitz family picks up a -k0 shift through its moment expansion.
    Distributions built from explicit weights fall back to the truncated sum.
    """
    if d.source is None:
        return d.truncated_moment(1)
    m1 = d.source.moment(1, d.alpha, tol)
    return m1.value / d.normalizer


def gf_g0(d: DegreeDistribution, x: float) -> float:
    """g0(x) = sum_k w_k x^k; formal only for signed distributions."""
    if not -1.0 <= x <= 1.0:
        raise ValueError(f"|x| <= 1 required, got {x}")
    if d.signed:
        import warnings

        from .errors import FormalDistributionWarning

        warnings.warn(
            f"{d.name} is signed; generating-function value is formal",
            FormalDistributionWarning,
            stacklevel=2,
        )
    return float(_POLYVAL(x, d.weights))


def gf_g1(d: DegreeDistribution, x: float) -> float:
    """g1(x) = sum_k k w_k x^(k-1) / sum_k k w_k, the edge-following law.

    Normalized by the truncated first moment so g1(1) = 1 exactly.
    """
    if not -1.0 <= x <= 1.0:
        raise ValueError(f"|x| <= 1 required, got {x}")
    if d.signed:
        import warnings

        from .errors import FormalDistributionWarning

        warnings.warn(
            f"{d.name} is signed; generating-function value is formal",
            FormalDistributionWarning,
            stacklevel=2,
        )
    k = np.arange(len(d.weights), dtype=np.float64)
    deriv = k[1:] * d.weights[1:]
    m1 = float(np.sum(deriv))
    if m1 == 0.0:
        raise ZeroNormalizerError(f"{d.name}: first moment is zero, g1 undefined")
    return float(_POLYVAL(x, deriv)) / m1


def kmax_rule(N: int, alpha: float) -> int:
    """Default truncation ceil(N^(1/(alpha-1))) for samples of size N."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if not alpha > 1:
        raise ValueError(f"alpha must exceed 1, got {alpha}")
    r = N ** (1.0 / (alpha - 1.0))
    c = math.ceil(r)
    # float-safe: back off when c-1 already reaches N within rounding
    if c > 1 and (c - 1.0) ** (alpha - 1.0) >= N * (1.0 - 1e-12):
        c -= 1
    return max(c, 1)


@dataclass(frozen=True)
class JointDegreeDistribution:
    """Joint in/out degree law pi_nm of a directed graph family.

    Either separated (pi_nm = p_n q_m, balance exact by construction) or a
    two-index lattice law pi_nm proportional to (w + (n+m) a)^(-alpha) on
    n, m >= 1, held as a dense truncated grid.
    """

    kind: str  # "separated" | "barnes"
    k_max: int
    p: DegreeDistribution | None = None
    q: DegreeDistribution | None = None
    grid: np.ndarray | None = None  # (k_max+1)^2, index [n, m], row/col 0 zero
    alpha: float = math.nan
    w: float = math.nan
    a: float = math.nan
    normalizer: float = math.nan
    tail_mass: float = 0.0

    @property
    def signed(self) -> bool:
        if self.kind == "separated":
            return self.p.signed or self.q.signed
        return False

    def balance_residual(self) -> float:
        """sum (n - m) pi_nm on the truncated support."""
        if self.kind == "separated":
            return (
                self.p.truncated_moment(1) * self.q.truncated_moment(0)
                - self.p.truncated_moment(0) * self.q.truncated_moment(1)
            )
        k = np.arange(self.k_max + 1, dtype=np.float64)
        row = self.grid.sum(axis=1)
        col = self.grid.sum(axis=0)
        return float(np.dot(k, row) - np.dot(k, col))

    def mean_in_out(self) -> tuple[float, float]:
        k = np.arange(self.k_max + 1, dtype=np.float64)
        if self.kind == "separated":
            return self.p.truncated_moment(1), self.q.truncated_moment(1)
        return (
            float(np.dot(k, self.grid.sum(axis=1))),
            float(np.dot(k, self.grid.sum(axis=0))),
        )

    def to_json_dict(self) -> dict:
        if self.kind == "separated":
            return {
                "kind": "separated",
                "in": self.p.to_json_dict(),
                "out": self.q.to_json_dict(),
                "k_max": self.k_max,
            }
        return {
            "kind": "barnes",
            "alpha": self.alpha,
            "w": self.w,
            "a": self.a,
            "k_max": self.k_max,
            "normalizer": self.normalizer,
            "tail_mass": self.tail_mass,
        }


def make_directed_separated(
    p: DegreeDistribution, q: DegreeDistribution
) -> JointDegreeDistribution:
    """pi_nm = p_n q_m; the edge-balance constraint holds by symmetry of roles."""
    if p.k_max != q.k_max:
        raise ValueError(f"truncations differ: {p.k_max} vs {q.k_max}")
    return JointDegreeDistribution(kind="separated", k_max=p.k_max, p=p, q=q)


def make_directed_barnes(
    alpha: float, w: float, a: float, k_max: int, tol: float = DEFAULT_TOL
) -> JointDegreeDistribution:
    """pi_nm = (w + (n+m) a)^(-alpha) / Z on n, m >= 1.

    Z is the full lattice normalizer sum_{n,m>=1} (w + (n+m)a)^(-alpha),
    an equal-parameter Barnes value with shifted offset w + 2a.
    """
    from .lseries import barnes_zeta

    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    norm = barnes_zeta(alpha, w + 2.0 * a, a, tol)
    if abs(norm.value) <= norm.tail_bound:
        raise ZeroNormalizerError(f"barnes normalizer at alpha={alpha} is numerically zero")
    idx = np.arange(k_max + 1, dtype=np.float64)
    tot = idx[:, None] + idx[None, :]
    grid = np.zeros((k_max + 1, k_max + 1))
    grid[1:, 1:] = (w + tot[1:, 1:] * a) ** (-alpha) / norm.value
    # mass outside the box: two half-strips, each bounded by iterated integrals
    strip = (w + (k_max + 2.0) * a) ** (2.0 - alpha) / (a * a * (alpha - 1.0) * (alpha - 2.0))
    tail = (2.0 * strip + norm.tail_bound) / norm.value
    return JointDegreeDistribution(
        kind="barnes",
        k_max=k_max,
        grid=grid,
        alpha=float(alpha),
        w=float(w),
        a=float(a),
        normalizer=norm.value,
        tail_mass=tail,
    )


def distribution_to_json(d) -> str:
    return json.dumps(d.to_json_dict(), indent=2, sort_keys=True)
