"""Closed-form giant-component conditions and structural formulas.

Sign convention throughout: margin > 0 is the supercritical (giant
cluster) phase, margin < 0 subcritical, margin = 0 critical.  Every
formula is evaluated strictly inside the convergence region of each
L-argument; callers wanting a phase map over a window that leaves the
region use phasescan, which records those cells as absent.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .degdist import DegreeDistribution, JointDegreeDistribution
from .errors import ClusteringRangeWarning, NoSignChangeError
from .lseries import DEFAULT_TOL, LSeries


@dataclass(frozen=True)
class ThresholdResult:
    """A threshold-expression value with its provenance.

    convergent records that every L-argument was inside its series domain;
    constructors raise ConvergenceDomainError otherwise, so a returned
    result always has convergent = True.
    """

    margin: float
    formula: str
    inputs: dict
    convergent: bool = True


def _inputs(L1: LSeries, alpha: float, L2: LSeries | None = None, beta: float | None = None) -> dict:
    out = {"alpha": alpha, "l1": L1.family_params()}
    if L2 is not None:
        out["beta"] = beta
        out["l2"] = L2.family_params()
    return out


def bipartite_margin(
    L1: LSeries, alpha: float, L2: LSeries, beta: float, tol: float = DEFAULT_TOL
) -> ThresholdResult:
    """L1(a-2)L2(b-2) - L1(a-2)L2(b-1) - L1(a-1)L2(b-2); > 0 gives a giant cluster."""
    a2 = L1.eval(alpha - 2.0, tol).value
    a1 = L1.eval(alpha - 1.0, tol).value
    b2 = L2.eval(beta - 2.0, tol).value
    b1 = L2.eval(beta - 1.0, tol).value
    margin = a2 * b2 - a2 * b1 - a1 * b2
    return ThresholdResult(margin, "bipartite_giant", _inputs(L1, alpha, L2, beta))


def bipartite_margin_oracle(p: DegreeDistribution, q: DegreeDistribution) -> float:
    """Truncated sum over the double support: sum mn(mn - m - n) p_m q_n.

    Computed by moment factorization, which equals the literal double sum
    exactly (distributivity): M2(p)M2(q) - M2(p)M1(q) - M1(p)M2(q).
    """
    m1p, m2p = p.truncated_moment(1), p.truncated_moment(2)
    m1q, m2q = q.truncated_moment(1), q.truncated_moment(2)
    return m2p * m2q - m2p * m1q - m1p * m2q


def unipartite_margin(L: LSeries, alpha: float, tol: float = DEFAULT_TOL) -> ThresholdResult:
    """L(a-2) - 2 L(a-1); its zero is the giant-component onset exponent."""
    margin = L.eval(alpha - 2.0, tol).value - 2.0 * L.eval(alpha - 1.0, tol).value
    return ThresholdResult(margin, "unipartite_giant", _inputs(L, alpha))


def directed_separated_margin(
    L1: LSeries, alpha: float, L2: LSeries, beta: float, tol: float = DEFAULT_TOL
) -> ThresholdResult:
    """2 L1(a-1)L2(b-1) - L1(a-1)L2(b) - L1(a)L2(b-1) (in-law L1, out-law L2)."""
    a1 = L1.eval(alpha - 1.0, tol).value
    a0 = L1.eval(alpha, tol).value
    b1 = L2.eval(beta - 1.0, tol).value
    b0 = L2.eval(beta, tol).value
    margin = 2.0 * a1 * b1 - a1 * b0 - a0 * b1
    return ThresholdResult(margin, "directed_giant_separated", _inputs(L1, alpha, L2, beta))


def directed_joint_margin(pi: JointDegreeDistribution) -> float:
    """Truncated sum of (2nm - n - m) pi_nm, the directed giant condition.

    For separated laws the sum factorizes exactly; for the lattice law it
    is the literal grid sum, the only evaluator available.
    """
    if pi.kind == "separated":
        m1p, s0p = pi.p.truncated_moment(1), pi.p.truncated_moment(0)
        m1q, s0q = pi.q.truncated_moment(1), pi.q.truncated_moment(0)
        return 2.0 * m1p * m1q - m1p * s0q - s0p * m1q
    k = np.arange(pi.k_max + 1, dtype=np.float64)
    nm = k[:, None] * k[None, :]
    weight = 2.0 * nm - k[:, None] - k[None, :]
    return float(np.sum(weight * pi.grid))


def clustering_coefficient(
    L1: LSeries, alpha: float, L2: LSeries, beta: float, tol: float = DEFAULT_TOL
) -> float:
    """Closed-form clustering of the one-mode projection, reported verbatim.

    C = L1(a-1)L2(b-1)F(b) / ([L1(a-2)-L1(a-1)][L2(b-2)-L2(b-1)]^2 + 1)
    with F(b) = 2 L2(b-1) - 3 L2(b-2) + L2(b-3).  Values outside [0, 1]
    are returned as computed with a warning attached; no repair is applied.
    """
    a2 = L1.eval(alpha - 2.0, tol).value
    a1 = L1.eval(alpha - 1.0, tol).value
    b3 = L2.eval(beta - 3.0, tol).value
    b2 = L2.eval(beta - 2.0, tol).value
    b1 = L2.eval(beta - 1.0, tol).value
    f_beta = 2.0 * b1 - 3.0 * b2 + b3
    c = a1 * b1 * f_beta / ((a2 - a1) * (b2 - b1) ** 2 + 1.0)
    if not 0.0 <= c <= 1.0:
        warnings.warn(
            f"closed-form clustering {c:.6g} outside [0, 1] at alpha={alpha}, beta={beta}",
            ClusteringRangeWarning,
            stacklevel=2,
        )
    return c


def clustering_f_factor(L2: LSeries, beta: float, tol: float = DEFAULT_TOL) -> float:
    """The F(b) = 2 L2(b-1) - 3 L2(b-2) + L2(b-3) factor on its own."""
    return (
        2.0 * L2.eval(beta - 1.0, tol).value
        - 3.0 * L2.eval(beta - 2.0, tol).value
        + L2.eval(beta - 3.0, tol).value
    )


def find_critical_exponent(margin_fn, lo: float, hi: float, tol: float = 1e-6) -> float:
    """Deterministic bisection root of a continuous sign-changing margin.

    margin_fn may return a float or a ThresholdResult.  Stops when the
    bracket is narrower than tol and returns its midpoint.
    """
    if not hi > lo:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")

    def f(x: float) -> float:
        out = margin_fn(x)
        return out.margin if isinstance(out, ThresholdResult) else float(out)

    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise NoSignChangeError(
            f"margin has the same sign at both ends: f({lo}) = {flo:.6g}, f({hi}) = {fhi:.6g}"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # bracket at float resolution
            break
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if flo * fmid < 0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)
