"""SIR outbreak analytics on bipartite contact structures.

Transmission along an edge is an independent Bernoulli event, so the
outbreak cluster is a bond-percolation cluster and the generating function
of a law under transmissibility T is the dressed g(1 + (x-1)T).  Outbreaks
seeded on the p side traverse p -> q -> p through the composed dressed
functions; everything below reduces to first and second moments of the
truncated laws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .degdist import DegreeDistribution, gf_g0
from .errors import DegenerateDenominatorError, SignedDistributionError
from .lseries import DEFAULT_TOL, LSeries


@dataclass(frozen=True)
class Transmissibility:
    """Per-edge transmission probabilities between the two populations."""

    t_mf: float
    t_fm: float

    def __post_init__(self):
        for label, t in (("t_mf", self.t_mf), ("t_fm", self.t_fm)):
            if not 0.0 <= t <= 1.0:
                raise ValueError(f"{label} must lie in [0, 1], got {t}")


def _require_unsigned(d: DegreeDistribution) -> None:
    if d.signed:
        raise SignedDistributionError(
            f"{d.name} is signed; epidemic quantities need a probability law"
        )


def dressed_gf(d: DegreeDistribution, x: float, t: float) -> float:
    """g0(1 + (x-1) t): the generating function under edge transmissibility t."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    _require_unsigned(d)
    return gf_g0(d, 1.0 + (x - 1.0) * t)


@dataclass(frozen=True)
class OutbreakSize:
    """Mean outbreak size with its criticality flag.

    branching is the edge-to-edge reproduction factor F1'(1); value is
    +inf when branching >= 1 (supercritical), signaled rather than thrown
    so sweeps can cross the threshold.
    """

    value: float
    supercritical: bool
    branching: float


def mean_outbreak_size(
    p: DegreeDistribution, q: DegreeDistribution, t: Transmissibility
) -> OutbreakSize:
    """<s> = 1 + F0'(1)/(1 - F1'(1)) for a p-side seed.

    Chain rule on the composed dressed functions gives
    F0'(1) = m1(p) g1q'(1) t_mf t_fm and F1'(1) = f1p'(1) g1q'(1) t_mf t_fm,
    with g1'(1) = (M2 - M1)/M1 of the truncated laws.
    """
    _require_unsigned(p)
    _require_unsigned(q)
    m1p, m2p = p.truncated_moment(1), p.truncated_moment(2)
    m1q, m2q = q.truncated_moment(1), q.truncated_moment(2)
    if m1p == 0.0 or m1q == 0.0:
        raise DegenerateDenominatorError("zero first moment, edge-following law undefined")
    g1q = (m2q - m1q) / m1q
    f1p = (m2p - m1p) / m1p
    tt = t.t_mf * t.t_fm
    branching = f1p * g1q * tt
    if branching >= 1.0:
        return OutbreakSize(math.inf, True, branching)
    value = 1.0 + m1p * g1q * tt / (1.0 - branching)
    return OutbreakSize(value, False, branching)


def epidemic_threshold_product(
    L1: LSeries, alpha: float, L2: LSeries, beta: float, tol: float = DEFAULT_TOL
) -> float:
    """Critical product t_mf t_fm = L1(a-1)L2(b-1) / ([L1(a-2)-L1(a-1)][L2(b-2)-L2(b-1)]).

    For equal zeta laws this is T_c^2 with T_c = zeta(a-1)/(zeta(a-2)-zeta(a-1)).
    """
    a2 = L1.eval(alpha - 2.0, tol).value
    a1 = L1.eval(alpha - 1.0, tol).value
    b2 = L2.eval(beta - 2.0, tol).value
    b1 = L2.eval(beta - 1.0, tol).value
    den = (a2 - a1) * (b2 - b1)
    if den == 0.0:
        raise DegenerateDenominatorError(
            f"threshold denominator vanishes at alpha={alpha}, beta={beta}"
        )
    return a1 * b1 / den


def critical_product_curve(
    L1: LSeries,
    L2: LSeries,
    product_target: float,
    window: tuple[float, float, float, float],
    resolution: int = 101,
    tol: float = 1e-9,
) -> list[tuple[float, float]]:
    """Points where the critical product equals product_target, by per-line bisection.

    The window must lie inside the convergence region (alpha - 2 and
    beta - 2 above the abscissas).  An empty curve is a valid result.
    """
    from .phasescan import scan

    spec = {
        "kind": "epidemic",
        "l1": L1.family_params(),
        "l2": L2.family_params(),
        "target": product_target,
    }
    result = scan(spec, window=window, resolution=resolution, tol=tol)
    return list(result.zero_curve)
