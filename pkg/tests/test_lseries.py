"""Series evaluation: closed forms, partial sums, tail bounds, domains."""

import math

import mpmath
import numpy as np
import pytest

from zetanet.arith import liouville_function
from zetanet.errors import ConvergenceDomainError
from zetanet.lseries import (
    DEFAULT_TOL,
    LSeries,
    barnes_zeta,
    hurwitz_zeta,
    lseries_eval,
    make_family,
    partial_sum_tail_bound,
    riemann_zeta,
)

ZETA_2 = 1.6449340668482264  # pi^2 / 6
ZETA_3 = 1.2020569031595943
ZETA_3_2 = 2.6123753486854883
INV_ZETA_2 = 0.6079271018540267
ZETA4_OVER_ZETA2 = 0.6579736267392906
ZETA6_OVER_ZETA3 = 0.8463351937086948
HURWITZ_5_2_AT_HALF = 0.5902563850764313  # sum (k + 1/2)^(-5/2), k >= 1


def test_riemann_zeta_values():
    assert riemann_zeta(2.0).value == pytest.approx(math.pi ** 2 / 6, rel=1e-13)
    assert riemann_zeta(3.0).value == pytest.approx(ZETA_3, rel=1e-13)
    assert riemann_zeta(1.5).value == pytest.approx(ZETA_3_2, rel=1e-13)


def test_riemann_zeta_domain():
    with pytest.raises(ConvergenceDomainError):
        riemann_zeta(1.0)
    with pytest.raises(ConvergenceDomainError):
        riemann_zeta(0.5)


def test_eval_result_tail_bound_is_honest():
    for s in (1.05, 1.5, 2.0, 3.7, 12.0, 40.0):
        res = riemann_zeta(s)
        truth = float(mpmath.zeta(s))
        assert abs(res.value - truth) <= res.tail_bound + 1e-15 * abs(truth)
        assert res.tail_bound <= DEFAULT_TOL * max(1.0, abs(res.value))


def test_hurwitz_zeta_values():
    assert hurwitz_zeta(2.5, 0.5).value == pytest.approx(HURWITZ_5_2_AT_HALF, rel=1e-13)
    # k0 = 0 reduces to the plain series
    assert hurwitz_zeta(3.0, 0.0).value == pytest.approx(ZETA_3, rel=1e-13)
    for s, k0 in ((1.1, 0.3), (2.5, 4.0), (7.0, 0.01)):
        truth = float(mpmath.zeta(s, 1.0 + k0))
        res = hurwitz_zeta(s, k0)
        assert abs(res.value - truth) <= res.tail_bound + 1e-14 * abs(truth)


def test_hurwitz_zeta_domain():
    with pytest.raises(ConvergenceDomainError):
        hurwitz_zeta(1.0, 0.5)
    with pytest.raises(ConvergenceDomainError):
        hurwitz_zeta(2.0, -1.0)


def test_barnes_zeta_diagonal_identities():
    # equal slopes collapse to one-dimensional sums
    assert barnes_zeta(3.0, 1.0, 1.0).value == pytest.approx(ZETA_2, rel=1e-13)
    expect = float(mpmath.zeta(4) - 2 * mpmath.zeta(5) + 1)
    assert barnes_zeta(5.0, 3.0, 1.0).value == pytest.approx(expect, rel=1e-13)


def test_barnes_zeta_brute_force_oracle():
    w, a, s = 1.3, 0.7, 4.2
    brute = 0.0
    for n in range(4000):
        m = np.arange(4000)
        brute += float(np.sum((w + a * n + a * m) ** (-s)))
    res = barnes_zeta(s, w, a)
    assert res.value == pytest.approx(brute, abs=1e-6)


def test_barnes_zeta_domain():
    with pytest.raises(ConvergenceDomainError):
        barnes_zeta(2.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        barnes_zeta(3.0, -1.0, 1.0)


def test_liouville_series_closed_form():
    lam = make_family("liouville")
    assert lam.eval(3.0).value == pytest.approx(ZETA6_OVER_ZETA3, rel=1e-12)
    assert lam.eval(2.0).value == pytest.approx(ZETA4_OVER_ZETA2, rel=1e-12)


def test_mobius_series_closed_form():
    mu = make_family("mobius")
    assert mu.eval(2.0).value == pytest.approx(INV_ZETA_2, rel=1e-12)


def test_signed_series_partial_sums_match_closed_form():
    for tag in ("mobius", "liouville"):
        fam = make_family(tag)
        for s in (2.0, 3.0, 4.0):
            closed = fam.eval(s)
            partial = fam.series_partial(s, 20_000)
            gap = abs(closed.value - partial.value)
            assert gap <= closed.tail_bound + partial.tail_bound, (tag, s, gap)


def test_series_domain_errors():
    for tag in ("zeta", "mobius", "liouville"):
        fam = make_family(tag)
        with pytest.raises(ConvergenceDomainError):
            fam.eval(1.0)
    with pytest.raises(ConvergenceDomainError):
        make_family("barnes", w=1.0, a=1.0).eval(2.0)


def test_series_partial_rejects_barnes():
    with pytest.raises(ValueError):
        make_family("barnes", w=1.0, a=1.0).series_partial(3.0, 100)


def test_term_and_term_array():
    lam = make_family("liouville")
    s = 2.5
    arr = lam.term_array(50, s)
    assert arr[0] == 0.0
    for k in (1, 2, 3, 4, 49):
        assert arr[k] == lam.term(k, s)
    assert lam.term(4, s) == pytest.approx(4.0 ** -s)
    assert lam.term(2, s) == pytest.approx(-(2.0 ** -s))


def test_partial_sum_tail_bound_formula():
    assert partial_sum_tail_bound(1.0, 100, 3.0) == pytest.approx(
        100.0 ** -2 / 2.0, rel=1e-12
    )
    # bound decreases in N and in s
    assert partial_sum_tail_bound(1.0, 200, 3.0) < partial_sum_tail_bound(1.0, 100, 3.0)
    assert partial_sum_tail_bound(1.0, 100, 4.0) < partial_sum_tail_bound(1.0, 100, 3.0)


def test_moment_shifts_dirichlet_argument():
    lam = make_family("liouville")
    m = lam.moment(2, 4.5)
    direct = lam.eval(2.5)
    assert m.value == pytest.approx(direct.value, rel=1e-12)


def test_moment_hurwitz_binomial():
    fam = make_family("hurwitz", k0=1.5)
    s = 5.0
    # brute truncated sum as oracle
    k = np.arange(1, 2_000_000, dtype=np.float64)
    brute = float(np.sum(k * (k + 1.5) ** (-s)))
    res = fam.moment(1, s)
    assert res.value == pytest.approx(brute, abs=5e-13 + res.tail_bound)


def test_moment_rejects_barnes():
    with pytest.raises(ValueError):
        make_family("barnes", w=1.0, a=1.0).moment(1, 4.0)


def test_generic_family_matches_named_series():
    coeffs = liouville_function(5000)
    gen = make_family("generic", coeffs=coeffs, coeff_bound=1.0, sigma_a=1.0)
    lam = make_family("liouville")
    s = 2.2
    a = gen.series_partial(s, 5000)
    b = lam.series_partial(s, 5000)
    assert a.value == pytest.approx(b.value, rel=1e-14)
    assert gen.closed_form is None


def test_make_family_validation():
    with pytest.raises(ValueError):
        make_family("hurwitz", k0=-1.0)
    with pytest.raises(ValueError):
        make_family("barnes", w=0.0)
    with pytest.raises(ValueError):
        make_family("generic")
    with pytest.raises(ValueError):
        make_family("nonesuch")


def test_eval_memoization_returns_identical_result():
    fam = make_family("zeta")
    r1 = fam.eval(2.5)
    r2 = fam.eval(2.5)
    assert r1 is r2


def test_lseries_eval_dispatch():
    lam = make_family("liouville")
    closed = lseries_eval(lam, 3.0)
    partial = lseries_eval(lam, 3.0, n_terms=10_000)
    assert closed.value == pytest.approx(ZETA6_OVER_ZETA3, rel=1e-12)
    assert abs(partial.value - closed.value) <= partial.tail_bound + closed.tail_bound


def test_family_params_round_trip():
    fam = make_family("hurwitz", k0=2.0)
    params = fam.family_params()
    again = make_family(params.pop("family"), **params)
    assert again.eval(3.0).value == fam.eval(3.0).value
