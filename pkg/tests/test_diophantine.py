import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpwave.diophantine import (cf_bad_number, cf_value,
                                eigen_D_ae, eigen_D_ae_factored, eigen_D_be,
                                eigen_D_be_factored, in_Btilde,
                                make_counter_params, make_params,
                                min_divisor_scan, omega_to_be, be_to_omega,
                                pair_map_ae, pair_map_be, scan_badness)
from qpwave.errors import DomainError, UsageError

SQRT29 = (np.sqrt(29.0) - 5.0) / 2.0  # [0; 5, 5, 5, ...]


# ---------------------------------------------------------------------------
# badly approximable numbers


def test_half_is_rejected():
    ok, (m, n, q) = in_Btilde(0.5, 0.1, 100)
    assert not ok
    assert (m, n) == (-1, 2)
    assert q == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("p,q", [(1, 3), (2, 7), (13, 57), (99, 200)])
def test_rationals_rejected(p, q):
    ok, _ = in_Btilde(p / q, 0.1, 1000)
    assert not ok


def test_sqrt29_accepted():
    ok, (m, n, quality) = in_Btilde(SQRT29, 0.1, 10_000)
    assert ok
    assert quality > 0.1


def test_m0_diagnostic_small_x():
    # for x near 0 the m = 0 column would fail the bound at small n; the
    # criterion excludes it but the diagnostic reports it
    x = cf_value([200] + [5] * 30)
    scan = scan_badness(x, 0.1, 1000)
    assert scan.ok
    assert scan.min_quality_with_m0 < 0.1


def test_scan_input_validation():
    with pytest.raises(DomainError):
        scan_badness(0.3, 0.3, 100)
    with pytest.raises(DomainError):
        scan_badness(0.3, 0.1, 0)


# ---------------------------------------------------------------------------
# continued fractions


def test_cf_value_periodic_five():
    assert cf_value([5] * 40) == pytest.approx(SQRT29, abs=1e-15)


def test_cf_value_upper_bound():
    # [0; a_1, ...] < 1/a_1
    for a1 in (2, 7, 50):
        v = cf_value([a1] + [3] * 30)
        assert 0.0 < v < 1.0 / a1


def test_cf_distinct_sequences_distinct_values():
    # shallow depth so the difference is resolvable in double precision
    assert cf_value([5] * 6) != cf_value([5] * 5 + [6])


def test_cf_bad_number_accepts_free_first_quotient():
    # a_1 may exceed the bound; from the second quotient on it may not
    bn = cf_bad_number([200] + [5] * 39, gamma=0.1, n_max=2000)
    assert bn.scan.ok
    assert bn.value == pytest.approx(1.0 / (200.0 + SQRT29), abs=1e-12)


def test_cf_bad_number_quotient_bound():
    with pytest.raises(UsageError):
        cf_bad_number([5] + [9] + [5] * 30, gamma=0.1)   # 9 >= 1/0.1 - 2
    with pytest.raises(UsageError):
        cf_bad_number([5, 0] + [5] * 30, gamma=0.1)
    with pytest.raises(UsageError):
        cf_bad_number([5] * 10, gamma=0.1)               # too shallow


def test_cf_bad_number_is_float_like():
    bn = cf_bad_number([5] * 30, gamma=0.1, n_max=500)
    assert float(bn) == bn.value


# ---------------------------------------------------------------------------
# eigenvalues


def test_eigen_be_eps_zero():
    rng = np.random.default_rng(0)
    for _ in range(20):
        b = rng.normal()
        m, n = rng.integers(-50, 50, 2)
        assert eigen_D_be(b, 0.0, m, n) == pytest.approx(2.0 * m * n, abs=1e-12)


def test_eigen_be_factored_matches_expanded():
    rng = np.random.default_rng(1)
    b = rng.uniform(-2, 2, 100_000)
    e = rng.uniform(-0.5, 0.5, 100_000)
    m = rng.integers(-200, 200, 100_000).astype(float)
    n = rng.integers(-200, 200, 100_000).astype(float)
    lhs = np.array([eigen_D_be(bi, ei, mi, ni) for bi, ei, mi, ni
                    in zip(b[:300], e[:300], m[:300], n[:300])])
    rhs = np.array([eigen_D_be_factored(bi, ei, mi, ni) for bi, ei, mi, ni
                    in zip(b[:300], e[:300], m[:300], n[:300])])
    scale = np.maximum(np.abs(lhs), 1.0)
    assert np.max(np.abs(lhs - rhs) / scale) < 1e-12
    # vectorized forms over the full sample
    D1 = eigen_D_be(0.5, 0.01, m, n)
    D2 = eigen_D_be_factored(0.5, 0.01, m, n)
    assert np.max(np.abs(D1 - D2) / np.maximum(np.abs(D1), 1.0)) < 1e-12


def test_eigen_be_regression_value():
    # direct evaluation at (b, eps) = (0.5, 0.01), (m, n) = (1, -1):
    # 0.01 - 2(1 + 5e-5) + 0.005(2 + 5e-5)
    assert eigen_D_be(0.5, 0.01, 1, -1) == pytest.approx(-1.98009975, abs=1e-12)


def test_eigen_ae_eps_zero():
    rng = np.random.default_rng(2)
    for _ in range(20):
        a = rng.normal()
        m, n = rng.integers(-50, 50, 2)
        assert eigen_D_ae(a, 0.0, m, n) == pytest.approx(4.0 * m * n, abs=1e-12)


def test_eigen_ae_factored_matches_expanded():
    rng = np.random.default_rng(3)
    a = rng.uniform(0.5, 1.5, 300)
    e = rng.uniform(-0.3, 0.3, 300)
    m = rng.integers(-200, 200, 300).astype(float)
    n = rng.integers(-200, 200, 300).astype(float)
    for ai, ei, mi, ni in zip(a, e, m, n):
        lhs = eigen_D_ae(ai, ei, mi, ni)
        rhs = eigen_D_ae_factored(ai, ei, mi, ni)
        assert abs(lhs - rhs) / max(abs(lhs), 1.0) < 1e-12


def test_eigen_ae_regression_value():
    # 0.01*2.01*4 + 0.01*2.01*1 + 2*(2 + 0.02 + 0.0001)*(2*(-1)) = -7.9799
    assert eigen_D_ae(1.0, 0.01, 2, -1) == pytest.approx(-7.9799, abs=1e-12)


# ---------------------------------------------------------------------------
# parameter maps


def test_make_params_formula_example():
    p = make_params(0.1, 0.1, gamma=0.1)
    assert p.b == pytest.approx(0.495, abs=1e-15)
    assert p.epsilon == pytest.approx(0.2 / 0.99, abs=1e-15)


def test_pair_map_roundtrip():
    rng = np.random.default_rng(4)
    for _ in range(200):
        x = rng.uniform(-0.24, 0.24)
        y = rng.uniform(-0.24, 0.24)
        if abs(x) < 1e-3:
            continue
        p = make_params(x, y, gamma=0.1)
        xb, yb = pair_map_be(p.b, p.epsilon)
        assert xb == pytest.approx(x, abs=1e-12)
        assert yb == pytest.approx(y, abs=1e-12)


def test_counter_pair_map_roundtrip():
    rng = np.random.default_rng(5)
    for _ in range(200):
        x = rng.uniform(0.001, 0.24)
        y = rng.uniform(0.001, 0.24)
        p = make_counter_params(x, y, gamma=0.1)
        xb, yb = pair_map_ae(p.a, p.epsilon)
        assert xb == pytest.approx(x, abs=1e-12)
        assert yb == pytest.approx(y, abs=1e-12)


def test_params_accumulate_at_half_zero():
    # x -> 0 with x/y -> 1 gives (b, eps) -> (1/2, 0)
    for x in (1e-2, 1e-3, 1e-4):
        p = make_params(x, x, gamma=0.1)
        assert abs(p.b - 0.5) < x
        assert abs(p.epsilon) < 3 * x


def test_params_validation():
    with pytest.raises(DomainError):
        make_params(0.0, 0.1, gamma=0.1)
    with pytest.raises(DomainError):
        make_params(0.3, 0.1, gamma=0.1)   # |x| >= delta
    with pytest.raises(UsageError):
        make_params(0.1, 0.1)              # raw floats need explicit gamma


def test_prefactor_identity():
    p = make_params(0.1, 0.2, gamma=0.1)
    assert p.prefactor == pytest.approx(2.0 / (1.0 - 0.1 * 0.2), rel=1e-14)
    assert abs(p.prefactor) > 2.0 / (1.0 + p.delta ** 2)


def test_omega_maps():
    b, eps = omega_to_be(1.0 + 0.01, 1.0)
    assert b == 0.0 and eps == pytest.approx(0.01, abs=1e-15)
    b, eps = omega_to_be(1.0102, 1.0002)
    assert eps == pytest.approx(0.01, abs=1e-12)
    assert b == pytest.approx(2.0, rel=1e-10)
    with pytest.raises(DomainError):
        omega_to_be(1.0, 1.0)


@given(st.lists(st.integers(1, 7), min_size=24, max_size=40),
       st.integers(1, 500))
@settings(max_examples=60, deadline=None)
def test_bounded_quotients_always_accepted(tail, a1):
    # with quotients below 1/gamma - 2 from the second entry on, the number
    # passes the scan at every tested depth (first quotient unrestricted)
    bn = cf_bad_number([a1] + tail, gamma=0.1, n_max=3000)
    assert bn.scan.ok
    assert bn.scan.min_quality > 0.1


@given(st.floats(-2.0, 2.0), st.floats(1e-3, 0.4))
@settings(max_examples=100, deadline=None)
def test_omega_roundtrip(b, eps):
    # recovering b divides (w2 - 1) ~ b eps^2 by eps^2, so the roundtrip
    # loses roughly eps_machine / eps^2 in absolute terms
    w1, w2 = be_to_omega(b, eps)
    b2, e2 = omega_to_be(w1, w2)
    assert e2 == pytest.approx(eps, rel=1e-12)
    assert b2 == pytest.approx(b, abs=1e-15 / eps ** 2 + 1e-12)


# ---------------------------------------------------------------------------
# divisor scans


@pytest.fixture(scope="module")
def good_params():
    x = cf_bad_number([5] * 40, gamma=0.1, n_max=10_000)
    return make_params(x, x)


def test_min_divisor_scan_passes(good_params):
    rep = min_divisor_scan(good_params, 200)
    assert rep.passed
    assert rep.min_divisor > 0.1
    assert rep.proposition_ok
    assert rep.prefactor_ok
    assert rep.case_bounds_ok
    total = sum(rep.case_histogram.values())
    assert total == 400 * 400


def test_min_divisor_scan_rational_fails():
    p = make_params(0.1, 0.1, gamma=0.1)   # x = 1/10 exactly
    rep = min_divisor_scan(p, 200)
    assert not rep.passed
    assert rep.min_divisor < 1e-10
    # the witness exposes the rational: one bracket vanishes on a 1/10 lattice
    assert rep.witness_m % 10 == 0 or rep.witness_n % 10 == 0


def test_min_divisor_counter_variant():
    x = cf_bad_number([7] * 40, gamma=0.1, n_max=10_000)
    y = cf_bad_number([6] * 40, gamma=0.1, n_max=10_000)
    cp = make_counter_params(x, y)
    rep = min_divisor_scan(cp, 150)
    assert rep.passed
    assert rep.min_divisor > 0.1


def test_divisor_scan_matches_eigenvalues(good_params):
    rep = min_divisor_scan(good_params, 50)
    direct = abs(eigen_D_be(good_params.b, good_params.epsilon,
                            rep.witness_m, rep.witness_n))
    assert direct == pytest.approx(rep.min_divisor, rel=1e-12)


def test_scan_size_guard(good_params):
    with pytest.raises(UsageError):
        min_divisor_scan(good_params, 5000)


def test_lambda_value_identity(good_params):
    lam = good_params.lambda_value
    assert lam == pytest.approx(
        good_params.b * (2.0 + good_params.b * good_params.epsilon ** 2), rel=1e-14)
