import numpy as np
import pytest

from qpwave import fitted
from qpwave.diophantine import (CounterParams, cf_bad_number, make_counter_params,
                                make_params, pair_map_ae)
from qpwave.errors import ConvergenceError, DomainError, UsageError
from qpwave.fourier_field import (PeriodicProfile1, SpaceWeights, norm_sigma,
                                  project)
from qpwave.ls_solver import (CO, COUNTER, LSConfig, Nonlinearity, load_solution,
                              rescale_f, sample_solution, save_solution,
                              solution_from_json, solution_to_json,
                              solve_bifurcation, solve_full, solve_range)
from qpwave.ls_solver import _beta_cosines, phi_rescale

W32 = SpaceWeights(sigma=0.05, s=2.0, N=32)
W16 = SpaceWeights(sigma=0.05, s=2.0, N=16)


def co_params(a1=200, gamma=0.1):
    x = cf_bad_number([a1] + [5] * 39, gamma)
    return make_params(x, x)


@pytest.fixture(scope="module")
def params200():
    return co_params(200)


@pytest.fixture(scope="module")
def sol200(profile, params200):
    cfg = LSConfig(weights=W32, params=params200)
    return solve_full(cfg, Nonlinearity.zero(), profile=profile), cfg


# ---------------------------------------------------------------------------
# nonlinearities


def test_nonlinearity_low_order_rejected():
    with pytest.raises(DomainError):
        Nonlinearity((0.0, 0.0, 1.0))
    with pytest.raises(DomainError):
        Nonlinearity((0.0, 0.0, 0.0, 0.5, 1.0))


def test_nonlinearity_eval():
    f = Nonlinearity.quartic(2.0)
    assert f(0.5) == pytest.approx(2.0 * 0.5 ** 4, abs=1e-15)
    assert Nonlinearity.zero()(0.3) == 0.0
    assert f.degree == 4 and not f.is_zero


def test_rescale_zero_is_zero():
    f = rescale_f(Nonlinearity.zero(), 0.1, CO)
    assert f.is_zero


def test_rescale_quartic_co():
    # eps^-3 (eps u)^4 = eps u^4
    f = rescale_f(Nonlinearity.quartic(1.0), 0.01, CO)
    assert f.coeffs[4] == pytest.approx(0.01, rel=1e-15)


def test_rescale_quintic_counter():
    # eps^-3/2 (sqrt(eps) u)^5 = eps u^5
    f = rescale_f(Nonlinearity.quintic(1.0), 0.01, COUNTER)
    assert f.coeffs[5] == pytest.approx(0.01, rel=1e-15)


def test_rescale_validation():
    with pytest.raises(DomainError):
        rescale_f(Nonlinearity.quartic(), 0.0, CO)
    with pytest.raises(UsageError):
        rescale_f(Nonlinearity.quartic(), 0.1, "sideways")


# ---------------------------------------------------------------------------
# configuration


def test_config_rejects_nonpositive_epsilon():
    p = make_params(-0.01, -0.01, gamma=0.1)   # eps < 0
    with pytest.raises(DomainError):
        LSConfig(weights=W32, params=p)


def test_config_rejects_bad_tolerances(params200):
    with pytest.raises(DomainError):
        LSConfig(weights=W32, params=params200, newton_tol=0.0)


def test_config_variant_detection(params200):
    cfg = LSConfig(weights=W32, params=params200)
    assert cfg.variant == CO
    q1, q2 = cfg.q_coeffs()
    assert q1 == 1.0
    assert q2 == pytest.approx(params200.lambda_value, rel=1e-15)


# ---------------------------------------------------------------------------
# range equation


def test_range_zero_kernel_gives_zero_p(params200):
    cfg = LSConfig(weights=W32, params=params200)
    zero = PeriodicProfile1.zero("even", 32)
    p, info = solve_range((0.0, zero, zero), cfg)
    assert norm_sigma(p) == 0.0
    assert info["iterations"] <= 2


def test_range_output_is_interior(profile, params200):
    cfg = LSConfig(weights=W32, params=params200)
    beta = PeriodicProfile1.from_samples(profile.beta_samples(2048), "even", 32)
    p, info = solve_range((0.0, beta, beta), cfg)
    assert info["contraction_factor"] < 1.0
    # nothing outside the interior block
    assert norm_sigma(p - project(p, "P")) < 1e-15
    assert norm_sigma(p) > 0.0


def test_range_bound_scaling(profile):
    # ||p|| gamma / (eps ||z||^3) stays bounded across the sweep
    for a1 in (100, 200, 400):
        params = co_params(a1)
        cfg = LSConfig(weights=W32, params=params)
        sol = solve_full(cfg, Nonlinearity.zero(), profile=profile)
        assert sol.diagnostics["range_bound_ratio"] < fitted.RANGE_BOUND_C2
        assert sol.diagnostics["p_over_eps"] < fitted.P_OVER_EPS_BOUND


def test_range_refuses_wild_parameters(profile):
    # eps ~ 0.5 pushes eps ||z||^2 far outside the contraction domain
    x = cf_bad_number([4] * 40, 0.1)
    params = make_params(x, x)
    cfg = LSConfig(weights=W16, params=params, max_inner=60)
    beta = PeriodicProfile1.from_samples(profile.beta_samples(2048), "even", 16)
    with pytest.raises(ConvergenceError):
        solve_range((0.0, beta.scaled(2.0), beta.scaled(2.0)), cfg)


# ---------------------------------------------------------------------------
# kernel system


def test_mu0_solution_at_lambda_one(profile, params200):
    # x = y parameters sit exactly on lambda = 1, where the kernel solution
    # is the calibrated profile pair
    cfg = LSConfig(weights=W32, params=params200)
    u00, r, s, p, diag = solve_bifurcation(cfg, profile=profile, couple_p=False)
    beta_cos = _beta_cosines(profile, 32, 2048)
    assert abs(u00) < 1e-10
    assert np.max(np.abs(r - beta_cos)) < 1e-9
    assert np.max(np.abs(s - beta_cos)) < 1e-9
    assert np.max(np.abs(p)) == 0.0
    assert diag["kernel_residual"] < 1e-10


def test_full_solution_residual(sol200):
    sol, cfg = sol200
    assert sol.residual_norm < 1e-8
    assert sol.diagnostics["contraction_factor"] < 1.0
    assert sol.diagnostics["r_norm"] > 0.1
    assert sol.diagnostics["s_norm"] > 0.1


def test_residual_norm_recomputable(sol200):
    # rebuild the equation residual from the stored components
    sol, cfg = sol200
    from qpwave.ls_solver import (_assemble, _divisor_square, _nonlinear_term,
                                  _weighted_norm)
    N = cfg.weights.N
    r_cos = sol.r.coeffs[1:N + 1]
    s_cos = sol.s.coeffs[1:N + 1]
    u = _assemble(sol.u00, r_cos, s_cos, np.array(sol.p.coeffs), N)
    T, _ = _nonlinear_term(u, Nonlinearity.zero(), N)
    R = -_divisor_square(cfg) * u + cfg.epsilon * T
    again = _weighted_norm(R, cfg.weights)
    assert again == pytest.approx(sol.residual_norm, rel=1e-12)


def test_theorem_bound_ratios(profile):
    for a1 in (100, 200, 400):
        params = co_params(a1)
        cfg = LSConfig(weights=W32, params=params)
        sol = solve_full(cfg, Nonlinearity.zero(), profile=profile)
        assert sol.diagnostics["z_bound_ratio"] < fitted.Z_BOUND_C1
        assert sol.diagnostics["z_core_bound_ratio"] < fitted.Z_BOUND_C1


def test_truncation_stability(profile, params200):
    cfg32 = LSConfig(weights=W32, params=params200)
    cfg64 = LSConfig(weights=SpaceWeights(sigma=0.05, s=2.0, N=64),
                     params=params200)
    a = solve_full(cfg32, Nonlinearity.zero(), profile=profile)
    b = solve_full(cfg64, Nonlinearity.zero(), profile=profile)
    dr = np.max(np.abs(b.r.coeffs[:33] - a.r.coeffs))
    ds = np.max(np.abs(b.s.coeffs[:33] - a.s.coeffs))
    assert max(dr, ds, abs(a.u00 - b.u00)) < 1e-6


def test_residual_shrinks_with_epsilon(profile):
    norms = []
    for a1 in (100, 200, 400):
        cfg = LSConfig(weights=W32, params=co_params(a1))
        sol = solve_full(cfg, Nonlinearity.zero(), profile=profile)
        norms.append((sol.epsilon, sol.residual_norm,
                      sol.diagnostics["contraction_factor"]))
    # contraction factor decreases with epsilon
    assert norms[0][2] > norms[1][2] > norms[2][2]
    # residuals all at rounding level rather than scaling with eps
    assert all(n[1] < 1e-8 for n in norms)


def test_quartic_solution_breaks_odd_symmetry(profile, params200):
    cfg = LSConfig(weights=W32, params=params200)
    sol = solve_full(cfg, Nonlinearity.quartic(1.0), profile=profile)
    assert sol.residual_norm < 1e-8
    assert abs(sol.u00) > 1e-4    # even perturbation forces a nonzero average


def test_quintic_solution_keeps_zero_average(profile, params200):
    cfg = LSConfig(weights=W32, params=params200)
    sol = solve_full(cfg, Nonlinearity.quintic(1.0), profile=profile)
    assert sol.residual_norm < 1e-8
    assert abs(sol.u00) < 1e-10


def test_counter_variant_solution(profile):
    x = cf_bad_number([400] + [5] * 39, 0.1)
    cp = make_counter_params(x, x)
    cfg = LSConfig(weights=W32, params=cp)
    sol = solve_full(cfg, Nonlinearity.zero(), profile=profile)
    assert sol.variant == COUNTER
    assert sol.residual_norm < 1e-8
    assert sol.diagnostics["z_bound_ratio"] < fitted.Z_BOUND_C1_COUNTER


def test_variant_equivalence_rescaled(profile):
    # matched lambda, f = 0: the two kernel systems agree in core variables
    x = cf_bad_number([200] + [5] * 39, 0.1)
    y = cf_bad_number([150] + [6] * 39, 0.1)
    params = make_params(x, y)
    lam = params.lambda_value
    cfg_co = LSConfig(weights=W32, params=params)
    u0c, rc, sc, _, _ = solve_bifurcation(cfg_co, profile=profile, couple_p=False)

    eps2 = 0.013
    a = (-1.0 + np.sqrt(1.0 + eps2 * lam * (2.0 + eps2))) / eps2
    xa, ya = pair_map_ae(a, eps2)
    cp = CounterParams(a=a, epsilon=eps2, gamma=0.1, x=xa, y=ya,
                       delta=0.25, scan_depth=0)
    cfg_ct = LSConfig(weights=W32, params=cp)
    u0t, rt, st, _, _ = solve_bifurcation(cfg_ct, profile=profile, couple_p=False)

    cc, xc, yc = phi_rescale(cfg_co, u0c, rc, sc)
    ct, xt, yt = phi_rescale(cfg_ct, u0t, rt, st)
    assert abs(cc - ct) < 1e-8
    assert np.max(np.abs(xc - xt)) < 1e-8
    assert np.max(np.abs(yc - yt)) < 1e-8


# ---------------------------------------------------------------------------
# sampling


def test_sample_at_origin(sol200):
    sol, _ = sol200
    v = sample_solution(sol, 0.0, 0.0)
    assert v == pytest.approx(sol.epsilon * sol.u_eval(0.0, 0.0), rel=1e-14)


def test_sample_argument_structure_co(sol200):
    sol, _ = sol200
    eps, b = sol.epsilon, sol.parameter
    t, x = 3.7, 1.2
    direct = eps * sol.u_eval(eps * t, (1 + b * eps * eps) * t + x)
    assert sample_solution(sol, t, x) == pytest.approx(direct, rel=1e-14)


def test_sample_argument_structure_counter(profile):
    x = cf_bad_number([400] + [5] * 39, 0.1)
    cp = make_counter_params(x, x)
    cfg = LSConfig(weights=W16, params=cp)
    sol = solve_full(cfg, Nonlinearity.zero(), profile=profile)
    eps, a = sol.epsilon, sol.parameter
    t, xx = 2.1, 0.7
    direct = np.sqrt(eps) * sol.u_eval((1 + eps) * t + xx, (1 + a * eps) * t - xx)
    assert sample_solution(sol, t, xx) == pytest.approx(direct, rel=1e-13)


def test_sample_leading_order(profile, sol200):
    sol, _ = sol200
    eps, b = sol.epsilon, sol.parameter
    t = np.linspace(0.0, 30.0, 9)
    x = np.linspace(0.0, 2 * np.pi, 9)
    T, X = np.meshgrid(t, x, indexing="ij")
    V = sample_solution(sol, T, X)
    lead = V / eps - profile.beta(eps * T) - profile.beta((1 + b * eps * eps) * T + X)
    dist = abs(b - 0.5) + eps
    assert np.max(np.abs(lead)) < 4.0 * dist


def test_wave_equation_finite_differences(sol200):
    sol, _ = sol200
    h = 5e-3
    rng = np.random.default_rng(31)
    pts = zip(rng.uniform(0, 20, 12), rng.uniform(0, 2 * np.pi, 12))
    worst = 0.0
    for t0, x0 in pts:
        vtt = (sample_solution(sol, t0 + h, x0) - 2 * sample_solution(sol, t0, x0)
               + sample_solution(sol, t0 - h, x0)) / h ** 2
        vxx = (sample_solution(sol, t0, x0 + h) - 2 * sample_solution(sol, t0, x0)
               + sample_solution(sol, t0, x0 - h)) / h ** 2
        v = sample_solution(sol, t0, x0)
        worst = max(worst, abs(vtt - vxx + v ** 3))
    assert worst < 1e-6


# ---------------------------------------------------------------------------
# serialization and determinism


def test_solution_json_roundtrip(sol200, tmp_path):
    sol, _ = sol200
    path = tmp_path / "sol.json"
    save_solution(sol, path)
    back = load_solution(path)
    t = np.linspace(0, 5, 7)
    x = np.linspace(0, 6, 7)
    assert np.max(np.abs(sample_solution(back, t, x) - sample_solution(sol, t, x))) < 1e-14
    assert back.variant == sol.variant
    assert back.residual_norm == sol.residual_norm


def test_solution_json_dict_roundtrip(sol200):
    sol, _ = sol200
    back = solution_from_json(solution_to_json(sol))
    assert back.u00 == sol.u00
    assert np.max(np.abs(back.p.coeffs - sol.p.coeffs)) == 0.0


def test_solve_is_deterministic(profile, params200):
    cfg = LSConfig(weights=W16, params=params200)
    a = solve_full(cfg, Nonlinearity.zero(), profile=profile)
    b = solve_full(cfg, Nonlinearity.zero(), profile=profile)
    assert a.residual_norm == b.residual_norm
    assert a.u00 == b.u00
    assert np.array_equal(a.p.coeffs, b.p.coeffs)
