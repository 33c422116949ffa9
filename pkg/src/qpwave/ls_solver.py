"""The Lyapunov-Schmidt pipeline.

The truncated problem is solved in coefficient space on the index square
[-N, N]^2.  Writing F(u) = u^3 - f_eps(u), the four projected equations are

    C :   F_hat(0, 0) = 0
    Q1:   -q1 j^2 r_j + 2 F_hat(j, 0) = 0          (cosine coefficients)
    Q2:   -q2 j^2 s_j + 2 F_hat(0, j) = 0
    P :   p_hat(m, n) = eps F_hat(m, n) / D(m, n)   (m, n != 0)

with (q1, q2) = (1, b(2+b eps^2)) for the co-propagating form and
((2+eps), a(2+a eps)) for the counter-propagating one, and D the matching
eigenvalue family.  The P-equation is solved by fixed-point iteration (the
inverse is bounded by 1/gamma on verified parameters), the kernel equations
by Newton with the analytic linearization; the outer loop alternates the
two until the joint residual stalls below tolerance.

Cubes and nonlinearity polynomials are evaluated exactly through padded
FFTs (one forward transform, powers in transform space, one inverse) and
truncated back to N, with the discarded tail mass reported.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .diophantine import CounterParams, DivisorParams
from .errors import ConvergenceError, DomainError, UsageError
from .fourier_field import (FourierField2, PeriodicProfile1, SpaceWeights,
                            field_from_json, field_to_json, profile_from_json,
                            profile_to_json)

__all__ = [
    "Nonlinearity",
    "LSConfig",
    "LSSolution",
    "rescale_f",
    "solve_range",
    "solve_bifurcation",
    "solve_full",
    "sample_solution",
    "phi_rescale",
    "solution_to_json",
    "solution_from_json",
    "save_solution",
    "load_solution",
]

CO = "co-propagating"
COUNTER = "counter-propagating"


# --------------------------------------------------------------------------
# nonlinearities


@dataclass(frozen=True)
class Nonlinearity:
    """Polynomial perturbation f(v) = sum_k coeffs[k] v^k with k >= 4.

    The cubic part of the equation is fixed; anything below degree 4 in f
    would change the leading-order balance, so those slots must be zero.
    """

    coeffs: tuple = ()

    def __post_init__(self):
        c = tuple(float(v) for v in self.coeffs)
        if len(c) > 0 and any(v != 0.0 for v in c[:min(4, len(c))]):
            raise DomainError("f must vanish to fourth order: coefficients "
                              "of v^0..v^3 have to be zero")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls) -> "Nonlinearity":
        return cls(())

    @classmethod
    def quartic(cls, c: float = 1.0) -> "Nonlinearity":
        return cls((0.0, 0.0, 0.0, 0.0, c))

    @classmethod
    def quintic(cls, c: float = 1.0) -> "Nonlinearity":
        return cls((0.0, 0.0, 0.0, 0.0, 0.0, c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else 0

    @property
    def is_zero(self) -> bool:
        return all(v == 0.0 for v in self.coeffs)

    def __call__(self, v):
        if not self.coeffs:
            return np.zeros_like(np.asarray(v, dtype=float)) if np.ndim(v) else 0.0
        return np.polyval(list(reversed(self.coeffs)), v)

    def derivative_coeffs(self) -> tuple:
        return tuple(k * c for k, c in enumerate(self.coeffs))[1:] if self.coeffs else ()


def rescale_f(f: Nonlinearity, epsilon: float, variant: str) -> Nonlinearity:
    """Amplitude rescaling of the perturbation.

    co-propagating: f_eps(u) = eps^-3 f(eps u), so v^k picks up eps^(k-3);
    counter-propagating: f_eps(u) = eps^-3/2 f(sqrt(eps) u), factor
    eps^((k-3)/2)."""
    if epsilon == 0.0:
        raise DomainError("epsilon must be nonzero")
    if variant not in (CO, COUNTER):
        raise UsageError(f"unknown variant {variant!r}")
    if variant == COUNTER and epsilon < 0.0:
        raise DomainError("the counter-propagating rescaling needs epsilon > 0")
    power = (lambda k: epsilon ** (k - 3)) if variant == CO \
        else (lambda k: epsilon ** ((k - 3) / 2.0))
    return Nonlinearity(tuple(c * power(k) for k, c in enumerate(f.coeffs)))


# --------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class LSConfig:
    """Solve configuration: weighted space, verified parameters, tolerances."""

    weights: SpaceWeights
    params: object                   # DivisorParams or CounterParams
    contraction_tol: float = 1e-13
    newton_tol: float = 1e-10
    max_inner: int = 200
    max_outer: int = 50
    profile_grid: int = 2048

    def __post_init__(self):
        if not isinstance(self.params, (DivisorParams, CounterParams)):
            raise UsageError("params must be DivisorParams or CounterParams")
        if self.params.epsilon <= 0.0:
            raise DomainError("the solver accepts only epsilon > 0")
        if self.contraction_tol <= 0.0 or self.newton_tol <= 0.0:
            raise DomainError("tolerances must be positive")
        lam = self.params.lambda_value
        if lam <= 0.0:
            raise DomainError("lambda = q2/q1 must be positive")

    @property
    def variant(self) -> str:
        return CO if isinstance(self.params, DivisorParams) else COUNTER

    @property
    def epsilon(self) -> float:
        return self.params.epsilon

    def q_coeffs(self):
        """Stiffness coefficients (q1, q2) of the two kernel wave equations."""
        p = self.params
        if self.variant == CO:
            return 1.0, p.b * (2.0 + p.b * p.epsilon ** 2)
        return 2.0 + p.epsilon, p.a * (2.0 + p.a * p.epsilon)


# --------------------------------------------------------------------------
# coefficient-space helpers


def _divisor_square(cfg: LSConfig) -> np.ndarray:
    N = cfg.weights.N
    k = np.arange(-N, N + 1)
    M, Nn = np.meshgrid(k, k, indexing="ij")
    return cfg.params.divisor(M, Nn)


def _p_mask(N: int) -> np.ndarray:
    mask = np.ones((2 * N + 1, 2 * N + 1), dtype=bool)
    mask[N, :] = False
    mask[:, N] = False
    return mask


def _fft_size(N: int, degree: int) -> int:
    need = degree * 2 * N + 1
    return 1 << (need - 1).bit_length()


def _embed_modes(u: np.ndarray, N: int, size: int) -> np.ndarray:
    """Place the coefficient square on the FFT torus with mode 0 at index 0;
    powers of the transform then stay centered for any degree."""
    out = np.zeros((size, size))
    idx = np.arange(-N, N + 1) % size
    out[np.ix_(idx, idx)] = u
    return out


def _extract_modes(full: np.ndarray, N: int) -> np.ndarray:
    size = full.shape[0]
    idx = np.arange(-N, N + 1) % size
    return full[np.ix_(idx, idx)]


def _nonlinear_term(u: np.ndarray, f_eps: Nonlinearity, N: int):
    """F(u) = u^3 - f_eps(u), exactly on the extended range, truncated to N.

    Returns (coefficients on [-N,N]^2, relative l2 tail mass discarded)."""
    degree = max(3, f_eps.degree)
    size = _fft_size(N, degree)
    U = np.fft.rfft2(_embed_modes(u, N, size))
    T = U ** 3
    if not f_eps.is_zero:
        for k, c in enumerate(f_eps.coeffs):
            if c != 0.0:
                T = T - c * U ** k
    full = np.fft.irfft2(T, s=(size, size))
    kept = _extract_modes(full, N)
    total = float(np.sum(full * full))
    kept_mass = float(np.sum(kept * kept))
    tail = np.sqrt(max(total - kept_mass, 0.0) / total) if total > 0.0 else 0.0
    return kept, tail


def _jacobian_weight(u: np.ndarray, f_eps: Nonlinearity, N: int) -> np.ndarray:
    """w = 3u^2 - f_eps'(u) on the extended range [-2N, 2N]^2."""
    degree = max(3, f_eps.degree)
    size = _fft_size(N, degree)
    U = np.fft.rfft2(_embed_modes(u, N, size))
    W = 3.0 * U ** 2
    for k, c in enumerate(f_eps.derivative_coeffs()):
        # slot k multiplies u^k in the derivative polynomial
        if c != 0.0:
            W = W - c * U ** k
    full = np.fft.irfft2(W, s=(size, size))
    return _extract_modes(full, 2 * N)


def _assemble(u00: float, r_cos: np.ndarray, s_cos: np.ndarray,
              p: np.ndarray, N: int) -> np.ndarray:
    u = np.array(p)
    u[N, N] += u00
    j = np.arange(1, N + 1)
    u[N + j, N] += 0.5 * r_cos
    u[N - j, N] += 0.5 * r_cos
    u[N, N + j] += 0.5 * s_cos
    u[N, N - j] += 0.5 * s_cos
    return u


def _weighted_norm(coeffs: np.ndarray, weights: SpaceWeights) -> float:
    return float(np.sqrt(np.sum(coeffs * coeffs * weights.weight_array())))


def _profile_norm(cos_coeffs: np.ndarray, weights: SpaceWeights) -> float:
    j = np.arange(1, len(cos_coeffs) + 1, dtype=float)
    w = (1.0 + j ** (2.0 * weights.s)) * np.exp(2.0 * weights.sigma * j)
    return float(np.sqrt(0.5 * np.sum(cos_coeffs ** 2 * w)))


# --------------------------------------------------------------------------
# range equation


def _solve_range_arrays(u00, r_cos, s_cos, p0, cfg: LSConfig,
                        f_eps: Nonlinearity, D: np.ndarray, pmask: np.ndarray):
    """Fixed point p <- eps * F(z + p)|_P / D.  Returns (p, info)."""
    N = cfg.weights.N
    eps = cfg.epsilon
    invD = np.where(pmask, 1.0 / np.where(pmask, D, 1.0), 0.0)
    p = np.zeros((2 * N + 1, 2 * N + 1)) if p0 is None else np.array(p0)
    updates = []
    tail = 0.0
    stalled = False
    for it in range(cfg.max_inner):
        u = _assemble(u00, r_cos, s_cos, p, N)
        if np.max(np.abs(u)) > 1e6:
            prev = updates[-1] if updates else float("nan")
            raise ConvergenceError(
                f"range iteration blew up (previous update {prev:.3e}); "
                "parameters are outside the contraction domain")
        T, tail = _nonlinear_term(u, f_eps, N)
        p_new = eps * T * invD
        upd = _weighted_norm(p_new - p, cfg.weights)
        updates.append(upd)
        p = p_new
        if upd < cfg.contraction_tol:
            break
        # rounding floor of the weighted update; further sweeps cannot improve
        if it >= 2 and upd >= 0.7 * updates[-2] and upd < 1e-6:
            stalled = True
            break
    else:
        prev = updates[-2] if len(updates) > 1 else 1.0
        raise ConvergenceError(
            f"range fixed point did not converge: last update {updates[-1]:.3e}, "
            f"contraction factor {updates[-1] / max(prev, 1e-300):.3f}")
    # contraction factor from the geometric phase, before any rounding stall
    ratios = [updates[i + 1] / updates[i] for i in range(len(updates) - 1)
              if updates[i] > 1e-15]
    clean = [r for r in ratios if r < 0.9]
    factor = max(clean) if clean else (max(ratios) if ratios else 0.0)
    if factor >= 1.0:
        raise ConvergenceError(f"range iteration is not a contraction "
                               f"(measured factor {factor:.3f})")
    info = {"iterations": len(updates), "contraction_factor": factor,
            "tail_mass": tail, "stalled_at": updates[-1] if stalled else 0.0}
    return p, info


def solve_range(z, cfg: LSConfig, f: Nonlinearity = Nonlinearity.zero()):
    """Public range solve: z = (u00, r, s) with even zero-average profiles.

    Returns the interior component as a FourierField2 plus an info dict with
    the measured contraction factor."""
    u00, r, s = z
    N = cfg.weights.N
    r_cos = _profile_to_cos(r, N)
    s_cos = _profile_to_cos(s, N)
    f_eps = rescale_f(f, cfg.epsilon, cfg.variant) if not f.is_zero else f
    D = _divisor_square(cfg)
    pmask = _p_mask(N)
    _check_divisors(D, pmask, cfg)
    p, info = _solve_range_arrays(u00, r_cos, s_cos, None, cfg, f_eps, D, pmask)
    return FourierField2(cfg.weights, p), info


def _check_divisors(D, pmask, cfg):
    dmin = float(np.min(np.abs(D[pmask])))
    if dmin <= cfg.params.gamma:
        raise DomainError(
            f"divisors dip to {dmin:.3e} <= gamma={cfg.params.gamma} inside "
            f"the truncation; parameters are not usable at this N")


def _profile_to_cos(prof, N: int) -> np.ndarray:
    if isinstance(prof, PeriodicProfile1):
        if prof.parity != "even":
            raise UsageError("kernel components must be even profiles")
        c = np.zeros(N + 1)
        take = min(prof.n_modes, N)
        c[:take + 1] = prof.coeffs[:take + 1]
        if abs(c[0]) > 1e-12:
            raise UsageError("kernel components must have zero average")
        return c[1:]
    c = np.asarray(prof, dtype=float)
    if len(c) != N:
        raise UsageError(f"need {N} cosine coefficients, got {len(c)}")
    return c


# --------------------------------------------------------------------------
# kernel (bifurcation) equations


def _z_residual(u00, r_cos, s_cos, p, cfg, f_eps):
    N = cfg.weights.N
    q1, q2 = cfg.q_coeffs()
    u = _assemble(u00, r_cos, s_cos, p, N)
    T, tail = _nonlinear_term(u, f_eps, N)
    j = np.arange(1, N + 1)
    res = np.empty(1 + 2 * N)
    res[0] = T[N, N]
    res[1:N + 1] = -q1 * j * j * r_cos + 2.0 * T[N + j, N]
    res[N + 1:] = -q2 * j * j * s_cos + 2.0 * T[N, N + j]
    return res, T, tail


def _z_jacobian(u00, r_cos, s_cos, p, cfg, f_eps):
    N = cfg.weights.N
    q1, q2 = cfg.q_coeffs()
    u = _assemble(u00, r_cos, s_cos, p, N)
    w = _jacobian_weight(u, f_eps, N)   # indexed [-2N..2N] with offset 2N
    o = 2 * N
    j = np.arange(1, N + 1)
    dim = 1 + 2 * N
    J = np.empty((dim, dim))

    J[0, 0] = w[o, o]
    J[1:N + 1, 0] = 2.0 * w[o + j, o]
    J[N + 1:, 0] = 2.0 * w[o, o + j]

    for k in range(1, N + 1):
        # x-direction (r_k)
        J[0, k] = w[o + k, o]
        J[1:N + 1, k] = w[o + j - k, o] + w[o + j + k, o]
        J[N + 1:, k] = w[o - k, o + j] + w[o + k, o + j]
        # y-direction (s_k)
        J[0, N + k] = w[o, o + k]
        J[1:N + 1, N + k] = w[o + j, o - k] + w[o + j, o + k]
        J[N + 1:, N + k] = w[o, o + j - k] + w[o, o + j + k]

    d = np.concatenate(([0.0], -q1 * j * j, -q2 * j * j))
    J[np.arange(dim), np.arange(dim)] += d
    return J


def _initial_guess(cfg: LSConfig, profile):
    """Kernel seed from the calibrated profile through the variant rescaling."""
    N = cfg.weights.N
    beta_cos = _beta_cosines(profile, N, cfg.profile_grid)
    if cfg.variant == CO:
        lam = cfg.params.lambda_value
        return 0.0, beta_cos.copy(), np.sqrt(lam) * beta_cos
    pr = cfg.params
    return (0.0, np.sqrt(2.0 + pr.epsilon) * beta_cos,
            np.sqrt(pr.a * (2.0 + pr.a * pr.epsilon)) * beta_cos)


def _beta_cosines(profile, N: int, grid: int) -> np.ndarray:
    prof = PeriodicProfile1.from_samples(profile.beta_samples(grid), "even", N)
    return np.array(prof.coeffs[1:])


def solve_bifurcation(cfg: LSConfig, f: Nonlinearity = Nonlinearity.zero(),
                      profile=None, couple_p: bool = True, z0=None):
    """Alternate range solves with Newton steps on the kernel equations.

    With couple_p=False the interior component is pinned to zero and the
    perturbation dropped, which solves the bare kernel system (the mu = 0
    bifurcation equations); that mode needs no verified divisors.

    Returns (u00, r_cos, s_cos, p, diagnostics)."""
    from .elliptic import find_m_bar
    N = cfg.weights.N
    if profile is None:
        profile = find_m_bar(1e-12)
    f_eps = rescale_f(f, cfg.epsilon, cfg.variant) if (couple_p and not f.is_zero) \
        else Nonlinearity.zero()

    if couple_p:
        D = _divisor_square(cfg)
        pmask = _p_mask(N)
        _check_divisors(D, pmask, cfg)

    if z0 is None:
        u00, r_cos, s_cos = _initial_guess(cfg, profile)
    else:
        u00, r_cos, s_cos = z0[0], np.array(z0[1]), np.array(z0[2])
    p = np.zeros((2 * N + 1, 2 * N + 1))

    diag = {"newton_steps": 0, "range_iterations": 0,
            "contraction_factor": 0.0, "tail_mass": 0.0}
    res_norm = np.inf
    polished = False
    for step in range(cfg.max_outer):
        if couple_p:
            p, info = _solve_range_arrays(u00, r_cos, s_cos, p, cfg, f_eps, D, pmask)
            diag["range_iterations"] += info["iterations"]
            diag["contraction_factor"] = max(diag["contraction_factor"],
                                             info["contraction_factor"])
            diag["tail_mass"] = max(diag["tail_mass"], info["tail_mass"])
        res, _, _ = _z_residual(u00, r_cos, s_cos, p, cfg, f_eps)
        new_norm = float(np.max(np.abs(res)))
        if new_norm < cfg.newton_tol:
            # one extra quadratic step once inside tolerance drops the
            # kernel residual to rounding level, keeping the assembled
            # equation residual far from the reported bound
            if polished or new_norm < 1e-14:
                res_norm = new_norm
                break
            polished = True
        elif new_norm > 10.0 * max(res_norm, 1.0):
            raise ConvergenceError(f"kernel Newton diverging: residual {new_norm:.3e}")
        res_norm = new_norm
        J = _z_jacobian(u00, r_cos, s_cos, p, cfg, f_eps)
        try:
            delta = np.linalg.solve(J, -res)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"singular kernel Jacobian: {exc}") from exc
        u00 += delta[0]
        r_cos = r_cos + delta[1:N + 1]
        s_cos = s_cos + delta[N + 1:]
        diag["newton_steps"] += 1
    else:
        raise ConvergenceError(
            f"kernel Newton did not reach tol={cfg.newton_tol}: residual {res_norm:.3e}")

    if couple_p:
        p, info = _solve_range_arrays(u00, r_cos, s_cos, p, cfg, f_eps, D, pmask)
        diag["range_iterations"] += info["iterations"]
        diag["contraction_factor"] = max(diag["contraction_factor"],
                                         info["contraction_factor"])
        diag["tail_mass"] = max(diag["tail_mass"], info["tail_mass"])
    res, _, _ = _z_residual(u00, r_cos, s_cos, p, cfg, f_eps)
    diag["kernel_residual"] = float(np.max(np.abs(res)))
    return u00, r_cos, s_cos, p, diag


# --------------------------------------------------------------------------
# full solve


@dataclass(frozen=True)
class LSSolution:
    """Assembled solution u = u00 + r + s + p with its diagnostics."""

    variant: str
    epsilon: float
    parameter: float            # b (co-propagating) or a (counter-propagating)
    gamma: float
    lambda_value: float
    u00: float
    r: PeriodicProfile1 = field(repr=False)
    s: PeriodicProfile1 = field(repr=False)
    p: FourierField2 = field(repr=False)
    residual_norm: float = 0.0
    f_coeffs: tuple = ()
    diagnostics: dict = field(default_factory=dict)

    def u_eval(self, phi1, phi2):
        return (self.u00 + self.r(phi1) + self.s(phi2)
                + self.p.eval(phi1, phi2))


def solve_full(cfg: LSConfig, f: Nonlinearity = Nonlinearity.zero(),
               profile=None) -> LSSolution:
    """Run the coupled solve, assemble the solution, and fill diagnostics
    (residual norm, component bounds against the calibrated profile, range
    bound ratios, non-triviality norms)."""
    from .elliptic import find_m_bar
    if profile is None:
        profile = find_m_bar(1e-12)
    N = cfg.weights.N
    eps = cfg.epsilon
    u00, r_cos, s_cos, p, diag = solve_bifurcation(cfg, f, profile=profile)

    f_eps = rescale_f(f, eps, cfg.variant) if not f.is_zero else f
    u = _assemble(u00, r_cos, s_cos, p, N)
    T, tail = _nonlinear_term(u, f_eps, N)
    D = _divisor_square(cfg)
    residual = -D * u + eps * T
    residual_norm = _weighted_norm(residual, cfg.weights)

    beta_cos = _beta_cosines(profile, N, cfg.profile_grid)
    r_norm = _profile_norm(r_cos, cfg.weights)
    s_norm = _profile_norm(s_cos, cfg.weights)
    p_norm = _weighted_norm(p, cfg.weights)
    z_norm = float(np.sqrt(u00 ** 2 + r_norm ** 2 + s_norm ** 2))

    if cfg.variant == CO:
        par = cfg.params.b
        dist = abs(par - 0.5) + eps
        r_ref, s_ref = beta_cos, beta_cos
    else:
        par = cfg.params.a
        dist = abs(par - 1.0) + eps
        r_ref = np.sqrt(2.0 + eps) * beta_cos
        s_ref = np.sqrt(cfg.params.a * (2.0 + cfg.params.a * eps)) * beta_cos
    dev = (_profile_norm(r_cos - r_ref, cfg.weights)
           + _profile_norm(s_cos - s_ref, cfg.weights) + abs(u00))

    # core-variable deviation through the variant rescaling
    c_core, x_core, y_core = phi_rescale(cfg, u00, r_cos, s_cos)
    dev_core = (_profile_norm(x_core - beta_cos, cfg.weights)
                + _profile_norm(y_core - beta_cos, cfg.weights) + abs(c_core))

    diag.update({
        "p_norm": p_norm,
        "z_norm": z_norm,
        "r_norm": r_norm,
        "s_norm": s_norm,
        "range_bound_ratio": p_norm * cfg.params.gamma / (eps * z_norm ** 3),
        "p_over_eps": p_norm / eps,
        "z_bound_ratio": dev / dist,
        "z_core_bound_ratio": dev_core / dist,
        "tail_mass": max(diag.get("tail_mass", 0.0), tail),
    })
    if r_norm <= 0.1 or s_norm <= 0.1:
        raise ConvergenceError(
            f"degenerate solution: |r|={r_norm:.3f}, |s|={s_norm:.3f}; "
            "quasi-periodicity needs both components nontrivial")

    r_prof = PeriodicProfile1.from_coeffs("even", np.concatenate(([0.0], r_cos)),
                                          grid=cfg.profile_grid)
    s_prof = PeriodicProfile1.from_coeffs("even", np.concatenate(([0.0], s_cos)),
                                          grid=cfg.profile_grid)
    return LSSolution(
        variant=cfg.variant, epsilon=eps, parameter=par,
        gamma=cfg.params.gamma, lambda_value=cfg.params.lambda_value,
        u00=u00, r=r_prof, s=s_prof, p=FourierField2(cfg.weights, p),
        residual_norm=residual_norm, f_coeffs=f.coeffs, diagnostics=diag)


def phi_rescale(cfg: LSConfig, u00, r_cos, s_cos):
    """Map kernel components to the core variables (c, x, y) of the rescaled
    system: both variants land on the same equations there."""
    if cfg.variant == CO:
        lam = cfg.params.lambda_value
        return u00, np.array(r_cos), s_cos / np.sqrt(lam)
    pr = cfg.params
    root1 = np.sqrt(2.0 + pr.epsilon)
    root2 = np.sqrt(pr.a * (2.0 + pr.a * pr.epsilon))
    return u00 / root1, r_cos / root1, s_cos / root2


# --------------------------------------------------------------------------
# sampling


def sample_solution(sol: LSSolution, t, x):
    """Physical field values v(t, x) on broadcastable arrays.

    co-propagating:      v = eps * u(eps t, (1 + b eps^2) t + x)
    counter-propagating: v = sqrt(eps) * u((1+eps) t + x, (1+a eps) t - x)
    """
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    eps = sol.epsilon
    if sol.variant == CO:
        b = sol.parameter
        phi1 = eps * t
        phi2 = (1.0 + b * eps * eps) * t + x
        amp = eps
    else:
        a = sol.parameter
        phi1 = (1.0 + eps) * t + x
        phi2 = (1.0 + a * eps) * t - x
        amp = np.sqrt(eps)
    return amp * sol.u_eval(phi1, phi2)


# --------------------------------------------------------------------------
# serialization


def solution_to_json(sol: LSSolution) -> dict:
    return {
        "variant": sol.variant,
        "epsilon": sol.epsilon,
        "parameter": sol.parameter,
        "gamma": sol.gamma,
        "lambda_value": sol.lambda_value,
        "u00": sol.u00,
        "r": profile_to_json(sol.r),
        "s": profile_to_json(sol.s),
        "p": field_to_json(sol.p),
        "residual_norm": sol.residual_norm,
        "f_coeffs": list(sol.f_coeffs),
        "diagnostics": sol.diagnostics,
    }


def solution_from_json(data: dict) -> LSSolution:
    return LSSolution(
        variant=data["variant"],
        epsilon=float(data["epsilon"]),
        parameter=float(data["parameter"]),
        gamma=float(data["gamma"]),
        lambda_value=float(data["lambda_value"]),
        u00=float(data["u00"]),
        r=profile_from_json(data["r"]),
        s=profile_from_json(data["s"]),
        p=field_from_json(data["p"]),
        residual_norm=float(data["residual_norm"]),
        f_coeffs=tuple(data.get("f_coeffs", ())),
        diagnostics=dict(data.get("diagnostics", {})),
    )


def save_solution(sol: LSSolution, path):
    with open(path, "w") as fh:
        json.dump(solution_to_json(sol), fh, indent=1)


def load_solution(path) -> LSSolution:
    with open(path) as fh:
        return solution_from_json(json.load(fh))
