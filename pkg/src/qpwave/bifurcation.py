"""The Green operator of the linearized profile equation, its identity suite,
the bifurcation map on the kernel, and the non-degeneracy certificate.

With beta the calibrated profile, the homogeneous equation

    w'' + (3 beta^2 + 3 <beta^2>) w = 0

has the odd 2*pi-periodic solution u_bar(xi) = sn(W xi) dn(W xi) / W
(normalized to u_bar'(0) = 1, W = Omega_bar) and an even non-periodic
solution

    v_bar(xi) = cn(W xi) + (V^2/W) cn'(W xi) [ xi + (2m-1)/2 * S(xi) ],
    S(xi) = int_0^xi sn^2(W t)/dn^2(W t) dt,

with v_bar(0) = 1, v_bar'(0) = 0, unit wronskian, and the translation defect
v_bar(xi + 2 pi) - v_bar(xi) = -V^2 k u_bar(xi) where

    k = 2 pi + (2m-1)/2 * int_0^{2 pi} sn^2/dn^2 (W t) dt
      = 2 pi (-1 + 16 m - 16 m^2) / (12 m (1 - m)).

The inverse of w -> w'' + (3 beta^2 + 3<beta^2>) w on even periodic
functions is then

    L[h] = (int_0^xi h v_bar) u_bar
         + [ (1/(V^2 k)) int_0^{2 pi} h v_bar - int_0^xi h u_bar ] v_bar.

All cumulative integrals are evaluated through exact spectral
antiderivatives of the periodic pieces (v_bar splits as V_per + xi * W_per
with both parts periodic), so the identity checks below run at the accuracy
of the truncated Fourier representation rather than of a quadrature step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .elliptic import EllipticProfile, jacobi_am_cn_sn_dn
from .errors import DomainError, UsageError
from .fourier_field import PeriodicProfile1

__all__ = [
    "GreenBasis",
    "Lemma3Report",
    "build_green_basis",
    "green_L",
    "green_ode_residual",
    "wronskian_error",
    "monodromy_error",
    "homogeneous_residuals",
    "verify_green_identities",
    "bifurcation_G",
    "dZG_matrix",
    "kernel_triviality_report",
]

DEFAULT_GRID = 4096
DEFAULT_MODES = 256


# --------------------------------------------------------------------------
# basis construction


@dataclass(frozen=True)
class GreenBasis:
    """Everything needed to apply the Green operator.

    v_bar is carried through its periodic split v_bar = v_per + xi * w_per;
    v_bar_at evaluates it (and the basis checks exercise it) on [0, 4 pi]
    without any analytic continuation.
    """

    profile: EllipticProfile
    grid: int
    n_modes: int
    xi: np.ndarray = field(repr=False)
    beta: PeriodicProfile1 = field(repr=False)
    beta_sq_avg: float = 0.0
    u_bar: PeriodicProfile1 = field(repr=False, default=None)
    v_per: PeriodicProfile1 = field(repr=False, default=None)
    w_per: PeriodicProfile1 = field(repr=False, default=None)
    k_green: float = 0.0
    k_closed: float = 0.0

    # -- evaluation anywhere -------------------------------------------------

    def u_bar_at(self, xi):
        return self.u_bar(xi)

    def v_bar_at(self, xi):
        xi = np.asarray(xi, dtype=float)
        return self.v_per(xi) + xi * self.w_per(xi)

    def v_bar_prime_at(self, xi):
        xi = np.asarray(xi, dtype=float)
        return self.v_per.derivative()(xi) + self.w_per(xi) + xi * self.w_per.derivative()(xi)

    def v_bar_pp_at(self, xi):
        xi = np.asarray(xi, dtype=float)
        return (self.v_per.second_derivative()(xi)
                + 2.0 * self.w_per.derivative()(xi)
                + xi * self.w_per.second_derivative()(xi))

    @property
    def v_bar_samples(self) -> np.ndarray:
        return self.v_per.samples + self.xi * self.w_per.samples

    def avg_with_v_bar(self, g) -> float:
        """Exact period average <g v_bar> for even g.

        The xi * w_per part is integrated by parts through the spectral
        antiderivative; a plain grid mean would lose the spectral accuracy
        because xi * w_per is not periodic."""
        g = _as_even_profile(g, self)
        m1 = (g * self.v_per).average
        Q = (g * self.w_per).antiderivative()
        return m1 - Q.average


def build_green_basis(profile: EllipticProfile, grid: int = DEFAULT_GRID,
                      n_modes: int = DEFAULT_MODES) -> GreenBasis:
    """Assemble u_bar, the periodic split of v_bar, and the constant k."""
    if grid < 1024 or grid & (grid - 1):
        raise UsageError("grid must be a power of two >= 1024")
    if abs(profile.psi_residual) > 1e-10:
        raise UsageError("profile is not calibrated (psi residual too large)")
    m = profile.m_bar
    W = profile.Omega_bar
    V2 = profile.V_bar_sq

    xi = 2.0 * np.pi * np.arange(grid) / grid
    _, cn, sn, dn = jacobi_am_cn_sn_dn(W * xi, m)

    beta = PeriodicProfile1.from_samples(profile.V_bar * cn, "even", n_modes)
    beta_sq_avg = float(np.mean(beta.samples ** 2))

    u_bar = PeriodicProfile1.from_samples(sn * dn / W, "odd", n_modes)
    cnp = PeriodicProfile1.from_samples(-sn * dn, "odd", n_modes)

    q = PeriodicProfile1.from_samples(sn ** 2 / dn ** 2, "even", n_modes)
    s_mean = q.average
    S_per = (q - s_mean).antiderivative()

    cm = 0.5 * (2.0 * m - 1.0)
    k_green = 2.0 * np.pi * (1.0 + cm * s_mean)
    k_closed = 2.0 * np.pi * (-1.0 + 16.0 * m - 16.0 * m * m) / (12.0 * m * (1.0 - m))
    if k_green <= 0.0:
        raise DomainError("monodromy constant came out nonpositive; "
                          "profile is outside the calibrated regime")

    w_per = ((V2 / W) * (1.0 + cm * s_mean)) * cnp
    v_per = PeriodicProfile1.from_samples(cn, "even", n_modes) + (V2 / W * cm) * (cnp * S_per)

    return GreenBasis(profile=profile, grid=grid, n_modes=n_modes, xi=xi,
                      beta=beta, beta_sq_avg=beta_sq_avg, u_bar=u_bar,
                      v_per=v_per, w_per=w_per,
                      k_green=k_green, k_closed=k_closed)


# --------------------------------------------------------------------------
# the Green operator


def _as_even_profile(h, basis: GreenBasis) -> PeriodicProfile1:
    if isinstance(h, PeriodicProfile1):
        if h.parity != "even":
            raise UsageError("the Green operator acts on even profiles")
        if h.grid != basis.grid:
            raise UsageError("profile grid does not match the basis grid")
        return h
    h = np.asarray(h, dtype=float)
    if h.ndim == 0:
        return PeriodicProfile1.from_samples(np.full(basis.grid, float(h)),
                                             "even", basis.n_modes)
    return PeriodicProfile1.from_samples(h, "even", basis.n_modes)


def green_L(h, basis: GreenBasis) -> PeriodicProfile1:
    """Apply the Green operator: the unique even periodic w with
    w'' + (3 beta^2 + 3 <beta^2>) w = h."""
    h = _as_even_profile(h, basis)
    xi = basis.xi
    V2k = basis.profile.V_bar_sq * basis.k_green

    hv = h * basis.v_per            # even
    m1 = hv.average
    per1 = (hv - m1).antiderivative()

    q = h * basis.w_per             # odd, mean zero
    Q = q.antiderivative()          # even, Q(0) = 0
    qbar = Q.average
    per2 = (Q - qbar).antiderivative()

    # int_0^xi h v_bar  and its value at 2 pi
    A = m1 * xi + per1.samples + xi * (Q.samples - qbar) - per2.samples
    A_2pi = 2.0 * np.pi * (m1 - qbar)

    B = (h * basis.u_bar).antiderivative()  # even periodic, B(0) = 0

    v_bar = basis.v_bar_samples
    w = A * basis.u_bar.samples + (A_2pi / V2k - B.samples) * v_bar
    return PeriodicProfile1.from_samples(w, "even", basis.n_modes)


def green_ode_residual(w: PeriodicProfile1, h, basis: GreenBasis) -> float:
    """Max-norm of w'' + (3 beta^2 + 3<beta^2>) w - h on the grid."""
    h = _as_even_profile(h, basis)
    b2 = basis.beta.samples ** 2
    res = (w.second_derivative().samples
           + (3.0 * b2 + 3.0 * basis.beta_sq_avg) * w.samples - h.samples)
    return float(np.max(np.abs(res)))


def wronskian_error(basis: GreenBasis, points: int = 4096) -> float:
    """Max deviation of u_bar' v_bar - u_bar v_bar' from 1 on [0, 4 pi]."""
    xi = 4.0 * np.pi * np.arange(points) / points
    up = basis.u_bar.derivative()(xi)
    w = up * basis.v_bar_at(xi) - basis.u_bar(xi) * basis.v_bar_prime_at(xi)
    return float(np.max(np.abs(w - 1.0)))


def monodromy_error(basis: GreenBasis) -> float:
    """Max deviation in v_bar(xi + 2 pi) - v_bar(xi) = -V^2 k u_bar(xi)."""
    xi = basis.xi
    lhs = basis.v_bar_at(xi + 2.0 * np.pi) - basis.v_bar_at(xi)
    rhs = -basis.profile.V_bar_sq * basis.k_green * basis.u_bar(xi)
    return float(np.max(np.abs(lhs - rhs)))


def homogeneous_residuals(basis: GreenBasis) -> dict:
    """Residuals of u_bar and v_bar in the homogeneous equation, and the
    normalization values at 0."""
    b2 = basis.beta.samples ** 2
    coef = 3.0 * b2 + 3.0 * basis.beta_sq_avg
    res_u = basis.u_bar.second_derivative().samples + coef * basis.u_bar.samples
    xi4 = 4.0 * np.pi * np.arange(basis.grid) / basis.grid
    _, cn4, sn4, dn4 = jacobi_am_cn_sn_dn(basis.profile.Omega_bar * xi4,
                                          basis.profile.m_bar)
    beta4 = basis.profile.V_bar * cn4
    coef4 = 3.0 * beta4 ** 2 + 3.0 * basis.beta_sq_avg
    res_v = basis.v_bar_pp_at(xi4) + coef4 * basis.v_bar_at(xi4)
    return {
        "u_bar_ode": float(np.max(np.abs(res_u))),
        "v_bar_ode": float(np.max(np.abs(res_v))),
        "u_bar_0": float(basis.u_bar(0.0)),
        "u_bar_prime_0": float(basis.u_bar.derivative()(0.0)),
        "v_bar_0": float(basis.v_bar_at(0.0)),
        "v_bar_prime_0": float(basis.v_bar_prime_at(0.0)),
    }


# --------------------------------------------------------------------------
# identity suite


@dataclass(frozen=True)
class Lemma3Report:
    """Constants and identity residuals of the Green-operator suite.

    identity_residuals maps "L1".."L12" to absolute residuals; interval_ok
    records the sign/interval constraints; aux_residuals holds the companion
    average identities used along the way.
    """

    m_bar: float
    k_green: float
    A0: float
    B0: float
    C0: float
    avg_L1: float
    avg_Lbeta: float
    avg_Lbeta2: float
    avg_beta2_L1: float
    avg_beta_Lbeta: float
    identity_residuals: dict
    interval_ok: dict
    aux_residuals: dict

    def max_residual(self) -> float:
        return max(self.identity_residuals.values())

    def to_dict(self) -> dict:
        return {
            "m_bar": self.m_bar,
            "k_green": self.k_green,
            "A0": self.A0,
            "B0": self.B0,
            "C0": self.C0,
            "avg_L1": self.avg_L1,
            "avg_Lbeta": self.avg_Lbeta,
            "avg_Lbeta2": self.avg_Lbeta2,
            "avg_beta2_L1": self.avg_beta2_L1,
            "avg_beta_Lbeta": self.avg_beta_Lbeta,
            "identity_residuals": dict(self.identity_residuals),
            "interval_ok": dict(self.interval_ok),
            "aux_residuals": dict(self.aux_residuals),
        }


def verify_green_identities(basis: GreenBasis) -> Lemma3Report:
    """Evaluate both sides of the twelve identities by quadrature."""
    prof = basis.profile
    m = prof.m_bar
    V = prof.V_bar
    V2 = prof.V_bar_sq
    W2 = prof.Omega_bar ** 2
    xi = basis.xi
    avg = lambda a: float(np.mean(a))

    beta = basis.beta.samples
    b2 = beta ** 2
    ab2 = basis.beta_sq_avg
    _, cn, sn, dn = jacobi_am_cn_sn_dn(prof.Omega_bar * xi, m)

    cn2 = avg(cn ** 2)
    sd = avg(sn ** 2 / dn ** 2)
    csd = avg(cn ** 2 * sn ** 2 / dn ** 2)

    L1 = green_L(1.0, basis)
    Lb = green_L(PeriodicProfile1.from_samples(beta, "even", basis.n_modes), basis)
    Lb2 = green_L(PeriodicProfile1.from_samples(b2, "even", basis.n_modes), basis)

    avg_L1 = L1.average
    avg_Lb = Lb.average
    avg_Lb2 = Lb2.average
    avg_b2_L1 = avg(b2 * L1.samples)
    avg_b_Lb = avg(beta * Lb.samples)
    avg_b2_Lb = avg(b2 * Lb.samples)
    avg_b_Lb2 = avg(beta * Lb2.samples)
    avg_b_L1 = avg(beta * L1.samples)
    avg_b2_Lb2 = avg(b2 * Lb2.samples)

    A0 = 1.0 - 3.0 * avg_b2_L1
    B0 = 1.0 - 6.0 * avg_b_Lb
    C0 = 1.0 + 6.0 * avg_b_Lb
    p = 16.0 * m * m - 16.0 * m + 1.0
    target = 4.0 / 3.0 * (1.0 - 2.0 * m) ** 2

    # exchange rule on the probe set {1, beta, beta^2}
    one = np.ones(basis.grid)
    exch = max(
        abs(avg(one * Lb.samples) - avg(beta * L1.samples)),
        abs(avg(one * Lb2.samples) - avg(b2 * L1.samples)),
        abs(avg(beta * Lb2.samples) - avg(b2 * Lb.samples)),
    )

    residuals = {
        "L1": abs(cn2 - (1.0 - 2.0 * m) / (6.0 * m)),
        "L2": abs(sd - cn2 / (1.0 - m)),
        "L3": abs(m * csd - (1.0 - 2.0 * cn2)),
        "L4": exch,
        "L5": abs(1.0 - 3.0 * avg_b2_L1 - 3.0 * ab2 * avg_L1),
        "L6": abs(avg_b2_Lb + ab2 * avg_Lb),
        "L7": abs(3.0 * avg_b2_Lb2 - ab2 * (1.0 - 3.0 * avg_Lb2)),
        "L8": max(abs(avg_b2_Lb), abs(avg_b_Lb2), abs(avg_Lb), abs(avg_b_L1)),
        "L9": abs(A0 - target),
        "L10": abs(avg_b_Lb - (1.0 / 6.0 - 1.0 / (4.0 * p))),
        "L11": abs(C0 - (2.0 - 3.0 / (2.0 * p))),
        "L12": abs(3.0 * ab2 * avg_L1 - target),
    }
    interval_ok = {
        "A0_nonzero": bool(abs(A0) > 0.1),
        "A0_not_one": bool(abs(A0 - 1.0) > 0.1),
        "B0_in_minus1_minus09": bool(-1.0 < B0 < -0.9),
        "C0_in_29_3": bool(2.9 < C0 < 3.0),
        "product_in_04_05": bool(0.4 < 3.0 * ab2 * avg_L1 < 0.5),
        "avg_Lbeta2_nonzero": bool(abs(avg_Lb2) > 0.01),
        "k_positive": bool(basis.k_green > 0.0),
    }

    avg_vbar = basis.avg_with_v_bar(1.0)
    avg_b3_vbar = basis.avg_with_v_bar(beta ** 3)
    avg_b_vbar = basis.avg_with_v_bar(
        PeriodicProfile1.from_samples(beta, "even", basis.n_modes))
    aux = {
        "k_quad_vs_closed": abs(basis.k_green - basis.k_closed),
        "avg_L1_vs_closed": abs(avg_L1 - 4.0 * (1.0 - 2.0 * m) / (3.0 * W2)),
        "avg_vbar_vs_mk_pi": abs(avg_vbar - m * basis.k_green / np.pi),
        "avg_b3_vbar_vs_V3k": abs(avg_b3_vbar - V ** 3 * basis.k_green / (4.0 * np.pi)),
        "avg_b_vbar_closed": abs(avg_b_vbar - V * (7.0 - 8.0 * m) / (12.0 * (1.0 - m))),
        "exchange_L1_beta": abs(avg_b_L1 - avg(one * Lb.samples)),
        "green_res_L1": green_ode_residual(L1, 1.0, basis),
        "green_res_Lbeta": green_ode_residual(Lb, beta, basis),
        "green_res_Lbeta2": green_ode_residual(Lb2, b2, basis),
    }

    return Lemma3Report(
        m_bar=m, k_green=basis.k_green, A0=A0, B0=B0, C0=C0,
        avg_L1=avg_L1, avg_Lbeta=avg_Lb, avg_Lbeta2=avg_Lb2,
        avg_beta2_L1=avg_b2_L1, avg_beta_Lbeta=avg_b_Lb,
        identity_residuals=residuals, interval_ok=interval_ok,
        aux_residuals=aux,
    )


# --------------------------------------------------------------------------
# the bifurcation map and its linearization


def _check_core_inputs(lambda_: float, x: PeriodicProfile1, y: PeriodicProfile1):
    if lambda_ <= 0.0:
        raise DomainError("lambda must be positive")
    for name, prof in (("x", x), ("y", y)):
        if prof.parity != "even":
            raise UsageError(f"{name} must be an even profile")
        scale = max(prof.linf(), 1.0)
        if abs(prof.average) > 1e-9 * scale:
            raise UsageError(f"{name} must have zero average")


def bifurcation_G(lambda_: float, c: float, x: PeriodicProfile1,
                  y: PeriodicProfile1):
    """The three components of the rescaled kernel system at (lambda, c, x, y):

        c^3 + 3c(<x^2> + lam <y^2>) + <x^3> + lam^(3/2) <y^3>
        x'' + 3c^2 x + 3c(x^2 - <x^2>) + x^3 - <x^3> + 3 lam <y^2> x
        y'' + 3c^2 y/lam + 3c(y^2 - <y^2>)/sqrt(lam) + y^3 - <y^3> + 3 <x^2> y/lam

    Returns (scalar, even profile, even profile)."""
    _check_core_inputs(lambda_, x, y)
    lam = float(lambda_)
    sq = np.sqrt(lam)
    xs, ys = x.samples, y.samples
    ax2, ay2 = float(np.mean(xs ** 2)), float(np.mean(ys ** 2))
    ax3, ay3 = float(np.mean(xs ** 3)), float(np.mean(ys ** 3))

    gc = c ** 3 + 3.0 * c * (ax2 + lam * ay2) + ax3 + lam * sq * ay3
    g1 = (x.second_derivative().samples + 3.0 * c * c * xs
          + 3.0 * c * (xs ** 2 - ax2) + xs ** 3 - ax3 + 3.0 * lam * ay2 * xs)
    g2 = (y.second_derivative().samples + 3.0 * c * c * ys / lam
          + 3.0 * c * (ys ** 2 - ay2) / sq + ys ** 3 - ay3 + 3.0 * ax2 * ys / lam)
    n = max(x.n_modes, y.n_modes)
    # outputs are even by construction; near the solution they are residual-
    # sized, so a relative parity check against their own max is meaningless
    return (gc,
            PeriodicProfile1.from_samples(g1, "even", min(3 * n, x.grid // 2 - 1),
                                          check_parity=False),
            PeriodicProfile1.from_samples(g2, "even", min(3 * n, y.grid // 2 - 1),
                                          check_parity=False))


def _cos_coeffs(samples: np.ndarray, modes: int) -> np.ndarray:
    G = len(samples)
    F = np.fft.rfft(samples)
    return 2.0 * F[1:modes + 1].real / G


def dZG_matrix(lambda_: float, c: float, x: PeriodicProfile1,
               y: PeriodicProfile1, modes: int) -> np.ndarray:
    """Galerkin matrix of the kernel-system linearization in the basis
    {1} + {cos j phi_1} + {cos j phi_2}, j = 1..modes.

    Assembled from the analytic directional derivative, not by finite
    differences."""
    _check_core_inputs(lambda_, x, y)
    if modes < 8:
        raise UsageError("need at least 8 modes")
    lam = float(lambda_)
    sq = np.sqrt(lam)
    G = x.grid
    if y.grid != G:
        raise UsageError("x and y must share a grid")
    t = 2.0 * np.pi * np.arange(G) / G
    xs, ys = x.samples, y.samples
    ax2, ay2 = float(np.mean(xs ** 2)), float(np.mean(ys ** 2))

    dim = 1 + 2 * modes
    A = np.zeros((dim, dim))

    # eta column (derivative in c)
    A[0, 0] = 3.0 * c * c + 3.0 * (ax2 + lam * ay2)
    A[1:modes + 1, 0] = _cos_coeffs(6.0 * c * xs + 3.0 * (xs ** 2 - ax2), modes)
    A[modes + 1:, 0] = _cos_coeffs(6.0 * c * ys / lam + 3.0 * (ys ** 2 - ay2) / sq, modes)

    for j in range(1, modes + 1):
        e = np.cos(j * t)
        axe = float(np.mean(xs * e))
        ax2e = float(np.mean(xs ** 2 * e))
        aye = float(np.mean(ys * e))
        ay2e = float(np.mean(ys ** 2 * e))

        # x-direction column
        col1 = (3.0 * c * c * e + 6.0 * c * (xs * e - axe)
                + 3.0 * xs ** 2 * e - 3.0 * ax2e + 3.0 * lam * ay2 * e)
        c1 = _cos_coeffs(col1, modes)
        c1[j - 1] += -float(j * j)
        A[0, j] = 6.0 * c * axe + 3.0 * ax2e
        A[1:modes + 1, j] = c1
        A[modes + 1:, j] = _cos_coeffs(6.0 * axe * ys / lam, modes)

        # y-direction column
        col2 = (3.0 * c * c * e / lam + 6.0 * c * (ys * e - aye) / sq
                + 3.0 * ys ** 2 * e - 3.0 * ay2e + 3.0 * ax2 * e / lam)
        c2 = _cos_coeffs(col2, modes)
        c2[j - 1] += -float(j * j)
        A[0, modes + j] = 6.0 * c * lam * aye + 3.0 * lam * sq * ay2e
        A[1:modes + 1, modes + j] = _cos_coeffs(6.0 * lam * aye * xs, modes)
        A[modes + 1:, modes + j] = c2
    return A


def kernel_triviality_report(basis: GreenBasis, n_random: int = 20,
                             seed: int = 7) -> dict:
    """Numerical replay of the injectivity argument for the linearization at
    (1, 0, beta, beta).

    The difference rho = h - k solves rho = 3<b^2 rho> L[1] + 6<b rho> L[b],
    so (A0, B0) on the diagonal of a 2x2 system force <b^2 rho> = <b rho> = 0
    and rho = 0; the symmetric part then dies on C0 and on
    <b^2> - 3<b^2 L[b^2]> = 3<b^2><L[b^2]> != 0."""
    beta = basis.beta.samples
    b2 = beta ** 2
    ab2 = basis.beta_sq_avg
    avg = lambda a: float(np.mean(a))

    L1 = green_L(1.0, basis)
    Lb = green_L(PeriodicProfile1.from_samples(beta, "even", basis.n_modes), basis)
    Lb2 = green_L(PeriodicProfile1.from_samples(b2, "even", basis.n_modes), basis)

    A0 = 1.0 - 3.0 * avg(b2 * L1.samples)
    B0 = 1.0 - 6.0 * avg(beta * Lb.samples)
    C0 = 1.0 + 6.0 * avg(beta * Lb.samples)

    # rho in span{L[1], L[beta]}: the 2x2 system [[A0, -3<b^2 L[b]>],
    # [-6<b L[1]>, B0]] must be invertible for rho = 0 to follow.
    two_by_two = np.array([
        [A0, -3.0 * avg(b2 * Lb.samples)],
        [-6.0 * avg(beta * L1.samples), B0],
    ])
    det = float(np.linalg.det(two_by_two))

    m3 = ab2 - 3.0 * avg(b2 * Lb2.samples)
    m3_identity = abs(m3 - 3.0 * ab2 * Lb2.average)

    rng = np.random.default_rng(seed)
    exch = 0.0
    for _ in range(n_random):
        cg = rng.normal(size=9) * np.exp(-0.8 * np.arange(9))
        ch = rng.normal(size=9) * np.exp(-0.8 * np.arange(9))
        g = PeriodicProfile1.from_coeffs("even", cg, grid=basis.grid)
        h = PeriodicProfile1.from_coeffs("even", ch, grid=basis.grid)
        r = abs(avg(g.samples * green_L(h, basis).samples)
                - avg(h.samples * green_L(g, basis).samples))
        exch = max(exch, r)

    return {
        "A0": A0,
        "B0": B0,
        "C0": C0,
        "det_2x2": det,
        "det_2x2_vs_A0_B0": abs(det - A0 * B0),
        "vanishing": {
            "avg_b2_Lb": abs(avg(b2 * Lb.samples)),
            "avg_b_Lb2": abs(avg(beta * Lb2.samples)),
            "avg_Lb": abs(Lb.average),
            "avg_b_L1": abs(avg(beta * L1.samples)),
        },
        "margin_m3": abs(m3),
        "m3_identity_residual": m3_identity,
        "avg_Lb2_margin": abs(Lb2.average),
        "exchange_max_residual": exch,
        "injective": bool(abs(det) > 0.1 and abs(C0) > 0.1 and abs(m3) > 0.01),
    }
