"""Complete elliptic integrals, Jacobi elliptic functions, and the calibrated
even profile beta(xi) = V * cn(Omega * xi, m).

K and E are computed by arithmetic-geometric-mean iteration, the Jacobi
functions by the descending Landen transformation (backward amplitude
recursion on the AGM sequence).  Both converge quadratically and give full
double precision; the defining integrals are kept as test oracles only.

The calibration picks the modulus m_bar solving

    psi(m) = E(m) + (8m - 7)/6 * K(m) = 0,

which makes beta'' + beta^3 + 3<beta^2> beta = 0 with <beta> = <beta^3> = 0
for beta(xi) = V_bar * cn(Omega_bar * xi, m_bar), Omega_bar = 2K(m_bar)/pi,
V_bar^2 = 2 m_bar Omega_bar^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "EllipticPair",
    "EllipticProfile",
    "complete_K",
    "complete_E",
    "jacobi_am_cn_sn_dn",
    "psi",
    "psi_prime",
    "find_m_bar",
    "beta_eval",
    "periodic_average",
]

DEFAULT_AVG_GRID = 2048


def _agm_sequence(m: float):
    """AGM iterates (a_n, b_n, c_n) for a_0=1, b_0=sqrt(1-m), c_0=sqrt(m)."""
    a, b, c = 1.0, float(np.sqrt(1.0 - m)), float(np.sqrt(m))
    seq = [(a, b, c)]
    while abs(c) > 1e-17 * a and len(seq) < 64:
        a, b, c = 0.5 * (a + b), float(np.sqrt(a * b)), 0.5 * (a - b)
        seq.append((a, b, c))
    return seq


def complete_K(m: float) -> float:
    """Complete elliptic integral of the first kind, parameter convention K(m)."""
    if not 0.0 <= m < 1.0:
        raise DomainError(f"K(m) requires 0 <= m < 1, got m={m}")
    return np.pi / (2.0 * _agm_sequence(m)[-1][0])


def complete_E(m: float) -> float:
    """Complete elliptic integral of the second kind E(m)."""
    if not 0.0 <= m <= 1.0:
        raise DomainError(f"E(m) requires 0 <= m <= 1, got m={m}")
    if m == 1.0:
        return 1.0
    seq = _agm_sequence(m)
    s = sum(2.0 ** (n - 1) * c * c for n, (_, _, c) in enumerate(seq))
    return complete_K(m) * (1.0 - s)


@dataclass(frozen=True)
class EllipticPair:
    """K, E and K' = K(1-m) for one modulus parameter m in (0, 1)."""

    m: float
    K: float
    E: float
    K_prime: float

    @classmethod
    def at(cls, m: float) -> "EllipticPair":
        if not 0.0 < m < 1.0:
            raise DomainError(f"EllipticPair needs 0 < m < 1, got m={m}")
        return cls(m=m, K=complete_K(m), E=complete_E(m), K_prime=complete_K(1.0 - m))


def jacobi_am_cn_sn_dn(xi, m: float):
    """Jacobi amplitude and cn, sn, dn at xi (scalar or array), 0 < m < 1.

    Returns (am, cn, sn, dn).  The argument is reduced modulo the period 4K
    before the Landen recursion so accuracy is uniform for large |xi|; the
    amplitude returned is the reduced-branch value plus the unwinding
    2*pi*floor(xi/4K) that makes cos(am) = cn globally.
    """
    if not 0.0 < m < 1.0:
        raise DomainError(f"Jacobi functions need 0 < m < 1, got m={m}")
    xi = np.asarray(xi, dtype=float)
    seq = _agm_sequence(m)
    K4 = 2.0 * np.pi / seq[-1][0]  # 4K(m)
    wind = np.floor(xi / K4)
    u = xi - wind * K4

    phi = (2.0 ** (len(seq) - 1)) * seq[-1][0] * u
    for n in range(len(seq) - 1, 0, -1):
        a_n, _, c_n = seq[n]
        phi = 0.5 * (phi + np.arcsin(np.clip(c_n / a_n * np.sin(phi), -1.0, 1.0)))
    sn = np.sin(phi)
    cn = np.cos(phi)
    dn = np.sqrt(1.0 - m * sn * sn)
    am = phi + 2.0 * np.pi * wind
    if am.ndim == 0:
        return float(am), float(cn), float(sn), float(dn)
    return am, cn, sn, dn


def psi(m: float) -> float:
    """E(m) + (8m - 7)/6 * K(m); the calibration root target."""
    if not 0.0 <= m <= 0.5:
        raise DomainError(f"psi(m) is used on [0, 1/2], got m={m}")
    return complete_E(m) + (8.0 * m - 7.0) / 6.0 * complete_K(m)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(96)


def psi_prime(m: float) -> float:
    """d psi/dm, differentiating the defining integrals under the sign:

        int_0^{pi/2} (8 - (13/2) sin^2 t + 3 m sin^4 t - 4 m sin^2 t)
                     / (6 (1 - m sin^2 t)^(3/2)) dt,

    smooth for m <= 1/2 and strictly positive there (the numerator is at
    least 3/2 - m at sin t = 1).
    """
    t = 0.25 * np.pi * (_GL_NODES + 1.0)
    s2 = np.sin(t) ** 2
    num = 8.0 - 6.5 * s2 + 3.0 * m * s2 * s2 - 4.0 * m * s2
    den = 6.0 * (1.0 - m * s2) ** 1.5
    return 0.25 * np.pi * float(np.dot(_GL_WEIGHTS, num / den))


@dataclass(frozen=True)
class EllipticProfile:
    """Calibrated profile data: beta(xi) = V_bar * cn(Omega_bar * xi, m_bar).

    sigma_bar = K(1-m_bar)/Omega_bar is the analyticity width of beta;
    2 m_bar Omega_bar^2 = V_bar^2 and Omega_bar = 2K(m_bar)/pi hold by
    construction.
    """

    m_bar: float
    Omega_bar: float
    V_bar: float
    sigma_bar: float
    psi_residual: float

    @property
    def V_bar_sq(self) -> float:
        return self.V_bar * self.V_bar

    def beta(self, xi):
        """beta(xi), vectorized."""
        _, cn, _, _ = jacobi_am_cn_sn_dn(self.Omega_bar * np.asarray(xi, float), self.m_bar)
        return self.V_bar * cn

    def beta_samples(self, grid: int = DEFAULT_AVG_GRID) -> np.ndarray:
        """beta on the equispaced grid 2*pi*k/grid, k = 0..grid-1."""
        return self.beta(2.0 * np.pi * np.arange(grid) / grid)

    def beta_sq_average(self, grid: int = DEFAULT_AVG_GRID) -> float:
        """<beta^2> over [0, 2*pi] by the periodic trapezoid rule."""
        return periodic_average(self.beta_samples(grid) ** 2)

    def cn_sq_average(self, grid: int = DEFAULT_AVG_GRID) -> float:
        """<cn^2(., m_bar)> over one period."""
        return self.beta_sq_average(grid) / self.V_bar_sq


def find_m_bar(tol: float = 1e-14) -> EllipticProfile:
    """Calibrate the profile: bisection for psi(m_bar) = 0 on [0, 1/2], then
    one Newton polish with the explicit psi'.

    The root is bracketed: psi(0) = -pi/12 < 0 and psi(1/2) > 0, with
    psi' > 0 throughout.
    """
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    lo, hi = 0.0, 0.5
    flo = psi(lo)
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        fm = psi(mid)
        if (flo < 0.0) == (fm < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    m = 0.5 * (lo + hi)
    m -= psi(m) / psi_prime(m)
    resid = psi(m)
    if abs(resid) >= tol:
        m -= resid / psi_prime(m)
        resid = psi(m)

    K = complete_K(m)
    Omega = 2.0 * K / np.pi
    V = np.sqrt(2.0 * m) * Omega
    sigma = complete_K(1.0 - m) / Omega
    return EllipticProfile(m_bar=m, Omega_bar=Omega, V_bar=V, sigma_bar=sigma,
                           psi_residual=resid)


def beta_eval(xi, profile: EllipticProfile):
    """Evaluate beta(xi) = V_bar * cn(Omega_bar * xi, m_bar)."""
    return profile.beta(xi)


def periodic_average(samples: np.ndarray) -> float:
    """Mean over one period of an equispaced sampling (trapezoid rule;
    spectrally accurate for smooth periodic integrands)."""
    return float(np.mean(samples))
