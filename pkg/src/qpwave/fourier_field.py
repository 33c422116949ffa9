"""Truncated weighted Fourier spaces on the 2-torus and one-variable periodic
profiles.

A field here is a real, even, doubly 2*pi-periodic function

    u(phi) = sum_{|m|,|n| <= N} c_{mn} exp(i m phi_1) exp(i n phi_2),

with real coefficients satisfying c_{mn} = c_{-m,-n}, carried together with
the weight data (sigma, s, N) of the norm

    ||u||^2 = sum |c_{mn}|^2 [1 + (m^2+n^2)^s] exp(2 sigma sqrt(m^2+n^2)).

The index set splits into the constant mode C, the two axes Q1 (m != 0,
n = 0) and Q2 (m = 0, n != 0), and the interior P (m, n != 0); the four
projections are coefficient masks and sum to the identity.

Products are convolutions computed exactly on the extended index range and
then truncated back to N.  The direct O(N^4) convolution is the correctness
oracle; an FFT fast path must match it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, UsageError

__all__ = [
    "SpaceWeights",
    "FourierField2",
    "PeriodicProfile1",
    "norm_sigma",
    "product",
    "convolution_tail_mass",
    "algebra_constant",
    "algebra_constant_upper",
    "project",
    "decompose",
    "recompose",
    "field_to_json",
    "field_from_json",
]

SUBSPACES = ("C", "Q1", "Q2", "P")
DEFAULT_PROFILE_GRID = 2048


# --------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class SpaceWeights:
    """Norm weights: analyticity width sigma > 0, exponent s > 1, cutoff N."""

    sigma: float
    s: float
    N: int

    def __post_init__(self):
        if self.sigma <= 0.0:
            raise DomainError("sigma must be positive")
        if self.s <= 1.0:
            raise DomainError("s must exceed 1 for the algebra property")
        if self.N < 1:
            raise DomainError("N must be at least 1")

    def modes(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    def weight_array(self) -> np.ndarray:
        """[1 + (m^2+n^2)^s] * exp(2 sigma sqrt(m^2+n^2)) on the index square."""
        return _weight_array(self.sigma, self.s, self.N)


_WEIGHT_CACHE: dict = {}


def _weight_array(sigma: float, s: float, N: int) -> np.ndarray:
    key = (sigma, s, N)
    w = _WEIGHT_CACHE.get(key)
    if w is None:
        k = np.arange(-N, N + 1)
        r2 = k[:, None] ** 2 + k[None, :] ** 2
        w = (1.0 + r2.astype(float) ** s) * np.exp(2.0 * sigma * np.sqrt(r2))
        w.setflags(write=False)
        _WEIGHT_CACHE[key] = w
    return w


# --------------------------------------------------------------------------
# two-variable fields


@dataclass(frozen=True)
class FourierField2:
    """Real even field on the 2-torus as a (2N+1) x (2N+1) coefficient array.

    coeffs[m + N, n + N] is the exponential coefficient c_{mn}.  The
    constructor symmetrizes to enforce c_{mn} = c_{-m,-n} exactly.
    """

    weights: SpaceWeights
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        n = 2 * self.weights.N + 1
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (n, n):
            raise UsageError(f"coefficient array must be {n}x{n}, got {c.shape}")
        c = 0.5 * (c + c[::-1, ::-1])
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, weights: SpaceWeights) -> "FourierField2":
        n = 2 * weights.N + 1
        return cls(weights, np.zeros((n, n)))

    @classmethod
    def constant(cls, weights: SpaceWeights, value: float) -> "FourierField2":
        n = 2 * weights.N + 1
        c = np.zeros((n, n))
        c[weights.N, weights.N] = value
        return cls(weights, c)

    @classmethod
    def from_modes(cls, weights: SpaceWeights, modes: dict) -> "FourierField2":
        """Build from {(m, n): value}; the mirror coefficient is set too."""
        N = weights.N
        n = 2 * N + 1
        c = np.zeros((n, n))
        for (m, k), v in modes.items():
            if abs(m) > N or abs(k) > N:
                raise UsageError(f"mode ({m},{k}) outside truncation N={N}")
            c[m + N, k + N] = v
            c[-m + N, -k + N] = v
        return cls(weights, c)

    # -- basic ops ----------------------------------------------------------

    def coeff(self, m: int, n: int) -> float:
        N = self.weights.N
        return float(self.coeffs[m + N, n + N])

    def norm(self) -> float:
        return norm_sigma(self)

    def __add__(self, other: "FourierField2") -> "FourierField2":
        _check_same_weights(self, other)
        return FourierField2(self.weights, self.coeffs + other.coeffs)

    def __sub__(self, other: "FourierField2") -> "FourierField2":
        _check_same_weights(self, other)
        return FourierField2(self.weights, self.coeffs - other.coeffs)

    def scaled(self, a: float) -> "FourierField2":
        return FourierField2(self.weights, a * self.coeffs)

    def eval(self, phi1, phi2):
        """Pointwise values; phi1, phi2 broadcastable arrays or scalars."""
        phi1, phi2 = np.broadcast_arrays(np.asarray(phi1, float),
                                         np.asarray(phi2, float))
        scalar = phi1.ndim == 0
        phi1 = np.atleast_1d(phi1)
        phi2 = np.atleast_1d(phi2)
        ms = self.weights.modes()
        e1 = np.exp(1j * np.multiply.outer(phi1, ms))
        e2 = np.exp(1j * np.multiply.outer(phi2, ms))
        vals = np.einsum("...m,mn,...n->...", e1, self.coeffs, e2).real
        return float(vals[0]) if scalar else vals


def _check_same_weights(u: FourierField2, v: FourierField2):
    if u.weights != v.weights:
        raise UsageError("fields live in different weighted spaces")


def norm_sigma(u: FourierField2) -> float:
    """Weighted l2 norm of the coefficients."""
    w = u.weights.weight_array()
    return float(np.sqrt(np.sum(u.coeffs * u.coeffs * w)))


# --------------------------------------------------------------------------
# products


def _convolve_direct(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Full linear convolution by explicit shifted accumulation."""
    n = a.shape[0]
    out = np.zeros((2 * n - 1, 2 * n - 1))
    for i in range(n):
        row = a[i]
        for j in range(n):
            if row[j] != 0.0:
                out[i:i + n, j:j + n] += row[j] * b
    return out


def _convolve_fft(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    full = 2 * n - 1
    size = 1 << (full - 1).bit_length()
    fa = np.fft.rfft2(a, s=(size, size))
    fb = np.fft.rfft2(b, s=(size, size))
    out = np.fft.irfft2(fa * fb, s=(size, size))
    return out[:full, :full]


def _convolve(a: np.ndarray, b: np.ndarray, method: str) -> np.ndarray:
    if method == "direct":
        return _convolve_direct(a, b)
    if method == "fft":
        return _convolve_fft(a, b)
    raise UsageError(f"unknown convolution method {method!r}")


def product(u: FourierField2, v: FourierField2, method: str = "direct") -> FourierField2:
    """Coefficient-wise convolution, computed exactly on the doubled index
    range and truncated back to N.  Use convolution_tail_mass to monitor the
    discarded tail."""
    _check_same_weights(u, v)
    N = u.weights.N
    full = _convolve(u.coeffs, v.coeffs, method)
    return FourierField2(u.weights, full[N:3 * N + 1, N:3 * N + 1])


def convolution_tail_mass(u: FourierField2, v: FourierField2, method: str = "fft") -> float:
    """l2 mass of the convolution coefficients discarded by truncation,
    relative to the total (0 when the product fits inside N)."""
    _check_same_weights(u, v)
    N = u.weights.N
    full = _convolve(u.coeffs, v.coeffs, method)
    total = float(np.sum(full * full))
    if total == 0.0:
        return 0.0
    kept = float(np.sum(full[N:3 * N + 1, N:3 * N + 1] ** 2))
    return float(np.sqrt(max(total - kept, 0.0) / total))


# --------------------------------------------------------------------------
# algebra constant


def _inv_weight_partial_sum(s: float, K_sum: int) -> float:
    k = np.arange(-K_sum, K_sum + 1)
    r2 = k[:, None] ** 2 + k[None, :] ** 2
    return float(np.sum(1.0 / (1.0 + r2.astype(float) ** s)))


def algebra_constant(s: float, K_sum: int) -> float:
    """Partial-sum value of c = 2^s (sum_{k in Z^2} 1/(1+|k|^{2s}))^{1/2}.

    Monotone increasing in K_sum and an underestimate of the true constant;
    pair with algebra_constant_upper for a certified bound."""
    if s <= 1.0:
        raise DomainError("algebra constant requires s > 1")
    if K_sum < 0:
        raise DomainError("K_sum must be nonnegative")
    return 2.0 ** s * np.sqrt(_inv_weight_partial_sum(s, K_sum))


def algebra_constant_upper(s: float, K_sum: int) -> float:
    """Upper bound on the algebra constant: partial sum plus the lattice tail
    bound sum_{|k|_inf > K} 1/(1+|k|^{2s}) <= 8 K^{2-2s} / (2s-2)."""
    if s <= 1.0:
        raise DomainError("algebra constant requires s > 1")
    if K_sum < 1:
        raise DomainError("the tail bound needs K_sum >= 1")
    tail = 8.0 * K_sum ** (2.0 - 2.0 * s) / (2.0 * s - 2.0)
    return 2.0 ** s * np.sqrt(_inv_weight_partial_sum(s, K_sum) + tail)


# --------------------------------------------------------------------------
# projections and decomposition


def _subspace_mask(N: int, subspace: str) -> np.ndarray:
    n = 2 * N + 1
    mask = np.zeros((n, n), dtype=bool)
    if subspace == "C":
        mask[N, N] = True
    elif subspace == "Q1":
        mask[:, N] = True
        mask[N, N] = False
    elif subspace == "Q2":
        mask[N, :] = True
        mask[N, N] = False
    elif subspace == "P":
        mask[:, :] = True
        mask[:, N] = False
        mask[N, :] = False
    else:
        raise UsageError(f"subspace must be one of {SUBSPACES}, got {subspace!r}")
    return mask


def project(u: FourierField2, subspace: str) -> FourierField2:
    """Coefficient masking onto C, Q1, Q2 or P."""
    mask = _subspace_mask(u.weights.N, subspace)
    return FourierField2(u.weights, np.where(mask, u.coeffs, 0.0))


def decompose(u: FourierField2, grid: int = DEFAULT_PROFILE_GRID):
    """Split u = u00 + r(phi1) + s(phi2) + p losslessly.

    r and s come back as even one-variable profiles with zero average; p is
    the interior field."""
    N = u.weights.N
    u00 = u.coeff(0, 0)
    r_cos = np.zeros(N + 1)
    s_cos = np.zeros(N + 1)
    for j in range(1, N + 1):
        r_cos[j] = 2.0 * u.coeff(j, 0)
        s_cos[j] = 2.0 * u.coeff(0, j)
    r = PeriodicProfile1.from_coeffs("even", r_cos, grid=grid)
    s = PeriodicProfile1.from_coeffs("even", s_cos, grid=grid)
    return u00, r, s, project(u, "P")


def recompose(u00: float, r: "PeriodicProfile1", s: "PeriodicProfile1",
              p: FourierField2) -> FourierField2:
    """Inverse of decompose; r, s must be even and fit inside the truncation."""
    N = p.weights.N
    for prof, name in ((r, "r"), (s, "s")):
        if prof.parity != "even":
            raise UsageError(f"{name} must be an even profile")
        if prof.n_modes > N and np.any(prof.coeffs[N + 1:] != 0.0):
            raise UsageError(f"{name} has modes beyond the truncation N={N}")
    c = np.array(p.coeffs)
    c[N, N] += u00
    for j in range(1, min(r.n_modes, N) + 1):
        c[N + j, N] += 0.5 * r.coeffs[j]
        c[N - j, N] += 0.5 * r.coeffs[j]
    for j in range(1, min(s.n_modes, N) + 1):
        c[N, N + j] += 0.5 * s.coeffs[j]
        c[N, N - j] += 0.5 * s.coeffs[j]
    return FourierField2(p.weights, c)


# --------------------------------------------------------------------------
# one-variable profiles


@dataclass(frozen=True)
class PeriodicProfile1:
    """Even or odd 2*pi-periodic function of one variable.

    Stored both as cosine/sine coefficients up to n_modes and as samples on
    the equispaced grid 2*pi*k/grid; the two representations agree under the
    discrete transform.  Even profiles are sum a_j cos(j xi) (a_0 = mean),
    odd ones sum b_j sin(j xi) with the j = 0 slot fixed at zero.
    """

    parity: str
    coeffs: np.ndarray = field(repr=False)
    grid: int = DEFAULT_PROFILE_GRID
    samples: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.parity not in ("even", "odd"):
            raise UsageError("parity must be 'even' or 'odd'")
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 1:
            raise UsageError("coeffs must be one-dimensional")
        if len(c) > self.grid // 2:
            raise UsageError("more modes than the grid can carry")
        if self.parity == "odd" and c[0] != 0.0:
            raise UsageError("odd profiles have no constant term")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        if self.samples is None:
            object.__setattr__(self, "samples", self._synthesize())
        else:
            s = np.asarray(self.samples, dtype=float)
            s.setflags(write=False)
            object.__setattr__(self, "samples", s)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_coeffs(cls, parity: str, coeffs, grid: int = DEFAULT_PROFILE_GRID):
        return cls(parity=parity, coeffs=np.asarray(coeffs, float), grid=grid)

    @classmethod
    def from_samples(cls, samples, parity: str, n_modes: int,
                     check_parity: bool = True):
        """Transform grid samples to coefficients (rfft).  Raises if the
        samples do not have the claimed parity."""
        samples = np.asarray(samples, dtype=float)
        grid = len(samples)
        if n_modes > grid // 2 - 1:
            raise UsageError("n_modes too large for this grid")
        if check_parity:
            mirror = np.roll(samples[::-1], 1)  # f(-xi) on the same grid
            ref = np.max(np.abs(samples)) + 1e-30
            if parity == "even" and np.max(np.abs(mirror - samples)) > 1e-8 * ref:
                raise UsageError("samples are not even")
            if parity == "odd" and np.max(np.abs(mirror + samples)) > 1e-8 * ref:
                raise UsageError("samples are not odd")
        F = np.fft.rfft(samples)
        c = np.zeros(n_modes + 1)
        if parity == "even":
            c[0] = F[0].real / grid
            c[1:] = 2.0 * F[1:n_modes + 1].real / grid
        else:
            c[1:] = -2.0 * F[1:n_modes + 1].imag / grid
        return cls(parity=parity, coeffs=c, grid=grid, samples=samples)

    @classmethod
    def from_function(cls, fn, parity: str, n_modes: int,
                      grid: int = DEFAULT_PROFILE_GRID):
        xi = 2.0 * np.pi * np.arange(grid) / grid
        return cls.from_samples(fn(xi), parity, n_modes)

    @classmethod
    def zero(cls, parity: str = "even", n_modes: int = 1,
             grid: int = DEFAULT_PROFILE_GRID):
        return cls(parity=parity, coeffs=np.zeros(n_modes + 1), grid=grid)

    # -- representation ----------------------------------------------------

    @property
    def n_modes(self) -> int:
        return len(self.coeffs) - 1

    def _synthesize(self) -> np.ndarray:
        F = np.zeros(self.grid // 2 + 1, dtype=complex)
        j = len(self.coeffs)
        if self.parity == "even":
            F[0] = self.coeffs[0] * self.grid
            F[1:j] = 0.5 * self.coeffs[1:] * self.grid
        else:
            F[1:j] = 0.5j * -self.coeffs[1:] * self.grid
        out = np.fft.irfft(F, n=self.grid)
        out.setflags(write=False)
        return out

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        j = np.arange(1, len(self.coeffs))
        arg = np.multiply.outer(xi, j)
        if self.parity == "even":
            vals = self.coeffs[0] + np.cos(arg) @ self.coeffs[1:]
        else:
            vals = np.sin(arg) @ self.coeffs[1:]
        return vals if vals.shape else float(vals)

    # -- calculus ----------------------------------------------------------

    @property
    def average(self) -> float:
        return float(self.coeffs[0]) if self.parity == "even" else 0.0

    def derivative(self) -> "PeriodicProfile1":
        j = np.arange(len(self.coeffs))
        c = np.zeros_like(self.coeffs)
        if self.parity == "even":
            c[1:] = -j[1:] * self.coeffs[1:]
            return PeriodicProfile1("odd", c, self.grid)
        c[1:] = j[1:] * self.coeffs[1:]
        return PeriodicProfile1("even", c, self.grid)

    def second_derivative(self) -> "PeriodicProfile1":
        j = np.arange(len(self.coeffs))
        return PeriodicProfile1(self.parity, -(j * j) * self.coeffs, self.grid)

    def antiderivative(self) -> "PeriodicProfile1":
        """The periodic antiderivative F(xi) = int_0^xi f, F(0) = 0.

        Requires zero average (odd profiles always qualify; for even ones the
        constant term must vanish), otherwise the antiderivative would not be
        periodic."""
        j = np.arange(len(self.coeffs), dtype=float)
        c = np.zeros_like(self.coeffs)
        if self.parity == "even":
            if abs(self.coeffs[0]) > 1e-13:
                raise UsageError("antiderivative needs a zero-average profile")
            c[1:] = self.coeffs[1:] / j[1:]
            return PeriodicProfile1("odd", c, self.grid)
        c[1:] = -self.coeffs[1:] / j[1:]
        c[0] = -np.sum(c[1:])  # fixes F(0) = 0
        return PeriodicProfile1("even", c, self.grid)

    # -- algebra -----------------------------------------------------------

    def _binary(self, other, op):
        if isinstance(other, PeriodicProfile1):
            if other.grid != self.grid:
                raise UsageError("profiles live on different grids")
            if op == "add":
                if other.parity != self.parity:
                    raise UsageError("cannot add profiles of opposite parity")
                n = max(self.n_modes, other.n_modes)
                a = np.zeros(n + 1)
                a[:len(self.coeffs)] += self.coeffs
                a[:len(other.coeffs)] += other.coeffs
                return PeriodicProfile1(self.parity, a, self.grid)
            # product: parity multiplies, samples multiply pointwise
            parity = "even" if self.parity == other.parity else "odd"
            n = min(self.n_modes + other.n_modes, self.grid // 2 - 1)
            return PeriodicProfile1.from_samples(
                self.samples * other.samples, parity, n, check_parity=False)
        if op == "add":
            if self.parity != "even":
                raise UsageError("can only add scalars to even profiles")
            c = np.array(self.coeffs)
            c[0] += float(other)
            return PeriodicProfile1(self.parity, c, self.grid)
        return PeriodicProfile1(self.parity, float(other) * self.coeffs, self.grid)

    def __add__(self, other):
        return self._binary(other, "add")

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, PeriodicProfile1):
            return self + other.scaled(-1.0)
        return self + (-float(other))

    def __mul__(self, other):
        return self._binary(other, "mul")

    __rmul__ = __mul__

    def scaled(self, a: float) -> "PeriodicProfile1":
        return PeriodicProfile1(self.parity, a * self.coeffs, self.grid)

    def __neg__(self):
        return self.scaled(-1.0)

    # -- norms ---------------------------------------------------------------

    def norm_h(self, sigma: float, s: float) -> float:
        """One-variable restriction of the weighted torus norm: the profile
        seen as an axis field with exponential coefficients a_j/2."""
        j = np.arange(1, len(self.coeffs))
        w = (1.0 + j.astype(float) ** (2.0 * s)) * np.exp(2.0 * sigma * j)
        tot = self.average ** 2 + 0.5 * float(np.sum(self.coeffs[1:] ** 2 * w))
        return float(np.sqrt(tot))

    def linf(self) -> float:
        return float(np.max(np.abs(self.samples)))


# --------------------------------------------------------------------------
# serialization


def field_to_json(u: FourierField2) -> dict:
    """JSON layout: weights block plus (m, n, coefficient) triples for the
    nonzero entries, in (m, n) lexicographic order."""
    N = u.weights.N
    triples = []
    for i in range(2 * N + 1):
        for j in range(2 * N + 1):
            v = u.coeffs[i, j]
            if v != 0.0:
                triples.append([i - N, j - N, float(v)])
    return {
        "weights": {"sigma": u.weights.sigma, "s": u.weights.s, "N": u.weights.N},
        "coeffs": triples,
    }


def field_from_json(data: dict) -> FourierField2:
    w = data["weights"]
    weights = SpaceWeights(sigma=float(w["sigma"]), s=float(w["s"]), N=int(w["N"]))
    n = 2 * weights.N + 1
    c = np.zeros((n, n))
    for m, k, v in data["coeffs"]:
        c[int(m) + weights.N, int(k) + weights.N] = float(v)
    return FourierField2(weights, c)


def profile_to_json(p: PeriodicProfile1) -> dict:
    return {"parity": p.parity, "grid": p.grid,
            "coeffs": [float(c) for c in p.coeffs]}


def profile_from_json(data: dict) -> PeriodicProfile1:
    return PeriodicProfile1(parity=data["parity"],
                            coeffs=np.asarray(data["coeffs"], float),
                            grid=int(data["grid"]))
