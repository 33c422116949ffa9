"""Badly approximable numbers, the quadratic-form eigenvalues of the
linearized wave operator, and the Cantor parameter sets on which those
eigenvalues stay away from zero.

A number x is accepted when |m + n x| > gamma/|n| for all integers
m, n != 0 (checked by direct scan up to a stated depth, plus the structural
certificate that a continued fraction [0; a_1, a_2, ...] with a_j bounded by
1/gamma - 2 from the second quotient on yields such numbers).

For the co-propagating form the eigenvalues factor as

    D(m, n) = (2 + b eps^2) (x m + n) (m + y n),
    x = eps / (2 + b eps^2),   y = b eps,

and the pair map (b, eps) <-> (x, y) is an explicit bijection.  For the
counter-propagating form

    D(m, n) = (2 + eps)(2 + a eps) (m + x n) (y m + n),
    x = a eps / (2 + eps),     y = eps / (2 + a eps),

again with a closed-form inverse.  When both x and y are accepted numbers in
(-delta, delta) the product of bracket factors exceeds gamma (1 - delta -
delta^2) by a four-case argument, and the prefactor exceeds 2/(1 + delta^2),
so |D| > gamma for delta = 1/4.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UsageError

__all__ = [
    "BadNumber",
    "DivisorParams",
    "CounterParams",
    "BadnessScan",
    "DivisorScanReport",
    "in_Btilde",
    "scan_badness",
    "cf_value",
    "cf_bad_number",
    "eigen_D_be",
    "eigen_D_ae",
    "make_params",
    "make_counter_params",
    "min_divisor_scan",
    "omega_to_be",
    "be_to_omega",
]

DEFAULT_DELTA = 0.25
DEFAULT_SCAN_DEPTH = 10_000


# --------------------------------------------------------------------------
# badly approximable numbers


@dataclass(frozen=True)
class BadnessScan:
    """Outcome of the finite scan of |m + n x| |n| over 0 < |n| <= depth."""

    ok: bool
    min_quality: float          # min over n of |n| * min_{m != 0} |m + n x|
    witness_m: int
    witness_n: int
    min_quality_with_m0: float  # diagnostic: same minimum allowing m = 0


def scan_badness(x: float, gamma: float, n_max: int) -> BadnessScan:
    """Scan the badly-approximable condition |m + n x| > gamma/|n| up to n_max.

    Only the integers m nearest to -n x matter for each n; m = 0 is excluded
    from the pass/fail criterion (the condition quantifies over m != 0) but
    the m = 0 minimum is reported as a diagnostic.
    """
    if not 0.0 < gamma < 0.25:
        raise DomainError("gamma must lie in (0, 1/4)")
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    n = np.arange(1, n_max + 1, dtype=float)
    t = -n * x
    lo = np.floor(t)
    hi = lo + 1.0
    # replace a zero candidate by the nearest nonzero integer on its side
    lo_m = np.where(lo == 0.0, -1.0, lo)
    hi_m = np.where(hi == 0.0, 1.0, hi)
    q_lo = np.abs(lo_m + n * x) * n
    q_hi = np.abs(hi_m + n * x) * n
    q = np.minimum(q_lo, q_hi)
    i = int(np.argmin(q))
    wm = lo_m[i] if q_lo[i] <= q_hi[i] else hi_m[i]
    q0 = np.minimum(np.abs(lo + n * x), np.abs(hi + n * x)) * n
    return BadnessScan(
        ok=bool(q[i] > gamma),
        min_quality=float(q[i]),
        witness_m=int(wm),
        witness_n=i + 1,
        min_quality_with_m0=float(np.min(q0)),
    )


def in_Btilde(x: float, gamma: float, n_max: int):
    """Membership test up to depth n_max; returns (bool, (m, n, quality))."""
    scan = scan_badness(x, gamma, n_max)
    return scan.ok, (scan.witness_m, scan.witness_n, scan.min_quality)


@dataclass(frozen=True)
class BadNumber:
    """A scan-certified badly approximable number.

    cf holds the generating partial quotients [0; a_1, a_2, ...] when the
    number was built from one; quotients from a_2 on must stay below
    1/gamma - 2 for the structural certificate.
    """

    value: float
    gamma: float
    cf: tuple
    scan_depth: int
    scan: BadnessScan

    def __float__(self):
        return self.value


def cf_value(quotients) -> float:
    """Value of the continued fraction [0; a_1, a_2, ...] (backward sweep)."""
    if len(quotients) == 0:
        raise UsageError("need at least one partial quotient")
    v = 0.0
    for a in reversed(quotients):
        v = 1.0 / (a + v)
    return v


def cf_bad_number(quotients, gamma: float, n_max: int = DEFAULT_SCAN_DEPTH) -> BadNumber:
    """Build a badly approximable number from bounded partial quotients.

    Requires a_j >= 1 for all j and a_j < 1/gamma - 2 for j >= 2 (the first
    quotient is free, which is what lets these numbers accumulate at zero).
    Membership is then re-verified by scan up to n_max.
    """
    quotients = tuple(int(a) for a in quotients)
    if len(quotients) < 20:
        raise UsageError("need at least 20 partial quotients")
    bound = 1.0 / gamma - 2.0
    for j, a in enumerate(quotients, start=1):
        if a < 1:
            raise UsageError(f"partial quotient a_{j}={a} must be >= 1")
        if j >= 2 and a >= bound:
            raise UsageError(
                f"partial quotient a_{j}={a} violates the bound a_j < 1/gamma - 2 = {bound}")
    x = cf_value(quotients)
    scan = scan_badness(x, gamma, n_max)
    if not scan.ok:
        raise DomainError(
            f"scan failed at (m,n)=({scan.witness_m},{scan.witness_n}): "
            f"quality {scan.min_quality} <= gamma {gamma}")
    return BadNumber(value=x, gamma=gamma, cf=quotients, scan_depth=n_max, scan=scan)


# --------------------------------------------------------------------------
# eigenvalues


def eigen_D_be(b: float, epsilon: float, m, n):
    """Quadratic-form eigenvalue for the co-propagating operator:
    eps m^2 + 2(1 + b eps^2) m n + b eps (2 + b eps^2) n^2, vectorized."""
    m = np.asarray(m, dtype=float)
    n = np.asarray(n, dtype=float)
    be2 = b * epsilon * epsilon
    out = epsilon * m * m + 2.0 * (1.0 + be2) * m * n + b * epsilon * (2.0 + be2) * n * n
    return out if out.shape else float(out)


def eigen_D_be_factored(b: float, epsilon: float, m, n):
    """Same eigenvalue through the factorization
    (2 + b eps^2)(x m + n)(m + b eps n) with x = eps/(2 + b eps^2)."""
    m = np.asarray(m, dtype=float)
    n = np.asarray(n, dtype=float)
    pre = 2.0 + b * epsilon * epsilon
    x = epsilon / pre
    out = pre * (x * m + n) * (m + b * epsilon * n)
    return out if out.shape else float(out)


def eigen_D_ae(a: float, epsilon: float, m, n):
    """Counter-propagating eigenvalue:
    eps(2+eps) m^2 + a eps (2 + a eps) n^2 + 2(2 + (a+1) eps + a eps^2) m n."""
    m = np.asarray(m, dtype=float)
    n = np.asarray(n, dtype=float)
    out = (epsilon * (2.0 + epsilon) * m * m
           + a * epsilon * (2.0 + a * epsilon) * n * n
           + 2.0 * (2.0 + (a + 1.0) * epsilon + a * epsilon * epsilon) * m * n)
    return out if out.shape else float(out)


def eigen_D_ae_factored(a: float, epsilon: float, m, n):
    """Factorized form (2+eps)(2+a eps)(m + x n)(y m + n) with
    x = a eps/(2+eps), y = eps/(2+a eps)."""
    m = np.asarray(m, dtype=float)
    n = np.asarray(n, dtype=float)
    pre = (2.0 + epsilon) * (2.0 + a * epsilon)
    x = a * epsilon / (2.0 + epsilon)
    y = epsilon / (2.0 + a * epsilon)
    out = pre * (m + x * n) * (y * m + n)
    return out if out.shape else float(out)


# --------------------------------------------------------------------------
# parameter constructions


@dataclass(frozen=True)
class DivisorParams:
    """Co-propagating parameters (b, eps) built from an accepted pair (x, y),
    x = eps/(2 + b eps^2), y = b eps."""

    b: float
    epsilon: float
    gamma: float
    x: float
    y: float
    delta: float
    scan_depth: int

    @property
    def prefactor(self) -> float:
        return 2.0 + self.b * self.epsilon * self.epsilon

    def bracket_factors(self, m, n):
        """(x m + n, m + y n): the two scalar factors of D/(2 + b eps^2)."""
        m = np.asarray(m, dtype=float)
        n = np.asarray(n, dtype=float)
        return self.x * m + n, m + self.y * n

    def divisor(self, m, n):
        return eigen_D_be(self.b, self.epsilon, m, n)

    @property
    def lambda_value(self) -> float:
        """b(2 + b eps^2): the frequency-squared ratio of the two axis modes."""
        return self.b * self.prefactor


@dataclass(frozen=True)
class CounterParams:
    """Counter-propagating parameters (a, eps) from an accepted pair (x, y),
    x = a eps/(2+eps), y = eps/(2+a eps)."""

    a: float
    epsilon: float
    gamma: float
    x: float
    y: float
    delta: float
    scan_depth: int

    @property
    def prefactor(self) -> float:
        return (2.0 + self.epsilon) * (2.0 + self.a * self.epsilon)

    def bracket_factors(self, m, n):
        m = np.asarray(m, dtype=float)
        n = np.asarray(n, dtype=float)
        return m + self.x * n, self.y * m + n

    def divisor(self, m, n):
        return eigen_D_ae(self.a, self.epsilon, m, n)

    @property
    def lambda_value(self) -> float:
        return self.a * (2.0 + self.a * self.epsilon) / (2.0 + self.epsilon)


def _pair_gamma(x, y, gamma):
    if gamma is not None:
        return float(gamma)
    if isinstance(x, BadNumber) and isinstance(y, BadNumber):
        return min(x.gamma, y.gamma)
    raise UsageError("gamma must be given explicitly when x, y are raw floats")


def make_params(x, y, delta: float = DEFAULT_DELTA, gamma: float = None) -> DivisorParams:
    """Invert the pair map: b = y(1-xy)/(2x), eps = 2x/(1-xy).

    x, y are BadNumbers (or raw floats with an explicit gamma, for probing
    failure cases).  The side condition 1/x - y irrational is carried by
    construction (x is a quadratic irrational when built from an eventually
    periodic continued fraction, and only countably many y break it); it is
    not decidable on floats and is not retested here.
    """
    xv, yv = float(x), float(y)
    if xv == 0.0:
        raise DomainError("x must be nonzero")
    if abs(xv) >= delta or abs(yv) >= delta:
        raise DomainError(f"|x|, |y| must be below delta={delta}")
    g = _pair_gamma(x, y, gamma)
    b = yv * (1.0 - xv * yv) / (2.0 * xv)
    eps = 2.0 * xv / (1.0 - xv * yv)
    depth = min(getattr(x, "scan_depth", 0), getattr(y, "scan_depth", 0))
    return DivisorParams(b=b, epsilon=eps, gamma=g, x=xv, y=yv,
                         delta=delta, scan_depth=depth)


def make_counter_params(x, y, delta: float = DEFAULT_DELTA,
                        gamma: float = None) -> CounterParams:
    """Closed-form inverse of the counter-propagating pair map:
    eps = 2y(1+x)/(1-xy), a = x(2+eps)/eps."""
    xv, yv = float(x), float(y)
    if xv == 0.0 or yv == 0.0:
        raise DomainError("x and y must be nonzero")
    if abs(xv) >= delta or abs(yv) >= delta:
        raise DomainError(f"|x|, |y| must be below delta={delta}")
    eps = 2.0 * yv * (1.0 + xv) / (1.0 - xv * yv)
    a = xv * (2.0 + eps) / eps
    g = _pair_gamma(x, y, gamma)
    depth = min(getattr(x, "scan_depth", 0), getattr(y, "scan_depth", 0))
    return CounterParams(a=a, epsilon=eps, gamma=g, x=xv, y=yv,
                         delta=delta, scan_depth=depth)


def pair_map_be(b: float, epsilon: float):
    """(x, y) = (eps/(2 + b eps^2), b eps)."""
    return epsilon / (2.0 + b * epsilon * epsilon), b * epsilon


def pair_map_ae(a: float, epsilon: float):
    """(x, y) = (a eps/(2+eps), eps/(2+a eps))."""
    return a * epsilon / (2.0 + epsilon), epsilon / (2.0 + a * epsilon)


def omega_to_be(omega1: float, omega2: float):
    """Frequencies to parameters: eps = w1 - w2, b = (w2 - 1)/(w1 - w2)^2."""
    if omega1 == omega2:
        raise DomainError("omega1 and omega2 must differ")
    eps = omega1 - omega2
    return (omega2 - 1.0) / (eps * eps), eps


def be_to_omega(b: float, epsilon: float):
    """Parameters to frequencies: (1 + eps + b eps^2, 1 + b eps^2)."""
    be2 = b * epsilon * epsilon
    return 1.0 + epsilon + be2, 1.0 + be2


# --------------------------------------------------------------------------
# divisor scans


@dataclass(frozen=True)
class DivisorScanReport:
    gamma: float
    delta: float
    n_max: int
    min_divisor: float
    witness_m: int
    witness_n: int
    prefactor: float
    min_bracket_product: float
    proposition_ok: bool       # bracket product > gamma(1 - delta - delta^2)
    prefactor_ok: bool         # |prefactor| > 2/(1 + delta^2)
    case_histogram: dict
    case_bounds_ok: bool
    passed: bool               # min |D| > gamma

    def to_dict(self, params=None) -> dict:
        out = {
            "gamma": self.gamma,
            "delta": self.delta,
            "n_max": self.n_max,
            "min_divisor": self.min_divisor,
            "witness_m": self.witness_m,
            "witness_n": self.witness_n,
            "prefactor": self.prefactor,
            "min_bracket_product": self.min_bracket_product,
            "proposition_ok": self.proposition_ok,
            "prefactor_ok": self.prefactor_ok,
            "case_histogram": dict(self.case_histogram),
            "case_bounds_ok": self.case_bounds_ok,
            "passed": self.passed,
        }
        if params is not None:
            if isinstance(params, DivisorParams):
                out["b"] = params.b
            else:
                out["a"] = params.a
            out["epsilon"] = params.epsilon
        return out


def min_divisor_scan(params, n_max: int) -> DivisorScanReport:
    """Minimize |D(m, n)| over 0 < |m|, |n| <= n_max and verify the four-case
    lower bounds on the bracket product.

    Case 1 (both factors > 1): product > 1.  Cases 2/3 (exactly one factor
    < 1): product > gamma (1 - delta - delta^2).  Case 4 (both < 1): product
    > gamma (1 - delta).
    """
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    if n_max > 4000:
        raise UsageError("grid scan beyond 4000 is not supported; "
                         "use scan_badness on the factors instead")
    gamma, delta = params.gamma, params.delta
    k = np.concatenate([np.arange(-n_max, 0), np.arange(1, n_max + 1)])
    M, Nn = np.meshgrid(k, k, indexing="ij")
    F1, F2 = params.bracket_factors(M, Nn)
    A = np.abs(F1)
    B = np.abs(F2)
    prod = A * B
    D = np.abs(params.divisor(M, Nn))

    i_flat = int(np.argmin(D))
    im, jn = np.unravel_index(i_flat, D.shape)
    bound_23 = gamma * (1.0 - delta - delta * delta)
    bound_4 = gamma * (1.0 - delta)

    c1 = (A > 1.0) & (B > 1.0)
    c2 = (A <= 1.0) & (B > 1.0)
    c3 = (A > 1.0) & (B <= 1.0)
    c4 = (A <= 1.0) & (B <= 1.0)
    hist = {"case1": int(np.sum(c1)), "case2": int(np.sum(c2)),
            "case3": int(np.sum(c3)), "case4": int(np.sum(c4))}
    ok_cases = (bool(np.all(prod[c1] > 1.0))
                and bool(np.all(prod[c2] > bound_23))
                and bool(np.all(prod[c3] > bound_23))
                and bool(np.all(prod[c4] > bound_4)))

    min_prod = float(np.min(prod))
    pre = abs(params.prefactor)
    return DivisorScanReport(
        gamma=gamma,
        delta=delta,
        n_max=n_max,
        min_divisor=float(D[im, jn]),
        witness_m=int(M[im, jn]),
        witness_n=int(Nn[im, jn]),
        prefactor=params.prefactor,
        min_bracket_product=min_prod,
        proposition_ok=bool(min_prod > bound_23),
        prefactor_ok=bool(pre > 2.0 / (1.0 + delta * delta)),
        case_histogram=hist,
        case_bounds_ok=ok_cases,
        passed=bool(D[im, jn] > gamma),
    )
