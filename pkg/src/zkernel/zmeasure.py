"""Measures on signatures and their point-configuration images.

A parameter set (z, z', a, b) with a >= b >= -1/2 induces a weight on the
nonnegative integers, a finite measure on length-N signatures built from
that weight and a squared Vandermonde in the quadratic coordinates
(x + eps)^2, and two pushforward maps into point configurations on the
quadratic half-lattice: the N-point image and the balanced image built
from Frobenius coordinates.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass

from scipy.special import loggamma

from .errors import DomainError, PoleError, SizeError
from .specfun import is_nonpositive_integer, reciprocal_gamma

INTEGER_TOL = 1e-12


# ---------------------------------------------------------------------------
# parameters and domain classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Params:
    """The four-parameter family (z, z', a, b)."""

    z: complex
    z_prime: complex
    a: float
    b: float

    def __post_init__(self):
        if not (self.a >= self.b >= -0.5):
            raise PoleError("parameters must satisfy a >= b >= -1/2")
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "z_prime", complex(self.z_prime))

    @property
    def epsilon(self) -> float:
        return (self.a + self.b + 1.0) / 2.0

    @property
    def sigma(self) -> complex:
        return self.z + self.z_prime + self.b


def classify_pair(z: complex, z_prime: complex, tol: float = INTEGER_TOL) -> str:
    """Classify (z, z') into 'principal', 'complementary', 'degenerate(n)'
    or 'outside' of the positivity set."""
    z, zp = complex(z), complex(z_prime)
    real = abs(z.imag) <= tol and abs(zp.imag) <= tol
    if not real:
        if abs(zp - z.conjugate()) <= tol and abs(z.imag) > tol:
            return "principal"
        return "outside"
    x, y = z.real, zp.real
    for u, v in ((x, y), (y, x)):
        n = round(u)
        if abs(u - n) <= tol and n >= 1 and v > n - 1 + tol:
            return f"degenerate({n})"
    if abs(x - round(x)) > tol and abs(y - round(y)) > tol and math.floor(x) == math.floor(y):
        return "complementary"
    return "outside"


def degenerate_order(classification: str) -> int | None:
    if classification.startswith("degenerate("):
        return int(classification[len("degenerate(") : -1])
    return None


def in_u(params: Params) -> bool:
    return (params.z + params.z_prime + params.b).real > -1.0


def in_u0(params: Params) -> bool:
    if not in_u(params):
        return False
    for w in (params.z, params.z_prime, params.z + params.b, params.z_prime + params.b):
        if is_nonpositive_integer(w) and abs(w) > INTEGER_TOL:
            return False
    return True


def is_admissible(params: Params) -> bool:
    """True iff Re(z+z'+b) > -1 and both (z, z') and the 2*eps-shifted
    pair classify into the positivity set."""
    if not in_u(params):
        return False
    if classify_pair(params.z, params.z_prime) == "outside":
        return False
    shift = 2.0 * params.epsilon
    return classify_pair(params.z + shift, params.z_prime + shift) != "outside"


# ---------------------------------------------------------------------------
# weight, partition function, measure
# ---------------------------------------------------------------------------


def _front_factor(x: int, eps: float) -> float:
    # (x + eps) Gamma(x + 2 eps) / Gamma(x + 1), rewritten pole-free:
    # Gamma(1 + 2 eps) * (x + eps) * (1 + 2 eps)_{x-1} / x!  for x >= 1,
    # Gamma(1 + 2 eps) / 2                                    at x = 0.
    # This removes the 0 * inf ambiguity at eps = 0, x = 0.
    g = math.gamma(1.0 + 2.0 * eps)
    if x == 0:
        return g / 2.0
    lg = loggamma(x + 2.0 * eps) - loggamma(1.0 + 2.0 * eps) - loggamma(x + 1.0)
    return g * (x + eps) * math.exp(lg.real if hasattr(lg, "real") else lg)


def weight_w(x: int, params: Params, n_level: int) -> complex:
    """Level-N lattice weight at integer x >= 0.

    Exactly zero when any of the reciprocal-gamma factors sits on a pole
    (that is how degenerate parameters truncate the support).  Computed
    in log space: the individual gamma factors overflow long before the
    weight itself leaves the double range.
    """
    if x < 0:
        raise DomainError("lattice coordinate must be nonnegative")
    z, zp, a, b = params.z, params.z_prime, params.a, params.b
    eps = params.epsilon
    lg = complex(loggamma(x + a + 1.0)) - complex(loggamma(x + b + 1.0))
    for arg in (z - x + n_level, zp - x + n_level, z + x + n_level + 2 * eps, zp + x + n_level + 2 * eps):
        if is_nonpositive_integer(arg):
            return 0.0 + 0.0j
        lg -= loggamma(arg)
    return _front_factor(x, eps) * cmath.exp(lg)


def partition_s_n(params: Params, n_level: int) -> complex:
    """Closed-form total mass of the unnormalized level-N measure.

    Carries a factor 2^-N relative to the bare product of gamma brackets;
    that normalization is the one consistent with the weight and with the
    closed-form squared norms (h_0 equals this value at N = 1), and it is
    what the brute-force lattice sum converges to.
    """
    if not in_u0(params):
        raise PoleError("partition function needs parameters in the nonvanishing domain")
    z, zp, a, b = params.z, params.z_prime, params.a, params.b
    total = complex(-n_level * math.log(2.0))
    for i in range(1, n_level + 1):
        total += (
            loggamma(b + z + zp + i)
            + loggamma(a + i)
            + loggamma(i)
            - loggamma(z + i)
            - loggamma(z + b + i)
            - loggamma(zp + i)
            - loggamma(zp + b + i)
            - loggamma(z + zp + a + b + n_level + i)
        )
    return cmath.exp(total)


# ---------------------------------------------------------------------------
# signatures
# ---------------------------------------------------------------------------


def _validate_signature(parts) -> tuple[int, ...]:
    lam = tuple(int(p) for p in parts)
    if any(p < 0 for p in lam):
        raise DomainError("signature parts must be nonnegative")
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise DomainError("signature parts must be weakly decreasing")
    return lam


def shifted_coordinates(lam) -> tuple[int, ...]:
    """l_i = lambda_i + N - i (1-based i), strictly decreasing."""
    lam = _validate_signature(lam)
    n = len(lam)
    return tuple(lam[i] + n - 1 - i for i in range(n))


def p_prime(lam, params: Params, n_level: int) -> complex:
    """Unnormalized measure: squared Vandermonde in (l_i + eps)^2 times
    the product of weights at the shifted coordinates."""
    lam = _validate_signature(lam)
    if len(lam) != n_level:
        raise DomainError("signature length must equal the level")
    ls = shifted_coordinates(lam)
    eps = params.epsilon
    lhat = [(l + eps) ** 2 for l in ls]
    van = 1.0
    for i in range(len(lhat)):
        for j in range(i + 1, len(lhat)):
            van *= lhat[i] - lhat[j]
    out = complex(van * van)
    for l in ls:
        out *= weight_w(l, params, n_level)
        if out == 0:
            return 0.0 + 0.0j
    return out


def prob(lam, params: Params, n_level: int) -> complex:
    """Normalized measure of one signature."""
    return p_prime(lam, params, n_level) / partition_s_n(params, n_level)


@dataclass(frozen=True)
class FrobeniusCoords:
    p: tuple[int, ...]
    q: tuple[int, ...]

    def __post_init__(self):
        if len(self.p) != len(self.q):
            raise DomainError("Frobenius coordinate lists must have equal length")

    @property
    def d(self) -> int:
        return len(self.p)


def conjugate_parts(lam) -> tuple[int, ...]:
    lam = _validate_signature(lam)
    if not lam or lam[0] == 0:
        return ()
    return tuple(sum(1 for p in lam if p >= i) for i in range(1, lam[0] + 1))


def frobenius(lam) -> FrobeniusCoords:
    """Arm/leg coordinates of the diagonal hooks of the diagram of lam."""
    lam = _validate_signature(lam)
    d = 0
    for i, p in enumerate(lam, start=1):
        if p >= i:
            d = i
    conj = conjugate_parts(lam)
    return FrobeniusCoords(
        p=tuple(lam[i] - (i + 1) for i in range(d)),
        q=tuple(conj[i] - (i + 1) for i in range(d)),
    )


def from_frobenius(coords: FrobeniusCoords, n_level: int) -> tuple[int, ...]:
    """Inverse of :func:`frobenius` for signatures of length n_level."""
    d = coords.d
    lam = []
    for i in range(1, n_level + 1):
        if i <= d:
            lam.append(coords.p[i - 1] + i)
        else:
            lam.append(sum(1 for j in range(d) if coords.q[j] + (j + 1) >= i))
    out = tuple(lam)
    _validate_signature(out)
    return out


# ---------------------------------------------------------------------------
# point configurations and the two pushforward maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointConfig:
    """Finite simple configuration on the quadratic half-lattice, stored
    by integer coordinates x (the point is (x + eps)^2)."""

    points: tuple[int, ...]
    epsilon: float

    def __post_init__(self):
        pts = tuple(sorted(int(x) for x in self.points))
        if any(x < 0 for x in pts):
            raise DomainError("lattice coordinates must be nonnegative")
        if len(set(pts)) != len(pts):
            raise DomainError("configurations are multiplicity free")
        object.__setattr__(self, "points", pts)

    def values(self) -> tuple[float, ...]:
        return tuple((x + self.epsilon) ** 2 for x in self.points)

    def to_json_obj(self) -> list[dict]:
        return [{"x": x, "x_hat": (x + self.epsilon) ** 2} for x in self.points]

    def __len__(self) -> int:
        return len(self.points)


def map_o(lam, params: Params) -> PointConfig:
    """N-point image {(lambda_i + N - i + eps)^2}."""
    return PointConfig(shifted_coordinates(lam), params.epsilon)


def map_l(lam, params: Params) -> PointConfig:
    """Balanced image {(N + p_i + eps)^2} u {(N - 1 - q_i + eps)^2}."""
    lam = _validate_signature(lam)
    n = len(lam)
    fr = frobenius(lam)
    pts = [n + p for p in fr.p] + [n - 1 - q for q in fr.q]
    return PointConfig(pts, params.epsilon)


def symmetric_difference(config: PointConfig, n_level: int) -> PointConfig:
    """Symmetric difference with the densely packed block {0, ..., N-1}."""
    base = set(range(n_level))
    pts = set(config.points) ^ base
    return PointConfig(tuple(pts), config.epsilon)


def is_balanced(config: PointConfig, n_level: int) -> bool:
    below = sum(1 for x in config.points if x < n_level)
    above = len(config.points) - below
    return below == above


def enumerate_degenerate(k: int, n_level: int, cap: int = 10**6):
    """All signatures with k >= lambda_1 >= ... >= lambda_N >= 0."""
    if k < 1 or n_level < 1:
        raise DomainError("k and N must be positive")
    count = math.comb(n_level + k, k)
    if count > cap:
        raise SizeError(f"enumeration of size {count} exceeds the cap {cap}")
    out = []
    # weakly decreasing tuples bounded by k == strictly decreasing shifted
    for combo in itertools.combinations_with_replacement(range(k + 1), n_level):
        out.append(tuple(sorted(combo, reverse=True)))
    out.sort(reverse=True)
    return out
