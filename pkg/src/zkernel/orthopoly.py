"""Finite orthogonal polynomial system on the quadratic half-lattice.

The lattice weight W((x+eps)^2) coincides with the level-N measure weight
w(x); with respect to it there are finitely many orthogonal polynomials
p_0, ..., p_N (monic, in the variable (x+eps)^2), expressible as
terminating Saalschutzian 4F3(1) series.  The same system arises from a
four-parameter discrete Wilson-type family by an identification of
parameters, which provides the closed-form squared norms.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from scipy.special import loggamma

from .errors import DomainError
from .specfun import pfq_value, pochhammer, reciprocal_gamma
from .zmeasure import Params, weight_w


@dataclass(frozen=True)
class LatticeWeight:
    params: Params
    n_level: int

    def __post_init__(self):
        if self.n_level < 1:
            raise DomainError("level must be positive")


def weight_W(x: int, lw: LatticeWeight) -> complex:
    """Two-sided lattice weight restricted to x >= 0.

    Restricted to the half-lattice it is the same expression as the
    measure weight, so this delegates; the identities relating it to the
    Wilson-type weight are exercised through :func:`neretin_weight`.
    """
    return weight_w(x, lw.params, lw.n_level)


# ---------------------------------------------------------------------------
# the four-parameter discrete Wilson-type family
# ---------------------------------------------------------------------------


def neretin_weight(t: int, a1, a2, a3, a4, alpha) -> complex:
    """Weight (t+alpha) / prod_i Gamma(a_i+alpha+t) Gamma(a_i-alpha-t) on
    the integers; vanishes identically where a gamma pole appears.
    Accumulated in log space to avoid intermediate overflow."""
    from .specfun import is_nonpositive_integer

    lg = 0.0 + 0.0j
    for ai in (a1, a2, a3, a4):
        for arg in (complex(ai + alpha + t), complex(ai - alpha - t)):
            if is_nonpositive_integer(arg):
                return 0.0 + 0.0j
            lg -= loggamma(arg)
    return complex(t + alpha) * cmath.exp(lg)


def kernel_parameter_identification(params: Params, n_level: int) -> tuple:
    """(a1, a2, a3, a4, alpha) for which the Wilson-type weight matches
    the lattice weight up to the factor pi^2 / (sin pi a sin pi (a+b))."""
    eps = params.epsilon
    return (
        1.0 - eps,
        params.b + 1.0 - eps,
        params.z + n_level + eps,
        params.z_prime + n_level + eps,
        eps,
    )


def wilson_neretin_Q(n: int, t, a1, a2, a3, a4, alpha) -> complex:
    """Non-monic orthogonal polynomial of degree n in (t+alpha)^2."""
    pref = (
        pochhammer(2 - a1 - a2, n) * pochhammer(2 - a1 - a3, n) * pochhammer(2 - a1 - a4, n)
    )
    s = a1 + a2 + a3 + a4
    f = pfq_value(
        (-n, n + 3 - s, 1 - a1 + t + alpha, 1 - a1 - t - alpha),
        (2 - a1 - a2, 2 - a1 - a3, 2 - a1 - a4),
        terminating_order=n,
    )
    return pref * f


def leading_coefficient(n: int, a1, a2, a3, a4) -> complex:
    """Leading coefficient k_n of Q_n as a polynomial in (t+alpha)^2."""
    return pochhammer(n + 3 - (a1 + a2 + a3 + a4), n)


def squared_norm_H(n: int, a1, a2, a3, a4, alpha) -> complex:
    """Closed-form squared norm of Q_n over the two-sided integer lattice.

    Valid whenever the defining sum converges.  The pair products run
    over the six unordered pairs i < j, and the overall sign is the one
    that matches the defining sum (equivalently, the front factor is
    -sin(2 pi alpha) = sin(pi(a_1+a_2+a_3+a_4-2)) under the lattice
    identification); both were pinned against brute-force summation.
    """
    s = a1 + a2 + a3 + a4
    sin_prod = 1.0 + 0.0j
    lg = 0.0 + 0.0j
    a = (a1, a2, a3, a4)
    for i in range(4):
        for j in range(i + 1, 4):
            sin_prod *= cmath.sin(math.pi * (a[i] + a[j]))
            lg += loggamma(complex(2 - a[i] - a[j] + n))
    front = -cmath.sin(2 * math.pi * alpha) * sin_prod / (
        2 * math.pi**6 * cmath.sin(math.pi * s)
    )
    tail = cmath.exp(loggamma(n + 1.0) + lg - loggamma(3.0 - s + n)) / (3 - s + 2 * n)
    return front * tail


def brute_norm_H(n: int, a1, a2, a3, a4, alpha, t_max: int = 400) -> complex:
    """Direct two-sided lattice sum of Q_n^2 times the weight."""
    total = 0.0 + 0.0j
    for t in range(-t_max, t_max + 1):
        w = neretin_weight(t, a1, a2, a3, a4, alpha)
        if w == 0:
            continue
        q = wilson_neretin_Q(n, t, a1, a2, a3, a4, alpha)
        total += q * q * w
    return total


# ---------------------------------------------------------------------------
# monic system with respect to the lattice weight
# ---------------------------------------------------------------------------


def monic_p(n: int, x: int, lw: LatticeWeight) -> complex:
    """Monic orthogonal polynomial p_n evaluated at the lattice point
    (x+eps)^2; exists for Re(Sigma) > 2n - 2N."""
    params, N = lw.params, lw.n_level
    if n > N:
        raise DomainError("only the first N+1 monic polynomials are available")
    sigma = params.sigma
    if sigma.real <= 2 * n - 2 * N:
        raise DomainError("existence requires Re(Sigma) > 2n - 2N")
    z, zp, a = params.z, params.z_prime, params.a
    eps = params.epsilon
    pref = (
        pochhammer(1 + a, n)
        * pochhammer(1 - z - N, n)
        * pochhammer(1 - zp - N, n)
        / pochhammer(n + 1 - 2 * N - sigma, n)
    )
    f = pfq_value(
        (-n, n + 1 - 2 * N - sigma, x + 2 * eps, -x),
        (1 + a, 1 - z - N, 1 - zp - N),
        terminating_order=n,
    )
    return pref * f


def norm_h(n: int, lw: LatticeWeight) -> complex:
    """Closed-form squared norm of p_n; finite for Re(Sigma) > 2n - 2N + 1."""
    params, N = lw.params, lw.n_level
    if n > N - 1:
        raise DomainError("norms are available for n <= N-1")
    sigma = params.sigma
    if sigma.real <= 2 * n - 2 * N + 1:
        raise DomainError("finiteness requires Re(Sigma) > 2n - 2N + 1")
    z, zp, a, b = params.z, params.z_prime, params.a, params.b
    lg = (
        loggamma(n + 1)
        + loggamma(n + a + 1)
        + loggamma(2 * N + sigma - 2 * n)
        + loggamma(2 * N + sigma - 2 * n - 1)
        - loggamma(2 * N + sigma - n)
        - loggamma(2 * N + sigma + a - n)
    )
    rec = (
        reciprocal_gamma(z + N - n)
        * reciprocal_gamma(zp + N - n)
        * reciprocal_gamma(z + b + N - n)
        * reciprocal_gamma(zp + b + N - n)
    )
    return 0.5 * cmath.exp(lg) * rec


def orthogonality_residual(m: int, n: int, lw: LatticeWeight) -> float:
    """|sum_x p_m p_n W - delta_{mn} h_n| / |h_max(m,n)| with adaptive
    lattice truncation."""
    params, N = lw.params, lw.n_level
    if max(m, n) > N - 1:
        raise DomainError("residual defined for m, n <= N-1")
    href = norm_h(max(m, n), lw)
    target = norm_h(n, lw) if m == n else 0.0
    total = 0.0 + 0.0j
    x = 0
    block = 64
    while x < 40_000:
        chunk = 0.0 + 0.0j
        for xx in range(x, x + block):
            w = weight_W(xx, lw)
            if w == 0:
                continue
            chunk += monic_p(m, xx, lw) * monic_p(n, xx, lw) * w
        total += chunk
        x += block
        if abs(chunk) < 1e-12 * max(abs(total), abs(href)) and x >= 256:
            break
        block = min(2 * block, 4096)
    return abs(total - target) / abs(href)
