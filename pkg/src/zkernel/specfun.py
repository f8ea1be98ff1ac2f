"""Complex special-function engine.

Everything downstream (weights, orthogonal polynomials, correlation
kernels) reduces to three primitives implemented here:

* products and ratios of gamma functions (``gamma_ratio``),
* generalized hypergeometric series ``pFq`` evaluated inside the closed
  unit disk (``pfq``), including slowly convergent series at argument 1
  whose terms decay only algebraically,
* two composite objects built from those series: the two-term linear
  combination ``l_function`` of 4F3(1) values and the very-well-poised
  7F6(1) series ``w76``.

Series at argument 1 with small balance (sum of bottom minus top
parameters) converge too slowly for direct summation, so ``pfq`` sums a
head of the series directly and replaces the tail by its inverse-power
expansion summed exactly with Hurwitz zeta values.  Terminating
alternating sums with heavy cancellation are re-summed in double-double
arithmetic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from scipy.special import loggamma

from .ddouble import CDD
from .errors import ConstraintError, DivergenceError, DomainError, PoleError

INTEGER_TOL = 1e-12

# ---------------------------------------------------------------------------
# elementary helpers
# ---------------------------------------------------------------------------


def _as_complex(x) -> complex:
    return complex(x)


def is_nonpositive_integer(z: complex, tol: float = INTEGER_TOL) -> bool:
    z = _as_complex(z)
    if abs(z.imag) > tol:
        return False
    r = round(z.real)
    return r <= 0 and abs(z.real - r) <= tol


def nearest_integer_distance(z: complex) -> float:
    z = _as_complex(z)
    return abs(z - round(z.real))


def pochhammer(x, k: int) -> complex:
    """Rising factorial x(x+1)...(x+k-1); k = 0 gives 1."""
    if k < 0:
        raise DomainError("pochhammer order must be nonnegative")
    x = _as_complex(x)
    out = complex(1.0)
    for j in range(k):
        out *= x + j
    return out


def reciprocal_gamma(z) -> complex:
    """1/Gamma(z), exactly 0 at nonpositive integers (within tolerance)."""
    z = _as_complex(z)
    if is_nonpositive_integer(z):
        return 0.0 + 0.0j
    return cmath.exp(-loggamma(z))


def log_gamma(z) -> complex:
    z = _as_complex(z)
    if is_nonpositive_integer(z):
        raise PoleError(f"log-gamma pole at {z}")
    return complex(loggamma(z))


@dataclass(frozen=True)
class GammaRatio:
    """Product of gamma values over a product of gamma values."""

    numerator_args: tuple
    denominator_args: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "numerator_args", tuple(self.numerator_args))
        object.__setattr__(self, "denominator_args", tuple(self.denominator_args))


def gamma_ratio(spec: GammaRatio) -> complex:
    """Evaluate Gamma[a_1,...,a_m / b_1,...,b_n] via complex log-gamma.

    Raises PoleError if any argument (numerator or denominator) sits on a
    nonpositive integer; callers that rely on pole cancellation must first
    rewrite the offending pair in Pochhammer form.
    """
    s = 0.0 + 0.0j
    for a in spec.numerator_args:
        a = _as_complex(a)
        if is_nonpositive_integer(a):
            raise PoleError(f"gamma pole in numerator at {a}")
        s += loggamma(a)
    for b in spec.denominator_args:
        b = _as_complex(b)
        if is_nonpositive_integer(b):
            raise PoleError(f"gamma pole in denominator at {b}")
        s -= loggamma(b)
    return cmath.exp(s)


def gratio(num, den=()) -> complex:
    """Convenience wrapper around :func:`gamma_ratio`."""
    return gamma_ratio(GammaRatio(tuple(num), tuple(den)))


# ---------------------------------------------------------------------------
# Bernoulli machinery and Hurwitz zeta (tail summation support)
# ---------------------------------------------------------------------------

_BERNOULLI_CACHE: list[float] = []


def _bernoulli_numbers(n: int) -> list[float]:
    # B_0..B_n with B_1 = -1/2
    global _BERNOULLI_CACHE
    if len(_BERNOULLI_CACHE) > n:
        return _BERNOULLI_CACHE
    from scipy.special import bernoulli

    _BERNOULLI_CACHE = list(bernoulli(max(n, 48)))
    return _BERNOULLI_CACHE


def _bernoulli_poly(n: int, x: complex) -> complex:
    b = _bernoulli_numbers(n)
    out = 0.0 + 0.0j
    c = 1.0  # binomial(n, k)
    xp = x**n
    # sum_k C(n,k) B_k x^(n-k)
    for k in range(n + 1):
        if b[k] != 0.0:
            out += c * b[k] * xp
        c = c * (n - k) / (k + 1)
        xp = xp / x if x != 0 else 0.0
    if x == 0:
        # B_n(0) = B_n
        return complex(b[n])
    return out


def hurwitz_zeta(s: complex, q: float) -> complex:
    """Hurwitz zeta for complex s (Re s > 1) and real q > 0, Euler-Maclaurin."""
    s = _as_complex(s)
    if s.real <= 1.0:
        raise DomainError("hurwitz_zeta needs Re s > 1")
    m = 0
    head = 0.0 + 0.0j
    while q + m < 32.0:
        head += (q + m) ** (-s)
        m += 1
    a = q + m
    out = head + a ** (1.0 - s) / (s - 1.0) + 0.5 * a ** (-s)
    b = _bernoulli_numbers(24)
    poch = s  # (s)_{2r-1} built incrementally
    apow = a ** (-s - 1.0)
    fact = 1.0
    for r in range(1, 11):
        fact *= (2 * r - 1) * (2 * r)
        out += b[2 * r] / fact * poch * apow
        poch *= (s + 2 * r - 1) * (s + 2 * r)
        apow /= a * a
    return out


# ---------------------------------------------------------------------------
# generalized hypergeometric series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KernelValue:
    """A computed value plus the largest intermediate term magnitude.

    max_term / |value| is the cancellation ratio used to decide precision
    escalation and reported in kernel grids.
    """

    value: complex
    max_term: float

    def __complex__(self):
        return self.value


@dataclass(frozen=True)
class SeriesSpec:
    """Specification of a pFq series: p+1 top and p bottom parameters."""

    top: tuple
    bottom: tuple
    argument: complex = 1.0
    terminating_order: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "top", tuple(_as_complex(t) for t in self.top))
        object.__setattr__(self, "bottom", tuple(_as_complex(b) for b in self.bottom))
        object.__setattr__(self, "argument", _as_complex(self.argument))
        if len(self.top) != len(self.bottom) + 1:
            raise ConstraintError("pFq needs p+1 top and p bottom parameters")


_ESCALATION_RATIO = 1e6
_REL_STOP = 1e-18
_MAX_TERMS = 10**6


def _detect_termination(top: tuple) -> int | None:
    orders = [
        int(round(t.real))
        for t in top
        if abs(t.imag) <= INTEGER_TOL and abs(t.real - round(t.real)) <= INTEGER_TOL and round(t.real) <= 0
    ]
    if not orders:
        return None
    return -max(orders)


def _check_bottom_poles(bottom: tuple, n_terms: int | None):
    for b in bottom:
        if abs(b.imag) <= INTEGER_TOL:
            r = round(b.real)
            if r <= 0 and abs(b.real - r) <= INTEGER_TOL:
                # (b)_k vanishes first at k = 1 - r
                if n_terms is None or (1 - r) < n_terms:
                    raise PoleError(f"bottom parameter {b} collides before termination")


def _sum_terminating_dd(top, bottom, u: complex, n: int) -> complex:
    t = CDD.from_complex(1.0 + 0.0j)
    s = CDD.from_complex(1.0 + 0.0j)
    uc = CDD.from_complex(u)
    for k in range(n):
        for a in top:
            t = t * (CDD.from_complex(a) + CDD.from_complex(complex(k)))
        for b in bottom:
            t = t / (CDD.from_complex(b) + CDD.from_complex(complex(k)))
        t = t * uc / CDD.from_complex(complex(k + 1))
        s = s + t
    return s.to_complex()


def _tail_zeta(top, bottom, t_head: complex, k_head: int, n_coeff: int = 16) -> complex:
    """Sum_{k >= k_head} t_k for a pFq(1) series via inverse-power expansion.

    t_k ~ A k^{-w} (1 + c_1/k + ...), w = 1 + sum(bottom) - sum(top); the
    c_j come from the Stirling series of the log-gamma ratios, and each
    power contributes a Hurwitz zeta value.
    """
    w = 1.0 + sum(bottom) - sum(top)
    # eta(x) = ln(t(x) x^w) - ln A = sum_n d_n x^-n
    d = [0.0 + 0.0j]
    for n in range(1, n_coeff + 1):
        acc = -_bernoulli_poly(n + 1, 1.0 + 0.0j)
        for a in top:
            acc += _bernoulli_poly(n + 1, a)
        for b in bottom:
            acc -= _bernoulli_poly(n + 1, b)
        d.append((-1.0) ** (n + 1) * acc / (n * (n + 1)))
    # c = exp-series of d
    c = [1.0 + 0.0j] + [0.0 + 0.0j] * n_coeff
    for m in range(1, n_coeff + 1):
        acc = 0.0 + 0.0j
        for i in range(1, m + 1):
            acc += i * d[i] * c[m - i]
        c[m] = acc / m
    kf = float(k_head)
    series_at_k = sum(cj * kf ** (-j) for j, cj in enumerate(c))
    if series_at_k == 0:
        raise DivergenceError("tail expansion degenerate")
    amp = t_head * kf**w / series_at_k
    tail = 0.0 + 0.0j
    for j, cj in enumerate(c):
        if cj != 0:
            tail += cj * hurwitz_zeta(w + j, kf)
    # the zeta sum starts at k_head, whose term the caller already added
    return amp * tail - t_head


def pfq(spec: SeriesSpec) -> KernelValue:
    """Evaluate a pFq series per its :class:`SeriesSpec`.

    Terminating series are summed exactly (n+1 terms), escalating to
    double-double arithmetic when the cancellation ratio exceeds 1e6.
    Inside the unit disk, partial sums run until three consecutive terms
    fall below 1e-18 of the running sum.  At argument 1 the balance
    condition Re(sum bottom - sum top) > 0 is enforced, and slowly
    convergent tails are summed by the zeta method.
    """
    top, bottom, u = spec.top, spec.bottom, spec.argument
    n = spec.terminating_order
    if n is None:
        n = _detect_termination(top)
    at_one = abs(u - 1.0) <= 1e-13

    if n is not None:
        _check_bottom_poles(bottom, n + 1)
        t = 1.0 + 0.0j
        s = 1.0 + 0.0j
        max_term = 1.0
        for k in range(n):
            num = 1.0 + 0.0j
            for a in top:
                num *= a + k
            den = 1.0 + 0.0j
            for b in bottom:
                den *= b + k
            t = t * num / den * u / (k + 1)
            s += t
            max_term = max(max_term, abs(t))
        if abs(s) > 0 and max_term / max(abs(s), 1e-300) > _ESCALATION_RATIO:
            s = _sum_terminating_dd(top, bottom, u, n)
        elif abs(s) == 0:
            s = _sum_terminating_dd(top, bottom, u, n)
        return KernelValue(s, max_term)

    _check_bottom_poles(bottom, None)
    if at_one:
        balance = sum(bottom) - sum(top)
        if balance.real <= 0:
            raise ConstraintError(
                f"pFq(1) requires Re(sum bottom - sum top) > 0, got {balance.real:.3g}"
            )
        u = 1.0 + 0.0j
    elif abs(u) >= 1.0:
        raise DomainError("pFq argument outside the closed unit disk")

    maxabs = max([abs(a) for a in top] + [abs(b) for b in bottom] + [1.0])
    head_len = min(max(64, int(20.0 * maxabs) + 1), 200_000) if at_one else _MAX_TERMS

    t = 1.0 + 0.0j
    s = 1.0 + 0.0j
    max_term = 1.0
    small_run = 0
    converged = False
    k = 0
    while k < head_len:
        num = 1.0 + 0.0j
        for a in top:
            num *= a + k
        den = 1.0 + 0.0j
        for b in bottom:
            den *= b + k
        t = t * num / den * u / (k + 1)
        s += t
        max_term = max(max_term, abs(t))
        if abs(t) < _REL_STOP * max(abs(s), 1e-300):
            small_run += 1
            if small_run >= 3:
                converged = True
                k += 1
                break
        else:
            small_run = 0
        k += 1
    if not converged:
        if not at_one:
            raise DivergenceError("pFq exceeded the iteration budget")
        # algebraic tail: t_{k_head} is the last term added (index k_head)
        s += _tail_zeta(top, bottom, t, k)
    return KernelValue(s, max_term)


def pfq_value(top, bottom, u=1.0, terminating_order: int | None = None) -> complex:
    """Shortcut returning only the value of a pFq series."""
    return pfq(SeriesSpec(tuple(top), tuple(bottom), u, terminating_order)).value


# ---------------------------------------------------------------------------
# the L-function and the very-well-poised 7F6(1)
# ---------------------------------------------------------------------------


def l_function(A, B, C, D, E, F, G) -> complex:
    """Two-term linear combination of balanced 4F3(1) series.

    Requires E + F + G - A - B - C - D = 1 and E not an integer.  When
    A = -n is a nonpositive integer the first 4F3 terminates and the
    second term vanishes through its 1/Gamma(A) prefactor.
    """
    A, B, C, D, E, F, G = map(_as_complex, (A, B, C, D, E, F, G))
    balance = E + F + G - A - B - C - D
    if abs(balance - 1.0) > 1e-10:
        raise ConstraintError(f"L-function balance is {balance}, expected 1")
    if nearest_integer_distance(E) <= INTEGER_TOL and abs(E.imag) <= INTEGER_TOL:
        raise PoleError("L-function undefined at integer E")

    term1 = 0.0 + 0.0j
    pref1 = (
        reciprocal_gamma(F)
        * reciprocal_gamma(G)
        * reciprocal_gamma(1 + A - E)
        * reciprocal_gamma(1 + B - E)
        * reciprocal_gamma(1 + C - E)
        * reciprocal_gamma(1 + D - E)
    )
    if pref1 != 0:
        f1 = pfq_value((A, B, C, D), (E, F, G))
        term1 = cmath.exp(loggamma(1 - E)) * f1 * pref1 / math.pi

    term2 = 0.0 + 0.0j
    pref2 = (
        reciprocal_gamma(1 + F - E)
        * reciprocal_gamma(1 + G - E)
        * reciprocal_gamma(A)
        * reciprocal_gamma(B)
        * reciprocal_gamma(C)
        * reciprocal_gamma(D)
    )
    if pref2 != 0:
        f2 = pfq_value((1 + A - E, 1 + B - E, 1 + C - E, 1 + D - E), (2 - E, 1 + F - E, 1 + G - E))
        term2 = cmath.exp(loggamma(E - 1)) * f2 * pref2 / math.pi
    return term1 + term2


def w76(A, C, D, E, F, G) -> complex:
    """Very-well-poised 7F6 at unit argument."""
    A, C, D, E, F, G = map(_as_complex, (A, C, D, E, F, G))
    conv = 2 + 2 * A - C - D - E - F - G
    terminating = any(is_nonpositive_integer(t) for t in (C, D, E, F, G))
    if conv.real <= 0 and not terminating:
        raise DomainError("w76 outside its convergence domain")
    for x in (C, D, E, F, G):
        gap = A - x
        if abs(gap.imag) <= INTEGER_TOL:
            r = round(gap.real)
            if r < 0 and abs(gap.real - r) <= INTEGER_TOL:
                raise DomainError("w76 pole: A minus a parameter is a negative integer")
    return pfq_value(
        (A, 1 + A / 2, C, D, E, F, G),
        (A / 2, 1 + A - C, 1 + A - D, 1 + A - E, 1 + A - F, 1 + A - G),
    )


# ---------------------------------------------------------------------------
# identity validators
# ---------------------------------------------------------------------------


def _rel_residual(lhs: complex, rhs: complex) -> float:
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1.0)


def _bailey_s(indices: tuple[int, int, int], r: list[complex], n: int) -> complex:
    """The S(a,b,c) combination of a Gamma prefactor and a terminating
    Saalschutzian 4F3(1), built from six exponents summing to zero."""
    phi = (n - 1) / 3.0

    def eps(i: int, j: int) -> complex:
        return r[i - 1] + r[j - 1] - phi

    a, b, c = indices
    comp = tuple(sorted(set(range(1, 7)) - set(indices)))
    d, e, f = comp
    pref = (
        pochhammer(1 - n - eps(e, f), n)
        * pochhammer(1 - n - eps(d, f), n)
        * pochhammer(1 - n - eps(d, e), n)
    )
    fval = pfq_value(
        (-n, eps(a, b), eps(b, c), eps(a, c)),
        (1 - n - eps(d, e), 1 - n - eps(e, f), 1 - n - eps(d, f)),
        terminating_order=n,
    )
    return (-1.0) ** n * pref * fval


def _p_top_form(x: int, N: int, z, zp, a, b) -> complex:
    """Degree-N orthogonal polynomial, parameter-heavy 4F3 form."""
    sigma = z + zp + b
    eps = (a + b + 1) / 2.0
    pref = (
        pochhammer(a + 1, N)
        * pochhammer(1 - z - N, N)
        * pochhammer(1 - zp - N, N)
        / pochhammer(1 - N - sigma, N)
    )
    f = pfq_value(
        (-N, 1 - N - sigma, x + 2 * eps, -x),
        (1 + a, 1 - z - N, 1 - zp - N),
        terminating_order=N,
    )
    return pref * f


def lattice_shifted_4f3(
    x: int,
    m: int,
    tops,
    bottoms,
    extra_log_pref: complex = 0.0,
) -> complex:
    """Regularized Gamma[x+1 / x-m+1] * 4F3(tops; bottoms, x-m+1; 1).

    ``tops`` holds four parameters (one of them -m, so the sum
    terminates); ``bottoms`` the two bottom parameters other than
    x-m+1.  The 1/Gamma(x-m+1) prefactor kills the terms whose shifted
    bottom Pochhammer would hit a pole, so for lattice coordinates
    x < m the sum effectively starts at k = m - x; the result is finite
    for every integer x >= 0.
    """
    t1, t2, t3, t4 = (_as_complex(t) for t in tops)
    b1, b2 = (_as_complex(b) for b in bottoms)
    total = 0.0 + 0.0j
    term = 1.0 + 0.0j  # (t1)_k (t2)_k (t3)_k (t4)_k / ((b1)_k (b2)_k k!)
    lg_x1 = loggamma(x + 1)
    for k in range(m + 1):
        if x - m + 1 + k > 0:
            lat = cmath.exp(lg_x1 - loggamma(x - m + 1 + k) + extra_log_pref)
            total += term * lat
        term *= (t1 + k) * (t2 + k) * (t3 + k) * (t4 + k) / ((b1 + k) * (b2 + k) * (k + 1))
    return total


def _p_lattice_form(x: int, N: int, z, zp, a, b) -> complex:
    """Degree-N orthogonal polynomial, lattice-shifted 4F3 form."""
    sigma = z + zp + b
    eps = (a + b + 1) / 2.0
    log_pref = loggamma(x + N + 2 * eps) - loggamma(x + 2 * eps)
    return lattice_shifted_4f3(
        x, N, (-N, -N - a, z, zp), (sigma, -x - N - a - b), log_pref
    )


def _p1_top_form(x: int, N: int, z, zp, a, b) -> complex:
    """Degree-(N-1) orthogonal polynomial, parameter-heavy 4F3 form."""
    sigma = z + zp + b
    eps = (a + b + 1) / 2.0
    pref = (
        pochhammer(a + 1, N - 1)
        * pochhammer(1 - z - N, N - 1)
        * pochhammer(1 - zp - N, N - 1)
        / pochhammer(-N - sigma, N - 1)
    )
    f = pfq_value(
        (-N + 1, -N - sigma, x + 2 * eps, -x),
        (1 + a, 1 - z - N, 1 - zp - N),
        terminating_order=N - 1,
    )
    return pref * f


def _p1_lattice_form(x: int, N: int, z, zp, a, b) -> complex:
    """Degree-(N-1) orthogonal polynomial, lattice-shifted 4F3 form."""
    sigma = z + zp + b
    eps = (a + b + 1) / 2.0
    log_pref = loggamma(x + N + a + b) - loggamma(x + 2 * eps)
    return lattice_shifted_4f3(
        x, N - 1, (-N + 1, -N + 1 - a, z + 1, zp + 1), (sigma + 2, 1 - x - N - a - b), log_pref
    )


IDENTITY_IDS = (
    "contiguous_4f3",
    "bailey_s456",
    "bailey_s356",
    "l_fundamental_1",
    "l_fundamental_2",
    "l_incoherent",
    "l_w76",
    "pn_forms",
    "pn1_forms",
    "trig",
)


def identity_residual(name: str, params: dict) -> float:
    """Relative residual |LHS - RHS| / max(|LHS|, |RHS|, 1) of a named
    hypergeometric or trigonometric identity at the given parameter draw."""
    if name == "contiguous_4f3":
        a1, a2, a3, a4 = (params[k] for k in ("a1", "a2", "a3", "a4"))
        b1, b2, b3 = (params[k] for k in ("b1", "b2", "b3"))
        lhs = pfq_value((a1, a2, a3, a4), (b1, b2, b3))
        rhs = pfq_value((a1, a2, a3, a4), (b1 + 1, b2, b3)) + (
            a1 * a2 * a3 * a4 / (b1 * (b1 + 1) * b2 * b3)
        ) * pfq_value((a1 + 1, a2 + 1, a3 + 1, a4 + 1), (b1 + 2, b2 + 1, b3 + 1))
        return _rel_residual(lhs, rhs)

    if name in ("bailey_s456", "bailey_s356"):
        r = [params[f"r{i}"] for i in range(1, 7)]
        n = params["n"]
        lhs = _bailey_s((1, 2, 3), r, n)
        rhs = _bailey_s((4, 5, 6) if name == "bailey_s456" else (3, 5, 6), r, n)
        return _rel_residual(lhs, rhs)

    if name in ("l_fundamental_1", "l_fundamental_2"):
        A, B, C, D, E, F, G = (params[k] for k in "ABCDEFG")
        lhs = l_function(A, B, C, D, E, F, G)
        if name == "l_fundamental_1":
            rhs = l_function(1 + A - E, A, G - C, F - C, 1 + A - C, 1 + A + B - E, 1 + A + D - E)
        else:
            rhs = l_function(A, B, G - C, G - D, 1 + A + B - F, 1 + A + B - E, G)
        return _rel_residual(lhs, rhs)

    if name == "l_incoherent":
        A, B, C, D, E, F, G = (params[k] for k in "ABCDEFG")
        sin = lambda t: cmath.sin(math.pi * t)  # noqa: E731
        t1 = (
            sin(F - G)
            * sin(G)
            * l_function(A, B, C, D, E, F, G)
            * reciprocal_gamma(1 + A - F)
            * reciprocal_gamma(1 + B - F)
            * reciprocal_gamma(1 + C - F)
            * reciprocal_gamma(1 + D - F)
            * reciprocal_gamma(E - A)
            * reciprocal_gamma(E - B)
            * reciprocal_gamma(E - C)
            * reciprocal_gamma(E - D)
        )
        sins = (
            sin(G) * sin(G - E) * sin(F - A) * sin(F - B) * sin(F - C) * sin(F - D)
            + sin(F) * sin(E - F) * sin(G - A) * sin(G - B) * sin(G - C) * sin(G - D)
        )
        t2 = sins / math.pi**4 * l_function(A, B, C, D, F, E, G)
        t3 = (
            sin(E - F)
            * sin(F - G)
            * reciprocal_gamma(A)
            * reciprocal_gamma(B)
            * reciprocal_gamma(C)
            * reciprocal_gamma(D)
            * reciprocal_gamma(G - A)
            * reciprocal_gamma(G - B)
            * reciprocal_gamma(G - C)
            * reciprocal_gamma(G - D)
            * l_function(1 - A, 1 - B, 1 - C, 1 - D, 2 - E, 2 - F, 2 - G)
        )
        total = t1 + t2 + t3
        return abs(total) / max(abs(t1), abs(t2), abs(t3), 1.0)

    if name == "l_w76":
        A, B, C, D, E, F, G = (params[k] for k in "ABCDEFG")
        lhs = l_function(A, B, C, D, E, F, G)
        w = w76(D + G - E, G - A, G - B, G - C, D, 1 + D - E)
        rhs = (
            w
            * cmath.exp(loggamma(1 + D + G - E))
            / math.pi
            * reciprocal_gamma(G)
            * reciprocal_gamma(1 + G - E)
            * reciprocal_gamma(F - D)
            * reciprocal_gamma(1 + A + D - E)
            * reciprocal_gamma(1 + B + D - E)
            * reciprocal_gamma(1 + C + D - E)
        )
        return _rel_residual(lhs, rhs)

    if name in ("pn_forms", "pn1_forms"):
        x, N = params["x"], params["N"]
        z, zp, a, b = (params[k] for k in ("z", "zp", "a", "b"))
        if name == "pn_forms":
            lhs = _p_top_form(x, N, z, zp, a, b)
            rhs = _p_lattice_form(x, N, z, zp, a, b)
        else:
            lhs = _p1_top_form(x, N, z, zp, a, b)
            rhs = _p1_lattice_form(x, N, z, zp, a, b)
        return _rel_residual(lhs, rhs)

    if name == "trig":
        a1, b1, c1, d1 = (params[k] for k in ("A1", "B1", "C1", "D1"))
        x = a1 + b1
        y = c1 + d1
        zz = a1 - b1
        w = c1 - d1
        a2, b2 = (x + w) / 2, (x - w) / 2
        c2, d2 = (y + zz) / 2, (y - zz) / 2
        sin = lambda t: cmath.sin(t)  # noqa: E731
        lhs = sin(a1) * sin(b1) * sin(c1) * sin(d1) - sin(a2) * sin(b2) * sin(c2) * sin(d2)
        rhs = sin((x + y) / 2) * sin((y - x) / 2) * sin((zz + w) / 2) * sin((w - zz) / 2)
        return _rel_residual(lhs, rhs)

    raise DomainError(f"unknown identity id {name!r}")


def draw_identity_params(name: str, rng) -> dict:
    """Draw a random admissible parameter set for :func:`identity_residual`.

    Draws keep |params| <= 5 and stay clear of poles and convergence
    boundaries; draws that would land on a skipped boundary are redrawn.
    """

    def cbox(scale=2.0):
        return complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))

    if name == "contiguous_4f3":
        return {
            "a1": -rng.integers(1, 6),
            "a2": cbox(),
            "a3": cbox(),
            "a4": cbox(),
            "b1": cbox() + 4.0,
            "b2": cbox() + 4.0,
            "b3": cbox() + 4.0,
        }
    if name in ("bailey_s456", "bailey_s356"):
        r = [cbox(1.0) for _ in range(5)]
        r.append(-sum(r))
        return {**{f"r{i+1}": ri for i, ri in enumerate(r)}, "n": int(rng.integers(1, 5))}
    if name in ("l_fundamental_1", "l_fundamental_2", "l_incoherent", "l_w76"):
        while True:
            A, B, C, D = cbox(), cbox(), cbox(), cbox()
            E, F = cbox(), cbox()
            if name == "l_w76":
                # the 7F6 conversion needs Re(F - D) > 0; keep well inside
                F = D + 1.0 + complex(rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0))
            G = 1 + A + B + C + D - E - F
            args = {"A": A, "B": B, "C": C, "D": D, "E": E, "F": F, "G": G}
            crit = [E]
            if name == "l_incoherent":
                crit.append(F)
            if name == "l_fundamental_1":
                crit.append(1 + A - C)
            if name == "l_fundamental_2":
                crit.append(1 + A + B - F)
            if name == "l_w76":
                crit.append(D + G - E)
            if all(abs(c.imag) > 0.05 or nearest_integer_distance(c) > 0.1 for c in crit):
                return args
    if name in ("pn_forms", "pn1_forms"):
        b = rng.uniform(-0.49, 1.5)
        a = b + rng.uniform(0.0, 1.5)
        re = rng.uniform(0.2, 2.0)
        im = rng.uniform(0.3, 2.0)
        N = int(rng.integers(1 if name == "pn_forms" else 2, 5))
        return {
            "z": complex(re, im),
            "zp": complex(re, -im),
            "a": a,
            "b": b,
            "N": N,
            "x": int(rng.integers(0, 3 * N + 2)),
        }
    if name == "trig":
        return {k: complex(rng.uniform(-3, 3), rng.uniform(-1, 1)) for k in ("A1", "B1", "C1", "D1")}
    raise DomainError(f"unknown identity id {name!r}")
