"""Closed-form correlation kernels on the quadratic half-lattice.

Two determinantal kernels are implemented:

* the N-point ensemble kernel (Christoffel-Darboux form, plus the
  analytic continuation through the modified degree-N function p~_N that
  stays finite on the singular set Sigma = 0), and
* the balanced-ensemble kernel, expressed through four meromorphic
  functions R>=, S>=, R<, S< on the shifted coordinate plane.  They solve
  a discrete Riemann-Hilbert problem: R>=, S>= are rational-hypergeometric
  and terminate, while R<, S< are given either by a pair of z <-> z'
  symmetrized convergent 4F3(1) series (stable for |zeta| up to ~2N) or by
  an L-function / very-well-poised 7F6 form (stable at large |zeta|).

All four R/S functions are invariant under zeta -> -zeta - 2 eps, have
only simple poles, and satisfy residue relations tying each function to
its partner across the level-N split; those relations are exercised by
the verification harness in :mod:`zkernel.drhp`.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

from scipy.special import loggamma

from .errors import DomainError, NearDegenerateWarning, PoleError
from .orthopoly import LatticeWeight, monic_p, norm_h
from .specfun import (
    KernelValue,
    SeriesSpec,
    is_nonpositive_integer,
    lattice_shifted_4f3,
    pfq,
    pfq_value,
    pochhammer,
)
from .zmeasure import Params, weight_w

_SIGMA_TOL = 1e-6
_ZDIFF_TOL = 1e-6
_PERTURB = 1e-5
_POLE_GUARD = 1e-8


@dataclass(frozen=True)
class DiscreteKernel:
    """Handle for one of the two lattice kernels ('O' or 'L')."""

    params: Params
    n_level: int
    kind: str = "O"

    def __post_init__(self):
        if self.kind not in ("O", "L"):
            raise DomainError("kind must be 'O' or 'L'")
        if self.n_level < 1:
            raise DomainError("level must be positive")


@dataclass(frozen=True)
class RSBundle:
    """Parameters plus the cached norm entering S>= and the L-kernel."""

    params: Params
    n_level: int

    def __post_init__(self):
        if self.params.epsilon <= 0:
            raise DomainError("the shifted-plane functions need eps > 0")

    @property
    def h_top(self) -> complex:
        return norm_h(self.n_level - 1, LatticeWeight(self.params, self.n_level))


# ---------------------------------------------------------------------------
# the two auxiliary weights of the level-N split
# ---------------------------------------------------------------------------


def _psi_geq_c(x: int, params: Params, n_level: int) -> complex:
    z, zp, a, b = params.z, params.z_prime, params.a, params.b
    eps = params.epsilon
    lg = (
        2.0 * loggamma(x + n_level + 2.0 * eps)
        - 2.0 * loggamma(x - n_level + 1.0)
        + loggamma(x + 1.0)
        + loggamma(x + a + 1.0)
        - loggamma(x + 2.0 * eps)
        - loggamma(x + b + 1.0)
    )
    lg = complex(lg)
    for arg in (z + n_level - x, z + x + n_level + 2 * eps, zp + n_level - x, zp + x + n_level + 2 * eps):
        if is_nonpositive_integer(arg):
            return 0.0 + 0.0j
        lg -= loggamma(arg)
    return (x + eps) * cmath.exp(lg)


def _psi_less_c(x: int, params: Params, n_level: int) -> complex:
    from .zmeasure import _front_factor

    z, zp, a, b = params.z, params.z_prime, params.a, params.b
    eps = params.epsilon
    # 4 (x+eps) Gamma(x+2eps)/Gamma(x+1) handled by the pole-free front
    lg = complex(
        loggamma(x + b + 1.0)
        - loggamma(x + a + 1.0)
        - 2.0 * loggamma(n_level - x + 0.0)
        - 2.0 * loggamma(x + n_level + 2.0 * eps)
    )
    for arg in (z + n_level - x, z + x + n_level + 2 * eps, zp + n_level - x, zp + x + n_level + 2 * eps):
        lg += loggamma(complex(arg))
    return 4.0 * _front_factor(x, eps) * cmath.exp(lg)


def psi_geq(x: int, params: Params, n_level: int) -> float:
    """Auxiliary weight on the upper half of the split: the lattice weight
    times the squared distances to the lower block."""
    if x < n_level:
        raise DomainError("psi_geq lives on x >= N")
    return _psi_geq_c(x, params, n_level).real


def psi_less(x: int, params: Params, n_level: int) -> float:
    """Auxiliary weight on the lower block: reciprocal of the lattice
    weight times squared distances within the block."""
    if not (0 <= x < n_level):
        raise DomainError("psi_less lives on 0 <= x < N")
    return _psi_less_c(x, params, n_level).real


def psi_tilde(y: float, params: Params, n_level: int) -> float:
    """psi(y-hat) / (2 (y+eps)) on the shifted-plane pole set, including
    the mirrored points -y0 - 2 eps where it is odd."""
    eps = params.epsilon
    y0 = round(y)
    if abs(y - y0) < 1e-9 and y0 >= 0:
        sign = 1.0
    else:
        y0 = round(-y - 2 * eps)
        if not (abs(-y0 - 2 * eps - y) < 1e-9 and y0 >= 0):
            raise DomainError(f"{y} is not a shifted-plane lattice point")
        sign = -1.0
    psi = psi_less(y0, params, n_level) if y0 < n_level else psi_geq(y0, params, n_level)
    return sign * psi / (2.0 * (y0 + eps))


# ---------------------------------------------------------------------------
# small utilities
# ---------------------------------------------------------------------------


def _near_pole(zeta: complex, n_level: int, eps: float, lower: bool) -> bool:
    # lower: pole set {0..N-1} and mirrors; else {N, N+1, ...} and mirrors
    for w in (zeta, -zeta - 2 * eps):
        if abs(w.imag) < _POLE_GUARD:
            r = round(w.real)
            if abs(w.real - r) < _POLE_GUARD:
                if lower and 0 <= r < n_level:
                    return True
                if not lower and r >= n_level:
                    return True
    return False


def _sigma_is_degenerate(params: Params) -> bool:
    s = params.sigma
    return abs(s.imag) < _SIGMA_TOL and abs(s.real - round(s.real)) < _SIGMA_TOL and round(s.real) == 0


def _zdiff_is_degenerate(params: Params) -> bool:
    d = params.z - params.z_prime
    return abs(d.imag) < _ZDIFF_TOL and abs(d.real - round(d.real)) < _ZDIFF_TOL


def _perturbed(params: Params, dz: complex) -> Params:
    return Params(params.z + dz, params.z_prime, params.a, params.b)


def _loggamma_ratio(num, den) -> complex:
    s = 0.0 + 0.0j
    for v in num:
        v = complex(v)
        if is_nonpositive_integer(v):
            raise PoleError(f"gamma pole at {v}")
        s += loggamma(v)
    for v in den:
        v = complex(v)
        if is_nonpositive_integer(v):
            raise PoleError(f"gamma pole at {v}")
        s -= loggamma(v)
    return s


# ---------------------------------------------------------------------------
# R>= and S>= : terminating forms, derivatives, gamma-prefactor forms
# ---------------------------------------------------------------------------


def r_geq(zeta: complex, bundle: RSBundle) -> complex:
    """Upper resolvent function; tends to 1 at infinity, poles in the
    lower pole set; invariant under zeta -> -zeta-2eps."""
    return _r_geq_kv(zeta, bundle).value


def _r_geq_kv(zeta: complex, bundle: RSBundle) -> KernelValue:
    params, n = bundle.params, bundle.n_level
    if _near_pole(complex(zeta), n, params.epsilon, lower=True):
        raise PoleError("zeta within guard distance of a pole")
    if _sigma_is_degenerate(params):
        warnings.warn("Sigma near 0: using symmetric perturbation", NearDegenerateWarning)
        a = _r_geq_kv(zeta, RSBundle(_perturbed(params, _PERTURB), n))
        b = _r_geq_kv(zeta, RSBundle(_perturbed(params, -_PERTURB), n))
        return KernelValue(0.5 * (a.value + b.value), max(a.max_term, b.max_term))
    z, zp, a, b = params.z, params.z_prime, params.a, params.b
    return pfq(
        SeriesSpec(
            (-n, -n - a, z, zp),
            (params.sigma, zeta - n + 1, -zeta - n - a - b),
            1.0,
            terminating_order=n,
        )
    )


def r_geq_deriv(zeta: complex, bundle: RSBundle) -> complex:
    """d/dzeta of r_geq, by termwise differentiation of the terminating
    series (exact up to rounding)."""
    params, n = bundle.params, bundle.n_level
    if _sigma_is_degenerate(params):
        a_ = r_geq_deriv(zeta, RSBundle(_perturbed(params, _PERTURB), n))
        b_ = r_geq_deriv(zeta, RSBundle(_perturbed(params, -_PERTURB), n))
        return 0.5 * (a_ + b_)
    z, zp, a, b = params.z, params.z_prime, params.a, params.b
    sig = params.sigma
    b1, b2 = zeta - n + 1, -zeta - n - a - b
    t = 1.0 + 0.0j
    s1 = 0.0 + 0.0j  # sum 1/(b1+j)
    s2 = 0.0 + 0.0j  # sum 1/(b2+j)
    out = 0.0 + 0.0j
    for k in range(n):
        s1 += 1.0 / (b1 + k)
        s2 += 1.0 / (b2 + k)
        t *= (-n + k) * (-n - a + k) * (z + k) * (zp + k) / ((sig + k) * (b1 + k) * (b2 + k) * (k + 1))
        out += t * (s2 - s1)
    return out


def _s_geq_series(zeta: complex, bundle: RSBundle) -> KernelValue:
    params, n = bundle.params, bundle.n_level
    z, zp, a, b = params.z, params.z_prime, params.a, params.b
    return pfq(
        SeriesSpec(
            (-n + 1, -n + 1 - a, z + 1, zp + 1),
            (params.sigma + 2, zeta - n + 2, 1 - zeta - n - a - b),
            1.0,
            terminating_order=n - 1,
        )
    )


def s_geq(zeta: complex, bundle: RSBundle) -> complex:
    """Upper companion function; tends to 0 at infinity."""
    return _s_geq_kv(zeta, bundle).value


def _s_geq_kv(zeta: complex, bundle: RSBundle) -> KernelValue:
    params, n = bundle.params, bundle.n_level
    if _near_pole(complex(zeta), n, params.epsilon, lower=True):
        raise PoleError("zeta within guard distance of a pole")
    f = _s_geq_series(zeta, bundle)
    eps = params.epsilon
    denom = bundle.h_top * (zeta - n + 1) * (zeta + n - 1 + 2 * eps)
    return KernelValue(f.value / denom, f.max_term)


def s_geq_deriv(zeta: complex, bundle: RSBundle) -> complex:
    params, n = bundle.params, bundle.n_level
    z, zp, a, b = params.z, params.z_prime, params.a, params.b
    sig = params.sigma
    eps = params.epsilon
    b1, b2 = zeta - n + 2, 1 - zeta - n - a - b
    t = 1.0 + 0.0j
    f = 1.0 + 0.0j
    fp = 0.0 + 0.0j
    s1 = 0.0 + 0.0j
    s2 = 0.0 + 0.0j
    for k in range(n - 1):
        s1 += 1.0 / (b1 + k)
        s2 += 1.0 / (b2 + k)
        t *= (
            (-n + 1 + k)
            * (-n + 1 - a + k)
            * (z + 1 + k)
            * (zp + 1 + k)
            / ((sig + 2 + k) * (b1 + k) * (b2 + k) * (k + 1))
        )
        f += t
        fp += t * (s2 - s1)
    q = (zeta - n + 1) * (zeta + n - 1 + 2 * eps)
    qp = 2 * zeta + 2 * eps
    return (fp * q - f * qp) / (bundle.h_top * q * q)


def r_geq_gamma_form(zeta: complex, bundle: RSBundle) -> complex:
    """Equivalent gamma-prefactor expression for r_geq (cross-check)."""
    params, n = bundle.params, bundle.n_level
    z, zp, a, b = params.z, params.z_prime, params.a, params.b
    sig = params.sigma
    eps = params.epsilon
    pref = (
        pochhammer(a + 1, n)
        * pochhammer(1 - z - n, n)
        * pochhammer(1 - zp - n, n)
        / pochhammer(1 - n - sig, n)
    )
    glog = _loggamma_ratio((zeta - n + 1, zeta + 2 * eps), (zeta + 1, zeta + n + 2 * eps))
    f = pfq_value(
        (-n, 1 - n - sig, zeta + 2 * eps, -zeta),
        (1 + a, 1 - z - n, 1 - zp - n),
        terminating_order=n,
    )
    return pref * cmath.exp(glog) * f


def s_geq_gamma_form(zeta: complex, bundle: RSBundle) -> complex:
    """Equivalent gamma-prefactor expression for s_geq (cross-check)."""
    params, n = bundle.params, bundle.n_level
    z, zp, a, b = params.z, params.z_prime, params.a, params.b
    sig = params.sigma
    eps = params.epsilon
    pref = (
        pochhammer(1 + a, n - 1)
        * pochhammer(1 - z - n, n - 1)
        * pochhammer(1 - zp - n, n - 1)
        / pochhammer(-n - sig, n - 1)
    )
    glog = _loggamma_ratio((zeta - n + 1, zeta + 2 * eps), (zeta + 1, zeta + n + 2 * eps))
    f = pfq_value(
        (-n + 1, -n - sig, zeta + 2 * eps, -zeta),
        (1 + a, 1 - z - n, 1 - zp - n),
        terminating_order=n - 1,
    )
    return pref * cmath.exp(glog) * f / bundle.h_top


# ---------------------------------------------------------------------------
# the sine ratio G
# ---------------------------------------------------------------------------


def g_factor(zeta: complex, params: Params, n_level: int) -> complex:
    """sin-product ratio; equals (-1)^(N-y+1) at integers y.  Periodic
    with period 2 in zeta."""
    z, zp = params.z, params.z_prime
    sig = params.sigma
    num = (
        cmath.sin(math.pi * z)
        * cmath.sin(math.pi * zp)
        * cmath.sin(math.pi * (zeta - sig + n_level))
    )
    dens = (
        cmath.sin(math.pi * sig),
        cmath.sin(math.pi * (zeta - z)),
        cmath.sin(math.pi * (zeta - zp)),
    )
    den = 1.0 + 0.0j
    for d in dens:
        if abs(d) < 1e-13:
            raise PoleError("sine-ratio pole")
        den *= d
    return num / den


# ---------------------------------------------------------------------------
# R< and S< : symmetrized convergent series and large-|zeta| forms
# ---------------------------------------------------------------------------


def _r_less_half(zeta: complex, z, zp, a, b, n: int) -> KernelValue:
    """One orientation of the two-term form of R<; the full function adds
    the same expression with z and z' interchanged."""
    sig = z + zp + b
    eps = (a + b + 1) / 2.0
    sinz = cmath.sin(math.pi * z)
    if sinz == 0:
        return KernelValue(0.0 + 0.0j, 0.0)
    lg = _loggamma_ratio(
        (zp - z, z + b + 1, z + 1, n + sig + a + 1, n + sig + 1, n + zeta + 2 * eps, n - zeta),
        (sig + 1, n + z + b + 1, n + z + 2 * eps, n + zeta + zp + 2 * eps, n - zeta + zp),
    )
    f = pfq(
        SeriesSpec(
            (1 + z + b, -zp, zeta + n + z + 2 * eps, n - zeta + z),
            (1 + z - zp, n + z + b + 1, n + z + 2 * eps),
            1.0,
        )
    )
    return KernelValue(-sinz / math.pi * cmath.exp(lg) * f.value, f.max_term)


def _s_less_half(zeta: complex, z, zp, a, b, n: int) -> KernelValue:
    sig = z + zp + b
    eps = (a + b + 1) / 2.0
    sinz = cmath.sin(math.pi * z)
    if sinz == 0:
        return KernelValue(0.0 + 0.0j, 0.0)
    lg = _loggamma_ratio(
        (zp - z, sig, n + a + 1, n + 1, n + zeta + 2 * eps, n - zeta),
        (zp, zp + b, n + z + b + 1, n + z + 2 * eps, n + zeta + zp + 2 * eps, n - zeta + zp),
    )
    f = pfq(
        SeriesSpec(
            (z + b, 1 - zp, zeta + n + z + 2 * eps, n - zeta + z),
            (1 + z - zp, n + z + b + 1, n + z + 2 * eps),
            1.0,
        )
    )
    return KernelValue(-sinz / (2 * math.pi) * cmath.exp(lg) * f.value, f.max_term)


def _r_less_sum_route(zeta: complex, params: Params, n: int) -> KernelValue:
    z, zp, a, b = params.z, params.z_prime, params.a, params.b
    t1 = _r_less_half(zeta, z, zp, a, b, n)
    t2 = _r_less_half(zeta, zp, z, a, b, n)
    return KernelValue(t1.value + t2.value, max(t1.max_term, t2.max_term))


def _s_less_sum_route(zeta: complex, params: Params, n: int) -> KernelValue:
    z, zp, a, b = params.z, params.z_prime, params.a, params.b
    if _sigma_is_degenerate(params):
        warnings.warn("Sigma near 0: using symmetric perturbation", NearDegenerateWarning)
        va = _s_less_sum_route(zeta, _perturbed(params, _PERTURB), n)
        vb = _s_less_sum_route(zeta, _perturbed(params, -_PERTURB), n)
        return KernelValue(0.5 * (va.value + vb.value), max(va.max_term, vb.max_term))
    t1 = _s_less_half(zeta, z, zp, a, b, n)
    t2 = _s_less_half(zeta, zp, z, a, b, n)
    return KernelValue(t1.value + t2.value, max(t1.max_term, t2.max_term))


def _r_less_drhp_route(zeta: complex, params: Params, n: int, h_top: complex) -> complex:
    """L-function / 7F6 expression of R<, stable for large |zeta|.

    Requires Re(zeta + eps) >= 0 (callers fold with the involution) and
    non-integer Sigma.
    """
    from .specfun import w76

    z, zp, a, b = params.z, params.z_prime, params.a, params.b
    sig = params.sigma
    eps = params.epsilon
    g = g_factor(zeta, params, n)
    lg1 = _loggamma_ratio(
        (zeta + a + 1, n - zeta, zeta + n + 2 * eps, zeta + 1, zeta + n + a + b),
        (
            zeta + b + 1,
            z - zeta + n,
            zp - zeta + n,
            z + zeta + n + 2 * eps,
            zp + zeta + n + 2 * eps,
            zeta + 2 * eps,
            zeta - n + 2,
        ),
    )
    f1 = pfq_value(
        (-n + 1, -n + 1 - a, 1 + z, 1 + zp),
        (zeta - n + 2, 1 - zeta - n - a - b, sig + 2),
        terminating_order=n - 1,
    )
    term1 = g / (2.0 * h_top) * cmath.exp(lg1) * f1
    lg2 = _loggamma_ratio(
        (zeta - z - zp + 1, zeta - z - n + 1, zeta - zp - n + 1, zeta + 1),
        (zeta - z - zp - n + 1, zeta - z + 1, zeta - zp + 1, zeta - n + 1),
    )
    w = w76(zeta - z - zp, n, -z, -zp, -n - sig - a, zeta + b + 1)
    term2 = cmath.exp(lg2) * w
    return term1 + term2


def _h_shifted(params: Params, n: int) -> complex:
    """Norm h_N at (z-1, z'-1, N+1): the constant in the S< shift relation."""
    shifted = Params(params.z - 1, params.z_prime - 1, params.a, params.b)
    return norm_h(n, LatticeWeight(shifted, n + 1))


def _fold(zeta: complex, eps: float) -> complex:
    zeta = complex(zeta)
    return zeta if (zeta + eps).real >= 0 else -zeta - 2 * eps


def r_less(zeta: complex, bundle: RSBundle) -> complex:
    """Lower resolvent function; tends to 1 at infinity, poles in the
    upper pole set."""
    return _r_less_kv(zeta, bundle).value


def _r_less_kv(zeta: complex, bundle: RSBundle) -> KernelValue:
    params, n = bundle.params, bundle.n_level
    eps = params.epsilon
    zeta = complex(zeta)
    if _near_pole(zeta, n, eps, lower=False):
        raise PoleError("zeta within guard distance of a pole")
    if _zdiff_is_degenerate(params):
        warnings.warn("z - z' near an integer: averaging z +- delta", NearDegenerateWarning)
        va = _r_less_kv(zeta, RSBundle(_perturbed(params, _PERTURB), n))
        vb = _r_less_kv(zeta, RSBundle(_perturbed(params, -_PERTURB), n))
        return KernelValue(0.5 * (va.value + vb.value), max(va.max_term, vb.max_term))
    if abs(zeta + eps) > 2.0 * n:
        # the large-radius form needs Re(zeta+eps) >= 0; fold through the
        # involution fixed point first
        return KernelValue(_r_less_drhp_route(_fold(zeta, eps), params, n, bundle.h_top), 0.0)
    return _r_less_sum_route(zeta, params, n)


def s_less(zeta: complex, bundle: RSBundle) -> complex:
    """Lower companion function; tends to 0 at infinity."""
    return _s_less_kv(zeta, bundle).value


def _s_less_kv(zeta: complex, bundle: RSBundle) -> KernelValue:
    params, n = bundle.params, bundle.n_level
    eps = params.epsilon
    zeta = complex(zeta)
    if _near_pole(zeta, n, eps, lower=False):
        raise PoleError("zeta within guard distance of a pole")
    if _zdiff_is_degenerate(params):
        warnings.warn("z - z' near an integer: averaging z +- delta", NearDegenerateWarning)
        va = _s_less_kv(zeta, RSBundle(_perturbed(params, _PERTURB), n))
        vb = _s_less_kv(zeta, RSBundle(_perturbed(params, -_PERTURB), n))
        return KernelValue(0.5 * (va.value + vb.value), max(va.max_term, vb.max_term))
    if abs(zeta + eps) > 2.0 * n:
        zf = _fold(zeta, eps)
        shifted = Params(params.z - 1, params.z_prime - 1, params.a, params.b)
        hs = _h_shifted(params, n)
        val = (
            hs
            * _r_less_drhp_route(zf, shifted, n + 1, hs)
            / ((zf - n) * (zf + n + 2 * eps))
        )
        return KernelValue(val, 0.0)
    return _s_less_sum_route(zeta, params, n)


def _central_diff(f, x: float, h: float) -> complex:
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


def r_less_deriv(zeta: complex, bundle: RSBundle) -> complex:
    h = 1e-4 * (1.0 + abs(zeta))
    return _central_diff(lambda t: r_less(t, bundle), complex(zeta).real, h)


def s_less_deriv(zeta: complex, bundle: RSBundle) -> complex:
    h = 1e-4 * (1.0 + abs(zeta))
    return _central_diff(lambda t: s_less(t, bundle), complex(zeta).real, h)


def residue_at(f, y: float, radius: float = 1e-5, n_angles: int = 4) -> complex:
    """Residue of f at the simple pole y by circle averaging."""
    total = 0.0 + 0.0j
    for m in range(n_angles):
        w = radius * cmath.exp(2j * math.pi * (m + 0.25) / n_angles)
        total += f(y + w) * w
    return total / n_angles


# ---------------------------------------------------------------------------
# the N-point ensemble kernel
# ---------------------------------------------------------------------------


def p_n_tilde(x: int, kernel: DiscreteKernel) -> complex:
    """Modified degree-N polynomial entering the analytic continuation of
    the N-point kernel; finite on Sigma = 0."""
    params, n = kernel.params, kernel.n_level
    z, zp, a, b = params.z, params.z_prime, params.a, params.b
    eps = params.epsilon
    log_pref = loggamma(x + n + 2.0 * eps) - loggamma(x + 2.0 * eps)
    return lattice_shifted_4f3(
        x, n, (-n, -n - a, z, zp), (params.sigma + 1, -x - n - a - b), complex(log_pref)
    )


def _sqrt_weight(x: int, params: Params, n: int) -> float:
    w = weight_w(x, params, n).real
    return math.sqrt(max(w, 0.0))


def kernel_O(x: int, y: int, kernel: DiscreteKernel) -> float:
    """N-point ensemble kernel; symmetric and real for admissible
    parameters."""
    return kernel_O_kv(x, y, kernel).value.real


def kernel_O_kv(x: int, y: int, kernel: DiscreteKernel) -> KernelValue:
    if kernel.kind != "O":
        raise DomainError("kernel handle is not of the N-point kind")
    params, n = kernel.params, kernel.n_level
    lw = LatticeWeight(params, n)
    eps = params.epsilon
    sw = _sqrt_weight(x, params, n) * _sqrt_weight(y, params, n)
    if sw == 0.0:
        return KernelValue(0.0 + 0.0j, 0.0)
    if x == y:
        total = 0.0 + 0.0j
        for m in range(n):
            pm = monic_p(m, x, lw)
            total += pm * pm / norm_h(m, lw)
        return KernelValue(sw * total, abs(total))
    h_top = norm_h(n - 1, lw)
    pt_x, pt_y = p_n_tilde(x, kernel), p_n_tilde(y, kernel)
    p1_x, p1_y = monic_p(n - 1, x, lw), monic_p(n - 1, y, lw)
    xhat, yhat = (x + eps) ** 2, (y + eps) ** 2
    num = pt_x * p1_y - p1_x * pt_y
    mx = max(abs(pt_x * p1_y), abs(p1_x * pt_y))
    return KernelValue(sw / h_top * num / (xhat - yhat), mx)


def kernel_O_pn_form(x: int, y: int, kernel: DiscreteKernel) -> float:
    """Christoffel-Darboux two-point form with the plain degree-N
    polynomial (needs Sigma != 0); used to cross-check the p~ form."""
    params, n = kernel.params, kernel.n_level
    lw = LatticeWeight(params, n)
    eps = params.epsilon
    sw = _sqrt_weight(x, params, n) * _sqrt_weight(y, params, n)
    if sw == 0.0 or x == y:
        return kernel_O(x, y, kernel)
    h_top = norm_h(n - 1, lw)
    num = monic_p(n, x, lw) * monic_p(n - 1, y, lw) - monic_p(n - 1, x, lw) * monic_p(n, y, lw)
    return (sw / h_top * num / ((x + eps) ** 2 - (y + eps) ** 2)).real


def kernel_O_cd_sum(x: int, y: int, kernel: DiscreteKernel) -> float:
    """Normalized Christoffel-Darboux sum over the first N polynomials."""
    params, n = kernel.params, kernel.n_level
    lw = LatticeWeight(params, n)
    sw = _sqrt_weight(x, params, n) * _sqrt_weight(y, params, n)
    if sw == 0.0:
        return 0.0
    total = 0.0 + 0.0j
    for m in range(n):
        total += monic_p(m, x, lw) * monic_p(m, y, lw) / norm_h(m, lw)
    return (sw * total).real


# ---------------------------------------------------------------------------
# the balanced-ensemble kernel
# ---------------------------------------------------------------------------


def kernel_L(x: int, y: int, kernel: DiscreteKernel) -> float:
    """Balanced-ensemble kernel via the four shifted-plane functions."""
    return kernel_L_kv(x, y, kernel).value.real


def kernel_L_kv(x: int, y: int, kernel: DiscreteKernel) -> KernelValue:
    if kernel.kind != "L":
        raise DomainError("kernel handle is not of the balanced kind")
    params, n = kernel.params, kernel.n_level
    eps = params.epsilon
    bundle = RSBundle(params, n)
    xhat, yhat = (x + eps) ** 2, (y + eps) ** 2

    def up(t):
        return psi_geq(t, params, n)

    def lo(t):
        return psi_less(t, params, n)

    if x == y:
        if x >= n:
            if up(x) == 0.0:
                return KernelValue(0.0 + 0.0j, 0.0)
            rv, sv = _r_geq_kv(x, bundle), _s_geq_kv(x, bundle)
            rp, sp = r_geq_deriv(x, bundle), s_geq_deriv(x, bundle)
            val = up(x) * (rp * sv.value - sp * rv.value) / (2 * (x + eps))
            return KernelValue(val, max(rv.max_term, sv.max_term))
        rv, sv = _r_less_kv(x, bundle), _s_less_kv(x, bundle)
        rp, sp = r_less_deriv(x, bundle), s_less_deriv(x, bundle)
        val = lo(x) * (rp * sv.value - sp * rv.value) / (2 * (x + eps))
        return KernelValue(val, max(rv.max_term, sv.max_term))

    if x >= n and y >= n:
        wx, wy = up(x), up(y)
        if wx == 0.0 or wy == 0.0:
            return KernelValue(0.0 + 0.0j, 0.0)
        ra, sa = _r_geq_kv(x, bundle), _s_geq_kv(x, bundle)
        rb, sb = _r_geq_kv(y, bundle), _s_geq_kv(y, bundle)
        num = ra.value * sb.value - sa.value * rb.value
    elif x >= n > y:
        wx, wy = up(x), lo(y)
        if wx == 0.0:
            return KernelValue(0.0 + 0.0j, 0.0)
        ra, sa = _r_geq_kv(x, bundle), _s_geq_kv(x, bundle)
        rb, sb = _r_less_kv(y, bundle), _s_less_kv(y, bundle)
        num = ra.value * rb.value - sa.value * sb.value
    elif y >= n > x:
        wx, wy = lo(x), up(y)
        if wy == 0.0:
            return KernelValue(0.0 + 0.0j, 0.0)
        ra, sa = _r_less_kv(x, bundle), _s_less_kv(x, bundle)
        rb, sb = _r_geq_kv(y, bundle), _s_geq_kv(y, bundle)
        num = ra.value * rb.value - sa.value * sb.value
    else:
        wx, wy = lo(x), lo(y)
        ra, sa = _r_less_kv(x, bundle), _s_less_kv(x, bundle)
        rb, sb = _r_less_kv(y, bundle), _s_less_kv(y, bundle)
        num = ra.value * sb.value - sa.value * rb.value
    mx = max(ra.max_term, sa.max_term, rb.max_term, sb.max_term)
    return KernelValue(math.sqrt(wx * wy) * num / (xhat - yhat), mx)


def kernel_L_grid(params: Params, n_level: int, coords) -> list[list[float]]:
    """Balanced-ensemble kernel on a coordinate window, with the R/S
    values cached per point (each entry is a rank-one combination, so a
    w x w grid needs only O(w) function evaluations)."""
    n = n_level
    eps = params.epsilon
    bundle = RSBundle(params, n)
    coords = [int(c) for c in coords]
    vals = {}
    for x in coords:
        if x >= n:
            w = psi_geq(x, params, n)
            if w == 0.0:
                vals[x] = (0.0, 0.0 + 0.0j, 0.0 + 0.0j, 0.0 + 0.0j, 0.0 + 0.0j)
                continue
            vals[x] = (
                w,
                r_geq(x, bundle),
                s_geq(x, bundle),
                r_geq_deriv(x, bundle),
                s_geq_deriv(x, bundle),
            )
        else:
            w = psi_less(x, params, n)
            vals[x] = (
                w,
                r_less(x, bundle),
                s_less(x, bundle),
                r_less_deriv(x, bundle),
                s_less_deriv(x, bundle),
            )
    out = []
    for x in coords:
        wx, rx, sx, rpx, spx = vals[x]
        row = []
        for y in coords:
            wy, ry, sy, _, _ = vals[y]
            if wx == 0.0 or wy == 0.0:
                row.append(0.0)
                continue
            if x == y:
                row.append((wx * (rpx * sx - spx * rx) / (2 * (x + eps))).real)
                continue
            if x >= n and y >= n:
                num = rx * sy - sx * ry
            elif x >= n > y:
                num = rx * ry - sx * sy
            elif y >= n > x:
                num = rx * ry - sx * sy
            else:
                num = rx * sy - sx * ry
            row.append(
                (math.sqrt(wx * wy) * num / ((x + eps) ** 2 - (y + eps) ** 2)).real
            )
        out.append(row)
    return out
