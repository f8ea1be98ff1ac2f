"""Double-double (compensated) arithmetic for complex values.

Used by the series engine when a terminating alternating sum shows heavy
cancellation: each operation keeps an error term, giving roughly 32
significant digits.  A complex double-double is a pair of real
double-doubles, each stored as (hi, lo) floats with |lo| <= ulp(hi)/2.
"""

from __future__ import annotations

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a: float, b: float) -> tuple[float, float]:
    # requires |a| >= |b|
    s = a + b
    return s, b - (s - a)


def _two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    ta = _SPLITTER * a
    ahi = ta - (ta - a)
    alo = a - ahi
    tb = _SPLITTER * b
    bhi = tb - (tb - b)
    blo = b - bhi
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


def dd_add(xh: float, xl: float, yh: float, yl: float) -> tuple[float, float]:
    s, e = _two_sum(xh, yh)
    e += xl + yl
    return _quick_two_sum(s, e)


def dd_mul(xh: float, xl: float, yh: float, yl: float) -> tuple[float, float]:
    p, e = _two_prod(xh, yh)
    e += xh * yl + xl * yh
    return _quick_two_sum(p, e)


def dd_div(xh: float, xl: float, yh: float, yl: float) -> tuple[float, float]:
    q1 = xh / yh
    # r = x - q1*y, computed in double-double
    ph, pl = dd_mul(q1, 0.0, yh, yl)
    rh, rl = dd_add(xh, xl, -ph, -pl)
    q2 = rh / yh
    ph, pl = dd_mul(q2, 0.0, yh, yl)
    rh, rl = dd_add(rh, rl, -ph, -pl)
    q3 = rh / yh
    h, l = _quick_two_sum(q1, q2)
    return dd_add(h, l, q3, 0.0)


class CDD:
    """Complex double-double: four floats (re_hi, re_lo, im_hi, im_lo)."""

    __slots__ = ("rh", "rl", "ih", "il")

    def __init__(self, rh: float, rl: float = 0.0, ih: float = 0.0, il: float = 0.0):
        self.rh, self.rl, self.ih, self.il = rh, rl, ih, il

    @classmethod
    def from_complex(cls, z: complex) -> "CDD":
        return cls(z.real, 0.0, z.imag, 0.0)

    def to_complex(self) -> complex:
        return complex(self.rh + self.rl, self.ih + self.il)

    def __add__(self, other: "CDD") -> "CDD":
        rh, rl = dd_add(self.rh, self.rl, other.rh, other.rl)
        ih, il = dd_add(self.ih, self.il, other.ih, other.il)
        return CDD(rh, rl, ih, il)

    def __mul__(self, other: "CDD") -> "CDD":
        ac_h, ac_l = dd_mul(self.rh, self.rl, other.rh, other.rl)
        bd_h, bd_l = dd_mul(self.ih, self.il, other.ih, other.il)
        ad_h, ad_l = dd_mul(self.rh, self.rl, other.ih, other.il)
        bc_h, bc_l = dd_mul(self.ih, self.il, other.rh, other.rl)
        rh, rl = dd_add(ac_h, ac_l, -bd_h, -bd_l)
        ih, il = dd_add(ad_h, ad_l, bc_h, bc_l)
        return CDD(rh, rl, ih, il)

    def __truediv__(self, other: "CDD") -> "CDD":
        # multiply by conjugate, divide by |other|^2 (real double-double)
        conj = CDD(other.rh, other.rl, -other.ih, -other.il)
        num = self * conj
        cc_h, cc_l = dd_mul(other.rh, other.rl, other.rh, other.rl)
        dd_h, dd_l = dd_mul(other.ih, other.il, other.ih, other.il)
        den_h, den_l = dd_add(cc_h, cc_l, dd_h, dd_l)
        rh, rl = dd_div(num.rh, num.rl, den_h, den_l)
        ih, il = dd_div(num.ih, num.il, den_h, den_l)
        return CDD(rh, rl, ih, il)

    def abs_estimate(self) -> float:
        return abs(self.to_complex())
