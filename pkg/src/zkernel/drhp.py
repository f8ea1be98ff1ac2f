"""Independent verification harness for the balanced-ensemble kernel.

Builds the skew-symmetric two-block matrix of the ensemble on a truncated
lattice, computes the correlation kernel densely as L(1+L)^-1, and checks
the analytic closed forms against it.  Also hosts the residue and
asymptotics checks for the shifted-plane functions.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SolveError
from .kernels import (
    RSBundle,
    psi_geq,
    psi_less,
    psi_tilde,
    r_geq,
    r_less,
    residue_at,
    s_geq,
    s_less,
)
from .zmeasure import Params

_COND_WARN = 1e10


@dataclass(frozen=True)
class TruncatedLMatrix:
    """Dense lattice truncation of the two-block ensemble matrix, indexed
    by integer coordinates 0..M-1 in natural order."""

    params: Params
    n_level: int
    truncation: int
    matrix: np.ndarray


def build_l_matrix(params: Params, n_level: int, truncation: int) -> TruncatedLMatrix:
    """Assemble the blocks [0, A; -A^T, 0] under the level-N split.

    A(x, y) = sqrt(psi_geq(x) psi_less(y)) / (xhat - yhat) for x >= N > y.
    Requires Re(Sigma) > 1 so the upper weight is summable (the regime
    where the resolvent comparison is meaningful).
    """
    if truncation <= n_level:
        raise DomainError("truncation must exceed the level")
    if params.sigma.real <= 1.0:
        raise DomainError("resolvent oracle needs Re(Sigma) > 1")
    eps = params.epsilon
    m = truncation
    lower = np.arange(n_level)
    upper = np.arange(n_level, m)
    sq_lo = np.array([math.sqrt(psi_less(int(y), params, n_level)) for y in lower])
    sq_up = np.array([math.sqrt(max(psi_geq(int(x), params, n_level), 0.0)) for x in upper])
    xh_up = (upper + eps) ** 2
    xh_lo = (lower + eps) ** 2
    a_block = (sq_up[:, None] * sq_lo[None, :]) / (xh_up[:, None] - xh_lo[None, :])
    mat = np.zeros((m, m))
    mat[n_level:, :n_level] = a_block
    mat[:n_level, n_level:] = -a_block.T
    return TruncatedLMatrix(params, n_level, m, mat)


def kernel_via_resolvent(lmat: TruncatedLMatrix) -> np.ndarray:
    """Dense K = L(1+L)^-1; the truncation error at fixed entries decays
    with the truncation size."""
    m = lmat.matrix
    one_plus = np.eye(m.shape[0]) + m
    cond = np.linalg.cond(one_plus)
    if not np.isfinite(cond):
        raise SolveError("1+L numerically singular")
    if cond > _COND_WARN:
        warnings.warn(f"1+L condition number {cond:.3g} above guard", stacklevel=2)
    try:
        # K = L (1+L)^-1  <=>  (1+L)^T K^T = L^T
        kt = np.linalg.solve(one_plus.T, m.T)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise SolveError(str(exc)) from exc
    return kt.T


def det_probability(lmat: TruncatedLMatrix, config) -> float:
    """det L_X / det(1+L) for a point configuration X (integer coords)."""
    idx = np.array(sorted(int(x) for x in config), dtype=int)
    m = lmat.matrix
    if idx.size == 0:
        det_x = 1.0
    else:
        det_x = float(np.linalg.det(m[np.ix_(idx, idx)]))
    sign, logdet = np.linalg.slogdet(np.eye(m.shape[0]) + m)
    return det_x / (sign * math.exp(logdet))


_WHICH = {"R>=": "R>=", "S>=": "S>=", "R<": "R<", "S<": "S<"}


def _fn(which: str, bundle: RSBundle):
    return {
        "R>=": lambda t: r_geq(t, bundle),
        "S>=": lambda t: s_geq(t, bundle),
        "R<": lambda t: r_less(t, bundle),
        "S<": lambda t: s_less(t, bundle),
    }[which]


def residue_check(which: str, y: float, bundle: RSBundle) -> float:
    """Relative error between the numerically extracted residue at a pole
    and the residue relation's right-hand side."""
    if which not in _WHICH:
        raise DomainError("which must be one of R>=, S>=, R<, S<")
    params, n = bundle.params, bundle.n_level
    y0 = round(float(y))
    in_lower = 0 <= y0 < n
    if which in ("R>=", "S>="):
        if not in_lower:
            raise DomainError("poles of the upper functions lie below the level")
        partner = s_less if which == "R>=" else r_less
    else:
        if y0 < n:
            raise DomainError("poles of the lower functions lie at or above the level")
        partner = s_geq if which == "R<" else r_geq
    num = residue_at(_fn(which, bundle), float(y0))
    rhs = psi_tilde(float(y0), params, n) * partner(float(y0), bundle)
    return abs(num - rhs) / max(abs(rhs), 1e-300)


def asymptotic_check(which: str, radii, bundle: RSBundle, n_angles: int = 16) -> list[float]:
    """Max deviation (R from 1; normalized S from 0) on circles of the
    given radii; the radii must keep at least 0.25 away from the pole
    sets on the real axis."""
    if which not in _WHICH:
        raise DomainError("which must be one of R>=, S>=, R<, S<")
    params, n = bundle.params, bundle.n_level
    eps = params.epsilon
    fn = _fn(which, bundle)
    sig = params.sigma
    if which == "S>=":
        scale = float(n) ** (-2.0 * sig.real)
    elif which == "S<":
        scale = float(n) ** (2.0 * sig.real)
    else:
        scale = 1.0
    out = []
    for r in radii:
        if min(abs(r - round(r)), abs(r + 2 * eps - round(r + 2 * eps))) < 0.25:
            raise DomainError(f"radius {r} too close to the pole sets")
        dev = 0.0
        for mth in range(n_angles):
            theta = 2 * math.pi * (mth + 0.37) / n_angles
            zeta = -eps + (r + eps) * complex(math.cos(theta), math.sin(theta))
            val = fn(zeta)
            dev = max(dev, abs(val - 1.0) if which.startswith("R") else abs(val) * scale)
        out.append(dev)
    return out
