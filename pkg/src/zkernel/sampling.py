"""Exact sampling from finite symmetric determinantal kernels.

Spectral (eigendecomposition + sequential conditioning) sampler for
Hermitian correlation kernels with eigenvalues in [0, 1]; the special
finite ensemble obtained by complementing the N-point process in its
degenerate (integer z) case; and Monte-Carlo correlation estimation.

Randomness comes from numpy's counter-based Philox generator, keyed by an
explicit 64-bit seed, so batches are reproducible across platforms.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SpectrumError, SubsetError
from .specfun import pochhammer
from .zmeasure import PointConfig

_EIG_TOL = 1e-6


@dataclass(frozen=True)
class FiniteKernelMatrix:
    """Symmetric correlation kernel restricted to a finite ground set."""

    ground_set: tuple[int, ...]
    entries: np.ndarray

    def __post_init__(self):
        g = tuple(int(x) for x in self.ground_set)
        m = np.asarray(self.entries, dtype=float)
        if m.shape != (len(g), len(g)):
            raise DomainError("entries must be square over the ground set")
        if np.max(np.abs(m - m.T)) > 1e-9 * max(1.0, np.max(np.abs(m))):
            raise DomainError("kernel matrix must be symmetric")
        object.__setattr__(self, "ground_set", g)
        object.__setattr__(self, "entries", 0.5 * (m + m.T))


@dataclass(frozen=True)
class SampleBatch:
    seed: int
    configs: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.configs)


def _clamped_spectrum(kernel: FiniteKernelMatrix):
    vals, vecs = np.linalg.eigh(kernel.entries)
    if np.min(vals) < -_EIG_TOL or np.max(vals) > 1.0 + _EIG_TOL:
        raise SpectrumError(
            f"eigenvalues [{np.min(vals):.3g}, {np.max(vals):.3g}] outside [0,1] band"
        )
    return np.clip(vals, 0.0, 1.0), vecs


def dpp_sample(kernel: FiniteKernelMatrix, seed: int, count: int) -> SampleBatch:
    """Draw i.i.d. configurations whose inclusion probabilities are the
    principal minors of the kernel (spectral sampler, exact)."""
    vals, vecs = _clamped_spectrum(kernel)
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    ground = np.array(kernel.ground_set)
    n = len(ground)
    configs = []
    for _ in range(count):
        mask = rng.random(n) < vals
        v = vecs[:, mask]
        k = v.shape[1]
        chosen: list[int] = []
        for step in range(k, 0, -1):
            p = np.sum(v * v, axis=1)
            p = np.maximum(p, 0.0)
            p /= p.sum()
            i = int(rng.choice(n, p=p))
            chosen.append(i)
            # project the column space orthogonally to e_i
            row = v[i, :]
            j = int(np.argmax(np.abs(row)))
            col = v[:, j].copy()
            v = v - np.outer(col, row / row[j])
            v = np.delete(v, j, axis=1)
            if step > 1:
                # re-orthonormalize for stability
                q, _ = np.linalg.qr(v)
                v = q
        configs.append(tuple(sorted(int(ground[i]) for i in chosen)))
    return SampleBatch(seed=int(seed), configs=tuple(configs))


def exact_config_probability(kernel: FiniteKernelMatrix, config) -> float:
    """P(sample == config) = (-1)^(n-|X|) det(K - 1_{X^c})."""
    idx = {int(x) for x in config}
    if not idx <= set(kernel.ground_set):
        raise SubsetError("configuration not inside the ground set")
    m = kernel.entries.copy()
    n = m.shape[0]
    outside = [i for i, g in enumerate(kernel.ground_set) if g not in idx]
    for i in outside:
        m[i, i] -= 1.0
    return float((-1.0) ** len(outside) * np.linalg.det(m))


def exact_distribution(kernel: FiniteKernelMatrix) -> dict[tuple[int, ...], float]:
    """Full exact configuration distribution on a tiny ground set via
    inclusion-exclusion over the correlation minors."""
    ground = kernel.ground_set
    n = len(ground)
    if n > 16:
        raise DomainError("exact distribution intended for tiny ground sets")
    minors: dict[frozenset, float] = {}
    for r in range(n + 1):
        for sub in itertools.combinations(range(n), r):
            idx = np.array(sub, dtype=int)
            minors[frozenset(sub)] = (
                1.0 if r == 0 else float(np.linalg.det(kernel.entries[np.ix_(idx, idx)]))
            )
    out = {}
    for r in range(n + 1):
        for sub in itertools.combinations(range(n), r):
            base = set(sub)
            rest = [i for i in range(n) if i not in base]
            p = 0.0
            for extra_r in range(len(rest) + 1):
                for extra in itertools.combinations(rest, extra_r):
                    p += (-1.0) ** extra_r * minors[frozenset(base | set(extra))]
            out[tuple(sorted(ground[i] for i in sub))] = p
    return out


# ---------------------------------------------------------------------------
# the finite complementary ensemble (integer z)
# ---------------------------------------------------------------------------


def racah_weight(y: int, alpha: float, beta: float, gamma: float, delta: float) -> float:
    """Classical finite quadratic-lattice weight, in the normalization

        (y + (gamma+delta+1)/2) * G[y+gamma+delta+1, y+gamma+1 / y+1, y+delta+1]
        * (alpha+1)_y (beta+delta+1)_y / ((gamma+delta+1-alpha)_y (gamma+1-beta)_y),

    which equals the raw double gamma-product expression up to one
    y-independent constant (the raw form pairs two gamma poles when
    alpha is a negative integer).  Exactly zero outside the support."""
    if y < 0:
        raise DomainError("lattice coordinate must be nonnegative")
    num_poch = pochhammer(alpha + 1.0, y) * pochhammer(beta + delta + 1.0, y)
    if num_poch == 0:
        return 0.0
    den_poch = pochhammer(gamma + delta + 1.0 - alpha, y) * pochhammer(gamma + 1.0 - beta, y)
    front = (y + (gamma + delta + 1.0) / 2.0) * math.exp(
        math.lgamma(y + gamma + delta + 1.0)
        + math.lgamma(y + gamma + 1.0)
        - math.lgamma(y + 1.0)
        - math.lgamma(y + delta + 1.0)
    )
    return float((front * num_poch / den_poch).real)


def racah_parameters(k: int, z_prime: float, a: float, b: float, n_level: int) -> tuple:
    """Parameter identification for the complement of the degenerate
    (z = k) N-point ensemble inside {0, ..., N+k-1}.

    beta is fixed as z' + N + b: the weight's gamma pair swaps under
    beta -> gamma - delta - beta, and of the two reciprocal choices this
    is the one reproducing the complement weights (checked exactly
    against the enumerated measure)."""
    return (-k - n_level, z_prime + n_level + b, b, a)


def complement_config(config: PointConfig, ground) -> PointConfig:
    """Set difference ground minus config, sorted."""
    ground = [int(g) for g in ground]
    pts = set(config.points)
    if not pts <= set(ground):
        raise SubsetError("configuration not inside the ground set")
    return PointConfig(tuple(sorted(set(ground) - pts)), config.epsilon)


def empirical_correlations(batch: SampleBatch, points, order: int | None = None) -> dict:
    """Monte-Carlo estimate of the correlation rho_m(points): the fraction
    of configurations containing every requested point, with binomial
    standard error."""
    pts = tuple(int(p) for p in points)
    if order is None:
        order = len(pts)
    if order > 3:
        raise DomainError("correlation order capped at 3")
    if len(pts) != order:
        raise DomainError("need exactly `order` points")
    if not pts:
        return {"estimate": 1.0, "stderr": 0.0, "count": len(batch)}
    hits = sum(1 for c in batch.configs if set(pts) <= set(c))
    n = len(batch.configs)
    p = hits / n
    return {"estimate": p, "stderr": math.sqrt(max(p * (1 - p), 0.0) / n), "count": n}
