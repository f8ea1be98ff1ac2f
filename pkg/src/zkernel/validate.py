"""Verification suites.

Each check pins one acceptance-grade property of the library at a fixed
tolerance and returns a small report dict; ``run_suite`` aggregates them
for the command line.  The same functions back the acceptance test
module, so the CLI `validate --suite all` reproduces every criterion.
"""

from __future__ import annotations

import itertools
import math
import time

import numpy as np

from .drhp import asymptotic_check, build_l_matrix, kernel_via_resolvent, residue_check
from .kernels import (
    DiscreteKernel,
    RSBundle,
    kernel_L,
    kernel_L_grid,
    kernel_O,
    kernel_O_cd_sum,
    kernel_O_pn_form,
    r_geq,
    r_less,
    s_geq,
    s_less,
)
from .orthopoly import LatticeWeight, orthogonality_residual
from .sampling import (
    FiniteKernelMatrix,
    dpp_sample,
    empirical_correlations,
    exact_config_probability,
    exact_distribution,
)
from .scaling import convergence_study, default_grid
from .specfun import IDENTITY_IDS, draw_identity_params, identity_residual
from .zmeasure import (
    Params,
    classify_pair,
    enumerate_degenerate,
    frobenius,
    from_frobenius,
    in_u,
    in_u0,
    is_admissible,
    map_l,
    map_o,
    p_prime,
    partition_s_n,
    prob,
    symmetric_difference,
)


def _result(name: str, max_residual: float, threshold: float, t0: float, **extra) -> dict:
    out = {
        "name": name,
        "max_residual": float(max_residual),
        "threshold": float(threshold),
        "pass": bool(max_residual < threshold),
        "seconds": round(time.time() - t0, 2),
    }
    out.update(extra)
    return out


def standard_draws(seed: int = 0) -> list[Params]:
    """One principal, one complementary and one degenerate parameter set."""
    rng = np.random.default_rng(seed)
    re = rng.uniform(0.6, 1.6)
    im = rng.uniform(0.4, 1.4)
    b = rng.uniform(-0.3, 0.4)
    a = b + rng.uniform(0.1, 0.8)
    principal = Params(complex(re, im), complex(re, -im), a, b)
    lo = rng.uniform(0.15, 0.4)
    hi = rng.uniform(0.55, 0.9)
    complementary = Params(lo, hi, a, b)
    k = int(rng.integers(2, 4))
    degenerate = Params(float(k), k + rng.uniform(0.3, 0.9), a, b)
    return [principal, complementary, degenerate]


# ---------------------------------------------------------------------------
# criterion 1: partition identity
# ---------------------------------------------------------------------------


def brute_partition_sum(params: Params, n_level: int, rel_tol: float = 1e-10) -> complex:
    """Adaptively truncated sum of the unnormalized measure over all
    signatures, sliced by the largest shifted coordinate; the cut grows
    until three consecutive slices each contribute less than rel_tol of
    the running total."""
    total = 0.0 + 0.0j
    small_run = 0
    top = n_level - 1
    while top < 20000:
        shell = 0.0 + 0.0j
        for rest in itertools.combinations(range(top), n_level - 1):
            ls = (top,) + tuple(sorted(rest, reverse=True))
            lam = tuple(ls[i] - (n_level - 1 - i) for i in range(n_level))
            shell += p_prime(lam, params, n_level)
        total += shell
        if abs(shell) < rel_tol * abs(total) and top > 4 * n_level + 8:
            small_run += 1
            if small_run >= 3:
                break
        else:
            small_run = 0
        top += 1
    return total


def check_partition(seed: int = 0) -> dict:
    t0 = time.time()
    worst = 0.0
    for params in standard_draws(seed):
        for n in (1, 2, 3):
            s = partition_s_n(params, n)
            tot = brute_partition_sum(params, n)
            worst = max(worst, abs(tot - s) / abs(s))
    return _result("partition_identity", worst, 1e-7, t0)


# ---------------------------------------------------------------------------
# criterion 2: orthogonality
# ---------------------------------------------------------------------------


def check_orthogonality(seed: int = 0) -> dict:
    t0 = time.time()
    worst = 0.0
    for params in standard_draws(seed):
        for n_level in (2, 5):
            lw = LatticeWeight(params, n_level)
            for m in range(n_level):
                for n in range(m, n_level):
                    worst = max(worst, orthogonality_residual(m, n, lw))
    return _result("orthogonality", worst, 1e-7, t0)


# ---------------------------------------------------------------------------
# criterion 3: kernel-form equality
# ---------------------------------------------------------------------------


def check_kernel_forms(seed: int = 0) -> dict:
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for params in standard_draws(seed):
        if abs(params.sigma) < 0.05:
            continue
        n_level = int(rng.integers(2, 5))
        handle = DiscreteKernel(params, n_level, "O")
        for _ in range(20):
            x = int(rng.integers(0, 3 * n_level))
            y = int(rng.integers(0, 3 * n_level))
            if x == y:
                y = x + 1
            v1 = kernel_O(x, y, handle)
            v2 = kernel_O_pn_form(x, y, handle)
            v3 = kernel_O_cd_sum(x, y, handle)
            scale = max(abs(v1), 1e-12)
            worst = max(worst, abs(v1 - v2) / scale, abs(v1 - v3) / scale, abs(v2 - v3) / scale)
    return _result("kernel_form_equality", worst, 1e-8, t0)


# ---------------------------------------------------------------------------
# criterion 4: brute-force correlation oracle (degenerate enumeration)
# ---------------------------------------------------------------------------


def check_enumeration_oracle(seed: int = 0) -> dict:
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in (2, 3):
        b = rng.uniform(-0.2, 0.4)
        a = b + rng.uniform(0.1, 0.8)
        params = Params(float(k), k + 0.7, a, b)
        for n_level in (2, 3):
            lams = enumerate_degenerate(k, n_level)
            probs = {lam: prob(lam, params, n_level).real for lam in lams}
            ground = range(n_level + k)
            ko = DiscreteKernel(params, n_level, "O")
            kl = DiscreteKernel(params, n_level, "L")
            ko_vals = {(x, y): kernel_O(x, y, ko) for x in ground for y in ground}
            kl_vals = {(x, y): kernel_L(x, y, kl) for x in ground for y in ground}
            for x in ground:
                rho_o = sum(p for lam, p in probs.items() if x in map_o(lam, params).points)
                rho_l = sum(p for lam, p in probs.items() if x in map_l(lam, params).points)
                worst = max(worst, abs(rho_o - ko_vals[(x, x)]), abs(rho_l - kl_vals[(x, x)]))
            for x, y in itertools.combinations(ground, 2):
                rho_o = sum(
                    p for lam, p in probs.items() if {x, y} <= set(map_o(lam, params).points)
                )
                rho_l = sum(
                    p for lam, p in probs.items() if {x, y} <= set(map_l(lam, params).points)
                )
                det_o = ko_vals[(x, x)] * ko_vals[(y, y)] - ko_vals[(x, y)] * ko_vals[(y, x)]
                det_l = kl_vals[(x, x)] * kl_vals[(y, y)] - kl_vals[(x, y)] * kl_vals[(y, x)]
                worst = max(worst, abs(rho_o - det_o), abs(rho_l - det_l))
    return _result("enumeration_oracle", worst, 1e-7, t0)


# ---------------------------------------------------------------------------
# criterion 5: resolvent oracle
# ---------------------------------------------------------------------------


def check_resolvent_oracle(seed: int = 0, n_draws: int = 5, truncation: int = 400, window: int = 50) -> dict:
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_draws):
        b = rng.uniform(-0.3, 0.4)
        a = b + rng.uniform(0.1, 0.8)
        sigma = rng.uniform(1.2, 3.0)
        re = (sigma - b) / 2.0
        im = rng.uniform(0.3, 1.5)
        params = Params(complex(re, im), complex(re, -im), a, b)
        n_level = int(rng.integers(2, 5))
        lmat = build_l_matrix(params, n_level, truncation)
        k_oracle = kernel_via_resolvent(lmat)
        coords = list(range(window + 1))
        k_closed = kernel_L_grid(params, n_level, coords)
        for i, x in enumerate(coords):
            for j, y in enumerate(coords):
                worst = max(worst, abs(k_closed[i][j] - k_oracle[x, y]))
    return _result("resolvent_oracle", worst, 1e-5, t0)


# ---------------------------------------------------------------------------
# criterion 6: residue relations and contour asymptotics
# ---------------------------------------------------------------------------


def check_drhp(seed: int = 0) -> dict:
    t0 = time.time()
    worst = 0.0
    monotone = True
    for params in standard_draws(seed)[:2]:  # principal and complementary
        n_level = 3
        bundle = RSBundle(params, n_level)
        for which in ("R>=", "S>="):
            for y in range(n_level):
                worst = max(worst, residue_check(which, y, bundle))
        for which in ("R<", "S<"):
            for y in range(n_level, n_level + 6):
                worst = max(worst, residue_check(which, y, bundle))
        radii = [10 * n_level + 0.37, 30 * n_level + 0.37, 100 * n_level + 0.37]
        for which in ("R>=", "S>=", "R<", "S<"):
            devs = asymptotic_check(which, radii, bundle)
            monotone = monotone and devs[0] > devs[1] > devs[2]
    res = _result("drhp_residues", worst, 1e-6, t0)
    res["asymptotics_decreasing"] = bool(monotone)
    res["pass"] = res["pass"] and monotone
    return res


# ---------------------------------------------------------------------------
# criterion 7: identity suite
# ---------------------------------------------------------------------------


def check_identities(draws: int = 100, seed: int = 0) -> dict:
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = 0.0
    by_id = {}
    for name in IDENTITY_IDS:
        w = 0.0
        for _ in range(draws):
            w = max(w, identity_residual(name, draw_identity_params(name, rng)))
        by_id[name] = w
        worst = max(worst, w)
    return _result("identity_suite", worst, 1e-8, t0, per_identity=by_id)


# ---------------------------------------------------------------------------
# criterion 8: involution symmetry
# ---------------------------------------------------------------------------


def check_involution(seed: int = 0, n_draws: int = 50) -> dict:
    t0 = time.time()
    rng = np.random.default_rng(seed)
    params = standard_draws(seed)[0]
    n_level = 3
    bundle = RSBundle(params, n_level)
    eps = params.epsilon
    worst = 0.0
    for fn, lower in ((r_geq, True), (s_geq, True), (r_less, False), (s_less, False)):
        count = 0
        while count < n_draws:
            zeta = complex(rng.uniform(-1.0, 4 * n_level), rng.uniform(-2.0, 2.0))
            try:
                v1 = fn(zeta, bundle)
                v2 = fn(-zeta - 2 * eps, bundle)
            except Exception:
                continue
            worst = max(worst, abs(v1 - v2) / max(abs(v1), 1.0))
            count += 1
    return _result("involution_symmetry", worst, 1e-10, t0)


# ---------------------------------------------------------------------------
# criterion 9: scaling convergence
# ---------------------------------------------------------------------------


def check_scaling(seed: int = 0, levels=(25, 50, 100, 200)) -> dict:
    t0 = time.time()
    params = standard_draws(seed)[0]
    rows = convergence_study(params, default_grid(), levels)
    by_pt: dict[tuple, dict[int, float]] = {}
    for r in rows:
        by_pt.setdefault((r.x, r.y), {})[r.n_level] = r.abs_err
    worst_ratio = 0.0
    for errs in by_pt.values():
        for n in sorted(errs):
            if 2 * n in errs:
                if errs[2 * n] < 1e-12:
                    continue
                worst_ratio = max(worst_ratio, errs[2 * n] / max(errs[n], 1e-300))
    return _result("scaling_convergence", worst_ratio, 0.7, t0)


# ---------------------------------------------------------------------------
# criterion 10: sampling
# ---------------------------------------------------------------------------


def check_sampling(seed: int = 0, count: int = 200_000) -> dict:
    t0 = time.time()
    # exact-distribution consistency on a small random kernel
    rng = np.random.default_rng(seed)
    size = 8
    q, _ = np.linalg.qr(rng.normal(size=(size, size)))
    lam = rng.uniform(0, 1, size=size)
    kernel = FiniteKernelMatrix(tuple(range(size)), (q * lam) @ q.T)
    dist = exact_distribution(kernel)
    exact_err = abs(sum(dist.values()) - 1.0)
    for cfg, p in dist.items():
        exact_err = max(exact_err, abs(p - exact_config_probability(kernel, cfg)))

    # degenerate complement ensemble, empirical correlations within 4 sigma
    k, n_level = 2, 4
    b = 0.2
    a = 0.7
    params = Params(float(k), k + 0.7, a, b)
    ground = tuple(range(n_level + k))
    handle = DiscreteKernel(params, n_level, "O")
    ko = np.array([[kernel_O(x, y, handle) for y in ground] for x in ground])
    kc = np.eye(len(ground)) - ko  # complement ensemble kernel
    kernel_y = FiniteKernelMatrix(ground, kc)
    batch = dpp_sample(kernel_y, seed=seed + 1, count=count)
    worst_z = 0.0
    for x in ground:
        est = empirical_correlations(batch, (x,))
        target = kc[x, x]
        worst_z = max(worst_z, abs(est["estimate"] - target) / max(est["stderr"], 1e-12))
    for x, y in itertools.combinations(ground, 2):
        est = empirical_correlations(batch, (x, y))
        target = kc[x, x] * kc[y, y] - kc[x, y] * kc[y, x]
        worst_z = max(worst_z, abs(est["estimate"] - target) / max(est["stderr"], 1e-12))
    res = _result("sampling_exactness", exact_err, 1e-10, t0)
    res["worst_z_score"] = worst_z
    res["pass"] = res["pass"] and worst_z < 4.0
    return res


# ---------------------------------------------------------------------------
# criterion 11: combinatorial exactness
# ---------------------------------------------------------------------------


def check_combinatorial(seed: int = 0) -> dict:
    t0 = time.time()
    params = standard_draws(seed)[0]
    failures = 0
    for n_level in range(1, 5):
        for lam in enumerate_degenerate(4, n_level):
            if from_frobenius(frobenius(lam), n_level) != lam:
                failures += 1
            if map_l(lam, params).points != symmetric_difference(map_o(lam, params), n_level).points:
                failures += 1
    return _result("combinatorial_exactness", float(failures), 0.5, t0)


# ---------------------------------------------------------------------------
# criterion 12: domain inclusions
# ---------------------------------------------------------------------------


def check_domains(seed: int = 0, n_draws: int = 100_000) -> dict:
    t0 = time.time()
    rng = np.random.default_rng(seed)
    counterexamples = 0
    for _ in range(n_draws):
        b = rng.uniform(-0.5, 1.0)
        a = b + rng.uniform(0.0, 1.5)
        if rng.random() < 0.5:
            z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            zp = z.conjugate() if rng.random() < 0.7 else complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        else:
            z = complex(rng.uniform(-3, 4), 0.0)
            zp = complex(rng.uniform(-3, 4), 0.0)
        params = Params(z, zp, a, b)
        adm = is_admissible(params)
        if adm and not in_u0(params):
            counterexamples += 1
        if in_u0(params) and not in_u(params):
            counterexamples += 1
    return _result("domain_inclusions", float(counterexamples), 0.5, t0)


# ---------------------------------------------------------------------------
# suite driver
# ---------------------------------------------------------------------------

SUITES = {
    "identities": (check_identities,),
    "orthogonality": (check_orthogonality,),
    "drhp": (check_drhp, check_involution),
    "oracle": (check_resolvent_oracle, check_enumeration_oracle),
    "all": (
        check_partition,
        check_orthogonality,
        check_kernel_forms,
        check_enumeration_oracle,
        check_resolvent_oracle,
        check_drhp,
        check_identities,
        check_involution,
        check_scaling,
        check_sampling,
        check_combinatorial,
        check_domains,
    ),
}


def run_suite(suite: str, draws: int = 100, seed: int = 0) -> dict:
    checks = []
    for fn in SUITES[suite]:
        if fn is check_identities:
            checks.append(fn(draws=draws, seed=seed))
        else:
            checks.append(fn(seed=seed))
    return {"suite": suite, "seed": seed, "checks": checks, "pass": all(c["pass"] for c in checks)}
