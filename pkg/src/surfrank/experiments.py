"""Desk-scale experiments: rho estimation, the CRT product check, rank surveys.

rho_l(m, n) is the proportion of surfaces over F_l with deg A = m, deg B = n
(leading coefficients nonzero) whose L-polynomial vanishes at u = 1/l.  All
"rank" columns in these reports mean ANALYTIC rank: the zero multiplicity at
u = 1/q, which upper-bounds the Mordell-Weil rank and equals it under the
Tate conjecture.  Every report carries that banner.

Exhaustive cells iterate the whole coefficient space; Monte Carlo cells
sample it uniformly (optionally without replacement) and report a Wilson 95%
interval.  Cells are deterministic given (config, seed): sampling streams are
keyed per cell, and all aggregation happens in a fixed order.

The sweep writes a line-delimited checkpoint (config header plus one record
per finished cell), rewritten atomically, and refuses to resume when the
stored configuration differs.
"""

from __future__ import annotations

import json
import math
import os
import random
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

from . import intpoly
from .errors import (
    BadSurfaceReductionError,
    BudgetExceededError,
    CheckpointError,
    InconsistentDataError,
)
from .families import FamilySpec, _draw_surface, squarefree_odd_factors
from .lfunction import analytic_rank, surface_lpolynomial
from .nagao import nagao_rank_estimate
from .surfaces import SurfaceFq, discriminant_poly, is_isotrivial, reduce_mod
from .seeding import unit_rng

__all__ = [
    "RANK_BANNER", "RhoEstimate", "CrtReport", "AvgRankReport",
    "rho_estimate", "rho_sweep", "crt_experiment", "avg_rank_survey",
    "wilson_halfwidth", "CONJECTURED_LIMIT",
]

RANK_BANNER = "rank columns are analytic ranks (zero multiplicity at u = 1/q)"

# Comparison line printed by rho reports.
CONJECTURED_LIMIT = 0.5


@dataclass(frozen=True)
class RhoEstimate:
    ell: int
    m: int
    n: int
    mode: str
    total: int
    positive_rank_count: int
    isotrivial_count: int
    degenerate_count: int
    rho_hat: float
    ci95: float | None = None
    seed: int | None = None

    @property
    def distance_to_limit(self) -> float:
        return abs(self.rho_hat - CONJECTURED_LIMIT)

    def report_lines(self) -> list[str]:
        lines = [
            f"rho_{self.ell}({self.m},{self.n}) [{self.mode}] = {self.rho_hat:.6f}"
            f" ({self.positive_rank_count}/{self.total - self.isotrivial_count - self.degenerate_count})",
            f"  distance to the conjectured limit {CONJECTURED_LIMIT}: {self.distance_to_limit:.6f}",
            f"  {RANK_BANNER}",
        ]
        if self.ci95 is not None:
            lines.insert(1, f"  Wilson 95% half-width: {self.ci95:.6f}")
        return lines


def wilson_halfwidth(k: int, n: int, z: float = 1.959963984540054) -> float:
    """Half-width of the Wilson score interval for k successes in n trials."""
    if n == 0:
        return float("nan")
    phat = k / n
    denom = 1.0 + z * z / n
    return (z / denom) * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n))


def _space_size(ell: int, m: int, n: int) -> int:
    return (ell - 1) ** 2 * ell ** (m + n)


def _decode_poly(idx: int, ell: int, d: int) -> tuple[int, ...]:
    """Index -> coefficients (a_0..a_d) with a_d in [1, ell)."""
    low = []
    for _ in range(d):
        low.append(idx % ell)
        idx //= ell
    return tuple(low) + (idx + 1,)


def _decode_surface(idx: int, ell: int, m: int, n: int):
    nb = (ell - 1) * ell**n
    ia, ib = divmod(idx, nb)
    return _decode_poly(ia, ell, m), _decode_poly(ib, ell, n)


def _classify_cell(ell: int, a, b):
    """-> 'degenerate' | 'isotrivial' | analytic rank (int)."""
    try:
        s = SurfaceFq(ell, a, b)
    except BadSurfaceReductionError:
        return "degenerate"
    if is_isotrivial(s):
        return "isotrivial"
    _, lpoly = surface_lpolynomial(s)
    return analytic_rank(lpoly)


def rho_estimate(
    ell: int,
    m: int,
    n: int,
    mode: str = "exhaustive",
    budget: int | None = None,
    seed: int = 0,
    without_replacement: bool = False,
    threads: int = 1,
) -> RhoEstimate:
    """Positive-analytic-rank proportion over deg A = m, deg B = n surfaces."""
    space = _space_size(ell, m, n)
    if mode == "exhaustive":
        if budget is not None and space > budget:
            raise BudgetExceededError(
                f"exhaustive space {space} exceeds budget {budget}; use mode='mc'"
            )
        indices = range(space)
        total = space
    elif mode == "mc":
        if budget is None or budget < 1:
            raise ValueError("Monte Carlo mode needs a positive sample budget")
        rng = unit_rng(seed, "rho", ell, m, n)
        if without_replacement:
            if budget > space:
                raise ValueError("cannot sample more than the space without replacement")
            indices = rng.permutation(space)[:budget].tolist()
        else:
            indices = rng.integers(0, space, size=budget).tolist()
        total = budget
    else:
        raise ValueError(f"unknown mode {mode!r}")

    def work(idx):
        a, b = _decode_surface(int(idx), ell, m, n)
        return _classify_cell(ell, a, b)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(work, indices))
    else:
        outcomes = [work(i) for i in indices]

    degen = sum(1 for o in outcomes if o == "degenerate")
    iso = sum(1 for o in outcomes if o == "isotrivial")
    positive = sum(1 for o in outcomes if isinstance(o, int) and o > 0)
    denom = total - iso - degen
    if denom <= 0:
        raise InconsistentDataError("no classifiable surfaces in the cell")
    rho = positive / denom
    ci = wilson_halfwidth(positive, denom) if mode == "mc" else None
    return RhoEstimate(ell, m, n, mode, total, positive, iso, degen, rho,
                       ci, seed if mode == "mc" else None)


# -- sweep with checkpointing ---------------------------------------------------


def _sweep_config(ells, mns, mode, budget, seed) -> dict:
    return {
        "ells": list(ells),
        "mns": [list(mn) for mn in mns],
        "mode": mode,
        "budget": budget,
        "seed": seed,
    }


def _load_checkpoint(path: str, config: dict) -> dict[str, dict]:
    done: dict[str, dict] = {}
    if not path or not os.path.exists(path):
        return done
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    for i, line in enumerate(lines):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CheckpointError(f"corrupt checkpoint {path!r} at line {i + 1}: {exc}") from None
        if i == 0:
            if "config" not in rec:
                raise CheckpointError(f"checkpoint {path!r} lacks a config header")
            if rec["config"] != config:
                raise CheckpointError(
                    f"checkpoint {path!r} belongs to a different configuration"
                )
        else:
            if "unit_id" not in rec or "result" not in rec:
                raise CheckpointError(f"corrupt checkpoint {path!r} at line {i + 1}")
            done[rec["unit_id"]] = rec["result"]
    return done


def _write_checkpoint(path: str, config: dict, done: dict[str, dict]) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"config": config}) + "\n")
        for unit_id in sorted(done):
            fh.write(json.dumps({"unit_id": unit_id, "result": done[unit_id]}) + "\n")
    os.replace(tmp, path)


def rho_sweep(
    ells,
    mns,
    mode: str = "exhaustive",
    budget: int | None = None,
    seed: int = 0,
    checkpoint_path: str | None = None,
    threads: int = 1,
) -> list[RhoEstimate]:
    """One RhoEstimate per (ell, (m, n)) cell, sorted by (ell, m, n); resumable."""
    cells = sorted((ell, m, n) for ell in ells for (m, n) in mns)
    config = _sweep_config(ells, mns, mode, budget, seed)
    done = _load_checkpoint(checkpoint_path, config) if checkpoint_path else {}
    out = []
    for ell, m, n in cells:
        unit_id = f"{ell},{m},{n}"
        if unit_id in done:
            out.append(RhoEstimate(**done[unit_id]))
            continue
        est = rho_estimate(ell, m, n, mode=mode, budget=budget, seed=seed, threads=threads)
        out.append(est)
        done[unit_id] = asdict(est)
        if checkpoint_path:
            _write_checkpoint(checkpoint_path, config, done)
    return out


# -- CRT experiment --------------------------------------------------------------


@dataclass(frozen=True)
class CrtReport:
    N: int
    m: int
    n: int
    M: int
    sample_size: int
    classified: int
    lhs_hat: float
    product_of_rhos: float
    discrepancy: float
    combined_se: float
    within_3se: bool
    rhos: tuple[RhoEstimate, ...]
    isotrivial_reductions: int
    degree_drop_rates: tuple[tuple[int, float], ...]
    seed: int

    def report_lines(self) -> list[str]:
        lines = [
            f"CRT check N={self.N}, (m,n)=({self.m},{self.n}), M={self.M}, "
            f"{self.classified} classified of {self.sample_size} sampled",
            f"  lhs (positive rank at all ell | N): {self.lhs_hat:.6f}",
            f"  product of rho_ell estimates:       {self.product_of_rhos:.6f}",
            f"  discrepancy {self.discrepancy:+.6f}, combined SE {self.combined_se:.6f}, "
            f"|disc| <= 3*SE: {self.within_3se}",
            f"  degree-drop rates: "
            + ", ".join(f"mod {ell}: {r:.4f}" for ell, r in self.degree_drop_rates),
            f"  {RANK_BANNER}",
        ]
        return lines


def crt_experiment(
    N: int,
    m: int,
    n: int,
    M: int,
    sample: int,
    seed: int = 0,
    rho_mode_cutoff: int = 200_000,
    rho_mc_budget: int = 10_000,
) -> CrtReport:
    """Compare the joint positive-rank rate of reductions with the rho product.

    Surfaces are drawn from the height-ordered family, kept when the
    discriminant stays nonzero mod every prime factor of N, and classified by
    their reductions as-is (a reduction may have dropped degree; rates are
    reported).  Reductions with constant j-invariant cannot be ranked and are
    excluded with a tally.
    """
    ells = squarefree_odd_factors(N) if N > 1 else []
    spec = FamilySpec(m, n, M, "height")
    rng = random.Random(seed)
    all_pos = 0
    classified = 0
    iso_red = 0
    drops = Counter()
    kept = 0
    while kept < sample:
        s = _draw_surface(spec, rng)
        delta = discriminant_poly(s)
        if any(not intpoly.reduce_mod(delta, ell) for ell in ells):
            continue
        kept += 1
        reductions = [reduce_mod(s, ell) for ell in ells]
        for ell, red in zip(ells, reductions):
            if red.degree_drop != (0, 0):
                drops[ell] += 1
        if any(is_isotrivial(red) for red in reductions):
            iso_red += 1
            continue
        classified += 1
        pos = True
        for red in reductions:
            _, lpoly = surface_lpolynomial(red)
            if analytic_rank(lpoly) == 0:
                pos = False
                break
        if pos:
            all_pos += 1

    lhs = all_pos / classified if classified else float("nan")
    rhos = []
    for ell in ells:
        if _space_size(ell, m, n) <= rho_mode_cutoff:
            rhos.append(rho_estimate(ell, m, n, mode="exhaustive"))
        else:
            rhos.append(rho_estimate(ell, m, n, mode="mc", budget=rho_mc_budget, seed=seed))
    product = math.prod(r.rho_hat for r in rhos) if rhos else 1.0
    se_lhs = math.sqrt(lhs * (1 - lhs) / classified) if classified else float("nan")
    var_prod_rel = 0.0
    for r in rhos:
        if r.ci95 is not None and r.rho_hat > 0:
            se_r = r.ci95 / 1.959963984540054
            var_prod_rel += (se_r / r.rho_hat) ** 2
    se_prod = product * math.sqrt(var_prod_rel)
    combined = math.sqrt(se_lhs**2 + se_prod**2)
    disc = lhs - product
    return CrtReport(
        N, m, n, M, sample, classified, lhs, product, disc, combined,
        abs(disc) <= 3 * combined, tuple(rhos), iso_red,
        tuple((ell, drops[ell] / sample) for ell in ells), seed,
    )


# -- average-rank survey ----------------------------------------------------------


@dataclass(frozen=True)
class AvgRankReport:
    """Nagao-estimate survey over a sampled family.

    Estimates are evidence-grade numerical rank estimates at a finite cutoff,
    not proven ranks.
    """

    spec: FamilySpec
    sample_size: int
    X: int
    mean_estimate: float | None
    se: float | None
    histogram: tuple[tuple[int, int], ...]
    seed: int
    banner: str = field(default=RANK_BANNER)

    def report_lines(self) -> list[str]:
        lines = [
            f"average Nagao rank estimate over {self.sample_size} surfaces "
            f"(m={self.spec.m}, n={self.spec.n}, M={self.spec.M}, X={self.X})",
            "  numerical estimates at a finite cutoff, not proven ranks",
        ]
        if self.mean_estimate is not None:
            lines.append(f"  mean {self.mean_estimate:.4f} +- {self.se:.4f} (SE)")
            lines.append("  histogram of rounded estimates: "
                         + ", ".join(f"{k}: {v}" for k, v in self.histogram))
        return lines


def avg_rank_survey(
    spec: FamilySpec, X: int, sample: int, seed: int = 0, threads: int = 1
) -> AvgRankReport:
    from .families import sample_family

    surfaces = sample_family(spec, sample, seed)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            ests = list(pool.map(lambda s: nagao_rank_estimate(s, X), surfaces))
    else:
        ests = [nagao_rank_estimate(s, X) for s in surfaces]
    if not ests:
        return AvgRankReport(spec, 0, X, None, None, (), seed)
    mean = math.fsum(ests) / len(ests)
    var = math.fsum((e - mean) ** 2 for e in ests) / max(len(ests) - 1, 1)
    se = math.sqrt(var / len(ests))
    hist = Counter(int(round(e)) for e in ests)
    return AvgRankReport(
        spec, sample, X, mean, se, tuple(sorted(hist.items())), seed
    )
