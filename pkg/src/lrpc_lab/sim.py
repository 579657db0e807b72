"""Reproducible Monte Carlo estimation of the decoder failure events.

Every trial owns a private random stream derived from (master_seed,
trial_index), so a simulation's counts are identical for any degree of
parallelism or chunking.  Per trial we record the three ground-truth events
(computed with knowledge of E and W):

* event_a -- the syndrome entries do not span the true product space E.W;
* event_b -- the intersection of the f_i^{-1}-scaled TRUE product space
  strictly exceeds E (measured against E.W, not Supp(s), which decouples it
  from event_a);
* event_c -- dim E.W < tw;

plus rank deficiency of the Step-II coefficient matrix N (not covered by
any of the bounds, reported separately), the decoder's own outcome, and whether
the decoded error equals the sampled one.
"""

from __future__ import annotations

import csv
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Optional, Sequence

from scipy.stats import beta as beta_dist
from scipy.stats import chi2_contingency, chisquare

from . import bounds as bnd
from .field import FieldContext, make_field
from .lrpc import (
    DecodeOutcome,
    FailureReason,
    LrpcParams,
    _dot_mod_q,
    decode,
    sample_instance,
    validate_params,
)
from .linalg import (
    Subspace,
    intersect,
    product_space,
    rank_packed,
    sample_grassmannian,
    scale_subspace,
    support,
)
from .rng import trial_rng

COUNT_FIELDS = (
    "event_a",
    "event_a_conditional",
    "event_b",
    "event_b_conditional",
    "conditional_denominator",
    "full_product_dim",
    "event_c",
    "rank_n_deficient",
    "dfr",
    "success",
)

CSV_HEADER = [
    "q", "m", "n", "k", "w", "t", "error_mode", "trials", "seed",
    "event_a_count", "event_b_count", "event_b_conditional_count", "event_c_count",
    "rankN_deficient_count", "dfr_count", "dfr_rate", "ci_lo", "ci_hi",
    "span_bound", "intersection_bound", "product_dim_bound", "total_bound",
]


@dataclass(frozen=True)
class TrialOutcome:
    event_a: bool
    event_b: bool
    event_c: bool
    rank_n_deficient: bool
    decode_result: DecodeOutcome
    decode_correct: bool


def run_trial(
    p: LrpcParams,
    error_mode: str,
    trial_index: int,
    master_seed: int,
    randomize_basis: bool = False,
) -> TrialOutcome:
    """One fully classified trial, deterministic in (master_seed, trial_index)."""
    rng = trial_rng(master_seed, trial_index)
    inst = sample_instance(p, rng, error_mode, randomize_basis)
    ctx, q = p.ctx, p.ctx.q

    ew = product_space(inst.e_space, inst.w_space)
    event_a = support(ctx, inst.s) != ew
    inter: Optional[Subspace] = None
    for fi in inst.f:
        scaled = scale_subspace(ctx.inv(fi), ew)
        inter = scaled if inter is None else intersect(inter, scaled)
    event_b = inter != inst.e_space
    event_c = ew.dim != p.t * p.w

    n_rows = [inst.nu[r][i] for r in range(p.n - p.k) for i in range(p.w)]
    rank_n_deficient = rank_packed(n_rows, p.n, q) < p.n

    result = decode(inst.decoder_input())
    decode_correct = result.success and result.error == inst.e

    if not (event_a or event_b or event_c or rank_n_deficient) and not decode_correct:
        # per-trial invariant: absent all failure events the decoder must
        # return the sampled error -- a violation here is a bug, not noise
        raise AssertionError(
            f"decoder returned {result.reason} on an event-free trial "
            f"(seed={master_seed}, index={trial_index})"
        )
    return TrialOutcome(event_a, event_b, event_c, rank_n_deficient, result, decode_correct)


def _count_chunk(args) -> dict[str, int]:
    p, error_mode, master_seed, start, stop, randomize_basis = args
    counts = dict.fromkeys(COUNT_FIELDS, 0)
    reasons = {r.value: 0 for r in FailureReason}
    for idx in range(start, stop):
        out = run_trial(p, error_mode, idx, master_seed, randomize_basis)
        counts["event_a"] += out.event_a
        counts["event_b"] += out.event_b
        counts["event_c"] += out.event_c
        counts["rank_n_deficient"] += out.rank_n_deficient
        if not out.event_c:
            counts["full_product_dim"] += 1
            counts["event_a_conditional"] += out.event_a
        if not (out.event_a or out.event_c):
            counts["conditional_denominator"] += 1
            counts["event_b_conditional"] += out.event_b
        counts["dfr"] += not out.decode_correct
        counts["success"] += out.decode_result.success
        if out.decode_result.reason is not None:
            reasons[out.decode_result.reason.value] += 1
    counts.update({f"reason_{k}": v for k, v in reasons.items()})
    return counts


@dataclass
class SimulationReport:
    params: LrpcParams
    error_mode: str
    trials: int
    master_seed: int
    alpha: float
    counts: dict[str, int]
    bounds: dict[str, bnd.BoundValue]
    elapsed_s: float = 0.0

    @property
    def trials_per_sec(self) -> float:
        return self.trials / self.elapsed_s if self.elapsed_s > 0 else math.inf

    @property
    def dfr_rate(self) -> float:
        return self.counts["dfr"] / self.trials

    def rate(self, name: str) -> float:
        return self.counts[name] / self.trials

    def dfr_interval(self) -> tuple[float, float]:
        return clopper_pearson(self.counts["dfr"], self.trials, self.alpha)

    def interval(self, name: str, denominator: Optional[int] = None) -> tuple[float, float]:
        den = self.trials if denominator is None else denominator
        return clopper_pearson(self.counts[name], den, self.alpha)

    def to_csv_row(self) -> list[str]:
        p = self.params
        lo, hi = self.dfr_interval()
        fmt = lambda x: format(float(x), ".12g")
        return [
            str(p.ctx.q), str(p.ctx.m), str(p.n), str(p.k), str(p.w), str(p.t),
            self.error_mode, str(self.trials), str(self.master_seed),
            str(self.counts["event_a"]), str(self.counts["event_b"]),
            str(self.counts["event_b_conditional"]), str(self.counts["event_c"]),
            str(self.counts["rank_n_deficient"]), str(self.counts["dfr"]),
            fmt(self.dfr_rate), fmt(lo), fmt(hi),
            fmt(self.bounds["span"].exact), fmt(self.bounds["intersection"].exact),
            fmt(self.bounds["product_dim"].exact), fmt(self.bounds["total"].exact),
        ]

    def to_json(self) -> dict:
        p = self.params
        lo, hi = self.dfr_interval()
        return {
            "field": p.ctx.to_json(),
            "params": {"n": p.n, "k": p.k, "w": p.w, "t": p.t},
            "error_mode": self.error_mode,
            "trials": self.trials,
            "seed": self.master_seed,
            "alpha": self.alpha,
            "counts": self.counts,
            "dfr_rate": self.dfr_rate,
            "dfr_ci": [lo, hi],
            "bounds": {k: v.to_json() for k, v in self.bounds.items()},
            "elapsed_s": self.elapsed_s,
            "trials_per_sec": self.trials_per_sec,
        }


def run_simulation(
    p: LrpcParams,
    error_mode: str,
    trials: int,
    master_seed: int,
    parallelism: int = 1,
    alpha: float = 0.01,
    randomize_basis: bool = False,
) -> SimulationReport:
    """Aggregate ``trials`` independent trials; identical for any parallelism."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    rep = validate_params(p)
    if not rep.ok:
        raise ValueError("invalid parameters: " + "; ".join(rep.violations))

    start_time = time.perf_counter()
    nchunks = min(trials, max(parallelism * 4, 1))
    edges = [trials * i // nchunks for i in range(nchunks + 1)]
    jobs = [
        (p, error_mode, master_seed, edges[i], edges[i + 1], randomize_basis)
        for i in range(nchunks)
        if edges[i] < edges[i + 1]
    ]
    if parallelism == 1:
        chunk_counts = [_count_chunk(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            chunk_counts = list(pool.map(_count_chunk, jobs))
    totals: dict[str, int] = {}
    for c in chunk_counts:
        for key, val in c.items():
            totals[key] = totals.get(key, 0) + val
    elapsed = time.perf_counter() - start_time

    q, m = p.ctx.q, p.ctx.m
    _, _, total = bnd.total_bound(q, m, p.n, p.k, p.t, p.w)
    bound_map = {
        "span": bnd.span_bound(q, p.n, p.k, p.t, p.w),
        "intersection": bnd.intersection_bound(q, m, p.t, p.w),
        "product_dim": bnd.product_dim_bound(q, m, p.t, p.w),
        "total": total,
    }
    return SimulationReport(p, error_mode, trials, master_seed, alpha, totals, bound_map, elapsed)


def append_csv_row(path: str, report: SimulationReport) -> None:
    """Append one report row, creating the file with a header when absent."""
    new_file = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", newline="") as fh:
        writer = csv.writer(fh)
        if new_file:
            writer.writerow(CSV_HEADER)
        writer.writerow(report.to_csv_row())


# ---------------------------------------------------------------------------
# Exact binomial confidence intervals
# ---------------------------------------------------------------------------

def clopper_pearson(successes: int, trials: int, alpha: float) -> tuple[float, float]:
    """Exact (Beta-quantile) two-sided binomial confidence interval."""
    if not 0 <= successes <= trials:
        raise ValueError("need 0 <= successes <= trials")
    if not 0 < alpha < 1:
        raise ValueError("need 0 < alpha < 1")
    if trials == 0:
        raise ValueError("trials must be >= 1")
    lo = 0.0 if successes == 0 else float(
        beta_dist.ppf(alpha / 2, successes, trials - successes + 1)
    )
    hi = 1.0 if successes == trials else float(
        beta_dist.ppf(1 - alpha / 2, successes + 1, trials - successes)
    )
    return lo, hi


# ---------------------------------------------------------------------------
# Syndrome uniformity (chi-square goodness of fit and pairwise independence)
# ---------------------------------------------------------------------------

MAX_TABLE_CELLS = 1 << 16


@dataclass
class UniformityReport:
    params: LrpcParams
    error_mode: str
    trials_requested: int
    trials_used: int        # trials with dim E.W = tw
    alpha: float
    coordinate_pvalues: list[float]
    independence_pvalues: list[float]
    notices: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(pv >= self.alpha for pv in self.coordinate_pvalues)


def _uniformity_chunk(args) -> tuple[list[list[int]], list[list[int]], int]:
    p, error_mode, master_seed, start, stop = args
    q = p.ctx.q
    tw = p.t * p.w
    ncells = q ** tw
    nk = p.n - p.k
    coord_counts = [[0] * ncells for _ in range(nk)]
    pair_counts = [[0] * (ncells * ncells) for _ in range(max(nk - 1, 0))]
    used = 0
    for idx in range(start, stop):
        rng = trial_rng(master_seed, idx)
        inst = sample_instance(p, rng, error_mode)
        ew = product_space(inst.e_space, inst.w_space)
        if ew.dim != tw:
            continue
        used += 1
        # sigma^{(r)}_{i,j} = sum_d nu^{(r,d)}_i x^{(d)}_j: the unique
        # coordinates of s_r on the basis {f_i eps_j} when dim E.W = tw
        cells = []
        for r in range(nk):
            cell = 0
            mult = 1
            for i in range(p.w):
                for j in range(p.t):
                    if q == 2:
                        sig = (inst.nu[r][i] & inst.x[j]).bit_count() & 1
                    else:
                        sig = _dot_mod_q(inst.nu[r][i], inst.x[j], q, p.n)
                    cell += sig * mult
                    mult *= q
            cells.append(cell)
            coord_counts[r][cell] += 1
        for r in range(nk - 1):
            pair_counts[r][cells[r] * ncells + cells[r + 1]] += 1
    return coord_counts, pair_counts, used


def syndrome_uniformity_test(
    p: LrpcParams,
    trials: int,
    master_seed: int,
    alpha: float = 0.01,
    error_mode: str = "exact_rank_t",
    parallelism: int = 1,
) -> UniformityReport:
    """Chi-square test that each syndrome entry is uniform on E.W.

    Restricted to trials with dim E.W = tw; coordinates are taken in the
    {f_i eps_j} basis, so uniformity on E.W means uniformity on F_q^{tw}.
    Adjacent coordinate pairs get an independence chi-square as well.
    """
    q = p.ctx.q
    tw = p.t * p.w
    if q ** tw > MAX_TABLE_CELLS:
        raise ValueError(f"q^(tw) = {q ** tw} exceeds the tabulation limit {MAX_TABLE_CELLS}")
    nk = p.n - p.k
    ncells = q ** tw
    nchunks = min(trials, max(parallelism * 4, 1))
    edges = [trials * i // nchunks for i in range(nchunks + 1)]
    jobs = [
        (p, error_mode, master_seed, edges[i], edges[i + 1])
        for i in range(nchunks)
        if edges[i] < edges[i + 1]
    ]
    if parallelism == 1:
        results = [_uniformity_chunk(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            results = list(pool.map(_uniformity_chunk, jobs))

    coord_counts = [[0] * ncells for _ in range(nk)]
    pair_counts = [[0] * (ncells * ncells) for _ in range(max(nk - 1, 0))]
    used = 0
    for cc, pc, u in results:
        used += u
        for r in range(nk):
            for c in range(ncells):
                coord_counts[r][c] += cc[r][c]
        for r in range(nk - 1):
            for c in range(ncells * ncells):
                pair_counts[r][c] += pc[r][c]

    notices = []
    coord_p = [float(chisquare(counts).pvalue) for counts in coord_counts]
    indep_p = []
    if nk < 2:
        notices.append("single syndrome coordinate: independence test skipped")
    else:
        for r in range(nk - 1):
            table = [
                pair_counts[r][a * ncells: (a + 1) * ncells] for a in range(ncells)
            ]
            indep_p.append(float(chi2_contingency(table, correction=False).pvalue))
    return UniformityReport(
        p, error_mode, trials, used, alpha, coord_p, indep_p, notices
    )


# ---------------------------------------------------------------------------
# Brute-force oracle for the vanishing-combination lemma
# ---------------------------------------------------------------------------

MAX_SCAN = 1 << 22


@dataclass
class LemmaOracleReport:
    q: int
    m: int
    t: int
    r: int
    d: int
    trials: int
    hits: int
    alpha: float
    bound: bnd.BoundValue

    @property
    def empirical(self) -> float:
        return self.hits / self.trials

    def interval(self) -> tuple[float, float]:
        return clopper_pearson(self.hits, self.trials, self.alpha)

    @property
    def dominated(self) -> bool:
        """Lower confidence limit does not exceed the exact bound."""
        return Fraction(self.interval()[0]).limit_denominator(10 ** 12) <= self.bound.exact


def lemma_oracle(
    q: int,
    m: int,
    t: int,
    r: int,
    d: int,
    trials: int,
    seed: int,
    alpha: float = 0.01,
    ctx: Optional[FieldContext] = None,
) -> LemmaOracleReport:
    """Empirically measure the vanishing-combination probability.

    The coefficient set A is instantiated as the full span of r independent
    elements (drawn deterministically from ``seed``) -- the largest set the
    lemma admits, containing a d-dimensional subspace for every d <= r.  Per
    trial, t independent elements spanning a t-dimensional space are drawn
    and all of A^t \\ {0} is scanned for a vanishing combination.
    """
    if q ** (r * t) > MAX_SCAN:
        raise ValueError(f"q^(rt) = {q ** (r * t)} exceeds the enumeration limit {MAX_SCAN}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if ctx is None:
        ctx = make_field(q, m, seed=seed)
    rng = trial_rng(seed, 0)
    g_space = sample_grassmannian(ctx, r, rng)
    a_elems = list(g_space.elements())

    hits = 0
    for idx in range(1, trials + 1):
        trng = trial_rng(seed, idx)
        e_space = sample_grassmannian(ctx, t, trng)
        e = e_space.basis
        # scan all coefficient tuples; products per slot precomputed
        per_slot = [[ctx.mul(a, ej) for a in a_elems] for ej in e]
        zero_idx = a_elems.index(0)
        found = False
        for combo in iproduct(range(len(a_elems)), repeat=t):
            if all(c == zero_idx for c in combo):
                continue
            acc = 0
            for j, c in enumerate(combo):
                acc = ctx.add(acc, per_slot[j][c])
            if acc == 0:
                found = True
                break
        hits += found
    return LemmaOracleReport(q, m, t, r, d, trials, hits, alpha, bnd.lemma_bound(q, m, t, r, d))
