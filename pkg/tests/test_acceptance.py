"""Acceptance gate: end-to-end statistical and exact validation.

Each test prints one PASS line on success; trial counts and tolerances are
pinned.  The statistical tests are deterministic via fixed master seeds.
Expected total runtime is about 40 minutes on one core, almost all of it
in the five-point bound-domination grid.
"""

import csv
import random
from fractions import Fraction

from lrpc_lab.bounds import (
    intersection_bound,
    legacy_bounds,
    product_dim_bound,
    qpow,
    span_bound,
    span_bound_simplified,
    total_bound,
)
from lrpc_lab.cli import main as cli_main
from lrpc_lab.field import make_field
from lrpc_lab.linalg import (
    gaussian_binomial,
    intersect,
    product_space,
    sample_grassmannian,
    subspace_from_rows,
    support,
)
from lrpc_lab.lrpc import LrpcParams
from lrpc_lab.sim import (
    clopper_pearson,
    lemma_oracle,
    run_simulation,
    run_trial,
    syndrome_uniformity_test,
)

W, T = 2, 2
# (m, n, k) with w = t = 2.  The Step-II matrix is (n-k)w x n, and its rank
# deficiency probability ~ q^-(n-2k+1) is a failure mode outside all the
# bounds; points are chosen so it sits well below the total bound
# ~ q^(tw-(n-k)), i.e. k small relative to n-k.
GRID = [(20, 20, 3), (20, 24, 5), (30, 20, 3), (30, 24, 4), (30, 28, 4)]


def enumerate_subspaces_by_dim(ctx):
    """All subspaces of F_{q^m}, level by level, keyed by canonical basis."""
    levels = [{(): None}]  # dim 0: the zero space
    order = ctx.order
    for t in range(1, ctx.m + 1):
        level = {}
        for basis in levels[t - 1]:
            for e in range(1, order):
                s = subspace_from_rows(ctx, list(basis) + [e])
                if s.dim == t:
                    level[s.basis] = None
        levels.append(level)
    return [set(lv) for lv in levels]


def test_acceptance_1_counting_and_set_operations_match_enumeration():
    for q in (2, 3):
        for m in (2, 3, 4):
            ctx = make_field(q, m)
            levels = enumerate_subspaces_by_dim(ctx)
            for t in range(m + 1):
                assert len(levels[t]) == gaussian_binomial(m, t, q), (q, m, t)
    # intersection and product against brute-force element enumeration
    rng = random.Random(20260826)
    pairs = 0
    while pairs < 200:
        q = rng.choice((2, 3))
        m = rng.choice((3, 4))
        ctx = make_field(q, m)
        u = sample_grassmannian(ctx, rng.randrange(1, m), rng)
        v = sample_grassmannian(ctx, rng.randrange(1, m), rng)
        eu, ev = set(u.elements()), set(v.elements())
        assert set(intersect(u, v).elements()) == (eu & ev)
        brute = support(ctx, [ctx.mul(a, b) for a in eu for b in ev])
        assert product_space(u, v) == brute
        pairs += 1
    print("PASS 1: subspace counts and intersection/product match exhaustive "
          "enumeration (q in {2,3}, m <= 4, 200 random pairs)")


def test_acceptance_2_event_free_trials_always_decode():
    # 10^4 trials; run_trial itself raises if an event-free trial fails,
    # and we re-assert the implication here
    ctx = make_field(2, 20)
    p = LrpcParams(ctx, 12, 6, W, T)
    trials, clean, violations = 10_000, 0, 0
    for i in range(trials):
        out = run_trial(p, "exact_rank_t", i, 2_026_02)
        if not (out.event_a or out.event_b or out.event_c or out.rank_n_deficient):
            clean += 1
            if not out.decode_correct:
                violations += 1
    assert violations == 0
    assert clean > 0
    print(f"PASS 2: round trip at (q=2,m=20,n=12,k=6,w=2,t=2): {clean}/{trials} "
          f"event-free trials, 0 decode violations")


def test_acceptance_3_span_probability_is_an_equality_given_full_product_dim():
    # empirical syndrome-span failure rate, conditioned on dim E.W = tw,
    # must bracket the exact rational 57079/262144
    ctx = make_field(2, 20)
    p = LrpcParams(ctx, 12, 6, W, T)
    trials = 100_000
    rep = run_simulation(p, "exact_rank_t", trials, 57_079)
    num = rep.counts["event_a_conditional"]
    den = rep.counts["full_product_dim"]
    lo, hi = clopper_pearson(num, den, 0.01)
    exact = span_bound(2, 12, 6, T, W).exact
    assert exact == Fraction(57079, 262144)
    assert lo <= float(exact) <= hi, (num, den, lo, hi)
    print(f"PASS 3: conditional span-failure rate {num}/{den} = {num / den:.6f}; "
          f"99% CI [{lo:.6f}, {hi:.6f}] contains 57079/262144 = {float(exact):.6f}")


def test_acceptance_4_bounds_dominate_event_rates_on_grid():
    trials = 100_000
    lines = []
    for m, n, k in GRID:
        ctx = make_field(2, m)
        p = LrpcParams(ctx, n, k, W, T)
        rep = run_simulation(p, "exact_rank_t", trials, 40_000 + m * 100 + n)
        checks = [
            ("event_b|ok", rep.counts["event_b_conditional"],
             rep.counts["conditional_denominator"],
             float(intersection_bound(2, m, T, W).exact)),
            ("event_c", rep.counts["event_c"], trials,
             float(product_dim_bound(2, m, T, W).exact)),
            ("dfr", rep.counts["dfr"], trials,
             float(total_bound(2, m, n, k, T, W)[2].exact)),
        ]
        for label, cnt, den, bound in checks:
            lo = clopper_pearson(cnt, den, 0.01)[0]
            assert lo <= bound, (m, n, k, label, cnt, den, lo, bound)
            lines.append(f"(m={m},n={n},k={k}) {label}={cnt}/{den} lcl={lo:.2e} <= {bound:.2e}")
    print("PASS 4: 99% lower confidence limits below the exact bounds at all "
          f"{len(GRID)} grid points:\n  " + "\n  ".join(lines))


def test_acceptance_5_simplified_span_sandwich_exact():
    points = 0
    for q in (2, 3):
        for tw in range(1, 9):
            for nk in range(tw, 31):
                if tw * qpow(q, -nk + tw) > 1:
                    continue
                # span_bound only depends on n-k and tw
                t_exact = span_bound(q, nk + 1, 1, tw, 1).raw
                upper, gap = span_bound_simplified(q, nk + 1, 1, tw, 1)
                diff = upper.raw - t_exact
                assert 0 <= diff <= gap.raw, (q, tw, nk)
                points += 1
    assert points > 300
    print(f"PASS 5: exact sandwich 0 <= upper - T <= gap on {points} grid points")


def test_acceptance_6_vanishing_combination_bound_dominates_oracle():
    lines = []
    for q, m, t, r, d in [(2, 8, 2, 2, 1), (2, 10, 2, 3, 2)]:
        rep = lemma_oracle(q, m, t, r, d, trials=10_000, seed=661_000 + m)
        assert rep.dominated, (q, m, t, r, d, rep.hits, float(rep.bound.exact))
        lines.append(
            f"(q={q},m={m},t={t},r={r},d={d}) hits={rep.hits}/10000 "
            f"lcl={rep.interval()[0]:.4f} <= bound={float(rep.bound.exact):.4f}"
        )
    print("PASS 6: exhaustive-scan oracle dominated by the exact bound:\n  "
          + "\n  ".join(lines))


def test_acceptance_7_syndrome_coordinates_uniform():
    points = [
        (20, 12, 6, 2, 2),
        (24, 16, 4, 2, 2),
        (16, 8, 2, 2, 1),
    ]
    lines = []
    for m, n, k, w, t in points:
        ctx = make_field(2, m)
        p = LrpcParams(ctx, n, k, w, t)
        rep = syndrome_uniformity_test(p, 100_000, 770_000 + m, alpha=0.01)
        assert rep.passed, (m, n, k, rep.coordinate_pvalues)
        lines.append(
            f"(m={m},n={n},k={k},w={w},t={t}) used={rep.trials_used} "
            f"min p={min(rep.coordinate_pvalues):.4f}"
        )
    print("PASS 7: per-coordinate chi-square uniform at alpha=0.01 on 3 points, "
          "10^5 trials each:\n  " + "\n  ".join(lines))


def test_acceptance_8_new_bounds_strictly_tighter_than_legacy():
    for m, n, k in GRID:
        leg = legacy_bounds(2, m, n, k, T, W)
        assert span_bound(2, n, k, T, W).exact < leg["legacy_span"].exact
        assert intersection_bound(2, m, T, W).exact < leg["legacy_intersection_a"].exact
        assert product_dim_bound(2, m, T, W).exact < leg["legacy_product_dim"].exact
    print(f"PASS 8: exact rational strict improvement over the prior bounds on "
          f"all {len(GRID)} grid points")


def test_acceptance_9_csv_rows_identical_across_parallelism(tmp_path, capsys):
    args = ["simulate", "--n", "16", "--k", "4", "--trials", "2000", "--seed", "9"]
    p1 = tmp_path / "serial.csv"
    p8 = tmp_path / "parallel.csv"
    assert cli_main(args + ["--parallelism", "1", "--csv", str(p1)]) == 0
    assert cli_main(args + ["--parallelism", "8", "--csv", str(p8)]) == 0
    capsys.readouterr()
    assert p1.read_bytes() == p8.read_bytes()
    rows = list(csv.reader(p1.open()))
    assert len(rows) == 2
    print("PASS 9: CSV rows byte-identical for parallelism 1 and 8 (seed 9, 2000 trials)")
