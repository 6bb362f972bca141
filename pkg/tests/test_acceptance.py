"""Acceptance criteria, one test each, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s`` to see the lines as
they are produced; they are repeated in the terminal summary either way.
"""

import time
from functools import cache

import numpy as np

from conftest import ACCEPTANCE_LINES, FIVE_5, all_grids, report, stack_codes, valid_mask
from pointca.analysis import cover_distribution, cover_field, is_valid, p_max_formula
from pointca.harness import ExperimentSpec, compare_orders, experiment, odd_n_study
from pointca.lattice import make_rng, new_grid, parse_pattern
from pointca.oracle import max_points_exact
from pointca.rules import Pipeline
from pointca.scheduler import binom_update_pmf, run, window_codes
from pointca.tiling import hit_table, rule_a_table


def verdict(k, ok, detail, t0):
    line = f"{'PASS' if ok else 'FAIL'} criterion {k:2d}: {detail} [{time.perf_counter() - t0:.1f}s]"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


# runs shared between criteria 3-5 and the cover accounting of criterion 8


@cache
def a_runs():
    finals, bad = [], []
    for n in range(3, 13):
        for init in ("zero", "one", "random"):
            for order in ("pure_random", "random_sequence", "strict_index"):
                for seed in range(100):
                    rng = make_rng(seed)
                    tr = run(new_grid(n, init, rng), Pipeline(("A",)), order=order, rng=rng)
                    if not (tr.quiescent and is_valid(tr.final)):
                        bad.append((n, init, order, seed))
                    finals.append(tr.final)
    return finals, bad


@cache
def max_runs():
    return {n: experiment(ExperimentSpec(n=n, pipeline="ABC1C2", runs=100, t_max=2000)) for n in (4, 6, 8, 10)}


@cache
def abc1_runs():
    return experiment(ExperimentSpec(n=10, pipeline="ABC1", runs=1000, workers=4))


def test_criterion_01_strict_order_tau():
    t0 = time.perf_counter()
    got = {}
    for n, init in ((3, "one"), (4, "zero"), (4, "one")):
        got[(n, init)] = run(new_grid(n, init), Pipeline(("A",)), order="strict_index").tau_stable
    want = {(3, "one"): 8, (4, "zero"): 11, (4, "one"): 26}
    verdict(1, got == want, f"tau_stable {list(got.values())} want {list(want.values())}", t0)


def test_criterion_02_random_order_tau_averages():
    t0 = time.perf_counter()
    res = {}
    for order, target in (("random_sequence", 17.03), ("pure_random", 19.90)):
        s = experiment(ExperimentSpec(n=3, init="one", pipeline="A", order=order, runs=1000)).summary
        res[order] = (s.tau_avg, target, abs(s.tau_avg - target) <= 0.15 * target)
    ok = all(r[2] for r in res.values())
    detail = "; ".join(f"{o} tau_avg={v:.2f} target {t}+-15%" for o, (v, t, _) in res.items())
    verdict(2, ok, detail, t0)


def test_criterion_03_rule_a_validity():
    t0 = time.perf_counter()
    finals, bad = a_runs()
    grids = all_grids(4)
    fixed = (rule_a_table()[stack_codes(grids)] == grids).all(axis=(1, 2))
    same = np.array_equal(fixed, valid_mask(4))
    detail = f"{len(finals) - len(bad)}/{len(finals)} runs quiescent and valid; fixed point == valid on {len(grids)} grids: {same}"
    verdict(3, not bad and same, detail, t0)


def test_criterion_04_even_max_convergence():
    t0 = time.perf_counter()
    parts, ok = [], True
    for n, res in max_runs().items():
        hit = sum(r.quiescent and r.p_final == n * n // 4 for r in res.records)
        ok &= hit == len(res.records)
        parts.append(f"n={n} {hit}/{len(res.records)}")
    verdict(4, ok, "quiescent max patterns " + ", ".join(parts), t0)


def test_criterion_05_abc1_quality_n10():
    t0 = time.perf_counter()
    s = abc1_runs().summary
    ok = s.p_avg >= 24.2 and s.frac_at_pmax >= 0.5
    verdict(5, ok, f"{s.runs} runs p_avg={s.p_avg:.3f} (>=24.2) at 25 points {s.frac_at_pmax:.1%} (>=50%)", t0)


def test_criterion_06_oracle():
    t0 = time.perf_counter()
    got = [(n, report(n).p_max, report(n).w_max) for n in (2, 4, 6, 8)]
    want = [(2, 1, 1), (4, 4, 2), (6, 9, 2), (8, 16, 4)]
    formula = all(max_points_exact(n) == p_max_formula(n) == report(n).p_max for n in range(2, 9))
    r7 = (report(7).p_min, report(7).p_max)
    ok = got == want and formula and r7 == (7, 10)
    verdict(6, ok, f"(n, p_max, w) {got}; formula agrees n=2..8: {formula}; n=7 range {list(r7)}", t0)


def test_criterion_07_binomial():
    t0 = time.perf_counter()
    P = [binom_update_pmf(256, k) for k in range(257)]
    total = abs(sum(P) - 1.0)
    ok = 0.364 <= P[0] <= 0.371 and 0.364 <= P[1] <= 0.371 and 0.179 <= P[2] <= 0.187 and total <= 1e-12
    verdict(7, ok, f"P(0)={P[0]:.4f} P(1)={P[1]:.4f} P(2)={P[2]:.4f} |sum-1|={total:.1e}", t0)


def test_criterion_08_cover_accounting():
    t0 = time.perf_counter()
    patterns = [g for g in a_runs()[0] if is_valid(g)]
    for res in list(max_runs().values()) + [abc1_runs()]:
        patterns += [r.final for r in res.records if r.valid]
    bad = 0
    for g in patterns:
        v = cover_field(g)
        codes = window_codes(g.cells)
        if (v.sum() != 9 * g.cells.sum() or not np.array_equal(hit_table("simplified3")[codes], v)
                or not np.array_equal(hit_table("reduced3")[codes], v)):
            bad += 1
    five = str(cover_distribution(parse_pattern(FIVE_5)))
    ok = bad == 0 and five.startswith("1^{5+0} 2^{20} ")
    verdict(8, ok, f"{len(patterns) - bad}/{len(patterns)} valid patterns balanced; 5x5 gives {five}", t0)


def test_criterion_09_scaling():
    t0 = time.perf_counter()
    pure, sweep, ratio = compare_orders([6, 8, 10, 12], runs=100, t_max=2000, workers=4)
    ok = 1.0 <= sweep.b <= 1.7 and 1.2 <= ratio <= 2.0
    detail = (f"b={sweep.b:.3f} (sweep, pure {pure.b:.3f}) a={sweep.a:.4f}; slowdown {ratio:.2f}; "
              f"excluded {sum(sweep.excluded) + sum(pure.excluded)}")
    verdict(9, ok, detail, t0)


def test_criterion_10_odd_n9():
    t0 = time.perf_counter()
    res = odd_n_study(9, (400,), runs=100)
    frac = res.fraction_at_max(400)
    ok = frac >= 0.5 and res.max_seen <= p_max_formula(9)
    verdict(10, ok, f"valid 18-point pattern within T_max=400 in {frac:.0%} of 100 runs (>=50%); "
                    f"largest valid p seen {res.max_seen} <= {p_max_formula(9)}", t0)
