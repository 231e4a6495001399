"""Acceptance gate: one group of tests per criterion.

Runs at full scale by default (10^6 trials or juries where the criterion
asks for it).  Set JURYLAB_ACCEPTANCE=fast for the reduced profile.
The terminal summary prints one PASS/FAIL line per criterion.
"""
import itertools
import os
from fractions import Fraction

import numpy as np
import pytest

from jurylab import trio, verify
from jurylab.cli import boundary_data, main
from jurylab.deliberation import condorcet_fis_check, find_fis_counterexample, fis_failures, single_vote_correct_prob
from jurylab.duo import DuoSetting, duo_reliability
from jurylab.orderings import ado, anti_seniority, custom, seniority
from jurylab.simulation import (
    SimConfig,
    ado_improvement_study,
    block_rng,
    compare_orderings,
    deliberation_order_study,
    estimate_reliability,
    exhaustive_order_search,
    last_two_swap_study,
    paired_difference_se,
    recheck_ado_deltas,
)

from oracles import exact_reliability

FAST = os.environ.get("JURYLAB_ACCEPTANCE", "").lower() == "fast"
MILLION = 100_000 if FAST else 1_000_000
SEED = 20240601
Q = trio.reliability_sequential


def criterion(number, title):
    return pytest.mark.criterion(number, title)


# --- 1: exact closed-form values ---------------------------------------------


@criterion(1, "exact closed-form values")
@pytest.mark.parametrize("t,exact", [
    ((Fraction(1, 4), Fraction(1, 8), Fraction(1, 2)), Fraction(9, 16)),
    ((Fraction(0), Fraction(1, 8), Fraction(1, 2)), Fraction(593, 1024)),
    ((Fraction(1, 10), Fraction(1, 20), Fraction(9, 10)), Fraction(21, 40)),
])
def test_c1_rational_values(t, exact):
    assert exact_reliability(*t) == exact
    assert abs(Q(*map(float, t)) - float(exact)) <= 1e-9


@criterion(1, "exact closed-form values")
def test_c1_large_loss_example():
    t = (0.0, 1 / 20, 9 / 10)
    exact = exact_reliability(0, Fraction(1, 20), Fraction(9, 10))
    assert abs(Q(*t) - float(exact)) <= 1e-9
    # quoted to three places in the source; the exact value is 7129/11520 = 0.6188368...
    assert abs(Q(*t) - 0.619) <= 5e-4
    assert abs(Q(*t) - 0.61883) <= 1e-5
    assert Q(*t) - Q(0.1, 1 / 20, 9 / 10) > 0.09


@criterion(1, "exact closed-form values")
def test_c1_abler_first_juror_hurts():
    hi = Q(0.0, 24 / 25, 15 / 16)
    lo = Q(1 / 100, 24 / 25, 15 / 16)
    assert abs(hi - 0.76791) <= 1e-5
    # exact value 0.7678648 sits 5e-6 below the quoted 0.76787
    assert abs(lo - 0.76787) <= 1e-5
    assert hi - lo > 0


# --- 2: optimal order on the 0.05 grid ---------------------------------------


@criterion(2, "optimal seating sweep: (b,c,a) strict argmax")
def test_c2_optimal_order_sweep():
    grid = np.round(np.arange(0.05, 1.0001, 0.05), 12)
    triples = list(itertools.combinations(grid, 3))
    assert len(triples) == 1140
    worst = np.inf
    for a, b, c in triples:
        best = Q(b, c, a)
        others = [Q(*p) for p in itertools.permutations((a, b, c)) if p != (b, c, a)]
        worst = min(worst, best - max(others))
    assert worst > 1e-12
    assert verify.run_check("thm2-optimal-order", 0.05).passed


# --- 3: Monte Carlo against the closed form ---------------------------------


@criterion(3, "Monte Carlo vs closed form, |Q_hat - Q| <= 0.002")
def test_c3_monte_carlo_oracle():
    count = 100 if FAST else 500
    triples = block_rng(SEED, 3).random((count, 3))
    worst = 0.0
    for j, t in enumerate(triples):
        est = estimate_reliability(tuple(t), SimConfig(trials=MILLION, seed=SEED + j, nature="symmetric"))
        worst = max(worst, abs(est.estimate - Q(*t)))
    assert worst <= 0.002 * (3 if FAST else 1)


# --- 4 and 7: paired ordering comparisons -------------------------------------


@criterion(4, "AO vs SO: R within 1pp of (58, 59, 60, 61)%")
@pytest.mark.parametrize("size,target", [(5, 58), (7, 59), (9, 60), (11, 61)])
def test_c4_ao_versus_so(size, target):
    tab = compare_orderings(size, MILLION, ("AO", "SO"), SimConfig(seed=SEED))
    assert tab.juries == MILLION
    assert abs(100 * tab.R - target) <= (2.0 if FAST else 1.0)


@criterion(7, "ADO vs SO: R within 1pp of (53, 53, 54, 55)%")
@pytest.mark.parametrize("size,target", [(5, 53), (7, 53), (9, 54), (11, 55)])
def test_c7_ado_versus_so(size, target):
    # R is the share of split verdicts won by the second rule; ADO goes second
    tab = compare_orderings(size, MILLION, ("SO", "ADO"), SimConfig(seed=SEED))
    assert abs(100 * tab.R - target) <= (2.0 if FAST else 1.0)


# --- 5: five-juror table -----------------------------------------------------

FIVE = (0.1, 0.3, 0.5, 0.7, 0.9)
TOP_NINE = [(5, 7, 9, 3, 1), (7, 5, 9, 3, 1), (1, 7, 9, 5, 3), (7, 3, 9, 5, 1), (7, 9, 1, 5, 3),
            (5, 9, 7, 3, 1), (7, 9, 5, 3, 1), (7, 9, 3, 5, 1), (7, 1, 9, 5, 3)]


@criterion(5, "five-juror reliabilities and top orderings")
@pytest.mark.parametrize("ordering,target", [
    (ado(FIVE), 0.770), (seniority(FIVE), 0.755),
    # two independent simulators agree on 0.704 for ascending order; the quoted 0.715 does not reproduce
    pytest.param(anti_seniority(FIVE), 0.715, marks=pytest.mark.xfail(
        strict=True, reason="quoted ascending-order reliability is about 1pp above the model value 0.704")),
    (custom((0.5, 0.3, 0.1, 0.9, 0.7)), 0.642),
])
def test_c5_named_orderings(ordering, target):
    est = estimate_reliability(ordering, SimConfig(trials=MILLION, seed=SEED))
    assert abs(est.estimate - target) <= (0.006 if FAST else 0.003)


@criterion(5, "five-juror reliabilities and top orderings")
def test_c5_constrained_search():
    ranked = exhaustive_order_search(FIVE, MILLION, True, SimConfig(seed=SEED))
    assert len(ranked) == 60
    above = {tuple(int(round(10 * a)) for a in r.abilities) for r in ranked if r.estimate > 0.76}
    assert len(above & set(TOP_NINE)) >= 8
    assert tuple(int(round(10 * a)) for a in ranked[0].abilities) == (5, 7, 9, 3, 1)


# --- 6: ADO improvement over random seven-juror juries --------------------------


@criterion(6, "ADO study: mean delta in [0.030, 0.044], negatives vanish at 10^6 trials")
def test_c6_ado_study():
    cfg = SimConfig(seed=SEED)
    study = ado_improvement_study(7, 500, 10_000, cfg)
    assert 0.030 <= study.mean <= 0.044
    counts, edges = study.histogram()
    assert counts.sum() == 500
    rechecked = recheck_ado_deltas(study, -0.001, MILLION, cfg)
    assert all(d >= 0 for d in rechecked.values()), rechecked


# --- 8: simultaneous versus sequential on the b = 1/2 slice ---------------------


@criterion(8, "b = 1/2 slice: index rectangles and separating polyline")
def test_c8_boundary_slice():
    b = 0.5
    grid, polyline, rects = boundary_data(b, 0.01)
    for a, c, d, _ in grid:
        idx = trio.indices(a, b, c)
        if idx.homogeneity >= 6 / 7:
            assert d <= 1e-12
        if idx.heterogeneity >= 4 / 3:
            assert d >= -1e-12
    (h_a0, h_a1, h_c0, h_c1) = rects["rect-homogeneous"]
    (t_a0, t_a1, t_c0, t_c1) = rects["rect-heterogeneous"]
    assert polyline
    for a, c, d in polyline:
        assert abs(d) <= 1e-10
        assert not (h_a0 < a < h_a1 and h_c0 < c < h_c1)
        assert not (t_a0 < a < t_a1 and t_c0 < c < t_c1)
    # the polyline runs between the rectangles: below-left of one corner, above-right of the other
    assert all(a >= t_a1 or c <= t_c0 for a, c, _ in polyline)
    assert all(a <= h_a0 or c >= h_c1 for a, c, _ in polyline)
    for cid in ("thm5-homogeneous", "thm5-heterogeneous"):
        assert verify.run_check(cid, "fast", seed=SEED).passed


# --- 9: strategic voting --------------------------------------------------------


@criterion(9, "strategic optimum equals honest (mu >= 7/4) and simultaneous (equal)")
def test_c9_strategic():
    rng = block_rng(SEED, 9)
    triples = []
    while len(triples) < 200:
        lo, mid, hi = np.sort(rng.random(3))
        if mid > 0 and trio.indices(lo, mid, hi).heterogeneity >= 7 / 4:
            triples.append((lo, mid, hi))
    for t in triples:
        order = trio.optimal_order(t)
        value, _ = trio.optimize_strategic(0.5, *order)
        assert value - Q(*order) <= 1e-6
    for a in np.linspace(0.0, 1.0, 50):
        value, _ = trio.optimize_strategic(0.5, a, a, a)
        assert value - trio.reliability_simultaneous(0.5, a, a, a) <= 1e-6


# --- 10: diversity ----------------------------------------------------------------


@criterion(10, "diversity: strictly increasing in mu, parametrization consistent")
def test_c10_diversity():
    for m in np.round(np.arange(0.1, 0.95, 0.1), 12):
        mus = np.arange(1.0, min(trio.max_valid_mu(m), 10.0) + 1e-12, 0.01)
        vals = trio.diversity_reliability(np.full(mus.shape, m), mus)
        assert np.all(np.diff(vals) > 0), m
        a, b, c = trio.appendix.mean_ability_parametrization(m, mus)
        assert np.max(np.abs(vals - Q(b, c, a))) <= 1e-9


# --- 11: unanimity duo and the last two seats --------------------------------------


@criterion(11, "duo seniority dominance and n=5 last-two swap")
def test_c11_duo_grid():
    grid = np.round(np.arange(0.0, 1.0001, 0.05), 12)
    violations = sum(
        duo_reliability(DuoSetting(th, c, b)) < duo_reliability(DuoSetting(th, b, c)) - 1e-12
        for th in grid for b, c in itertools.combinations(grid, 2)
    )
    assert violations == 0


@criterion(11, "duo seniority dominance and n=5 last-two swap")
def test_c11_last_two_swap():
    rows = last_two_swap_study(5, 100, MILLION, SimConfig(seed=SEED))
    assert len(rows) == 100
    assert all(delta >= -3 * se for _, delta, se in rows)


# --- 12: deliberation -------------------------------------------------------------


@criterion(12, "single-vote monotonicity and n=3 deliberation seniority")
def test_c12_single_vote_monotone():
    grid = np.round(np.arange(0.0, 1.0001, 0.01), 12)
    T, A = np.meshgrid(grid, grid, indexing="ij")
    assert np.all(np.diff(single_vote_correct_prob(T, A), axis=1) >= -1e-12)


@criterion(12, "single-vote monotonicity and n=3 deliberation seniority")
@pytest.mark.xfail(not FAST, strict=True, reason=(
    "seniority is not always best for verdict correctness: (median, high, low) wins for some "
    "triples by several sigma, confirmed by quadrature in test_deliberation"))
def test_c12_deliberation_seniority():
    triples = block_rng(SEED, 12).random((50, 3))
    for j, abil in enumerate(triples):
        perms, correct, disc = deliberation_order_study(abil, MILLION, SEED, key=j)
        so = next(i for i, p in enumerate(perms) if list(p) == list(np.argsort(-abil)))
        for i in range(len(perms)):
            delta = (int(correct[so]) - int(correct[i])) / MILLION
            se = paired_difference_se(int(disc[so, i]), int(disc[i, so]), MILLION)
            assert delta >= -3 * se


# --- 13: binary warm-up -------------------------------------------------------------


@criterion(13, "FIS reached iff the strongest juror votes second")
def test_c13_full_information():
    grid = np.round(np.arange(0.5, 1.0001, 0.02), 12)
    for p, q, r in itertools.combinations_with_replacement(grid, 3):
        assert condorcet_fis_check(p, q, r, 2)
    for position in (1, 3):
        p, q, r, sigs = find_fis_counterexample(position, 0.02)
        assert p <= q <= r and sigs in fis_failures(p, q, r, position)


# --- 14: appendix sign conditions ----------------------------------------------------

APPENDIX_CHECKS = [
    "f1-positive", "f2-positive", "f3-positive", "end-voters-mid-case", "f4-positive", "f5-positive",
    "h1-nonneg", "h2-nonneg", "neg-h1-nonneg", "h-split-identity", "h1-identity",
    "omega-nonneg", "omega-d0-nonneg", "omega-identity",
    "w-increasing", "qbar1-increasing", "qbar2-increasing", "v-positive",
]


@criterion(14, "appendix sign conditions at 10^5 constrained points")
@pytest.mark.parametrize("cid", APPENDIX_CHECKS)
def test_c14_appendix(cid):
    rep = verify.run_check(cid, verify.Resolution(points=100_000), seed=SEED)
    assert rep.points_tested >= 100_000
    assert rep.violations == 0, rep.to_dict()


# --- 15: determinism across thread counts ---------------------------------------------


@criterion(15, "identical counts across thread counts")
@pytest.mark.parametrize("argv", [
    ["simulate", "--abilities", "0.1,0.3,0.5,0.7,0.9", "--ordering", "ADO", "--trials", "300000"],
    ["compare", "--sizes", "5,7", "--juries", "200000", "--pair", "SO:ADO"],
])
def test_c15_thread_determinism(argv, capsys, monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
    outputs = []
    for threads in ("1", "4"):
        assert main([*argv, "--seed", "7", "--threads", threads]) == 0
        text = capsys.readouterr().out
        outputs.append([ln for ln in text.split("\r\n") if not ln.startswith("#")])
    assert outputs[0] == outputs[1]
