import itertools

import numpy as np
import pytest
from scipy.integrate import quad

from jurylab.deliberation import (
    SignalAbilityPair,
    condorcet_fis_check,
    condorcet_pbar,
    correct_vote_mass,
    deliberation_votes,
    deliberation_votes_batch,
    find_fis_counterexample,
    fis_failures,
    full_info_posterior,
    full_info_posterior_closed_form,
    single_vote_correct_prob,
)
from jurylab.errors import ContractError, DomainError
from jurylab.signal_model import Nature, honest_threshold
from jurylab.trio import reliability_sequential

from jurylab.simulation import deliberation_order_study, paired_difference_se

from oracles import deliberation_majority_quadrature, f_density, g_density

A, B = Nature.A, Nature.B


def _pairs(rng, n):
    return [SignalAbilityPair(float(s), float(a)) for s, a in zip(rng.uniform(-1, 1, n), rng.random(n))]


def test_posterior_examples():
    assert full_info_posterior(0.5, []) == 0.5
    assert full_info_posterior(0.5, [SignalAbilityPair(0.4, 0.7)]) == pytest.approx((0.28 + 1) / 2)
    cancel = [SignalAbilityPair(0.5, 0.8), SignalAbilityPair(-0.5, 0.8)]
    assert full_info_posterior(0.5, cancel) == pytest.approx(0.5, abs=1e-15)
    assert full_info_posterior_closed_form(0.5, cancel) == pytest.approx(0.5, abs=1e-15)


def test_posterior_matches_likelihood_product():
    rng = np.random.default_rng(41)
    for n in range(1, 8):
        for _ in range(20):
            th = rng.random()
            pairs = _pairs(rng, n)
            la = np.prod([f_density(p.a, p.s) for p in pairs])
            lb = np.prod([g_density(p.a, p.s) for p in pairs])
            expected = th * la / (th * la + (1 - th) * lb)
            assert full_info_posterior(th, pairs) == pytest.approx(expected, abs=1e-13)
            assert full_info_posterior_closed_form(th, pairs) == pytest.approx(expected, abs=1e-12)


def test_posterior_permutation_invariant():
    rng = np.random.default_rng(42)
    pairs = _pairs(rng, 5)
    base = full_info_posterior(0.37, pairs)
    for perm in itertools.permutations(pairs):
        assert full_info_posterior(0.37, perm) == pytest.approx(base, abs=1e-14)


def test_posterior_useless_jurors():
    pairs = [SignalAbilityPair(s, 0.0) for s in (0.3, -0.9, 1.0)]
    assert full_info_posterior(0.42, pairs) == pytest.approx(0.42, abs=1e-15)


def test_last_vote_order_invariant():
    rng = np.random.default_rng(43)
    for _ in range(50):
        abil, sig = rng.random(5), rng.uniform(-1, 1, 5)
        last = {deliberation_votes(abil[list(p)], sig[list(p)])[-1] for p in itertools.permutations(range(5))}
        assert len(last) == 1


def test_single_juror_votes_sign():
    assert deliberation_votes([0.6], [0.2]) == [A]
    assert deliberation_votes([0.6], [-0.2]) == [B]
    assert deliberation_votes([0.6], [0.0]) == [A]


def test_deliberation_length_mismatch():
    with pytest.raises(ContractError):
        deliberation_votes([0.1, 0.2], [0.3])


def test_batch_matches_scalar():
    rng = np.random.default_rng(44)
    abil, sig = rng.random(5), rng.uniform(-1, 1, (200, 5))
    batch = deliberation_votes_batch(abil, sig)
    for row, s in zip(batch, sig):
        assert [A if v else B for v in row] == deliberation_votes(abil, s)


@pytest.mark.parametrize("a", [0.0, 0.2, 0.5, 1.0])
def test_single_vote_even_prior(a):
    assert single_vote_correct_prob(0.5, a) == pytest.approx(0.5 + a / 4, abs=1e-15)


def test_single_vote_herding():
    assert single_vote_correct_prob(0.9, 0.5) == pytest.approx(0.9)
    assert single_vote_correct_prob(0.1, 0.5) == pytest.approx(0.9)


def test_single_vote_matches_quadrature():
    for theta, a in [(0.6, 0.8), (0.3, 0.9), (0.55, 0.2), (0.45, 0.6)]:
        tau = honest_threshold(theta, a)
        right_a = quad(lambda s: f_density(a, s), tau, 1)[0]
        right_b = quad(lambda s: g_density(a, s), -1, tau)[0]
        assert single_vote_correct_prob(theta, a) == pytest.approx(theta * right_a + (1 - theta) * right_b, abs=1e-13)
        assert correct_vote_mass(theta, a) == pytest.approx(right_a + right_b, abs=1e-13)
    assert single_vote_correct_prob(0.6, 0.8) == pytest.approx(0.7125, abs=1e-15)


def test_single_vote_continuous_at_herding_edge():
    for theta in (0.6, 0.75, 0.9):
        edge = 2 * theta - 1
        assert single_vote_correct_prob(theta, edge + 1e-9) == pytest.approx(theta, abs=1e-8)


def test_single_vote_nondecreasing():
    grid = np.round(np.arange(0, 1.0001, 0.01), 10)
    T, Aa = np.meshgrid(grid, grid, indexing="ij")
    vals = single_vote_correct_prob(T, Aa)
    assert np.all(np.diff(vals, axis=1) >= -1e-12)


def test_pbar_examples():
    assert condorcet_pbar(0.5, 0.5) == pytest.approx(0.5)
    assert condorcet_pbar(0.6, 0.6) == pytest.approx(0.36 / 0.52)
    assert condorcet_pbar(0.9, 0.9) == pytest.approx(0.81 / 0.82)
    with pytest.raises(DomainError):
        condorcet_pbar(1.0, 0.0)


def test_pbar_is_bayes_indifference():
    rng = np.random.default_rng(45)
    for p, q in rng.uniform(0.5, 0.99, (50, 2)):
        r = condorcet_pbar(p, q)
        # signals p, q say A and r says B: posterior of A is exactly 1/2 at r = pbar
        la = p * q * (1 - r)
        lb = (1 - p) * (1 - q) * r
        assert la == pytest.approx(lb, rel=1e-12)


def test_fis_strongest_second():
    assert condorcet_fis_check(0.6, 0.7, 0.8, 2)
    assert condorcet_fis_check(0.6, 0.7, 0.8, 2, weaker_first=False)


def test_fis_strongest_first_cascades():
    r = 0.5 * (0.6 + condorcet_pbar(0.55, 0.6))
    assert not condorcet_fis_check(0.55, 0.6, r, 1)
    bad = fis_failures(0.55, 0.6, r, 1)
    # the two weaker signals jointly outweigh r but both follow its vote
    assert (A, B, B) in bad and (B, A, A) in bad


def test_fis_strongest_last_outvoted():
    r = 0.5 * (condorcet_pbar(0.6, 0.7) + 1)
    bad = fis_failures(0.6, 0.7, r, 3)
    assert (A, A, B) in bad and (B, B, A) in bad


def test_fis_counterexamples_exist():
    for pos in (1, 3):
        found = find_fis_counterexample(pos)
        assert found is not None
        p, q, r, sigs = found
        assert sigs in fis_failures(p, q, r, pos)
    assert find_fis_counterexample(2, step=0.05) is None


def test_fis_contract():
    with pytest.raises(ContractError):
        condorcet_fis_check(0.8, 0.7, 0.6, 2)
    with pytest.raises(ContractError):
        condorcet_fis_check(0.6, 0.7, 0.8, 4)
    with pytest.raises(DomainError):
        condorcet_fis_check(0.4, 0.7, 0.8, 2)


def test_boffin_regime_exact_ranking():
    abil = (0.01, 0.02, 0.99)
    scores = {p: reliability_sequential(*p) for p in itertools.permutations(abil)}
    best = max(scores, key=scores.get)
    assert best == (0.02, 0.99, 0.01)
    assert all(scores[best] > v for p, v in scores.items() if p != best)


def test_deliberation_engine_matches_quadrature():
    abil = np.array([0.65, 0.45, 0.4])
    perms, correct, _ = deliberation_order_study(abil, 400_000, seed=46)
    for p, c in zip(perms, correct):
        rate = c / 400_000
        exact = deliberation_majority_quadrature(abil[p], 300)
        assert abs(rate - exact) <= 3 * np.sqrt(rate * (1 - rate) / 400_000) + 1e-4


def test_seniority_is_not_always_best_for_deliberation():
    # swapping the first two seats changes only the first vote, yet the
    # weaker juror opening is better here by about 0.0012
    senior = deliberation_majority_quadrature((0.65, 0.45, 0.4), 400)
    swapped = deliberation_majority_quadrature((0.45, 0.65, 0.4), 400)
    assert swapped - senior > 5e-4
    perms, correct, disc = deliberation_order_study((0.65, 0.45, 0.4), 1_000_000, seed=47)
    so = next(i for i, p in enumerate(perms) if list(p) == [0, 1, 2])
    sw = next(i for i, p in enumerate(perms) if list(p) == [1, 0, 2])
    delta = (int(correct[sw]) - int(correct[so])) / 1_000_000
    assert delta > 3 * paired_difference_se(int(disc[sw, so]), int(disc[so, sw]), 1_000_000)
