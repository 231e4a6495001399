import numpy as np
from hypothesis import assume, given, settings, strategies as st

from jurylab.deliberation import SignalAbilityPair, full_info_posterior, single_vote_correct_prob
from jurylab.signal_model import Nature
from jurylab.simulation import vote_sequence
from jurylab.trio import (
    History,
    Region,
    StrategicProfile,
    classify_region,
    indices,
    reliability_sequential,
    reliability_simultaneous,
    reliability_strategic,
    second_threshold,
    third_threshold,
)

unit = st.floats(0.0, 1.0)
signal = st.floats(-1.0, 1.0)
TOL = 1e-12


@given(a=unit, b=unit, c=unit)
def test_region_matches_saturation(a, b, c):
    region = classify_region((a, b, c))
    assert (region is Region.H2) == (second_threshold(a, b, Nature.A) == -1.0)
    if region is not Region.H2:
        assert (region is Region.H3) == (third_threshold((a, b, c), History.AB) == 1.0)


@given(a=unit, b=unit, c=unit)
def test_reliability_bounds(a, b, c):
    assert 0.5 - TOL <= reliability_sequential(a, b, c) <= 1.0 + TOL


@given(a=unit, b=unit, c=unit)
def test_weaker_juror_first_of_the_pair(a, b, c):
    lo, hi = sorted((a, b))
    assert reliability_sequential(lo, hi, c) >= reliability_sequential(hi, lo, c) - TOL


@given(a=unit, b=unit, c=unit)
def test_median_high_low_beats_low_high_median(a, b, c):
    lo, hi = sorted((a, b))
    assert reliability_sequential(hi, c, lo) >= reliability_sequential(lo, c, hi) - TOL


@given(a=unit, b1=unit, b2=unit, c1=unit, c2=unit)
def test_monotone_in_later_jurors(a, b1, b2, c1, c2):
    b_lo, b_hi = sorted((b1, b2))
    c_lo, c_hi = sorted((c1, c2))
    assert reliability_sequential(a, b_hi, c1) >= reliability_sequential(a, b_lo, c1) - TOL
    assert reliability_sequential(a, b1, c_hi) >= reliability_sequential(a, b1, c_lo) - TOL


@given(a=unit, b=unit, c=unit)
def test_homogeneous_jury_prefers_simultaneous(a, b, c):
    lo, mid, hi = sorted((a, b, c))
    assume(mid > 0)
    idx = indices(lo, mid, hi)
    if idx.homogeneity >= 6 / 7:
        assert reliability_simultaneous(0.5, lo, mid, hi) >= reliability_sequential(mid, hi, lo) - TOL
    if idx.heterogeneity >= 4 / 3:
        assert reliability_sequential(mid, hi, lo) >= reliability_simultaneous(0.5, lo, mid, hi) - TOL


@given(a=unit, b=unit, c=unit, t=st.lists(signal, min_size=5, max_size=5))
def test_strategic_mirror(a, b, c, t):
    prof = StrategicProfile(*t)
    assert abs(reliability_strategic(0.5, a, b, c, prof) - reliability_strategic(0.5, a, b, c, prof.mirrored())) <= 1e-14


@given(theta=st.floats(0.01, 0.99), pairs=st.lists(st.tuples(signal, unit), min_size=1, max_size=6), data=st.data())
def test_full_info_posterior_permutation_invariant(theta, pairs, data):
    perm = data.draw(st.permutations(pairs))
    p1 = full_info_posterior(theta, [SignalAbilityPair(s, a) for s, a in pairs])
    p2 = full_info_posterior(theta, [SignalAbilityPair(s, a) for s, a in perm])
    assert abs(p1 - p2) <= 1e-12


@given(theta=unit, sigs=st.lists(signal, min_size=1, max_size=6))
def test_useless_jurors_leave_prior(theta, sigs):
    assert full_info_posterior(theta, [SignalAbilityPair(s, 0.0) for s in sigs]) == theta


@given(theta=unit, a1=unit, a2=unit)
def test_single_vote_monotone(theta, a1, a2):
    lo, hi = sorted((a1, a2))
    assert single_vote_correct_prob(theta, hi) >= single_vote_correct_prob(theta, lo) - 1e-12


@settings(max_examples=200)
@given(st.integers(1, 4).flatmap(lambda m: st.tuples(
    st.lists(unit, min_size=2 * m + 1, max_size=2 * m + 1),
    st.lists(signal, min_size=2 * m + 1, max_size=2 * m + 1))))
def test_verdict_fixed_once_clinched(case):
    abil, sigs = case
    t = vote_sequence(abil, sigs)
    n = len(abil)
    head = t.votes[: t.decided_at + 1]
    assert head.count(t.verdict) == n // 2 + 1
    assert (2 * t.votes.count(Nature.A) > n) == (t.verdict is Nature.A)
    assert np.isclose(t.beliefs[0], 0.5)
