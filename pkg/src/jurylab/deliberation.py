"""Full-information voting and the binary-signal warm-up model.

Sequential deliberation: every juror reveals their signal along with their
vote, so juror m votes on the posterior given the first m signal/ability
pairs.  The binary model is Condorcet's: juror signals are correct with
probability p in [1/2, 1].
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ContractError, DomainError
from .signal_model import Nature, cdf_a, cdf_b, honest_threshold, posterior_from_signal


@dataclass(frozen=True)
class SignalAbilityPair:
    s: float
    a: float


def full_info_posterior(theta: float, pairs: Iterable[SignalAbilityPair]) -> float:
    """Posterior of A given every revealed (signal, ability) pair.

    Computed by repeated single-signal Bayes updates.
    """
    post = theta
    for pair in pairs:
        post = posterior_from_signal(post, pair.a, pair.s)
    return float(post)


def full_info_posterior_closed_form(theta: float, pairs: Sequence[SignalAbilityPair]) -> float:
    """Same posterior via elementary symmetric sums of pi_i = s_i * a_i.

    Kept as an independent oracle for ``full_info_posterior``.
    """
    pis = [p.s * p.a for p in pairs]
    # e[k] = k-th elementary symmetric polynomial of pis
    e = [1.0] + [0.0] * len(pis)
    for x in pis:
        for k in range(len(e) - 1, 0, -1):
            e[k] += e[k - 1] * x
    den = 1.0 + sum((2 * theta - 1) ** (m % 2) * e[m] for m in range(1, len(pis) + 1))
    return theta * float(np.prod([1 + x for x in pis])) / den


def deliberation_votes(abilities: Sequence[float], signals: Sequence[float], theta0: float = 0.5) -> list[Nature]:
    if len(abilities) != len(signals):
        raise ContractError("need one signal per juror")
    votes = []
    post = theta0
    for a, s in zip(abilities, signals):
        post = posterior_from_signal(post, a, s)
        votes.append(Nature.A if post >= 0.5 else Nature.B)
    return votes


def deliberation_votes_batch(abilities, signals, theta0: float = 0.5) -> np.ndarray:
    """Vectorized deliberation: boolean (trials, n) array, True where the vote is A.

    ``abilities`` is (n,) or (trials, n); ``signals`` is (trials, n).
    """
    signals = np.asarray(signals, dtype=float)
    abilities = np.broadcast_to(np.asarray(abilities, dtype=float), signals.shape)
    post = np.full(signals.shape[0], float(theta0))
    out = np.empty(signals.shape, dtype=bool)
    for i in range(signals.shape[1]):
        post = posterior_from_signal(post, abilities[:, i], signals[:, i])
        out[:, i] = post >= 0.5
    return out


def single_vote_correct_prob(theta, a):
    """Probability that one honest juror with prior ``theta`` votes for the true state.

    Weighted by the prior: theta * Pr(s >= tau | A) + (1 - theta) * Pr(s < tau | B).
    Equals max(theta, 1 - theta) when the juror herds.
    """
    theta = np.asarray(theta, dtype=float)
    a = np.asarray(a, dtype=float)
    tau = honest_threshold(theta, a)
    herds = np.abs(tau) == 1.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        general = (a**2 + 2 * a + 4 * theta**2 - 4 * theta + 1) / (4 * a)
    val = np.where(herds | (a == 0), np.maximum(theta, 1 - theta), general)
    return float(val) if val.ndim == 0 else val


def correct_vote_mass(theta, a):
    """Unweighted sum Pr(s >= tau | A) + Pr(s < tau | B) at the honest threshold.

    Twice the correct-vote probability at theta = 1/2; kept because the
    monotonicity argument for deliberation is phrased in terms of it.
    """
    theta = np.asarray(theta, dtype=float)
    a = np.asarray(a, dtype=float)
    tau = honest_threshold(theta, a)
    val = (1 - cdf_a(a, tau)) + cdf_b(a, tau)
    return float(val) if val.ndim == 0 else val


# --- binary signals -------------------------------------------------------


@dataclass(frozen=True)
class BinaryJuror:
    p: float

    def __post_init__(self):
        if not 0.5 <= self.p <= 1.0:
            raise DomainError(f"binary juror accuracy {self.p} outside [1/2, 1]")


def condorcet_pbar(p: float, q: float) -> float:
    """Accuracy above which one juror's signal outweighs two opposing ones."""
    den = 1 - p - q + 2 * p * q
    if den <= 0:
        raise DomainError("degenerate accuracies: 1 - p - q + 2pq must be positive")
    return p * q / den


def _signal_likelihood(acc: Sequence[float], signals: Sequence[Nature], state: Nature) -> float:
    out = 1.0
    for p, s in zip(acc, signals):
        out *= p if s is state else 1 - p
    return out


def binary_sequential_votes(acc: Sequence[float], signals: Sequence[Nature]) -> list[Nature]:
    """Honest sequential votes with binary signals and an equiprobable prior.

    Each juror conditions on the earlier votes by enumerating the earlier
    signal profiles that would have produced them under honest play.  A juror
    who is exactly indifferent votes their own signal.
    """
    return list(_BinaryJury(acc).replay(tuple(signals)))


class _BinaryJury:
    def __init__(self, acc: Sequence[float]):
        self.acc = tuple(acc)
        self._cache: dict = {}

    def replay(self, sigs: tuple) -> tuple:
        if sigs not in self._cache:
            hist: tuple = ()
            for k, s in enumerate(sigs):
                hist = hist + (self._vote(k, hist, s),)
            self._cache[sigs] = hist
        return self._cache[sigs]

    def _vote(self, k: int, history: tuple, own: Nature) -> Nature:
        w = {Nature.A: 0.0, Nature.B: 0.0}
        for earlier in itertools.product((Nature.A, Nature.B), repeat=k):
            if self.replay(earlier) != history:
                continue
            for state in (Nature.A, Nature.B):
                w[state] += _signal_likelihood(self.acc[: k + 1], (*earlier, own), state)
        if w[Nature.A] > w[Nature.B]:
            return Nature.A
        if w[Nature.B] > w[Nature.A]:
            return Nature.B
        return own


def fis_states(acc: Sequence[float], signals: Sequence[Nature]) -> set[Nature]:
    """States of maximal posterior given all signals (both on a tie)."""
    la = _signal_likelihood(acc, signals, Nature.A)
    lb = _signal_likelihood(acc, signals, Nature.B)
    if la > lb:
        return {Nature.A}
    if lb > la:
        return {Nature.B}
    return {Nature.A, Nature.B}


def _majority(votes: Sequence[Nature]) -> Nature:
    n_a = sum(v is Nature.A for v in votes)
    return Nature.A if 2 * n_a > len(votes) else Nature.B


def _arrange(p: float, q: float, r: float, position_of_r: int, weaker_first: bool = True) -> list[float]:
    if position_of_r not in (1, 2, 3):
        raise ContractError("position_of_r must be 1, 2 or 3")
    order = [p, q] if weaker_first else [q, p]
    order.insert(position_of_r - 1, r)
    return order


def fis_failures(p: float, q: float, r: float, position_of_r: int,
                 weaker_first: bool = True) -> list[tuple[Nature, ...]]:
    """Signal profiles (in voting order) whose majority verdict misses the FIS."""
    acc = _arrange(p, q, r, position_of_r, weaker_first)
    jury = _BinaryJury(acc)
    bad = []
    for sigs in itertools.product((Nature.A, Nature.B), repeat=3):
        if _signal_likelihood(acc, sigs, Nature.A) + _signal_likelihood(acc, sigs, Nature.B) == 0:
            continue  # impossible profile
        verdict = _majority(jury.replay(sigs))
        if verdict not in fis_states(acc, sigs):
            bad.append(sigs)
    return bad


def condorcet_fis_check(p: float, q: float, r: float, position_of_r: int,
                        weaker_first: bool = True) -> bool:
    """True when honest sequential voting reaches the FIS for every signal profile.

    The two weaker jurors vote in the order p then q around the strongest
    (q then p with ``weaker_first=False``).
    """
    if not p <= q <= r:
        raise ContractError("expects p <= q <= r")
    for x in (p, q, r):
        BinaryJuror(x)
    return not fis_failures(p, q, r, position_of_r, weaker_first)


def find_fis_counterexample(position_of_r: int, step: float = 0.02) -> Optional[tuple[float, float, float, tuple[Nature, ...]]]:
    """First grid triple p <= q <= r (and signal profile) where the FIS is missed."""
    grid = np.round(np.arange(0.5, 1.0 + step / 2, step), 10)
    for p, q, r in itertools.combinations_with_replacement(grid, 3):
        bad = fis_failures(float(p), float(q), float(r), position_of_r)
        if bad:
            return float(p), float(q), float(r), bad[0]
    return None
