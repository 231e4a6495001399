"""Monte Carlo engine for honest sequential majority voting.

Randomness is counter based: trials are grouped in fixed blocks of
``BLOCK_SIZE`` and block ``k`` of a study draws from
``PCG64(SeedSequence(seed, spawn_key=(stream, ..., k)))``.  Block
boundaries never depend on the thread count, so any ``threads`` setting
gives bit-identical integer counts.
"""
from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from statistics import NormalDist
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import ContractError
from .deliberation import deliberation_votes_batch
from .orderings import JuryOrdering, OrderLabel, rank_pattern
from .signal_model import Nature, _sample_a, honest_threshold, update_after_vote
from .trio import reliability_sequential

BLOCK_SIZE = 1 << 16
Z90 = NormalDist().inv_cdf(0.95)

# spawn-key stream ids, one per kind of study
_STREAM_ESTIMATE = 1
_STREAM_COMPARE = 2
_STREAM_ADO_JURY = 3
_STREAM_ADO_TRIALS = 4
_STREAM_SEARCH = 5
_STREAM_DELIBERATION = 6
_STREAM_SWAP = 7


def default_threads() -> int:
    return max(1, int(os.environ.get("JURYLAB_THREADS", "1")))


@dataclass(frozen=True)
class SimConfig:
    trials: int = 100_000
    seed: int = 0
    threads: int = field(default_factory=default_threads)
    theta0: float = 0.5
    nature: str = "A"  # "A", "B" or "symmetric" (alternate by trial index)

    def __post_init__(self):
        if self.trials < 1:
            raise ContractError("trials must be >= 1")
        if self.nature not in ("A", "B", "symmetric"):
            raise ContractError(f"unknown nature mode {self.nature!r}")
        if not 0 <= self.seed < 2**64:
            raise ContractError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class VoteTranscript:
    votes: tuple[Nature, ...]
    beliefs: tuple[float, ...]  # prior held before each vote
    verdict: Nature
    decided_at: int  # zero-based index of the vote that clinched the majority


@dataclass(frozen=True)
class ReliabilityEstimate:
    correct: int
    trials: int

    @property
    def estimate(self) -> float:
        return self.correct / self.trials

    @property
    def half_width_90(self) -> float:
        p = self.estimate
        return Z90 * math.sqrt(p * (1 - p) / self.trials)

    @property
    def std_error(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1 - p) / self.trials)


@dataclass(frozen=True)
class ComparisonTable:
    jury_size: int
    x_order: str
    y_order: str
    n_BB: int
    n_AA: int
    n_AB: int
    n_BA: int

    @property
    def juries(self) -> int:
        return self.n_BB + self.n_AA + self.n_AB + self.n_BA

    @property
    def R(self) -> float:
        """Share of split verdicts won by the second ordering."""
        split = self.n_BA + self.n_AB
        return self.n_BA / split if split else math.nan

    @property
    def R_half_width_90(self) -> float:
        split = self.n_BA + self.n_AB
        if not split:
            return math.inf
        r = self.R
        return Z90 * math.sqrt(r * (1 - r) / split)


@dataclass
class AdoStudy:
    jury_size: int
    trials_per_jury: int
    juries: list[tuple[float, ...]]
    deltas: np.ndarray
    delta_se: np.ndarray  # paired standard error of each delta

    @property
    def mean(self) -> float:
        return float(self.deltas.mean())

    @property
    def min(self) -> float:
        return float(self.deltas.min())

    @property
    def max(self) -> float:
        return float(self.deltas.max())

    def histogram(self, width: float = 0.02) -> tuple[np.ndarray, np.ndarray]:
        lo = math.floor(self.min / width) * width
        hi = math.ceil(self.max / width) * width
        if hi <= lo:
            hi = lo + width
        edges = np.round(np.arange(lo, hi + width / 2, width), 10)
        counts, _ = np.histogram(self.deltas, bins=edges)
        return counts, edges


# --- core kernels ---------------------------------------------------------


def block_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def _blocks(total: int) -> list[tuple[int, int]]:
    return [(start, min(BLOCK_SIZE, total - start)) for start in range(0, total, BLOCK_SIZE)]


def _map_blocks(fn: Callable[[int, int, int], object], total: int, threads: int) -> list:
    jobs = [(k, start, size) for k, (start, size) in enumerate(_blocks(total))]
    if threads <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))


def draw_signals(abilities, u, nature_is_a):
    """Signals by inverse CDF; ``nature_is_a`` broadcasts against ``u`` rows."""
    a = np.broadcast_to(np.asarray(abilities, dtype=float), u.shape)
    nature_is_a = np.asarray(nature_is_a, dtype=bool)
    if nature_is_a.ndim == 0:
        return _sample_a(a, u) if nature_is_a else -_sample_a(a, 1.0 - u)
    col = nature_is_a[:, None]
    return np.where(col, _sample_a(a, u), -_sample_a(a, 1.0 - u))


def simulate_votes(abilities, signals, theta0: float = 0.5) -> np.ndarray:
    """Honest sequential votes for a batch of trials.

    ``abilities`` is (n,) for a fixed order or (trials, n) for per-trial
    orders; ``signals`` is (trials, n).  Returns a boolean array, True = A.
    """
    signals = np.asarray(signals, dtype=float)
    trials, n = signals.shape
    abilities = np.asarray(abilities, dtype=float)
    per_trial = abilities.ndim == 2
    theta = np.full(trials, float(theta0))
    votes = np.empty((trials, n), dtype=bool)
    for i in range(n):
        a = abilities[:, i] if per_trial else abilities[i]
        tau = honest_threshold(theta, a)
        v = signals[:, i] >= tau
        votes[:, i] = v
        if i < n - 1:
            theta = update_after_vote(theta, a, tau, v)
    return votes


def majority_is_a(votes: np.ndarray) -> np.ndarray:
    n = votes.shape[1]
    return 2 * votes.sum(axis=1) > n


# --- public operations ----------------------------------------------------


def vote_sequence(ordering: Union[JuryOrdering, Sequence[float]], signals: Sequence[float],
                  theta0: float = 0.5) -> VoteTranscript:
    abilities = ordering.abilities if isinstance(ordering, JuryOrdering) else tuple(ordering)
    if len(signals) != len(abilities):
        raise ContractError("need exactly one signal per juror")
    n = len(abilities)
    if n % 2 == 0:
        raise ContractError("majority verdict needs an odd jury size")
    theta = float(theta0)
    votes, beliefs = [], []
    for a, s in zip(abilities, signals):
        beliefs.append(theta)
        tau = honest_threshold(theta, a)
        v = s >= tau
        votes.append(Nature.A if v else Nature.B)
        theta = update_after_vote(theta, a, tau, v)
    need = n // 2 + 1
    tally = {Nature.A: 0, Nature.B: 0}
    decided_at = n - 1
    for i, v in enumerate(votes):
        tally[v] += 1
        if tally[v] == need:
            decided_at = i
            break
    verdict = Nature.A if tally[Nature.A] >= need else Nature.B
    return VoteTranscript(tuple(votes), tuple(beliefs), verdict, decided_at)


def _nature_mask(mode: str, start: int, size: int):
    if mode == "A":
        return np.bool_(True)
    if mode == "B":
        return np.bool_(False)
    return (np.arange(start, start + size) % 2) == 0


def estimate_reliability(ordering: Union[JuryOrdering, Sequence[float]], cfg: SimConfig) -> ReliabilityEstimate:
    """Fraction of correct majority verdicts over ``cfg.trials`` simulated juries."""
    abilities = np.asarray(
        ordering.abilities if isinstance(ordering, JuryOrdering) else ordering, dtype=float
    )
    n = abilities.size

    def run(k: int, start: int, size: int) -> int:
        rng = block_rng(cfg.seed, _STREAM_ESTIMATE, k)
        u = rng.random((size, n))
        truth = _nature_mask(cfg.nature, start, size)
        verdict = majority_is_a(simulate_votes(abilities, draw_signals(abilities, u, truth), cfg.theta0))
        return int(np.count_nonzero(verdict == truth))

    correct = sum(_map_blocks(run, cfg.trials, cfg.threads))
    return ReliabilityEstimate(correct, cfg.trials)


RuleSpec = Union[str, OrderLabel, Sequence[int]]


def _rule_name(rule: RuleSpec) -> str:
    if isinstance(rule, (str, OrderLabel)):
        return OrderLabel(rule).value
    return "custom:" + "-".join(str(int(i)) for i in rule)


def compare_orderings(size: int, juries: int, pair: tuple[RuleSpec, RuleSpec], cfg: SimConfig) -> ComparisonTable:
    """Paired verdict tally of two ordering rules over random juries.

    Each jury draws abilities uniformly on [0, 1] and one signal per juror
    with Nature = A; both orderings seat the same (ability, signal) pairs.
    ``n_XY`` counts juries where the first rule's verdict is X and the
    second's is Y.
    """
    if size % 2 == 0:
        raise ContractError("jury size must be odd")
    pat_x = rank_pattern(pair[0], size)
    pat_y = rank_pattern(pair[1], size)

    def run(k: int, start: int, block: int) -> np.ndarray:
        rng = block_rng(cfg.seed, _STREAM_COMPARE, size, k)
        abil = rng.random((block, size))
        u = rng.random((block, size))
        sig = draw_signals(abil, u, True)
        asc = np.argsort(abil, axis=1, kind="stable")
        out = []
        for pat in (pat_x, pat_y):
            idx = asc[:, pat]
            a_ord = np.take_along_axis(abil, idx, axis=1)
            s_ord = np.take_along_axis(sig, idx, axis=1)
            out.append(majority_is_a(simulate_votes(a_ord, s_ord, cfg.theta0)))
        x_ok, y_ok = out
        return np.array([
            np.count_nonzero(~x_ok & ~y_ok),
            np.count_nonzero(x_ok & y_ok),
            np.count_nonzero(x_ok & ~y_ok),
            np.count_nonzero(~x_ok & y_ok),
        ], dtype=np.int64)

    counts = sum(_map_blocks(run, juries, cfg.threads))
    return ComparisonTable(size, _rule_name(pair[0]), _rule_name(pair[1]), *(int(c) for c in counts))


def paired_estimates(orderings: Sequence[Sequence[int]], abilities: Sequence[float], trials: int,
                     seed: int, key: tuple[int, ...], threads: int = 1, theta0: float = 0.5,
                     ) -> tuple[np.ndarray, np.ndarray]:
    """Correct-verdict counts for several seatings of one jury, sharing signals.

    ``orderings`` are permutations of juror indices.  Each trial draws one
    signal per juror (Nature = A) and every seating reuses it.  Returns the
    per-seating correct counts and the matrix of pairwise discordance counts
    ``disc[i, j] = #(seating i right, seating j wrong)``.
    """
    abil = np.asarray(abilities, dtype=float)
    perms = [np.asarray(p, dtype=int) for p in orderings]
    k_ord = len(perms)

    def run(k: int, start: int, block: int):
        rng = block_rng(seed, *key, k)
        u = rng.random((block, abil.size))
        sig = draw_signals(abil, u, True)
        ok = np.empty((k_ord, block), dtype=bool)
        for j, p in enumerate(perms):
            ok[j] = majority_is_a(simulate_votes(abil[p], sig[:, p], theta0))
        okf = ok.astype(np.int64)
        disc = okf @ (1 - okf).T
        return okf.sum(axis=1), disc

    parts = _map_blocks(run, trials, threads)
    correct = sum(p[0] for p in parts)
    disc = sum(p[1] for p in parts)
    return correct, disc


def paired_difference_se(disc_ij: int, disc_ji: int, trials: int) -> float:
    """Standard error of (rate_i - rate_j) from paired discordance counts."""
    d = (disc_ij - disc_ji) / trials
    second = (disc_ij + disc_ji) / trials
    return math.sqrt(max(second - d * d, 0.0) / trials)


def _ado_perm(abilities: np.ndarray) -> np.ndarray:
    asc = np.argsort(abilities, kind="stable")
    return asc[rank_pattern(OrderLabel.ADO, abilities.size)]


def ado_improvement_study(size: int, juries: int, trials_per_jury: int, cfg: SimConfig) -> AdoStudy:
    """Per-jury reliability gain from reseating a random jury into ADO.

    Both seatings of a jury share the same per-juror signal draws.
    """
    if size % 2 == 0:
        raise ContractError("jury size must be odd")
    generated, deltas, ses = [], [], []
    for j in range(juries):
        abil = block_rng(cfg.seed, _STREAM_ADO_JURY, size, j).random(size)
        generated.append(tuple(float(x) for x in abil))
        delta, se = _ado_delta(abil, trials_per_jury, cfg, j)
        deltas.append(delta)
        ses.append(se)
    return AdoStudy(size, trials_per_jury, generated, np.array(deltas), np.array(ses))


def _ado_delta(abil: np.ndarray, trials: int, cfg: SimConfig, jury_index: int) -> tuple[float, float]:
    perms = [np.arange(abil.size), _ado_perm(abil)]
    correct, disc = paired_estimates(
        perms, abil, trials, cfg.seed, (_STREAM_ADO_TRIALS, abil.size, jury_index, trials),
        cfg.threads, cfg.theta0,
    )
    delta = (int(correct[1]) - int(correct[0])) / trials
    return delta, paired_difference_se(int(disc[1, 0]), int(disc[0, 1]), trials)


def recheck_ado_deltas(study: AdoStudy, below: float, trials: int, cfg: SimConfig) -> dict[int, float]:
    """Re-estimate, at ``trials`` trials, every jury whose delta fell below ``below``."""
    out = {}
    for j, d in enumerate(study.deltas):
        if d < below:
            out[j] = _ado_delta(np.asarray(study.juries[j]), trials, cfg, j)[0]
    return out


@dataclass(frozen=True)
class RankedOrdering:
    abilities: tuple[float, ...]
    estimate: float
    half_width_90: float


def exhaustive_order_search(abilities: Sequence[float], trials: int, constrain_last_two: bool,
                            cfg: SimConfig, exact: bool = False, max_size: int = 7) -> list[RankedOrdering]:
    """Estimate every seating of ``abilities`` and rank them best first.

    With ``constrain_last_two`` only seatings whose last two jurors are in
    descending ability are kept.  ``exact`` ranks three-juror juries by the
    closed-form reliability instead of simulating.
    """
    abil = np.asarray(abilities, dtype=float)
    n = abil.size
    if n > max_size:
        raise ContractError(
            f"refusing to enumerate {math.factorial(n)} seatings of a {n}-juror jury (limit {max_size})"
        )
    perms = [p for p in itertools.permutations(range(n))
             if not (constrain_last_two and n >= 2 and abil[p[-2]] < abil[p[-1]])]
    if exact:
        if n != 3:
            raise ContractError("exact ranking is only available for three jurors")
        ranked = [RankedOrdering(tuple(abil[list(p)]), reliability_sequential(*abil[list(p)]), 0.0)
                  for p in perms]
    else:
        correct, _ = paired_estimates(perms, abil, trials, cfg.seed, (_STREAM_SEARCH, n), cfg.threads, cfg.theta0)
        ranked = []
        for p, c in zip(perms, correct):
            est = ReliabilityEstimate(int(c), trials)
            ranked.append(RankedOrdering(tuple(float(x) for x in abil[list(p)]), est.estimate, est.half_width_90))
    ranked.sort(key=lambda r: -r.estimate)
    return ranked


def last_two_swap_study(size: int, juries: int, trials: int, cfg: SimConfig):
    """For random as-generated juries, compare against the seating with the last two in seniority.

    Returns (abilities, delta, paired se) per jury where delta is
    reliability(swapped into seniority) - reliability(original); juries whose
    last two are already descending are skipped.
    """
    rows = []
    j = 0
    while len(rows) < juries:
        abil = block_rng(cfg.seed, _STREAM_SWAP, size, j).random(size)
        j += 1
        if abil[-2] > abil[-1]:
            continue
        base = np.arange(size)
        swapped = base.copy()
        swapped[-2], swapped[-1] = swapped[-1], swapped[-2]
        correct, disc = paired_estimates([base, swapped], abil, trials, cfg.seed,
                                         (_STREAM_SWAP, size, j, 1), cfg.threads, cfg.theta0)
        delta = (int(correct[1]) - int(correct[0])) / trials
        rows.append((tuple(float(x) for x in abil), delta,
                     paired_difference_se(int(disc[1, 0]), int(disc[0, 1]), trials)))
    return rows


def deliberation_order_study(abilities: Sequence[float], trials: int, seed: int, key: int = 0, threads: int = 1):
    """Majority-correct counts of sequential deliberation for every seating.

    Signals are shared across seatings.  Returns (perms, correct counts,
    discordance matrix) like ``paired_estimates``.
    """
    abil = np.asarray(abilities, dtype=float)
    perms = [np.asarray(p) for p in itertools.permutations(range(abil.size))]

    def run(k: int, start: int, block: int):
        rng = block_rng(seed, _STREAM_DELIBERATION, key, k)
        sig = draw_signals(abil, rng.random((block, abil.size)), True)
        ok = np.empty((len(perms), block), dtype=np.int64)
        for i, p in enumerate(perms):
            ok[i] = majority_is_a(deliberation_votes_batch(abil[p], sig[:, p]))
        return ok.sum(axis=1), ok @ (1 - ok).T

    parts = _map_blocks(run, trials, threads)
    return perms, sum(p[0] for p in parts), sum(p[1] for p in parts)


__all__ = [
    "AdoStudy", "BLOCK_SIZE", "ComparisonTable", "RankedOrdering", "ReliabilityEstimate", "SimConfig",
    "VoteTranscript", "ado_improvement_study", "compare_orderings",
    "deliberation_order_study", "estimate_reliability", "exhaustive_order_search", "last_two_swap_study",
    "paired_difference_se", "paired_estimates", "recheck_ado_deltas", "simulate_votes", "vote_sequence",
]
