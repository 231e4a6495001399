"""Exact reliability of three-juror juries.

Voting order is always the argument order: ``(a, b, c)`` means ``a`` votes
first.  The reliability functions broadcast over numpy arrays so the verify
harness can sweep whole grids at once; scalar calls return plain floats.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import appendix
from .errors import ContractError, DomainError, RegionError, UnsupportedPriorError
from .signal_model import Nature, cdf_a, cdf_b, honest_threshold, update_after_vote


class Region(str, enum.Enum):
    H2 = "H2"  # second voter herds
    H3 = "H3"  # third voter herds
    S = "S"  # nobody herds


class History(str, enum.Enum):
    AB = "AB"
    BA = "BA"


@dataclass(frozen=True)
class TrioOrder:
    a1: float
    a2: float
    a3: float

    def __post_init__(self):
        for x in (self.a1, self.a2, self.a3):
            if not 0.0 <= x <= 1.0:
                raise DomainError(f"ability {x} outside [0, 1]")

    def __iter__(self):
        return iter((self.a1, self.a2, self.a3))


@dataclass(frozen=True)
class StrategicProfile:
    """Thresholds for strategic sequential voting.

    ``y1``/``y2`` are the second voter's cutoffs after a first vote of A/B;
    ``z1``/``z2`` the third voter's after AB/BA.
    """

    x: float
    y1: float
    y2: float
    z1: float
    z2: float

    def mirrored(self) -> "StrategicProfile":
        return StrategicProfile(-self.x, -self.y2, -self.y1, -self.z2, -self.z1)

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.x, self.y1, self.y2, self.z1, self.z2)


@dataclass(frozen=True)
class AbilityIndices:
    homogeneity: float
    heterogeneity: float


def _out(x):
    x = np.asarray(x)
    return x.item() if x.ndim == 0 else x


def second_threshold(a: float, b: float, first_vote=Nature.A) -> float:
    y_a = -1.0 if b <= a / 2 else -a / (2 * b)
    return y_a if Nature(first_vote) is Nature.A else -y_a


def rho(a, b):
    """Third-voter herding cutoff; defined only when the second voter does not herd."""
    a_arr = np.asarray(a, dtype=float)
    b_arr = np.asarray(b, dtype=float)
    if np.any(b_arr <= a_arr / 2):
        raise RegionError("rho is undefined when b <= a/2 (second voter herds)")
    return _out(_rho(a_arr, b_arr))


def _rho(a, b):
    return 2 * (2 * b - a) / (8 - a**2 - 2 * a * b)


def third_threshold(trio, history=History.AB) -> float:
    a, b, c = trio
    r = rho(a, b)
    z_ab = 1.0 if c <= r else r / c
    return z_ab if History(history) is History.AB else -z_ab


def classify_region(trio) -> Region:
    a, b, c = trio
    if b <= a / 2:
        return Region.H2
    if c <= _rho(a, b):
        return Region.H3
    return Region.S


def q0(a, b):
    # (a^2 + 4b(b+2)) / 16b, grouped so tiny abilities do not underflow
    return a * (a / b) / 16 + (b + 2) / 4


def q_full(a, b, c):
    # (4t^3 + 4k(16b + (a+2b)^2)c + t k^2 c^2) / 128bkc with t = 2b - a,
    # split into bounded ratios t/b and t/c
    k = 8 - a**2 - 2 * a * b
    t = 2 * b - a
    return t * (t / b) * (t / c) / (32 * k) + 0.5 + (a + 2 * b) * ((a + 2 * b) / b) / 32 + (t / b) * k * c / 128


def reliability_sequential(a, b, c):
    """Probability that honest sequential majority voting in order (a, b, c) is right.

    Equiprobable prior.  Piecewise: (2+a)/4 when the second voter herds,
    q0(a, b) when the third herds, the full rational q(a, b, c) otherwise.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    in_h2 = b <= a / 2
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        r = _rho(a, b)
        in_h3 = ~in_h2 & (c <= r)
        val = np.where(in_h2, (2 + a) / 4, np.where(in_h3, q0(a, b), q_full(a, b, c)))
    return _out(val)


def _three_vote_majority(pa, pb, pc):
    return pa * pb + pa * (1 - pb) * pc + (1 - pa) * pb * pc


def sim_reliability_at(theta, a, b, c, x, y, z):
    """Simultaneous-voting reliability with fixed individual thresholds."""
    right_a = _three_vote_majority(1 - cdf_a(a, x), 1 - cdf_a(b, y), 1 - cdf_a(c, z))
    right_b = _three_vote_majority(cdf_b(a, x), cdf_b(b, y), cdf_b(c, z))
    return theta * right_a + (1 - theta) * right_b


def reliability_simultaneous(theta, a, b, c):
    """Simultaneous honest voting: each juror uses their own prior-only threshold."""
    return _out(
        sim_reliability_at(
            theta, a, b, c,
            honest_threshold(theta, a), honest_threshold(theta, b), honest_threshold(theta, c),
        )
    )


def strategic_reliability_at(theta, a, b, c, x, y1, y2, z1, z2):
    """Reliability of sequential voting under an arbitrary threshold profile."""
    fa, fb1, fb2 = cdf_a(a, x), cdf_a(b, y1), cdf_a(b, y2)
    fc1, fc2 = cdf_a(c, z1), cdf_a(c, z2)
    ga, gb1, gb2 = cdf_b(a, x), cdf_b(b, y1), cdf_b(b, y2)
    gc1, gc2 = cdf_b(c, z1), cdf_b(c, z2)
    right_a = (1 - fa) * fb1 * (1 - fc1) + fa * (1 - fb2) * (1 - fc2) + (1 - fa) * (1 - fb1)
    right_b = (1 - ga) * gb1 * gc1 + ga * (1 - gb2) * gc2 + ga * gb2
    return theta * right_a + (1 - theta) * right_b


def reliability_strategic(theta, a, b, c, profile: StrategicProfile):
    return _out(strategic_reliability_at(theta, a, b, c, *profile.as_tuple()))


def honest_profile(a: float, b: float, c: float) -> StrategicProfile:
    """Thresholds honest voters use at the equiprobable prior.

    In H2 the third voter is never reached; the returned z's are then the
    herding values and do not affect reliability.
    """
    y1 = second_threshold(a, b, Nature.A)
    if b <= a / 2:
        z1 = 1.0
    else:
        z1 = third_threshold((a, b, c), History.AB)
    return StrategicProfile(0.0, y1, -y1, z1, -z1)


def honest_profile_at(theta: float, a: float, b: float, c: float) -> StrategicProfile:
    """Honest thresholds for any prior, built by updating the belief after each vote."""
    x = honest_threshold(theta, a)
    after_a = update_after_vote(theta, a, x, True)
    after_b = update_after_vote(theta, a, x, False)
    y1 = honest_threshold(after_a, b)
    y2 = honest_threshold(after_b, b)
    z1 = honest_threshold(update_after_vote(after_a, b, y1, False), c)
    z2 = honest_threshold(update_after_vote(after_b, b, y2, True), c)
    return StrategicProfile(float(x), float(y1), float(y2), float(z1), float(z2))


def reliability_sequential_at(theta: float, a: float, b: float, c: float) -> float:
    """Honest sequential reliability for an arbitrary prior of A."""
    return float(strategic_reliability_at(theta, a, b, c, *honest_profile_at(theta, a, b, c).as_tuple()))


def _maximize_quadratic_on_box(f, t0: float) -> float:
    """Exact maximizer on [-1, 1] of a function known to be quadratic in t."""
    f_m, f_0, f_p = f(-1.0), f(0.0), f(1.0)
    alpha = (f_p + f_m) / 2 - f_0
    beta = (f_p - f_m) / 2
    cands = [-1.0, 1.0, t0]
    if alpha < 0:
        cands.append(min(1.0, max(-1.0, -beta / (2 * alpha))))
    return max(cands, key=f)


def optimize_strategic(theta: float, a: float, b: float, c: float,
                       grid_points: int = 9, tol: float = 1e-12, max_sweeps: int = 500):
    """Best strategic reliability for order (a, b, c) with the first cutoff at 0.

    The objective is quadratic in each threshold and, with x fixed, splits
    into independent (y1, z1) and (y2, z2) blocks.  Each block is maximized
    by coordinate ascent from a ``grid_points``-per-axis grid of starts plus
    the honest and simultaneous profiles.
    """
    if theta != 0.5:
        raise UnsupportedPriorError("strategic optimization is only defined at theta = 1/2")
    hon = honest_profile(a, b, c)
    starts = np.linspace(-1.0, 1.0, grid_points)

    def block_value(y, z, first):
        if first:
            return strategic_reliability_at(theta, a, b, c, 0.0, y, 0.0, z, 0.0)
        return strategic_reliability_at(theta, a, b, c, 0.0, 0.0, y, 0.0, z)

    best = {}
    for first, seeds in ((True, [(hon.y1, hon.z1), (0.0, 0.0)]), (False, [(hon.y2, hon.z2), (0.0, 0.0)])):
        seeds = seeds + [(y, z) for y in starts for z in starts]
        top_val, top_yz = -math.inf, None
        for y, z in seeds:
            val = block_value(y, z, first)
            for _ in range(max_sweeps):
                y = _maximize_quadratic_on_box(lambda t: block_value(t, z, first), y)
                z = _maximize_quadratic_on_box(lambda t: block_value(y, t, first), z)
                new = block_value(y, z, first)
                improved = new - val
                val = new
                if improved < tol:
                    break
            if val > top_val:
                top_val, top_yz = val, (y, z)
        best[first] = top_yz
    (y1, z1), (y2, z2) = best[True], best[False]
    profile = StrategicProfile(0.0, y1, y2, z1, z2)
    return float(strategic_reliability_at(theta, a, b, c, *profile.as_tuple())), profile


def indices(a: float, b: float, c: float) -> AbilityIndices:
    if not a <= b <= c:
        raise ContractError("indices() expects abilities sorted ascending")
    if c == 0:
        return AbilityIndices(1.0, 1.0)
    lam = min([r for r in ((a / b) if b > 0 else None, b / c) if r is not None])
    ratios = [r for r in ((b / a) if a > 0 else None, (c / b) if b > 0 else None) if r is not None]
    mu = min(ratios) if ratios else math.inf
    return AbilityIndices(lam, mu)


def optimal_order(abilities) -> tuple[float, float, float]:
    """Median, highest, lowest."""
    lo, mid, hi = sorted(abilities)
    return (mid, hi, lo)


def diversity_reliability(m, mu):
    """Optimal-order reliability of the jury with mean ability ``m`` and heterogeneity ``mu``."""
    m_arr = np.asarray(m, dtype=float)
    mu_arr = np.asarray(mu, dtype=float)
    if np.any((m_arr <= 0) | (m_arr >= 1)):
        raise DomainError("mean ability must lie in (0, 1)")
    if np.any(mu_arr < 1):
        raise DomainError("heterogeneity index must be >= 1")
    _, _, top = appendix.mean_ability_parametrization(m_arr, mu_arr)
    if np.any(top > 1.0 + 1e-15):
        raise DomainError("induced highest ability 3 m mu^2 / (mu^2 + mu + 1) exceeds 1")
    val = np.where(
        appendix.w(m_arr, mu_arr) >= 0,
        appendix.qbar1(m_arr, mu_arr),
        appendix.qbar2(m_arr, mu_arr),
    )
    return _out(val)


def max_valid_mu(m: float) -> float:
    """Largest mu for which mean ``m`` keeps every ability <= 1 (inf if none binds)."""
    # 3 m mu^2 <= mu^2 + mu + 1  <=>  (3m - 1) mu^2 - mu - 1 <= 0
    k = 3 * m - 1
    if k <= 0:
        return math.inf
    return (1 + math.sqrt(1 + 4 * k)) / (2 * k)
