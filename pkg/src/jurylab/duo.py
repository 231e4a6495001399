"""Two jurors voting in sequence under the unanimity rule.

A is the favored alternative: the verdict is B only when both jurors vote B.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .signal_model import cdf_a, cdf_b, honest_threshold, update_after_vote


@dataclass(frozen=True)
class DuoSetting:
    theta: float  # prior of the favored alternative A
    b: float  # first voter
    c: float  # second voter


@dataclass(frozen=True)
class DuoThresholds:
    ybar: float
    zbar: Optional[float]  # None when the first voter always votes A
    theta_bar: Optional[float]

    @property
    def second_reachable(self) -> bool:
        return self.zbar is not None


def duo_thresholds(setting: DuoSetting) -> DuoThresholds:
    ybar = honest_threshold(setting.theta, setting.b)
    if ybar == -1.0:
        return DuoThresholds(ybar, None, None)
    theta_bar = update_after_vote(setting.theta, setting.b, ybar, False)
    return DuoThresholds(ybar, honest_threshold(theta_bar, setting.c), theta_bar)


def duo_reliability(setting: DuoSetting) -> float:
    """Probability that the unanimity verdict matches Nature."""
    th = duo_thresholds(setting)
    if not th.second_reachable:
        # first voter herds to A, so the verdict is always A
        return setting.theta
    b, c = setting.b, setting.c
    fb = cdf_a(b, th.ybar)
    q_a = (1 - fb) + fb * (1 - cdf_a(c, th.zbar))
    q_b = cdf_b(b, th.ybar) * cdf_b(c, th.zbar)
    return setting.theta * q_a + (1 - setting.theta) * q_b
