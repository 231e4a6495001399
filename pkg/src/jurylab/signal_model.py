"""Linear signal/ability model.

A juror of ability ``a`` in [0, 1] receives a signal ``s`` in [-1, 1] with
density ``(1 + a s) / 2`` when Nature is A and ``(1 - a s) / 2`` when Nature
is B.  Everything here is a closed-form function of its arguments and works
elementwise on numpy arrays as well as on plain floats.
"""
from __future__ import annotations

import enum

import numpy as np

from .errors import DomainError


class Nature(str, enum.Enum):
    A = "A"
    B = "B"

    @property
    def other(self) -> "Nature":
        return Nature.B if self is Nature.A else Nature.A


def _scalar_or_array(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _nature(state) -> Nature:
    return state if isinstance(state, Nature) else Nature(state)


def density(state, a, s):
    """Signal density f_a(s) (state A) or g_a(s) (state B)."""
    a = np.asarray(a, dtype=float)
    s = np.asarray(s, dtype=float)
    sign = 1.0 if _nature(state) is Nature.A else -1.0
    return _scalar_or_array((1.0 + sign * a * s) / 2.0)


def cdf_a(a, s):
    """F_a(s) = (s+1)(as-a+2)/4."""
    return (s + 1.0) * (a * s - a + 2.0) / 4.0


def cdf_b(a, s):
    """G_a(s) = (s+1)(a-as+2)/4."""
    return (s + 1.0) * (a - a * s + 2.0) / 4.0


def cdf(state, a, s):
    """Cumulative distribution of the signal under ``state``."""
    a = np.asarray(a, dtype=float)
    s = np.asarray(s, dtype=float)
    if _nature(state) is Nature.A:
        return _scalar_or_array(cdf_a(a, s))
    return _scalar_or_array(cdf_b(a, s))


def posterior_from_signal(theta, a, s):
    """Posterior probability of A after observing signal ``s`` with ability ``a``."""
    theta = np.asarray(theta, dtype=float)
    a = np.asarray(a, dtype=float)
    s = np.asarray(s, dtype=float)
    as_ = a * s
    return _scalar_or_array(theta * (1.0 + as_) / (2.0 * as_ * theta - as_ + 1.0))


def prob_a_given_signal_above(tau: float, a: float) -> float:
    """Pr(A | s >= tau) under the equiprobable prior."""
    if tau >= 1.0:
        raise DomainError("conditioning event s >= 1 has probability zero")
    return 0.5 + (1.0 + tau) * a / 4.0


def honest_threshold(theta, a):
    """Signal cutoff above which an honest juror with prior ``theta`` votes A.

    Saturates at -1 (always A) or +1 (always B) when the prior overwhelms the
    juror's ability; zero ability is handled as the a -> 0+ limit.
    """
    theta = np.asarray(theta, dtype=float)
    a = np.asarray(a, dtype=float)
    lean = 1.0 - 2.0 * theta
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        interior = np.clip(lean / a, -1.0, 1.0)
    tau = np.where(
        theta == 0.5,
        0.0,
        np.where(
            (theta > 0.5) & (a < -lean),
            -1.0,
            np.where((theta < 0.5) & (a < lean), 1.0, interior),
        ),
    )
    return _scalar_or_array(tau)


def update_after_vote(theta, a, tau, voted_a):
    """Bayes update of the prior after a vote cast at threshold ``tau``.

    A vote for A means s >= tau, so the likelihoods are 1-F and 1-G; a vote
    for B uses F and G.  Herding votes (tau = -1 or +1) carry no information
    and leave the prior unchanged.
    """
    theta = np.asarray(theta, dtype=float)
    a = np.asarray(a, dtype=float)
    tau = np.asarray(tau, dtype=float)
    voted_a = np.asarray(voted_a, dtype=bool)
    fa = cdf_a(a, tau)
    gb = cdf_b(a, tau)
    like_a = np.where(voted_a, 1.0 - fa, fa)
    like_b = np.where(voted_a, 1.0 - gb, gb)
    num = theta * like_a
    den = num + (1.0 - theta) * like_b
    with np.errstate(divide="ignore", invalid="ignore"):
        post = np.where(den > 0.0, num / den, theta)
    post = np.where(np.abs(tau) == 1.0, theta, post)
    return _scalar_or_array(post)


def sample_signal(state, a, u):
    """Inverse-CDF draw: the signal ``s`` with cdf(state, a, s) == u.

    Uses the cancellation-free root ``(a - 2 + 4u) / (1 + sqrt((1-a)^2 + 4au))``,
    which also covers a = 0.  State B reflects the A draw of ``1 - u``.
    """
    a = np.asarray(a, dtype=float)
    u = np.asarray(u, dtype=float)
    if _nature(state) is Nature.B:
        return _scalar_or_array(-_sample_a(a, 1.0 - u))
    return _scalar_or_array(_sample_a(a, u))


def _sample_a(a, u):
    disc = (1.0 - a) ** 2 + 4.0 * a * u
    return np.clip((a - 2.0 + 4.0 * u) / (1.0 + np.sqrt(disc)), -1.0, 1.0)
