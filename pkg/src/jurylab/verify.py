"""Named numerical checks for the three-juror results and their side conditions.

Each check evaluates one inequality (or identity) over a deterministic grid
plus seed-driven scrambled-Sobol points, rejection-sampled from a bounding
box into the constraint region where the result is claimed.  Reports are
numerical evidence only; nothing here certifies a proof.

Margins: a strict inequality needs margin > 1e-12 at interior points and
margin >= -1e-12 on the region boundary; a weak one needs margin >= -1e-12
everywhere.  Identity checks use ``tolerance - |error|`` as their margin.
"""
from __future__ import annotations

import itertools
import math
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.optimize import brentq
from scipy.stats import qmc

from . import appendix, trio
from .deliberation import condorcet_fis_check, correct_vote_mass, fis_failures, single_vote_correct_prob
from .duo import DuoSetting, duo_reliability
from .errors import ContractError
from .simulation import SimConfig, block_rng, deliberation_order_study, last_two_swap_study, paired_difference_se
from .signal_model import Nature

EPS = 1e-12
EVIDENCE = "numerical evidence, not proof"
_MAX_GRID = 200_000
_MAX_DRAWN = 1 << 24


@dataclass(frozen=True)
class Resolution:
    grid: float = 0.05  # triple grids
    sweep: float = 0.01  # one-dimensional sweeps
    points: int = 100_000  # accepted quasi-random points per sign check
    mc_trials: int = 100_000
    mc_juries: int = 20
    strategic_samples: int = 30
    fis_step: float = 0.02


PROFILES = {
    "fast": Resolution(),
    "thorough": Resolution(grid=0.025, sweep=0.005, points=400_000, mc_trials=1_000_000,
                           mc_juries=100, strategic_samples=200, fis_step=0.01),
}


def resolve(resolution: Union[Resolution, str, float, int, None]) -> Resolution:
    """Accept a Resolution, a profile name, a grid step (float) or a point count (int)."""
    if resolution is None:
        return PROFILES["fast"]
    if isinstance(resolution, Resolution):
        return resolution
    if isinstance(resolution, str):
        if resolution not in PROFILES:
            raise ContractError(f"unknown resolution profile {resolution!r}")
        return PROFILES[resolution]
    if isinstance(resolution, bool):
        raise ContractError("resolution must be a profile, grid step or point count")
    if isinstance(resolution, int):
        if resolution < 1:
            raise ContractError("point count must be positive")
        return replace(PROFILES["fast"], points=resolution)
    step = float(resolution)
    if not 0 < step <= 0.5:
        raise ContractError("grid step must lie in (0, 0.5]")
    return replace(PROFILES["fast"], grid=step)


@dataclass
class CheckReport:
    check_id: str
    description: str
    variables: tuple[str, ...]
    points_tested: int
    violations: int
    worst_inputs: tuple[float, ...]
    worst_margin: float
    elapsed_ms: float
    seed: int
    acceptance_rate: Optional[float] = None
    evidence: str = EVIDENCE

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "description": self.description,
            "points_tested": self.points_tested,
            "violations": self.violations,
            "worst_case": {
                "variables": list(self.variables),
                "inputs": [float(x) for x in self.worst_inputs],
                "margin": float(self.worst_margin),
            },
            "elapsed_ms": round(self.elapsed_ms, 3),
            "acceptance_rate": self.acceptance_rate,
            "seed": self.seed,
            "passed": self.passed,
            "evidence": self.evidence,
        }


@dataclass
class _Outcome:
    variables: tuple[str, ...]
    inputs: np.ndarray  # (N, k)
    margin: np.ndarray  # (N,)
    strict: bool
    boundary: Optional[np.ndarray] = None
    acceptance_rate: Optional[float] = None


@dataclass(frozen=True)
class _Check:
    check_id: str
    description: str
    run: Callable[[Resolution, int, int], _Outcome] = field(repr=False)


_CATALOG: dict[str, _Check] = {}


def _register(check_id: str, description: str):
    def deco(fn):
        _CATALOG[check_id] = _Check(check_id, description, fn)
        return fn
    return deco


def catalog() -> dict[str, str]:
    """Registered check ids with their descriptions, in registration order."""
    return {k: c.description for k, c in _CATALOG.items()}


# --- point generation -----------------------------------------------------


Constraint = tuple[np.ndarray, bool]  # (slack, closed): need slack > 0, or >= 0 if closed


def _grid(lower, upper, step: float) -> np.ndarray:
    d = len(lower)
    per_axis = [int(round((hi - lo) / step)) + 1 for lo, hi in zip(lower, upper)]
    cap = max(2, int(_MAX_GRID ** (1.0 / d)))
    axes = [np.linspace(lo, hi, min(n, cap)) for lo, hi, n in zip(lower, upper, per_axis)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _admit(X: np.ndarray, constraints: Callable[[np.ndarray], Sequence[Constraint]]):
    inside = np.ones(len(X), dtype=bool)
    edge = np.zeros(len(X), dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        for slack, closed in constraints(X):
            inside &= (slack >= 0) if closed else (slack > 0)
            edge |= np.abs(slack) <= EPS
    return inside, edge


def _check_seed(seed: int, check_id: str) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(zlib.crc32(check_id.encode()),))


def _region_points(check_id: str, lower, upper, constraints, res: Resolution, seed: int):
    """Grid points plus at least ``res.points`` accepted Sobol points, and the acceptance rate."""
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    G = _grid(lower, upper, res.grid)
    g_in, _ = _admit(G, constraints)
    sampler = qmc.Sobol(len(lower), scramble=True, seed=np.random.default_rng(_check_seed(seed, check_id)))
    accepted, drawn, batch = [], 0, 1 << 14
    n_acc = 0
    while n_acc < res.points and drawn < _MAX_DRAWN:
        S = qmc.scale(sampler.random(batch), lower, upper)
        drawn += batch
        s_in, _ = _admit(S, constraints)
        accepted.append(S[s_in])
        n_acc += int(s_in.sum())
        batch = min(batch * 2, 1 << 20)
    S = np.concatenate(accepted)[: res.points] if accepted else np.empty((0, len(lower)))
    X = np.concatenate([G[g_in], S])
    _, edge = _admit(X, constraints)
    on_box = np.any((X <= lower + EPS) | (X >= upper - EPS), axis=1)
    rate = n_acc / drawn if drawn else None
    return X, edge | on_box, rate


def _sign_check(check_id, variables, lower, upper, constraints, margin, res, seed, strict):
    X, edge, rate = _region_points(check_id, lower, upper, constraints, res, seed)
    with np.errstate(divide="ignore", invalid="ignore"):
        m = np.asarray(margin(X), dtype=float)
    return _Outcome(tuple(variables), X, m, strict, edge, rate)


def _cstep(fn, X: np.ndarray, col: int, h: float = 1e-30) -> np.ndarray:
    """Complex-step partial derivative of fn(*columns) in column ``col``."""
    Z = X.astype(complex)
    Z[:, col] += 1j * h
    return np.imag(fn(*Z.T)) / h


def _tally(out: _Outcome) -> tuple[int, int]:
    m = out.margin
    bad = ~np.isfinite(m)
    if out.strict:
        boundary = out.boundary if out.boundary is not None else np.zeros(m.shape, dtype=bool)
        bad |= np.where(boundary, m < -EPS, m <= EPS)
    else:
        bad |= m < -EPS
    worst = int(np.argmin(np.where(np.isfinite(m), m, -np.inf)))
    return int(bad.sum()), worst


# --- shorthands -----------------------------------------------------------

Q = trio.reliability_sequential


def _qsim(a, b, c):
    return trio.sim_reliability_at(0.5, a, b, c, 0.0, 0.0, 0.0)


def _sorted_box(X):
    a, b, c = X.T
    return [(b - a, True), (c - b, True)]


def _mu_at_least(k):
    def cons(X):
        a, b, c = X.T
        return _sorted_box(X) + [(b - k * a, True), (c - k * b, True)]
    return cons


def _lambda_at_least(k):
    def cons(X):
        a, b, c = X.T
        return _sorted_box(X) + [(a - k * b, True), (b - k * c, True), (c, False)]
    return cons


_UNIT3 = ([0.0] * 3, [1.0] * 3)


# --- three-juror order results --------------------------------------------


def _grid_triples(step: float, include_zero: bool) -> np.ndarray:
    vals = np.round(np.arange(0.0 if include_zero else step, 1.0 + step / 2, step), 12)
    return vals


@_register("thm2-optimal-order", "Q(b,c,a) strictly beats the other five orders for 0<a<b<c<=1")
def _thm2(res, seed, threads):
    vals = _grid_triples(res.grid, include_zero=False)
    T = np.array(list(itertools.combinations(vals, 3)))
    a, b, c = T.T
    best = Q(b, c, a)
    others = np.max([Q(*p) for p in itertools.permutations((a, b, c)) if p[0] is not b or p[1] is not c], axis=0)
    return _Outcome(("a", "b", "c"), T, best - others, strict=True)


@_register("prop2-first-two", "Q(a,b,c) > Q(b,a,c) whenever a<b (equality allowed at a=0)")
def _prop2(res, seed, threads):
    vals = _grid_triples(res.grid, include_zero=True)
    T = np.array([(a, b, c) for a, b in itertools.combinations(vals, 2) for c in vals])
    a, b, c = T.T
    return _Outcome(("a", "b", "c"), T, Q(a, b, c) - Q(b, a, c), strict=True, boundary=a == 0)


@_register("prop3-end-voters", "Q(b,c,a) > Q(a,c,b) whenever a<b, any middle ability c")
def _prop3(res, seed, threads):
    vals = _grid_triples(res.grid, include_zero=True)
    T = np.array([(a, b, c) for a, b in itertools.combinations(vals, 2) for c in vals])
    a, b, c = T.T
    return _Outcome(("a", "b", "c"), T, Q(b, c, a) - Q(a, c, b), strict=True)


@_register("thm3-monotonicity", "Q nondecreasing in b and c on [0,1], and in a on [c/2,1] (finite differences)")
def _thm3(res, seed, threads):
    h = res.sweep
    vals = np.round(np.arange(0.0, 1.0 + h / 2, h), 12)
    A, B, C = (m.ravel() for m in np.meshgrid(vals, vals, vals, indexing="ij"))
    inputs, margins = [], []
    up_b = B + h <= 1 + EPS
    inputs.append(np.stack([A, B, C], 1)[up_b])
    margins.append((Q(A, np.minimum(B + h, 1), C) - Q(A, B, C))[up_b])
    up_c = C + h <= 1 + EPS
    inputs.append(np.stack([A, B, C], 1)[up_c])
    margins.append((Q(A, B, np.minimum(C + h, 1)) - Q(A, B, C))[up_c])
    up_a = (A + h <= 1 + EPS) & (A >= C / 2 - EPS)
    inputs.append(np.stack([A, B, C], 1)[up_a])
    margins.append((Q(np.minimum(A + h, 1), B, C) - Q(A, B, C))[up_a])
    return _Outcome(("a", "b", "c"), np.concatenate(inputs), np.concatenate(margins), strict=False)


def _h3(X):
    a, b, c = X.T
    return [(b - a / 2, False), (trio._rho(a, b) - c, True)]


def _s_region(X):
    a, b, c = X.T
    return [(b - a / 2, False), (c - trio._rho(a, b), False)]


@_register("thm3-partials", "partial derivatives of q0 over H3 and of q over S are nonnegative (complex step)")
def _thm3_partials(res, seed, threads):
    outs = []
    X, edge, r1 = _region_points("thm3-partials/h3", *_UNIT3, _h3, res, seed)
    d = np.minimum(_cstep(lambda a, b, c: trio.q0(a, b), X, 0), _cstep(lambda a, b, c: trio.q0(a, b), X, 1))
    outs.append((X, d))
    Y, _, r2 = _region_points("thm3-partials/s", *_UNIT3, _s_region, res, seed)
    d_bc = np.minimum(_cstep(trio.q_full, Y, 1), _cstep(trio.q_full, Y, 2))
    d_a = np.where(Y[:, 0] >= Y[:, 2] / 2, _cstep(trio.q_full, Y, 0), np.inf)
    outs.append((Y, np.minimum(d_bc, d_a)))
    inputs = np.concatenate([o[0] for o in outs])
    return _Outcome(("a", "b", "c"), inputs, np.concatenate([o[1] for o in outs]), strict=False,
                    acceptance_rate=min(r1, r2))


@_register("abler-not-always-better", "exact: a first juror of ability 0 can beat an abler one")
def _abler(res, seed, threads):
    cases = np.array([(0.25, 0.125, 0.5), (0.1, 0.05, 0.9), (0.01, 24 / 25, 15 / 16)])
    a, b, c = cases.T
    return _Outcome(("a", "b", "c"), cases, Q(0.0 * a, b, c) - Q(a, b, c), strict=True)


@_register("region-consistency", "H2/H3 tags agree with saturation of the second/third thresholds")
def _regions(res, seed, threads):
    vals = _grid_triples(res.grid, include_zero=True)
    T = np.array(list(itertools.product(vals, repeat=3)))
    margin = np.empty(len(T))
    for i, (a, b, c) in enumerate(T):
        region = trio.classify_region((a, b, c))
        h2 = trio.second_threshold(a, b, Nature.A) == -1.0
        ok = (region is trio.Region.H2) == h2
        if not h2:
            ok &= (region is trio.Region.H3) == (trio.third_threshold((a, b, c)) == 1.0)
        margin[i] = 1.0 if ok else -1.0
    return _Outcome(("a", "b", "c"), T, margin, strict=False)


# --- appendix polynomials -------------------------------------------------


def _poly_check(check_id, constraints, margin, strict=True, variables=("a", "b", "c"), box=_UNIT3):
    def run(res, seed, threads):
        return _sign_check(check_id, variables, box[0], box[1], constraints, margin, res, seed, strict)
    return run


def _f1_region(X):
    a, b, c = X.T
    return [(a - b / 2, False), (b - a, False), (c - trio._rho(b, a), False), (trio._rho(a, b) - c, True)]


def _f2_region(X):
    a, b, c = X.T
    return [(b / 2 - a, True), (b - a, False), (c - trio._rho(a, b), False)]


def _f3_region(X):
    a, b, c = X.T
    return [(a - b / 2, False), (b - a, False), (c - trio._rho(a, b), False)]


def _d2_mid_region(X):
    a, b, c = X.T
    return [(c - a / 2, False), (b / 2 - c, True), (b - a, False)]


def _f4_region(X):
    a, b, c = X.T
    return [(b - a, False), (c - b / 2, False), (trio._rho(b, c) - a, True), (b - trio._rho(a, c), False)]


def _f5_region(X):
    a, b, c = X.T
    return [(b - a, False), (c - b / 2, False), (a - trio._rho(b, c), False), (b - trio._rho(a, c), False)]


_register("f1-positive", "f1 > 0 on rho(b,a) < c <= rho(a,b), b/2 < a < b")(
    _poly_check("f1-positive", _f1_region, lambda X: appendix.f1(*X.T)))
_register("f2-positive", "f2 > 0 on a <= b/2, c > rho(a,b) (zero only at a = 0)")(
    _poly_check("f2-positive", _f2_region, lambda X: appendix.f2(*X.T)))
_register("f3-positive", "f3 > 0 on c > rho(a,b), b/2 < a < b")(
    _poly_check("f3-positive", _f3_region, lambda X: appendix.f3(*X.T)))
_register("end-voters-mid-case", "(2+b)/4 - q(a,c,b) > 0 on a/2 < c <= b/2, a < b")(
    _poly_check("end-voters-mid-case", _d2_mid_region,
                lambda X: (2 + X[:, 1]) / 4 - trio.q_full(X[:, 0], X[:, 2], X[:, 1])))
_register("f4-positive", "f4 > 0 on a <= rho(b,c), b > rho(a,c), b/2 < c, a < b")(
    _poly_check("f4-positive", _f4_region, lambda X: appendix.f4(*X.T)))
_register("f5-positive", "f5 > 0 on a > rho(b,c), b > rho(a,c), b/2 < c, a < b")(
    _poly_check("f5-positive", _f5_region, lambda X: appendix.f5(*X.T)))


def _hetero_split(X, want_herd: bool):
    a, b, c = X.T
    s = appendix.h_split(a, b, c)
    return _mu_at_least(4 / 3)(X) + [(s if want_herd else -s, want_herd)]


_register("h1-nonneg", "h1 >= 0 for sorted a<=b<=c with homogeneity index >= 6/7")(
    _poly_check("h1-nonneg", _lambda_at_least(6 / 7), lambda X: appendix.h1(*X.T), strict=False))
_register("h2-nonneg", "h2 >= 0 for heterogeneity index >= 4/3 where the split condition holds")(
    _poly_check("h2-nonneg", lambda X: _hetero_split(X, True), lambda X: appendix.h2(*X.T), strict=False))
_register("neg-h1-nonneg", "-h1 >= 0 for heterogeneity index >= 4/3 where the split condition fails")(
    _poly_check("neg-h1-nonneg", lambda X: _hetero_split(X, False), lambda X: -appendix.h1(*X.T), strict=False))


def _seq_minus_sim_closed(X):
    a, b, c = X.T
    split = appendix.h_split(a, b, c) >= 0
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(split, appendix.h2(a, b, c) / (32 * c),
                        -appendix.h1(a, b, c) / (128 * a * c * (8 - 2 * b * c - b**2)))


def _identity(err, tol=1e-10):
    return tol - np.abs(err)


_register("h-split-identity", "Q(b,c,a) - Q_sim equals the h2 / -h1 split formula (heterogeneity >= 4/3)")(
    _poly_check("h-split-identity", lambda X: _mu_at_least(4 / 3)(X) + [(X[:, 0], False)],
                lambda X: _identity(Q(X[:, 1], X[:, 2], X[:, 0]) - _qsim(*X.T) - _seq_minus_sim_closed(X)),
                strict=False))
_register("h1-identity", "Q_sim - Q(b,c,a) equals h1/(128ac(8-2bc-b^2)) (homogeneity >= 6/7)")(
    _poly_check("h1-identity", _lambda_at_least(6 / 7),
                lambda X: _identity(_qsim(*X.T) - Q(X[:, 1], X[:, 2], X[:, 0])
                                    - appendix.h1(*X.T) / (128 * X[:, 0] * X[:, 2] * (8 - 2 * X[:, 1] * X[:, 2] - X[:, 1] ** 2))),
                strict=False))
_register("thm5-homogeneous", "Q_sim >= Q(b,c,a) when the homogeneity index is >= 6/7")(
    _poly_check("thm5-homogeneous", _lambda_at_least(6 / 7),
                lambda X: _qsim(*X.T) - Q(X[:, 1], X[:, 2], X[:, 0]), strict=False))
_register("thm5-heterogeneous", "Q(b,c,a) >= Q_sim when the heterogeneity index is >= 4/3")(
    _poly_check("thm5-heterogeneous", _mu_at_least(4 / 3),
                lambda X: Q(X[:, 1], X[:, 2], X[:, 0]) - _qsim(*X.T), strict=False))

_OMEGA_VARS = ("b", "c", "y1", "y2", "z1", "z2")
_OMEGA_BOX = ([0.0, 0.0, -1, -1, -1, -1], [1.0, 1.0, 1, 1, 1, 1])


def _omega_region(X):
    return [(X[:, 1] - 7 * X[:, 0] / 4, True), (X[:, 1], False)]


_register("omega-nonneg", "Omega(b,c,c,y,z) >= 0 for c/b >= 7/4 and thresholds in [-1,1]")(
    _poly_check("omega-nonneg", _omega_region,
                lambda X: appendix.omega(X[:, 0], X[:, 1], X[:, 1], *X[:, 2:].T),
                strict=False, variables=_OMEGA_VARS, box=_OMEGA_BOX))
_register("omega-d0-nonneg", "Omega(1,mu,0,y,z) >= 0 for 7/4 <= mu <= 20")(
    _poly_check("omega-d0-nonneg", lambda X: [],
                lambda X: appendix.omega(1.0, X[:, 0], 0.0, *X[:, 1:].T), strict=False,
                variables=("mu", "y1", "y2", "z1", "z2"), box=([1.75, -1, -1, -1, -1], [20.0, 1, 1, 1, 1])))


def _omega_identity_err(X):
    b, c = X[:, 0], X[:, 1]
    y1, y2, z1, z2 = X[:, 2:].T
    lhs = trio.q0(b, c) - trio.strategic_reliability_at(0.5, b, c, 4 * b / 7, 0.0, y1, y2, z1, z2)
    return lhs - appendix.omega(b, c, c, y1, y2, z1, z2) / (112 * c)


_register("omega-identity", "q0(b,c) - Q_str(1/2,b,c,4b/7,0,y,z) equals Omega(b,c,c,y,z)/(112c)")(
    _poly_check("omega-identity", _omega_region, lambda X: _identity(_omega_identity_err(X)),
                strict=False, variables=_OMEGA_VARS, box=_OMEGA_BOX))
_register("sim-dominates-strategic-equal", "Q_sim(a,a,a) >= Q_str(1/2,a,a,a,0,y,z) for all thresholds")(
    _poly_check("sim-dominates-strategic-equal", lambda X: [],
                lambda X: _qsim(X[:, 0], X[:, 0], X[:, 0]) - trio.strategic_reliability_at(
                    0.5, X[:, 0], X[:, 0], X[:, 0], 0.0, *X[:, 1:].T),
                strict=False, variables=("a", "y1", "y2", "z1", "z2"), box=([0.0, -1, -1, -1, -1], [1.0, 1, 1, 1, 1])))


# --- diversity --------------------------------------------------------------

_MU_CAP = 10.0
_DIV_BOX = ([0.0, 1.0], [1.0, _MU_CAP])


def _unit_m(X):
    return [(X[:, 0], False), (1 - X[:, 0], False)]


_register("w-increasing", "dw/dmu > 0 where w(m,mu) >= 0, mu in [1,10]")(
    _poly_check("w-increasing", lambda X: _unit_m(X) + [(appendix.w(*X.T), True)],
                lambda X: _cstep(appendix.w, X, 1), variables=("m", "mu"), box=_DIV_BOX))
_register("qbar1-increasing", "dQbar1/dmu > 0 for m in (0,1), mu in [1,10]")(
    _poly_check("qbar1-increasing", _unit_m, lambda X: _cstep(appendix.qbar1, X, 1),
                variables=("m", "mu"), box=_DIV_BOX))
_register("qbar2-increasing", "dQbar2/dmu > 0 for m in (0,1), mu in [1,10]")(
    _poly_check("qbar2-increasing", _unit_m, lambda X: _cstep(appendix.qbar2, X, 1),
                variables=("m", "mu"), box=_DIV_BOX))
_register("v-positive", "v(m,mu) > 0 so Qbar2 = u/v is defined, m in (0,1), mu in [1,10]")(
    _poly_check("v-positive", _unit_m, lambda X: appendix.v(*X.T), variables=("m", "mu"), box=_DIV_BOX))


def _valid_mu_grid(m: float, step: float) -> np.ndarray:
    hi = min(trio.max_valid_mu(m), _MU_CAP)
    return np.arange(1.0, hi + EPS, step)


@_register("thm6-diversity", "Qbar(m,mu) strictly increasing in mu over the valid domain, m = 0.1..0.9")
def _thm6(res, seed, threads):
    inputs, margins = [], []
    for m in np.round(np.arange(0.1, 0.95, 0.1), 12):
        mus = _valid_mu_grid(m, res.sweep)
        vals = trio.diversity_reliability(np.full(mus.shape, m), mus)
        inputs.append(np.stack([np.full(mus.size - 1, m), mus[:-1]], 1))
        margins.append(np.diff(vals))
    return _Outcome(("m", "mu"), np.concatenate(inputs), np.concatenate(margins), strict=True)


@_register("diversity-consistency", "Qbar(m,mu) equals Q(b,c,a) of the parametrized abilities (tol 1e-9)")
def _div_consistency(res, seed, threads):
    inputs, margins = [], []
    for m in np.round(np.arange(res.sweep, 1.0, res.sweep * 5), 12):
        mus = _valid_mu_grid(m, res.sweep)
        a, b, c = appendix.mean_ability_parametrization(m, mus)
        err = trio.diversity_reliability(np.full(mus.shape, m), mus) - Q(b, c, a)
        inputs.append(np.stack([np.full(mus.size, m), mus], 1))
        margins.append(_identity(err, 1e-9))
    return _Outcome(("m", "mu"), np.concatenate(inputs), np.concatenate(margins), strict=False)


@_register("diversity-junction", "Qbar1 and Qbar2 agree at the root of w (continuity of the piecewise form)")
def _div_junction(res, seed, threads):
    ms = np.round(np.arange(res.sweep, 1.0, res.sweep), 12)
    rows, margins = [], []
    for m in ms:
        root = brentq(lambda mu: appendix.w(m, mu), 1.0, 100.0, xtol=1e-15)
        rows.append((m, root))
        margins.append(_identity(appendix.qbar1(m, root) - appendix.qbar2(m, root), 1e-9))
    return _Outcome(("m", "mu"), np.array(rows), np.array(margins), strict=False)


# --- strategic voting -------------------------------------------------------


def _sample_hetero_triples(n: int, seed: int, key: str, k: float) -> list[tuple[float, float, float]]:
    rng = np.random.default_rng(_check_seed(seed, key))
    out = []
    while len(out) < n:
        c = rng.uniform(0.05, 1.0)
        b = rng.uniform(0.0, c / k)
        a = rng.uniform(0.0, b / k)
        out.append((a, b, c))
    return out


@_register("thm7-heterogeneous", "max strategic reliability of order (b,c,a) equals Q(b,c,a) when mu >= 7/4 (tol 1e-6)")
def _thm7_hetero(res, seed, threads):
    T = _sample_hetero_triples(res.strategic_samples, seed, "thm7-heterogeneous", 7 / 4)
    margin = [1e-6 - (trio.optimize_strategic(0.5, b, c, a)[0] - Q(b, c, a)) for a, b, c in T]
    return _Outcome(("a", "b", "c"), np.array(T), np.array(margin), strict=False)


@_register("thm7-equal", "max strategic reliability equals Q_sim for equal abilities (tol 1e-6)")
def _thm7_equal(res, seed, threads):
    grid = np.linspace(0.0, 1.0, max(res.strategic_samples, 2))
    margin = [1e-6 - (trio.optimize_strategic(0.5, a, a, a)[0] - _qsim(a, a, a)) for a in grid]
    return _Outcome(("a",), grid[:, None], np.array(margin), strict=False)


@_register("strategic-dominance", "best strategic reliability >= every honest sequential order and Q_sim (tol 1e-9)")
def _strategic_dominance(res, seed, threads):
    rng = np.random.default_rng(_check_seed(seed, "strategic-dominance"))
    T = np.sort(rng.random((max(res.strategic_samples // 3, 2), 3)), axis=1)
    margin = []
    for a, b, c in T:
        orders = list(itertools.permutations((a, b, c)))
        best = max(trio.optimize_strategic(0.5, *o)[0] for o in orders)
        honest = max(max(Q(*o) for o in orders), _qsim(a, b, c))
        margin.append(best - honest + 1e-9)
    return _Outcome(("a", "b", "c"), T, np.array(margin), strict=False)


# --- unanimity, deliberation, binary warm-up --------------------------------


@_register("lemma1-duo", "unanimity duo: the abler juror voting first is never worse, any prior")
def _lemma1(res, seed, threads):
    vals = np.round(np.arange(0.0, 1.0 + res.grid / 2, res.grid), 12)
    rows, margin = [], []
    for theta in vals:
        for b, c in itertools.combinations(vals, 2):
            rows.append((theta, b, c))
            margin.append(duo_reliability(DuoSetting(theta, c, b)) - duo_reliability(DuoSetting(theta, b, c)))
    return _Outcome(("theta", "b", "c"), np.array(rows), np.array(margin), strict=False)


@_register("lemma2-single-vote", "one honest vote's correctness is nondecreasing in ability, every prior")
def _lemma2(res, seed, threads):
    h = res.sweep
    vals = np.round(np.arange(0.0, 1.0 + h / 2, h), 12)
    TH, A = (m.ravel() for m in np.meshgrid(vals, vals[:-1], indexing="ij"))
    d1 = single_vote_correct_prob(TH, A + h) - single_vote_correct_prob(TH, A)
    d2 = correct_vote_mass(TH, A + h) - correct_vote_mass(TH, A)
    return _Outcome(("theta", "a"), np.stack([TH, A], 1), np.minimum(d1, d2), strict=False)


@_register("prop1-fis-second", "binary signals: strongest juror voting second always reaches the full-information verdict")
def _prop1_second(res, seed, threads):
    grid = np.round(np.arange(0.5, 1.0 + res.fis_step / 2, res.fis_step), 12)
    rows, margin = [], []
    for p, q, r in itertools.combinations_with_replacement(grid, 3):
        for weaker_first in (True, False):
            rows.append((p, q, r, float(weaker_first)))
            margin.append(1.0 if condorcet_fis_check(p, q, r, 2, weaker_first) else -1.0)
    return _Outcome(("p", "q", "r", "weaker_first"), np.array(rows), np.array(margin), strict=False)


@_register("prop1-fis-counterexamples", "binary signals: grid counterexamples exist with the strongest first or last")
def _prop1_counter(res, seed, threads):
    grid = np.round(np.arange(0.5, 1.0 + res.fis_step / 2, res.fis_step), 12)
    rows, margin = [], []
    for position in (1, 3):
        hit = next(((p, q, r) for p, q, r in itertools.combinations_with_replacement(grid, 3)
                    if fis_failures(p, q, r, position)), None)
        rows.append((position, *(hit if hit else (math.nan,) * 3)))
        margin.append(1.0 if hit else -1.0)
    return _Outcome(("position", "p", "q", "r"), np.array(rows), np.array(margin), strict=False)


@_register("thm1-last-two", "n=5 majority: reseating the last two in seniority never lowers reliability beyond 3 sigma")
def _thm1(res, seed, threads):
    cfg = SimConfig(trials=res.mc_trials, seed=seed, threads=threads)
    rows = last_two_swap_study(5, res.mc_juries, res.mc_trials, cfg)
    X = np.array([abil for abil, _, _ in rows])
    margin = np.array([delta + 3 * se for _, delta, se in rows])
    return _Outcome(tuple(f"a{i + 1}" for i in range(5)), X, margin, strict=False)


@_register("thm8-deliberation", "n=3 deliberation: seniority order is best within 3 sigma (paired signals)")
def _thm8(res, seed, threads):
    rng = block_rng(seed, 0x7E8)
    T = rng.random((res.mc_juries, 3))
    margin = []
    for j, abil in enumerate(T):
        perms, correct, disc = deliberation_order_study(abil, res.mc_trials, seed, key=j, threads=threads)
        so = next(i for i, p in enumerate(perms) if list(p) == list(np.argsort(-abil, kind="stable")))
        worst = math.inf
        for i in range(len(perms)):
            if i == so:
                continue
            delta = (int(correct[so]) - int(correct[i])) / res.mc_trials
            se = paired_difference_se(int(disc[so, i]), int(disc[i, so]), res.mc_trials)
            worst = min(worst, delta + 3 * se)
        margin.append(worst)
    return _Outcome(("a1", "a2", "a3"), T, np.array(margin), strict=False)


# --- runners ----------------------------------------------------------------


def run_check(check_id: str, resolution: Union[Resolution, str, float, int, None] = "fast",
              seed: int = 0, threads: int = 1) -> CheckReport:
    if check_id not in _CATALOG:
        raise ContractError(f"unknown check id {check_id!r}; known: {', '.join(_CATALOG)}")
    res = resolve(resolution)
    check = _CATALOG[check_id]
    t0 = time.perf_counter()
    out = check.run(res, seed, threads)
    if len(out.margin) == 0:
        raise ContractError(f"check {check_id} evaluated no points; resolution too coarse")
    violations, worst = _tally(out)
    elapsed = (time.perf_counter() - t0) * 1e3
    return CheckReport(
        check_id, check.description, out.variables, int(len(out.margin)), violations,
        tuple(float(x) for x in out.inputs[worst]), float(out.margin[worst]), elapsed, seed,
        out.acceptance_rate,
    )


def run_all(resolution: Union[Resolution, str, float, int, None] = "fast", seed: int = 0,
            threads: int = 1, which: Optional[Sequence[str]] = None) -> list[CheckReport]:
    """Run the catalog (or the ids in ``which``); reports come back in catalog order."""
    ids = list(which) if which is not None else list(_CATALOG)
    for cid in ids:
        if cid not in _CATALOG:
            raise ContractError(f"unknown check id {cid!r}")
    if threads <= 1:
        return [run_check(cid, resolution, seed, 1) for cid in ids]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda cid: run_check(cid, resolution, seed, 1), ids))


__all__ = ["CheckReport", "PROFILES", "Resolution", "catalog", "resolve", "run_all", "run_check"]
