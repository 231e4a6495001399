"""Voting-order constructors for juries of any size."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import ContractError, DomainError


class OrderLabel(str, enum.Enum):
    SO = "SO"  # seniority: descending ability
    AO = "AO"  # anti-seniority: ascending ability
    ADO = "ADO"  # ascending-descending
    CUSTOM = "Custom"
    AS_GENERATED = "AsGenerated"


@dataclass(frozen=True)
class JuryOrdering:
    abilities: tuple[float, ...]
    label: OrderLabel = OrderLabel.CUSTOM

    def __post_init__(self):
        if len(self.abilities) < 1:
            raise ContractError("a jury needs at least one juror")
        for a in self.abilities:
            if not 0.0 <= a <= 1.0:
                raise DomainError(f"ability {a} outside [0, 1]")

    def __len__(self):
        return len(self.abilities)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.abilities, dtype=float)


def rank_pattern(rule: Union[str, OrderLabel, Sequence[int]], n: int) -> np.ndarray:
    """Voting order as positions into the ascending-sorted jury.

    For n = 2m+1, ADO is ranks (m, m+1, ..., 2m, m-1, ..., 0) (zero-based):
    median first, strongest in the middle seat, weakest last.
    """
    if not isinstance(rule, (str, OrderLabel)):
        pattern = np.asarray(rule, dtype=int)
        if sorted(pattern.tolist()) != list(range(n)):
            raise ContractError(f"custom rank pattern {pattern.tolist()} is not a permutation of 0..{n - 1}")
        return pattern
    label = OrderLabel(rule)
    if label is OrderLabel.SO:
        return np.arange(n - 1, -1, -1)
    if label is OrderLabel.AO:
        return np.arange(n)
    if label is OrderLabel.ADO:
        if n % 2 == 0:
            raise ContractError("ADO is defined for odd jury sizes only")
        m = n // 2
        return np.concatenate([np.arange(m, n), np.arange(m - 1, -1, -1)])
    raise ContractError(f"{label.value} is not a rank-based rule")


def _ordered(abilities: Sequence[float], label: OrderLabel) -> JuryOrdering:
    asc = sorted(float(a) for a in abilities)
    pattern = rank_pattern(label, len(asc))
    return JuryOrdering(tuple(asc[i] for i in pattern), label)


def seniority(abilities: Sequence[float]) -> JuryOrdering:
    return _ordered(abilities, OrderLabel.SO)


def anti_seniority(abilities: Sequence[float]) -> JuryOrdering:
    return _ordered(abilities, OrderLabel.AO)


def ado(abilities: Sequence[float]) -> JuryOrdering:
    return _ordered(abilities, OrderLabel.ADO)


def custom(abilities: Sequence[float]) -> JuryOrdering:
    return JuryOrdering(tuple(float(a) for a in abilities), OrderLabel.CUSTOM)


def as_generated(abilities: Sequence[float]) -> JuryOrdering:
    return JuryOrdering(tuple(float(a) for a in abilities), OrderLabel.AS_GENERATED)


def make_ordering(abilities: Sequence[float], rule: str) -> JuryOrdering:
    """Build an ordering from a rule name: SO, AO, ADO, or given/custom."""
    key = rule.strip().upper()
    if key in ("GIVEN", "CUSTOM"):
        return custom(abilities)
    if key in ("ASGENERATED", "AS_GENERATED"):
        return as_generated(abilities)
    return _ordered(abilities, OrderLabel(key))
