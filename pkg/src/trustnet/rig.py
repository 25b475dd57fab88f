"""Rig algebra for trust ratings, and the bounded/unbounded rating transforms.

A rig is a ring without negatives: ``(R, +, 0)`` and ``(R, *, 1)`` are
commutative monoids, multiplication distributes over addition and zero
annihilates.  Ratings over the nonnegative reals add up naturally when
several recommendations run in parallel; ratings over ``[0, 1)`` multiply
naturally along chains.  :func:`to_bounded` and :func:`to_unbounded` move
between the two views via ``beta = 1 - 2**(-b)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .errors import DomainError

__all__ = [
    "RigKind",
    "Rig",
    "get_rig",
    "rig_add",
    "rig_mul",
    "rig_sum",
    "to_bounded",
    "to_unbounded",
]


class RigKind(str, enum.Enum):
    NATURALS = "naturals"
    NONNEG_REALS = "nonneg-reals"
    UNIT_INTERVAL = "unit-interval-max-mul"
    BOOLEAN = "boolean"
    LATTICE = "lattice"


@dataclass(frozen=True)
class Rig:
    kind: RigKind
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    zero: Any
    one: Any
    contains: Callable[[Any], bool]

    def check(self, x):
        if not self.contains(x):
            raise DomainError(f"{x!r} is not an element of the {self.kind.value} rig")
        return x


def _is_real(x):
    return isinstance(x, (int, float, np.integer, np.floating)) and not isinstance(x, bool) \
        and math.isfinite(x)


def _is_nat(x):
    if isinstance(x, bool):
        return False
    if isinstance(x, (int, np.integer)):
        return x >= 0
    return False


_RIGS = {
    RigKind.NATURALS: Rig(
        RigKind.NATURALS, lambda a, b: a + b, lambda a, b: a * b, 0, 1, _is_nat),
    RigKind.NONNEG_REALS: Rig(
        RigKind.NONNEG_REALS, lambda a, b: a + b, lambda a, b: a * b, 0.0, 1.0,
        lambda x: _is_real(x) and x >= 0),
    # max/times on [0, 1]: the "best chain" rig
    RigKind.UNIT_INTERVAL: Rig(
        RigKind.UNIT_INTERVAL, max, lambda a, b: a * b, 0.0, 1.0,
        lambda x: _is_real(x) and 0 <= x <= 1),
    RigKind.BOOLEAN: Rig(
        RigKind.BOOLEAN, lambda a, b: a | b, lambda a, b: a & b, 0, 1,
        lambda x: (isinstance(x, (bool, int, np.integer)) and x in (0, 1))),
    # distributive lattice ([0, 1], max, min); not embeddable in a ring
    RigKind.LATTICE: Rig(
        RigKind.LATTICE, max, min, 0.0, 1.0,
        lambda x: _is_real(x) and 0 <= x <= 1),
}


def get_rig(kind) -> Rig:
    return _RIGS[RigKind(kind)]


def rig_add(kind, a, b):
    """Sum of ``a`` and ``b`` in the rig ``kind``."""
    rig = get_rig(kind)
    return rig.add(rig.check(a), rig.check(b))


def rig_mul(kind, a, b):
    """Product of ``a`` and ``b`` in the rig ``kind``."""
    rig = get_rig(kind)
    return rig.mul(rig.check(a), rig.check(b))


def rig_sum(kind, values):
    rig = get_rig(kind)
    total = rig.zero
    for v in values:
        total = rig.add(total, rig.check(v))
    return total


def to_bounded(b):
    """Map an unbounded rating ``b >= 0`` to ``1 - 2**(-b)`` in ``[0, 1)``.

    Accepts scalars or arrays.  Negative (or NaN) input raises
    :class:`DomainError`.
    """
    arr = np.asarray(b, dtype=float)
    if not np.all(arr >= 0):
        raise DomainError("unbounded ratings must be nonnegative")
    out = -np.expm1(-arr * math.log(2.0))
    return float(out) if out.ndim == 0 else out


def to_unbounded(beta):
    """Inverse of :func:`to_bounded`: ``-log2(1 - beta)`` for ``beta`` in ``[0, 1)``.

    ``beta == 1`` would be infinite trust and is rejected.
    """
    arr = np.asarray(beta, dtype=float)
    if not np.all((arr >= 0) & (arr < 1)):
        raise DomainError("bounded ratings must lie in [0, 1)")
    out = -np.log1p(-arr) / math.log(2.0)
    return float(out) if out.ndim == 0 else out
