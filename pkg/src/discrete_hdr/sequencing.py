"""Enumerations ``E: {1, 2, ...} -> Z`` driving the one-at-a-time search."""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

from .errors import EmptySupportError, SequenceIndexError

KINDS = ("left_bounded", "right_bounded", "finite", "oscillating", "custom")


@dataclass(frozen=True)
class SequenceFunction:
    """Index-to-integer map covering ``[supp_min, supp_max]``.

    ``length`` is the number of valid indices, or ``None`` when unbounded.
    Custom sequences are checked for repeats by the solver as it walks them.
    """

    kind: str
    supp_min: int | float
    supp_max: int | float
    mapping: Callable[[int], int]
    length: int | None = None

    def __call__(self, i: int) -> int | None:
        return seq_element(self, i)


def _oscillate(i: int) -> int:
    return i // 2 if i % 2 == 1 else -(i // 2)


def make_sequence(supp_min: float = -math.inf, supp_max: float = math.inf) -> SequenceFunction:
    # non-integer finite bounds round inward
    lo = math.ceil(supp_min) if math.isfinite(supp_min) else supp_min
    hi = math.floor(supp_max) if math.isfinite(supp_max) else supp_max
    if lo > hi or lo == math.inf or hi == -math.inf:
        raise EmptySupportError(f"empty support: supp_min={supp_min}, supp_max={supp_max}")
    if math.isfinite(lo):
        start = lo - 1
        if math.isfinite(hi):
            return SequenceFunction("finite", lo, hi, lambda i: start + i, hi - lo + 1)
        return SequenceFunction("left_bounded", lo, hi, lambda i: start + i)
    if math.isfinite(hi):
        top = hi + 1
        return SequenceFunction("right_bounded", lo, hi, lambda i: top - i)
    return SequenceFunction("oscillating", lo, hi, _oscillate)


def custom_sequence(
    mapping: Callable[[int], int],
    supp_min: float = -math.inf,
    supp_max: float = math.inf,
    length: int | None = None,
) -> SequenceFunction:
    """Wrap a user-supplied enumeration.

    Injectivity cannot be checked up front; the solver raises
    :class:`~discrete_hdr.errors.DuplicateElementError` on the first repeat.
    """
    return SequenceFunction("custom", supp_min, supp_max, mapping, length)


def seq_element(seq: SequenceFunction, i: int) -> int | None:
    """Return ``E(i)``, or ``None`` once a finite sequence is exhausted."""
    if i < 1:
        raise SequenceIndexError(f"sequence indices start at 1, got {i}")
    if seq.length is not None and i > seq.length:
        return None
    return int(seq.mapping(i))
