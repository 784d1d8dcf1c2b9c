"""Interval-set view of integer regions and text rendering of results."""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

EMPTY_SET = "∅"


@dataclass(frozen=True)
class IntegerIntervalSet:
    """Disjoint, non-adjacent closed integer intervals in ascending order."""

    intervals: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        prev = None
        for lo, hi in self.intervals:
            if lo > hi:
                raise ValueError(f"interval ({lo}, {hi}) has lower > upper")
            if prev is not None and lo <= prev + 1:
                raise ValueError("intervals must be sorted and separated by a gap")
            prev = hi

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    @property
    def size(self) -> int:
        return sum(hi - lo + 1 for lo, hi in self.intervals)

    def elements(self) -> list[int]:
        return [x for lo, hi in self.intervals for x in range(lo, hi + 1)]

    def __str__(self) -> str:
        if not self.intervals:
            return EMPTY_SET
        return ", ".join(str(lo) if lo == hi else f"{lo}..{hi}" for lo, hi in self.intervals)

    def table(self) -> str:
        """Tabular layout with one closed interval per row."""
        rows = [("", "Lower", "Upper", "LC", "RC")]
        rows += [(f"Interval[{i}]", str(lo), str(hi), "closed", "closed") for i, (lo, hi) in enumerate(self.intervals, 1)]
        widths = [max(len(r[c]) for r in rows) for c in range(5)]
        return "\n".join(
            " ".join([r[0].ljust(widths[0])] + [v.rjust(w) for v, w in zip(r[1:], widths[1:])]) for r in rows
        )


def to_intervals(elements: Iterable[int]) -> IntegerIntervalSet:
    runs: list[tuple[int, int]] = []
    for x in sorted(set(elements)):
        if runs and x == runs[-1][1] + 1:
            runs[-1] = (runs[-1][0], x)
        else:
            runs.append((x, x))
    return IntegerIntervalSet(tuple(runs))


def format_percent(p: float) -> str:
    """``0.906317`` -> ``'90.63%'``, rounding half away from zero."""
    q = (Decimal(repr(p)) * 100).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)
    return f"{q}%"


def render_text(result) -> str:
    label = result.label or "a discrete distribution"
    lines = [
        f"{format_percent(result.coverage)} HDR for {label}",
        f"Computed using discrete optimisation with minimum coverage probability = {format_percent(result.cover_prob)}",
        "",
        str(to_intervals(result.region)),
    ]
    for w in result.warnings:
        lines.append(f"Warning: {w}")
    return "\n".join(lines)
