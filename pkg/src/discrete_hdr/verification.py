"""Certificates and brute-force oracles for covering regions.

:func:`check_theorem1` evaluates the minimum-coverage, moderation and
highest-density conditions, the last one through inner/outer boundedness
against a finite search set. The oracles solve small finite instances
directly: :func:`oracle_greedy` by sorting, :func:`oracle_exhaustive` by
enumerating every subset (the unit-weight knapsack view).
"""

from __future__ import annotations

import math
import random
from collections.abc import Collection, Iterable
from dataclasses import dataclass

import numpy as np

from .errors import ImproperPmfError, PreconditionError, SupportTooLargeError
from .mass_model import MassFunction, eval_mass

EXHAUSTIVE_MAX_SUPPORT = 22
COVERAGE_TIE = 1e-12


@dataclass(frozen=True)
class ConditionReport:
    min_coverage_ok: bool
    moderation_ok: bool
    inner_ok: bool
    outer_ok: bool
    nabla_H: float
    delta_complement: float
    outside_mass: float
    coverage: float

    @property
    def highest_density_ok(self) -> bool:
        return self.inner_ok and self.outer_ok

    @property
    def all_ok(self) -> bool:
        return self.min_coverage_ok and self.moderation_ok and self.highest_density_ok

    def as_dict(self) -> dict:
        return {
            "min_coverage_ok": self.min_coverage_ok,
            "moderation_ok": self.moderation_ok,
            "inner_ok": self.inner_ok,
            "outer_ok": self.outer_ok,
            "highest_density_ok": self.highest_density_ok,
            "nabla_H": self.nabla_H,
            "delta_complement": self.delta_complement,
            "outside_mass": self.outside_mass,
            "coverage": self.coverage,
        }


def check_theorem1(
    mf: MassFunction,
    region: Iterable[int],
    cover_prob: float,
    search_set: Iterable[int],
) -> ConditionReport:
    """Evaluate the CSCR conditions for ``region`` using ``search_set``.

    All sums are correctly rounded (``math.fsum``). Moderation is decided by
    dropping the lightest region element, which gives the heaviest strict
    subset.
    """
    region = set(region)
    search = set(search_set)
    if not region <= search:
        raise PreconditionError(f"region elements {sorted(region - search)[:5]} are not in the search set")
    mass = {x: eval_mass(mf, x) for x in search}
    inside = sorted(mass[x] for x in region)
    coverage = math.fsum(inside)
    nabla = inside[0] if inside else math.inf
    delta = max((mass[x] for x in search - region), default=0.0)
    outside = math.fsum([1.0, *(-m for m in mass.values())])
    return ConditionReport(
        min_coverage_ok=coverage >= cover_prob,
        moderation_ok=(not inside) or math.fsum(inside[1:]) < cover_prob,
        inner_ok=nabla >= delta,
        outer_ok=outside <= nabla,
        nabla_H=nabla,
        delta_complement=delta,
        outside_mass=outside,
        coverage=coverage,
    )


def _support(table: MassFunction) -> list[tuple[int, float]]:
    if table.table is not None:
        xs: Iterable[int] = sorted(table.table)
    elif table.is_finite:
        xs = range(int(table.supp_min), int(table.supp_max) + 1)
    else:
        raise PreconditionError(f"{table.label} does not have finite support")
    pairs = [(x, eval_mass(table, x)) for x in xs]
    return [(x, m) for x, m in pairs if m > 0.0]


def oracle_greedy(table: MassFunction, cover_prob: float) -> tuple[int, ...]:
    """Shortest prefix of the support sorted by descending mass, ties by value."""
    support = sorted(_support(table), key=lambda p: (-p[1], p[0]))
    if cover_prob > math.fsum(m for _, m in support):
        raise ImproperPmfError(f"cover_prob {cover_prob} exceeds the total mass")
    chosen: list[int] = []
    total = 0.0
    for x, m in support:
        if total >= cover_prob:
            break
        chosen.append(x)
        total += m
    return tuple(sorted(chosen))


def oracle_exhaustive(table: MassFunction, cover_prob: float) -> tuple[int, float, list[tuple[int, ...]]]:
    """Solve the smallest-covering problem by enumerating all subsets.

    Returns ``(optimal_size, max_coverage, solutions)`` where ``solutions``
    lists every subset of size ``optimal_size`` whose coverage is within
    ``1e-12`` of ``max_coverage``.
    """
    support = _support(table)
    n = len(support)
    if n > EXHAUSTIVE_MAX_SUPPORT:
        raise SupportTooLargeError(f"support of {n} elements exceeds {EXHAUSTIVE_MAX_SUPPORT}")
    if cover_prob <= 0.0:
        return 0, 0.0, [()]
    sums = np.zeros(1)
    sizes = np.zeros(1, dtype=np.int64)
    # bit j of the subset index selects support[j]
    for _, m in support:
        sums = np.concatenate([sums, sums + m])
        sizes = np.concatenate([sizes, sizes + 1])
    feasible = sums >= cover_prob
    if not feasible.any():
        raise ImproperPmfError(f"cover_prob {cover_prob} exceeds the total mass")
    optimal_size = int(sizes[feasible].min())
    eligible = sizes <= optimal_size
    max_coverage = float(sums[eligible].max())
    winners = np.flatnonzero(eligible & feasible & (sums >= max_coverage - COVERAGE_TIE))
    xs = [x for x, _ in support]
    solutions = [tuple(xs[j] for j in range(n) if (mask >> j) & 1) for mask in winners.tolist()]
    return optimal_size, max_coverage, sorted(solutions)


def check_lemmas(
    mf: MassFunction,
    region: Collection[int],
    cover_prob: float,
    search_set: Iterable[int],
    trials: int = 200,
    seed: int = 0,
) -> bool:
    """Spot-check that no smaller set covers and no equal-size set beats ``region``.

    Draws ``trials`` random subsets of the search set for each property and
    also tries the heaviest subsets of sizes ``|region| - 1`` and ``|region|``.
    """
    rng = random.Random(seed)
    search = sorted(set(search_set))
    mass = {x: eval_mass(mf, x) for x in search}
    h = len(region)
    best = math.fsum(mass.get(x, eval_mass(mf, x)) for x in region)

    def prob(subset) -> float:
        return math.fsum(mass[x] for x in subset)

    heaviest = sorted(search, key=lambda x: -mass[x])
    if h > 0 and prob(heaviest[: h - 1]) >= cover_prob:
        return False
    if prob(heaviest[:h]) > best + COVERAGE_TIE:
        return False
    for _ in range(trials):
        if h > 0 and prob(rng.sample(search, rng.randrange(min(h, len(search) + 1)))) >= cover_prob:
            return False
        if prob(rng.sample(search, rng.randint(0, min(h, len(search))))) > best + COVERAGE_TIE:
            return False
    return True
