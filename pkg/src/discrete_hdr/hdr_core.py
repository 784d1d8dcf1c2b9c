"""One-at-a-time computation of the canonical smallest covering region.

The solver walks a sequence ``E(1), E(2), ...`` over the support, keeping a
candidate region sorted by descending mass. The candidate always meets the
coverage, moderation and inner-boundedness conditions relative to the visited
search set; the walk stops once the unvisited mass ``out_prob`` is no larger
than the lightest candidate mass ``min_prob`` (outer-boundedness), at which
point the candidate is a canonical smallest covering region.
"""

from __future__ import annotations

import bisect
import itertools
import math
import sys
from array import array
from dataclasses import dataclass, field

from .errors import (
    DuplicateElementError,
    EnumerationTooLargeError,
    ImproperPmfError,
    InvariantViolation,
    PreconditionError,
    TerminationError,
)
from .mass_model import MassFunction, eval_mass, support_bounds
from .sequencing import SequenceFunction, make_sequence, seq_element

DEFAULT_ITER_CAP = 10**7
DEFAULT_ENUM_CAP = 10**4
TIE_RTOL = 1e-12
DRIFT_CHECK_EVERY = 10**4

FULL_SUPPORT_WARNING = (
    "coverage probability 1 requested on an unbounded support: the smallest covering "
    "region is the support of the distribution, which cannot be enumerated in finitely "
    "many steps; the returned region holds the positive-mass elements found before the "
    "remaining mass fell to rounding level and might not be the smallest covering region"
)


def masses_tie(a: float, b: float) -> bool:
    """Tie test used for variation sets (not for the solver's insertion rule)."""
    return abs(a - b) <= TIE_RTOL * max(1.0, abs(a), abs(b))


def _neg(v: float) -> float:
    return -v


@dataclass(frozen=True)
class CandidateRegion:
    entries: tuple[tuple[int, float], ...] = ()

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(x for x, _ in self.entries)

    @property
    def total(self) -> float:
        return math.fsum(m for _, m in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class SolverState:
    """Mutable solver state between steps.

    ``elements``/``masses`` hold the candidate in descending mass order.
    The visited search set is kept in compact arrays in visiting order.
    """

    cover_prob: float
    k: int = 0
    iter: int = 0
    elements: list[int] = field(default_factory=list)
    masses: list[float] = field(default_factory=list)
    min_prob: float = math.inf
    out_prob: float = 1.0
    # largest visited mass not in the candidate
    max_outside: float = 0.0
    exhausted: bool = False
    visited_x: array = field(default_factory=lambda: array("q"))
    visited_m: array = field(default_factory=lambda: array("d"))
    seen: set[int] | None = None

    @property
    def next_index(self) -> int:
        return self.k + self.iter + 1

    @property
    def n_visited(self) -> int:
        return len(self.visited_x)

    @property
    def candidate(self) -> CandidateRegion:
        return CandidateRegion(tuple(zip(self.elements, self.masses)))


@dataclass
class HdrResult:
    region: tuple[int, ...]
    coverage: float
    cover_prob: float
    region_size: int
    search_set_size: int
    variation_set: tuple[int, ...]
    required_from_variation: int
    warnings: list[str] = field(default_factory=list)
    iterations: int = 0
    k: int = 0
    min_prob: float = math.inf
    out_prob: float = 0.0
    label: str = ""
    search_set: array = field(default_factory=lambda: array("q"), repr=False)
    search_masses: array = field(default_factory=lambda: array("d"), repr=False)

    @property
    def warning(self) -> str | None:
        return "; ".join(self.warnings) if self.warnings else None


def _visit(state: SolverState, mf: MassFunction, seq: SequenceFunction, index: int):
    x = seq_element(seq, index)
    if x is None:
        return None
    if state.seen is not None:
        if x in state.seen:
            raise DuplicateElementError(x, index)
        state.seen.add(x)
    m = eval_mass(mf, x)
    state.visited_x.append(x)
    state.visited_m.append(m)
    return x, m


def _prune(state: SolverState) -> None:
    """Cut the candidate to its shortest prefix reaching ``cover_prob``."""
    masses = state.masses
    running = 0.0
    for r, m in enumerate(masses, 1):
        running += m
        if running >= state.cover_prob:
            break
    else:
        r = len(masses)
    if r < len(masses):
        state.max_outside = max(state.max_outside, masses[r])
        del masses[r:]
        del state.elements[r:]
    state.min_prob = masses[-1] if masses else math.inf


def initial_candidate(
    mf: MassFunction,
    seq: SequenceFunction,
    cover_prob: float,
    iter_cap: int = DEFAULT_ITER_CAP,
) -> SolverState:
    """Visit the shortest sequence prefix whose mass reaches ``cover_prob``.

    ``state.k`` is the prefix length. Zero-mass elements are visited but never
    enter the candidate, and the sorted candidate is cut back to its shortest
    prefix reaching ``cover_prob`` (the raw prefix need not be moderate when
    light elements come early in the sequence).
    """
    if not 0.0 <= cover_prob < 1.0:
        raise PreconditionError(f"cover_prob must lie in [0, 1), got {cover_prob}")
    state = SolverState(cover_prob=cover_prob)
    if seq.kind == "custom":
        state.seen = set()
    total = 0.0
    i = 0
    while total < cover_prob:
        i += 1
        if i > iter_cap:
            raise TerminationError(i - 1, max(0.0, 1.0 - total), math.inf)
        visited = _visit(state, mf, seq, i)
        if visited is None:
            raise ImproperPmfError(
                f"sequence exhausted after {i - 1} elements with total mass {total!r} "
                f"below cover_prob {cover_prob!r}"
            )
        x, m = visited
        total += m
        if m > 0.0:
            state.elements.append(x)
            state.masses.append(m)
    state.k = i
    order = sorted(range(len(state.masses)), key=lambda j: -state.masses[j])
    state.elements = [state.elements[j] for j in order]
    state.masses = [state.masses[j] for j in order]
    _prune(state)
    state.out_prob = max(0.0, 1.0 - total)
    return state


def step(state: SolverState, mf: MassFunction, seq: SequenceFunction) -> SolverState:
    """Visit the next sequence element and update the candidate in place."""
    visited = _visit(state, mf, seq, state.next_index)
    if visited is None:
        state.out_prob = 0.0
        state.exhausted = True
        return state
    x, new_prob = visited
    state.iter += 1
    state.out_prob = max(0.0, state.out_prob - new_prob)
    if new_prob > state.min_prob:
        t = bisect.bisect_right(state.masses, -new_prob, key=_neg)
        state.masses.insert(t, new_prob)
        state.elements.insert(t, x)
        _prune(state)
    elif new_prob > state.max_outside:
        state.max_outside = new_prob
    return state


def check_state(state: SolverState) -> None:
    """Raise :class:`InvariantViolation` if the candidate breaks a loop invariant."""
    masses = state.masses
    if any(a < b for a, b in zip(masses, masses[1:])):
        raise InvariantViolation("candidate masses are not non-increasing")
    if len(set(state.elements)) != len(state.elements):
        raise InvariantViolation("candidate elements are not distinct")
    if masses:
        running = 0.0
        for m in masses[:-1]:
            running += m
        if running >= state.cover_prob:
            raise InvariantViolation("candidate violates moderation")
        if running + masses[-1] < state.cover_prob:
            raise InvariantViolation("candidate violates coverage")
        if masses[-1] < state.max_outside:
            raise InvariantViolation("candidate violates inner-boundedness")
    if not 0.0 <= state.out_prob <= 1.0:
        raise InvariantViolation(f"out_prob {state.out_prob!r} outside [0, 1]")
    if not state.exhausted and state.n_visited != state.k + state.iter:
        raise InvariantViolation("visited count does not match k + iter")


def _should_continue(state: SolverState) -> tuple[bool, bool]:
    """Return ``(go, mandatory)`` for the next step.

    Mandatory steps are the outer-boundedness loop. Optional steps keep
    walking while the unvisited mass could still hide an element tied with
    ``min_prob``, so the variation set is complete.
    """
    if state.exhausted:
        return False, False
    if state.min_prob < state.out_prob:
        return True, True
    if state.out_prob > 0.0 and state.out_prob >= state.min_prob * (1.0 - TIE_RTOL):
        return True, False
    return False, False


def _ties(xs, ms, min_prob: float) -> tuple[int, ...]:
    if not math.isfinite(min_prob):
        return ()
    return tuple(sorted(x for x, m in zip(xs, ms) if m > 0.0 and masses_tie(m, min_prob)))


def _finish(state: SolverState, mf: MassFunction, warnings: list[str]) -> HdrResult:
    region = tuple(sorted(state.elements))
    variation = _ties(state.visited_x, state.visited_m, state.min_prob)
    in_region = set(region)
    return HdrResult(
        region=region,
        coverage=math.fsum(state.masses),
        cover_prob=state.cover_prob,
        region_size=len(region),
        search_set_size=state.n_visited,
        variation_set=variation,
        required_from_variation=sum(1 for v in variation if v in in_region),
        warnings=warnings,
        iterations=state.iter,
        k=state.k,
        min_prob=state.min_prob,
        out_prob=state.out_prob,
        label=mf.label,
        search_set=state.visited_x,
        search_masses=state.visited_m,
    )


def _full_support(mf: MassFunction, seq: SequenceFunction, iter_cap: int) -> HdrResult:
    state = SolverState(cover_prob=1.0)
    if seq.kind == "custom":
        state.seen = set()
    warnings: list[str] = []
    bounded = seq.length is not None
    total = 0.0
    i = 0
    while True:
        if bounded:
            if i >= seq.length:
                break
        elif 1.0 - total <= i * sys.float_info.epsilon:
            # remaining mass is within accumulated rounding error
            break
        if i >= iter_cap:
            if bounded:
                raise TerminationError(i, max(0.0, 1.0 - total), math.inf)
            break
        i += 1
        x, m = _visit(state, mf, seq, i)
        total += m
        if m > 0.0:
            state.elements.append(x)
            state.masses.append(m)
    if not state.masses:
        raise ImproperPmfError("no element with positive mass was found")
    if not bounded:
        warnings.append(FULL_SUPPORT_WARNING)
    state.k = i
    state.min_prob = min(state.masses)
    state.out_prob = max(0.0, 1.0 - total)
    order = sorted(range(len(state.masses)), key=lambda j: -state.masses[j])
    state.elements = [state.elements[j] for j in order]
    state.masses = [state.masses[j] for j in order]
    return _finish(state, mf, warnings)


def compute_cscr(
    mf: MassFunction,
    cover_prob: float,
    seq: SequenceFunction | None = None,
    *,
    iter_cap: int = DEFAULT_ITER_CAP,
    debug: bool = False,
) -> HdrResult:
    """Compute a canonical smallest covering region with coverage >= ``cover_prob``.

    Parameters
    ----------
    mf : MassFunction
        Mass function over the integers.
    cover_prob : float
        Minimum coverage probability in ``[0, 1]``.
    seq : SequenceFunction, optional
        Enumeration of the support; defaults to ``make_sequence`` over the
        declared bounds of ``mf``.
    iter_cap : int
        Maximum number of visited elements before giving up with
        :class:`TerminationError`.
    debug : bool
        Check the loop invariants after every step and periodically
        recompute ``out_prob`` with compensated summation.

    Returns
    -------
    HdrResult
    """
    if not 0.0 <= cover_prob <= 1.0 or math.isnan(cover_prob):
        raise PreconditionError(f"cover_prob must lie in [0, 1], got {cover_prob}")
    if seq is None:
        seq = make_sequence(*support_bounds(mf))
    if cover_prob == 1.0:
        return _full_support(mf, seq, iter_cap)

    state = initial_candidate(mf, seq, cover_prob, iter_cap)
    warnings: list[str] = []
    if debug:
        check_state(state)
    while True:
        go, mandatory = _should_continue(state)
        if not go:
            break
        if state.n_visited >= iter_cap:
            if mandatory:
                raise TerminationError(state.n_visited, state.out_prob, state.min_prob)
            warnings.append(
                "iteration cap reached while looking for elements tied with the minimum "
                "mass; the variation set may be incomplete"
            )
            break
        step(state, mf, seq)
        if debug:
            if state.iter % DRIFT_CHECK_EVERY == 0 and not state.exhausted:
                state.out_prob = max(0.0, 1.0 - math.fsum(state.visited_m))
            check_state(state)
    return _finish(state, mf, warnings)


def variation_set(result: HdrResult, mf: MassFunction | None = None, seq=None) -> tuple[int, ...]:
    """Visited elements whose mass ties the lightest region mass.

    With ``mf`` given the masses are re-evaluated over the search set (first
    ``search_set_size`` elements of ``seq``, or the stored search set);
    otherwise the masses recorded during the run are used.
    """
    if not result.region:
        return ()
    if mf is None:
        xs, ms = result.search_set, result.search_masses
    else:
        if seq is None:
            xs = list(result.search_set)
        else:
            xs = [seq_element(seq, i) for i in range(1, result.search_set_size + 1)]
        ms = [eval_mass(mf, x) for x in xs]
    lookup = dict(zip(xs, ms))
    min_prob = min(lookup[x] for x in result.region)
    return _ties(xs, ms, min_prob)


def enumerate_canonical(result: HdrResult, cap: int = DEFAULT_ENUM_CAP) -> list[tuple[int, ...]]:
    """All canonical regions obtained by swapping within the variation set."""
    variation = result.variation_set
    n, r = len(variation), result.required_from_variation
    count = math.comb(n, r)
    if count > cap:
        raise EnumerationTooLargeError(f"C({n}, {r}) = {count} canonical regions exceeds cap {cap}")
    core = set(result.region).difference(variation)
    return [tuple(sorted(core.union(chosen))) for chosen in itertools.combinations(variation, r)]
