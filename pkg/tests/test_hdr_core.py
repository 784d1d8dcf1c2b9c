import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discrete_hdr import (
    binomial,
    compute_cscr,
    custom_sequence,
    discrete_uniform,
    enumerate_canonical,
    from_table,
    geometric,
    initial_candidate,
    make_sequence,
    negative_binomial,
    point_mass,
    poisson,
    step,
    variation_set,
)
from discrete_hdr.errors import (
    DuplicateElementError,
    EnumerationTooLargeError,
    ImproperPmfError,
    PreconditionError,
    TerminationError,
)
from discrete_hdr.hdr_core import SolverState, check_state, masses_tie
from discrete_hdr.mass_model import MassFunction

from conftest import random_table

BIN10_HALF_EXACT = [Fraction(math.comb(10, x), 1024) for x in range(11)]


def brute_force(masses: dict[int, float], cover_prob: float):
    """Smallest size, best coverage and all optimal subsets by itertools."""
    xs = [x for x, m in masses.items() if m > 0]
    for size in range(len(xs) + 1):
        best, sols = -1.0, []
        for combo in itertools.combinations(xs, size):
            p = math.fsum(masses[x] for x in combo)
            if p < cover_prob:
                continue
            if p > best + 1e-12:
                best, sols = p, [combo]
            elif abs(p - best) <= 1e-12:
                sols.append(combo)
        if sols:
            return size, best, sorted(tuple(sorted(s)) for s in sols)
    raise AssertionError("no covering subset")


class TestInitialCandidate:
    def test_point_mass(self):
        state = initial_candidate(point_mass(5), make_sequence(5, 5), 0.9)
        assert state.k == 1
        assert state.candidate.entries == ((5, 1.0),)
        assert state.out_prob == 0.0
        assert state.iter == 0

    def test_zero_cover_prob(self):
        state = initial_candidate(poisson(3), make_sequence(0, math.inf), 0.0)
        assert state.k == 0
        assert len(state.candidate) == 0
        assert state.out_prob == 1.0
        assert state.min_prob == math.inf

    def test_binomial_prefix_length(self):
        # prefix sums of C(10,x)/1024: {0..6} = 848/1024 < 0.9 <= {0..7} = 968/1024
        assert float(sum(BIN10_HALF_EXACT[:7])) < 0.9 <= float(sum(BIN10_HALF_EXACT[:8]))
        state = initial_candidate(binomial(10, 0.5), make_sequence(0, 10), 0.9)
        assert state.k == 8
        assert state.out_prob == pytest.approx(56 / 1024, abs=1e-15)
        # sorted and cut back to the shortest prefix reaching 0.9
        assert state.candidate.elements == (5, 4, 6, 3, 7, 2)
        assert state.min_prob == 45 / 1024

    def test_early_light_element_is_pruned(self):
        # sequence order 0.02, 0.5, 0.45, ...: the first three reach 0.9 but
        # {0.5, 0.45} alone already does
        mf = from_table({0: 0.02, 1: 0.5, 2: 0.45, 3: 0.01, 4: 0.01, 5: 0.01})
        state = initial_candidate(mf, make_sequence(0, 5), 0.9)
        assert state.k == 3
        assert state.candidate.elements == (1, 2)
        check_state(state)
        result = compute_cscr(mf, 0.9)
        assert result.region == (1, 2)

    def test_exhausted_finite_sequence(self):
        mf = MassFunction(lambda x: 0.1, 0, 4)
        with pytest.raises(ImproperPmfError):
            initial_candidate(mf, make_sequence(0, 4), 0.9)

    def test_cover_prob_one_rejected(self):
        with pytest.raises(PreconditionError):
            initial_candidate(poisson(1), make_sequence(0, math.inf), 1.0)


class TestStep:
    def _state(self, entries, cover_prob, k):
        state = SolverState(cover_prob=cover_prob, k=k)
        state.elements = [x for x, _ in entries]
        state.masses = [m for _, m in entries]
        state.min_prob = state.masses[-1]
        state.out_prob = 0.5
        state.visited_x.extend(range(1, k + 1))
        return state

    def test_insert_and_prune(self):
        masses = {1: 0.5, 2: 0.3, 3: 0.15, 4: 0.4}
        mf = MassFunction(lambda x: masses.get(x, 0.0), 1, 4)
        state = self._state([(1, 0.5), (2, 0.3), (3, 0.15)], 0.9, 3)
        step(state, mf, make_sequence(1, 4))
        assert state.candidate.entries == ((1, 0.5), (4, 0.4))
        assert state.min_prob == 0.4
        assert state.iter == 1
        assert state.next_index == 5
        assert state.out_prob == pytest.approx(0.1)

    def test_zero_mass_element(self):
        mf = MassFunction(lambda x: 0.0 if x == 4 else 0.3, 1, 4)
        state = self._state([(1, 0.3), (2, 0.3), (3, 0.3)], 0.85, 3)
        before = state.candidate
        step(state, mf, make_sequence(1, 4))
        assert state.candidate == before
        assert state.out_prob == 0.5
        assert state.iter == 1

    def test_equal_mass_not_inserted(self):
        mf = MassFunction(lambda x: 0.25, 1, 4)
        state = self._state([(1, 0.25), (2, 0.25)], 0.5, 2)
        step(state, mf, make_sequence(1, 4))
        assert state.candidate.elements == (1, 2)

    def test_exhaustion_sets_out_prob_zero(self):
        mf = MassFunction(lambda x: 0.5, 1, 2)
        state = self._state([(1, 0.5)], 0.5, 2)
        step(state, mf, make_sequence(1, 2))
        assert state.out_prob == 0.0
        assert state.exhausted
        assert state.candidate.elements == (1,)


class TestComputeCscr:
    def test_poisson_mixture(self, poisson_mixture):
        result = compute_cscr(poisson_mixture, 0.9, make_sequence(0, math.inf), debug=True)
        assert result.region == tuple(range(7, 18)) + tuple(range(21, 48))
        assert result.coverage == pytest.approx(0.9063, abs=1e-4)
        assert result.region_size == 38

    def test_point_mass(self):
        result = compute_cscr(point_mass(5), 0.99)
        assert result.region == (5,)
        assert result.coverage == 1.0
        assert result.variation_set == (5,)

    def test_binomial_half(self):
        result = compute_cscr(binomial(10, 0.5), 0.9, debug=True)
        assert result.region_size == 6
        assert set(range(3, 8)) <= set(result.region)
        assert len(set(result.region) & {2, 8}) == 1
        assert result.coverage == pytest.approx(float(sum(BIN10_HALF_EXACT[2:8])), abs=1e-15)
        assert result.coverage == pytest.approx(0.93457, abs=1e-5)
        assert result.variation_set == (2, 8)
        assert result.required_from_variation == 1
        size, best, sols = brute_force({x: float(m) for x, m in enumerate(BIN10_HALF_EXACT)}, 0.9)
        assert size == result.region_size and sols == [tuple(range(2, 8)), tuple(range(3, 9))]

    def test_binomial_052_unique(self):
        mf = binomial(10, 0.52)
        result = compute_cscr(mf, 0.9, debug=True)
        size, best, sols = brute_force({x: mf(x) for x in range(11)}, 0.9)
        assert sols == [result.region]
        assert result.coverage == pytest.approx(best, abs=1e-12)
        lightest = min(result.region, key=mf)
        assert result.variation_set == (lightest,)

    def test_cover_prob_zero(self):
        result = compute_cscr(poisson(4), 0.0)
        assert result.region == ()
        assert result.coverage == 0.0
        assert result.search_set_size == 0
        assert enumerate_canonical(result) == [()]

    def test_cover_prob_one_finite(self):
        mf = from_table({0: 0.25, 1: 0.0, 2: 0.25, 5: 0.5})
        result = compute_cscr(mf, 1.0)
        assert result.region == (0, 2, 5)
        assert result.warnings == []

    def test_cover_prob_one_infinite_warns(self):
        result = compute_cscr(poisson(3), 1.0)
        assert result.warnings and "support of the distribution" in result.warnings[0]
        assert set(range(0, 15)) <= set(result.region)

    @pytest.mark.parametrize("p", [-0.1, 1.1, math.nan])
    def test_bad_cover_prob(self, p):
        with pytest.raises(PreconditionError):
            compute_cscr(poisson(1), p)

    def test_iteration_cap(self):
        # lower bound above the mode: the walk never reaches the missing mass
        with pytest.raises(TerminationError) as info:
            compute_cscr(poisson(3), 0.5, make_sequence(10, math.inf), iter_cap=1000)
        assert info.value.visited == 1000

    def test_iteration_cap_in_main_loop(self):
        mf = from_table({0: 0.4, 1: 0.2, 5000: 0.4})
        with pytest.raises(TerminationError):
            compute_cscr(mf, 0.5, make_sequence(0, math.inf), iter_cap=100)
        assert compute_cscr(mf, 0.5, make_sequence(0, math.inf)).region == (0, 5000)

    def test_custom_sequence_duplicate(self):
        seq = custom_sequence(lambda i: i % 3)
        with pytest.raises(DuplicateElementError):
            compute_cscr(poisson(20), 0.9, seq)

    def test_custom_sequence_from_the_mode(self):
        # walk outward from 40 instead of 0
        seq = custom_sequence(lambda i: 40 + (i // 2 if i % 2 else -(i // 2)))
        mf = poisson(40)
        a = compute_cscr(mf, 0.9, seq)
        b = compute_cscr(mf, 0.9)
        assert a.region == b.region
        assert a.search_set_size < b.search_set_size

    def test_tied_atoms_found_after_stopping_rule(self):
        # out_prob ties min_prob after the main loop: keep walking to collect
        # every tied element
        result = compute_cscr(discrete_uniform(1, 4), 0.5)
        assert result.variation_set == (1, 2, 3, 4)
        assert result.required_from_variation == 2
        assert len(enumerate_canonical(result)) == 6

    def test_spike_far_in_tail(self):
        mf = from_table({0: 0.5, 100_000: 0.5})
        result = compute_cscr(mf, 0.5, make_sequence(0, math.inf))
        assert result.region == (0,)
        assert result.variation_set == (0, 100_000)


class TestVariationAndEnumeration:
    def test_variation_set_recomputed(self):
        mf = binomial(10, 0.5)
        result = compute_cscr(mf, 0.9)
        assert variation_set(result) == (2, 8)
        assert variation_set(result, mf, make_sequence(0, 10)) == (2, 8)

    def test_enumerate_binomial(self):
        result = compute_cscr(binomial(10, 0.5), 0.9)
        regions = enumerate_canonical(result)
        assert regions == [tuple(range(2, 8)), tuple(range(3, 9))]
        mf = binomial(10, 0.5)
        covs = [math.fsum(mf(x) for x in r) for r in regions]
        assert max(covs) - min(covs) <= 1e-12

    def test_unique_solution(self):
        result = compute_cscr(binomial(10, 0.52), 0.9)
        assert enumerate_canonical(result) == [result.region]

    def test_uniform_six_regions_match_brute_force(self):
        result = compute_cscr(discrete_uniform(1, 4), 0.5)
        _, _, sols = brute_force({x: 0.25 for x in range(1, 5)}, 0.5)
        assert sorted(enumerate_canonical(result)) == sols
        assert len(sols) == 6

    def test_enumeration_cap(self):
        result = compute_cscr(discrete_uniform(1, 30), 0.5)
        assert math.comb(30, 15) > 10**4
        with pytest.raises(EnumerationTooLargeError):
            enumerate_canonical(result)
        assert len(enumerate_canonical(compute_cscr(discrete_uniform(1, 10), 0.5), cap=10**6)) == 252

    def test_masses_tie(self):
        assert masses_tie(0.1, 0.1 + 1e-14)
        assert not masses_tie(0.1, 0.1 + 1e-9)


def test_random_tables_match_brute_force():
    rng = np.random.default_rng(11)
    for _ in range(300):
        size = int(rng.integers(1, 10))
        table = random_table(rng, size, offset=int(rng.integers(-5, 5)))
        cover = float(rng.choice([0.3, 0.5, 0.8, 0.9, 0.95]))
        result = compute_cscr(table, cover, debug=True)
        opt, best, sols = brute_force(dict(table.table), cover)
        assert result.region_size == opt
        assert result.coverage == pytest.approx(best, abs=1e-12)
        assert result.region in sols


@settings(max_examples=200, deadline=None)
@given(
    weights=st.lists(st.integers(0, 6), min_size=1, max_size=9).filter(lambda w: sum(w) > 0),
    cover_num=st.integers(0, 19),
)
def test_tie_heavy_tables(weights, cover_num):
    """Small-integer weights create many exact ties; every enumerated region
    must be a brute-force optimum and vice versa."""
    total = sum(weights)
    # dyadic denominators keep the masses exact
    denom = 1 << (total - 1).bit_length()
    masses = {x: w / denom for x, w in enumerate(weights)}
    masses[len(weights)] = (denom - total) / denom
    table = from_table(masses)
    cover = cover_num / 20
    result = compute_cscr(table, cover, debug=True)
    opt, best, sols = brute_force(masses, cover)
    assert result.region_size == opt
    assert sorted(enumerate_canonical(result, cap=10**6)) == sols


def test_monotone_in_cover_prob():
    battery = [poisson(5), geometric(0.3), negative_binomial(3, 0.4), binomial(30, 0.2)]
    levels = [0.1, 0.3, 0.5, 0.7, 0.8, 0.9, 0.95, 0.99]
    for mf in battery:
        results = [compute_cscr(mf, p) for p in levels]
        for a, b in zip(results, results[1:]):
            assert a.region_size <= b.region_size
            assert a.coverage <= b.coverage


def test_debug_mode_over_long_walk():
    # 20000 zero-mass steps (past the periodic drift recomputation) before
    # the heavy atom displaces the light one
    mf = from_table({0: 0.5, 1: 0.1, 20_000: 0.4})
    result = compute_cscr(mf, 0.55, make_sequence(0, math.inf), debug=True)
    assert result.region == (0, 20_000)
    assert result.search_set_size == 20_001
