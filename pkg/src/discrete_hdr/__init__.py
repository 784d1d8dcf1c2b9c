"""Canonical smallest covering regions (discrete HDRs) for distributions on the integers."""

from .errors import HdrError, TerminationError
from .hdr_core import (
    CandidateRegion,
    HdrResult,
    SolverState,
    compute_cscr,
    enumerate_canonical,
    initial_candidate,
    step,
    variation_set,
)
from .mass_model import (
    MassFunction,
    MixtureSpec,
    binomial,
    discrete_uniform,
    eval_mass,
    from_table,
    geometric,
    hypergeometric,
    load_pmf_table,
    make_mixture,
    negative_binomial,
    point_mass,
    poisson,
    support_bounds,
)
from .region_format import IntegerIntervalSet, render_text, to_intervals
from .sequencing import SequenceFunction, custom_sequence, make_sequence, seq_element
from .verification import (
    ConditionReport,
    check_lemmas,
    check_theorem1,
    oracle_exhaustive,
    oracle_greedy,
)

__version__ = "0.1.0"
