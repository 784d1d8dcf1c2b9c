import re

import numpy as np
import pytest

from discrete_hdr import from_table, make_mixture, poisson

POISSON_MIXTURE_SPEC = "mix(0.3:pois(12), 0.3:pois(28), 0.4:pois(40))"


def random_table(rng: np.random.Generator, size: int, offset: int = 0):
    """Finite table with ``size`` random positive masses normalised to 1."""
    raw = rng.random(size) + 1e-3
    masses = raw / raw.sum()
    # fold rounding error into the largest atom so the table is proper
    masses[np.argmax(masses)] += 1.0 - masses.sum()
    return from_table({offset + i: float(m) for i, m in enumerate(masses)}, label=f"random table ({size})")


def parse_interval_text(body: str) -> list[tuple[int, int]]:
    """Inverse of the interval rendering, for round-trip tests."""
    if body.strip() == "∅":
        return []
    out = []
    for part in body.split(", "):
        m = re.fullmatch(r"(-?\d+)\.\.(-?\d+)", part)
        if m:
            out.append((int(m.group(1)), int(m.group(2))))
        else:
            out.append((int(part), int(part)))
    return out


@pytest.fixture
def poisson_mixture():
    return make_mixture([(0.3, poisson(12)), (0.3, poisson(28)), (0.4, poisson(40))])


_acceptance_outcomes: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        _acceptance_outcomes[report.nodeid] = (report.nodeid.split("::")[-1], report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance_outcomes.values():
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
