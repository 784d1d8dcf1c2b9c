"""Probability mass functions over the integers.

A :class:`MassFunction` pairs an evaluator ``x -> f(x)`` with declared support
bounds. Bounds are ints, or ``-math.inf`` / ``math.inf`` for unbounded sides.
Built-in families follow the usual R conventions (geometric and negative
binomial count failures before the target number of successes).
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import TextIO

from .errors import (
    DuplicateKeyError,
    ImproperPmfError,
    InvalidMassError,
    MixtureSpecError,
    TableFormatError,
)

Bound = int | float

TABLE_TOL = 1e-9
MIXTURE_WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class MassFunction:
    evaluator: Callable[[int], float]
    supp_min: Bound = -math.inf
    supp_max: Bound = math.inf
    label: str = "a discrete distribution"
    # only set for table-backed instances
    table: Mapping[int, float] | None = field(default=None, compare=False, repr=False)

    def __call__(self, x: int) -> float:
        return eval_mass(self, x)

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.supp_min) and math.isfinite(self.supp_max)


@dataclass(frozen=True)
class MixtureSpec:
    components: tuple[tuple[float, MassFunction], ...]

    def __init__(self, components: Iterable[tuple[float, MassFunction]]):
        object.__setattr__(self, "components", tuple((float(w), c) for w, c in components))


def eval_mass(mf: MassFunction, x: int) -> float:
    """Return ``f(x)``, zero outside the declared bounds.

    Raises :class:`InvalidMassError` if the evaluator returns a negative or
    non-finite value.
    """
    if x < mf.supp_min or x > mf.supp_max:
        return 0.0
    mass = mf.evaluator(x)
    if not (mass >= 0.0) or math.isinf(mass):
        raise InvalidMassError(x, mass)
    return float(mass)


def support_bounds(mf: MassFunction) -> tuple[Bound, Bound]:
    return mf.supp_min, mf.supp_max


def _fmt(v: float) -> str:
    return f"{v:g}"


# ---------------------------------------------------------------------------
# Families


def poisson(lam: float) -> MassFunction:
    if not (lam > 0) or not math.isfinite(lam):
        raise ValueError(f"Poisson rate must be positive and finite, got {lam}")
    log_lam = math.log(lam)

    def pmf(x: int) -> float:
        return math.exp(x * log_lam - lam - math.lgamma(x + 1))

    return MassFunction(pmf, 0, math.inf, f"Pois({_fmt(lam)})")


def binomial(n: int, p: float) -> MassFunction:
    if int(n) != n or n < 0:
        raise ValueError(f"binomial size must be a non-negative integer, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"binomial probability must lie in [0, 1], got {p}")
    n = int(n)
    q = 1.0 - p
    label = f"Bin({n}, {_fmt(p)})"
    if p == 0.0 or p == 1.0:
        return MassFunction(lambda x: 1.0 if x == (0 if p == 0.0 else n) else 0.0, 0, n, label)
    if n <= 1000:

        def pmf(x: int) -> float:
            return math.comb(n, x) * p**x * q ** (n - x)

    else:
        log_p, log_q, lg_n = math.log(p), math.log1p(-p), math.lgamma(n + 1)

        def pmf(x: int) -> float:
            return math.exp(
                lg_n - math.lgamma(x + 1) - math.lgamma(n - x + 1) + x * log_p + (n - x) * log_q
            )

    return MassFunction(pmf, 0, n, label)


def geometric(p: float) -> MassFunction:
    """Failures before the first success."""
    if not 0.0 < p <= 1.0:
        raise ValueError(f"geometric probability must lie in (0, 1], got {p}")
    q = 1.0 - p
    return MassFunction(lambda x: p * q**x, 0, math.inf, f"Geom({_fmt(p)})")


def negative_binomial(r: float, p: float) -> MassFunction:
    """Failures before the ``r``-th success; ``r`` may be non-integral."""
    if not (r > 0) or not math.isfinite(r):
        raise ValueError(f"negative binomial size must be positive, got {r}")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"negative binomial probability must lie in (0, 1], got {p}")
    label = f"NegBin({_fmt(r)}, {_fmt(p)})"
    if p == 1.0:
        return MassFunction(lambda x: 1.0 if x == 0 else 0.0, 0, math.inf, label)
    log_p, log_q, lg_r = math.log(p), math.log1p(-p), math.lgamma(r)

    def pmf(x: int) -> float:
        return math.exp(math.lgamma(x + r) - lg_r - math.lgamma(x + 1) + r * log_p + x * log_q)

    return MassFunction(pmf, 0, math.inf, label)


def hypergeometric(N: int, K: int, n: int) -> MassFunction:
    """Successes in ``n`` draws without replacement from ``N`` items, ``K`` of them successes."""
    for name, v in (("N", N), ("K", K), ("n", n)):
        if int(v) != v or v < 0:
            raise ValueError(f"hypergeometric {name} must be a non-negative integer, got {v}")
    N, K, n = int(N), int(K), int(n)
    if K > N or n > N:
        raise ValueError(f"hypergeometric needs K <= N and n <= N, got N={N}, K={K}, n={n}")
    total = math.comb(N, n)

    def pmf(x: int) -> float:
        # exact integer ratio, correctly rounded
        return math.comb(K, x) * math.comb(N - K, n - x) / total

    return MassFunction(pmf, max(0, n - (N - K)), min(n, K), f"Hyper({N}, {K}, {n})")


def discrete_uniform(a: int, b: int) -> MassFunction:
    if int(a) != a or int(b) != b:
        raise ValueError("uniform bounds must be integers")
    a, b = int(a), int(b)
    if a > b:
        raise ValueError(f"uniform needs a <= b, got a={a}, b={b}")
    mass = 1.0 / (b - a + 1)
    return MassFunction(lambda x: mass, a, b, f"Unif({a}, {b})")


def point_mass(x0: int) -> MassFunction:
    if int(x0) != x0:
        raise ValueError(f"point mass location must be an integer, got {x0}")
    x0 = int(x0)
    return MassFunction(lambda x: 1.0 if x == x0 else 0.0, x0, x0, f"Point({x0})")


# ---------------------------------------------------------------------------
# Mixtures and tables


def make_mixture(spec: MixtureSpec | Iterable[tuple[float, MassFunction]], label: str | None = None) -> MassFunction:
    """Finite mixture ``sum_i w_i f_i(x)``; bounds are the componentwise extremes."""
    if not isinstance(spec, MixtureSpec):
        spec = MixtureSpec(spec)
    comps = spec.components
    if not comps:
        raise MixtureSpecError("a mixture needs at least one component")
    for w, _ in comps:
        if not 0.0 < w <= 1.0:
            raise MixtureSpecError(f"mixture weight {w} outside (0, 1]")
    total = math.fsum(w for w, _ in comps)
    if abs(total - 1.0) > MIXTURE_WEIGHT_TOL:
        raise MixtureSpecError(f"mixture weights sum to {total!r}, not 1")

    def pmf(x: int) -> float:
        return sum(w * eval_mass(c, x) for w, c in comps)

    if label is None:
        label = " + ".join(f"{_fmt(w)}*{c.label}" for w, c in comps)
    return MassFunction(
        pmf,
        min(c.supp_min for _, c in comps),
        max(c.supp_max for _, c in comps),
        label,
    )


def from_table(
    masses: Mapping[int, float] | Iterable[tuple[int, float]],
    label: str = "a tabulated distribution",
    renormalize: bool = False,
) -> MassFunction:
    """Table-backed mass function; unlisted integers have mass zero.

    With ``renormalize=True`` an improper table is rescaled to total mass 1
    instead of being rejected.
    """
    items = masses.items() if isinstance(masses, Mapping) else masses
    table: dict[int, float] = {}
    for x, m in items:
        if x in table:
            raise DuplicateKeyError(f"element {x} listed more than once")
        m = float(m)
        if not (m >= 0.0) or math.isinf(m):
            raise InvalidMassError(x, m)
        table[int(x)] = m
    total = math.fsum(table.values())
    if not table or total <= 0.0:
        raise ImproperPmfError("table has no positive mass")
    if abs(total - 1.0) > TABLE_TOL:
        if not renormalize:
            raise ImproperPmfError(f"table masses sum to {total!r}, not 1")
        table = {x: m / total for x, m in table.items()}
    frozen = MappingProxyType(table)
    get = frozen.get
    return MassFunction(lambda x: get(x, 0.0), min(table), max(table), label, table=frozen)


def load_pmf_table(source: TextIO | str, renormalize: bool = False, label: str | None = None) -> MassFunction:
    """Read ``<integer>,<mass>`` records; ``#`` lines and blank lines are skipped."""
    text = source if isinstance(source, str) else source.read()
    records: list[tuple[int, float]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise TableFormatError(f"line {lineno}: expected '<integer>,<mass>', got {raw!r}")
        try:
            x = int(parts[0].strip())
            m = float(parts[1].strip())
        except ValueError:
            raise TableFormatError(f"line {lineno}: expected '<integer>,<mass>', got {raw!r}") from None
        records.append((x, m))
    return from_table(records, label or "a tabulated distribution", renormalize=renormalize)
