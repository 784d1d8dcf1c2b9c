"""Command-line front end: ``hdr --dist SPEC --cover-prob P``.

Distribution specs::

    pois(12)  binom(10, 0.52)  geom(0.3)  nbinom(3, 0.4)  hyper(50, 20, 10)
    unif(1, 6)  point(5)  mix(0.3:pois(12), 0.7:binom(40, 0.5))  @table.csv

Exit status is 0 on success, 1 for bad input, 2 when the iteration cap is
reached before the stopping rule holds.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass
from pathlib import Path

from . import mass_model as mm
from .errors import DistSpecError, HdrError, TerminationError
from .hdr_core import DEFAULT_ITER_CAP, HdrResult, compute_cscr, enumerate_canonical
from .mass_model import MassFunction
from .region_format import render_text, to_intervals
from .sequencing import make_sequence
from .verification import ConditionReport, check_lemmas, check_theorem1

_TOKEN = re.compile(
    r"\s*(?:(?P<num>[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<punct>[(),:]))"
)

# name -> (constructor, arity, integer argument positions)
FAMILIES = {
    "pois": (mm.poisson, 1, ()),
    "binom": (mm.binomial, 2, (0,)),
    "geom": (mm.geometric, 1, ()),
    "nbinom": (mm.negative_binomial, 2, ()),
    "hyper": (mm.hypergeometric, 3, (0, 1, 2)),
    "unif": (mm.discrete_uniform, 2, (0, 1)),
    "point": (mm.point_mass, 1, (0,)),
}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if m is None:
                start = len(text) - len(text[pos:].lstrip())
                raise DistSpecError("unexpected character", text, start)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", len(self.text))

    def take(self, kind: str, value: str | None = None):
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            found = tok[1] or "end of input"
            raise DistSpecError(f"expected {want!r}, found {found!r}", self.text, tok[2])
        self.i += 1
        return tok

    def number(self) -> tuple[float, int]:
        _, val, pos = self.take("num")
        return float(val), pos

    def spec(self) -> MassFunction:
        _, name, pos = self.take("name")
        name = name.lower()
        self.take("punct", "(")
        if name == "mix":
            mf = self._mixture(pos)
        elif name in FAMILIES:
            mf = self._family(name, pos)
        else:
            raise DistSpecError(f"unknown family {name!r}", self.text, pos)
        self.take("punct", ")")
        return mf

    def _family(self, name: str, pos: int) -> MassFunction:
        ctor, arity, int_args = FAMILIES[name]
        args: list[float] = []
        while True:
            value, vpos = self.number()
            if len(args) in int_args:
                if value != int(value):
                    raise DistSpecError(f"{name} argument {len(args) + 1} must be an integer", self.text, vpos)
                value = int(value)
            args.append(value)
            if self.peek()[1] != ",":
                break
            self.take("punct", ",")
        if len(args) != arity:
            raise DistSpecError(f"{name} takes {arity} argument(s), got {len(args)}", self.text, pos)
        try:
            return ctor(*args)
        except (ValueError, HdrError) as exc:
            raise DistSpecError(f"bad parameters for {name}: {exc}", self.text, pos) from None

    def _mixture(self, pos: int) -> MassFunction:
        parts = []
        while True:
            weight, _ = self.number()
            self.take("punct", ":")
            parts.append((weight, self.spec()))
            if self.peek()[1] != ",":
                break
            self.take("punct", ",")
        try:
            return mm.make_mixture(parts)
        except HdrError as exc:
            raise DistSpecError(f"bad mixture: {exc}", self.text, pos) from None


def parse_dist_spec(text: str, renormalize: bool = False) -> MassFunction:
    """Parse a distribution spec, or ``@path`` for a PMF table file."""
    stripped = text.strip()
    if stripped.startswith("@"):
        path = Path(stripped[1:])
        with open(path, encoding="utf-8") as fh:
            return mm.load_pmf_table(fh, renormalize=renormalize, label=f"the distribution in {path.name}")
    parser = _Parser(text)
    mf = parser.spec()
    tok = parser.peek()
    if tok[0] != "end":
        raise DistSpecError("trailing input", text, tok[2])
    return mf


@dataclass
class CliConfig:
    dist_spec: str
    cover_prob: float
    supp_min: int | None = None
    supp_max: int | None = None
    output_format: str = "text"
    all_solutions: bool = False
    check: bool = False
    iter_cap: int = DEFAULT_ITER_CAP
    seed: int = 0
    emit_masses: str | None = None
    renormalize: bool = False


def _result_dict(result: HdrResult) -> dict:
    return {
        "label": result.label,
        "cover_prob": result.cover_prob,
        "coverage": result.coverage,
        "intervals": [{"lower": lo, "upper": hi} for lo, hi in to_intervals(result.region)],
        "region_size": result.region_size,
        "search_set_size": result.search_set_size,
        "variation_set": list(result.variation_set),
        "required_from_variation": result.required_from_variation,
        "warnings": list(result.warnings),
        "iterations": result.iterations,
    }


def _render(config: CliConfig, result: HdrResult, solutions, report: ConditionReport | None, lemmas_ok) -> str:
    fmt = config.output_format
    if fmt == "json":
        payload = _result_dict(result)
        if solutions is not None:
            payload["solutions"] = [
                [{"lower": lo, "upper": hi} for lo, hi in to_intervals(s)] for s in solutions
            ]
        if report is not None:
            check = {k: (v if not isinstance(v, float) or math.isfinite(v) else None) for k, v in report.as_dict().items()}
            payload["check"] = {**check, "lemmas_ok": lemmas_ok}
        return json.dumps(payload, indent=2, ensure_ascii=False, allow_nan=False)

    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["solution", "lower", "upper"])
        for k, region in enumerate([result.region] + list(solutions or [])):
            for lo, hi in to_intervals(region):
                writer.writerow([k, lo, hi])
        if report is not None:
            writer.writerow([])
            writer.writerow(["condition", "value"])
            for key, value in {**report.as_dict(), "lemmas_ok": lemmas_ok}.items():
                writer.writerow([key, value])
        return buf.getvalue().rstrip("\n")

    lines = [render_text(result)]
    if solutions is not None:
        lines += ["", f"Canonical smallest covering regions ({len(solutions)}):"]
        lines += [f"  [{k}] {to_intervals(s)}" for k, s in enumerate(solutions, 1)]
    if report is not None:
        lines += ["", "Conditions:"]
        lines += [f"  {key} = {value}" for key, value in report.as_dict().items()]
        lines.append(f"  lemmas_ok = {lemmas_ok}")
    return "\n".join(lines)


def _write_masses(path: str, result: HdrResult) -> None:
    region = set(result.region)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "mass", "in_region"])
        for x, m in zip(result.search_set, result.search_masses):
            writer.writerow([x, repr(m), int(x in region)])


def run_cli(config: CliConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        if not 0.0 <= config.cover_prob <= 1.0:
            raise DistSpecError(f"cover probability must lie in [0, 1], got {config.cover_prob}")
        mf = parse_dist_spec(config.dist_spec, renormalize=config.renormalize)
        lo = mf.supp_min if config.supp_min is None else config.supp_min
        hi = mf.supp_max if config.supp_max is None else config.supp_max
        result = compute_cscr(mf, config.cover_prob, make_sequence(lo, hi), iter_cap=config.iter_cap)
        solutions = enumerate_canonical(result) if config.all_solutions else None
        report = lemmas_ok = None
        if config.check:
            report = check_theorem1(mf, result.region, config.cover_prob, result.search_set)
            lemmas_ok = check_lemmas(mf, result.region, config.cover_prob, result.search_set, seed=config.seed)
        if config.emit_masses:
            _write_masses(config.emit_masses, result)
    except TerminationError as exc:
        print(f"hdr: error: {exc}", file=stderr)
        return 2
    except (HdrError, OSError) as exc:
        print(f"hdr: error: {exc}", file=stderr)
        return 1
    print(_render(config, result, solutions, report, lemmas_ok), file=stdout)
    return 0


class _ArgumentParser(argparse.ArgumentParser):
    # usage errors share exit status 1 with other input errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="hdr", description="Smallest covering region of a discrete distribution.")
    p.add_argument("--dist", required=True, help="distribution spec, or @path to a PMF table")
    p.add_argument("--cover-prob", type=float, required=True, help="minimum coverage probability in [0, 1]")
    p.add_argument("--supp-min", type=int, help="override the lower support bound")
    p.add_argument("--supp-max", type=int, help="override the upper support bound")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--all-solutions", action="store_true", help="list every canonical region")
    p.add_argument("--check", action="store_true", help="append the certificate report")
    p.add_argument("--iter-cap", type=int, default=DEFAULT_ITER_CAP, help="maximum visited elements")
    p.add_argument("--seed", type=int, default=0, help="seed for the randomized lemma checks")
    p.add_argument("--emit-masses", metavar="PATH", help="write x,mass,in_region over the search set")
    p.add_argument("--renormalize", action="store_true", help="rescale PMF tables that do not sum to 1")
    return p


def config_from_args(args: argparse.Namespace) -> CliConfig:
    return CliConfig(
        dist_spec=args.dist,
        cover_prob=args.cover_prob,
        supp_min=args.supp_min,
        supp_max=args.supp_max,
        output_format=args.format,
        all_solutions=args.all_solutions,
        check=args.check,
        iter_cap=args.iter_cap,
        seed=args.seed,
        emit_masses=args.emit_masses,
        renormalize=args.renormalize,
    )


def main(argv=None) -> int:
    return run_cli(config_from_args(build_parser().parse_args(argv)))


if __name__ == "__main__":
    sys.exit(main())
