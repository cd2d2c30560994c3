"""
Command-line front end.

    kgprop eval  --scenario F.json --kind F --out k.csv
    kgprop suite --scenario F.json --suite identities --out r.json
    kgprop scan  --family scarf --mu 0.5:2.5:0.5 --m 1 --out s.csv

Exit codes: 0 success, 1 a suite check failed, 2 invalid input, 3 numerical failure.
"""

import argparse
import csv
import hashlib
import json
import logging
import math
import numbers
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from kgprop import __version__
from kgprop.config import ConfigBuilder, KgpropConfig
from kgprop.errors import KgpropNumericalError, KgpropValidationError
from kgprop.models.potential import ModeReport, Potential
from kgprop.models.scenario import Scenario, Suite, canonical_json_bytes
from kgprop.runners import runner_for
from kgprop.schrodinger1d import scattering_coefficients
from kgprop.spacetimes.base import sample

logger = logging.getLogger("kgprop.cli")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

SCAN_FAMILIES = ("scarf", "zero")
SCAN_COLUMNS = ["parameter", "m", "abs_b_plus", "abs_b_minus", "special"]


def format_value(value: Any) -> str:
    """CSV cell text: integers as is, reals with 17 significant digits, booleans as true/false."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        return "%.17g" % float(value)
    return str(value)


def write_csv(path: Path, digest: str, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    """Write a metadata comment line, the header and the rows."""
    with path.open("w", newline="", encoding="utf-8") as f:
        f.write(f"# kgprop {__version__} scenario={digest}\n")
        w = csv.writer(f, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([format_value(x) for x in row])


def write_json(path: Path, payload: Dict[str, Any]) -> None:
    with path.open("w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")


def parse_range(text: str) -> List[float]:
    """
    Parse "start:stop:step" (stop included), "x" or "x,y,...".

    Raises:
        KgpropValidationError: For malformed input or a non-positive step.
    """
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if not step > 0 or stop < start:
                raise KgpropValidationError(f"range {text!r} needs start <= stop and a positive step", field="range")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [start + i * step for i in range(count)]
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise KgpropValidationError(f"cannot parse range {text!r}", field="range") from None


def cmd_eval(scenario: Scenario, kind: str, out: Path, config: KgpropConfig) -> int:
    """Evaluate one kernel kind on the scenario grid and write it as CSV."""
    runner = runner_for(scenario, config)
    rows = runner.kernel_rows(kind)
    write_csv(out, scenario.digest, runner.columns, rows)
    logger.info("wrote %d rows of %s to %s", len(rows), kind, out)
    return EXIT_OK


def cmd_suite(scenario: Scenario, suite: str, out: Path, config: KgpropConfig) -> int:
    """Run one check battery and write its JSON report; exit 0 iff every check passes."""
    report = runner_for(scenario, config).run_suite(suite)
    write_json(out, {"kgprop": __version__, **report.to_dict()})
    logger.info("%s suite: %d checks, pass=%s", report.suite.value, len(report.checks), report.passed)
    return EXIT_OK if report.passed else EXIT_FAILED


def _scan_potential(family: str, parameter: float) -> Potential:
    if family == "scarf":
        return Potential.scarf(parameter)
    return Potential.zero(parameter)


def cmd_scan(
    family: str,
    parameters: Sequence[float],
    masses: Sequence[float],
    out: Path,
    config: KgpropConfig,
    tol: Optional[float] = None,
) -> int:
    """
    Reflection coefficients of a potential family over a parameter and mass grid.

    The family parameter is the Scarf index for "scarf" and the constant offset
    for "zero". Rows are ordered by parameter, then mass.
    """
    if family not in SCAN_FAMILIES:
        raise KgpropValidationError(f"Unknown family {family!r}, expected one of {', '.join(SCAN_FAMILIES)}", field="family")
    if not parameters or not masses:
        raise KgpropValidationError("scan needs at least one parameter and one mass", field="range")
    cfg = config if tol is None else replace(config, reflection_tol=tol)
    cfg.validate()

    def one(parameter: float) -> List[ModeReport]:
        potential = _scan_potential(family, parameter)
        reports = []
        for m in masses:
            data = scattering_coefficients(potential, m, cfg)
            reports.append(
                ModeReport(
                    parameter=parameter,
                    m=m,
                    b_plus=abs(data.b_plus),
                    b_minus=abs(data.b_minus),
                    special=data.is_reflectionless(cfg.reflection_tol),
                )
            )
        return reports

    reports = [r for batch in sample(one, list(parameters), cfg) for r in batch]
    request = {
        "family": family,
        "parameters": list(parameters),
        "masses": list(masses),
        "tol": cfg.reflection_tol,
    }
    digest = hashlib.sha256(canonical_json_bytes(request)).hexdigest()
    write_csv(out, digest, SCAN_COLUMNS, [[r.parameter, r.m, r.b_plus, r.b_minus, r.special] for r in reports])
    logger.info("%s scan: %d of %d rows special", family, sum(r.special for r in reports), len(reports))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kgprop", description="Klein-Gordon propagators on model spacetimes.")
    p.add_argument("--version", action="version", version=f"kgprop {__version__}")
    p.add_argument("--seed", type=int, default=None, help="Seed of the randomized checks (overrides the scenario).")
    p.add_argument("--threads", type=int, default=None, help="Worker cap (default: $KGPROP_THREADS or 1).")
    p.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for debug output.")
    sub = p.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="Evaluate a kernel on the scenario grid (CSV).")
    ev.add_argument("--scenario", type=Path, required=True)
    ev.add_argument("--kind", required=True, help="PJ, Ret, Adv, F, Fbar, Pos, Neg, Sym, SymA, PJA, OpF or OpFbar.")
    ev.add_argument("--out", type=Path, required=True)

    su = sub.add_parser("suite", help="Run a check battery (JSON report).")
    su.add_argument("--scenario", type=Path, required=True)
    su.add_argument("--suite", required=True, choices=[s.value for s in Suite])
    su.add_argument("--out", type=Path, required=True)

    sc = sub.add_parser("scan", help="Reflection coefficients over a potential family (CSV).")
    sc.add_argument("--family", required=True, choices=SCAN_FAMILIES)
    sc.add_argument("--mu", "--param", dest="param", default="0", help="Family parameter range, e.g. 0.5:2.5:0.5.")
    sc.add_argument("--m", required=True, help="Mass range, e.g. 1 or 0.5:2:0.5.")
    sc.add_argument("--tol", type=float, default=None, help="Reflectionless threshold (default: reflection_tol).")
    sc.add_argument("--out", type=Path, required=True)
    return p


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        builder = ConfigBuilder().with_debug(args.verbose > 1)
        if args.threads is not None:
            builder.with_threads(args.threads)
        base = builder.build_with_validation()

        if args.command == "scan":
            config = base if args.seed is None else replace(base, seed=args.seed)
            return cmd_scan(args.family, parse_range(args.param), parse_range(args.m), args.out, config, args.tol)

        scenario = Scenario.load(args.scenario)
        config = scenario.configure(base)
        if args.seed is not None:
            config = replace(config, seed=args.seed)
        if args.command == "eval":
            return cmd_eval(scenario, args.kind, args.out, config)
        return cmd_suite(scenario, args.suite, args.out, config)
    except KgpropValidationError as e:
        print(f"kgprop: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except KgpropNumericalError as e:
        print(f"kgprop: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as e:
        print(f"kgprop: cannot write {e.filename}: {e.strerror}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
