"""Command line front end.

    twdet tabulate      F1, F2, F4, F1 (Painleve route) and F_SA on a grid
    twdet verify        run the operator-identity suite, JSON report
    twdet sample-goe    GOE largest-eigenvalue samples with a KS summary
    twdet sample-tasep  TASEP height samples with a KS summary

Exit status: 0 success, 1 identity or statistical failure, 2 usage or
parameter error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import distributions as tw
from .ecdf import EmpiricalCdf, ks_distance
from .errors import ParameterError, TwdetError
from .goe import GoeSampleSpec, sample_goe_xi
from .proof_checks import CHECK_NAMES, reports_to_json, run_suite
from .sample_io import format_number, write_samples
from .tasep import sample_tasep_xi

__all__ = ["RunConfig", "main", "tabulate_rows", "grid_points"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
TABULATE_HEADER = ("s", "F1", "F2", "F4", "F1_painleve", "F_SA")
TABULATE_RANGE = (tw.U_RANGE[0], tw.S_RANGE[1])
MAX_INVALID_FRACTION = 0.01
FAULT_SIZE = 1e-3


@dataclass
class RunConfig:
    command: str
    s_min: float = -6.0
    s_max: float = 6.0
    s_step: float = 0.5
    n_nodes: int = 80
    seed: int = 0
    output_path: str = "-"
    format: str = "csv"
    count: int = 1000
    dim: int = 200
    time: float = 512.0
    tolerance: float = 0.08
    checks: Optional[tuple] = None
    inject_fault: bool = False
    phase: int = 0
    workers: int = 1

    def validate(self):
        if not 16 <= self.n_nodes <= 512:
            raise ParameterError("--nodes must lie in [16, 512]")
        if self.format not in ("csv", "json"):
            raise ParameterError("--format must be csv or json")
        if self.command == "tabulate":
            if not (math.isfinite(self.s_min) and math.isfinite(self.s_max)) or self.s_min > self.s_max:
                raise ParameterError("need finite --s-min <= --s-max")
            if not self.s_step > 0:
                raise ParameterError("--s-step must be positive")
        if self.count < 0:
            raise ParameterError("--count must be non-negative")


def grid_points(s_min: float, s_max: float, step: float) -> list:
    """s_min, s_min + step, ... up to s_max inclusive; empty when s_min == s_max."""
    if s_min == s_max:
        return []
    count = int(math.floor((s_max - s_min) / step + 1e-9))
    return [s_min + k * step for k in range(count + 1)]


def tabulate_rows(points, n: int = 80) -> list:
    rows = []
    for s in points:
        if not TABULATE_RANGE[0] <= s <= TABULATE_RANGE[1]:
            raise ParameterError(f"s = {s} outside the tabulation range {TABULATE_RANGE}")
        rows.append((s, tw.f1(s, n), tw.f2(s, n), tw.f4(s, n), tw.f1_painleve(s, n=n), tw.f_sa_direct(s, n)))
    return rows


@contextlib.contextmanager
def _output(path: str):
    if path == "-":
        yield sys.stdout
        return
    # build in memory first so a failed run does not leave a partial file
    buf = io.StringIO()
    yield buf
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(buf.getvalue())


def cmd_tabulate(config: RunConfig) -> int:
    rows = tabulate_rows(grid_points(config.s_min, config.s_max, config.s_step), config.n_nodes)
    with _output(config.output_path) as out:
        if config.format == "json":
            out.write(json.dumps([dict(zip(TABULATE_HEADER, r)) for r in rows], indent=2) + "\n")
        else:
            out.write(",".join(TABULATE_HEADER) + "\n")
            for r in rows:
                out.write(",".join(format_number(v) for v in r) + "\n")
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    if config.checks is not None and len(config.checks) == 0:
        reports = []
    else:
        fault = FAULT_SIZE if config.inject_fault else 0.0
        reports = run_suite(checks=config.checks, n=config.n_nodes, fault=fault)
    with _output(config.output_path) as out:
        out.write(reports_to_json(reports) + "\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _summarize(values, tolerance: float):
    arr = np.asarray(values, dtype=float)
    arr = arr[~np.isnan(arr)]
    if arr.size == 0:
        return None, False
    ks = ks_distance(EmpiricalCdf(arr), tw.tw_cdf)
    return ks, ks < tolerance


def cmd_sample(config: RunConfig) -> int:
    if config.command == "sample-goe":
        spec = GoeSampleSpec(config.dim, config.count, config.seed)
        values = sample_goe_xi(spec, workers=config.workers)
        metadata = {"ensemble": "goe", "N": config.dim, "count": config.count, "seed": config.seed,
                    "scaling": "(E1-2N)/N^(1/3)"}
        invalid_ok = True
    else:
        batch = sample_tasep_xi(config.time, config.count, config.seed, phase=config.phase, workers=config.workers)
        values = batch.values
        metadata = {"process": "tasep-half-flat", "t": format_number(config.time), "count": config.count,
                    "seed": config.seed, "phase": config.phase, "site": -int(round(1.5 * config.time)),
                    "scaling": "2(t/2-h)/t^(1/3)"}
        invalid_ok = batch.invalid_fraction <= MAX_INVALID_FRACTION
    ks, passed = _summarize(values, config.tolerance)
    passed = passed and invalid_ok
    with _output(config.output_path) as out:
        write_samples(out, values, config.seed, metadata, ks, config.tolerance, passed)
    if not invalid_ok:
        print(f"error: more than {MAX_INVALID_FRACTION:.0%} of the runs hit the window boundary", file=sys.stderr)
    return EXIT_OK if passed else EXIT_FAIL


def _parse_checks(text: Optional[str]):
    if text is None:
        return None
    names = tuple(c.strip() for c in text.split(",") if c.strip())
    unknown = [c for c in names if c not in CHECK_NAMES]
    if unknown:
        raise ParameterError(f"unknown checks {unknown}; choose from {', '.join(CHECK_NAMES)}")
    return names


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twdet", description="Tracy-Widom distributions via Fredholm determinants.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--nodes", type=int, default=80, help="quadrature nodes (16..512)")
    common.add_argument("--out", default="-", help="output file, '-' for stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    tab = sub.add_parser("tabulate", parents=[common], help="tabulate the distribution functions")
    tab.add_argument("--s-min", type=float, default=-6.0)
    tab.add_argument("--s-max", type=float, default=6.0)
    tab.add_argument("--s-step", type=float, default=0.5)

    ver = sub.add_parser("verify", parents=[common], help="run the operator-identity suite")
    ver.add_argument("--checks", default=None, help=f"comma separated subset of {','.join(CHECK_NAMES)}")
    ver.add_argument("--inject-fault", action="store_true", help="perturb the kernel by 1e-3 exp(-x-y)")

    sampling = argparse.ArgumentParser(add_help=False, parents=[common])
    sampling.add_argument("--seed", type=int, default=0)
    sampling.add_argument("--count", type=int, default=1000)
    sampling.add_argument("--tolerance", type=float, default=0.08, help="KS pass threshold")
    sampling.add_argument("--workers", type=int, default=1)

    goe = sub.add_parser("sample-goe", parents=[sampling], help="GOE largest-eigenvalue samples")
    goe.add_argument("--dim", type=int, default=200, help="matrix dimension N")

    tas = sub.add_parser("sample-tasep", parents=[sampling], help="half-flat TASEP height samples")
    tas.add_argument("--time", type=float, default=512.0, help="final time t (3t/2 integer)")
    tas.add_argument("--phase", type=int, choices=(0, 1), default=0, help="initial pattern phase")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(args.command, n_nodes=args.nodes, output_path=args.out, format=args.format)
    if args.command == "tabulate":
        cfg.s_min, cfg.s_max, cfg.s_step = args.s_min, args.s_max, args.s_step
    elif args.command == "verify":
        cfg.checks = _parse_checks(args.checks)
        cfg.inject_fault = args.inject_fault
    else:
        cfg.seed, cfg.count, cfg.tolerance, cfg.workers = args.seed, args.count, args.tolerance, args.workers
        if args.command == "sample-goe":
            cfg.dim = args.dim
        else:
            cfg.time, cfg.phase = args.time, args.phase
    return cfg


COMMANDS = {"tabulate": cmd_tabulate, "verify": cmd_verify, "sample-goe": cmd_sample, "sample-tasep": cmd_sample}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        config = config_from_args(args)
        config.validate()
        return COMMANDS[config.command](config)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TwdetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
