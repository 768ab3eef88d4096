"""Batch command-line front end.

Four subcommands: ``estimate`` (unrestricted and order-restricted
incidence curves), ``test`` (the sequential ordered test), ``band``
(a simultaneous confidence band for one group), and ``simulate``
(Monte Carlo studies from a scenario file).  JSON is the canonical
output; CSV is a flat projection for plotting.  Every output embeds the
resolved configuration, the seed, and the package version, and is byte
identical across reruns and worker counts.

Exit codes: 0 success, 1 usage or configuration error, 2 malformed
input data (line numbered), 3 numerical range or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__
from .bands import compute_band
from .data import ingest_csv, pooled_event_grid
from .errors import (
    ConfigError,
    DataError,
    DomainError,
    OrderedCifError,
    PreconditionError,
    RangeError,
)
from .estimators import cif_censored
from .isotonic import restrict_cifs
from .ordered_test import sequential_test
from .simulate import load_scenario, run_study

USAGE_EXIT = 1
DATA_EXIT = 2
NUMERIC_EXIT = 3


class _Parser(argparse.ArgumentParser):
    """argparse maps usage errors to exit code 2; this artifact keeps 2
    for data errors, so usage errors leave with code 1 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ordered-cif", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_io(p, groups=True):
        p.add_argument("--input", required=True, help="input CSV (group,time,cause)")
        if groups:
            p.add_argument(
                "--groups",
                required=True,
                help="comma-separated labels in the hypothesized order",
            )
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument(
            "--format", choices=("json", "csv"), default="json",
            help="json is canonical; csv is a flat projection",
        )

    p_est = sub.add_parser("estimate", help="incidence curves, both causes, "
                           "plus the order-restricted cause-1 curves")
    add_io(p_est)

    p_test = sub.add_parser("test", help="sequential ordered test")
    add_io(p_test)
    p_test.add_argument("--alpha", type=float, default=0.05)
    p_test.add_argument(
        "--method", choices=("auto", "analytic", "resampled"), default="auto"
    )
    p_test.add_argument("--reps", type=int, default=10000,
                        help="multiplier replicates for the resampled method")
    p_test.add_argument("--seed", type=int, default=0)
    p_test.add_argument("--horizon", type=float, default=None)

    p_band = sub.add_parser("band", help="simultaneous confidence band for one group")
    add_io(p_band)
    p_band.add_argument("--group", required=True, help="label of the banded group")
    p_band.add_argument("--alpha", type=float, default=0.05)
    p_band.add_argument("--interval", default=None, metavar="T1,T2")
    p_band.add_argument("--transform", default="identity",
                        choices=("identity", "log", "cloglog", "logit"))
    p_band.add_argument("--weight", default="unit", choices=("unit", "inverse-sd"))
    p_band.add_argument("--center", default="unrestricted",
                        choices=("unrestricted", "restricted"))
    p_band.add_argument("--reps", type=int, default=1000)
    p_band.add_argument("--seed", type=int, default=0)

    p_sim = sub.add_parser("simulate", help="Monte Carlo study from a scenario file")
    p_sim.add_argument("--input", required=True, help="scenario JSON or TOML")
    p_sim.add_argument("--out", help="output path (default: stdout)")
    p_sim.add_argument("--format", choices=("json", "csv"), default="json")

    return parser


def _split_groups(raw: str) -> list[str]:
    labels = [part.strip() for part in raw.split(",")]
    if any(not label for label in labels):
        raise ConfigError(f"bad --groups value {raw!r}")
    return labels


def _config_echo(args) -> dict:
    # the output destination never affects the result, so leaving it out
    # keeps runs that differ only in --out byte identical
    skip = {"command", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _run_estimate(args) -> tuple[dict, str]:
    dataset = ingest_csv(args.input, _split_groups(args.groups))
    grid = pooled_event_grid(dataset)
    cif1 = [cif_censored(g, 1) for g in dataset.groups]
    cif2 = [cif_censored(g, 2) for g in dataset.groups]
    restricted = restrict_cifs(cif1, dataset.sizes, grid)
    result = {
        "unrestricted": [
            {
                "label": g.label,
                "n": g.n,
                "cause1": c1.f_hat.to_dict(),
                "cause2": c2.f_hat.to_dict(),
            }
            for g, c1, c2 in zip(dataset.groups, cif1, cif2)
        ],
        "restricted": [
            {
                "label": est.group_label,
                "n": est.n,
                "restricted": True,
                "cause1": est.f_hat.to_dict(),
            }
            for est in restricted.estimates
        ],
    }
    return result, "estimate"


def _run_test(args) -> tuple[dict, str]:
    dataset = ingest_csv(args.input, _split_groups(args.groups))
    report = sequential_test(
        dataset,
        method=args.method,
        b_replicates=args.reps,
        seed=args.seed,
        horizon=args.horizon,
    )
    return report.to_dict(), "test"


def _run_band(args) -> tuple[dict, str]:
    labels = _split_groups(args.groups)
    dataset = ingest_csv(args.input, labels)
    if args.group not in labels:
        raise ConfigError(
            f"--group {args.group!r} is not one of the declared groups {labels}"
        )
    interval = None
    if args.interval is not None:
        parts = args.interval.split(",")
        if len(parts) != 2:
            raise ConfigError(f"--interval must be T1,T2, got {args.interval!r}")
        try:
            interval = (float(parts[0]), float(parts[1]))
        except ValueError:
            raise ConfigError(f"non-numeric --interval {args.interval!r}") from None
    band = compute_band(
        dataset,
        labels.index(args.group),
        alpha=args.alpha,
        interval=interval,
        transform=args.transform,
        weight=args.weight,
        center=args.center,
        b_replicates=args.reps,
        seed=args.seed,
    )
    return band.to_dict(), "band"


def _run_simulate(args) -> tuple[dict, str]:
    report = run_study(load_scenario(args.input))
    return report.to_dict(), "simulate"


def _csv_projection(kind: str, result: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if kind == "estimate":
        writer.writerow(["section", "group", "cause", "t", "value"])
        for section in ("unrestricted", "restricted"):
            for entry in result[section]:
                for cause_key in ("cause1", "cause2"):
                    if cause_key not in entry:
                        continue
                    for point in entry[cause_key]["points"]:
                        writer.writerow(
                            [section, entry["label"], cause_key[-1],
                             repr(point["t"]), repr(point["value"])]
                        )
    elif kind == "test":
        writer.writerow(["rank", "t", "value"])
        for pair in result["pairs"]:
            for point in pair["process"]["points"]:
                writer.writerow(
                    [pair["rank"], repr(point["t"]), repr(point["value"])]
                )
    elif kind == "band":
        writer.writerow(["t", "lower", "center", "upper"])
        for low, mid, upp in zip(
            result["lower"]["points"],
            result["center_estimate"]["points"],
            result["upper"]["points"],
        ):
            writer.writerow(
                [repr(low["t"]), repr(low["value"]),
                 repr(mid["value"]), repr(upp["value"])]
            )
    elif kind == "simulate":
        cells = result["cells"]
        header = sorted({key for cell in cells for key in cell})
        writer.writerow(header)
        for cell in cells:
            writer.writerow([repr(cell[k]) if k in cell else "" for k in header])
    return buf.getvalue()


def _emit(args, kind: str, result: dict) -> None:
    payload = {
        "artifact": {"name": "ordered-cif", "version": __version__},
        "command": kind,
        "config": _config_echo(args),
        "result": result,
    }
    if args.format == "json":
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        text = _csv_projection(kind, result)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


_RUNNERS = {
    "estimate": _run_estimate,
    "test": _run_test,
    "band": _run_band,
    "simulate": _run_simulate,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        result, kind = _RUNNERS[args.command](args)
        _emit(args, kind, result)
    except DataError as exc:
        print(f"ordered-cif: data error: {exc}", file=sys.stderr)
        return DATA_EXIT
    except ConfigError as exc:
        print(f"ordered-cif: error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (RangeError, DomainError, PreconditionError) as exc:
        print(f"ordered-cif: numerical error: {exc}", file=sys.stderr)
        return NUMERIC_EXIT
    except OrderedCifError as exc:
        print(f"ordered-cif: error: {exc}", file=sys.stderr)
        return NUMERIC_EXIT
    except OSError as exc:
        print(f"ordered-cif: file error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    return 0


if __name__ == "__main__":
    sys.exit(main())
