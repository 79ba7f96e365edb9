"""Command-line entry point.

Exit codes: 0 success, 2 parse/validation failure or unknown ids, 3
numerical failure, 4 service startup failure. All artifacts are pure
functions of the arguments and input files.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .analysis import build_report, compare_report, common_neighbors, most_connected, snapshot_at_year
from .engine import LayoutConfig, LayoutMode, config_from_dict, run
from .errors import (
    CycleError,
    DatasetSyntaxError,
    NumericalError,
    SchemaError,
    SpecError,
    StrataError,
    UnknownNodeError,
    ValidationError,
)
from .generator import GeneratorSpec, synth_family
from .layering import CyclePolicy, HierarchySpec, assign_layers
from .model import GraphDataset, parse_dataset, serialize_dataset
from .render import StyleSpec, export_layout_json, export_trace, to_svg

DEFAULT_PORT = 8088


def _load_dataset(path: str) -> GraphDataset:
    return parse_dataset(Path(path).read_text(encoding="utf-8"))


def _hierarchy_from_args(args: argparse.Namespace) -> HierarchySpec:
    kwargs = {}
    if getattr(args, "hierarchy", None):
        kwargs["generational_kinds"] = frozenset(args.hierarchy.split(","))
    if getattr(args, "colevel", None):
        kwargs["co_level_kinds"] = frozenset(args.colevel.split(","))
    return HierarchySpec(**kwargs)


def _parse_override(raw: str):
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            continue
    return raw


def _config_from_args(args: argparse.Namespace, mode: LayoutMode) -> LayoutConfig:
    overrides: dict = {"mode": mode.value, "seed": args.seed}
    for item in getattr(args, "set", None) or []:
        key, sep, raw = item.partition("=")
        if not sep:
            raise SpecError(f"--set expects key=value, got {item!r}")
        overrides[key] = _parse_override(raw)
    return config_from_dict(overrides)


def _mode_from_flag(value: str) -> LayoutMode:
    return LayoutMode(value.replace("-", "_"))


def cmd_layout(args: argparse.Namespace) -> int:
    dataset = _load_dataset(args.dataset)
    mode = _mode_from_flag(args.mode)
    config = _config_from_args(args, mode)
    spec = _hierarchy_from_args(args)
    layers = assign_layers(dataset, spec, CyclePolicy.REJECT) if mode is LayoutMode.FORCE_LAYERED else None
    layout = run(dataset, config, layers=layers, record_trace=args.trace is not None)
    report = build_report(layout, dataset, layers)
    if args.svg:
        Path(args.svg).write_text(to_svg(layout, dataset, StyleSpec()), encoding="utf-8")
    if args.json:
        Path(args.json).write_text(export_layout_json(layout, dataset), encoding="utf-8")
    if args.trace:
        Path(args.trace).write_text(export_trace(layout), encoding="utf-8")
    violation = "-" if report.layer_violation is None else f"{report.layer_violation:.3f}"
    print(
        f"{mode.value} ticks={layout.ticks_run} crossings={report.edge_crossings} "
        f"overlaps={report.node_overlaps} stress={report.stress:.6f} layer_violation={violation}"
    )
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    dataset = _load_dataset(args.dataset)
    spec = _hierarchy_from_args(args)
    result = compare_report(
        dataset,
        LayoutConfig(mode=LayoutMode.FORCE_DIRECTED, seed=args.seed),
        LayoutConfig(mode=LayoutMode.FORCE_LAYERED, seed=args.seed),
        spec,
    )
    if args.json:
        reports = {"force_directed": result.fd_report, "force_layered": result.fl_report}
        text = export_layout_json([result.fd_layout, result.fl_layout], dataset, reports)
        Path(args.json).write_text(text, encoding="utf-8")
    print(result.table(), end="")
    return 0


def cmd_query(args: argparse.Namespace) -> int:
    dataset = _load_dataset(args.dataset)
    if args.what == "most-connected":
        for pid in most_connected(dataset):
            print(pid)
    elif args.what == "common":
        shared = common_neighbors(dataset, args.a, args.b)
        for pid in dataset.ids:
            if pid in shared:
                print(pid)
    elif args.what == "snapshot":
        sub = snapshot_at_year(dataset, args.year)
        if args.json:
            Path(args.json).write_text(serialize_dataset(sub), encoding="utf-8")
        for pid in sub.ids:
            print(pid)
    return 0


def cmd_layers(args: argparse.Namespace) -> int:
    dataset = _load_dataset(args.dataset)
    spec = _hierarchy_from_args(args)
    assignment = assign_layers(dataset, spec, CyclePolicy.REJECT)
    for pid in dataset.ids:
        print(f"{pid}\t{assignment.layer_of[pid]}")
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    spec = GeneratorSpec(
        n_families=args.families,
        generations=args.generations,
        children_mean=args.children_mean,
        intermarriage_rate=args.intermarriage,
        godparent_rate=args.godparent,
        seed=args.seed,
    )
    dataset = synth_family(spec)
    text = serialize_dataset(dataset)
    if args.json:
        Path(args.json).write_text(text, encoding="utf-8")
        print(f"wrote {len(dataset.persons)} persons, {len(dataset.relations)} relations to {args.json}")
    else:
        print(text, end="")
    return 0


def resolve_port(flag: int | None) -> int:
    """The --port flag wins over STRATA_PORT, which wins over the default."""
    if flag is not None:
        return flag
    env = os.environ.get("STRATA_PORT")
    return int(env) if env else DEFAULT_PORT


def cmd_serve(args: argparse.Namespace) -> int:
    from .server import serve  # deferred: uvicorn import is heavy

    dataset = _load_dataset(args.dataset)
    return serve(dataset, resolve_port(args.port))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="strata", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_hierarchy_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--hierarchy", help="comma-separated generational kinds (default parent_of)")
        p.add_argument("--colevel", help="comma-separated co-level kinds (default spouse_of)")

    p = sub.add_parser("layout", help="compute one layout and write svg/json/trace")
    p.add_argument("dataset")
    p.add_argument("--mode", choices=["force-directed", "force-layered"], default="force-directed")
    p.add_argument("--seed", type=int, default=11)
    add_hierarchy_flags(p)
    p.add_argument("--svg")
    p.add_argument("--json")
    p.add_argument("--trace")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config field")
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("compare", help="run both modes with a shared seed and print the metric table")
    p.add_argument("dataset")
    p.add_argument("--seed", type=int, default=11)
    add_hierarchy_flags(p)
    p.add_argument("--json")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("query", help="structural queries over a dataset")
    p.add_argument("dataset")
    qsub = p.add_subparsers(dest="what", required=True)
    q = qsub.add_parser("most-connected")
    q.set_defaults(func=cmd_query)
    q = qsub.add_parser("common")
    q.add_argument("a")
    q.add_argument("b")
    q.set_defaults(func=cmd_query)
    q = qsub.add_parser("snapshot")
    q.add_argument("year", type=int)
    q.add_argument("--json")
    q.set_defaults(func=cmd_query)

    p = sub.add_parser("layers", help="print the id -> layer table")
    p.add_argument("dataset")
    add_hierarchy_flags(p)
    p.set_defaults(func=cmd_layers)

    p = sub.add_parser("synth", help="generate a synthetic genealogy dataset")
    p.add_argument("--families", type=int, default=2)
    p.add_argument("--generations", type=int, default=3)
    p.add_argument("--children-mean", type=float, default=2.0)
    p.add_argument("--intermarriage", type=float, default=0.2)
    p.add_argument("--godparent", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("serve", help="serve the HTTP API and viewer")
    p.add_argument("dataset")
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        for violation in exc.violations:
            print(str(violation), file=sys.stderr)
        return 2
    except (DatasetSyntaxError, SchemaError, UnknownNodeError, CycleError, SpecError, FileNotFoundError) as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(str(exc), file=sys.stderr)
        return 3
    except StrataError as exc:
        print(str(exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
