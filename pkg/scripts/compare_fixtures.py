#!/usr/bin/env python3
"""Run both layout modes on every shipped fixture and write the artifacts.

Produces, under out/ (created next to this script's repo root):
  <fixture>_fd.svg / <fixture>_fl.svg   both renderings
  <fixture>_compare.json                two-mode layout document with reports
  <fixture>_table.txt                   the aligned metric table

Usage: python3 scripts/compare_fixtures.py [--seed 11] [--out out]
"""

import argparse
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from strata.analysis import compare_report
from strata.engine import LayoutConfig, LayoutMode
from strata.model import parse_dataset
from strata.render import StyleSpec, export_layout_json, to_svg


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=11)
    parser.add_argument("--out", default="out")
    args = parser.parse_args()

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    for fixture in sorted((REPO / "fixtures").glob("*.json")):
        dataset = parse_dataset(fixture.read_text(encoding="utf-8"))
        result = compare_report(
            dataset,
            LayoutConfig(mode=LayoutMode.FORCE_DIRECTED, seed=args.seed),
            LayoutConfig(mode=LayoutMode.FORCE_LAYERED, seed=args.seed),
        )
        stem = fixture.stem
        style = StyleSpec(label_visibility="all")
        (out_dir / f"{stem}_fd.svg").write_text(to_svg(result.fd_layout, dataset, style))
        (out_dir / f"{stem}_fl.svg").write_text(to_svg(result.fl_layout, dataset, style))
        reports = {"force_directed": result.fd_report, "force_layered": result.fl_report}
        (out_dir / f"{stem}_compare.json").write_text(
            export_layout_json([result.fd_layout, result.fl_layout], dataset, reports)
        )
        (out_dir / f"{stem}_table.txt").write_text(result.table())
        print(f"== {stem} (seed {args.seed})")
        print(result.table())
    return 0


if __name__ == "__main__":
    sys.exit(main())
