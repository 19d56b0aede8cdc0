"""Entry point: python -m src.cli {validate,double,group-double,compare} ...

Exit codes: 0 every certificate passed, 1 a certificate or computation failed,
2 the input could not be read or is invalid.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from src.pipeline.double_pipeline import INPUT_ERRORS, DoublePipeline, resolve_group
from src.reporting.schemas import Report
from src.reporting.summarizer import render
from src.utils.config import Settings, load_settings
from src.utils.errors import DoubleError

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", type=Path, default=None, help="Write the machine-readable report to this path.")
    common.add_argument("--tolerance", type=float, default=None, help="Override DOUBLE_TOLERANCE.")
    common.add_argument("--seed", type=int, default=None, help="Override DOUBLE_SEED.")
    common.add_argument("--no-timings", action="store_true", help="Omit wall-clock timings from the report.")

    group_args = argparse.ArgumentParser(add_help=False)
    group_args.add_argument("--cyclic", type=int, default=None, help="Use the cyclic group of this order.")
    group_args.add_argument("--symmetric", type=int, default=None, help="Use the symmetric group of this degree.")

    parser = argparse.ArgumentParser(
        prog="python -m src.cli",
        description="Drinfeld center, tube algebra and modular data of spherical fusion categories.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="Check the axioms of a category file.")
    p.add_argument("category", type=Path, help="Category file, or the name of one under DOUBLE_DATA_DIR/categories.")

    p = sub.add_parser("double", parents=[common], help="Simple objects and modular data of the double.")
    p.add_argument("category", type=Path, help="Category file, or the name of one under DOUBLE_DATA_DIR/categories.")

    p = sub.add_parser("group-double", parents=[common, group_args], help="Modular data of D(G) on the Hopf side.")
    p.add_argument("group", type=Path, nargs="?", default=None)

    p = sub.add_parser("compare", parents=[common, group_args], help="Cross-check the double of Vec_G against D(G).")
    p.add_argument("category", type=Path, help="Category file, or the name of one under DOUBLE_DATA_DIR/categories.")
    p.add_argument("group", type=Path, nargs="?", default=None)
    return parser


def effective_settings(args: argparse.Namespace, base: Optional[Settings] = None) -> Settings:
    settings = base or load_settings()
    updates = {}
    if args.tolerance is not None:
        updates["tolerance"] = args.tolerance
    if args.seed is not None:
        updates["seed"] = args.seed
    return Settings(**{**settings.model_dump(), **updates})


def run_command(args: argparse.Namespace, pipeline: DoublePipeline) -> Report:
    if args.command == "validate":
        return pipeline.validate(args.category)
    if args.command == "double":
        return pipeline.double(args.category)
    group = resolve_group(args.group, args.cyclic, args.symmetric, pipeline.settings.data_dir)
    if args.command == "group-double":
        return pipeline.group_double(group)
    return pipeline.compare(args.category, group)


def emit(report: Report, json_path: Optional[Path]) -> None:
    print(render(report))
    if json_path is not None:
        json_path.parent.mkdir(parents=True, exist_ok=True)
        json_path.write_text(report.model_dump_json(indent=2), encoding="utf-8")
        logger.info(f"JSON report written to {json_path}")


def main(argv: Optional[List[str]] = None, settings: Optional[Settings] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = effective_settings(args, settings)
    except ValueError as e:
        print(f"invalid settings: {e}", file=sys.stderr)
        return EXIT_INPUT

    logging.basicConfig(level=settings.log_level.upper(), format="%(asctime)s - %(levelname)s - %(message)s")
    pipeline = DoublePipeline(settings, timings=not args.no_timings)
    try:
        report = run_command(args, pipeline)
    except INPUT_ERRORS as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"input error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT
    except DoubleError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"failed: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAILED

    emit(report, args.json)
    if not report.passed:
        logger.error(f"First failure: {report.failure}")
        return EXIT_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
