"""
Harness Main Entry Point

Command-line interface for the experiments:
- perceive: tilt-estimation accuracy per peg
- dual-policy: insertion success rates with and without alignment
- grad-check: finite-difference verification of all gradients
- calibrate-dt: inference step-size sweep
- render: contact-area image dump
"""

import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import orjson
from pydantic import ValidationError

from harness.experiments import RUNNERS, ExperimentResult
from harness.schemas import ExperimentConfig
from tactile.config import get_settings
from tactile.exceptions import TactileError

logger = logging.getLogger(__name__)

COMMANDS = {
    "perceive": "perception",
    "dual-policy": "dual-policy",
    "grad-check": "grad-check",
    "calibrate-dt": "calibrate-dt",
    "render": "render",
}


def configure_logging(level: Optional[str] = None) -> None:
    """Configure root logging to stdout."""
    settings = get_settings()
    logging.basicConfig(
        level=getattr(logging, level or settings.log_level),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stdout)],
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tactile-harness",
        description="Active-inference tactile alignment experiments",
    )
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"])
    subparsers = parser.add_subparsers(dest="command", required=True)

    for command in COMMANDS:
        sub = subparsers.add_parser(command)
        sub.add_argument("--config", type=Path, help="JSON experiment config; overrides flags")
        sub.add_argument("--output-dir", help="Root directory for run outputs")
        sub.add_argument("--master-seed", type=int)
        sub.add_argument("--pegs", nargs="+", help="Peg presets")
        sub.add_argument("--noise-level", choices=["none", "low", "high", "default"])
        sub.add_argument("--epochs", type=int)
        if command == "perceive":
            sub.add_argument("--test-count", type=int)
            sub.add_argument("--write-traces", action="store_true", default=None)
        if command == "dual-policy":
            sub.add_argument("--scenarios", nargs="+", choices=["cuboid", "pulley"])
            sub.add_argument("--alignment", choices=["both", "on", "off"])
            sub.add_argument("--episodes", dest="n_episodes", type=int)
            sub.add_argument("--reposition-every", type=int)
        if command == "render":
            sub.add_argument("--tilts", dest="render_tilts_deg", type=float, nargs="+")
    return parser


def _flag_values(args: argparse.Namespace) -> Dict[str, Any]:
    skip = {"command", "config", "log_level"}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None}


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    """
    Merge flags and the optional config file into a validated config.

    Values present in the config file override flags.

    Raises:
        ValidationError: The merged config is invalid
        ValueError: The file names a different experiment kind
    """
    kind = COMMANDS[args.command]
    values: Dict[str, Any] = {"kind": kind, **_flag_values(args)}
    if args.config is not None:
        file_values = orjson.loads(args.config.read_bytes())
        if file_values.get("kind", kind) != kind:
            raise ValueError(
                f"Config file is for '{file_values['kind']}', not '{kind}'"
            )
        values.update(file_values)
    if "master_seed" not in values:
        values["master_seed"] = get_settings().master_seed
    return ExperimentConfig.model_validate(values)


async def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    return await RUNNERS[cfg.kind](cfg)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one CLI command.

    Returns:
        0 when every requested run completed, 1 on failed runs, 2 on invalid config
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)

    try:
        cfg = load_config(args)
    except (ValidationError, ValueError, OSError) as e:
        logger.error(f"Invalid configuration: {e}")
        return 2

    try:
        result = asyncio.run(run_experiment(cfg))
    except TactileError as e:
        logger.error(f"{cfg.kind} failed: {e}")
        return 1

    print(result.table.to_string(index=False))
    logger.info(f"Results written to {result.run_dir}")
    return 0 if result.ok else 1


if __name__ == "__main__":
    sys.exit(main())
