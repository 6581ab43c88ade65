"""Command-line entry point.

    starkcorr sweep --preset fig1a --out fig1a.csv
    starkcorr sweep --lambda 0.1 --eta 0,0.5 --x 0.7071 --tau-max 50 --points 1001
    starkcorr sweep --config run.cfg --format json
    starkcorr oracles --scale quick --out oracles.json
    starkcorr presets

Config files hold ``key=value`` lines using the flag names (``tau-max=3``),
lists comma-separated, ``#`` starts a comment. Flags override the file.
Lists also accept ``start:stop:count`` for evenly spaced values.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from .model import Scenario
from .oracles import DEFAULT_SEED
from .suite import run_oracle_suite
from .sweep import PRESETS, ConfigError, SweepConfig, expand_preset, render

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_ORACLE = 3

OUTPUT_DIR_ENV = "STARKCORR_OUTPUT_DIR"

CONFIG_KEYS = ("preset", "scenario", "lambda", "eta", "xi", "x", "tau-max", "points",
               "measures", "out", "format", "seed")

log = logging.getLogger("starkcorr")


def parse_list(text: str) -> tuple[float, ...]:
    values: list[float] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            start, stop, count = part.split(":")
            values.extend(float(v) for v in np.linspace(float(start), float(stop), int(count)))
        else:
            values.append(float(part))
    if not values:
        raise ConfigError(f"empty list {text!r}")
    return tuple(values)


def read_config_file(path: str) -> dict[str, str]:
    settings = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("_", "-")
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        settings[key] = value
    return settings


def build_config(settings: dict[str, str]) -> SweepConfig:
    """Turn flat string settings into a validated :class:`SweepConfig`."""
    try:
        cfg = expand_preset(settings["preset"]) if settings.get("preset") else SweepConfig()
        updates = {}
        if "scenario" in settings:
            updates["scenario"] = Scenario.parse(settings["scenario"])
        if "lambda" in settings:
            updates["lam"] = float(settings["lambda"])
        if "eta" in settings:
            updates["eta_list"] = parse_list(settings["eta"])
        if "xi" in settings:
            updates["xi_list"] = parse_list(settings["xi"])
        if "x" in settings:
            updates["x_list"] = parse_list(settings["x"])
        if "tau-max" in settings:
            updates["tau_max"] = float(settings["tau-max"])
        if "points" in settings:
            updates["n_points"] = int(settings["points"])
        if "measures" in settings:
            updates["measures"] = tuple(m.strip().upper() for m in settings["measures"].split(",") if m.strip())
        if "out" in settings:
            updates["output_path"] = settings["out"]
        if "format" in settings:
            updates["format"] = settings["format"].lower()
        if "seed" in settings:
            updates["seed"] = int(settings["seed"])
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    return replace(cfg, **updates).validate()


def default_output(cfg: SweepConfig) -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, ".")) / f"{cfg.name}.{cfg.format}"


def write_text(path: Path, text: str) -> None:
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def run_sweep(cfg: SweepConfig) -> tuple[int, Path | None]:
    try:
        cfg.validate()
        text = render(cfg)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG, None
    path = Path(cfg.output_path) if cfg.output_path else default_output(cfg)
    try:
        write_text(path, text)
    except OSError as exc:
        print(f"error: cannot write {path}: {exc}", file=sys.stderr)
        return EXIT_IO, None
    log.info("wrote %s", path)
    return EXIT_OK, path


def _cmd_sweep(args) -> int:
    settings: dict[str, str] = {}
    try:
        if args.config:
            settings.update(read_config_file(args.config))
        for key in CONFIG_KEYS:
            value = getattr(args, key.replace("-", "_"), None)
            if value is not None:
                settings[key] = str(value)
        cfg = build_config(settings)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    code, _ = run_sweep(cfg)
    return code


def _cmd_oracles(args) -> int:
    started = time.perf_counter()
    try:
        report = run_oracle_suite(args.scale, seed=args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = json.dumps(report, indent=1) + "\n"
    if args.out:
        try:
            write_text(Path(args.out), text)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    log.info("oracle suite (%s) finished in %.1f s", args.scale, time.perf_counter() - started)
    if not report["passed"]:
        print("oracle tolerance breach: " + ", ".join(report["failures"]), file=sys.stderr)
        return EXIT_ORACLE
    return EXIT_OK


def _cmd_presets(args) -> int:
    for name, cfg in PRESETS.items():
        print(f"{name}\t{cfg.scenario.value}\tlambda={cfg.lam:g}\teta={','.join(f'{e:g}' for e in cfg.eta_list)}"
              f"\tx={'grid' if len(cfg.x_list) > 1 else f'{cfg.x_list[0]:.6g}'}\tmeasures={''.join(cfg.measures)}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="starkcorr", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sw = sub.add_parser("sweep", help="evaluate C, B, D, Q over a parameter grid")
    sw.add_argument("--config", help="key=value settings file")
    sw.add_argument("--preset", help=f"figure preset ({', '.join(PRESETS)})")
    sw.add_argument("--scenario", help="vacuum or one-photon")
    sw.add_argument("--lambda", dest="lambda", help="reservoir width in units of gamma_0")
    sw.add_argument("--eta", help="Stark shift(s) eta, comma-separated")
    sw.add_argument("--xi", help="Stark shift(s) xi, comma-separated (one-photon only)")
    sw.add_argument("--x", help="state parameter(s) in [0, 1]")
    sw.add_argument("--tau-max", dest="tau_max", help="end of the scaled-time window")
    sw.add_argument("--points", help="number of time points")
    sw.add_argument("--measures", help="subset of C,B,D,Q")
    sw.add_argument("--out", help=f"output file (default: ${OUTPUT_DIR_ENV}/<name>.<format>)")
    sw.add_argument("--format", help="csv or json")
    sw.add_argument("--seed", help="accepted for symmetry with the oracle suite; sweeps are deterministic")
    sw.set_defaults(func=_cmd_sweep)

    orc = sub.add_parser("oracles", help="compare closed forms against brute-force oracles")
    orc.add_argument("--scale", choices=("quick", "full"), default="quick")
    orc.add_argument("--seed", type=int, default=DEFAULT_SEED)
    orc.add_argument("--out", help="write the JSON report here instead of stdout")
    orc.set_defaults(func=_cmd_oracles)

    pr = sub.add_parser("presets", help="list figure presets")
    pr.set_defaults(func=_cmd_presets)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
