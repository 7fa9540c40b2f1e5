"""Command line interface.

Exit status: 0 on success, 1 for invalid input, 2 for runtime failures.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from .errors import MalformedFile, RhoMnkError
from .harness import DESK_SCALE, SweepConfig, run_sweep, summary_path, derive_seed
from .landscape import InstanceParams, as_bits, evaluate, generate, load_instance, save_instance
from .walks import DEFAULT_BUDGET, adaptive_walk, autocorrelation, random_walk

EXIT_OK, EXIT_INPUT, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _int_list(text):
    return tuple(int(t) for t in str(text).split(",") if t.strip())


def _float_list(text):
    return tuple(float(t) for t in str(text).split(",") if t.strip())


# key-value config file: keys are the long option names without dashes
_CONFIG_KEYS = {
    "n": _int_list,
    "m": _int_list,
    "k": _int_list,
    "rho": _float_list,
    "mu": int,
    "seed": int,
    "length": int,
    "replicates": int,
    "out": str,
    "threads": int,
    "budget": int,
    "walk": str,
    "k_max": int,
    "desk_scale": lambda v: str(v).strip().lower() in ("1", "true", "yes", "on"),
}


def read_config(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, ``:`` also separates."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":"
        if sep not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split(sep, 1))
        key = key.replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _CONFIG_KEYS[key](value)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {exc}") from None
    return values


def _common(p: argparse.ArgumentParser, grid=False):
    num = _int_list if grid else int
    real = _float_list if grid else float
    p.add_argument("--n", type=num, help="bit-string length")
    p.add_argument("--m", type=num, help="number of objectives")
    p.add_argument("--k", type=num, help="epistatic links per bit")
    p.add_argument("--rho", type=real, help="objective correlation")
    p.add_argument("--seed", type=int, help="instance seed (base seed for sweeps)")
    p.add_argument("--mu", type=int, help="solution-set size")
    p.add_argument("--length", type=int, help="random-walk length")
    p.add_argument("--replicates", type=int)
    p.add_argument("--out", help="output file")
    p.add_argument("--desk-scale", action="store_true", default=None)
    p.add_argument("--threads", type=int, help="worker processes")
    p.add_argument("--config", help="key = value configuration file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rhomnk", description="rho-MNK landscapes and set-based landscape analysis")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="write an instance file")
    _common(p)

    p = sub.add_parser("evaluate", help="objective vector of a bit string")
    _common(p)
    p.add_argument("--instance", help="instance file (otherwise generated from --n ... --seed)")
    p.add_argument("bits", help="solution as a 0/1 string")

    for name in ("random-walk", "adaptive-walk"):
        p = sub.add_parser(name, help=f"run one {name.replace('-', ' ')}")
        _common(p)
        p.add_argument("--instance", help="instance file (otherwise generated from --n ... --seed)")
        p.add_argument("--walk-seed", type=int, help="walk seed (default: derived from --seed)")
        p.add_argument("--budget", type=int, help="max set evaluations (adaptive walks)")

    p = sub.add_parser("sweep", help="run a parameter sweep and write CSV")
    _common(p, grid=True)
    p.add_argument("--walk", choices=("random", "adaptive"))
    p.add_argument("--budget", type=int)
    p.add_argument("--k-max", type=int, dest="k_max")
    return parser


def _settings(args) -> dict:
    """Config-file values overlaid with explicitly given command-line flags."""
    settings = read_config(args.config) if getattr(args, "config", None) else {}
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def _scalar(settings, key, default=None):
    value = settings.get(key, default)
    if isinstance(value, tuple):
        if len(value) != 1:
            raise UsageError(f"--{key} takes a single value here")
        value = value[0]
    return value


def _instance(args, settings):
    if getattr(args, "instance", None):
        try:
            return load_instance(args.instance)
        except FileNotFoundError as exc:
            raise UsageError(str(exc)) from None
    missing = [k for k in ("n", "m", "k", "rho") if k not in settings]
    if missing:
        raise UsageError("missing " + ", ".join("--" + k for k in missing) + " (or --instance)")
    return generate(
        InstanceParams(
            int(_scalar(settings, "n")),
            int(_scalar(settings, "m")),
            int(_scalar(settings, "k")),
            float(_scalar(settings, "rho")),
            int(_scalar(settings, "seed", 0)),
        )
    )


def _walk_seed(args, instance):
    if args.walk_seed is not None:
        return args.walk_seed
    p = instance.params
    return derive_seed(p.seed, (p.n, p.m, p.k, float(p.rho)), 0, "walk")


def _emit(payload: dict):
    print(json.dumps(payload, indent=2))


def cmd_generate(args, settings):
    instance = _instance(args, settings)
    out = settings.get("out")
    if out is None:
        raise UsageError("generate needs --out")
    save_instance(instance, out)
    _emit({"written": out, **{k: getattr(instance.params, k) for k in ("n", "m", "k", "rho", "seed")}})


def cmd_evaluate(args, settings):
    instance = _instance(args, settings)
    vector = evaluate(instance, as_bits(args.bits.strip()))
    _emit({"bits": args.bits.strip(), "objectives": vector.tolist()})


def _write_series(path, series):
    np.savetxt(path, series, fmt="%.17g", header="fitness", comments="")


def cmd_random_walk(args, settings):
    instance = _instance(args, settings)
    mu = int(_scalar(settings, "mu", 100))
    length = int(_scalar(settings, "length", 5000))
    walk = random_walk(instance, mu, length, _walk_seed(args, instance))
    ac = autocorrelation(walk.fitness_series, min(100, length - 1))
    if settings.get("out"):
        _write_series(settings["out"], walk.fitness_series)
    _emit(
        {
            "mu": mu,
            "length": length,
            "r1": float(ac.r[0]),
            "tau": ac.tau,
            "final_hypervolume": walk.final_fitness,
            "nondominated_count": walk.nondominated_count,
        }
    )


def cmd_adaptive_walk(args, settings):
    instance = _instance(args, settings)
    mu = int(_scalar(settings, "mu", 20))
    budget = int(_scalar(settings, "budget", DEFAULT_BUDGET))
    walk = adaptive_walk(instance, mu, _walk_seed(args, instance), budget=budget)
    if settings.get("out"):
        _write_series(settings["out"], walk.fitness_series)
    _emit(
        {
            "mu": mu,
            "steps_taken": walk.steps_taken,
            "evaluations_used": walk.evaluations_used,
            "final_hypervolume": walk.final_fitness,
            "nondominated_count": walk.nondominated_count,
            "certified": walk.certified,
        }
    )


def sweep_config(settings) -> SweepConfig:
    overrides = {}
    if settings.get("desk_scale"):
        overrides.update(DESK_SCALE)
    mapping = {
        "n": "n_values",
        "m": "m_values",
        "k": "k_values",
        "rho": "rho_values",
        "mu": "mu",
        "seed": "base_seed",
        "length": "walk_length",
        "replicates": "replicates",
        "out": "output_path",
        "threads": "workers",
        "budget": "budget",
        "walk": "walk_kind",
        "k_max": "k_max",
    }
    for key, name in mapping.items():
        if key in settings:
            overrides[name] = settings[key]
    if "mu" not in settings and overrides.get("walk_kind") == "adaptive":
        overrides["mu"] = 20
    known = {f.name for f in fields(SweepConfig)}
    return SweepConfig(**{k: v for k, v in overrides.items() if k in known})


def cmd_sweep(args, settings):
    config = sweep_config(settings)
    result = run_sweep(config)
    payload = {
        "rows": len(result.rows),
        "summary_rows": len(result.summary),
        "skipped": [list(c) for c in result.skipped],
    }
    if config.output_path:
        payload["output"] = config.output_path
        payload["summary"] = str(summary_path(config.output_path))
    _emit(payload)


COMMANDS = {
    "generate": cmd_generate,
    "evaluate": cmd_evaluate,
    "random-walk": cmd_random_walk,
    "adaptive-walk": cmd_adaptive_walk,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        settings = _settings(args)
        COMMANDS[args.command](args, settings)
    except (UsageError, MalformedFile, FileNotFoundError) as exc:
        print(f"rhomnk: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RhoMnkError as exc:
        code = EXIT_INPUT if isinstance(exc, ValueError) else EXIT_RUNTIME
        print(f"rhomnk: error: {exc}", file=sys.stderr)
        return code
    except Exception as exc:  # noqa: BLE001
        print(f"rhomnk: runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
