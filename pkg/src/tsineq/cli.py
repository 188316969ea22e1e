"""Batch front end: ``tsineq <subcommand> --config PATH [options]``.

Subcommands
-----------
``check-identity``  evaluate the kernel identity residual over the config
                    grid; exit 0 when the max residual stays below 1e-10
``eval``            evaluate each configured scenario under each theorem
                    and print both sides; exit 2 on any violation
``sweep``           full sweep with CSV/JSON reports; exit 2 on violations
``sharpness``       maximize lhs/rhs over x and lambda; exit 2 if the
                    ratio exceeds 1 + tol
``selftest``        run the built-in table of desk cases with frozen
                    expected values

Exit codes: 0 success, 1 usage/config error, 2 violation or failed check.

Config files are line-oriented ``key = value`` under ``[section]``
headers; ``#`` starts a comment.  Keys ``descriptor``, ``f`` and the
``kind`` keys may repeat to build lists.  Unknown sections or keys are
rejected with the offending name and line.  The environment variable
``TSINEQ_TOL_OVERRIDE`` (e.g. ``tol_quad=1e-9,tol_ineq_abs=1e-7``)
overrides configured tolerances, which supports CI tuning without
editing fixtures.

Example::

    [scale]
    descriptor = R[0,1]

    [function]
    f = poly:0,0,1

    [run]
    theorems = IneqMR1, IneqMR2
    lambdas = 0
    x = grid:1
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import ParseError, TsineqError, ValidationError
from .harness import (
    DEFAULT_LAMBDAS,
    SweepPlan,
    THEOREMS,
    generate_scenarios,
    run_sweep,
    sharpness_search,
)
from .inequalities import TOL_INEQ_ABS, TOL_INEQ_REL, montgomery_residual
from .quadrature import TOL_QUAD

_SECTIONS = {
    "scale": {"descriptor", "window"},
    "function": {"f"},
    "weight": {"kind"},
    "psi": {"kind"},
    "run": {
        "theorems",
        "lambdas",
        "x",
        "seed",
        "random_scales",
        "max_scenarios",
    },
    "tolerances": {"tol_quad", "tol_ineq_abs", "tol_ineq_rel"},
    "output": {"csv", "json"},
    "debug": {"corrupt_kernel"},
}

_LIST_KEYS = {("scale", "descriptor"), ("function", "f"), ("weight", "kind"), ("psi", "kind")}


@dataclass
class Config:
    scales: tuple = ()
    window: Optional[tuple] = None
    functions: tuple = ()
    weights: tuple = ("unit",)
    psis: tuple = ("identity",)
    theorems: tuple = ("IneqMR1",)
    lambdas: tuple = (Fraction(0),)
    x_rule: str = "grid:1"
    seed: int = 0
    random_scales: int = 0
    max_scenarios: Optional[int] = None
    tol_quad: float = TOL_QUAD
    tol_ineq_abs: float = TOL_INEQ_ABS
    tol_ineq_rel: float = TOL_INEQ_REL
    out_csv: Optional[str] = None
    out_json: Optional[str] = None
    corrupt_kernel: bool = False

    def to_plan(self) -> SweepPlan:
        return SweepPlan(
            scales=self.scales,
            functions=self.functions,
            psis=self.psis,
            lambdas=self.lambdas,
            x_rule=self.x_rule,
            weights=self.weights,
            theorems=self.theorems,
            n_random_scales=self.random_scales,
            seed=self.seed,
            max_scenarios=self.max_scenarios,
            shuffle=self.max_scenarios is not None,
            fault="drop-branch1-abs" if self.corrupt_kernel else None,
            window=self.window,
        )


def _split_list(value: str) -> list[str]:
    return [tok.strip() for tok in value.split(",") if tok.strip()]


def parse_config(text: str) -> Config:
    """Parse and fully validate a config; diagnostics carry line numbers."""
    raw: dict = {}
    section = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if body.startswith("[") and body.endswith("]"):
            section = body[1:-1].strip().lower()
            if section not in _SECTIONS:
                raise ValidationError(f"line {lineno}: unknown section [{section}]")
            continue
        if "=" not in body:
            raise ParseError("expected 'key = value'", line=lineno)
        if section is None:
            raise ParseError("key before any [section] header", line=lineno)
        key, _, value = body.partition("=")
        key, value = key.strip().lower(), value.strip()
        if key not in _SECTIONS[section]:
            raise ValidationError(f"line {lineno}: unknown key {key!r} in [{section}]")
        if (section, key) in _LIST_KEYS:
            raw.setdefault((section, key), []).append(value)
        else:
            raw[(section, key)] = (lineno, value)

    cfg = Config()
    if ("scale", "descriptor") in raw:
        cfg.scales = tuple(raw[("scale", "descriptor")])
    if ("function", "f") in raw:
        cfg.functions = tuple(raw[("function", "f")])
    if ("weight", "kind") in raw:
        cfg.weights = tuple(raw[("weight", "kind")])
    if ("psi", "kind") in raw:
        cfg.psis = tuple(raw[("psi", "kind")])

    def scalar(section, key):
        item = raw.get((section, key))
        return item if item is None else item[1]

    def scalar_line(section, key):
        return raw[(section, key)][0]

    window = scalar("scale", "window")
    if window is not None:
        parts = _split_list(window)
        if len(parts) != 2:
            raise ValidationError(
                f"line {scalar_line('scale', 'window')}: window needs two values"
            )
        cfg.window = tuple(_exact(p) for p in parts)
    theorems = scalar("run", "theorems")
    if theorems is not None:
        names = tuple(_split_list(theorems))
        for name in names:
            if name not in THEOREMS:
                raise ValidationError(
                    f"line {scalar_line('run', 'theorems')}: unknown theorem {name!r}; "
                    f"known: {', '.join(THEOREMS)}"
                )
        cfg.theorems = names
    lambdas = scalar("run", "lambdas")
    if lambdas is not None:
        if lambdas.strip().lower() == "grid11":
            cfg.lambdas = DEFAULT_LAMBDAS
        else:
            values = tuple(_exact(tok) for tok in _split_list(lambdas))
            for v in values:
                if not 0 <= v <= 1:
                    raise ValidationError(
                        f"line {scalar_line('run', 'lambdas')}: lambda must lie in [0, 1], got {v}"
                    )
            cfg.lambdas = values
    x_rule = scalar("run", "x")
    if x_rule is not None:
        cfg.x_rule = x_rule
    for key, attr, conv in (
        ("seed", "seed", int),
        ("random_scales", "random_scales", int),
        ("max_scenarios", "max_scenarios", int),
    ):
        value = scalar("run", key)
        if value is not None:
            try:
                setattr(cfg, attr, conv(value))
            except ValueError as exc:
                raise ValidationError(f"line {scalar_line('run', key)}: {exc}") from exc
    for key, attr in (
        ("tol_quad", "tol_quad"),
        ("tol_ineq_abs", "tol_ineq_abs"),
        ("tol_ineq_rel", "tol_ineq_rel"),
    ):
        value = scalar("tolerances", key)
        if value is not None:
            try:
                setattr(cfg, attr, float(value))
            except ValueError as exc:
                raise ValidationError(f"line {scalar_line('tolerances', key)}: {exc}") from exc
    cfg.out_csv = scalar("output", "csv")
    cfg.out_json = scalar("output", "json")
    corrupt = scalar("debug", "corrupt_kernel")
    if corrupt is not None:
        cfg.corrupt_kernel = corrupt.strip().lower() in ("1", "true", "yes")
    if not cfg.scales:
        raise ValidationError("config names no scale descriptor")
    if not cfg.functions:
        raise ValidationError("config names no function")
    return cfg


def _exact(text: str):
    value = Fraction(text)
    return int(value) if value.denominator == 1 else value


def _apply_tol_override(cfg: Config) -> None:
    override = os.environ.get("TSINEQ_TOL_OVERRIDE", "").strip()
    if not override:
        return
    for item in override.split(","):
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in ("tol_quad", "tol_ineq_abs", "tol_ineq_rel"):
            raise ValidationError(f"TSINEQ_TOL_OVERRIDE: unknown tolerance {key!r}")
        setattr(cfg, key, float(value))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _load(args) -> Config:
    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read config {args.config!r}: {exc}") from exc
    cfg = parse_config(text)
    _apply_tol_override(cfg)
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if getattr(args, "out_csv", None):
        cfg.out_csv = args.out_csv
    if getattr(args, "out_json", None):
        cfg.out_json = args.out_json
    return cfg


def _cmd_eval(args) -> int:
    cfg = _load(args)
    plan = cfg.to_plan()
    reports = run_sweep(
        plan,
        jobs=args.jobs,
        tol_quad=cfg.tol_quad,
        tol_abs=cfg.tol_ineq_abs,
        tol_rel=cfg.tol_ineq_rel,
    )
    if not reports.reports and reports.errors:
        theorem, scenario, message = reports.errors[0]
        print(f"error: {theorem} on {scenario}: {message}", file=sys.stderr)
        return 1
    for rep in reports.reports:
        verdict = "HOLDS" if rep.holds else "VIOLATED"
        print(
            f"{rep.theorem_id} | scale={rep.scale} x={rep.x} lambda={rep.lam} | "
            f"lhs={float(rep.lhs):.6f} rhs={float(rep.rhs):.6f} "
            f"slack={float(rep.slack):.6f} {verdict}"
        )
    _write_outputs(reports, cfg)
    return 2 if reports.n_violations else 0


def _cmd_check_identity(args) -> int:
    cfg = _load(args)
    plan = cfg.to_plan()
    scenarios, filtered = generate_scenarios(plan)
    if not scenarios:
        print(f"no scenarios (filtered {filtered})", file=sys.stderr)
        return 1
    worst = 0.0
    for scn in scenarios:
        residual = float(montgomery_residual(scn, tol_quad=cfg.tol_quad))
        worst = max(worst, abs(residual))
    print(f"identity residual: max |lhs - rhs| = {worst:.6e} over {len(scenarios)} scenarios")
    threshold = 1e-10
    if worst < threshold:
        print("OK")
        return 0
    print(f"FAIL: residual exceeds {threshold}")
    return 2


def _cmd_sweep(args) -> int:
    cfg = _load(args)
    plan = cfg.to_plan()
    reports = run_sweep(
        plan,
        jobs=args.jobs,
        tol_quad=cfg.tol_quad,
        tol_abs=cfg.tol_ineq_abs,
        tol_rel=cfg.tol_ineq_rel,
    )
    summary = reports.summary()
    print(
        "sweep {plan_hash}: {n_scenarios} scenarios, {n_violations} violations, "
        "min slack {min_slack:.6e}, max ratio {max_ratio:.6f}".format(**summary)
    )
    for theorem, scenario, message in reports.errors:
        print(f"  skipped {theorem} on {scenario}: {message}")
    _write_outputs(reports, cfg)
    return 2 if reports.n_violations else 0


def _cmd_sharpness(args) -> int:
    cfg = _load(args)
    plan = cfg.to_plan()
    worst = 0.0
    lines = []
    for theorem in cfg.theorems:
        result = sharpness_search(plan, theorem, tol_quad=cfg.tol_quad)
        worst = max(worst, result.best_ratio)
        x, lam, scenario = result.argmax
        lines.append(
            f"{theorem}: best ratio {result.best_ratio:.9f} at x={x} lambda={lam} ({scenario})"
        )
    for line in lines:
        print(line)
    if cfg.out_json:
        import json

        with open(cfg.out_json, "w") as fh:
            json.dump({"max_ratio": worst}, fh)
            fh.write("\n")
    return 2 if worst > 1.0 + cfg.tol_ineq_abs else 0


def _write_outputs(reports, cfg: Config) -> None:
    if cfg.out_csv:
        reports.write_csv(cfg.out_csv)
    if cfg.out_json:
        reports.write_json_summary(cfg.out_json)


def _cmd_selftest(args) -> int:
    from .selftest import run_selftest

    return run_selftest(verbose=True)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsineq",
        description="Evaluate weighted Ostrowski-type bounds on computable time scales.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, needs_config in (
        ("check-identity", _cmd_check_identity, True),
        ("eval", _cmd_eval, True),
        ("sweep", _cmd_sweep, True),
        ("sharpness", _cmd_sharpness, True),
        ("selftest", _cmd_selftest, False),
    ):
        p = sub.add_parser(name)
        if needs_config:
            p.add_argument("--config", required=True)
            p.add_argument("--out-csv", dest="out_csv")
            p.add_argument("--out-json", dest="out_json")
            p.add_argument("--seed", type=int)
            p.add_argument("--jobs", type=int, default=1)
        p.set_defaults(fn=fn)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.fn(args)
    except (ParseError, ValidationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except TsineqError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
