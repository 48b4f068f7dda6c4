"""Command-line front end.

Every subcommand accepts its parameters as flags or through a single JSON
file (``--config``); flags override the file.  Reports are JSON with sorted
keys, except ``converge`` which writes CSV.  Exit codes: 0 success,
2 configuration error, 3 resource cap, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .asymptotics import convergence_csv, convergence_study, oracle_grid
from .duality import chi_nu_via_integral, chi_nu_via_integral_mc, mixture_sides
from .errors import CapExceeded, ConfigError
from .gf2 import DualCharacter, Gf2Subspace, full_space, random_subspace, subspace_from_rows, zero_space
from .irs import chi_nu_exact, class_size_histogram, monte_carlo_chi_nu
from .perm import FinitaryPermutation, parse_permutation
from .randomized import random_alpha, random_cycles_perm, random_theta
from .thoma import AlphaSpec, ThomaParameter, chi_sigma_alpha, format_rational, parse_rational, thoma_character

EXIT_CONFIG = 2
EXIT_CAP = 3
EXIT_VERIFY = 4


class VerificationFailure(Exception):
    def __init__(self, report: dict) -> None:
        super().__init__("verification failed")
        self.report = report


def _rationals(value: Any) -> list[Fraction]:
    if value is None:
        return []
    if isinstance(value, str):
        value = [v for v in value.split(",") if v.strip()]
    return [parse_rational(str(v).strip()) for v in value]


def _ints(value: Any) -> list[int]:
    if isinstance(value, str):
        value = [v for v in value.split(",") if v.strip()]
    try:
        return [int(v) for v in value]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"expected a list of integers, got {value!r}") from exc


@dataclass
class RunConfig:
    alpha: AlphaSpec | None = None
    theta: ThomaParameter | None = None
    sigma: DualCharacter | None = None
    subgroup_rows: list[str] | None = None
    g: FinitaryPermutation = field(default_factory=FinitaryPermutation)
    seed: int | None = None
    trials: int = 100_000
    prefix_length: int | None = None
    n_schedule: list[int] = field(default_factory=lambda: [10, 100, 1000, 10_000])
    mode: str = "balanced"
    threads: int = 1
    output: str | None = None
    extra: dict = field(default_factory=dict)

    def subgroup(self) -> Gf2Subspace:
        """A from the configured rows; defaults to all of S_alpha."""
        alpha = self.require_alpha()
        if self.subgroup_rows is None:
            return full_space(alpha.m)
        if self.subgroup_rows in (["none"], ["0"], []):
            return zero_space(alpha.m)
        return subspace_from_rows(alpha.m, self.subgroup_rows)

    def require_alpha(self) -> AlphaSpec:
        if self.alpha is None:
            raise ConfigError("--alpha is required")
        return self.alpha

    def require_seed(self) -> int:
        if self.seed is None:
            raise ConfigError("--seed is required for sampling")
        return self.seed


def _parse_theta(items: Sequence[str]) -> ThomaParameter:
    parts: dict[str, list[Fraction]] = {"beta": [], "gamma": []}
    for item in items:
        for chunk in item.split(";"):
            if not chunk.strip():
                continue
            key, sep, val = chunk.partition("=")
            key = key.strip()
            if not sep or key not in parts:
                raise ConfigError(f"--theta expects beta=... or gamma=..., got {chunk!r}")
            parts[key] = _rationals(val)
    return ThomaParameter(tuple(parts["beta"]), tuple(parts["gamma"]))


def build_config(args: argparse.Namespace) -> RunConfig:
    raw: dict[str, Any] = {}
    if getattr(args, "config", None):
        try:
            raw = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a JSON object")
    for key in ("alpha", "sigma", "A", "g", "seed", "trials", "prefix_length", "n_schedule", "mode",
                "threads", "output", "n", "repetitions", "delta", "count", "colorings", "ns"):
        val = getattr(args, key, None)
        if val is not None:
            raw[key] = val
    if getattr(args, "theta", None):
        raw["theta"] = args.theta

    cfg = RunConfig()
    if raw.get("alpha") is not None:
        cfg.alpha = AlphaSpec(tuple(_rationals(raw["alpha"])))
    if raw.get("theta") is not None:
        th = raw["theta"]
        cfg.theta = _parse_theta(th if isinstance(th, list) else [th])
    elif "beta" in raw or "gamma" in raw:
        cfg.theta = ThomaParameter(tuple(_rationals(raw.get("beta"))), tuple(_rationals(raw.get("gamma"))))
    if raw.get("sigma") is not None:
        cfg.sigma = DualCharacter.parse(str(raw["sigma"]))
    if raw.get("A") is not None:
        rows = raw["A"]
        cfg.subgroup_rows = [r for r in rows.split(",")] if isinstance(rows, str) else [str(r) for r in rows]
    if raw.get("g") is not None:
        cfg.g = parse_permutation(str(raw["g"]))
    if raw.get("seed") is not None:
        cfg.seed = int(raw["seed"])
        if not 0 <= cfg.seed < 1 << 64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
    for key in ("trials", "prefix_length", "threads"):
        if raw.get(key) is not None:
            v = int(raw[key])
            if v < 1:
                raise ConfigError(f"{key} must be positive")
            setattr(cfg, key, v)
    if raw.get("n_schedule") is not None:
        cfg.n_schedule = _ints(raw["n_schedule"])
    if raw.get("mode", raw.get("method")) is not None:
        cfg.mode = str(raw.get("mode", raw.get("method")))
    cfg.output = raw.get("output")
    cfg.extra = {k: raw[k] for k in ("n", "repetitions", "delta", "count", "colorings", "ns") if raw.get(k) is not None}
    if cfg.alpha is not None and cfg.sigma is not None and cfg.sigma.width != cfg.alpha.m:
        raise ConfigError(f"sigma width {cfg.sigma.width} != alpha rank {cfg.alpha.m}")
    return cfg


def _value_report(kind: str, g: FinitaryPermutation, value: Fraction) -> dict:
    return {"kind": kind, "g": str(g), "value": format_rational(value), "float": float(value)}


def cmd_eval(cfg: RunConfig) -> dict:
    g = cfg.g
    if cfg.theta is not None:
        return _value_report("thoma", g, thoma_character(cfg.theta, g))
    if cfg.alpha is not None and cfg.sigma is not None:
        return _value_report("chi_sigma_alpha", g, chi_sigma_alpha(cfg.alpha, cfg.sigma, g))
    if cfg.alpha is not None:
        rep = _value_report("chi_nu", g, chi_nu_exact(cfg.alpha, cfg.subgroup(), g))
        rep["A"] = str(cfg.subgroup())
        return rep
    if g.is_identity():
        return _value_report("identity", g, Fraction(1))
    raise ConfigError("eval needs --theta, or --alpha (with optional --sigma / --A)")


def duality_case(alpha: AlphaSpec, A: Gf2Subspace, g: FinitaryPermutation) -> dict:
    lhs = chi_nu_exact(alpha, A, g)
    rhs = chi_nu_via_integral(alpha, A, g)
    return {
        "alpha": [format_rational(a) for a in alpha.alphas],
        "A": str(A),
        "g": str(g),
        "lhs": format_rational(lhs),
        "rhs": format_rational(rhs),
        "lhs_float": float(lhs),
        "equal": lhs == rhs,
    }


def fuzz_report(count: int, seed: int) -> dict:
    """Random duality and mixture configurations; failures are listed."""
    rng = np.random.default_rng(seed)
    failures = []
    for _ in range(count):
        alpha = random_alpha(rng, max_rank=6)
        A = random_subspace(alpha.m, rng)
        g = random_cycles_perm(rng, max_cycles=4, max_len=6)
        case = duality_case(alpha, A, g)
        if not case["equal"]:
            failures.append(case)
        theta = random_theta(rng)
        lhs, rhs = mixture_sides(theta, g)
        if lhs != rhs:
            failures.append({"check": "mixture", "beta": [format_rational(b) for b in theta.beta],
                             "gamma": [format_rational(c) for c in theta.gamma], "g": str(g),
                             "lhs": format_rational(lhs), "rhs": format_rational(rhs)})
    return {"configs": count, "seed": seed, "failures": failures, "all_equal": not failures}


def cmd_duality(cfg: RunConfig) -> dict:
    if "count" in cfg.extra:
        rep = fuzz_report(int(cfg.extra["count"]), cfg.seed if cfg.seed is not None else 0)
    else:
        rep = duality_case(cfg.require_alpha(), cfg.subgroup(), cfg.g)
        if not rep["equal"]:
            raise VerificationFailure(rep)
        return rep
    if not rep["all_equal"]:
        raise VerificationFailure(rep)
    return rep


def cmd_fuzz(cfg: RunConfig) -> dict:
    rep = fuzz_report(int(cfg.extra.get("count", 100)), cfg.seed if cfg.seed is not None else 0)
    if not rep["all_equal"]:
        raise VerificationFailure(rep)
    return rep


def cmd_mc(cfg: RunConfig) -> dict:
    alpha, A, g = cfg.require_alpha(), cfg.subgroup(), cfg.g
    seed = cfg.require_seed()
    try:
        exact = chi_nu_exact(alpha, A, g)
    except CapExceeded:
        exact = None
    prefix = cfg.prefix_length if cfg.prefix_length is not None else max(64, g.max_point() + 1)
    method = cfg.mode if cfg.mode in ("irs", "integral", "both") else "both"
    rep: dict[str, Any] = {"g": str(g), "A": str(A), "alpha": [format_rational(a) for a in alpha.alphas]}
    if method in ("irs", "both"):
        rep["irs"] = monte_carlo_chi_nu(alpha, A, g, prefix, cfg.trials, seed, cfg.threads, exact).to_dict()
    if method in ("integral", "both"):
        rep["integral"] = chi_nu_via_integral_mc(alpha, A, g, cfg.trials, seed, cfg.threads, exact).to_dict()
    return rep


def cmd_converge(cfg: RunConfig) -> str:
    rows = convergence_study(cfg.require_alpha(), cfg.subgroup(), cfg.g, cfg.n_schedule, cfg.mode, cfg.seed)
    return convergence_csv(rows)


def cmd_brute(cfg: RunConfig) -> dict:
    ns = _ints(cfg.extra.get("ns", [4, 5, 6, 7]))
    if any(n < 2 or n > 8 for n in ns):
        raise CapExceeded("brute force needs 2 <= n <= 8")
    colorings = int(cfg.extra.get("colorings", 50))
    seed = cfg.seed if cfg.seed is not None else 0
    res = oracle_grid(ns, colorings, seed)
    rep = {"ns": ns, "colorings": colorings, "seed": seed, "cases": res.cases,
           "all_equal": res.all_equal, "failures": res.failures}
    if not res.all_equal:
        raise VerificationFailure(rep)
    return rep


def cmd_paintbox(cfg: RunConfig) -> dict:
    alpha = cfg.require_alpha()
    n = int(cfg.extra.get("n", 10_000))
    reps = int(cfg.extra.get("repetitions", 100))
    delta = float(cfg.extra.get("delta", 0.4))
    seed = cfg.require_seed()
    hist = class_size_histogram(alpha, n, np.random.default_rng(seed), reps)
    bad = {s: c for s, c in hist.items() if 1 < s < delta * n}
    big = [s for s in hist if s > 1]
    return {
        "alpha": [format_rational(a) for a in alpha.alphas],
        "n": n,
        "repetitions": reps,
        "seed": seed,
        "delta": delta,
        "singletons": hist.get(1, 0),
        "nonsingleton_classes": sum(hist[s] for s in big),
        "min_nonsingleton": min(big) if big else None,
        "max_class": max(hist) if hist else None,
        "violations": sum(bad.values()),
        "dichotomy_holds": not bad,
    }


COMMANDS = {
    "eval": cmd_eval,
    "duality": cmd_duality,
    "mc": cmd_mc,
    "converge": cmd_converge,
    "brute": cmd_brute,
    "paintbox": cmd_paintbox,
    "fuzz": cmd_fuzz,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thoma-irs", description="Thoma characters and IRSs of Fin(N).")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with any of the options below")
    common.add_argument("--alpha", help="comma-separated rationals, e.g. 1/2,1/3")
    common.add_argument("--theta", action="append", help="beta=...;gamma=... (repeatable)")
    common.add_argument("--sigma", help="bitstring, 1 marks sigma(i) = -1")
    common.add_argument("--A", help="comma-separated basis bitstrings of A; 'none' for the zero subgroup")
    common.add_argument("--g", help='permutation in cycle notation, e.g. "(0 1)(2 3)"')
    common.add_argument("--seed", type=int)
    common.add_argument("--threads", type=int)
    common.add_argument("--output", help="write the report here instead of stdout")

    sub.add_parser("eval", parents=[common], help="evaluate a character at g")
    p = sub.add_parser("duality", parents=[common], help="exact sum vs dual-code average")
    p.add_argument("--fuzz", dest="count", type=int, help="check this many random configurations")
    p = sub.add_parser("mc", parents=[common], help="Monte Carlo estimates with seed echo")
    p.add_argument("--trials", type=int)
    p.add_argument("--prefix-length", dest="prefix_length", type=int)
    p.add_argument("--method", dest="mode", choices=["irs", "integral", "both"])
    p = sub.add_parser("converge", parents=[common], help="CSV convergence table")
    p.add_argument("--n-schedule", dest="n_schedule", help="comma-separated increasing n")
    p.add_argument("--mode", choices=["balanced", "sampled"])
    p = sub.add_parser("brute", parents=[common], help="finite S_n oracle grid")
    p.add_argument("--ns", help="comma-separated n values (<= 8)")
    p.add_argument("--colorings", type=int)
    p = sub.add_parser("paintbox", parents=[common], help="class-size dichotomy summary")
    p.add_argument("--n", type=int)
    p.add_argument("--repetitions", type=int)
    p.add_argument("--delta", type=float)
    p = sub.add_parser("fuzz", parents=[common], help="random duality and mixture checks")
    p.add_argument("--count", type=int)
    return parser


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    output = None
    try:
        try:
            cfg = build_config(args)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        output = cfg.output
        result = COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except VerificationFailure as exc:
        _emit(_dumps(exc.report), output)
        print("verification failed", file=sys.stderr)
        return EXIT_VERIFY
    _emit(result if isinstance(result, str) else _dumps(result), output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
