"""Command-line front end: solve, scan, oracle, simulate, partition.

Reports are JSON (scan emits CSV); all commands are pure functions of
(config, seed), so repeated runs produce identical files.  Exit codes:
0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .complete import CompleteGraphGame
from .core import GameParams
from .errors import IsingGameError, ToleranceNotReached
from .montecarlo import iterate_to_qre, sample_mean_choice
from .noise import GumbelNoise, ProbitNoise, TabulatedNoise
from .oracle import MAX_ENUM_AGENTS, binomial_mode, enumerate_complete, enumerate_random_small
from .randomgraph import DegreeDistribution, RandomGraphGame

__all__ = ["RunConfig", "ConfigError", "main",
           "run_solve", "run_scan", "run_oracle", "run_simulate", "run_partition",
           "SCAN_HEADER", "MAX_ROOT_COLUMNS"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

MAX_ROOT_COLUMNS = 5
SCAN_HEADER = ["sweep_var", "sweep_value", "n_roots"] + [
    name for i in range(1, MAX_ROOT_COLUMNS + 1)
    for name in (f"root_{i}", f"stability_{i}")
]

_SWEEPABLE = ("beta", "J", "H")


class ConfigError(IsingGameError):
    """A configuration field is missing or malformed."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class RunConfig:
    """Complete description of one CLI invocation."""

    command: str
    noise: str = "gumbel"
    beta: float = 1.0
    J: float = 1.0
    H: float = 0.0
    graph: str = "complete"
    m_exp: float | None = None
    n_agents: int | None = None
    degrees: tuple[int, ...] | None = None
    sweep: str | None = None
    out: str | None = None
    seed: int = 0
    n_samples: int = 100_000
    scan_step: float = 1e-3
    tol: float = 1e-12
    damping: float = 0.5
    max_iter: int = 10_000
    m0: float | None = None
    iterate: bool = False

    def to_dict(self) -> dict:
        doc = dataclasses.asdict(self)
        if doc["degrees"] is not None:
            doc["degrees"] = list(doc["degrees"])
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        for key in doc:
            if key not in known:
                raise ConfigError(key, "unknown configuration field")
        values = dict(doc)
        if values.get("degrees") is not None:
            values["degrees"] = tuple(int(k) for k in values["degrees"])
        return cls(**values)


def _fmt(x: float) -> str:
    """17 significant digits: lossless round trip of doubles in CSV."""
    return format(float(x), ".17g")


def build_noise(spec: str):
    if spec == "gumbel":
        return GumbelNoise()
    if spec == "probit":
        return ProbitNoise()
    if spec.startswith("tabulated:"):
        path = spec.split(":", 1)[1]
        if not path:
            raise ConfigError("noise", "tabulated noise needs a file path")
        if not Path(path).is_file():
            raise ConfigError("noise", f"no such tabulated-noise file: {path}")
        return TabulatedNoise.from_json(path)
    raise ConfigError("noise", f"unknown noise spec {spec!r} "
                               "(gumbel | probit | tabulated:<path>)")


def build_degree_distribution(spec: str) -> DegreeDistribution:
    parts = spec.split(":")
    try:
        if parts[0] == "regular" and len(parts) == 2:
            return DegreeDistribution.regular(int(parts[1]))
        if parts[0] == "poisson" and len(parts) == 3:
            return DegreeDistribution.poisson(float(parts[1]), int(parts[2]))
        if parts[0] == "powerlaw" and len(parts) == 4:
            return DegreeDistribution.powerlaw(float(parts[1]), int(parts[2]),
                                               int(parts[3]))
        if parts[0] == "file" and len(parts) >= 2:
            path = spec.split(":", 1)[1]
            if not Path(path).is_file():
                raise ConfigError("graph", f"no such degree file: {path}")
            return DegreeDistribution.from_json(path)
    except ValueError as err:
        raise ConfigError("graph", f"bad graph spec {spec!r}: {err}") from None
    raise ConfigError("graph", f"unknown graph spec {spec!r} (complete | "
                               "regular:z | poisson:lam:kmax | "
                               "powerlaw:gamma:kmin:kmax | file:<path>)")


def build_game(cfg: RunConfig):
    params = GameParams(J=cfg.J, beta=cfg.beta, H=cfg.H)
    noise = build_noise(cfg.noise)
    if cfg.graph == "complete":
        return CompleteGraphGame(params=params, noise=noise)
    return RandomGraphGame(params=params, noise=noise,
                           degree_dist=build_degree_distribution(cfg.graph))


def _root_rows(game) -> list[dict]:
    if isinstance(game, CompleteGraphGame):
        return [{"m": r.m, "residual": r.residual,
                 "map_derivative": r.map_derivative, "stability": r.stability}
                for r in game.qre_roots()]
    rows = []
    for r in game.qre_fixed_point():
        rows.append({"m": r.m_w, "residual": r.residual,
                     "map_derivative": r.map_derivative,
                     "stability": r.stability,
                     "m_k": {"degrees": [int(k) for k in game.degree_dist.degrees],
                             "values": [float(v) for v in r.m_k]}})
    return rows


def _solve_roots(game, scan_step, tol):
    if isinstance(game, CompleteGraphGame):
        return game.qre_roots(scan_step=scan_step, tol=tol)
    return game.qre_fixed_point(scan_step=scan_step, tol=tol)


def run_solve(cfg: RunConfig) -> dict:
    game = build_game(cfg)
    roots = _solve_roots(game, cfg.scan_step, cfg.tol)
    report = {"config": cfg.to_dict(),
              "graph_kind": "complete" if isinstance(game, CompleteGraphGame)
              else "random",
              "roots": []}
    for r in roots:
        row = {"m": r.m if isinstance(game, CompleteGraphGame) else r.m_w,
               "residual": r.residual,
               "map_derivative": r.map_derivative,
               "stability": r.stability}
        if isinstance(game, RandomGraphGame):
            row["m_k"] = {"degrees": [int(k) for k in game.degree_dist.degrees],
                          "values": [float(v) for v in r.m_k]}
        report["roots"].append(row)
    return report


def _parse_sweep(spec: str):
    parts = spec.split(":")
    if len(parts) != 4:
        raise ConfigError("sweep", f"expected var:start:stop:step, got {spec!r}")
    var = parts[0]
    if var not in _SWEEPABLE:
        raise ConfigError("sweep", f"sweep variable must be one of {_SWEEPABLE}")
    try:
        start, stop, step = (float(p) for p in parts[1:])
    except ValueError:
        raise ConfigError("sweep", f"non-numeric sweep bounds in {spec!r}") from None
    if step <= 0:
        raise ConfigError("sweep", "sweep step must be positive")
    if start > stop:
        raise ConfigError("sweep", "sweep start must not exceed stop")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return var, [start + i * step for i in range(count)]


def run_scan(cfg: RunConfig) -> list[list[str]]:
    """CSV rows (header included) for a one-variable sweep of the roots."""
    if cfg.sweep is None:
        raise ConfigError("sweep", "the scan command needs a sweep spec")
    var, values = _parse_sweep(cfg.sweep)
    rows = [list(SCAN_HEADER)]
    for value in values:
        point = dataclasses.replace(cfg, **{var: value})
        game = build_game(point)
        roots = _solve_roots(game, cfg.scan_step, cfg.tol)
        row = [var, _fmt(value), str(len(roots))]
        for i in range(MAX_ROOT_COLUMNS):
            if i < len(roots):
                r = roots[i]
                m = r.m if isinstance(game, CompleteGraphGame) else r.m_w
                row += [_fmt(m), r.stability]
            else:
                row += ["", ""]
        rows.append(row)
    return rows


def run_oracle(cfg: RunConfig) -> dict:
    if cfg.m_exp is None:
        raise ConfigError("m_exp", "the oracle command needs an expectation")
    game = build_game(cfg)
    report = {"config": cfg.to_dict()}
    if cfg.degrees is not None:
        if len(cfg.degrees) > MAX_ENUM_AGENTS:
            raise ConfigError("degrees",
                              f"at most {MAX_ENUM_AGENTS} agents can be enumerated")
        m_k_exp = {int(k): cfg.m_exp for k in cfg.degrees}
        result = enumerate_random_small(build_noise(cfg.noise),
                                        GameParams(J=cfg.J, beta=cfg.beta, H=cfg.H),
                                        cfg.degrees, m_k_exp)
        report.update({
            "m_w_exp": result.m_w_exp,
            "argmax_config": list(result.argmax_config),
            "total_mass": result.total_mass,
            "classes": [{
                "degree": law.degree,
                "size": law.size,
                "argmax_m": list(law.argmax_m),
                "m_law": {"m": [float(v) for v in law.m_grid],
                          "prob": [float(p) for p in np.exp(law.log_probs)]},
            } for law in result.classes],
        })
        return report
    if cfg.n_agents is None:
        raise ConfigError("n_agents", "the oracle command needs --N (or --degrees)")
    if cfg.n_agents > MAX_ENUM_AGENTS:
        raise ConfigError("n_agents",
                          f"at most {MAX_ENUM_AGENTS} agents can be enumerated")
    if not isinstance(game, CompleteGraphGame):
        raise ConfigError("graph", "oracle without --degrees needs --graph complete")
    result = enumerate_complete(game.noise, game.params, cfg.n_agents, cfg.m_exp)
    dist = game.mean_choice_distribution(cfg.n_agents, cfg.m_exp)
    p_plus = game.choice_probability_plus(cfg.m_exp)
    modes = binomial_mode(cfg.n_agents, p_plus)
    report.update({
        "n_agents": cfg.n_agents,
        "argmax_config": list(result.argmax_config),
        "argmax_m": list(result.argmax_m),
        "total_mass": result.total_mass,
        "m_law": {"m": [float(v) for v in result.m_grid],
                  "prob": [float(p) for p in np.exp(result.log_probs)]},
        "closed_form_max_abs_diff": float(np.max(np.abs(
            np.exp(result.log_probs) - dist.probs()))),
        "best_response_mean": float(game.best_response_mean(cfg.m_exp)),
        "binomial_mode": list(modes),
        "mode_matches_binomial": set(result.argmax_m) == set(modes),
    })
    return report


def run_simulate(cfg: RunConfig) -> dict:
    if cfg.m_exp is None:
        raise ConfigError("m_exp", "the simulate command needs an expectation")
    game = build_game(cfg)
    sample = sample_mean_choice(game, cfg.m_exp, cfg.n_samples, cfg.seed)
    report = {"config": cfg.to_dict(),
              "sample": {"n_samples": sample.n_samples,
                         "seed": sample.seed,
                         "degrees": list(sample.degrees) if sample.degrees else None,
                         "means": list(sample.means),
                         "standard_errors": list(sample.standard_errors)}}
    if cfg.iterate:
        m0 = cfg.m_exp if cfg.m0 is None else cfg.m0
        trace = iterate_to_qre(game, m0, damping=cfg.damping, tol=cfg.tol,
                               max_iter=cfg.max_iter)
        report["iteration"] = {"m0": m0,
                               "damping": trace.damping,
                               "converged": trace.converged,
                               "residual": trace.residual,
                               "n_iterations": len(trace.iterates) - 1,
                               "final": trace.final,
                               "iterates": list(trace.iterates)}
    return report


def run_partition(cfg: RunConfig) -> dict:
    if cfg.n_agents is None or cfg.n_agents < 1:
        raise ConfigError("n_agents", "the partition command needs --N >= 1")
    if cfg.m_exp is None:
        raise ConfigError("m_exp", "the partition command needs an expectation")
    game = build_game(cfg)
    if not isinstance(game, CompleteGraphGame):
        raise ConfigError("graph", "the partition command needs --graph complete")
    ln_z, dominant_m = game.log_partition_function(cfg.n_agents, cfg.m_exp)
    dist = game.mean_choice_distribution(cfg.n_agents, cfg.m_exp)
    return {"config": cfg.to_dict(),
            "log_partition": ln_z,
            "dominant_m": dominant_m,
            "agrees_with_likelihood_argmax": dominant_m == dist.mode()}


_RUNNERS = {"solve": run_solve, "scan": run_scan, "oracle": run_oracle,
            "simulate": run_simulate, "partition": run_partition}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--noise", help="gumbel | probit | tabulated:<path>")
    common.add_argument("--beta", type=float, help="noise level beta >= 0")
    common.add_argument("--J", type=float, help="coupling strength J > 0")
    common.add_argument("--H", type=float, help="external field")
    common.add_argument("--graph", help="complete | regular:z | poisson:lam:kmax"
                                        " | powerlaw:gamma:kmin:kmax | file:<path>")
    common.add_argument("--scan-step", type=float, dest="scan_step",
                        help="root-scan grid step (default 1e-3)")
    common.add_argument("--tol", type=float, help="residual tolerance (default 1e-12)")
    common.add_argument("--seed", type=int, help="RNG seed (default 0)")
    common.add_argument("--config", help="JSON config file; explicit flags override")
    common.add_argument("--out", help="output path (default: stdout)")

    parser = argparse.ArgumentParser(
        prog="isingqre",
        description="Self-consistent and maximum-likelihood equilibria of the "
                    "noisy binary-choice game on complete and random graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("solve", parents=[common],
                   help="find all self-consistent equilibria")
    scan = sub.add_parser("scan", parents=[common],
                          help="sweep one parameter, CSV of roots per point")
    scan.add_argument("--sweep", help="var:start:stop:step with var in beta|J|H")

    oracle = sub.add_parser("oracle", parents=[common],
                            help="exhaustive small-N enumeration report")
    oracle.add_argument("--N", type=int, dest="n_agents", help="agent count (<= 24)")
    oracle.add_argument("--m-exp", type=float, dest="m_exp", help="expectation input")
    oracle.add_argument("--degrees", help="comma-separated degree labels, e.g. 1,1,3,3")

    sim = sub.add_parser("simulate", parents=[common],
                         help="seeded sampling (and optional damped iteration)")
    sim.add_argument("--m-exp", type=float, dest="m_exp", help="expectation input")
    sim.add_argument("--samples", type=int, dest="n_samples",
                     help="number of samples (default 100000)")
    sim.add_argument("--iterate", action="store_const", const=True,
                     help="also run damped fixed-point iteration")
    sim.add_argument("--m0", type=float, help="iteration start (default m-exp)")
    sim.add_argument("--damping", type=float, help="damping factor in (0, 1]")
    sim.add_argument("--max-iter", type=int, dest="max_iter",
                     help="iteration budget (default 10000)")

    part = sub.add_parser("partition", parents=[common],
                          help="log partition function and dominant m")
    part.add_argument("--N", type=int, dest="n_agents", help="agent count")
    part.add_argument("--m-exp", type=float, dest="m_exp", help="expectation input")
    return parser


def _assemble_config(args: argparse.Namespace) -> RunConfig:
    doc: dict = {}
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.is_file():
            raise ConfigError("config", f"no such config file: {args.config}")
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError as err:
            raise ConfigError("config", f"invalid JSON: {err}") from None
        doc.pop("command", None)
    overrides = {key: value for key, value in vars(args).items()
                 if key not in ("command", "config") and value is not None}
    if "degrees" in overrides and isinstance(overrides["degrees"], str):
        try:
            overrides["degrees"] = tuple(
                int(tok) for tok in overrides["degrees"].split(","))
        except ValueError:
            raise ConfigError("degrees",
                              "expected comma-separated integers") from None
    return RunConfig.from_dict({"command": args.command, **doc, **overrides})


def _write_output(cfg: RunConfig, payload) -> None:
    if isinstance(payload, list):  # CSV rows
        buffer = io.StringIO()
        csv.writer(buffer, lineterminator="\n").writerows(payload)
        text = buffer.getvalue()
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _assemble_config(args)
        payload = _RUNNERS[cfg.command](cfg)
        _write_output(cfg, payload)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except ToleranceNotReached as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    except IsingGameError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
