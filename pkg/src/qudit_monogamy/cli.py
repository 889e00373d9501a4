"""Command-line front end.

Exit status: 0 on success, 2 on usage or input-file errors, 1 when a
numerical contract is violated (e.g. a non-PSD matrix).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

from . import zoo
from .errors import EntanglementError, MalformedStateFileError
from .measures import concurrence_monotones, g_concurrence_pure, monotones_from_spectrum
from .monogamy import TOL, CampaignRow, monogamy_residual, pair_roof, rows_to_csv, verify_campaign
from .roof import RoofConfig, decomposition_profile
from .tensor import (BipartitePureState, PureTripartiteState, haar_random_tripartite, load_state,
                     partial_trace, state_to_json)

COMMANDS = ("check", "roof", "sample", "zoo", "monotones")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    dim: int | None
    seed: int
    samples: int
    pivot: int
    restarts: int
    iters: int
    tol: float
    input: Path | None
    out: Path | None
    format: str
    zoo: str | None

    def roof_config(self) -> RoofConfig:
        return RoofConfig(restarts=self.restarts, max_iters=self.iters, tol=self.tol,
                          seed=self.seed)


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qudit-monogamy",
                                description="G-concurrence monogamy checks for qudit states")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--dim", type=int)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--count", type=int, default=100, dest="samples")
    p.add_argument("--pivot", type=int, choices=(1, 2, 3), default=1)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--iters", type=int, default=2000)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--input", type=Path)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--zoo", choices=sorted(zoo.ZOO))
    return p


def parse(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    if ns.zoo and ns.input:
        raise UsageError("--zoo and --input are mutually exclusive")
    if ns.input is not None and not ns.input.is_file():
        raise UsageError(f"cannot read input file {ns.input}")
    if ns.out is not None and not ns.out.resolve().parent.is_dir():
        raise UsageError(f"output directory {ns.out.parent} does not exist")
    if ns.command == "zoo" and not ns.zoo:
        raise UsageError("zoo needs --zoo <name>")
    if ns.command == "sample" and (ns.zoo or ns.input):
        raise UsageError("sample draws Haar states; --zoo/--input do not apply")
    if ns.dim is not None and ns.dim < 2:
        raise UsageError("--dim must be >= 2")
    if ns.samples < 1 or ns.restarts < 1 or ns.iters < 0 or ns.tol <= 0:
        raise UsageError("--count and --restarts must be >= 1, --iters >= 0, --tol > 0")
    fmt = ns.format or ("csv" if ns.command == "sample" else "json")
    if fmt == "csv" and ns.command not in ("sample", "check"):
        raise UsageError(f"{ns.command} only emits JSON")
    return RunConfig(ns.command, ns.dim, ns.seed, ns.samples, ns.pivot, ns.restarts, ns.iters,
                     ns.tol, ns.input, ns.out, fmt, ns.zoo)


def _state(cfg: RunConfig):
    if cfg.input is not None:
        try:
            return load_state(cfg.input)
        except OSError as exc:
            raise UsageError(f"cannot read {cfg.input}: {exc}") from exc
        except MalformedStateFileError as exc:
            raise UsageError(str(exc)) from exc
    if cfg.zoo:
        return zoo.named(cfg.zoo, cfg.dim or 3)
    return haar_random_tripartite(cfg.dim or 3, cfg.seed)


def _tripartite(cfg: RunConfig) -> PureTripartiteState:
    state = _state(cfg)
    if not isinstance(state, PureTripartiteState):
        raise UsageError(f"{cfg.command} needs a tripartite state")
    return state


def _write(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    fd, tmp = tempfile.mkstemp(dir=cfg.out.resolve().parent, prefix=f".{cfg.out.name}.")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, cfg.out)


def _dump(obj) -> str:
    # allow_nan=False turns any non-finite value into a ValueError
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def cmd_check(cfg: RunConfig) -> str:
    report = monogamy_residual(_tripartite(cfg), cfg.pivot, cfg.roof_config(), TOL)
    if cfg.format == "csv":
        row = CampaignRow(0, report.dim, report.pivot, report.lhs_pow_d, report.rhs12_pow_d,
                          report.rhs13_pow_d, report.residual, *report.roof_converged)
        return rows_to_csv([row])
    return _dump(report.to_json())


def cmd_roof(cfg: RunConfig) -> str:
    state = _tripartite(cfg)
    out = {"dim": state.dim, "pivot": cfg.pivot, "roofs": []}
    for other in (k for k in (1, 2, 3) if k != cfg.pivot):
        res = pair_roof(state, (cfg.pivot, other), cfg.roof_config())
        out["roofs"].append({
            "pair": sorted((cfg.pivot, other)),
            "g_upper_bound": res.upper_bound.g,
            "g_pow_d_upper_bound": res.upper_bound.g_pow_d,
            "converged": res.converged,
            "restarts_used": res.restarts_used,
            "nonzero_members": decomposition_profile(res),
            "zero_g_member_count": res.zero_g_member_count,
            "decomposition": res.best_decomposition.to_json(),
        })
    return _dump(out)


def cmd_sample(cfg: RunConfig) -> str | None:
    dim = cfg.dim or 3
    if cfg.format == "csv":
        if cfg.out is not None:
            verify_campaign(dim, cfg.samples, cfg.seed, cfg.roof_config(), TOL, csv_path=cfg.out)
            return None
        summary = verify_campaign(dim, cfg.samples, cfg.seed, cfg.roof_config(), TOL)
        return rows_to_csv(summary.rows)
    summary = verify_campaign(dim, cfg.samples, cfg.seed, cfg.roof_config(), TOL)
    return _dump(summary.to_json())


def cmd_zoo(cfg: RunConfig) -> str:
    return _dump(state_to_json(zoo.named(cfg.zoo, cfg.dim or 3)))


def cmd_monotones(cfg: RunConfig) -> str:
    state = _state(cfg)
    if isinstance(state, BipartitePureState):
        mv = concurrence_monotones(state)
        g = g_concurrence_pure(state).g
        cut = "A|B"
    else:
        lam = partial_trace(state, (cfg.pivot,)).eigenvalues()[::-1]
        mv = monotones_from_spectrum(lam, state.dim)
        g = float(mv.normalized[-1])
        cut = f"{cfg.pivot}|rest"
    return _dump({"cut": cut, "dim": mv.dim, "raw": [float(x) for x in mv.values],
                  "normalized": [float(x) for x in mv.normalized], "g": g})


HANDLERS = {"check": cmd_check, "roof": cmd_roof, "sample": cmd_sample, "zoo": cmd_zoo,
            "monotones": cmd_monotones}


def run(argv=None) -> int:
    try:
        cfg = parse(argv)
        text = HANDLERS[cfg.command](cfg)
        if text is not None:
            _write(cfg, text)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse
        return int(exc.code or 0)
    except (EntanglementError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
