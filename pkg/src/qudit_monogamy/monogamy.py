"""Monogamy residuals ``G^d(pivot|rest) - G^d(pivot,a) - G^d(pivot,b)``.

The two-party terms come from :func:`roof_upper_bound`, so they are upper
bounds and the computed residual never exceeds the true one. A residual
below ``-tol`` is therefore reported as inconclusive, not as a violation.
"""
from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .measures import g_concurrence_marginal, monotones_from_spectrum
from .roof import RoofConfig, RoofResult, roof_upper_bound
from .tensor import PureTripartiteState, derive_seed, haar_random_tripartite, partial_trace

TOL = 1e-7

CSV_COLUMNS = ("sample_index", "dim", "pivot", "lhs_pow_d", "rhs12_pow_d", "rhs13_pow_d",
               "residual", "converged12", "converged13")


def _others(pivot: int) -> tuple[int, int]:
    if pivot not in (1, 2, 3):
        raise ValueError(f"pivot must be 1, 2 or 3, got {pivot}")
    a, b = (k for k in (1, 2, 3) if k != pivot)
    return a, b


@dataclass(frozen=True)
class MonogamyReport:
    """Terms of the monogamy inequality for one pivot.

    ``rhs12`` pairs the pivot with the lower-labelled remaining party and
    ``rhs13`` with the higher one, so for pivot 1 they are literally the
    (1,2) and (1,3) terms.
    """

    pivot: int
    dim: int
    seed: int
    lhs_pow_d: float
    rhs12_pow_d: float
    rhs13_pow_d: float
    residual: float
    roof_converged: tuple[bool, bool]
    lhs_g: float
    rhs12_g: float
    rhs13_g: float
    tol: float = TOL

    @property
    def status(self) -> str:
        return "satisfied" if self.residual >= -self.tol else "inconclusive"

    def to_json(self) -> dict:
        return {
            "pivot": self.pivot, "dim": self.dim, "seed": self.seed,
            "lhs_pow_d": self.lhs_pow_d, "rhs12_pow_d": self.rhs12_pow_d,
            "rhs13_pow_d": self.rhs13_pow_d, "residual": self.residual,
            "lhs_g": self.lhs_g, "rhs12_g": self.rhs12_g, "rhs13_g": self.rhs13_g,
            "roof_converged": list(self.roof_converged), "status": self.status,
        }


def pair_roof(state: PureTripartiteState, pair: tuple[int, int], config: RoofConfig) -> RoofResult:
    """Roof bound on the two-party marginal ``pair``; seeded by ``(seed, pair)``."""
    a, b = sorted(pair)
    d = state.dim
    rho = partial_trace(state, (a, b))
    return roof_upper_bound(rho, (d, d), replace(config, seed=derive_seed(config.seed, a, b)))


def _report(state, pivot, lhs, roof_a, roof_b, seed, tol) -> MonogamyReport:
    d = state.dim
    ra, rb = roof_a.upper_bound, roof_b.upper_bound
    return MonogamyReport(
        pivot=pivot, dim=d, seed=seed,
        lhs_pow_d=lhs.g_pow_d, rhs12_pow_d=ra.g_pow_d, rhs13_pow_d=rb.g_pow_d,
        residual=lhs.g_pow_d - ra.g_pow_d - rb.g_pow_d,
        roof_converged=(roof_a.converged, roof_b.converged),
        lhs_g=lhs.g, rhs12_g=ra.g, rhs13_g=rb.g, tol=tol)


def pivot_g(state: PureTripartiteState, pivot: int):
    """G-concurrence across the pivot | rest cut."""
    return g_concurrence_marginal(partial_trace(state, (pivot,)), state.dim)


def monogamy_residual(state: PureTripartiteState, pivot: int = 1,
                      roof_config: RoofConfig | None = None, tol: float = TOL) -> MonogamyReport:
    config = roof_config or RoofConfig()
    a, b = _others(pivot)
    lhs = pivot_g(state, pivot)
    roof_a = pair_roof(state, (pivot, a), config)
    roof_b = pair_roof(state, (pivot, b), config)
    return _report(state, pivot, lhs, roof_a, roof_b, config.seed, tol)


def all_pivots(state: PureTripartiteState, roof_config: RoofConfig | None = None,
               tol: float = TOL) -> list[MonogamyReport]:
    """Reports for pivots 1, 2, 3 sharing the three pair roofs."""
    config = roof_config or RoofConfig()
    roofs = {pair: pair_roof(state, pair, config) for pair in ((1, 2), (1, 3), (2, 3))}
    out = []
    for pivot in (1, 2, 3):
        a, b = _others(pivot)
        out.append(_report(state, pivot, pivot_g(state, pivot),
                           roofs[tuple(sorted((pivot, a)))], roofs[tuple(sorted((pivot, b)))],
                           config.seed, tol))
    return out


def ckw_concurrence_residual(state: PureTripartiteState, pivot: int = 1,
                             roof_config: RoofConfig | None = None) -> float:
    """CKW-style residual using the squared second monotone (raw ``C_2``).

    Only for qutrits; shown for contrast with the G-concurrence residual.
    """
    if state.dim != 3:
        raise ValueError(f"CKW contrast is defined for d = 3, got d = {state.dim}")
    config = replace(roof_config or RoofConfig(), measure="c2")
    a, b = _others(pivot)
    lam = partial_trace(state, (pivot,)).eigenvalues()
    lhs = monotones_from_spectrum(lam, 3).values[1] ** 2
    rhs = sum(pair_roof(state, (pivot, x), config).value ** 2 for x in (a, b))
    return float(lhs - rhs)


# --- campaigns ---------------------------------------------------------------

@dataclass(frozen=True)
class CampaignRow:
    sample_index: int
    dim: int
    pivot: int
    lhs_pow_d: float
    rhs12_pow_d: float
    rhs13_pow_d: float
    residual: float
    converged12: bool
    converged13: bool

    def csv_fields(self) -> list[str]:
        return [str(self.sample_index), str(self.dim), str(self.pivot),
                repr(self.lhs_pow_d), repr(self.rhs12_pow_d), repr(self.rhs13_pow_d),
                repr(self.residual), _fmt_bool(self.converged12), _fmt_bool(self.converged13)]

    @classmethod
    def from_csv(cls, rec: list[str]) -> "CampaignRow":
        return cls(int(rec[0]), int(rec[1]), int(rec[2]), float(rec[3]), float(rec[4]),
                   float(rec[5]), float(rec[6]), rec[7] == "true", rec[8] == "true")


def _fmt_bool(b: bool) -> str:
    return "true" if b else "false"


@dataclass(frozen=True)
class CampaignSummary:
    dim: int
    samples: int
    seed: int
    tol: float
    min_residual: float
    mean_residual: float
    violations: int
    nonconverged_samples: int
    rows: tuple[CampaignRow, ...]

    def to_json(self, include_rows: bool = True) -> dict:
        out = {
            "dim": self.dim, "samples": self.samples, "seed": self.seed, "tol": self.tol,
            "min_residual": self.min_residual, "mean_residual": self.mean_residual,
            "violations": self.violations, "nonconverged_samples": self.nonconverged_samples,
        }
        if include_rows:
            out["rows"] = [dict(zip(CSV_COLUMNS, (r.sample_index, r.dim, r.pivot, r.lhs_pow_d,
                                                  r.rhs12_pow_d, r.rhs13_pow_d, r.residual,
                                                  r.converged12, r.converged13)))
                           for r in self.rows]
        return out


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.csv_fields())
    return buf.getvalue()


def sample_rows(dim: int, index: int, seed: int, roof_config: RoofConfig,
                tol: float = TOL) -> list[CampaignRow]:
    """Rows for one Haar sample; depends only on ``(seed, index)``."""
    state = haar_random_tripartite(dim, derive_seed(seed, index))
    config = replace(roof_config, seed=derive_seed(seed, index, 0))
    return [CampaignRow(index, dim, rep.pivot, rep.lhs_pow_d, rep.rhs12_pow_d, rep.rhs13_pow_d,
                        rep.residual, rep.roof_converged[0], rep.roof_converged[1])
            for rep in all_pivots(state, config, tol)]


def _read_partial(path: Path, dim: int) -> dict[int, list[CampaignRow]]:
    done: dict[int, list[CampaignRow]] = {}
    if not path.exists():
        return done
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != CSV_COLUMNS:
            return {}
        for rec in reader:
            try:
                row = CampaignRow.from_csv(rec)
            except (ValueError, IndexError):
                break
            if row.dim != dim:
                return {}
            done.setdefault(row.sample_index, []).append(row)
    return {k: v for k, v in done.items() if len(v) == 3}


def verify_campaign(dim: int, samples: int, seed: int, roof_config: RoofConfig | None = None,
                    tol: float = TOL, csv_path: str | os.PathLike | None = None,
                    workers: int = 1) -> CampaignSummary:
    """Monogamy residuals on ``samples`` Haar states, all three pivots each.

    With ``csv_path`` the rows stream to ``<csv_path>.partial`` and the file
    is renamed into place at the end; an interrupted run picks up the
    completed samples from the partial file.
    """
    if dim < 2:
        raise ValueError(f"dimension must be >= 2, got {dim}")
    if samples < 1:
        raise ValueError("need at least one sample")
    config = roof_config or RoofConfig()

    partial = Path(f"{csv_path}.partial") if csv_path is not None else None
    done = _read_partial(partial, dim) if partial is not None else {}
    todo = [i for i in range(samples) if i not in done]
    work = lambda i: sample_rows(dim, i, seed, config, tol)  # noqa: E731

    by_index = dict(done)
    fh = None
    if partial is not None:
        fh = open(partial, "w", newline="")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        results = iter(pool.map(work, todo) if pool else map(work, todo))
        for i in range(samples):
            if i not in by_index:
                by_index[i] = next(results)
            if fh is not None:
                for r in by_index[i]:
                    writer.writerow(r.csv_fields())
                fh.flush()
    finally:
        if pool:
            pool.shutdown()
        if fh is not None:
            fh.close()
    if partial is not None:
        os.replace(partial, csv_path)

    rows = tuple(r for i in range(samples) for r in by_index[i])
    residuals = np.array([r.residual for r in rows])
    nonconv = sum(1 for i in range(samples)
                  if not all(r.converged12 and r.converged13 for r in by_index[i]))
    return CampaignSummary(dim, samples, seed, tol, float(residuals.min()),
                           float(residuals.mean()), int(np.sum(residuals < -tol)), nonconv, rows)
