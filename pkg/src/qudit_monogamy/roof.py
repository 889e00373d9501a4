"""Convex-roof upper bounds by searching over ensemble decompositions.

Every ensemble realising ``rho`` is ``phi_h = sum_l U[h, l] psi_l`` where
``psi_l = sqrt(mu_l) v_l`` is the eigen-ensemble and ``U`` is an m x r
matrix with orthonormal columns. The search moves ``U`` on that manifold,
so any point it returns is a valid decomposition and its average is an
upper bound on the roof, converged or not.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import InvalidStateError
from .measures import GValue, concurrence_monotones, g_concurrence_pure
from .tensor import BipartitePureState, DensityMatrix

RANK_TOL = 1e-12
STEP0 = 0.3
SWEEP = 100
ZERO_G = 1e-6

_MEASURES = {"g": kernels.MEASURE_G, "c2": kernels.MEASURE_C2}


@dataclass(frozen=True)
class RoofConfig:
    """Search settings. ``ensemble_size=None`` uses the rank of rho."""

    ensemble_size: int | None = None
    restarts: int = 32
    max_iters: int = 2000
    tol: float = 1e-9
    seed: int = 0
    measure: str = "g"
    workers: int = 1
    backend: str | None = None


@dataclass(frozen=True)
class EnsembleDecomposition:
    probabilities: np.ndarray
    members: tuple[BipartitePureState, ...]
    mixing: np.ndarray

    def density_matrix(self) -> np.ndarray:
        out = 0
        for p, psi in zip(self.probabilities, self.members):
            v = psi.amplitudes.ravel()
            out = out + p * np.outer(v, v.conj())
        return out

    def to_json(self) -> dict:
        return {
            "probabilities": [float(p) for p in self.probabilities],
            "members": [
                [[[float(z.real), float(z.imag)] for z in row] for row in psi.amplitudes]
                for psi in self.members
            ],
        }


@dataclass(frozen=True)
class RoofResult:
    value: float
    measure: str
    best_decomposition: EnsembleDecomposition
    restarts_used: int
    converged: bool
    zero_g_member_count: int
    restart_values: tuple[float, ...] = field(default=())
    dim: int = 0

    @property
    def upper_bound(self) -> GValue:
        """Upper bound on G(rho); only defined for the ``"g"`` measure."""
        if self.measure != "g":
            raise AttributeError("upper_bound is only defined for the G-concurrence roof")
        return GValue.from_g(self.value, self.dim)


def canonical_ensemble(rho: DensityMatrix, dims: tuple[int, int]) -> np.ndarray:
    """Sub-normalised eigen-ensemble as an (r, dA, dB) array, largest weight first."""
    w, v = np.linalg.eigh(rho.entries)
    order = np.argsort(w, kind="stable")[::-1]
    w, v = w[order], v[:, order]
    keep = w > RANK_TOL * float(np.trace(rho.entries).real)
    A = (v[:, keep] * np.sqrt(w[keep])).T
    return np.ascontiguousarray(A.reshape(-1, *dims))


def _member_value(psi: BipartitePureState, measure: str) -> float:
    if measure == "g":
        return g_concurrence_pure(psi).g
    return float(concurrence_monotones(psi).values[1])


def decompose(A: np.ndarray, U: np.ndarray) -> EnsembleDecomposition:
    """Normalised members and weights of the ensemble mixed by ``U``."""
    M = np.tensordot(U, A, axes=1)
    probs = np.sum(np.abs(M) ** 2, axis=(1, 2))
    members = []
    for p, Mh in zip(probs, M):
        if p > 1e-300:
            members.append(BipartitePureState(Mh / np.sqrt(p)))
        else:
            filler = np.zeros(Mh.shape, dtype=complex)
            filler[0, 0] = 1.0
            members.append(BipartitePureState(filler))
    probs = probs / probs.sum()
    return EnsembleDecomposition(probs, tuple(members), np.array(U))


def _initial_mixing(rng: np.random.Generator, m: int, r: int, restart: int) -> np.ndarray:
    if restart == 0:
        return np.eye(m, r, dtype=complex)
    z = rng.standard_normal((m, r)) + 1j * rng.standard_normal((m, r))
    q, t = np.linalg.qr(z)
    return np.ascontiguousarray(q * (np.diag(t) / np.abs(np.diag(t))))


def _run_restart(A, m, r, config: RoofConfig, restart: int, kernel):
    rng = np.random.default_rng([config.seed, restart])
    U = _initial_mixing(rng, m, r, restart)
    shape = (config.max_iters, m, r)
    noise = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2 * m * r)
    value, iters, converged = kernel.search(
        A, U, np.ascontiguousarray(noise), _MEASURES[config.measure], STEP0, SWEEP, config.tol)
    return value, U, converged


def roof_upper_bound(rho: DensityMatrix, dims: tuple[int, int] | None = None,
                     config: RoofConfig | None = None) -> RoofResult:
    """Smallest ensemble-average measure found over decompositions of ``rho``.

    The result is an upper bound on the convex roof regardless of whether
    the search converged. Restart ``k`` draws its randomness from
    ``(seed, k)`` alone.
    """
    config = config or RoofConfig()
    if config.measure not in _MEASURES:
        raise ValueError(f"unknown measure {config.measure!r}")
    dims = tuple(dims or rho.dims)
    if len(dims) != 2 or dims[0] * dims[1] != rho.dim:
        raise InvalidStateError(f"dims {dims} do not match a bipartite split of size {rho.dim}")
    if dims[0] != dims[1]:
        raise InvalidStateError(f"square split required, got {dims}")
    A = canonical_ensemble(rho, dims)
    r = A.shape[0]
    m = config.ensemble_size or r
    if m < r:
        raise ValueError(f"ensemble size {m} cannot realise a rank-{r} state")
    if m > r * r:
        raise ValueError(f"ensemble size {m} exceeds rank^2 = {r * r}")
    if config.restarts < 1:
        raise ValueError("need at least one restart")

    kernel = kernels.get(config.backend)
    run = lambda k: _run_restart(A, m, r, config, k, kernel)  # noqa: E731
    if config.workers > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            runs = list(pool.map(run, range(config.restarts)))
    else:
        runs = [run(k) for k in range(config.restarts)]

    values = [v for v, _, _ in runs]
    best = int(np.argmin(values))  # first minimum wins ties
    _, U, converged = runs[best]
    decomp = decompose(A, U)
    member_vals = [_member_value(psi, config.measure) for psi in decomp.members]
    value = float(np.dot(decomp.probabilities, member_vals))
    zero = sum(1 for p, g in zip(decomp.probabilities, member_vals) if p > 0 and g <= ZERO_G)
    return RoofResult(value, config.measure, decomp, config.restarts, bool(converged), zero,
                      tuple(float(v) for v in values), dims[0])


def decomposition_profile(result: RoofResult, eps: float = ZERO_G) -> int:
    """Number of members with nonzero weight whose measure exceeds ``eps``."""
    count = 0
    for p, psi in zip(result.best_decomposition.probabilities, result.best_decomposition.members):
        if p > 0 and _member_value(psi, result.measure) > eps:
            count += 1
    return count
