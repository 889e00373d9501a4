"""State containers, partial traces, Schmidt data and Haar sampling.

Tripartite amplitudes are stored flat with the third index fastest, so
``a[i, j, k]`` lives at ``i*d*d + j*d + k``. The JSON state format uses the
same order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidStateError, MalformedStateFileError, NotPSDError

#: tolerance for internal contract checks
ATOL = 1e-10
#: tolerance on user-supplied normalisation before renormalising
INGEST_TOL = 1e-6
#: eigenvalues in [-CLAMP, 0) are treated as exact zeros
CLAMP = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PureTripartiteState:
    """Pure state on C^d x C^d x C^d with unit-norm flat amplitudes."""

    dim: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if int(self.dim) < 2:
            raise InvalidStateError(f"dimension must be >= 2, got {self.dim}")
        amps = _frozen(np.ravel(self.amplitudes))
        if amps.size != self.dim**3:
            raise InvalidStateError(
                f"expected {self.dim**3} amplitudes for d={self.dim}, got {amps.size}")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > ATOL:
            raise InvalidStateError(f"state is not normalised (sum |a|^2 = {norm!r})")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "amplitudes", amps)

    @property
    def tensor(self) -> np.ndarray:
        """Amplitudes as a (d, d, d) array indexed ``[i, j, k]``."""
        d = self.dim
        return self.amplitudes.reshape(d, d, d)


@dataclass(frozen=True)
class BipartitePureState:
    """Pure state on C^dA x C^dB held as a dA x dB amplitude matrix."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 2:
            raise InvalidStateError("bipartite amplitudes must be a matrix")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > ATOL:
            raise InvalidStateError(f"state is not normalised (norm = {norm!r})")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dims(self) -> tuple[int, int]:
        return self.amplitudes.shape

    @classmethod
    def from_vector(cls, vec, dims: tuple[int, int]) -> "BipartitePureState":
        return cls(np.asarray(vec, dtype=complex).reshape(dims))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace operator.

    ``dims`` records the subsystem split (e.g. ``(3, 3)``); it defaults to a
    single subsystem of size ``n``.
    """

    entries: np.ndarray
    dims: tuple[int, ...] = ()

    def __post_init__(self):
        rho = _frozen(self.entries)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise InvalidStateError("density matrix must be square")
        n = rho.shape[0]
        dims = tuple(int(x) for x in self.dims) or (n,)
        if int(np.prod(dims)) != n:
            raise InvalidStateError(f"subsystem dims {dims} do not multiply to {n}")
        if not np.allclose(rho, rho.conj().T, rtol=0, atol=ATOL):
            raise InvalidStateError("density matrix is not Hermitian")
        tr = np.trace(rho)
        if abs(tr - 1.0) > ATOL:
            raise InvalidStateError(f"density matrix has trace {tr!r}")
        w = np.linalg.eigvalsh(rho)
        if w[0] < -CLAMP:
            raise NotPSDError(f"density matrix has eigenvalue {w[0]!r}")
        object.__setattr__(self, "entries", rho)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Ascending spectrum with the clamp window applied."""
        w = np.linalg.eigvalsh(self.entries)
        return np.where(w < 0, 0.0, w)

    @classmethod
    def from_pure(cls, psi: BipartitePureState) -> "DensityMatrix":
        v = psi.amplitudes.ravel()
        return cls(np.outer(v, v.conj()), psi.dims)


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Descending Schmidt probabilities and the matching orthonormal bases.

    ``left_basis[:, i]`` and ``right_basis[:, i]`` pair with
    ``coefficients[i]``.
    """

    coefficients: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray

    def reconstruct(self) -> np.ndarray:
        s = np.sqrt(self.coefficients)
        return (self.left_basis * s) @ self.right_basis.T


def make_tripartite(dim: int, amplitudes: Iterable[complex], renormalize: bool = False
                    ) -> PureTripartiteState:
    """Build a tripartite state from flat amplitudes.

    Inputs whose squared norm is within 1e-6 of one are renormalised
    silently; larger deviations need ``renormalize=True``.
    """
    amps = np.asarray(list(amplitudes) if not isinstance(amplitudes, np.ndarray) else amplitudes,
                      dtype=complex).ravel()
    if dim < 2:
        raise InvalidStateError(f"dimension must be >= 2, got {dim}")
    if amps.size != dim**3:
        raise InvalidStateError(f"expected {dim**3} amplitudes for d={dim}, got {amps.size}")
    norm2 = float(np.sum(np.abs(amps) ** 2))
    if norm2 == 0.0:
        raise InvalidStateError("zero vector is not a state")
    if abs(norm2 - 1.0) > INGEST_TOL and not renormalize:
        raise InvalidStateError(
            f"squared norm {norm2!r} deviates from 1 by more than {INGEST_TOL}; "
            "pass renormalize=True to accept")
    return PureTripartiteState(dim, amps / np.sqrt(norm2))


def partial_trace(state: PureTripartiteState, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the parties in ``keep`` (labels 1, 2, 3).

    Kept parties appear in ascending label order in the output.
    """
    keep = sorted(set(int(k) for k in keep))
    if not keep or len(keep) == 3 or any(k not in (1, 2, 3) for k in keep):
        raise ValueError(f"keep must be a nonempty proper subset of {{1,2,3}}, got {keep}")
    d = state.dim
    a = state.tensor
    kept = [k - 1 for k in keep]
    traced = [k for k in range(3) if k not in kept]
    # move kept axes to the front, flatten, contract the rest
    m = np.transpose(a, kept + traced).reshape(d ** len(kept), -1)
    rho = m @ m.conj().T
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(rho, (d,) * len(kept))


def schmidt_decompose(state: BipartitePureState) -> SchmidtDecomposition:
    """Schmidt probabilities (descending) with left/right bases via SVD."""
    u, s, vh = np.linalg.svd(state.amplitudes)
    k = s.size
    lam = s**2
    lam = lam / lam.sum()
    return SchmidtDecomposition(lam, u[:, :k], vh[:k, :].T)


def psd_determinant(rho: DensityMatrix | np.ndarray) -> float:
    """Determinant as a product of eigenvalues, clamping tiny negatives to 0."""
    m = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho)
    w = np.linalg.eigvalsh(m)
    if w[0] < -CLAMP:
        raise NotPSDError(f"matrix has eigenvalue {w[0]!r} below the clamp window")
    w = np.where(w < 0, 0.0, w)
    return float(np.prod(w))


def haar_random_tripartite(dim: int, seed: int) -> PureTripartiteState:
    """Haar-random pure state: i.i.d. complex Gaussians, normalised."""
    if dim < 2:
        raise InvalidStateError(f"dimension must be >= 2, got {dim}")
    rng = np.random.default_rng(seed)
    n = dim**3
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return PureTripartiteState(dim, z / np.linalg.norm(z))


def derive_seed(*keys: int) -> int:
    """Deterministic 64-bit child seed for a tuple of integer keys."""
    return int(np.random.SeedSequence(list(keys)).generate_state(1, np.uint64)[0])


# --- JSON state files -------------------------------------------------------

def state_to_json(state: PureTripartiteState | BipartitePureState) -> dict:
    if isinstance(state, PureTripartiteState):
        dims = [state.dim] * 3
        amps = state.amplitudes
    else:
        dims = list(state.dims)
        amps = state.amplitudes.ravel()
    return {"dims": dims, "amplitudes": [[float(z.real), float(z.imag)] for z in amps]}


def state_from_json(obj: dict) -> PureTripartiteState | BipartitePureState:
    """Parse the ``{"dims": [...], "amplitudes": [[re, im], ...]}`` format.

    Three equal dims give a tripartite state; two dims give a bipartite one.
    """
    try:
        dims = [int(x) for x in obj["dims"]]
        pairs = obj["amplitudes"]
        amps = np.array([complex(float(re), float(im)) for re, im in pairs])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedStateFileError(f"malformed state JSON: {exc}") from exc
    if len(dims) == 3:
        if len(set(dims)) != 1:
            raise MalformedStateFileError(f"tripartite dims must be equal, got {dims}")
        return make_tripartite(dims[0], amps)
    if len(dims) == 2:
        if amps.size != dims[0] * dims[1]:
            raise InvalidStateError(f"expected {dims[0] * dims[1]} amplitudes, got {amps.size}")
        norm = np.linalg.norm(amps)
        if norm == 0 or abs(norm**2 - 1) > INGEST_TOL:
            raise InvalidStateError(f"squared norm {norm**2!r} is not 1")
        return BipartitePureState((amps / norm).reshape(dims))
    raise MalformedStateFileError(f"dims must have length 2 or 3, got {dims}")


def load_state(path: str | Path):
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedStateFileError(f"{path}: not valid JSON ({exc})") from exc
    return state_from_json(obj)


def bipartite_cut(state: PureTripartiteState, pivot: int) -> BipartitePureState:
    """The pivot | rest cut as a d x d^2 amplitude matrix."""
    if pivot not in (1, 2, 3):
        raise ValueError(f"pivot must be 1, 2 or 3, got {pivot}")
    d = state.dim
    order: Sequence[int] = [pivot - 1] + [k for k in range(3) if k != pivot - 1]
    return BipartitePureState(np.transpose(state.tensor, order).reshape(d, d * d))
