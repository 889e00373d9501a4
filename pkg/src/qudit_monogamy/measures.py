"""Concurrence monotones and G-concurrence.

G-concurrence is normalised as ``g = d * (prod lambda_i)**(1/d)`` so that a
maximally entangled state scores 1 and ``g**d == d**d * det(rho_A)`` for
every marginal of a globally pure state.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import InvalidStateError
from .tensor import BipartitePureState, DensityMatrix, psd_determinant, schmidt_decompose


@dataclass(frozen=True)
class MonotoneVector:
    """Raw ``C_k = e_k(lambda)**(1/k)`` and the normalised ``d*(e_k/binom(d,k))**(1/k)``."""

    dim: int
    values: np.ndarray
    normalized: np.ndarray


@dataclass(frozen=True)
class GValue:
    g: float
    g_pow_d: float

    @classmethod
    def from_pow(cls, g_pow_d: float, dim: int) -> "GValue":
        gd = min(max(float(g_pow_d), 0.0), 1.0)
        return cls(gd ** (1.0 / dim), gd)

    @classmethod
    def from_g(cls, g: float, dim: int) -> "GValue":
        g = min(max(float(g), 0.0), 1.0)
        return cls(g, g**dim)


def elementary_symmetric(lam) -> np.ndarray:
    """``[e_0, e_1, ..., e_n]`` of the entries of ``lam``."""
    lam = np.asarray(lam, dtype=float)
    e = np.zeros(lam.size + 1)
    e[0] = 1.0
    for x in lam:
        e[1:] = e[1:] + x * e[:-1]
    return e


def monotones_from_spectrum(lam, dim: int | None = None) -> MonotoneVector:
    """Concurrence monotones of a pure state given its Schmidt probabilities.

    ``lam`` is zero-padded to ``dim`` entries when shorter.
    """
    lam = np.clip(np.asarray(lam, dtype=float), 0.0, None)
    d = dim or lam.size
    if lam.size < d:
        lam = np.concatenate([lam, np.zeros(d - lam.size)])
    e = elementary_symmetric(lam)[1:d + 1]
    k = np.arange(1, d + 1)
    raw = np.clip(e, 0.0, None) ** (1.0 / k)
    binoms = np.array([comb(d, int(j)) for j in k], dtype=float)
    norm = d * (np.clip(e, 0.0, None) / binoms) ** (1.0 / k)
    return MonotoneVector(d, raw, norm)


def _require_square(state: BipartitePureState) -> int:
    da, db = state.dims
    if da != db:
        raise InvalidStateError(f"square state required, got dims {state.dims}")
    return da


def concurrence_monotones(state: BipartitePureState) -> MonotoneVector:
    d = _require_square(state)
    return monotones_from_spectrum(schmidt_decompose(state).coefficients, d)


def g_concurrence_pure(state: BipartitePureState) -> GValue:
    """G-concurrence of a square pure state from its Schmidt probabilities."""
    d = _require_square(state)
    lam = schmidt_decompose(state).coefficients
    return GValue.from_g(d * float(np.prod(lam)) ** (1.0 / d), d)


def g_concurrence_marginal(rho: DensityMatrix, dim: int) -> GValue:
    """G-concurrence across a cut, from the single-party marginal ``rho``.

    Only meaningful when ``rho`` is the reduced state of a globally pure
    state; the caller is responsible for that.
    """
    if rho.dim != dim:
        raise InvalidStateError(f"marginal has dimension {rho.dim}, expected {dim}")
    return GValue.from_pow(dim**dim * psd_determinant(rho), dim)


def det_superadditivity_check(x, y, tol: float = 1e-10) -> tuple[bool, float]:
    """Return ``(det(X+Y) - det(X) - det(Y) >= -tol, slack)`` for PSD X, Y."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != y.shape or x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValueError(f"need two square matrices of equal shape, got {x.shape}, {y.shape}")
    slack = psd_determinant(x + y) - psd_determinant(x) - psd_determinant(y)
    return slack >= -tol, slack
