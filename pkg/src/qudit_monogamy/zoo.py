"""Named tripartite states: GHZ, the antisymmetric qutrit state, W-class."""
from __future__ import annotations

import numpy as np

from .errors import InvalidStateError
from .tensor import ATOL, PureTripartiteState


def ghz(dim: int) -> PureTripartiteState:
    """``sum_i |iii> / sqrt(d)``."""
    if dim < 2:
        raise InvalidStateError(f"dimension must be >= 2, got {dim}")
    a = np.zeros((dim, dim, dim), dtype=complex)
    for i in range(dim):
        a[i, i, i] = 1.0 / np.sqrt(dim)
    return PureTripartiteState(dim, a.ravel())


_CHI_TERMS = {(0, 1, 2): 1, (0, 2, 1): -1, (1, 2, 0): 1, (1, 0, 2): -1, (2, 0, 1): 1, (2, 1, 0): -1}


def antisymmetric_chi() -> PureTripartiteState:
    """Totally antisymmetric qutrit state, ``sum sign(ijk) |ijk> / sqrt(6)``."""
    a = np.zeros((3, 3, 3), dtype=complex)
    for idx, sign in _CHI_TERMS.items():
        a[idx] = sign / np.sqrt(6)
    return PureTripartiteState(3, a.ravel())


# (party, level) -> basis ket: party p carries level l, the others sit in |0>
_W_SLOTS = {(1, 1): (1, 0, 0), (1, 2): (2, 0, 0),
            (2, 1): (0, 1, 0), (2, 2): (0, 2, 0),
            (3, 1): (0, 0, 1), (3, 2): (0, 0, 2)}


def w_class(coeffs) -> PureTripartiteState:
    """Generalized W-class qutrit state from a 3 x 2 coefficient array.

    ``coeffs[p-1, l-1]`` multiplies the ket where party ``p`` is in level
    ``l`` and the other two are in ``|0>``. The coefficients must satisfy
    ``sum |a|^2 = 1``.
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.shape != (3, 2):
        raise InvalidStateError(f"W-class coefficients must have shape (3, 2), got {c.shape}")
    norm = float(np.sum(np.abs(c) ** 2))
    if abs(norm - 1.0) > ATOL:
        raise InvalidStateError(f"W-class coefficients have sum |a|^2 = {norm!r}")
    a = np.zeros((3, 3, 3), dtype=complex)
    for (p, l), ket in _W_SLOTS.items():
        a[ket] = c[p - 1, l - 1]
    return PureTripartiteState(3, a.ravel())


def w_state() -> PureTripartiteState:
    """W-class member with every coefficient equal to ``1/sqrt(6)``."""
    return w_class(np.full((3, 2), 1 / np.sqrt(6)))


def random_w_coefficients(rng: np.random.Generator) -> np.ndarray:
    c = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    return c / np.linalg.norm(c)


ZOO = {"ghz": ghz, "chi": lambda dim=3: antisymmetric_chi(), "w": lambda dim=3: w_state()}


def named(name: str, dim: int = 3) -> PureTripartiteState:
    try:
        factory = ZOO[name]
    except KeyError:
        raise ValueError(f"unknown zoo state {name!r}; choose from {sorted(ZOO)}") from None
    if name != "ghz" and dim != 3:
        raise ValueError(f"{name!r} is only defined for d = 3")
    return factory(dim)
