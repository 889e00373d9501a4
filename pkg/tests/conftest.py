"""Independent oracles shared by the test modules.

Nothing here calls into the package's linear algebra paths; each helper is
a deliberately naive re-derivation.
"""
import itertools

import numpy as np
import pytest


def leibniz_det(m):
    """Determinant by the permutation expansion."""
    m = np.asarray(m)
    n = m.shape[0]
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = (-1) ** inversions
        for i in range(n):
            term = term * m[i, perm[i]]
        total += term
    return total


def naive_reduced(tensor, keep):
    """Reduced density matrix by explicit loops over every index."""
    d = tensor.shape[0]
    keep = sorted(keep)
    traced = [k for k in (1, 2, 3) if k not in keep]
    n = d ** len(keep)
    rho = np.zeros((n, n), dtype=complex)
    for row in itertools.product(range(d), repeat=len(keep)):
        for col in itertools.product(range(d), repeat=len(keep)):
            acc = 0
            for t in itertools.product(range(d), repeat=len(traced)):
                ia = [0, 0, 0]
                ib = [0, 0, 0]
                for pos, k in enumerate(keep):
                    ia[k - 1] = row[pos]
                    ib[k - 1] = col[pos]
                for pos, k in enumerate(traced):
                    ia[k - 1] = t[pos]
                    ib[k - 1] = t[pos]
                acc += tensor[tuple(ia)] * np.conj(tensor[tuple(ib)])
            r = sum(v * d ** (len(keep) - 1 - p) for p, v in enumerate(row))
            c = sum(v * d ** (len(keep) - 1 - p) for p, v in enumerate(col))
            rho[r, c] = acc
    return rho


SY = np.array([[0, -1j], [1j, 0]])


def wootters_concurrence(rho):
    """Closed-form two-qubit concurrence."""
    yy = np.kron(SY, SY)
    rt = rho @ yy @ rho.conj() @ yy
    ev = np.sqrt(np.abs(np.sort(np.linalg.eigvals(rt).real)[::-1]))
    return max(0.0, ev[0] - ev[1:].sum())


def random_unitary(n, rng):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_amplitudes(shape, rng):
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return z / np.linalg.norm(z)


def random_psd(n, rng, rank=None):
    a = rng.standard_normal((n, rank or n)) + 1j * rng.standard_normal((n, rank or n))
    return a @ a.conj().T


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
