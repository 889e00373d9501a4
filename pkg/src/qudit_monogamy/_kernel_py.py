"""Pure numpy twin of the compiled roof-search kernel.

Same algorithm, same constants and the same noise stream as ``_kernel.pyx``;
used when the extension is not built or ``QUDIT_MONOGAMY_PURE=1`` is set.
"""
import numpy as np

MEASURE_G = 0
MEASURE_C2 = 1

GROW = 1.5
SHRINK = 1.5 ** -0.25
STEP_FLOOR = 1e-12
REL_GAIN = 1e-13


def _members(A, U):
    # row h of U mixes the r canonical members into member h
    return np.tensordot(U, A, axes=1)


def objective(A, U, measure):
    A = np.asarray(A, dtype=complex)
    U = np.asarray(U, dtype=complex)
    if U.shape[1] != A.shape[0] or A.shape[1] != A.shape[2]:
        raise ValueError("shape mismatch between mixing matrix and ensemble")
    d = A.shape[1]
    M = _members(A, U)
    if measure == MEASURE_G:
        return float(d * np.sum(np.abs(np.linalg.det(M)) ** (2.0 / d)))
    p = np.sum(np.abs(M) ** 2, axis=(1, 2))
    S = M @ np.conj(np.swapaxes(M, 1, 2))
    f = np.sum(np.abs(S) ** 2, axis=(1, 2))
    x = (p * p - f) / 2.0
    return float(np.sum(np.sqrt(np.where(x > 0, x, 0.0))))


def _orthonormalize(C):
    C = C.copy()
    r = C.shape[1]
    for j in range(r):
        for k in range(j):
            C[:, j] -= np.vdot(C[:, k], C[:, j]) * C[:, k]
        nrm = np.linalg.norm(C[:, j])
        if nrm < 1e-150:
            return None
        C[:, j] /= nrm
    return C


def search(A, U, noise, measure, step0, sweep, tol):
    """Adaptive random search from ``U`` (updated in place).

    Returns ``(objective, iterations, converged)``.
    """
    A = np.asarray(A, dtype=complex)
    noise = np.asarray(noise, dtype=complex)
    m, r = U.shape
    if A.shape[0] != r or noise.shape[1:] != (m, r):
        raise ValueError("shape mismatch between mixing matrix, ensemble and noise")
    cur = objective(A, U, measure)
    trace = [cur]
    step = step0
    early = False
    for it in range(noise.shape[0]):
        if cur <= 0.0 or step < STEP_FLOOR:
            early = True
            break
        C = _orthonormalize(U + step * noise[it])
        if C is None:
            step *= SHRINK
        else:
            val = objective(A, C, measure)
            if val < cur - REL_GAIN * cur:
                cur = val
                U[...] = C
                step *= GROW
            else:
                step *= SHRINK
        trace.append(cur)
    done = len(trace) - 1
    if early:
        return cur, done, True
    improvement = trace[done - sweep] - cur if done >= sweep else trace[0] - cur
    return cur, done, bool(improvement < tol)
