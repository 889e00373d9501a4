# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled convex-roof search kernel.

Mirrors :mod:`qudit_monogamy._kernel_py`; both consume the same pre-drawn
noise so their trajectories agree up to rounding.
"""
from libc.stdlib cimport malloc, free
from libc.math cimport sqrt, pow

cdef extern from "complex.h" nogil:
    double cabs(double complex)
    double complex conj(double complex)

cdef enum:
    MEASURE_G = 0
    MEASURE_C2 = 1

cdef double GROW = 1.5
cdef double SHRINK = 0.9036020036098448   # 1.5 ** -0.25
cdef double STEP_FLOOR = 1e-12
cdef double REL_GAIN = 1e-13


cdef double _abs_det(double complex* M, int d) noexcept nogil:
    # LU with partial pivoting, destroys M
    cdef int i, j, k, p
    cdef double best, a, out = 1.0
    cdef double complex t, f
    for k in range(d):
        p = k
        best = cabs(M[k * d + k])
        for i in range(k + 1, d):
            a = cabs(M[i * d + k])
            if a > best:
                best = a
                p = i
        if best == 0.0:
            return 0.0
        if p != k:
            for j in range(d):
                t = M[k * d + j]
                M[k * d + j] = M[p * d + j]
                M[p * d + j] = t
        out *= best
        for i in range(k + 1, d):
            f = M[i * d + k] / M[k * d + k]
            for j in range(k + 1, d):
                M[i * d + j] = M[i * d + j] - f * M[k * d + j]
    return out


cdef double _objective(const double complex* A, const double complex* U, int m, int r, int d,
                       int measure, double complex* M) noexcept nogil:
    cdef int h, l, i, j, k, dd = d * d
    cdef double total = 0.0, p, f, x
    cdef double complex u, acc
    for h in range(m):
        for i in range(dd):
            M[i] = 0
        for l in range(r):
            u = U[h * r + l]
            if u == 0:
                continue
            for i in range(dd):
                M[i] = M[i] + u * A[l * dd + i]
        if measure == MEASURE_G:
            total += pow(_abs_det(M, d), 2.0 / d)
        else:
            p = 0.0
            for i in range(dd):
                p += M[i].real * M[i].real + M[i].imag * M[i].imag
            f = 0.0
            for i in range(d):
                for j in range(d):
                    acc = 0
                    for k in range(d):
                        acc = acc + M[i * d + k] * conj(M[j * d + k])
                    f += acc.real * acc.real + acc.imag * acc.imag
            x = (p * p - f) / 2.0
            if x > 0.0:
                total += sqrt(x)
    if measure == MEASURE_G:
        return d * total
    return total


cdef int _orthonormalize(double complex* C, int m, int r) noexcept nogil:
    # modified Gram-Schmidt on the columns of the row-major m x r matrix C
    cdef int i, j, k
    cdef double complex proj
    cdef double nrm
    for j in range(r):
        for k in range(j):
            proj = 0
            for i in range(m):
                proj = proj + conj(C[i * r + k]) * C[i * r + j]
            for i in range(m):
                C[i * r + j] = C[i * r + j] - proj * C[i * r + k]
        nrm = 0.0
        for i in range(m):
            nrm += C[i * r + j].real * C[i * r + j].real + C[i * r + j].imag * C[i * r + j].imag
        nrm = sqrt(nrm)
        if nrm < 1e-150:
            return 0
        for i in range(m):
            C[i * r + j] = C[i * r + j] / nrm
    return 1


def objective(const double complex[:, :, ::1] A, const double complex[:, ::1] U, int measure):
    """Ensemble-average measure for mixing matrix ``U`` over members ``A``."""
    cdef int r = A.shape[0], d = A.shape[1], m = U.shape[0]
    if U.shape[1] != r or A.shape[2] != d:
        raise ValueError("shape mismatch between mixing matrix and ensemble")
    cdef double complex* M = <double complex*> malloc(d * d * sizeof(double complex))
    cdef double out
    try:
        out = _objective(&A[0, 0, 0], &U[0, 0], m, r, d, measure, M)
    finally:
        free(M)
    return out


def search(const double complex[:, :, ::1] A, double complex[:, ::1] U,
           const double complex[:, :, ::1] noise, int measure, double step0,
           int sweep, double tol):
    """Adaptive random search from ``U`` (updated in place).

    Returns ``(objective, iterations, converged)``.
    """
    cdef int r = A.shape[0], d = A.shape[1], m = U.shape[0]
    cdef int iters = noise.shape[0]
    if U.shape[1] != r or A.shape[2] != d or noise.shape[1] != m or noise.shape[2] != r:
        raise ValueError("shape mismatch between mixing matrix, ensemble and noise")
    cdef int n = m * r, it, i, done = 0
    cdef bint early = False
    cdef double cur, val, step = step0, improvement
    cdef double complex* M = <double complex*> malloc(d * d * sizeof(double complex))
    cdef double complex* C = <double complex*> malloc(n * sizeof(double complex))
    cdef double* trace = <double*> malloc((iters + 1) * sizeof(double))
    try:
        with nogil:
            cur = _objective(&A[0, 0, 0], &U[0, 0], m, r, d, measure, M)
            trace[0] = cur
            for it in range(iters):
                if cur <= 0.0 or step < STEP_FLOOR:
                    early = True
                    break
                for i in range(n):
                    C[i] = U[i // r, i % r] + step * noise[it, i // r, i % r]
                if _orthonormalize(C, m, r):
                    val = _objective(&A[0, 0, 0], C, m, r, d, measure, M)
                    if val < cur - REL_GAIN * cur:
                        cur = val
                        for i in range(n):
                            U[i // r, i % r] = C[i]
                        step = step * GROW
                    else:
                        step = step * SHRINK
                else:
                    step = step * SHRINK
                done = it + 1
                trace[done] = cur
        if early:
            converged = True
        else:
            improvement = trace[done - sweep] - cur if done >= sweep else trace[0] - cur
            converged = improvement < tol
    finally:
        free(M)
        free(C)
        free(trace)
    return cur, done, bool(converged)
