# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled cosine/sine kernels.

Same recursion, same operation tallies and same output layout as
``_pykernels``; rows are processed one at a time with a preallocated
scratch buffer instead of fresh NumPy temporaries.
"""

import numpy as np
from libc.stdlib cimport malloc, free


cdef struct Counts:
    long long adds
    long long muls


cdef inline int _log2(Py_ssize_t n) nogil:
    cdef int r = 0
    while n > 1:
        n >>= 1
        r += 1
    return r


cdef void _cs(const double* x, Py_ssize_t n, double* out, const double* sec,
              const Py_ssize_t* off, double* work, Counts* cnt) noexcept nogil:
    cdef Py_ssize_t m, nu, k
    cdef double aux, half
    cdef double* even
    cdef double* fold
    cdef double* ct
    cdef double* cb
    cdef const double* s
    if n == 4:
        out[0] = x[0] + 2.0 * x[1] + x[2]
        out[1] = x[0] - x[2]
        out[2] = x[0] - 2.0 * x[1] + x[2]
        cnt.adds += 5
        cnt.muls += 2
        return
    m = n // 2
    nu = n // 4
    even = work
    fold = work + m
    ct = work + 2 * m
    cb = ct + nu + 1
    for k in range(m):
        even[k] = x[2 * k]
    fold[0] = 2.0 * x[1]
    for k in range(1, nu):
        fold[k] = x[2 * k + 1] + x[2 * (m - k) + 1]
        fold[m - k] = fold[k]
    fold[nu] = 2.0 * x[2 * nu + 1]
    cnt.adds += nu - 1
    cnt.muls += 2

    _cs(even, m, ct, sec, off, cb + nu + 1, cnt)
    _cs(fold, m, cb, sec, off, cb + nu + 1, cnt)

    s = sec + off[_log2(n)]
    for k in range(1, nu):
        aux = s[k - 1] * cb[k]
        out[k] = ct[k] + aux
        out[m - k] = ct[k] - aux
    half = 0.5 * cb[0]
    out[0] = ct[0] + half
    out[nu] = ct[nu]
    out[m] = ct[0] - half
    cnt.adds += 2 * (nu - 1) + 2
    cnt.muls += (nu - 1) + 1


cdef void _sn(const double* x, Py_ssize_t n, double* out, const double* sec,
              const Py_ssize_t* off, double* work, Counts* cnt) noexcept nogil:
    cdef Py_ssize_t m, nu, k, j
    cdef double aux, acc
    cdef double* even
    cdef double* fold
    cdef double* st
    cdef double* sb
    cdef const double* s
    if n == 4:
        out[0] = 0.0
        out[1] = 2.0 * x[1]
        cnt.muls += 1
        return
    m = n // 2
    nu = n // 4
    even = work
    fold = work + m
    st = work + 2 * m
    sb = st + nu
    for k in range(m):
        even[k] = x[2 * k]
    fold[0] = 0.0
    fold[nu] = 0.0
    for k in range(1, nu):
        fold[k] = x[2 * k + 1] - x[2 * (m - k) + 1]
        fold[m - k] = -fold[k]
    cnt.adds += nu - 1

    _sn(even, m, st, sec, off, sb + nu, cnt)
    _sn(fold, m, sb, sec, off, sb + nu, cnt)

    s = sec + off[_log2(n)]
    out[0] = 0.0
    for k in range(1, nu):
        aux = s[k - 1] * sb[k]
        out[k] = st[k] + aux
        out[m - k] = aux - st[k]
    acc = 0.0
    j = 0
    while j <= nu - 2:
        acc = acc + x[2 * j + 1] - x[2 * j + 3]
        j += 2
    out[nu] = 2.0 * acc
    cnt.adds += 2 * (nu - 1) + nu
    cnt.muls += (nu - 1) + 1


def _run(kind, double[:, ::1] x, double[::1] sec, Py_ssize_t[::1] off):
    cdef Py_ssize_t rows = x.shape[0]
    cdef Py_ssize_t n = x.shape[1]
    cdef Py_ssize_t width = n // 2 + 1 if kind == 0 else n // 2
    out_arr = np.empty((rows, width))
    cdef double[:, ::1] out = out_arr
    cdef double* work = <double*> malloc(sizeof(double) * (4 * n + 64))
    cdef Counts cnt
    cdef Py_ssize_t r
    cdef const double* sp = &sec[0] if sec.shape[0] else NULL
    if work == NULL:
        raise MemoryError()
    try:
        with nogil:
            for r in range(rows):
                cnt.adds = 0
                cnt.muls = 0
                if kind == 0:
                    _cs(&x[r, 0], n, &out[r, 0], sp, &off[0], work, &cnt)
                else:
                    _sn(&x[r, 0], n, &out[r, 0], sp, &off[0], work, &cnt)
    finally:
        free(work)
    if rows == 0:
        return out_arr, 0, 0
    return out_arr, cnt.adds, cnt.muls


def cs_rows(x, double[::1] sec, Py_ssize_t[::1] off):
    return _run(0, x, sec, off)


def sn_rows(x, double[::1] sec, Py_ssize_t[::1] off):
    return _run(1, x, sec, off)
