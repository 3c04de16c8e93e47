# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel: wrapped l-infinity neighbor pairs within a cutoff.

Sweep over points pre-sorted by coordinate 0 (the wrapper sorts); the
remaining coordinates are checked with an early exit.  The arithmetic matches
the numpy fallback operation for operation so distances are bit-identical.
"""

from cpython.bytes cimport PyBytes_FromStringAndSize
from libc.math cimport fabs
from libc.stdlib cimport free, malloc, realloc
from libc.string cimport memcpy

cdef double PAD = 1e-9


def sweep_pairs(double[:, ::1] pts_sorted, long long[::1] order,
                double box, double cutoff=1.0):
    """Return (i_bytes, j_bytes, dist_bytes, count) over pairs with wrapped
    l-inf distance <= cutoff; indices are original point ids with i < j."""
    cdef Py_ssize_t n = pts_sorted.shape[0]
    cdef Py_ssize_t d = pts_sorted.shape[1]
    cdef Py_ssize_t cap = 4096, m = 0
    cdef long long *ibuf = <long long *> malloc(cap * sizeof(long long))
    cdef long long *jbuf = <long long *> malloc(cap * sizeof(long long))
    cdef double *dbuf = <double *> malloc(cap * sizeof(double))
    cdef long long *tmp_l
    cdef double *tmp_d
    cdef Py_ssize_t p, q, c
    cdef long long a, b_
    cdef double window = cutoff + PAD
    cdef double sp, ad, wd, w, dmax
    cdef bint ok

    if ibuf == NULL or jbuf == NULL or dbuf == NULL:
        free(ibuf); free(jbuf); free(dbuf)
        raise MemoryError()

    try:
        for p in range(n):
            sp = pts_sorted[p, 0]
            # direct candidates: q > p in sorted order within the window
            for q in range(p + 1, n):
                if pts_sorted[q, 0] - sp > window:
                    break
                dmax = 0.0
                ok = True
                for c in range(d):
                    ad = fabs(pts_sorted[p, c] - pts_sorted[q, c])
                    wd = box - ad
                    w = ad if ad < wd else wd
                    if w > cutoff:
                        ok = False
                        break
                    if w > dmax:
                        dmax = w
                if not ok:
                    continue
                if m == cap:
                    cap *= 2
                    tmp_l = <long long *> realloc(ibuf, cap * sizeof(long long))
                    if tmp_l == NULL:
                        raise MemoryError()
                    ibuf = tmp_l
                    tmp_l = <long long *> realloc(jbuf, cap * sizeof(long long))
                    if tmp_l == NULL:
                        raise MemoryError()
                    jbuf = tmp_l
                    tmp_d = <double *> realloc(dbuf, cap * sizeof(double))
                    if tmp_d == NULL:
                        raise MemoryError()
                    dbuf = tmp_d
                a = order[p]
                b_ = order[q]
                if a < b_:
                    ibuf[m] = a; jbuf[m] = b_
                else:
                    ibuf[m] = b_; jbuf[m] = a
                dbuf[m] = dmax
                m += 1
            # wrap candidates: left-end points whose shifted copy falls in the window
            for q in range(n):
                if pts_sorted[q, 0] + box - sp > window:
                    break
                dmax = 0.0
                ok = True
                for c in range(d):
                    ad = fabs(pts_sorted[p, c] - pts_sorted[q, c])
                    wd = box - ad
                    w = ad if ad < wd else wd
                    if w > cutoff:
                        ok = False
                        break
                    if w > dmax:
                        dmax = w
                if not ok:
                    continue
                if m == cap:
                    cap *= 2
                    tmp_l = <long long *> realloc(ibuf, cap * sizeof(long long))
                    if tmp_l == NULL:
                        raise MemoryError()
                    ibuf = tmp_l
                    tmp_l = <long long *> realloc(jbuf, cap * sizeof(long long))
                    if tmp_l == NULL:
                        raise MemoryError()
                    jbuf = tmp_l
                    tmp_d = <double *> realloc(dbuf, cap * sizeof(double))
                    if tmp_d == NULL:
                        raise MemoryError()
                    dbuf = tmp_d
                a = order[p]
                b_ = order[q]
                if a < b_:
                    ibuf[m] = a; jbuf[m] = b_
                else:
                    ibuf[m] = b_; jbuf[m] = a
                dbuf[m] = dmax
                m += 1
        i_bytes = PyBytes_FromStringAndSize(<char *> ibuf, m * sizeof(long long))
        j_bytes = PyBytes_FromStringAndSize(<char *> jbuf, m * sizeof(long long))
        d_bytes = PyBytes_FromStringAndSize(<char *> dbuf, m * sizeof(double))
        return i_bytes, j_bytes, d_bytes, m
    finally:
        free(ibuf)
        free(jbuf)
        free(dbuf)
