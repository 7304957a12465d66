# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled elimination kernels (see ``_pykernels`` for the reference code).

Entries stay Python integers (arbitrary precision); the gain comes from
C-level loop control and list indexing.
"""


def det_int(rows):
    cdef Py_ssize_t n = len(rows)
    cdef Py_ssize_t i, j, k, p
    cdef list m, rk, ri
    cdef object piv, prev, a
    cdef int sign = 1
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            p = k + 1
            while p < n and m[p][k] == 0:
                p += 1
            if p == n:
                return 0
            m[k], m[p] = m[p], m[k]
            sign = -sign
        rk = <list>m[k]
        piv = rk[k]
        for i in range(k + 1, n):
            ri = <list>m[i]
            a = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * piv - a * rk[j]) // prev
        prev = piv
    return sign * m[n - 1][n - 1]


def det_gauss(re_rows, im_rows):
    cdef Py_ssize_t n = len(re_rows)
    cdef Py_ssize_t i, j, k, p
    cdef list mr, mi, rkr, rki, rir, rii
    cdef object pr, pi, vr, vi, ar, ai, xr, xi, nrm
    cdef int sign = 1
    if n == 0:
        return 1, 0
    mr = [list(r) for r in re_rows]
    mi = [list(r) for r in im_rows]
    pr, pi = 1, 0
    for k in range(n - 1):
        if mr[k][k] == 0 and mi[k][k] == 0:
            p = k + 1
            while p < n and mr[p][k] == 0 and mi[p][k] == 0:
                p += 1
            if p == n:
                return 0, 0
            mr[k], mr[p] = mr[p], mr[k]
            mi[k], mi[p] = mi[p], mi[k]
            sign = -sign
        rkr = <list>mr[k]
        rki = <list>mi[k]
        vr = rkr[k]
        vi = rki[k]
        nrm = pr * pr + pi * pi
        for i in range(k + 1, n):
            rir = <list>mr[i]
            rii = <list>mi[i]
            ar = rir[k]
            ai = rii[k]
            for j in range(k + 1, n):
                xr = rir[j] * vr - rii[j] * vi - (ar * rkr[j] - ai * rki[j])
                xi = rir[j] * vi + rii[j] * vr - (ar * rki[j] + ai * rkr[j])
                rir[j] = (xr * pr + xi * pi) // nrm
                rii[j] = (xi * pr - xr * pi) // nrm
        pr, pi = vr, vi
    return sign * mr[n - 1][n - 1], sign * mi[n - 1][n - 1]


def rref_int(rows, Py_ssize_t ncols):
    cdef list m = [list(row) for row in rows]
    cdef Py_ssize_t nrows = len(m)
    cdef Py_ssize_t r = 0, c, p, i, j
    cdef list pivots = []
    cdef list rr, ri
    cdef object prev = 1, piv, a
    for c in range(ncols):
        if r == nrows:
            break
        p = r
        while p < nrows and m[p][c] == 0:
            p += 1
        if p == nrows:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
        rr = <list>m[r]
        piv = rr[c]
        for i in range(nrows):
            if i == r:
                continue
            ri = <list>m[i]
            a = ri[c]
            for j in range(ncols):
                ri[j] = (ri[j] * piv - a * rr[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    return m, pivots, prev
