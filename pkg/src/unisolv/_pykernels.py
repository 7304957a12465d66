"""Pure-Python elimination kernels over Python integers and Gaussian integers.

Reference implementation of the routines in ``_ckernels.pyx``; the two must
stay line-for-line equivalent.  Gaussian integers are passed as two parallel
integer matrices (real parts, imaginary parts).
"""


def det_int(rows):
    """Bareiss determinant of a square integer matrix (list of lists)."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for p in range(k + 1, n):
                if m[p][k] != 0:
                    m[k], m[p] = m[p], m[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = m[k][k]
        rk = m[k]
        for i in range(k + 1, n):
            ri = m[i]
            a = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * piv - a * rk[j]) // prev
        prev = piv
    return sign * m[n - 1][n - 1]


def _gdiv(ar, ai, br, bi):
    # exact Gaussian-integer quotient; caller guarantees divisibility
    nrm = br * br + bi * bi
    return (ar * br + ai * bi) // nrm, (ai * br - ar * bi) // nrm


def det_gauss(re_rows, im_rows):
    """Bareiss determinant over the Gaussian integers. Returns (re, im)."""
    n = len(re_rows)
    if n == 0:
        return 1, 0
    mr = [list(r) for r in re_rows]
    mi = [list(r) for r in im_rows]
    sign = 1
    pr, pi = 1, 0
    for k in range(n - 1):
        if mr[k][k] == 0 and mi[k][k] == 0:
            for p in range(k + 1, n):
                if mr[p][k] != 0 or mi[p][k] != 0:
                    mr[k], mr[p] = mr[p], mr[k]
                    mi[k], mi[p] = mi[p], mi[k]
                    sign = -sign
                    break
            else:
                return 0, 0
        vr, vi = mr[k][k], mi[k][k]
        rkr, rki = mr[k], mi[k]
        for i in range(k + 1, n):
            rir, rii = mr[i], mi[i]
            ar, ai = rir[k], rii[k]
            for j in range(k + 1, n):
                xr = rir[j] * vr - rii[j] * vi - (ar * rkr[j] - ai * rki[j])
                xi = rir[j] * vi + rii[j] * vr - (ar * rki[j] + ai * rkr[j])
                rir[j], rii[j] = _gdiv(xr, xi, pr, pi)
        pr, pi = vr, vi
    return sign * mr[n - 1][n - 1], sign * mi[n - 1][n - 1]


def rref_int(rows, ncols):
    """Fraction-free Gauss-Jordan elimination of an integer matrix.

    Pivots are taken as the first nonzero entry in column order.  Returns
    ``(m, pivots, d)`` where every pivot entry of ``m`` equals ``d`` and
    ``m / d`` is the reduced row echelon form.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    pivots = []
    prev = 1
    r = 0
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
        rr = m[r]
        piv = rr[c]
        for i in range(nrows):
            if i == r:
                continue
            ri = m[i]
            a = ri[c]
            for j in range(ncols):
                ri[j] = (ri[j] * piv - a * rr[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    return m, pivots, prev
