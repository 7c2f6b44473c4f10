# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled in-place reduced row echelon form over a prime field."""


def rref_modp(long long[:, ::1] a, long long p):
    """Reduce a (entries already in [0, p)) to RREF in place; returns pivot columns."""
    cdef Py_ssize_t rows = a.shape[0]
    cdef Py_ssize_t cols = a.shape[1]
    cdef Py_ssize_t r = 0, i, j, k, piv
    cdef long long inv, factor, tmp
    pivots = []
    for j in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, j] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for k in range(cols):
                tmp = a[r, k]
                a[r, k] = a[piv, k]
                a[piv, k] = tmp
        inv = _inv_mod(a[r, j], p)
        if inv != 1:
            for k in range(j, cols):
                a[r, k] = (a[r, k] * inv) % p
        for i in range(rows):
            if i != r and a[i, j] != 0:
                factor = a[i, j]
                for k in range(j, cols):
                    a[i, k] = (a[i, k] - factor * a[r, k]) % p
                    if a[i, k] < 0:
                        a[i, k] += p
        pivots.append(j)
        r += 1
    return pivots


cdef long long _inv_mod(long long a, long long p):
    # extended Euclid; a nonzero mod p
    cdef long long t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr != 0:
        q = r / newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t
