"""Numpy fallback for the prime-field row reduction kernel.

Same contract as the compiled version in _rowreduce_c: reduce the int64 array
in place to reduced row echelon form modulo p and return the pivot columns.
"""

import numpy as np


def rref_modp(a: np.ndarray, p: int):
    rows, cols = a.shape
    r = 0
    pivots = []
    for j in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, j])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, j]), p - 2, p)
        if inv != 1:
            a[r, j:] = a[r, j:] * inv % p
        col = a[:, j].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit, j:] = (a[hit, j:] - np.outer(col[hit], a[r, j:])) % p
        pivots.append(j)
        r += 1
    return pivots
