"""Independent cohomology route: the reduced bar complex relative to the
semisimple subalgebra spanned by the vertex idempotents.

Chains are built from tensor powers of the radical over that subalgebra, so
only composable corner blocks appear.  Dimensions in degrees 0..2 must agree
with the resolution pipeline; any disagreement is a hard failure upstream.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import Algebra
from .linalg import sparse_rank

SIZE_GUARD = 2_000_000


@dataclass
class BarReport:
    h0: int
    h1: int
    h2: int | None
    cochain_dims: list
    guard_tripped: bool

    @property
    def hh(self):
        return (self.h0, self.h1, self.h2)


class RelativeBarComplex:
    def __init__(self, algebra: Algebra, guard: int = SIZE_GUARD):
        self.algebra = algebra
        self.guard = guard
        A = algebra
        self.rad = list(algebra.radical_indices)
        # splitting table: for each radical basis word w, the pairs (p, q, c)
        # of radical words with coefficient c of w in p*q
        coproduct = {}
        for p in self.rad:
            tp = A.word_target[p]
            for q in self.rad:
                if A.word_source[q] != tp:
                    continue
                for w, c in A.mult_basis(p, q).items():
                    coproduct.setdefault(w, []).append((p, q, c))
        self.coproduct = coproduct

    def chains(self, n: int):
        A = self.algebra
        if n == 0:
            return [()]
        out = [(w,) for w in self.rad]
        for _ in range(n - 1):
            nxt = []
            for t in out:
                tgt = A.word_target[t[-1]]
                for w in self.rad:
                    if A.word_source[w] == tgt:
                        nxt.append(t + (w,))
            out = nxt
        return out

    def cochain_basis(self, n: int):
        """Pairs (tensor chain, target basis index) with matching endpoints."""
        A = self.algebra
        out = []
        if n == 0:
            for i in range(A.quiver.n_vertices):
                out.extend(((), w) for w in A.corner(i, i))
            return out
        for t in self.chains(n):
            s = A.word_source[t[0]]
            g = A.word_target[t[-1]]
            out.extend((t, w) for w in A.corner(s, g))
        return out

    def differential(self, n: int, domain, cod_index):
        """Sparse rows: image of each domain cochain in degree n+1 coordinates."""
        A = self.algebra
        F = A.field
        minus_one = F.neg(F.one)
        rows = []
        for (t, w) in domain:
            row = {}

            def add(key, c):
                idx = cod_index.get(key)
                if idx is None:
                    return
                nc = F.add(row.get(idx, F.zero), c)
                if nc == F.zero:
                    row.pop(idx, None)
                else:
                    row[idx] = nc

            head = w if n == 0 else t[0]
            tail = w if n == 0 else t[-1]
            for r in self.rad:
                if A.word_target[r] == A.word_source[head]:
                    for u, c in A.mult_basis(r, w).items():
                        add(((r,) + t, u), c)
            for i in range(n):
                sign = minus_one if (i + 1) % 2 == 1 else F.one
                for (p, q, c) in self.coproduct.get(t[i], ()):
                    add((t[:i] + (p, q) + t[i + 1 :], w), F.mul(sign, c))
            sign = minus_one if (n + 1) % 2 == 1 else F.one
            for r in self.rad:
                if A.word_source[r] == A.word_target[tail]:
                    for u, c in A.mult_basis(w, r).items():
                        add((t + (r,), u), F.mul(sign, c))
            rows.append(row)
        return rows


def hh_via_bar(algebra: Algebra, n_max: int = 2, guard: int = SIZE_GUARD) -> BarReport:
    """Cohomology dimensions of the relative bar complex in degrees 0..n_max.

    The degree-2 computation needs the degree-3 cochain space; when that
    matrix would exceed the size guard, h2 is reported as None.
    """
    if n_max > 2:
        raise ValueError("bar-complex route computes degrees 0..2 only")
    bar = RelativeBarComplex(algebra, guard)
    F = algebra.field
    c0 = bar.cochain_basis(0)
    c1 = bar.cochain_basis(1)
    idx1 = {b: i for i, b in enumerate(c1)}
    d0 = bar.differential(0, c0, idx1)
    rank0 = sparse_rank(F, d0, len(c1))
    h0 = len(c0) - rank0
    dims = [len(c0), len(c1)]
    if n_max == 0:
        return BarReport(h0, None, None, dims, False)
    c2 = bar.cochain_basis(2)
    dims.append(len(c2))
    idx2 = {b: i for i, b in enumerate(c2)}
    d1 = bar.differential(1, c1, idx2)
    rank1 = sparse_rank(F, d1, len(c2))
    h1 = (len(c1) - rank1) - rank0
    if n_max == 1:
        return BarReport(h0, h1, None, dims, False)
    c3 = bar.cochain_basis(3)
    dims.append(len(c3))
    if len(c2) * len(c3) > guard:
        return BarReport(h0, h1, None, dims, True)
    idx3 = {b: i for i, b in enumerate(c3)}
    d2 = bar.differential(2, c2, idx3)
    rank2 = sparse_rank(F, d2, len(c3))
    h2 = (len(c2) - rank2) - rank1
    return BarReport(h0, h1, h2, dims, False)


def verify_complex_property(algebra: Algebra) -> bool:
    """delta(n+1) o delta(n) = 0 for the degrees the oracle uses."""
    bar = RelativeBarComplex(algebra)
    F = algebra.field
    c0 = bar.cochain_basis(0)
    c1 = bar.cochain_basis(1)
    c2 = bar.cochain_basis(2)
    idx1 = {b: i for i, b in enumerate(c1)}
    idx2 = {b: i for i, b in enumerate(c2)}
    d0 = bar.differential(0, c0, idx1)
    d1 = bar.differential(1, c1, idx2)
    for row in d0:
        acc = {}
        for j, c in row.items():
            for k, c2_ in d1[j].items():
                nc = F.add(acc.get(k, F.zero), F.mul(c, c2_))
                if nc == F.zero:
                    acc.pop(k, None)
                else:
                    acc[k] = nc
        if acc:
            return False
    return True
