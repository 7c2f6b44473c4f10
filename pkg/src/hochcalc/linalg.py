"""Dense exact row reduction, rank, kernel and subspace calculus over a Field.

Deterministic pivoting (first nonzero scanning rows top-down, columns left to
right) makes every reduced basis reproducible.  Prime fields go through a flat
int64 kernel — the compiled extension when built, otherwise the numpy
fallback; the generic path works over any Field via sparse row dictionaries
and produces the same (canonical) reduced echelon form.
"""

from __future__ import annotations

import numpy as np

from .fields import Field, PrimeField

try:
    from ._rowreduce_c import rref_modp

    KERNEL_BACKEND = "compiled"
except ImportError:  # extension not built; numpy fallback
    from ._rowreduce_np import rref_modp

    KERNEL_BACKEND = "numpy"


class Matrix:
    """Row-major dense matrix with entries in a fixed field."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: Field, rows: int, cols: int, entries=None):
        self.field = field
        self.rows = rows
        self.cols = cols
        if entries is None:
            z = field.zero
            self.entries = [[z] * cols for _ in range(rows)]
        else:
            if len(entries) != rows or any(len(r) != cols for r in entries):
                raise ValueError("entry grid does not match matrix shape")
            self.entries = entries

    @classmethod
    def from_rows(cls, field: Field, entries) -> "Matrix":
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        return cls(field, rows, cols, [list(r) for r in entries])

    @classmethod
    def from_sparse_rows(cls, field: Field, sparse_rows, cols: int) -> "Matrix":
        z = field.zero
        entries = []
        for r in sparse_rows:
            row = [z] * cols
            for c, v in r.items():
                row[c] = v
            entries.append(row)
        return cls(field, len(sparse_rows), cols, entries)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        m = cls(field, n, n)
        for i in range(n):
            m.entries[i][i] = field.one
        return m

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def transpose(self) -> "Matrix":
        e = [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)]
        return Matrix(self.field, self.cols, self.rows, e)

    def sparse_rows(self):
        z = self.field.zero
        return [{j: v for j, v in enumerate(row) if v != z} for row in self.entries]

    def mul_vector(self, vec):
        """Matrix times column vector, as a list."""
        F = self.field
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        out = []
        for row in self.entries:
            acc = F.zero
            for a, x in zip(row, vec):
                if a != F.zero and x != F.zero:
                    acc = F.add(acc, F.mul(a, x))
            out.append(acc)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field.spec == other.field.spec
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols} over {self.field.spec.describe()})"


class Subspace:
    """Row space given by a reduced-row-echelon basis with pivot columns."""

    __slots__ = ("ambient", "basis", "pivots")

    def __init__(self, ambient: int, basis: Matrix, pivots):
        self.ambient = ambient
        self.basis = basis
        self.pivots = list(pivots)

    @property
    def dim(self) -> int:
        return self.basis.rows

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient})"


# ---------------------------------------------------------------------------
# elimination cores


def _rref_sparse(field: Field, sparse_rows, cols):
    """Generic elimination on row dicts; returns (reduced rows, pivots)."""
    z = field.zero
    work = [dict(r) for r in sparse_rows if r]
    done = []
    pivots = []
    for col in range(cols):
        piv_idx = None
        for idx, row in enumerate(work):
            if row.get(col, z) != z:
                piv_idx = idx
                break
        if piv_idx is None:
            continue
        row = work.pop(piv_idx)
        c = row[col]
        if c != field.one:
            inv = field.inv(c)
            row = {k: field.mul(v, inv) for k, v in row.items()}
        for other in work + done:
            f = other.get(col, z)
            if f != z:
                for k, v in row.items():
                    nv = field.sub(other.get(k, z), field.mul(f, v))
                    if nv == z:
                        other.pop(k, None)
                    else:
                        other[k] = nv
        done.append(row)
        pivots.append(col)
        work = [r for r in work if r]
        if not work:
            break
    return done, pivots


def _rref_modp_dense(field: PrimeField, m: Matrix):
    a = np.array(
        [[int(v) % field.p for v in row] for row in m.entries], dtype=np.int64
    ).reshape(m.rows, m.cols)
    a = np.ascontiguousarray(a)
    pivots = rref_modp(a, field.p)
    nonzero = len(pivots)
    rows = [[int(v) for v in a[i]] for i in range(nonzero)]
    return rows, list(pivots)


def rref(m: Matrix):
    """Reduced row echelon form and rank."""
    F = m.field
    if isinstance(F, PrimeField) and m.rows and m.cols:
        rows, pivots = _rref_modp_dense(F, m)
        reduced = Matrix(F, len(rows), m.cols, rows)
        return reduced, len(pivots)
    done, pivots = _rref_sparse(F, m.sparse_rows(), m.cols)
    reduced = Matrix.from_sparse_rows(F, done, m.cols)
    return reduced, len(pivots)


def rank(m: Matrix) -> int:
    return rref(m)[1]


def _pivots_of(reduced: Matrix):
    z = reduced.field.zero
    pivots = []
    for row in reduced.entries:
        for j, v in enumerate(row):
            if v != z:
                pivots.append(j)
                break
    return pivots


def kernel_basis(m: Matrix) -> Subspace:
    """Right null space {v : m v = 0}, echelonized over the free columns."""
    F = m.field
    reduced, _ = rref(m)
    pivots = _pivots_of(reduced)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    z = F.zero
    vectors = []
    for fc in free:
        vec = {fc: F.one}
        for row, pc in zip(reduced.entries, pivots):
            v = row[fc]
            if v != z:
                vec[pc] = F.neg(v)
        vectors.append(vec)
    # columns of the kernel vectors pivot exactly at the free columns, in order
    basis = Matrix.from_sparse_rows(F, vectors, m.cols)
    return Subspace(m.cols, basis, free)


def membership(s: Subspace, vec) -> bool:
    """True iff vec lies in the row space of the subspace basis."""
    if len(vec) != s.ambient:
        raise ValueError("vector length does not match ambient dimension")
    F = s.basis.field
    z = F.zero
    residue = {i: v for i, v in enumerate(vec) if v != z}
    for row, pc in zip(s.basis.entries, s.pivots):
        c = residue.get(pc, z)
        if c != z:
            for j, v in enumerate(row):
                if v != z:
                    nv = F.sub(residue.get(j, z), F.mul(c, v))
                    if nv == z:
                        residue.pop(j, None)
                    else:
                        residue[j] = nv
    return not residue


def reduce_against(s: Subspace, sparse_vec: dict) -> dict:
    """Residue of a sparse vector after reduction against the echelon basis."""
    F = s.basis.field
    z = F.zero
    residue = dict(sparse_vec)
    for row, pc in zip(s.basis.entries, s.pivots):
        c = residue.get(pc, z)
        if c != z:
            for j, v in enumerate(row):
                if v != z:
                    nv = F.sub(residue.get(j, z), F.mul(c, v))
                    if nv == z:
                        residue.pop(j, None)
                    else:
                        residue[j] = nv
    return residue


class SpanBuilder:
    """Incremental echelon span over sparse vectors; tracks rank cheaply."""

    def __init__(self, field: Field):
        self.field = field
        self.rows = {}  # pivot column -> reduced row dict

    def add(self, vec: dict) -> bool:
        """Reduce vec against the span; absorb if independent. True if rank grew."""
        F = self.field
        z = F.zero
        v = {k: c for k, c in vec.items() if c != z}
        while v:
            piv = min(v)
            row = self.rows.get(piv)
            if row is None:
                c = v[piv]
                if c != F.one:
                    inv = F.inv(c)
                    v = {k: F.mul(x, inv) for k, x in v.items()}
                self.rows[piv] = v
                return True
            f = v[piv]
            for k, x in row.items():
                nv = F.sub(v.get(k, z), F.mul(f, x))
                if nv == z:
                    v.pop(k, None)
                else:
                    v[k] = nv
        return False

    def contains(self, vec: dict) -> bool:
        F = self.field
        z = F.zero
        v = {k: c for k, c in vec.items() if c != z}
        while v:
            piv = min(v)
            row = self.rows.get(piv)
            if row is None:
                return False
            f = v[piv]
            for k, x in row.items():
                nv = F.sub(v.get(k, z), F.mul(f, x))
                if nv == z:
                    v.pop(k, None)
                else:
                    v[k] = nv
        return True

    @property
    def dim(self) -> int:
        return len(self.rows)


def sparse_rank(field: Field, sparse_rows, cols: int) -> int:
    """Rank of a sparse row collection without materializing a dense grid."""
    if isinstance(field, PrimeField) and sparse_rows:
        a = np.zeros((len(sparse_rows), cols), dtype=np.int64)
        for i, r in enumerate(sparse_rows):
            for j, v in r.items():
                a[i, j] = int(v) % field.p
        return len(rref_modp(np.ascontiguousarray(a), field.p))
    return len(_rref_sparse(field, sparse_rows, cols)[0])


def sparse_kernel_dim(field: Field, sparse_rows, cols: int) -> int:
    return cols - sparse_rank(field, sparse_rows, cols)
