"""Bimodule resolution pipeline: free bimodules, the first differentials, the
cochain complexes they induce, and low-degree cohomology dimensions.

Matrices follow the column-vector convention: a map f: V -> W is stored with
rows indexed by W and columns by V, so kernel_basis gives ker f directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .engine import Algebra, BuildError
from .linalg import Matrix, SpanBuilder, Subspace, kernel_basis, reduce_against
from .presentation import bind_relation


class ResolutionMismatchError(BuildError):
    """The resolution relations fail to present the second syzygy."""


class FreeBimodule:
    """Direct sum of projective bimodules A e_i (x) e_j A.

    Basis elements are triples (summand, u, v) of a summand index and two
    algebra basis indices with target(u) = i and source(v) = j.
    """

    def __init__(self, algebra: Algebra, summands):
        self.algebra = algebra
        self.summands = list(summands)
        self.basis = []
        pos = {}
        for s, (i, j) in enumerate(self.summands):
            us = [u for u in range(algebra.dim) if algebra.word_target[u] == i]
            vs = [v for v in range(algebra.dim) if algebra.word_source[v] == j]
            for u in us:
                for v in vs:
                    pos[(s, u, v)] = len(self.basis)
                    self.basis.append((s, u, v))
        self.pos = pos
        self.dim = len(self.basis)

    def generator(self, s: int) -> dict:
        """e_i (x) e_j in summand s, as a sparse vector."""
        i, j = self.summands[s]
        A = self.algebra
        key = (s, A.vertex_unit(i), A.vertex_unit(j))
        return {self.pos[key]: A.field.one}

    def act_left_word(self, b: int, vec: dict) -> dict:
        A = self.algebra
        F = A.field
        out = {}
        for p, c in vec.items():
            s, u, v = self.basis[p]
            for m, coeff in A.mult_basis(b, u).items():
                q = self.pos.get((s, m, v))
                if q is None:
                    continue
                nc = F.add(out.get(q, F.zero), F.mul(c, coeff))
                if nc == F.zero:
                    out.pop(q, None)
                else:
                    out[q] = nc
        return out

    def act_right_word(self, vec: dict, b: int) -> dict:
        A = self.algebra
        F = A.field
        out = {}
        for p, c in vec.items():
            s, u, v = self.basis[p]
            for m, coeff in A.mult_basis(v, b).items():
                q = self.pos.get((s, u, m))
                if q is None:
                    continue
                nc = F.add(out.get(q, F.zero), F.mul(c, coeff))
                if nc == F.zero:
                    out.pop(q, None)
                else:
                    out[q] = nc
        return out

    def outer_pair(self, p: int):
        s, u, v = self.basis[p]
        A = self.algebra
        return (A.word_source[u], A.word_target[v])


class FreeBimoduleElement:
    __slots__ = ("module", "coeffs")

    def __init__(self, module: FreeBimodule, coeffs: dict):
        z = module.algebra.field.zero
        self.module = module
        self.coeffs = {p: c for p, c in coeffs.items() if c != z}

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return (
            isinstance(other, FreeBimoduleElement)
            and self.module is other.module
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return f"FreeBimoduleElement({len(self.coeffs)} terms of {self.module.dim})"


def _sparse_columns_to_matrix(field, columns, n_rows) -> Matrix:
    """columns[j] = sparse image vector of domain basis j; rows = codomain."""
    rows = [dict() for _ in range(n_rows)]
    for j, col in enumerate(columns):
        for i, c in col.items():
            rows[i][j] = c
    return Matrix.from_sparse_rows(field, rows, len(columns))


class ResolutionData:
    """P0, P1, P2 and the differentials for one built algebra."""

    def __init__(self, algebra: Algebra):
        self.algebra = algebra
        A = algebra
        q = algebra.quiver
        self.p0 = FreeBimodule(A, [(i, i) for i in range(q.n_vertices)])
        self.p1 = FreeBimodule(
            A, [(q.source[a], q.target[a]) for a in range(q.n_arrows)]
        )
        rels = algebra.presentation.resolution_or_default()
        self.resolution_relations = rels
        self.bound_relations = [
            bind_relation(r, A.field, A.params) for r in rels
        ]
        self.p2 = FreeBimodule(A, [r.source_pair for r in rels])
        self._d1 = None
        self._d2 = None
        self._ker_d1 = None
        self._ker_d2 = None
        self._rhos = None

    # -- rho and the differentials -------------------------------------------

    def rho(self, lincomb: dict) -> FreeBimoduleElement:
        """Sum over splits: prefix (x) suffix in the summand of the split arrow."""
        A = self.algebra
        F = A.field
        q = A.quiver
        out = {}
        for path, c in lincomb.items():
            m = len(path)
            if m == 0:
                raise BuildError("rho needs paths of length >= 1")
            for a, b in zip(path, path[1:]):
                if q.target[a] != q.source[b]:
                    raise BuildError("rho applied to a non-composable path")
            for k in range(m):
                prefix = (
                    A.rewriting.word_normal_form(path[:k])
                    if k > 0
                    else {("v", q.source[path[0]]): F.one}
                )
                suffix = (
                    A.rewriting.word_normal_form(path[k + 1 :])
                    if k < m - 1
                    else {("v", q.target[path[-1]]): F.one}
                )
                for wu, cu in prefix.items():
                    u = A.index[wu]
                    for wv, cv in suffix.items():
                        v = A.index[wv]
                        p = self.p1.pos.get((path[k], u, v))
                        if p is None:
                            continue
                        cc = F.mul(c, F.mul(cu, cv))
                        nc = F.add(out.get(p, F.zero), cc)
                        if nc == F.zero:
                            out.pop(p, None)
                        else:
                            out[p] = nc
        return FreeBimoduleElement(self.p1, out)

    def rhos(self):
        if self._rhos is None:
            self._rhos = [self.rho(r) for r in self.bound_relations]
        return self._rhos

    def d1_matrix(self) -> Matrix:
        if self._d1 is not None:
            return self._d1
        A = self.algebra
        F = A.field
        q = A.quiver
        cols = []
        for (a, u, v) in self.p1.basis:
            col = {}
            ai = A.index[(a,)]
            for m, c in A.mult_basis(u, ai).items():
                p = self.p0.pos.get((q.target[a], m, v))
                if p is not None:
                    col[p] = F.add(col.get(p, F.zero), c)
            for m, c in A.mult_basis(ai, v).items():
                p = self.p0.pos.get((q.source[a], u, m))
                if p is not None:
                    nc = F.sub(col.get(p, F.zero), c)
                    if nc == F.zero:
                        col.pop(p, None)
                    else:
                        col[p] = nc
            cols.append(col)
        self._d1 = _sparse_columns_to_matrix(F, cols, self.p0.dim)
        return self._d1

    def d2_matrix(self) -> Matrix:
        if self._d2 is not None:
            return self._d2
        A = self.algebra
        F = A.field
        images = self.rhos()
        cols = []
        for (s, u, v) in self.p2.basis:
            vec = self.p1.act_left_word(u, images[s].coeffs)
            vec = self.p1.act_right_word(vec, v)
            cols.append(vec)
        self._d2 = _sparse_columns_to_matrix(F, cols, self.p1.dim)
        return self._d2

    def kernel_d1(self) -> Subspace:
        if self._ker_d1 is None:
            self._ker_d1 = kernel_basis(self.d1_matrix())
        return self._ker_d1

    def kernel_d2(self) -> Subspace:
        if self._ker_d2 is None:
            self._ker_d2 = kernel_basis(self.d2_matrix())
        return self._ker_d2

    def check_exactness(self):
        """im d2 must equal ker d1 for the cochain identifications to hold."""
        rank_d2 = self.p2.dim - self.kernel_d2().dim
        ker_d1 = self.kernel_d1().dim
        if rank_d2 != ker_d1:
            raise ResolutionMismatchError(
                "resolution relations do not present the second syzygy: "
                f"rank d2 = {rank_d2} but dim ker d1 = {ker_d1}"
            )

    # -- cochain level ---------------------------------------------------------

    def diag_corner_coords(self):
        A = self.algebra
        coords = []
        for i in range(A.quiver.n_vertices):
            coords.extend((i, b) for b in A.corner(i, i))
        return coords

    def arrow_corner_coords(self):
        A = self.algebra
        q = A.quiver
        coords = []
        for a in range(q.n_arrows):
            coords.extend((a, b) for b in A.corner(q.source[a], q.target[a]))
        return coords

    def relation_corner_coords(self):
        A = self.algebra
        coords = []
        for s, (i, j) in enumerate(self.p2.summands):
            coords.extend((s, b) for b in A.corner(i, j))
        return coords

    def delta0_matrix(self) -> Matrix:
        """(z_i)_i -> (alpha z_t - z_s alpha)_alpha on corner coordinates."""
        A = self.algebra
        F = A.field
        q = A.quiver
        dom = self.diag_corner_coords()
        cod = self.arrow_corner_coords()
        cod_pos = {c: k for k, c in enumerate(cod)}
        cols = []
        for (i, b) in dom:
            col = {}
            for a in range(q.n_arrows):
                ai = A.index[(a,)]
                if q.target[a] == i:
                    for m, c in A.mult_basis(ai, b).items():
                        p = cod_pos.get((a, m))
                        if p is not None:
                            col[p] = F.add(col.get(p, F.zero), c)
                if q.source[a] == i:
                    for m, c in A.mult_basis(b, ai).items():
                        p = cod_pos.get((a, m))
                        if p is not None:
                            nc = F.sub(col.get(p, F.zero), c)
                            if nc == F.zero:
                                col.pop(p, None)
                            else:
                                col[p] = nc
            cols.append(col)
        return _sparse_columns_to_matrix(F, cols, len(cod))

    def delta1_matrix(self) -> Matrix:
        """f -> (sum of prefix . f(arrow) . suffix over the splits of each
        resolution relation), on corner coordinates."""
        A = self.algebra
        F = A.field
        dom = self.arrow_corner_coords()
        cod = self.relation_corner_coords()
        cod_pos = {c: k for k, c in enumerate(cod)}
        images = self.rhos()
        cols = []
        for (a, b) in dom:
            col = {}
            for s, elem in enumerate(images):
                for p, c in elem.coeffs.items():
                    (arrow, u, v) = self.p1.basis[p]
                    if arrow != a:
                        continue
                    for m1, c1 in A.mult_basis(u, b).items():
                        for m2, c2 in A.mult_basis(m1, v).items():
                            k = cod_pos.get((s, m2))
                            if k is None:
                                continue
                            cc = F.mul(c, F.mul(c1, c2))
                            nc = F.add(col.get(k, F.zero), cc)
                            if nc == F.zero:
                                col.pop(k, None)
                            else:
                                col[k] = nc
            cols.append(col)
        return _sparse_columns_to_matrix(F, cols, len(cod))

    def hom_omega2_dim(self) -> int:
        """Dimension of the cochains on P2 vanishing on ker d2."""
        A = self.algebra
        F = A.field
        cod = self.relation_corner_coords()
        cod_pos = {c: k for k, c in enumerate(cod)}
        kernel = self.kernel_d2()
        z = F.zero
        rows = []
        for kvec in kernel.basis.entries:
            equations = {}
            for p, c in enumerate(kvec):
                if c == z:
                    continue
                (s, u, v) = self.p2.basis[p]
                i, j = self.p2.summands[s]
                for b in A.corner(i, j):
                    unknown = cod_pos[(s, b)]
                    for m1, c1 in A.mult_basis(u, b).items():
                        for m2, c2 in A.mult_basis(m1, v).items():
                            eq = equations.setdefault(m2, {})
                            cc = F.mul(c, F.mul(c1, c2))
                            nc = F.add(eq.get(unknown, z), cc)
                            if nc == z:
                                eq.pop(unknown, None)
                            else:
                                eq[unknown] = nc
            rows.extend(eq for eq in equations.values() if eq)
        mat = Matrix.from_sparse_rows(F, rows, len(cod))
        return kernel_basis(mat).dim


def resolution_data(algebra: Algebra) -> ResolutionData:
    data = getattr(algebra, "_resolution_data", None)
    if data is None:
        data = ResolutionData(algebra)
        algebra._resolution_data = data
    return data


# -- public operations --------------------------------------------------------


def rho(algebra: Algebra, lincomb: dict) -> FreeBimoduleElement:
    return resolution_data(algebra).rho(lincomb)


def d1_matrix(algebra: Algebra) -> Matrix:
    return resolution_data(algebra).d1_matrix()


def d2_matrix(algebra: Algebra) -> Matrix:
    return resolution_data(algebra).d2_matrix()


def delta0(algebra: Algebra) -> Matrix:
    return resolution_data(algebra).delta0_matrix()


def delta1(algebra: Algebra) -> Matrix:
    return resolution_data(algebra).delta1_matrix()


def hom_omega2_dim(algebra: Algebra) -> int:
    return resolution_data(algebra).hom_omega2_dim()


@dataclass
class HochschildReport:
    h0: int
    h1: int
    h2: int
    hom_p0: int
    hom_p1: int
    hom_p2: int
    ker_delta1: int
    hom_omega2: int
    dim_p0: int
    dim_p1: int
    dim_p2: int
    ker_d1: int
    ker_d2: int

    @property
    def hh(self):
        return (self.h0, self.h1, self.h2)


def hochschild_report(algebra: Algebra) -> HochschildReport:
    data = resolution_data(algebra)
    data.check_exactness()
    hom_p0 = len(data.diag_corner_coords())
    hom_p1 = len(data.arrow_corner_coords())
    hom_p2 = len(data.relation_corner_coords())
    h0 = kernel_basis(data.delta0_matrix()).dim
    ker_delta1 = kernel_basis(data.delta1_matrix()).dim
    hom_om2 = data.hom_omega2_dim()
    h1 = h0 + ker_delta1 - hom_p0
    h2 = ker_delta1 + hom_om2 - hom_p1
    return HochschildReport(
        h0=h0,
        h1=h1,
        h2=h2,
        hom_p0=hom_p0,
        hom_p1=hom_p1,
        hom_p2=hom_p2,
        ker_delta1=ker_delta1,
        hom_omega2=hom_om2,
        dim_p0=data.p0.dim,
        dim_p1=data.p1.dim,
        dim_p2=data.p2.dim,
        ker_d1=data.kernel_d1().dim,
        ker_d2=data.kernel_d2().dim,
    )


def hh_dims(algebra: Algebra):
    return hochschild_report(algebra).hh


# -- third syzygy generator checks ---------------------------------------------


@dataclass
class Omega3Report:
    in_kernel: list
    closure_dim: int
    kernel_dim: int

    @property
    def complete(self) -> bool:
        return all(self.in_kernel) and self.closure_dim == self.kernel_dim


def check_omega3_generators(algebra: Algebra, generators) -> Omega3Report:
    """Each generator must die under d2, and their bimodule closure must span
    the whole kernel of d2."""
    data = resolution_data(algebra)
    F = algebra.field
    d2 = data.d2_matrix()
    cols = d2.sparse_rows()  # row dicts of the matrix; we need columns
    # image of an element: sum over positions of the matrix column
    col_cache = {}

    def image(vec):
        out = {}
        for p, c in vec.items():
            col = col_cache.get(p)
            if col is None:
                col = {i: row[p] for i, row in enumerate(cols) if p in row}
                col_cache[p] = col
            for i, m in col.items():
                nc = F.add(out.get(i, F.zero), F.mul(c, m))
                if nc == F.zero:
                    out.pop(i, None)
                else:
                    out[i] = nc
        return out

    in_kernel = []
    for g in generators:
        if g.module is not data.p2:
            raise BuildError("generator lives in a different free bimodule")
        in_kernel.append(not image(g.coeffs))

    span = SpanBuilder(F)
    for g in generators:
        for u in range(algebra.dim):
            left = data.p2.act_left_word(u, g.coeffs)
            if not left:
                continue
            for v in range(algebra.dim):
                vec = data.p2.act_right_word(left, v)
                if vec:
                    span.add(vec)
    return Omega3Report(in_kernel, span.dim, data.kernel_d2().dim)


# -- bimodule tops and resolution extension -------------------------------------


def _subspace_rows(sub: Subspace, field):
    z = field.zero
    return [
        {j: v for j, v in enumerate(row) if v != z} for row in sub.basis.entries
    ]


def bimodule_top(algebra: Algebra, module: FreeBimodule, sub: Subspace) -> dict:
    """Generator multiplicities of a sub-bimodule: dims of S/(rad.S + S.rad)
    per outer vertex pair.  Raises if S is not closed under the actions."""
    mult, _ = _top_with_lifts(algebra, module, sub)
    return mult


def _top_with_lifts(algebra: Algebra, module: FreeBimodule, sub: Subspace):
    F = algebra.field
    rows = _subspace_rows(sub, F)
    arrows = [algebra.index[(a,)] for a in range(algebra.quiver.n_arrows)]
    by_pair_S = {}
    for r in rows:
        pairs = {module.outer_pair(p) for p in r}
        if len(pairs) != 1:
            raise BuildError("subspace basis row mixes outer vertex pairs")
        by_pair_S.setdefault(pairs.pop(), []).append(r)
    by_pair_T = {}
    for r in rows:
        for ai in arrows:
            for vec in (module.act_left_word(ai, r), module.act_right_word(r, ai)):
                if not vec:
                    continue
                if reduce_against(sub, vec):
                    raise BuildError("subspace is not closed under the bimodule action")
                pairs = {module.outer_pair(p) for p in vec}
                by_pair_T.setdefault(pairs.pop(), []).append(vec)
    multiplicities = {}
    lifts = {}
    for pair in sorted(by_pair_S):
        span = SpanBuilder(F)
        for vec in by_pair_T.get(pair, ()):
            span.add(dict(vec))
        rad_dim = span.dim
        chosen = []
        for r in by_pair_S[pair]:
            if span.add(dict(r)):
                chosen.append(r)
        m = len(chosen)
        if m:
            multiplicities[pair] = m
            lifts[pair] = chosen
    return multiplicities, lifts


MAX_RESOLUTION_TERMS = 6
MATRIX_ENTRY_GUARD = 8_000_000


@dataclass
class DegreeRecord:
    degree: int
    dim_p: int
    dim_omega: int
    top: dict


@dataclass
class ResolutionScan:
    records: list
    complete: bool
    note: str = ""


def extend_resolution(algebra: Algebra, n_terms: int) -> ResolutionScan:
    """Iterate kernel -> top -> cover up to the requested degree.

    Degree n records the free cover P_n of the n-th syzygy and its generator
    multiplicities; lifts are chosen in echelon order, so the scan is
    deterministic.
    """
    if n_terms > MAX_RESOLUTION_TERMS:
        raise ValueError(f"resolution scan capped at {MAX_RESOLUTION_TERMS} terms")
    A = algebra
    F = A.field
    q = A.quiver
    records = []

    # degree 0: P0 covers A itself
    p0 = FreeBimodule(A, [(i, i) for i in range(q.n_vertices)])
    records.append(
        DegreeRecord(0, p0.dim, A.dim, {(i, i): 1 for i in range(q.n_vertices)})
    )
    # d0: u (x)_i v -> u v
    cols = []
    for (s, u, v) in p0.basis:
        cols.append(dict(A.mult_basis(u, v)))
    d0 = _sparse_columns_to_matrix(F, cols, A.dim)
    current = kernel_basis(d0)
    module = p0

    for n in range(1, n_terms + 1):
        if current.dim == 0:
            records.append(DegreeRecord(n, 0, 0, {}))
            return ResolutionScan(records, True, f"resolution terminates at degree {n}")
        top, lifts = _top_with_lifts(A, module, current)
        summands = []
        gens = []
        for pair in sorted(top):
            for g in lifts[pair]:
                summands.append(pair)
                gens.append(g)
        nxt = FreeBimodule(A, summands)
        if nxt.dim * module.dim > MATRIX_ENTRY_GUARD:
            return ResolutionScan(
                records,
                False,
                f"memory guard tripped at degree {n}: {nxt.dim} x {module.dim}",
            )
        cols = []
        for (s, u, v) in nxt.basis:
            vec = module.act_left_word(u, gens[s])
            vec = module.act_right_word(vec, v)
            cols.append(vec)
        dn = _sparse_columns_to_matrix(F, cols, module.dim)
        kernel = kernel_basis(dn)
        rank = nxt.dim - kernel.dim
        if rank != current.dim:
            raise BuildError(
                f"minimal cover failed to surject at degree {n}: rank {rank} vs {current.dim}"
            )
        records.append(DegreeRecord(n, nxt.dim, current.dim, dict(top)))
        module = nxt
        current = kernel
    return ResolutionScan(records, True)
