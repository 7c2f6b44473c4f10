import pytest

from conftest import built, report
from hochcalc.catalog import omega3_generator_elements
from hochcalc.engine import build, parse_element
from hochcalc.fields import field_make, rationals
from hochcalc.hochschild import (
    ResolutionMismatchError,
    bimodule_top,
    check_omega3_generators,
    d1_matrix,
    d2_matrix,
    delta0,
    delta1,
    extend_resolution,
    hh_dims,
    hochschild_report,
    hom_omega2_dim,
    resolution_data,
    rho,
)
from hochcalc.linalg import kernel_basis
from hochcalc.presentation import bind_relation, parse_presentation

KK = "algebra kk\nvertices: 1, 2\nrelations:\n"


def bound_relations(a):
    return [bind_relation(r, a.field, a.params)
            for r in a.presentation.resolution_or_default()]


# -- rho -----------------------------------------------------------------------


def test_rho_single_arrow():
    a = built("lambda3p", "GF(3)")
    data = resolution_data(a)
    alpha = a.quiver.arrow_index["alpha"]
    elem = rho(a, {(alpha,): a.field.one})
    e1 = a.vertex_unit(0)
    assert elem.coeffs == {data.p1.pos[(alpha, e1, e1)]: a.field.one}


def test_rho_lambda3p_first_relation():
    # splits of alpha^2 - sigma*gamma: e (x) alpha + alpha (x) e - e (x) gamma - sigma (x) e
    a = built("lambda3p", "GF(3)")
    data = resolution_data(a)
    f = a.field
    q = a.quiver
    alpha, sigma, gamma = (q.arrow_index[x] for x in ("alpha", "sigma", "gamma"))
    elem = rho(a, bound_relations(a)[0])
    e1 = a.vertex_unit(0)
    idx = a.index
    expected = {
        data.p1.pos[(alpha, e1, idx[(alpha,)])]: f.one,
        data.p1.pos[(alpha, idx[(alpha,)], e1)]: f.one,
        data.p1.pos[(sigma, e1, idx[(gamma,)])]: f.neg(f.one),
        data.p1.pos[(gamma, idx[(sigma,)], e1)]: f.neg(f.one),
    }
    assert elem.coeffs == expected


def test_rho_lambda1p_cube_path():
    # beta*alpha*gamma splits as e (x) alpha*gamma + beta (x) gamma + beta*alpha (x) e
    a = built("lambda1p", "Q")
    data = resolution_data(a)
    f = a.field
    q = a.quiver
    beta, alpha, gamma = (q.arrow_index[x] for x in ("beta", "alpha", "gamma"))
    elem = rho(a, {(beta, alpha, gamma): f.one})
    e1 = a.vertex_unit(0)
    expected = {
        data.p1.pos[(beta, e1, a.index[(alpha, gamma)])]: f.one,
        data.p1.pos[(alpha, a.index[(beta,)], a.index[(gamma,)])]: f.one,
        data.p1.pos[(gamma, a.index[(beta, alpha)], e1)]: f.one,
    }
    assert elem.coeffs == expected


def test_rho_rejects_non_composable():
    a = built("lambda3p", "GF(3)")
    q = a.quiver
    sigma = q.arrow_index["sigma"]
    with pytest.raises(Exception):
        rho(a, {(sigma, sigma): a.field.one})


# -- d1 and d2 -------------------------------------------------------------------


def test_d1_semisimple_empty():
    a = build(parse_presentation(KK), field_make(rationals()))
    m = d1_matrix(a)
    assert m.cols == 0


def test_d1_kernel_lambda3p():
    a = built("lambda3p", "GF(3)")
    m = d1_matrix(a)
    assert (m.rows, m.cols) == (72, 144)
    assert kernel_basis(m).dim == 84  # 144 - 72 + 12 by exactness


def test_d1_rho_vanishes_on_relations():
    for name, ftxt in [("lambda3p", "GF(3)"), ("lambda1p", "Q"), ("lambda9p", "GF(2)")]:
        a = built(name, ftxt)
        m = d1_matrix(a)
        rows = m.sparse_rows()
        for rel in bound_relations(a):
            elem = rho(a, rel)
            # image of elem under d1
            for i, row in enumerate(rows):
                acc = a.field.zero
                for p, c in elem.coeffs.items():
                    v = row.get(p)
                    if v is not None:
                        acc = a.field.add(acc, a.field.mul(v, c))
                assert acc == a.field.zero


def test_d2_generator_image_lambda9p():
    # relation xi*epsilon at vertex pair (2,2) maps to e (x) epsilon + xi (x) e
    a = built("lambda9p", "Q")
    data = resolution_data(a)
    f = a.field
    q = a.quiver
    xi, eps = q.arrow_index["xi"], q.arrow_index["epsilon"]
    s = next(
        i for i, r in enumerate(a.presentation.resolution_or_default())
        if r.source_pair == (1, 1)
    )
    elem = data.rhos()[s]
    e2 = a.vertex_unit(1)
    expected = {
        data.p1.pos[(xi, e2, a.index[(eps,)])]: f.one,
        data.p1.pos[(eps, a.index[(xi,)], e2)]: f.one,
    }
    assert elem.coeffs == expected


def test_complex_condition_d1_d2():
    for name, ftxt in [("lambda3p", "GF(3)"), ("lambda6", "GF(2)"), ("lambda10p", "Q")]:
        a = built(name, ftxt)
        m1 = d1_matrix(a).sparse_rows()
        m2 = d2_matrix(a)
        f = a.field
        # (d1 . d2) columns: for each P2 basis vector, apply d2 then d1
        cols = m2.sparse_rows()
        for j in range(m2.cols):
            vec = {}
            for i, row in enumerate(cols):
                c = row.get(j)
                if c is not None:
                    vec[i] = c
            for i, row in enumerate(m1):
                acc = f.zero
                for p, c in vec.items():
                    v = row.get(p)
                    if v is not None:
                        acc = f.add(acc, f.mul(v, c))
                assert acc == f.zero


def test_d2_kernel_lambda9p_is_28():
    a = built("lambda9p", "Q")
    assert kernel_basis(d2_matrix(a)).dim == 28 == a.dim


# -- cochain maps ----------------------------------------------------------------


def test_delta0_kernel_is_center():
    for name, ftxt in [("lambda3p", "GF(3)"), ("lambda10p", "Q")]:
        a = built(name, ftxt)
        m = delta0(a)
        assert kernel_basis(m).dim == a.center()[0]


def test_delta0_lambda3p_rank():
    a = built("lambda3p", "GF(3)")
    m = delta0(a)
    assert m.cols == 8  # Hom(P0, A)
    assert kernel_basis(m).dim == 6
    assert m.cols - kernel_basis(m).dim == 2


def test_delta0_semisimple_zero_map():
    a = build(parse_presentation(KK), field_make(rationals()))
    m = delta0(a)
    assert kernel_basis(m).dim == 2


def test_delta1_kernels_by_characteristic():
    assert kernel_basis(delta1(built("lambda3p", "GF(3)"))).dim == 6
    assert kernel_basis(delta1(built("lambda3p", "GF(4)"))).dim == 8
    assert kernel_basis(delta1(built("lambda10p", "Q"))).dim == 8


def test_delta1_delta0_is_zero():
    for name, ftxt in [("lambda3p", "GF(4)"), ("lambda9", "GF(2)")]:
        a = built(name, ftxt)
        m0 = delta0(a)
        m1 = delta1(a)
        f = a.field
        rows1 = m1.sparse_rows()
        for j in range(m0.cols):
            vec = {i: m0.entries[i][j] for i in range(m0.rows)
                   if m0.entries[i][j] != f.zero}
            for row in rows1:
                acc = f.zero
                for p, c in vec.items():
                    v = row.get(p)
                    if v is not None:
                        acc = f.add(acc, f.mul(v, c))
                assert acc == f.zero


def test_hom_omega2_examples():
    assert hom_omega2_dim(built("lambda3p", "GF(3)")) == 10
    assert hom_omega2_dim(built("lambda6p", "Q")) == 5
    assert hom_omega2_dim(built("lambda10p", "Q")) == 8


def test_hh_dims_examples():
    assert hh_dims(built("lambda3p", "GF(4)")) == (6, 6, 6)
    assert hh_dims(built("lambda9", "GF(2)")) == (5, 1, 2)


def test_exactness_bookkeeping():
    for name, ftxt in [("lambda3p", "GF(3)"), ("lambda9p", "GF(2)"), ("lambda10", "GF(2)")]:
        a = built(name, ftxt)
        r = report(name, ftxt)
        omega1 = r.dim_p0 - a.dim
        omega2 = r.dim_p1 - omega1
        assert r.ker_d1 == omega2
        assert r.ker_d2 == r.dim_p2 - omega2


def test_hom_dims_match_cartan_reads():
    for name, ftxt in [("lambda6p", "Q"), ("lambda10p", "GF(2)")]:
        a = built(name, ftxt)
        r = report(name, ftxt)
        c = a.cartan_matrix()
        assert r.hom_p0 == sum(c[i][i] for i in range(a.quiver.n_vertices))
        q = a.quiver
        assert r.hom_p1 == sum(c[q.source[x]][q.target[x]] for x in range(q.n_arrows))
        rels = a.presentation.resolution_or_default()
        assert r.hom_p2 == sum(c[rl.source_pair[0]][rl.source_pair[1]] for rl in rels)


def test_hh_invariant_under_relation_permutation():
    base = hh_dims(built("lambda3p", "GF(3)"))
    text = (
        "algebra lambda3p_relperm params lambda\n"
        "field-constraints: lambda not-in {0,1}\n"
        "vertices: 1, 2\n"
        "arrow alpha: 1 -> 1\narrow sigma: 1 -> 2\narrow gamma: 2 -> 1\narrow beta: 2 -> 2\n"
        "relations:\n"
        "  alpha*sigma = sigma*beta\n"
        "  alpha*alpha = sigma*gamma\n"
        "  gamma*alpha = beta*gamma\n"
        "  lambda*beta*beta = gamma*sigma\n"
    )
    from hochcalc.fields import prime_field

    f = field_make(prime_field(3))
    a = build(parse_presentation(text), f, {"lambda": f.of_int(2)})
    assert hh_dims(a) == base


def test_resolution_mismatch_detected():
    # a proper sub-ideal presented as the resolution set must be refused
    text = (
        "algebra short\nvertices: 1, 2\n"
        "arrow alpha: 2 -> 2\narrow gamma: 2 -> 1\narrow beta: 1 -> 2\n"
        "relations:\n"
        "  alpha*alpha = gamma*beta\n"
        "  beta*alpha*gamma = 0\n"
        "resolution-relations:\n"
        "  alpha*alpha = gamma*beta\n"
    )
    a = build(parse_presentation(text), field_make(rationals()))
    with pytest.raises(ResolutionMismatchError):
        hochschild_report(a)


# -- omega3 generators ------------------------------------------------------------


def test_omega3_lambda3p():
    a = built("lambda3p", "GF(3)")
    gens = omega3_generator_elements("lambda3p", a)
    rep = check_omega3_generators(a, gens)
    assert all(rep.in_kernel)
    assert rep.kernel_dim == 60
    assert rep.closure_dim == 60
    assert rep.complete


def test_omega3_lambda9p_kernel_28():
    a = built("lambda9p", "Q")
    gens = omega3_generator_elements("lambda9p", a)
    rep = check_omega3_generators(a, gens)
    assert all(rep.in_kernel)
    assert rep.kernel_dim == 28
    assert rep.closure_dim == 28


def test_omega3_empty_on_semisimple():
    a = build(parse_presentation(KK), field_make(rationals()))
    rep = check_omega3_generators(a, [])
    assert rep.kernel_dim == 0
    assert rep.complete


# -- tops and resolution extension -------------------------------------------------


def test_top_of_ker_d1_lambda3p():
    a = built("lambda3p", "GF(3)")
    data = resolution_data(a)
    top = bimodule_top(a, data.p1, data.kernel_d1())
    assert top == {(0, 0): 1, (0, 1): 1, (1, 0): 1, (1, 1): 1}


def test_top_of_ker_d2_lambda9p():
    a = built("lambda9p", "Q")
    data = resolution_data(a)
    top = bimodule_top(a, data.p2, data.kernel_d2())
    assert top == {(i, i): 1 for i in range(4)}


def test_extend_resolution_lambda3p_period_window():
    a = built("lambda3p", "GF(3)")
    scan = extend_resolution(a, 4)
    assert scan.complete
    by_degree = {r.degree: r for r in scan.records}
    assert by_degree[3].dim_omega == 60
    assert by_degree[4].dim_omega == 12 == a.dim
    assert sum(by_degree[4].top.values()) == 2


def test_extend_resolution_semisimple_terminates():
    a = build(parse_presentation(KK), field_make(rationals()))
    scan = extend_resolution(a, 2)
    assert scan.complete
    assert scan.records[-1].dim_omega == 0
    assert "terminates" in scan.note


def test_extend_resolution_cap():
    a = built("lambda3p", "GF(3)")
    with pytest.raises(ValueError):
        extend_resolution(a, 7)
