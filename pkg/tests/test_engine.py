import pytest

from conftest import built
from hochcalc.engine import (
    BuildError,
    CompletionCapError,
    NotFiniteDimensionalError,
    NotSelfInjectiveEvidence,
    build,
    nakayama_permutation,
    parse_element,
    symmetric_certify,
    verify_associativity,
)
from hochcalc.fields import field_make, parse_field_spec, prime_field, rationals
from hochcalc.linalg import Matrix, rref
from hochcalc.presentation import parse_presentation

KK = "algebra kk\nvertices: 1, 2\nrelations:\n"


def test_build_lambda3p_gf3_dim():
    a = built("lambda3p", "GF(3)")
    assert a.dim == 12
    assert a.certification.confluent


def test_build_semisimple():
    a = build(parse_presentation(KK), field_make(rationals()))
    assert a.dim == 2
    assert a.cartan_matrix() == [[1, 0], [0, 1]]


def test_build_lambda10p_rationals_dim():
    assert built("lambda10p", "Q").dim == 35


def test_multiply_lambda3p_sigma_gamma():
    a = built("lambda3p", "GF(3)")
    prod = a.multiply(a.arrow_element("sigma"), a.arrow_element("gamma"))
    assert prod == parse_element(a, "alpha*alpha")


def test_multiply_lambda5p_beta_delta_zero():
    a = built("lambda5p", "Q")
    prod = a.multiply(a.arrow_element("beta"), a.arrow_element("delta"))
    assert prod.is_zero()


def test_idempotents():
    a = built("lambda3p", "GF(3)")
    e1 = parse_element(a, "e(1)")
    assert a.multiply(e1, e1) == e1
    one = a.one()
    assert a.multiply(one, one) == one


def test_cartan_examples():
    assert built("lambda3p", "GF(3)").cartan_matrix() == [[4, 2], [2, 4]]
    assert built("lambda1p", "Q").cartan_matrix() == [[3, 3], [3, 5]]


def test_cartan_sum_is_dimension():
    for name, ftxt in [("lambda3p", "GF(3)"), ("lambda9", "GF(2)"), ("lambda10p", "Q")]:
        a = built(name, ftxt)
        assert sum(sum(row) for row in a.cartan_matrix()) == a.dim


def span_matrix(algebra, elements):
    f = algebra.field
    rows = []
    for x in elements:
        row = [f.zero] * algebra.dim
        for i, c in x.coeffs.items():
            row[i] = c
        rows.append(row)
    return rref(Matrix.from_rows(f, rows))[0].entries


def test_center_lambda3p_exact_basis():
    a = built("lambda3p", "GF(3)")
    dim, basis = a.center()
    assert dim == 6
    expected = [
        parse_element(a, t)
        for t in ("1", "alpha+beta", "alpha^2", "alpha^3", "beta^2", "beta^3")
    ]
    assert span_matrix(a, basis) == span_matrix(a, expected)


def test_center_lambda10p():
    a = built("lambda10p", "Q")
    dim, basis = a.center()
    assert dim == 2
    assert a.one() in basis or not all(x.is_zero() for x in basis)


def test_center_semisimple():
    a = build(parse_presentation(KK), field_make(rationals()))
    assert a.center()[0] == 2


def test_nakayama_identity_lambda9():
    nu = nakayama_permutation(built("lambda9", "GF(2)"))
    assert nu == [0, 1, 2, 3]


def test_nakayama_nonidentity_lambda10():
    nu = nakayama_permutation(built("lambda10", "GF(2)"))
    assert not isinstance(nu, NotSelfInjectiveEvidence)
    assert nu != [0, 1, 2, 3, 4]


def test_nakayama_identity_lambda3p():
    assert nakayama_permutation(built("lambda3p", "GF(4)")) == [0, 1]


def test_nakayama_not_self_injective():
    # path algebra of 1 -> 2 -> 3 with the length-2 relation: not self-injective
    text = (
        "algebra a3\nvertices: 1, 2, 3\n"
        "arrow a: 1 -> 2\narrow b: 2 -> 3\n"
        "relations:\n  a*b = 0\n"
    )
    a = build(parse_presentation(text), field_make(rationals()))
    assert isinstance(nakayama_permutation(a), NotSelfInjectiveEvidence)


def test_symmetric_certified_lambda1p_gf3():
    v = symmetric_certify(built("lambda1p", "GF(3)"))
    assert v.status == "certified"
    assert v.functional is not None


def test_symmetric_refuted_by_nakayama_lambda10():
    assert symmetric_certify(built("lambda10", "GF(2)")).status == "refuted_nakayama"


def test_symmetric_refuted_exhaustive_lambda9():
    v = symmetric_certify(built("lambda9", "GF(2)"))
    assert v.status == "refuted_exhaustive"


def test_certified_functional_is_symmetrizing():
    a = built("lambda3p", "GF(4)")
    v = symmetric_certify(a)
    assert v.status == "certified"
    f = v.functional  # trace form: f(xy) = f(yx), stored over diagonal corners
    for x in ("alpha", "sigma", "gamma", "beta"):
        for y in ("alpha", "sigma", "gamma", "beta"):
            xy = a.multiply(a.arrow_element(x), a.arrow_element(y))
            yx = a.multiply(a.arrow_element(y), a.arrow_element(x))
            fxy = sum_coeffs(a, f, xy)
            fyx = sum_coeffs(a, f, yx)
            assert fxy == fyx


def sum_coeffs(a, functional, element):
    f = a.field
    total = f.zero
    for i, c in element.coeffs.items():
        fc = functional.coeffs.get(i)
        if fc is not None:
            total = f.add(total, f.mul(fc, c))
    return total


def test_dimension_invariant_under_arrow_permutation():
    base = built("lambda3p", "GF(3)")
    text = (
        "algebra lambda3p_perm params lambda\n"
        "field-constraints: lambda not-in {0,1}\n"
        "vertices: 1, 2\n"
        "arrow beta: 2 -> 2\narrow gamma: 2 -> 1\narrow sigma: 1 -> 2\narrow alpha: 1 -> 1\n"
        "relations:\n"
        "  alpha*sigma = sigma*beta\n"
        "  gamma*alpha = beta*gamma\n"
        "  lambda*beta*beta = gamma*sigma\n"
        "  alpha*alpha = sigma*gamma\n"
    )
    f = field_make(parse_field_spec("GF(3)"))
    permuted = build(parse_presentation(text), f, {"lambda": f.of_int(2)})
    assert permuted.dim == base.dim
    assert permuted.cartan_matrix() == base.cartan_matrix()


def test_completion_cap_error():
    # a commutativity-style relation on a two-loop quiver diverges at any cap
    text = (
        "algebra freeish\nvertices: 1\n"
        "arrow x: 1 -> 1\narrow y: 1 -> 1\n"
        "relations:\n  x*y = y*x\n"
    )
    with pytest.raises((CompletionCapError, NotFiniteDimensionalError)):
        build(parse_presentation(text), field_make(rationals()), cap=6)


def test_not_finite_dimensional():
    text = "algebra loop\nvertices: 1\narrow x: 1 -> 1\nrelations:\n"
    with pytest.raises(NotFiniteDimensionalError):
        build(parse_presentation(text), field_make(rationals()))


def test_resolution_relation_outside_ideal_rejected():
    text = (
        "algebra bad\nvertices: 1\narrow x: 1 -> 1\n"
        "relations:\n  x*x*x = 0\n"
        "resolution-relations:\n  x*x = 0\n"
    )
    with pytest.raises(BuildError):
        build(parse_presentation(text), field_make(rationals()))


def test_radical_nilpotency():
    # alpha^3 is a longest nonzero radical product, so rad^3 != 0 = rad^4
    a = built("lambda3p", "GF(3)")
    assert a.radical_nilpotency() == 4
    s = build(parse_presentation(KK), field_make(rationals()))
    assert s.radical_nilpotency() == 1


def test_associativity_small():
    assert verify_associativity(built("lambda3p", "GF(3)"))
    assert verify_associativity(built("lambda2p", "GF(3)"))


def test_normal_word_count_matches_basis_cardinalities():
    for name, ftxt, dim in [
        ("lambda3p", "GF(3)", 12),
        ("lambda1p", "Q", 14),
        ("lambda9p", "Q", 28),
        ("lambda10p", "Q", 35),
        ("p_a5", "GF(2)", 35),
    ]:
        assert built(name, ftxt).dim == dim
