import pytest

from hochcalc.catalog import catalog_names, get_presentation
from hochcalc.fields import field_make, parse_field_spec, extension_field, prime_field
from hochcalc.presentation import (
    ParseError,
    bind_relation,
    parse_presentation,
    render_presentation,
    validate,
)

LAMBDA3P = """\
algebra lambda3p params lambda
field-constraints: lambda not-in {0,1}
vertices: 1, 2
arrow alpha: 1 -> 1
arrow sigma: 1 -> 2
arrow gamma: 2 -> 1
arrow beta: 2 -> 2
relations:
  alpha*alpha = sigma*gamma
  lambda*beta*beta = gamma*sigma
  gamma*alpha = beta*gamma
  alpha*sigma = sigma*beta
"""


def test_parse_lambda3p_shape():
    p = parse_presentation(LAMBDA3P)
    assert p.name == "lambda3p"
    assert p.quiver.n_vertices == 2
    assert p.quiver.n_arrows == 4
    assert len(p.relations) == 4
    assert p.params == ["lambda"]
    assert p.constraints["lambda"] == frozenset({0, 1})


def test_semisimple_presentation():
    p = parse_presentation("algebra kk\nvertices: 1, 2\nrelations:\n")
    assert p.quiver.n_arrows == 0
    assert p.relations == []


def test_non_composable_error_position():
    text = (
        "algebra bad\nvertices: 1, 2\n"
        "arrow alpha: 1 -> 2\narrow beta: 1 -> 2\n"
        "relations:\n  alpha*beta = 0\n"
    )
    with pytest.raises(ParseError) as err:
        parse_presentation(text)
    assert err.value.line == 6
    assert "non-composable" in str(err.value)


def test_unknown_arrow_label():
    text = "algebra bad\nvertices: 1\narrow a: 1 -> 1\nrelations:\n  a*b = 0\n"
    with pytest.raises(ParseError) as err:
        parse_presentation(text)
    assert "unknown arrow" in str(err.value)


def test_mixed_endpoints_rejected():
    text = (
        "algebra bad\nvertices: 1, 2\n"
        "arrow a: 1 -> 1\narrow b: 1 -> 2\n"
        "relations:\n  a*a + b = 0\n"
    )
    with pytest.raises(ParseError) as err:
        parse_presentation(text)
    assert "mixes terms" in str(err.value)


def test_unbound_parameter_flagged_by_validate():
    p = parse_presentation(LAMBDA3P)
    f = field_make(prime_field(3))
    r = validate(p, f, {})
    assert not r.ok
    assert any("not bound" in v for v in r.violations)


def test_constraint_violation():
    p = parse_presentation(LAMBDA3P)
    f = field_make(prime_field(3))
    bad = validate(p, f, {"lambda": f.of_int(1)})
    assert any("violates" in v for v in bad.violations)
    good = validate(p, f, {"lambda": f.of_int(2)})
    assert good.ok


def test_lambda_g_over_gf4_valid():
    p = parse_presentation(LAMBDA3P)
    f = field_make(extension_field(2, 2))
    r = validate(p, f, {"lambda": f.generator})
    assert r.ok


def test_admissibility_violation():
    text = "algebra bad\nvertices: 1\narrow a: 1 -> 1\nrelations:\n  a*a = a\n"
    p = parse_presentation(text)
    f = field_make(prime_field(2))
    r = validate(p, f, {})
    assert any("length 1" in v for v in r.violations)


def test_bind_relation_collects_coefficients():
    p = parse_presentation(LAMBDA3P)
    f = field_make(prime_field(5))
    rel = p.relations[1]  # lambda*beta*beta = gamma*sigma
    bound = bind_relation(rel, f, {"lambda": f.of_int(2)})
    beta = p.quiver.arrow_index["beta"]
    gamma = p.quiver.arrow_index["gamma"]
    sigma = p.quiver.arrow_index["sigma"]
    assert bound == {(beta, beta): 2, (gamma, sigma): 4}  # -1 = 4 mod 5


@pytest.mark.parametrize("name", catalog_names())
def test_catalog_roundtrip(name):
    p = get_presentation(name)
    again = parse_presentation(render_presentation(p))
    assert again.name == p.name
    assert again.quiver.vertices == p.quiver.vertices
    assert [a.label for a in again.quiver.arrows] == [a.label for a in p.quiver.arrows]
    assert len(again.relations) == len(p.relations)
    for r1, r2 in zip(again.relations, p.relations):
        assert r1.source_pair == r2.source_pair
        assert [(t.sign, t.scalar, t.path) for t in r1.terms] == [
            (t.sign, t.scalar, t.path) for t in r2.terms
        ]
    if p.resolution_relations is None:
        assert again.resolution_relations is None
    else:
        assert len(again.resolution_relations) == len(p.resolution_relations)
