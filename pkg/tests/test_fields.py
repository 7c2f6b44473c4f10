import random
from fractions import Fraction

import pytest

from hochcalc.fields import (
    FieldError,
    arithmetic,
    characteristic,
    extension_field,
    field_make,
    is_irreducible,
    parse_field_spec,
    parse_scalar,
    prime_field,
    rationals,
)


def test_gf2_basics():
    f = field_make(prime_field(2))
    assert f.characteristic == 2
    assert f.size == 2
    assert f.add(1, 1) == 0


def test_gf4_generator_relation():
    f = field_make(extension_field(2, 2))
    assert f.size == 4
    assert f.characteristic == 2
    g = f.generator
    assert f.mul(g, g) == f.add(g, f.one)  # g^2 = g + 1


def test_rationals_characteristic_zero():
    f = field_make(rationals())
    assert characteristic(f) == 0
    assert f.add(Fraction(1, 3), Fraction(1, 6)) == Fraction(1, 2)


def test_gf3_arithmetic_examples():
    f = field_make(prime_field(3))
    a, b = f.element(2), f.element(2)
    assert arithmetic(a, b, "add").value == 1
    assert characteristic(f) == 3


def test_arithmetic_spec_mismatch():
    a = field_make(prime_field(3)).element(1)
    b = field_make(prime_field(5)).element(1)
    with pytest.raises(FieldError):
        arithmetic(a, b, "add")


def test_division_by_zero():
    f = field_make(prime_field(5))
    with pytest.raises(ZeroDivisionError):
        f.div(f.one, f.zero)
    fq = field_make(rationals())
    with pytest.raises(ZeroDivisionError):
        fq.div(fq.one, fq.zero)


def test_non_prime_rejected():
    with pytest.raises(FieldError):
        field_make(prime_field(6))


def test_reducible_modulus_rejected():
    # x^2 + 1 = (x+1)^2 over GF(2)
    with pytest.raises(FieldError):
        field_make(extension_field(2, 2, (1, 0, 1)))


def test_default_moduli():
    assert extension_field(2, 2).modulus == (1, 1, 1)
    assert extension_field(2, 3).modulus == (1, 1, 0, 1)
    assert extension_field(3, 2).modulus == (1, 0, 1)
    assert is_irreducible([1, 1, 1], 2)
    assert not is_irreducible([1, 0, 1], 2)


def test_degree_cap():
    with pytest.raises(FieldError):
        field_make(extension_field(2, 9))


FIELDS = [
    field_make(rationals()),
    field_make(prime_field(2)),
    field_make(prime_field(5)),
    field_make(extension_field(2, 2)),
    field_make(extension_field(3, 2)),
]


@pytest.mark.parametrize("f", FIELDS, ids=lambda f: f.spec.describe())
def test_field_axioms_randomized(f):
    rng = random.Random(20240817)

    def rand():
        if f.size is None:
            return Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        elements = list(f.elements())
        return elements[rng.randrange(len(elements))]

    for _ in range(60):
        a, b, c = rand(), rand(), rand()
        assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        assert f.add(a, b) == f.add(b, a)
        assert f.mul(a, b) == f.mul(b, a)
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        if a != f.zero:
            assert f.mul(a, f.inv(a)) == f.one


@pytest.mark.parametrize(
    "spec", [extension_field(2, 2), extension_field(2, 3), extension_field(3, 2)],
    ids=["GF(4)", "GF(8)", "GF(9)"],
)
def test_frobenius(spec):
    f = field_make(spec)
    p = f.characteristic

    def power(x, n):
        out = f.one
        for _ in range(n):
            out = f.mul(out, x)
        return out

    for a in f.elements():
        for b in f.elements():
            assert power(f.add(a, b), p) == f.add(power(a, p), power(b, p))


@pytest.mark.parametrize("f", FIELDS, ids=lambda f: f.spec.describe())
def test_render_parse_roundtrip(f):
    sample = list(f.elements()) if f.size is not None else [
        Fraction(0), Fraction(3), Fraction(-2, 7), Fraction(11, 4)
    ]
    for x in sample:
        assert parse_scalar(f, f.render(x)) == x


def test_parse_field_spec_forms():
    assert parse_field_spec("Q").kind == "rationals"
    assert parse_field_spec("GF(7)").p == 7
    s = parse_field_spec("GF(4)")
    assert (s.p, s.k) == (2, 2)
    s = parse_field_spec("GF(2^3)")
    assert (s.p, s.k) == (2, 3)
    s = parse_field_spec("GF(8):g^3+g^2+1")
    assert s.modulus == (1, 0, 1, 1)
    with pytest.raises(FieldError):
        parse_field_spec("GF(12)")


def test_scalar_literals():
    fq = field_make(rationals())
    assert parse_scalar(fq, "3/4") == Fraction(3, 4)
    assert parse_scalar(fq, "-2") == Fraction(-2)
    f4 = field_make(extension_field(2, 2))
    assert parse_scalar(f4, "g") == f4.generator
    assert parse_scalar(f4, "g+1") == f4.add(f4.generator, f4.one)
    f8 = field_make(extension_field(2, 3))
    two_g2_plus_1 = parse_scalar(f8, "2*g^2+1")
    assert two_g2_plus_1 == f8.one  # 2 = 0 in characteristic 2
    with pytest.raises(FieldError):
        parse_scalar(field_make(prime_field(2)), "g")
