"""Exact scalar arithmetic: the rationals and finite fields GF(p^k).

A Field object owns all arithmetic; raw element values are Fraction for the
rationals, int in [0, p) for prime fields, and a length-k tuple of ints
(coefficients of 1, g, ..., g^(k-1)) for extension fields.  FieldElement is a
thin wrapper for code that wants operator syntax; the heavy numerical modules
work with raw values through the Field methods.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

MAX_EXTENSION_DEGREE = 8


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin, valid far beyond any sane characteristic
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# polynomials over GF(p), coefficient lists low -> high


def _poly_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mulmod(a, b, modulus, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_rem(out, modulus, p)


def _poly_rem(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and _poly_trim(a):
        if len(a) - 1 < dm:
            break
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, y in enumerate(m):
            a[shift + i] = (a[shift + i] - c * y) % p
        _poly_trim(a)
    return a


def _poly_divides(d, a, p):
    """Whether polynomial d divides a over GF(p)."""
    return not _poly_rem(a, d, p)


def is_irreducible(modulus, p) -> bool:
    """Trial factorization over GF(p); intended for degree <= 8."""
    m = _poly_trim(list(modulus))
    deg = len(m) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    # enumerate monic divisors of degree 1 .. deg // 2
    for d in range(1, deg // 2 + 1):
        coeffs = [0] * d + [1]
        total = p**d
        for idx in range(total):
            rem = idx
            for i in range(d):
                coeffs[i] = rem % p
                rem //= p
            if _poly_divides(coeffs, m, p):
                return False
    return True


def _default_modulus(p: int, k: int) -> tuple:
    """Smallest monic irreducible of degree k over GF(p), scanning low-weight
    candidates first so GF(4), GF(8), GF(9) get their conventional moduli."""
    preferred = {
        (2, 2): (1, 1, 1),  # x^2 + x + 1
        (2, 3): (1, 1, 0, 1),  # x^3 + x + 1
        (3, 2): (1, 0, 1),  # x^2 + 1
    }
    if (p, k) in preferred:
        return preferred[(p, k)]
    coeffs = [0] * k + [1]
    for idx in range(p**k):
        rem = idx
        for i in range(k):
            coeffs[i] = rem % p
            rem //= p
        if is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise FieldError(f"no irreducible polynomial of degree {k} over GF({p})")


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    kind: str  # 'rationals' | 'prime' | 'extension'
    p: int = 0
    k: int = 1
    modulus: tuple = ()

    def describe(self) -> str:
        if self.kind == "rationals":
            return "Q"
        if self.kind == "prime":
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k})"


def rationals() -> FieldSpec:
    return FieldSpec("rationals")


def prime_field(p: int) -> FieldSpec:
    return FieldSpec("prime", p=p)


def extension_field(p: int, k: int, modulus=None) -> FieldSpec:
    if modulus is None:
        modulus = _default_modulus(p, k)
    return FieldSpec("extension", p=p, k=k, modulus=tuple(int(c) % p for c in modulus))


class Field:
    """Arithmetic context; subclasses implement the raw operations."""

    spec: FieldSpec
    characteristic: int
    size: int | None  # None for infinite

    def element(self, value) -> "FieldElement":
        return FieldElement(self, self.coerce(value))

    def coerce(self, value):
        if isinstance(value, FieldElement):
            if value.field.spec != self.spec:
                raise FieldError("element belongs to a different field")
            return value.value
        if isinstance(value, int):
            return self.of_int(value)
        return self.check(value)

    # subclass hooks -------------------------------------------------------
    def of_int(self, n):
        raise NotImplementedError

    def check(self, raw):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        if b == self.zero:
            raise ZeroDivisionError("division by zero field element")
        return self.mul(a, self.inv(b))

    def neg(self, a):
        raise NotImplementedError

    def render(self, a) -> str:
        raise NotImplementedError

    def elements(self):
        """All raw elements; finite fields only."""
        raise FieldError(f"{self.spec.describe()} is not finite")


class RationalField(Field):
    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.characteristic = 0
        self.size = None
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def of_int(self, n):
        return Fraction(n)

    def check(self, raw):
        if not isinstance(raw, Fraction):
            raise FieldError(f"not a rational value: {raw!r}")
        return raw

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero field element")
        return 1 / a

    def neg(self, a):
        return -a

    def render(self, a) -> str:
        return str(a)


class PrimeField(Field):
    def __init__(self, spec: FieldSpec):
        if not is_prime(spec.p):
            raise FieldError(f"{spec.p} is not prime")
        self.spec = spec
        self.p = spec.p
        self.characteristic = spec.p
        self.size = spec.p
        self.zero = 0
        self.one = 1 % spec.p

    def of_int(self, n):
        return n % self.p

    def check(self, raw):
        if not isinstance(raw, int):
            raise FieldError(f"not a prime-field value: {raw!r}")
        return raw % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("division by zero field element")
        return pow(a, self.p - 2, self.p)

    def neg(self, a):
        return (-a) % self.p

    def render(self, a) -> str:
        return str(a % self.p)

    def elements(self):
        return range(self.p)


class ExtensionField(Field):
    def __init__(self, spec: FieldSpec):
        if not is_prime(spec.p):
            raise FieldError(f"{spec.p} is not prime")
        if spec.k < 2:
            raise FieldError("extension degree must be at least 2")
        if spec.k > MAX_EXTENSION_DEGREE:
            raise FieldError(f"extension degree capped at {MAX_EXTENSION_DEGREE}")
        if len(spec.modulus) != spec.k + 1 or spec.modulus[-1] % spec.p != 1:
            raise FieldError("modulus must be monic of degree k")
        if not is_irreducible(list(spec.modulus), spec.p):
            raise FieldError(f"modulus {spec.modulus} is reducible over GF({spec.p})")
        self.spec = spec
        self.p = spec.p
        self.k = spec.k
        self.characteristic = spec.p
        self.size = spec.p**spec.k
        self.zero = (0,) * spec.k
        self.one = (1,) + (0,) * (spec.k - 1)
        self.generator = ((0, 1) + (0,) * (spec.k - 2)) if spec.k >= 2 else self.one

    def of_int(self, n):
        return (n % self.p,) + (0,) * (self.k - 1)

    def check(self, raw):
        if not (isinstance(raw, tuple) and len(raw) == self.k):
            raise FieldError(f"not a GF({self.p}^{self.k}) value: {raw!r}")
        return tuple(c % self.p for c in raw)

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def mul(self, a, b):
        out = _poly_mulmod(list(a), list(b), list(self.spec.modulus), self.p)
        out += [0] * (self.k - len(out))
        return tuple(out)

    def inv(self, a):
        if all(c == 0 for c in a):
            raise ZeroDivisionError("division by zero field element")
        # a^(q-2) = a^(-1) in GF(q)
        result = self.one
        base = a
        e = self.size - 2
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def render(self, a) -> str:
        terms = []
        for i in range(self.k - 1, -1, -1):
            c = a[i] % self.p
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                power = "g" if i == 1 else f"g^{i}"
                terms.append(power if c == 1 else f"{c}*{power}")
        return "+".join(terms) if terms else "0"

    def elements(self):
        for idx in range(self.size):
            rem = idx
            coeffs = []
            for _ in range(self.k):
                coeffs.append(rem % self.p)
                rem //= self.p
            yield tuple(coeffs)


class FieldElement:
    """Value + owning field, with operator syntax and canonical forms."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value):
        self.field = field
        self.value = field.check(value) if not isinstance(value, int) else field.of_int(value)

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field.spec != self.field.spec:
                raise FieldError("field spec mismatch")
            return other.value
        if isinstance(other, int):
            return self.field.of_int(other)
        raise TypeError(f"cannot combine field element with {other!r}")

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._other(other)))

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._other(other)))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._other(other)))

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._other(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field.spec == other.field.spec and self.value == other.value
        if isinstance(other, int):
            return self.value == self.field.of_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.spec, self.value))

    def __repr__(self):
        return f"FieldElement({self.field.spec.describe()}, {self.field.render(self.value)})"

    def __bool__(self):
        return self.value != self.field.zero


def field_make(spec: FieldSpec) -> Field:
    if spec.kind == "rationals":
        return RationalField(spec)
    if spec.kind == "prime":
        return PrimeField(spec)
    if spec.kind == "extension":
        return ExtensionField(spec)
    raise FieldError(f"unknown field kind {spec.kind!r}")


def arithmetic(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if a.field.spec != b.field.spec:
        raise FieldError("field spec mismatch")
    f = a.field
    table = {"add": f.add, "sub": f.sub, "mul": f.mul, "div": f.div}
    if op not in table:
        raise FieldError(f"unknown operation {op!r}")
    return FieldElement(f, table[op](a.value, b.value))


def characteristic(field: Field) -> int:
    return field.characteristic


# ---------------------------------------------------------------------------
# scalar literal grammar: integers, fractions a/b, polynomials in g

_FIELD_RE = re.compile(r"^GF\(\s*(\d+)\s*(?:\^\s*(\d+)\s*)?\)$")


def parse_field_spec(text: str) -> FieldSpec:
    """Accepts Q, GF(p), GF(p^k) and GF(p^k):<modulus poly in g>."""
    text = text.strip()
    if text in ("Q", "QQ", "rationals"):
        return rationals()
    modulus_text = None
    if ":" in text:
        text, modulus_text = text.split(":", 1)
        text = text.strip()
    m = _FIELD_RE.match(text)
    if not m:
        raise FieldError(f"cannot parse field {text!r}")
    q = int(m.group(1))
    k = int(m.group(2)) if m.group(2) else None
    if k is None:
        # GF(q) with q = p^k written multiplicatively, e.g. GF(4)
        if is_prime(q):
            p, k = q, 1
        else:
            p = None
            for cand in range(2, q):
                if is_prime(cand):
                    e, n = 0, q
                    while n % cand == 0:
                        n //= cand
                        e += 1
                    if n == 1:
                        p, k = cand, e
                        break
            if p is None:
                raise FieldError(f"{q} is not a prime power")
    else:
        p = q
    if k == 1:
        if modulus_text:
            raise FieldError("modulus only makes sense for proper extensions")
        return prime_field(p)
    modulus = None
    if modulus_text:
        modulus = _parse_modulus(modulus_text.strip(), p, k)
    return extension_field(p, k, modulus)


def _parse_modulus(text: str, p: int, k: int) -> tuple:
    coeffs = [0] * (k + 1)
    for sign, term in _split_terms(text):
        c, e = _parse_poly_term(term)
        if e > k:
            raise FieldError(f"modulus degree exceeds {k}")
        coeffs[e] = (coeffs[e] + sign * c) % p
    return tuple(coeffs)


def _split_terms(text: str):
    text = text.replace(" ", "")
    if not text:
        raise FieldError("empty scalar")
    terms = []
    sign, cur = 1, ""
    for ch in text:
        if ch in "+-" and cur:
            terms.append((sign, cur))
            sign, cur = (1 if ch == "+" else -1), ""
        elif ch in "+-" and not cur:
            sign = sign if ch == "+" else -sign
        else:
            cur += ch
    if not cur:
        raise FieldError(f"dangling sign in {text!r}")
    terms.append((sign, cur))
    return terms


def _parse_poly_term(term: str):
    """Returns (coefficient int, exponent of g)."""
    if "*" in term:
        c_text, g_text = term.split("*", 1)
        c = int(c_text)
    elif term.startswith("g"):
        c, g_text = 1, term
    else:
        return int(term), 0
    if g_text == "g":
        return c, 1
    m = re.match(r"^g\^(\d+)$", g_text)
    if not m:
        raise FieldError(f"cannot parse term {term!r}")
    return c, int(m.group(1))


def parse_scalar(field: Field, text: str):
    """Raw value of a scalar literal in the given field."""
    text = text.strip().replace(" ", "")
    if not text:
        raise FieldError("empty scalar")
    if isinstance(field, RationalField):
        if "g" in text:
            raise FieldError("polynomial scalar over the rationals")
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    if isinstance(field, PrimeField):
        if "g" in text:
            raise FieldError(f"generator literal needs an extension field, got {field.spec.describe()}")
        if "/" in text:
            num, den = text.split("/", 1)
            return field.div(field.of_int(int(num)), field.of_int(int(den)))
        return field.of_int(int(text))
    # extension field
    value = field.zero
    for sign, term in _split_terms(text):
        c, e = _parse_poly_term(term)
        mono = field.of_int(c * sign)
        for _ in range(e):
            mono = field.mul(mono, field.generator)
        value = field.add(value, mono)
    return value
