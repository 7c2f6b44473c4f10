"""Quivers with relations and the `.qa` presentation grammar.

The grammar (one declaration per line, `#` starts a comment):

    algebra <name> [params <id> [, <id>]*]
    field-constraints: <id> not-in {0,1}
    vertices: <v1>, <v2>, ...
    arrow <label>: <src> -> <tgt>
    relations:
      <lincomb> = <lincomb|0>
    resolution-relations:
      <lincomb> = <lincomb|0>

A lincomb is a signed sum of terms; each term is an optional scalar (literal
or parameter name) times a `*`-joined arrow path, read left to right: in
`alpha*beta` the target of alpha must equal the source of beta.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .fields import Field, FieldError, parse_scalar


class ParseError(ValueError):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col
        self.message = message


@dataclass(frozen=True)
class Arrow:
    label: str
    source: str
    target: str


class Quiver:
    def __init__(self, vertices, arrows):
        self.vertices = list(vertices)
        self.arrows = list(arrows)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex label")
        labels = [a.label for a in self.arrows]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate arrow label")
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        for a in self.arrows:
            if a.source not in self.vertex_index or a.target not in self.vertex_index:
                raise ValueError(f"arrow {a.label} uses an undeclared vertex")
        self.arrow_index = {a.label: i for i, a in enumerate(self.arrows)}
        self.source = [self.vertex_index[a.source] for a in self.arrows]
        self.target = [self.vertex_index[a.target] for a in self.arrows]

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_arrows(self):
        return len(self.arrows)


@dataclass
class Term:
    sign: int              # +1 or -1
    scalar: str | None     # literal text, or a parameter name
    is_param: bool
    path: tuple            # arrow indices, length >= 1
    line: int = 0
    col: int = 0


@dataclass
class Relation:
    terms: list            # list[Term]; relation reads  sum(terms) = 0
    line: int = 0
    source_pair: tuple = ()  # (source vertex index, target vertex index)

    def text(self, quiver: Quiver) -> str:
        parts = []
        for k, t in enumerate(self.terms):
            body = "*".join(quiver.arrows[a].label for a in t.path)
            if t.scalar is not None:
                body = f"{t.scalar}*{body}"
            if k == 0:
                parts.append(body if t.sign > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if t.sign > 0 else f"- {body}")
        return " ".join(parts) + " = 0"


@dataclass
class Presentation:
    name: str
    quiver: Quiver
    relations: list                       # list[Relation]
    resolution_relations: list | None     # None -> defaults to relations
    params: list = dc_field(default_factory=list)
    constraints: dict = dc_field(default_factory=dict)  # param -> excluded ints

    def resolution_or_default(self):
        return self.resolution_relations if self.resolution_relations is not None else self.relations


@dataclass
class ValidationReport:
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


# ---------------------------------------------------------------------------
# parsing


def _tokenize_lincomb(text: str, line: int, col0: int):
    """Split into (sign, term_text, col) triples."""
    out = []
    sign = 1
    cur = ""
    cur_col = col0
    col = col0
    for ch in text:
        if ch in "+-":
            if cur.strip():
                out.append((sign, cur.strip(), cur_col))
                sign = 1 if ch == "+" else -1
            elif not out and not cur.strip():
                sign = sign if ch == "+" else -sign
            else:
                sign = 1 if ch == "+" else -1
            cur = ""
            cur_col = col + 1
        else:
            cur += ch
        col += 1
    if cur.strip():
        out.append((sign, cur.strip(), cur_col))
    elif not out:
        raise ParseError(line, col0, "empty linear combination")
    return out


_SCALAR_CHARS = set("0123456789/^*g")


def _looks_like_scalar(tok: str) -> bool:
    return tok[0].isdigit() or (set(tok) <= _SCALAR_CHARS and "g" in tok)


def _parse_term(sign, text, quiver, params, line, col):
    factors = [f.strip() for f in text.split("*")]
    if any(not f for f in factors):
        raise ParseError(line, col, f"malformed term {text!r}")
    scalar = None
    is_param = False
    if factors[0] in params:
        scalar = factors[0]
        is_param = True
        factors = factors[1:]
    elif _looks_like_scalar(factors[0]):
        scalar = factors[0]
        factors = factors[1:]
    if not factors:
        raise ParseError(line, col, "term with no path (paths need length >= 1)")
    path = []
    for f in factors:
        if f not in quiver.arrow_index:
            raise ParseError(line, col, f"unknown arrow label {f!r}")
        path.append(quiver.arrow_index[f])
    for a, b in zip(path, path[1:]):
        if quiver.target[a] != quiver.source[b]:
            raise ParseError(
                line,
                col,
                f"non-composable path {text!r}: target of "
                f"{quiver.arrows[a].label} is not the source of {quiver.arrows[b].label}",
            )
    return Term(sign, scalar, is_param, tuple(path), line, col)


def _parse_relation(text, quiver, params, line):
    if "=" not in text:
        raise ParseError(line, 1, "relation needs an '=' sign")
    lhs_text, rhs_text = text.split("=", 1)
    col_rhs = len(lhs_text) + 2
    terms = []
    for sign, tok, col in _tokenize_lincomb(lhs_text, line, 1):
        terms.append(_parse_term(sign, tok, quiver, params, line, col))
    rhs_text = rhs_text.strip()
    if rhs_text != "0":
        for sign, tok, col in _tokenize_lincomb(rhs_text, line, col_rhs):
            terms.append(_parse_term(-sign, tok, quiver, params, line, col))
    src = quiver.source[terms[0].path[0]]
    tgt = quiver.target[terms[0].path[-1]]
    for t in terms:
        s, g = quiver.source[t.path[0]], quiver.target[t.path[-1]]
        if (s, g) != (src, tgt):
            raise ParseError(
                line, t.col, "relation mixes terms with different source/target vertices"
            )
    return Relation(terms, line, (src, tgt))


def parse_presentation(text: str) -> Presentation:
    name = None
    params = []
    constraints = {}
    vertices = None
    arrows = []
    relations = []
    resolution = None
    section = None  # None | 'relations' | 'resolution'
    quiver = None

    def need_quiver(line):
        nonlocal quiver
        if quiver is None:
            if vertices is None:
                raise ParseError(line, 1, "vertices must be declared before this line")
            try:
                quiver = Quiver(vertices, arrows)
            except ValueError as e:
                raise ParseError(line, 1, str(e)) from None
        return quiver

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("algebra "):
            rest = stripped[len("algebra "):].strip()
            if " params " in rest:
                name_part, params_part = rest.split(" params ", 1)
                name = name_part.strip()
                params = [p.strip() for p in params_part.split(",")]
                if any(not p for p in params):
                    raise ParseError(lineno, 1, "empty parameter name")
            else:
                name = rest
            if not name:
                raise ParseError(lineno, 1, "algebra needs a name")
            section = None
        elif stripped.startswith("field-constraints:"):
            rest = stripped[len("field-constraints:"):].strip()
            if " not-in " not in rest:
                raise ParseError(lineno, 1, "expected '<param> not-in {..}'")
            pname, setpart = rest.split(" not-in ", 1)
            pname = pname.strip()
            if pname not in params:
                raise ParseError(lineno, 1, f"constraint on undeclared parameter {pname!r}")
            setpart = setpart.strip()
            if not (setpart.startswith("{") and setpart.endswith("}")):
                raise ParseError(lineno, 1, "excluded values must be written in braces")
            excluded = [v.strip() for v in setpart[1:-1].split(",") if v.strip()]
            try:
                constraints[pname] = frozenset(int(v) for v in excluded)
            except ValueError:
                raise ParseError(lineno, 1, "excluded values must be integers") from None
            section = None
        elif stripped.startswith("vertices:"):
            if vertices is not None:
                raise ParseError(lineno, 1, "vertices declared twice")
            vertices = [v.strip() for v in stripped[len("vertices:"):].split(",")]
            if any(not v for v in vertices):
                raise ParseError(lineno, 1, "empty vertex label")
            section = None
        elif stripped.startswith("arrow "):
            if quiver is not None:
                raise ParseError(lineno, 1, "arrows must come before relations")
            body = stripped[len("arrow "):]
            if ":" not in body or "->" not in body:
                raise ParseError(lineno, 1, "expected 'arrow <label>: <src> -> <tgt>'")
            label, ends = body.split(":", 1)
            src, tgt = ends.split("->", 1)
            arrows.append(Arrow(label.strip(), src.strip(), tgt.strip()))
        elif stripped == "relations:":
            need_quiver(lineno)
            section = "relations"
        elif stripped == "resolution-relations:":
            need_quiver(lineno)
            section = "resolution"
            resolution = []
        elif section in ("relations", "resolution"):
            q = need_quiver(lineno)
            rel = _parse_relation(stripped, q, params, lineno)
            (relations if section == "relations" else resolution).append(rel)
        else:
            raise ParseError(lineno, 1, f"unrecognized declaration {stripped!r}")

    if name is None:
        raise ParseError(1, 1, "missing 'algebra <name>' header")
    if vertices is None:
        raise ParseError(1, 1, "missing 'vertices:' declaration")
    if quiver is None:
        quiver = Quiver(vertices, arrows)
    return Presentation(name, quiver, relations, resolution, params, constraints)


def render_presentation(p: Presentation) -> str:
    lines = []
    header = f"algebra {p.name}"
    if p.params:
        header += " params " + ", ".join(p.params)
    lines.append(header)
    for pname, excluded in p.constraints.items():
        vals = ",".join(str(v) for v in sorted(excluded))
        lines.append(f"field-constraints: {pname} not-in {{{vals}}}")
    lines.append("vertices: " + ", ".join(p.quiver.vertices))
    for a in p.quiver.arrows:
        lines.append(f"arrow {a.label}: {a.source} -> {a.target}")
    lines.append("relations:")
    for r in p.relations:
        lines.append("  " + r.text(p.quiver))
    if p.resolution_relations is not None:
        lines.append("resolution-relations:")
        for r in p.resolution_relations:
            lines.append("  " + r.text(p.quiver))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# validation and binding


def validate(p: Presentation, field: Field, params: dict | None = None) -> ValidationReport:
    """Admissibility, endpoint uniformity and parameter constraints.

    Collects every violation instead of stopping at the first.
    """
    params = params or {}
    violations = []
    for name in p.params:
        if name not in params:
            violations.append(f"parameter {name!r} is not bound")
    for name, value in params.items():
        if name not in p.params:
            violations.append(f"binding for undeclared parameter {name!r}")
    for rel in p.relations + (p.resolution_relations or []):
        for t in rel.terms:
            if len(t.path) < 2:
                body = "*".join(p.quiver.arrows[a].label for a in t.path)
                violations.append(
                    f"line {t.line}: monomial {body!r} has length {len(t.path)} < 2 "
                    "(ideal not admissible)"
                )
        pairs = {
            (p.quiver.source[t.path[0]], p.quiver.target[t.path[-1]]) for t in rel.terms
        }
        if len(pairs) > 1:
            violations.append(f"line {rel.line}: relation mixes source/target pairs")
    for name, excluded in p.constraints.items():
        if name in params:
            try:
                value = field.coerce(params[name])
            except FieldError as e:
                violations.append(f"parameter {name!r}: {e}")
                continue
            for banned in excluded:
                if value == field.of_int(banned):
                    violations.append(
                        f"parameter {name!r} = {field.render(value)} violates "
                        f"not-in {{{','.join(str(b) for b in sorted(excluded))}}}"
                    )
    return ValidationReport(violations)


def bind_relation(rel: Relation, field: Field, params: dict) -> dict:
    """Relation as {path tuple: raw coefficient}, zero coefficients dropped."""
    out = {}
    for t in rel.terms:
        if t.scalar is None:
            c = field.one
        elif t.is_param:
            if t.scalar not in params:
                raise FieldError(f"parameter {t.scalar!r} is not bound")
            c = field.coerce(params[t.scalar])
        else:
            c = parse_scalar(field, t.scalar)
        if t.sign < 0:
            c = field.neg(c)
        prev = out.get(t.path)
        c = field.add(prev, c) if prev is not None else c
        if c == field.zero:
            out.pop(t.path, None)
        else:
            out[t.path] = c
    return out
