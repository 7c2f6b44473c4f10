"""Built-in algebra presentations with expected-value records.

Presentations ship as `.qa` texts under data/, expectations as a JSON table
keyed by characteristic class ('2', '3', 'other').  A characteristic class
without recorded values means: no expectation, not a default of zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .engine import Algebra, build
from .fields import Field, FieldError, parse_field_spec, field_make, parse_scalar
from .hochschild import FreeBimoduleElement, resolution_data
from .presentation import Presentation, parse_presentation


class CatalogError(KeyError):
    pass


def _data_text(name: str) -> str:
    return resources.files("hochcalc.data").joinpath(name).read_text()


def _load_expectations() -> dict:
    return json.loads(_data_text("expectations.json"))


_EXPECTATIONS = None
_PRESENTATIONS: dict = {}


def _expectations() -> dict:
    global _EXPECTATIONS
    if _EXPECTATIONS is None:
        _EXPECTATIONS = _load_expectations()
    return _EXPECTATIONS


def catalog_names():
    return sorted(_expectations())


def char_class(characteristic: int) -> str:
    if characteristic == 2:
        return "2"
    if characteristic == 3:
        return "3"
    return "other"


@dataclass
class ExpectedRecord:
    name: str
    dim: int | None
    cartan: list | None
    center_dim: int | None
    nakayama: str | None
    hh: tuple | None
    intermediates: tuple | None
    symmetric_finite: str | None
    symmetric_infinite: str | None

    def expected_symmetric(self, field: Field) -> str | None:
        return self.symmetric_finite if field.size is not None else self.symmetric_infinite


def presentation_text(name: str) -> str:
    if name not in _expectations():
        raise CatalogError(f"unknown catalog algebra {name!r}")
    return _data_text(f"{name}.qa")


def get_presentation(name: str) -> Presentation:
    if name not in _PRESENTATIONS:
        _PRESENTATIONS[name] = parse_presentation(presentation_text(name))
    return _PRESENTATIONS[name]


def designated_fields(name: str):
    entry = _entry(name)
    return list(entry["designated_fields"])


def default_field(name: str) -> str:
    return _entry(name)["default_field"]


def _entry(name: str) -> dict:
    table = _expectations()
    if name not in table:
        raise CatalogError(f"unknown catalog algebra {name!r}")
    return table[name]


def default_params(name: str, field: Field) -> dict:
    entry = _entry(name)
    per_class = entry.get("default_params")
    if not per_class:
        return {}
    texts = per_class[char_class(field.characteristic)]
    out = {}
    for key, text in texts.items():
        try:
            out[key] = parse_scalar(field, text)
        except FieldError as e:
            raise CatalogError(
                f"{name} needs parameter {key!r} outside {{0,1}}, impossible over "
                f"{field.spec.describe()}: {e}"
            ) from None
    return out


def expected_record(name: str, characteristic: int) -> ExpectedRecord:
    entry = _entry(name)
    slice_ = entry.get("by_char", {}).get(char_class(characteristic), {})
    hh = slice_.get("hh")
    inter = slice_.get("intermediates")
    return ExpectedRecord(
        name=name,
        dim=entry.get("dim"),
        cartan=entry.get("cartan"),
        center_dim=entry.get("center_dim"),
        nakayama=entry.get("nakayama"),
        hh=tuple(hh) if hh is not None else None,
        intermediates=tuple(inter) if inter is not None else None,
        symmetric_finite=slice_.get("symmetric_finite"),
        symmetric_infinite=slice_.get("symmetric_infinite"),
    )


def expected_hh(name: str, characteristic: int):
    """The recorded (h0, h1, h2) for the characteristic class, or None."""
    return expected_record(name, characteristic).hh


def catalog_get(name: str, field: Field | None = None, params: dict | None = None):
    """(bound presentation, expectation record) for the given field."""
    if field is None:
        field = field_make(parse_field_spec(default_field(name)))
    presentation = get_presentation(name)
    bound = default_params(name, field)
    if params:
        bound.update({k: field.coerce(v) for k, v in params.items()})
    return presentation, field, bound, expected_record(name, field.characteristic)


def build_catalog_algebra(
    name: str, field: Field | None = None, params: dict | None = None, cap=None
) -> Algebra:
    presentation, field, bound, _ = catalog_get(name, field, params)
    return build(presentation, field, bound, cap=cap)


def omega3_generator_elements(name: str, algebra: Algebra):
    """The recorded third-syzygy generators, as elements of this algebra's P2."""
    entry = _entry(name)
    sets = entry.get("omega3_generators")
    if not sets:
        return []
    data = resolution_data(algebra)
    F = algebra.field
    q = algebra.quiver
    pair_to_summand = {}
    for s, pair in enumerate(data.p2.summands):
        if pair in pair_to_summand:
            raise CatalogError(f"{name}: repeated summand pair, generators are ambiguous")
        pair_to_summand[pair] = s

    def path_element(text: str, vertex: int):
        if not text:
            return {algebra.vertex_unit(vertex): F.one}
        path = tuple(q.arrow_index[lab] for lab in text.split("*"))
        return algebra.reduce_path(path).coeffs

    elements = []
    for terms in sets:
        vec = {}
        for coeff, left, (i_lab, j_lab), right in terms:
            i = q.vertex_index[str(i_lab)]
            j = q.vertex_index[str(j_lab)]
            s = pair_to_summand[(i, j)]
            c = F.of_int(coeff)
            gen = data.p2.generator(s)
            for u, cu in path_element(left, i).items():
                lvec = data.p2.act_left_word(u, gen)
                for v, cv in path_element(right, j).items():
                    rvec = data.p2.act_right_word(lvec, v)
                    scale = F.mul(c, F.mul(cu, cv))
                    for p, cc in rvec.items():
                        nv = F.add(vec.get(p, F.zero), F.mul(cc, scale))
                        if nv == F.zero:
                            vec.pop(p, None)
                        else:
                            vec[p] = nv
        elements.append(FreeBimoduleElement(data.p2, vec))
    return elements


def center_basis_texts(name: str):
    return _entry(name).get("center_basis")
