import pytest

from hochcalc.catalog import build_catalog_algebra
from hochcalc.fields import field_make, parse_field_spec
from hochcalc.hochschild import hochschild_report

_ALGEBRAS = {}
_REPORTS = {}


def built(name: str, field_text: str | None = None):
    """Session-cached catalog algebra; repeated builds dominate test time."""
    key = (name, field_text)
    if key not in _ALGEBRAS:
        field = field_make(parse_field_spec(field_text)) if field_text else None
        _ALGEBRAS[key] = build_catalog_algebra(name, field)
    return _ALGEBRAS[key]


def report(name: str, field_text: str | None = None):
    key = (name, field_text)
    if key not in _REPORTS:
        _REPORTS[key] = hochschild_report(built(name, field_text))
    return _REPORTS[key]


@pytest.fixture
def build_cached():
    return built


@pytest.fixture
def report_cached():
    return report
