import pytest

from spinstab.exceptions import InputValidationError, ReportSchemaError
from spinstab.validation import (
    REQUIRED_KEYS,
    convert_histogram,
    parse_int_list,
    validate_characteristic,
    validate_group_args,
    validate_rep_tag,
    validate_schema,
)


def _minimal(schema):
    samples = {
        "group": {"type": "Spin", "n": 10}, "rep": "spin", "field": {"p": 2, "e": 1},
        "rng": {"seed": 0}, "trials": 4, "trials_run": 4, "min_dim": 29, "histogram": {"29": 4},
        "witness": "AA==", "target": 29, "passed": True, "seed": 0, "samples": 1, "gamma": {},
        "parts": {}, "command": "stab", "config": {}, "digests": {}, "version": "1.0.0",
        "started": "2026-01-01T00:00:00", "finished": "2026-01-01T00:00:01", "summary": {},
        "rows": [],
    }
    data = {key: samples[key] for key in REQUIRED_KEYS[schema] if key != "schema"}
    data["schema"] = schema
    return data


@pytest.mark.parametrize("schema", sorted(REQUIRED_KEYS))
def test_minimal_reports_are_valid(schema):
    assert validate_schema(_minimal(schema), schema)


def test_schema_taken_from_report():
    assert validate_schema(_minimal("spinstab.edtable/1"))


def test_unknown_schema():
    with pytest.raises(ReportSchemaError):
        validate_schema({"schema": "otro/1"})


def test_schema_mismatch():
    with pytest.raises(ReportSchemaError):
        validate_schema(_minimal("spinstab.edtable/1"), "spinstab.ledger/1")


def test_missing_keys_are_listed():
    data = _minimal("spinstab.stab/1")
    del data["histogram"]
    del data["witness"]
    with pytest.raises(ReportSchemaError) as info:
        validate_schema(data)
    assert info.value.details["claves_faltantes"] == ["histogram", "witness"]


def test_bool_is_not_an_integer():
    data = _minimal("spinstab.stab/1")
    data["trials"] = True
    with pytest.raises(ReportSchemaError) as info:
        validate_schema(data)
    assert info.value.details["tipos_invalidos"] == {"trials": "bool"}


def test_passed_may_be_null():
    data = _minimal("spinstab.stab/1")
    data["passed"] = None
    assert validate_schema(data)


def test_non_dict_report():
    with pytest.raises(ReportSchemaError):
        validate_schema([1, 2])


def test_convert_histogram():
    assert convert_histogram({"28": 3, "30": "1"}) == {28: 3, 30: 1}
    with pytest.raises(ReportSchemaError):
        convert_histogram({"x": 1})


@pytest.mark.parametrize("text, tag", [
    ("Half-Spin", "halfspin"),
    (" spin ", "spin"),
    ("vw", "vector+halfspin"),
    ("vector+half-spin", "vector+halfspin"),
])
def test_rep_tag_aliases(text, tag):
    assert validate_rep_tag(text) == tag


def test_unknown_rep_tag():
    with pytest.raises(InputValidationError):
        validate_rep_tag("adjoint")


def test_group_args():
    validate_group_args(10, "vector")
    validate_group_args(15, "spin")
    with pytest.raises(InputValidationError):
        validate_group_args(5, "spin")
    with pytest.raises(InputValidationError):
        validate_group_args(15, "halfspin")


def test_characteristic_must_be_prime():
    assert validate_characteristic(7) == 7
    with pytest.raises(InputValidationError):
        validate_characteristic(9)


def test_parse_int_list():
    assert parse_int_list("1, 1,0,-1") == [1, 1, 0, -1]
    assert parse_int_list("") == []
    with pytest.raises(InputValidationError):
        parse_int_list("1,x")
