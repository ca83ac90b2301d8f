import math

from quantum.cvkit.output.formatters import (
    bool_output_formatter,
    complex_output_formatter,
    count_output_formatter,
    float_output_formatter,
)
from quantum.cvkit.output.types import Envelope, FieldSet, FieldSpec


def test_fieldspec_init():
    f = FieldSpec("key_foo")
    assert f.field_name == "key_foo"
    assert f.humanized_name == "Key Foo"
    assert f.alt_name == "key_foo"
    assert f.csv_headers() == ("key_foo",)

    f = FieldSpec("key_foo", "Foo")
    assert f.humanized_name == "Foo"
    assert f.alt_name == "key_foo"

    fs = FieldSet([f])
    assert fs["key_foo"] == f

    f = FieldSpec("key_foo", "Foo", alt_name="key_fuu")
    assert f.alt_name == "key_fuu"
    fs = FieldSet([f])
    assert fs["key_fuu"] == f


def test_fieldspec_humanized_names():
    assert FieldSpec("xi").humanized_name == "ξ"
    assert FieldSpec("p_ab").humanized_name == "P_ab"
    assert FieldSpec("is_fair").humanized_name == "Fair?"


def test_complex_field_occupies_two_csv_columns():
    f = FieldSpec("overlap", formatter=complex_output_formatter)
    assert f.csv_headers() == ("overlap_re", "overlap_im")
    assert complex_output_formatter.format_csv(0.5 - 1j, f) == ("0.5", "-1.0")
    assert complex_output_formatter.format_console(0.5 - 1j, f) == "0.5 - 1i"
    assert complex_output_formatter.format_json(0.5 - 1j, f) == [0.5, -1.0]


def test_scalar_formatters():
    f = FieldSpec("value")
    assert float_output_formatter.format_console(1 / 3, f) == "0.333333"
    assert float_output_formatter.format_console(math.nan, f) == "-"
    assert float_output_formatter.format_json(None, f) is None
    assert bool_output_formatter.format_console(True, f) == "yes"
    assert bool_output_formatter.format_csv(False, f) == ("0",)
    assert count_output_formatter.format_console(1234567, f) == "1,234,567"


def test_envelope_wrap():
    env = Envelope("tomo", "abc", 7)
    assert env.wrap([1, 2]) == {
        "verb": "tomo",
        "inputs_digest": "abc",
        "seed": 7,
        "result": [1, 2],
    }
