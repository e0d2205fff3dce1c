import math
from fractions import Fraction

import pytest

from ascdesc.gq import GQ
from ascdesc.reporting import dumps, envelope, normalize


def test_float_rounding_to_twelve_digits():
    assert normalize(0.1234567890123456789) == 0.123456789012
    assert normalize(1.0) == 1.0


def test_infinities_become_strings():
    assert normalize(math.inf) == "inf"
    assert normalize(-math.inf) == "-inf"
    assert normalize(math.nan) == "nan"


def test_exact_scalars_use_the_text_grammar():
    assert normalize(GQ(Fraction(1, 2), Fraction(3, 4))) == "1/2+3/4i"
    assert normalize(Fraction(-2, 3)) == "-2/3"


def test_nested_structures_and_key_order():
    text = dumps({"b": [1, (2.5, GQ(1))], "a": {"z": None, "y": True}})
    assert text.index('"a"') < text.index('"b"')
    assert text.endswith("\n")


def test_envelope_embeds_tool_and_command():
    obj = envelope(["ascdesc", "analyze", "m.json"], {"asc": 1}, seed=7)
    assert obj["tool"] == "ascdesc" and obj["seed"] == 7
    assert obj["command"][1] == "analyze"


def test_unserializable_values_are_rejected():
    with pytest.raises(TypeError):
        normalize(object())
