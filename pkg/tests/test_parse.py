import pytest
from gmpy2 import mpq
from hypothesis import given

from dhga.multivector import Multivector, format_mv
from dhga.parse import ParseError, parse_mv
from dhga.scalars import GaussQ
from strategies import multivectors


def test_sum_of_blades():
    assert parse_mv("e + e12", 3) == Multivector(3, {0: 1, 0b110: 1})


def test_rational_and_imaginary_coefficients():
    u = parse_mv("1/2*e0 - i e012", 3)
    assert u == Multivector(3, {0b1: mpq(1, 2), 0b111: GaussQ(0, -1)})
    assert parse_mv("(1/2-3i)e3", 3)[0b1000] == GaussQ(mpq(1, 2), -3)
    assert parse_mv("3/4i", 3)[0] == GaussQ(0, mpq(3, 4))


def test_blade_words_reorder():
    assert parse_mv("e21", 3) == parse_mv("-e12", 3)
    assert parse_mv("e0.1.2", 3) == parse_mv("e012", 3)


@pytest.mark.parametrize("text,pos", [("e1e2", 2), ("1/0 e1", 2), ("e + ", 4), ("e9", 0), ("(1+2)e", 4)])
def test_errors_report_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_mv(text, 3)
    assert info.value.pos == pos
    assert info.value.expected


def test_decimal_literal_goes_to_float_backend():
    u = parse_mv("0.5 - 0.5e12", 3)
    assert u.is_float
    assert u.allclose(parse_mv("1/2 - 1/2e12", 3))


@given(multivectors(4, complex_=True))
def test_print_parse_round_trip(u):
    assert parse_mv(format_mv(u), 4) == u


@given(multivectors(7, complex_=True))
def test_round_trip_with_dotted_indices(u):
    assert parse_mv(format_mv(u), 7) == u
