from fractions import Fraction

import pytest

from src.errors import InputError
from src.masks import mask_values, parse_mask_file, parse_mask_text


def test_exact_coefficients():
    m = parse_mask_text("p 2\nn 2\na 0 1/2\na 3 1/2\n")
    assert m.is_exact
    assert [c.rational_value() for c in m.coefficients] == [Fraction(1, 2), 0, 0, Fraction(1, 2)]


def test_cyclotomic_coordinates():
    m = parse_mask_text("p 3\nn 1\na 0 1/3\na 1 1/3 1/3\na 2 -1/3\n")
    assert m.coefficients[1].coords == (Fraction(1, 3), Fraction(1, 3))


def test_values_form():
    m = parse_mask_text("p 2\nn 1\nv 0 1\n")
    assert [c.rational_value() for c in m.coefficients] == [Fraction(1, 2), Fraction(1, 2)]


def test_float_literals_switch_backend():
    m = parse_mask_text("p 2\nn 1\na 0 0.5\na 1 0.5\n", tolerance=1e-6)
    assert not m.is_exact
    assert m.tolerance == 1e-6
    assert [abs(v) for v in mask_values(m).values] == [1.0, 0.0]


@pytest.mark.parametrize(
    "text,line",
    [
        ("p 2\nn 1\na 0 1/2\nv 1 1\n", None),
        ("p 2\nn 1\na 0 1/2\na 0 1/2\n", 4),
        ("p 2\nn 1\na 2 1/2\n", 3),
        ("p 2\na 0 1\n", 2),
        ("p 2\nn 1\nq 0 1\n", 3),
        ("p 3\nn 1\na 0 1 2 3\n", 3),
        ("p 2\nn 1\na 0 x\n", 3),
        ("p 6\nn 1\n", 1),
        ("p 2\n", None),
    ],
)
def test_malformed_mask_files(text, line):
    with pytest.raises(InputError) as err:
        parse_mask_text(text)
    assert err.value.line == line


def test_parse_mask_file(data_dir):
    m = parse_mask_file(data_dir / "masks" / "haar.mask")
    assert (m.p, m.n) == (2, 1)
