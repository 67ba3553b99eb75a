import random
from fractions import Fraction

import pytest

from helpers import cset, random_set, refined_cells
from src.errors import InputError, PrimeMismatchError
from src.group import parse_point
from src.sets import (
    Cylinder,
    CylinderSet,
    Profile,
    annulus_split,
    complement_in,
    congruence_partition,
    contains,
    dilate,
    dual_cell,
    intersect,
    parse_cylinder,
    rho_profile,
    subtract,
    symmetric_difference,
    theta_neighbourhood,
    translate,
    union,
    unit_cylinder,
)


def test_cylinder_intervals():
    c = parse_cylinder("1.", 2)
    assert (c.lo, c.hi) == (1, 2)
    assert c.annulus() == 1
    c = parse_cylinder("0.01", 2)
    assert (c.lo, c.hi, c.measure) == (Fraction(1, 4), Fraction(1, 2), Fraction(1, 4))
    assert c.annulus() == -1
    assert parse_cylinder("0.", 3).annulus() is None
    wide = parse_cylinder("1*.", 2)
    assert (wide.resolution, wide.lo, wide.hi) == (-1, 2, 4)


def test_cylinder_token_round_trip():
    for token in ("0.", "1.", "0.01", "2.1", "1*."):
        assert parse_cylinder(token, 3).token() == token


def test_digit_out_of_range():
    with pytest.raises(InputError):
        parse_cylinder("0.2", 2)


def test_canonical_form_merges_siblings():
    s = cset(2, "0.0", "0.1")
    assert s.tokens() == ["0."]
    assert s == CylinderSet.unit(2)
    assert cset(3, "0.0", "0.1").tokens() == ["0.0", "0.1"]


def test_boolean_operations():
    a = cset(2, "0.")
    b = cset(2, "0.1", "1.")
    assert union(a, b).tokens() == ["0*."]
    assert intersect(a, b).tokens() == ["0.1"]
    assert subtract(a, b).tokens() == ["0.0"]
    assert symmetric_difference(a, b).tokens() == ["0.0", "1."]
    assert complement_in(b, a).tokens() == ["0.0"]
    assert contains(union(a, b), b)
    assert not contains(a, b)


def test_boolean_operations_against_cells():
    rng = random.Random(3)
    for _ in range(200):
        p = rng.choice((2, 3))
        a, b = random_set(rng, p, 3, 2), random_set(rng, p, 3, 2)
        k = 3
        ca, cb = refined_cells(a, k), refined_cells(b, k)
        assert refined_cells(union(a, b), k) == ca | cb
        assert refined_cells(intersect(a, b), k) == ca & cb
        assert refined_cells(subtract(a, b), k) == ca - cb
        assert union(a, b).measure == len(ca | cb) * Fraction(1, p ** k)


def test_mixed_primes_rejected():
    with pytest.raises(PrimeMismatchError):
        union(cset(2, "0."), cset(3, "0."))


def test_dilate_scales_measure():
    s = cset(3, "0.12", "2.")
    assert dilate(s, 2).measure == 9 * s.measure
    assert dilate(dilate(s, 2), -2) == s


def test_translate_by_fraction_point():
    s = cset(2, "0.0")
    assert translate(s, parse_point("0.1", 2)).tokens() == ["0.1"]
    assert translate(s, parse_point("1.", 2)).tokens() == ["1.0"]


def test_special_cylinders():
    assert unit_cylinder(2).token() == "0."
    assert theta_neighbourhood(2, 3).token() == "0.000"
    assert dual_cell(3, 2, 5).token() == "0.12"


def test_annulus_split():
    split = annulus_split(cset(2, "0.00", "0.1", "1.", "11."))
    assert split.meets_theta
    assert split.theta_part.tokens() == ["0.00"]
    assert {k: v.tokens() for k, v in split.parts.items()} == {0: ["0.1"], 1: ["1."], 2: ["11."]}


def test_congruence_partition_translates_into_unit():
    s = cset(3, "1.0", "2.1", "0.2")
    moved = [piece.translate(h) for piece, h in congruence_partition(s)]
    assert sorted(c.token() for c in moved) == ["0.0", "0.1", "0.2"]


def test_rho_profile_counts_preimages():
    profile = rho_profile(2, cset(2, "0.", "1.", "10.1").cylinders)
    assert profile.value_at(Fraction(1, 4)) == 2
    assert profile.value_at(Fraction(3, 4)) == 3
    wide = rho_profile(2, [parse_cylinder("1*.", 2)])
    assert wide == Profile.constant(2, 2)


def test_profile_translate_and_pull_back():
    p = 3
    f = Profile.from_weighted(p, [(Fraction(0), Fraction(1, 9), 1)])
    shifted = f.translate_fraction(1)
    assert shifted.value_at(Fraction(2, 3)) == 1
    assert shifted.value_at(Fraction(0)) == 0
    pulled = f.pull_back_i()
    assert [pulled.value_at(Fraction(d, 3)) for d in range(3)] == [1, 1, 1]
    assert pulled.integral() == f.integral()


def test_cell_averages():
    f = Profile.from_weighted(2, [(Fraction(0), Fraction(1, 4), 1)])
    assert f.cell_averages(1) == [Fraction(1, 2), 0]
    assert f.cell_averages(2) == [1, 0, 0, 0]


def test_negative_index_rejected():
    with pytest.raises(InputError):
        Cylinder(parse_point("0.", 2).prime, 0, -1)
