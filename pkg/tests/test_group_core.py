import itertools
import random
from fractions import Fraction

import pytest

from src.errors import DomainError, InputError, PrimeMismatchError
from src.group import (
    Point,
    add,
    as_prime,
    character,
    format_point,
    fraction_point,
    h_of_index,
    i_map,
    i_power,
    lambda_value,
    lemma41_classify,
    negate,
    parse_point,
    rho,
    shift,
    subtract,
    theta,
    truncate,
    walsh,
    walsh_dual,
)


def random_point(rng, p, low=-3, high=6):
    return Point.from_digits(p, {j: rng.randrange(p) for j in range(low, high + 1)})


def unit_point(rng, p, high=6):
    return random_point(rng, p, low=1, high=high)


def test_prime_validation():
    assert as_prime(5).value == 5
    with pytest.raises(InputError):
        as_prime(4)
    with pytest.raises(InputError):
        as_prime(1)


def test_add_is_carry_free():
    # 1.1 + 1.1 over p=2 is theta: digits add mod p with no carry
    x = parse_point("1.1", 2)
    assert add(x, x) == theta(2)
    y = parse_point("12.21", 3)
    assert format_point(add(y, parse_point("1.1", 3))) == "10.01"


def test_negate_and_subtract():
    rng = random.Random(7)
    for p in (2, 3, 5):
        for _ in range(50):
            x, y = random_point(rng, p), random_point(rng, p)
            assert add(x, negate(x)) == theta(p)
            assert add(subtract(x, y), y) == x


def test_mixed_primes_rejected():
    with pytest.raises(PrimeMismatchError):
        add(theta(2), theta(3))


def test_lambda_and_index_points():
    assert lambda_value(parse_point("10.01", 2)) == Fraction(9, 4)
    for alpha in range(40):
        assert lambda_value(h_of_index(3, alpha)) == alpha


def test_token_codec():
    for token in ("0.", "1.", "0.01", "21.102"):
        assert format_point(parse_point(token, 3)) == token
    with pytest.raises(InputError) as err:
        parse_point("0.2", 2)
    assert err.value.column == 3
    with pytest.raises(InputError):
        parse_point("01", 2)


def test_shift_moves_digits():
    x = parse_point("0.11", 2)
    assert format_point(shift(x, 1)) == "1.1"
    assert lambda_value(shift(x, 2)) == 4 * lambda_value(x)
    assert format_point(truncate(parse_point("1.011", 2), 2)) == "1.01"


def test_characters_are_bilinear():
    rng = random.Random(11)
    p = 3
    for _ in range(100):
        x, y, w = random_point(rng, p), random_point(rng, p), random_point(rng, p)
        assert character(add(x, y), w) == character(x, w) + character(y, w)
        assert character(x, add(w, y)) == character(x, w) + character(x, y)


def test_walsh_functions():
    # W*_1 on U* for p=2 is +1 on [0, 1/2) and -1 on [1/2, 1)
    assert walsh_dual(1, parse_point("0.01", 2)) == 0
    assert walsh_dual(1, parse_point("0.1", 2)) == 1
    assert walsh(1, parse_point("0.1", 2)) == 1
    assert walsh_dual(0, parse_point("0.111", 5)) == 0


def test_rho_is_idempotent_and_i_powers():
    rng = random.Random(2024)
    for _ in range(10_000):
        p = rng.choice((2, 3, 5))
        omega = random_point(rng, p)
        assert rho(rho(omega)) == rho(omega)
        unit = rho(omega)
        j = rng.randint(0, 4)
        assert i_power(unit, j) == rho(shift(unit, j))


def test_i_map_outside_unit_subgroup():
    with pytest.raises(DomainError):
        i_map(parse_point("1.1", 2))


@pytest.mark.parametrize("p", [2, 3])
def test_lemma41_trichotomy_exhaustive(p):
    points = [
        Point.from_digits(p, dict(zip(range(1, 5), digits)))
        for digits in itertools.product(range(p), repeat=4)
    ]
    for w1, w2 in itertools.product(points, repeat=2):
        case = lemma41_classify(w1, w2)
        same_image = i_map(w1) == i_map(w2)
        assert (case != "none") == same_image
        if case == "ii":
            assert w1 == w2
        if case == "i":
            assert (w1.digit(1) == 0) != (w2.digit(1) == 0)
        if case == "iii":
            assert w1.digit(1) and w2.digit(1)


def test_fraction_point():
    assert format_point(fraction_point(3, 2)) == "0.2"
    assert fraction_point(3, 3) == theta(3)


def test_add_is_associative_and_commutative():
    rng = random.Random(13)
    for p in (2, 3, 5):
        for _ in range(100):
            x, y, z = random_point(rng, p), random_point(rng, p), random_point(rng, p)
            assert add(x, y) == add(y, x)
            assert add(add(x, y), z) == add(x, add(y, z))
            assert add(x, theta(p)) == x


def test_character_moves_dilation_to_the_dual_side():
    rng = random.Random(17)
    for p in (2, 3, 5):
        for _ in range(100):
            x, w = random_point(rng, p), random_point(rng, p)
            k = rng.randint(-3, 3)
            assert character(shift(x, k), w) == character(x, shift(w, k))


def test_rho_ignores_lattice_translates():
    rng = random.Random(19)
    for p in (2, 3, 5):
        for _ in range(100):
            omega = random_point(rng, p)
            h = random_point(rng, p, low=-4, high=0)
            assert rho(add(omega, h)) == rho(omega)
            assert rho(subtract(omega, rho(omega))) == theta(p)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_index_points_round_trip(p):
    rng = random.Random(23 + p)
    for _ in range(500):
        alpha = rng.randrange(p ** 8)
        h = h_of_index(p, alpha)
        assert lambda_value(h) == alpha
        assert all(j <= 0 for j, _ in h.digits)
        assert parse_point(format_point(h), p) == h
