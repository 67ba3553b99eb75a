"""Exact arithmetic on the Vilenkin group G and its dual G*.

Both groups are sequences of digits in {0, ..., p-1} indexed by positions in Z,
added coordinatewise modulo p.  Only finitely supported elements are values of
this module; everything else lives inside sets (see ``src.sets``).

Positions follow the ``(... w_-1 w_0 . w_1 w_2 ...)`` notation: positions <= 0
form the integer part, positions >= 1 the fractional part, so that

    lambda(x) = sum_j x_j * p**(-j)

is the value map onto the non-negative reals.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from src.errors import DomainError, InputError, PrimeMismatchError

DIGIT_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class Prime:
    value: int

    def __post_init__(self):
        if isinstance(self.value, bool) or not isinstance(self.value, int):
            raise InputError(f"prime must be an integer, got {self.value!r}")
        if not _is_prime(self.value):
            raise InputError(f"{self.value} is not a prime")

    def __int__(self):
        return self.value

    def __str__(self):
        return str(self.value)


def as_prime(p) -> Prime:
    return p if isinstance(p, Prime) else Prime(int(p))


@dataclass(frozen=True)
class RootOfUnityExponent:
    """The character value exp(2*pi*i*e/p), kept as the exponent e mod p."""

    e: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "e", self.e % self.p)

    def __int__(self):
        return self.e

    def __eq__(self, other):
        if isinstance(other, int):
            return self.e == other % self.p
        if isinstance(other, RootOfUnityExponent):
            return self.p == other.p and self.e == other.e
        return NotImplemented

    def __hash__(self):
        return hash((self.e, self.p))

    def __add__(self, other):
        other_e = other.e if isinstance(other, RootOfUnityExponent) else int(other)
        return RootOfUnityExponent(self.e + other_e, self.p)

    def to_complex(self) -> complex:
        return cmath.exp(2j * cmath.pi * self.e / self.p)


@dataclass(frozen=True)
class Point:
    """A finitely supported digit sequence.

    ``digits`` holds only the nonzero digits as sorted ``(position, digit)``
    pairs, so two points are equal exactly when they are structurally equal.
    The same type houses elements of G, G*, H and the annihilator of H; which
    group a point belongs to is decided by the caller.
    """

    prime: Prime
    digits: tuple[tuple[int, int], ...] = field(default=())

    @classmethod
    def from_digits(cls, p, mapping: Mapping[int, int] | Iterable[tuple[int, int]]) -> "Point":
        prime = as_prime(p)
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        clean = {}
        for position, digit in items:
            if not 0 <= digit < prime.value:
                raise InputError(f"digit {digit} at position {position} is out of range for p={prime}")
            if digit:
                clean[int(position)] = int(digit)
        return cls(prime, tuple(sorted(clean.items())))

    @classmethod
    def zero(cls, p) -> "Point":
        return cls(as_prime(p), ())

    @property
    def p(self) -> int:
        return self.prime.value

    def digit(self, position: int) -> int:
        for j, d in self.digits:
            if j == position:
                return d
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.digits)

    def is_zero(self) -> bool:
        return not self.digits

    def in_unit_subgroup(self) -> bool:
        """True when the point lies in U* (no digits at positions <= 0)."""
        return all(j >= 1 for j, _ in self.digits)

    def __str__(self):
        return format_point(self)


def _check_same_prime(x: Point, y: Point) -> None:
    if x.prime != y.prime:
        raise PrimeMismatchError(f"cannot combine points over p={x.prime} and p={y.prime}")


def theta(p) -> Point:
    return Point.zero(p)


def add(x: Point, y: Point) -> Point:
    _check_same_prime(x, y)
    p = x.p
    out = x.as_dict()
    for j, d in y.digits:
        out[j] = (out.get(j, 0) + d) % p
    return Point.from_digits(x.prime, out)


def negate(x: Point) -> Point:
    return Point.from_digits(x.prime, {j: x.p - d for j, d in x.digits})


def subtract(x: Point, y: Point) -> Point:
    return add(x, negate(y))


def lambda_value(x: Point) -> Fraction:
    p = x.p
    total = Fraction(0)
    for j, d in x.digits:
        total += d * Fraction(p) ** (-j)
    return total


def h_of_index(p, alpha: int) -> Point:
    """h_[alpha]: the element of H with lambda(h_[alpha]) = alpha.

    The same digits give omega_[alpha] on the dual side.
    """
    if alpha < 0:
        raise DomainError(f"index must be non-negative, got {alpha}")
    prime = as_prime(p)
    digits = {}
    position = 0
    while alpha:
        alpha, d = divmod(alpha, prime.value)
        digits[position] = d
        position -= 1
    return Point.from_digits(prime, digits)


omega_of_index = h_of_index


def fraction_point(p, sigma: int) -> Point:
    """The point 0.sigma: a single digit sigma at position 1."""
    return Point.from_digits(p, {1: sigma % int(p)})


def shift(x: Point, k: int) -> Point:
    """A^k on G (B^k on G*): (shift(x, 1))_j = x_{j+1}."""
    return Point(x.prime, tuple((j - k, d) for j, d in x.digits))


def truncate(x: Point, resolution: int) -> Point:
    """Drop every digit at a position greater than ``resolution``."""
    return Point(x.prime, tuple((j, d) for j, d in x.digits if j <= resolution))


def character(x: Point, omega: Point) -> RootOfUnityExponent:
    """chi(x, omega) as the exponent sum_j x_j * omega_{1-j} mod p."""
    _check_same_prime(x, omega)
    dual = omega.as_dict()
    e = sum(d * dual.get(1 - j, 0) for j, d in x.digits)
    return RootOfUnityExponent(e, x.p)


def walsh_dual(alpha: int, omega: Point) -> RootOfUnityExponent:
    """W*_alpha(omega) = chi(h_[alpha], omega)."""
    return character(h_of_index(omega.prime, alpha), omega)


def walsh(alpha: int, x: Point) -> RootOfUnityExponent:
    """W_alpha(x) = chi(x, omega_[alpha])."""
    return character(x, omega_of_index(x.prime, alpha))


def rho(omega: Point) -> Point:
    """Fractional part: drop the component lying in the annihilator of H."""
    return Point(omega.prime, tuple((j, d) for j, d in omega.digits if j >= 1))


def lattice_part(omega: Point) -> Point:
    """l(omega) with omega = rho(omega) + l(omega)."""
    return Point(omega.prime, tuple((j, d) for j, d in omega.digits if j <= 0))


def _require_unit(omega: Point, name: str = "omega") -> None:
    if not omega.in_unit_subgroup():
        raise DomainError(f"{name}={format_point(omega)} is not in U*")


def i_map(omega: Point) -> Point:
    """I(omega) = rho(B omega), defined on U* only."""
    _require_unit(omega)
    return rho(shift(omega, 1))


def i_power(omega: Point, j: int) -> Point:
    for _ in range(j):
        omega = i_map(omega)
    return omega


def lemma41_classify(omega1: Point, omega2: Point) -> str:
    """Which of the three cases of equal I-images holds: 'i', 'ii', 'iii' or 'none'.

    Case 'i' is returned for either order of the pair (one point in U*_1, the
    other outside it).
    """
    _check_same_prime(omega1, omega2)
    _require_unit(omega1, "omega1")
    _require_unit(omega2, "omega2")
    tail1 = tuple((j, d) for j, d in omega1.digits if j >= 2)
    tail2 = tuple((j, d) for j, d in omega2.digits if j >= 2)
    if tail1 != tail2:
        return "none"
    first_zero1 = omega1.digit(1) == 0
    first_zero2 = omega2.digit(1) == 0
    if first_zero1 and first_zero2:
        return "ii"
    if not first_zero1 and not first_zero2:
        return "iii"
    return "i"


# -- token codec -----------------------------------------------------------


def _digit_value(ch: str, p: int, column: int) -> int:
    value = DIGIT_CHARS.find(ch.lower())
    if value < 0:
        raise InputError(f"invalid digit character {ch!r}", column=column)
    if value >= p:
        raise InputError(f"digit {ch!r} is not below p={p}", column=column)
    return value


def split_token(token: str, p) -> tuple[dict[int, int], int, int]:
    """Parse a ``D.F`` token into (digits, fractional length, free integer positions).

    A run of ``*`` at the end of D marks free integer positions; it may only
    appear when F is empty.
    """
    prime = as_prime(p)
    if prime.value > len(DIGIT_CHARS):
        raise InputError(f"tokens support p <= {len(DIGIT_CHARS)}")
    if token.count(".") != 1:
        raise InputError(f"token {token!r} must contain exactly one '.'")
    whole, frac = token.split(".")
    stars = len(whole) - len(whole.rstrip("*"))
    whole = whole[: len(whole) - stars]
    if "*" in whole or "*" in frac:
        raise InputError(f"'*' may only end the integer part of {token!r}")
    if stars and frac:
        raise InputError(f"token {token!r} mixes free integer positions with fractional digits")
    digits = {}
    for offset, ch in enumerate(reversed(whole)):
        column = len(whole) - offset
        digits[-offset - stars] = _digit_value(ch, prime.value, column)
    for offset, ch in enumerate(frac):
        column = len(whole) + stars + 2 + offset
        digits[offset + 1] = _digit_value(ch, prime.value, column)
    return digits, len(frac), stars


def parse_point(token: str, p) -> Point:
    digits, _, stars = split_token(token, p)
    if stars:
        raise InputError(f"point token {token!r} cannot contain '*'")
    return Point.from_digits(p, digits)


def format_digits(x: Point, min_fraction: int = 0, stars: int = 0) -> str:
    lowest_integer = -stars
    integer = [(j, d) for j, d in x.digits if j <= lowest_integer]
    fraction_len = max([j for j, _ in x.digits if j >= 1] + [min_fraction])
    if integer:
        top = integer[0][0]
        whole = "".join(DIGIT_CHARS[x.digit(j)] for j in range(top, lowest_integer + 1))
    else:
        whole = "0"
    frac = "".join(DIGIT_CHARS[x.digit(j)] for j in range(1, fraction_len + 1))
    return f"{whole}{'*' * stars}.{frac}"


def format_point(x: Point) -> str:
    return format_digits(x)
