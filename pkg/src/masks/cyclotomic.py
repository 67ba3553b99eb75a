"""Exact arithmetic in the cyclotomic field Q(zeta_p)."""
from __future__ import annotations

import cmath
from fractions import Fraction
from functools import cached_property, total_ordering


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@total_ordering
class Cyclotomic:
    """An element sum_k c_k zeta^k over the basis zeta^0 .. zeta^(p-2).

    zeta^(p-1) is rewritten as -(1 + zeta + ... + zeta^(p-2)), so the
    coordinates are unique and equality is coordinate equality.  Ordering is
    only defined between real elements (as needed for |z|^2 comparisons).
    Rationals compare exactly; otherwise a float evaluation is trusted only
    when the field norm bounds the difference away from zero, and
    :meth:`sign` returns None when it cannot.
    """

    def __init__(self, p: int, coords) -> None:
        coords = tuple(_as_fraction(c) for c in coords)
        if len(coords) != p - 1:
            raise ValueError(f"expected {p - 1} coordinates for p={p}, got {len(coords)}")
        self._p = p
        self._coords = coords

    @property
    def p(self) -> int:
        return self._p

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return self._coords

    @classmethod
    def from_rational(cls, p: int, q) -> Cyclotomic:
        return cls(p, (_as_fraction(q),) + (Fraction(0),) * (p - 2))

    @classmethod
    def zero(cls, p: int) -> Cyclotomic:
        return cls.from_rational(p, 0)

    @classmethod
    def one(cls, p: int) -> Cyclotomic:
        return cls.from_rational(p, 1)

    @classmethod
    def from_powers(cls, p: int, powers) -> Cyclotomic:
        """sum of c * zeta^k over (k, c) pairs, any integer k."""
        full = [Fraction(0)] * p
        for k, c in powers:
            full[k % p] += _as_fraction(c)
        return cls._reduce(p, full)

    @classmethod
    def zeta_power(cls, p: int, k: int) -> Cyclotomic:
        return cls.from_powers(p, [(k, 1)])

    @classmethod
    def _reduce(cls, p: int, full) -> Cyclotomic:
        top = full[p - 1]
        return cls(p, [full[k] - top for k in range(p - 1)])

    def _full(self) -> list[Fraction]:
        return list(self._coords) + [Fraction(0)]

    def _coerce(self, other) -> Cyclotomic | None:
        if isinstance(other, Cyclotomic):
            if other.p != self._p:
                raise ValueError(f"cannot combine Q(zeta_{self._p}) with Q(zeta_{other.p})")
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclotomic.from_rational(self._p, other)
        return None

    def __repr__(self) -> str:
        return f"Cyclotomic({self._p}, {[str(c) for c in self._coords]})"

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self._coords):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(f"z^{k}")
            else:
                terms.append(f"{c}*z^{k}")
        return " + ".join(terms) if terms else "0"

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._coords == other.coords

    def __hash__(self) -> int:
        return hash((self._p, self._coords))

    def __lt__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        sign = (other - self).sign()
        if sign is None:
            raise ArithmeticError(f"cannot order {self} and {other} within float precision")
        return sign > 0

    def __add__(self, other) -> Cyclotomic:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Cyclotomic(self._p, [a + b for a, b in zip(self._coords, other.coords)])

    def __radd__(self, other) -> Cyclotomic:
        return self + other

    def __neg__(self) -> Cyclotomic:
        return Cyclotomic(self._p, [-c for c in self._coords])

    def __sub__(self, other) -> Cyclotomic:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Cyclotomic:
        return (-self) + other

    def __mul__(self, other) -> Cyclotomic:
        if isinstance(other, (int, Fraction)):
            q = _as_fraction(other)
            return Cyclotomic(self._p, [c * q for c in self._coords])
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        p = self._p
        full = [Fraction(0)] * p
        for i, a in enumerate(self._coords):
            if a == 0:
                continue
            for j, b in enumerate(other.coords):
                if b:
                    full[(i + j) % p] += a * b
        return Cyclotomic._reduce(p, full)

    def __rmul__(self, other) -> Cyclotomic:
        return self * other

    def __truediv__(self, other) -> Cyclotomic:
        if isinstance(other, (int, Fraction)):
            return self * (1 / _as_fraction(other))
        return NotImplemented

    def mul_zeta(self, k: int) -> Cyclotomic:
        full = self._full()
        p = self._p
        rotated = [Fraction(0)] * p
        for i, c in enumerate(full):
            rotated[(i + k) % p] += c
        return Cyclotomic._reduce(p, rotated)

    @cached_property
    def conj(self) -> Cyclotomic:
        p = self._p
        flipped = [Fraction(0)] * p
        for k, c in enumerate(self._full()):
            flipped[(-k) % p] += c
        return Cyclotomic._reduce(p, flipped)

    @cached_property
    def abs2(self) -> Cyclotomic:
        return self * self.conj

    def galois(self, k: int) -> Cyclotomic:
        """Image under the automorphism zeta -> zeta^k, k prime to p."""
        p = self._p
        moved = [Fraction(0)] * p
        for j, c in enumerate(self._full()):
            moved[(j * k) % p] += c
        return Cyclotomic._reduce(p, moved)

    def norm(self) -> Fraction:
        """Product of all Galois conjugates; a rational, zero only for zero."""
        out = Cyclotomic.one(self._p)
        for k in range(1, self._p):
            out = out * self.galois(k)
        return out.rational_value()

    def sign(self) -> int | None:
        """Sign of a real element.

        Every conjugate has modulus at most the sum of the absolute
        coordinates, so |x| >= |norm(x)| / size**(p-2); the float value is
        used only when its error is below that bound.
        """
        if self.is_rational():
            v = self.rational_value()
            return (v > 0) - (v < 0)
        size = sum((abs(c) for c in self._coords), Fraction(0))
        separation = abs(self.norm()) / size ** (self._p - 2)
        error = 1e-12 * self._p * float(size)
        if float(separation) <= 2 * error:
            return None
        return 1 if self.real > 0 else -1

    def is_zero(self) -> bool:
        return not any(self._coords)

    def is_rational(self) -> bool:
        return not any(self._coords[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._coords[0]

    def to_complex(self) -> complex:
        return sum(
            (float(c) * cmath.exp(2j * cmath.pi * k / self._p) for k, c in enumerate(self._coords)),
            0j,
        )

    @property
    def real(self) -> float:
        return self.to_complex().real
