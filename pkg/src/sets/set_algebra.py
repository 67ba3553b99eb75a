"""Canonical algebra of cylinder sets in G*.

Under lambda* a cylinder of resolution N is the p-adic interval
[m p^-N, (m+1) p^-N) with m = lambda*(anchor) p^N, and the map is measure
preserving.  Boolean operations therefore run as exact breakpoint sweeps over
``Fraction`` endpoints; the result is decomposed back into maximal cylinders,
which is the same as merging complete sibling groups until none is left.
"""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Iterator, Sequence

from src.errors import InputError, PrimeMismatchError
from src.group.group_core import (
    Point,
    Prime,
    add,
    as_prime,
    format_digits,
    h_of_index,
    lambda_value,
    lattice_part,
    negate,
    shift,
    split_token,
    truncate,
)

logger = logging.getLogger(__name__)


def _digit_count(m: int, p: int) -> int:
    count = 0
    while m:
        m //= p
        count += 1
    return count


@dataclass(frozen=True)
class Cylinder:
    """All omega agreeing with the anchor on every position <= resolution."""

    prime: Prime
    resolution: int
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise InputError(f"cylinder index must be non-negative, got {self.index}")

    @classmethod
    def from_anchor(cls, anchor: Point, resolution: int) -> "Cylinder":
        if any(j > resolution for j, _ in anchor.digits):
            raise InputError(f"anchor {anchor} has digits beyond resolution {resolution}")
        index = lambda_value(anchor) * Fraction(anchor.p) ** resolution
        return cls(anchor.prime, resolution, int(index))

    @property
    def p(self) -> int:
        return self.prime.value

    @cached_property
    def anchor(self) -> Point:
        return shift(h_of_index(self.prime, self.index), -self.resolution)

    @property
    def measure(self) -> Fraction:
        return Fraction(self.p) ** (-self.resolution)

    @property
    def lo(self) -> Fraction:
        return self.index * self.measure

    @property
    def hi(self) -> Fraction:
        return (self.index + 1) * self.measure

    @property
    def contains_theta(self) -> bool:
        return self.index == 0

    def parent(self) -> "Cylinder":
        return Cylinder(self.prime, self.resolution - 1, self.index // self.p)

    def children(self) -> list["Cylinder"]:
        return [Cylinder(self.prime, self.resolution + 1, self.index * self.p + d) for d in range(self.p)]

    def refine(self, resolution: int) -> list["Cylinder"]:
        if resolution < self.resolution:
            raise ValueError(f"cannot refine resolution {self.resolution} down to {resolution}")
        k = self.p ** (resolution - self.resolution)
        return [Cylinder(self.prime, resolution, self.index * k + t) for t in range(k)]

    def contains(self, other: "Cylinder") -> bool:
        if other.prime != self.prime or other.resolution < self.resolution:
            return False
        return other.index // self.p ** (other.resolution - self.resolution) == self.index

    def annulus(self) -> int | None:
        """The k with the cylinder inside D_k = B^k U* minus B^(k-1) U*; None if it holds theta."""
        if self.index == 0:
            return None
        return _digit_count(self.index, self.p) - self.resolution

    def rho_image(self) -> "Cylinder":
        """Image under rho; for negative resolution the image is U* with multiplicity."""
        if self.resolution < 0:
            return Cylinder(self.prime, 0, 0)
        return Cylinder(self.prime, self.resolution, self.index % self.p ** self.resolution)

    def rho_multiplicity(self) -> int:
        return self.p ** (-self.resolution) if self.resolution < 0 else 1

    def dilate(self, k: int) -> "Cylinder":
        return Cylinder(self.prime, self.resolution - k, self.index)

    def translate(self, t: Point) -> "Cylinder":
        moved = add(self.anchor, truncate(t, self.resolution))
        return Cylinder.from_anchor(moved, self.resolution)

    def token(self) -> str:
        return format_digits(self.anchor, min_fraction=max(self.resolution, 0), stars=max(-self.resolution, 0))

    def sort_key(self):
        return (self.lo, self.resolution)

    def __str__(self):
        return self.token()


def parse_cylinder(token: str, p) -> Cylinder:
    """Cylinder from a ``D.F`` token; the resolution is the fractional length (or minus the '*' run)."""
    prime = as_prime(p)
    digits, frac_len, stars = split_token(token, prime)
    resolution = -stars if stars else frac_len
    return Cylinder.from_anchor(Point.from_digits(prime, digits), resolution)


def unit_cylinder(p) -> Cylinder:
    return Cylinder(as_prime(p), 0, 0)


def theta_neighbourhood(p, resolution: int) -> Cylinder:
    """U*_N: the cylinder of all points with no digits at positions <= N."""
    return Cylinder(as_prime(p), resolution, 0)


def dual_cell(p, n: int, s: int) -> Cylinder:
    """U*_{n,s} = B^-n omega_[s] + B^-n U*."""
    return Cylinder.from_anchor(shift(h_of_index(p, s), -n), n)


# -- interval plumbing ----------------------------------------------------


def _fit_resolution(length: Fraction, p: int) -> int:
    """Smallest N with p**-N <= length."""
    n = 0
    size = Fraction(1)
    if size <= length:
        while size * p <= length:
            size *= p
            n -= 1
    else:
        while size > length:
            size /= p
            n += 1
    return n


def _alignment(x: Fraction, p: int) -> int | None:
    """Smallest N with x * p**N an integer (None for x == 0)."""
    if x == 0:
        return None
    num, den = x.numerator, x.denominator
    e = 0
    while den % p == 0:
        den //= p
        e += 1
    if den != 1:
        raise ValueError(f"{x} is not a p-adic rational for p={p}")
    while num % p == 0:
        num //= p
        e -= 1
    return e


def _decompose(lo: Fraction, hi: Fraction, prime: Prime) -> list[Cylinder]:
    p = prime.value
    out = []
    x = lo
    while x < hi:
        n = _fit_resolution(hi - x, p)
        aligned = _alignment(x, p)
        if aligned is not None:
            n = max(n, aligned)
        size = Fraction(p) ** (-n)
        out.append(Cylinder(prime, n, int(x / size)))
        x += size
    return out


def _merge_siblings(cylinders: Iterable[Cylinder], p: int) -> list[Cylinder]:
    current = set(cylinders)
    changed = True
    while changed:
        changed = False
        groups = defaultdict(set)
        for c in current:
            groups[c.parent()].add(c)
        for parent, kids in groups.items():
            if len(kids) == p:
                current -= kids
                current.add(parent)
                changed = True
    return sorted(current, key=Cylinder.sort_key)


def _merge_intervals(intervals: Iterable[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    merged: list[tuple[Fraction, Fraction]] = []
    for lo, hi in sorted(intervals):
        if lo >= hi:
            continue
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return merged


def _sweep(a: Sequence[tuple], b: Sequence[tuple], keep: Callable[[bool, bool], bool]) -> list[tuple]:
    points = sorted({x for iv in a for x in iv} | {x for iv in b for x in iv})
    out: list[tuple[Fraction, Fraction]] = []
    ia = ib = 0
    for lo, hi in zip(points, points[1:]):
        while ia < len(a) and a[ia][1] <= lo:
            ia += 1
        while ib < len(b) and b[ib][1] <= lo:
            ib += 1
        in_a = ia < len(a) and a[ia][0] <= lo
        in_b = ib < len(b) and b[ib][0] <= lo
        if keep(in_a, in_b):
            if out and out[-1][1] == lo:
                out[-1] = (out[-1][0], hi)
            else:
                out.append((lo, hi))
    return out


# -- cylinder sets ----------------------------------------------------------


@dataclass(frozen=True)
class CylinderSet:
    """A finite disjoint union of cylinders in canonical (maximal-cylinder) form.

    Build instances with :meth:`of` or :meth:`from_intervals`; the raw
    constructor assumes its tuple is already canonical.
    """

    prime: Prime
    cylinders: tuple[Cylinder, ...] = ()

    @classmethod
    def of(cls, p, cylinders: Iterable[Cylinder] = ()) -> "CylinderSet":
        prime = as_prime(p)
        cylinders = list(cylinders)
        for c in cylinders:
            if c.prime != prime:
                raise PrimeMismatchError(f"cylinder {c} is over p={c.prime}, expected p={prime}")
        return cls.from_intervals(prime, [(c.lo, c.hi) for c in cylinders])

    @classmethod
    def from_intervals(cls, p, intervals: Iterable[tuple[Fraction, Fraction]]) -> "CylinderSet":
        prime = as_prime(p)
        pieces = []
        for lo, hi in _merge_intervals((Fraction(lo), Fraction(hi)) for lo, hi in intervals):
            pieces.extend(_decompose(lo, hi, prime))
        return cls(prime, tuple(_merge_siblings(pieces, prime.value)))

    @classmethod
    def from_tokens(cls, p, tokens: Iterable[str]) -> "CylinderSet":
        return cls.of(p, [parse_cylinder(t, p) for t in tokens])

    @classmethod
    def empty(cls, p) -> "CylinderSet":
        return cls(as_prime(p), ())

    @classmethod
    def unit(cls, p) -> "CylinderSet":
        return cls(as_prime(p), (unit_cylinder(p),))

    @property
    def p(self) -> int:
        return self.prime.value

    @cached_property
    def intervals(self) -> tuple[tuple[Fraction, Fraction], ...]:
        return tuple(_merge_intervals((c.lo, c.hi) for c in self.cylinders))

    @property
    def measure(self) -> Fraction:
        return sum((c.measure for c in self.cylinders), Fraction(0))

    @property
    def contains_theta(self) -> bool:
        return any(c.contains_theta for c in self.cylinders)

    def is_empty(self) -> bool:
        return not self.cylinders

    def finest_resolution(self) -> int | None:
        return max((c.resolution for c in self.cylinders), default=None)

    def tokens(self) -> list[str]:
        return [c.token() for c in self.cylinders]

    def __iter__(self) -> Iterator[Cylinder]:
        return iter(self.cylinders)

    def __len__(self):
        return len(self.cylinders)

    def __str__(self):
        if not self.cylinders:
            return "{}"
        return "{" + ", ".join(self.tokens()) + "}"


def _same_prime(a: CylinderSet, b: CylinderSet) -> Prime:
    if a.prime != b.prime:
        raise PrimeMismatchError(f"cannot combine sets over p={a.prime} and p={b.prime}")
    return a.prime


def _boolean(a: CylinderSet, b: CylinderSet, keep) -> CylinderSet:
    prime = _same_prime(a, b)
    return CylinderSet.from_intervals(prime, _sweep(a.intervals, b.intervals, keep))


def union(a: CylinderSet, b: CylinderSet) -> CylinderSet:
    return _boolean(a, b, lambda x, y: x or y)


def intersect(a: CylinderSet, b: CylinderSet) -> CylinderSet:
    return _boolean(a, b, lambda x, y: x and y)


def subtract(a: CylinderSet, b: CylinderSet) -> CylinderSet:
    return _boolean(a, b, lambda x, y: x and not y)


def symmetric_difference(a: CylinderSet, b: CylinderSet) -> CylinderSet:
    return _boolean(a, b, lambda x, y: x != y)


def union_all(p, sets: Iterable[CylinderSet]) -> CylinderSet:
    prime = as_prime(p)
    intervals = []
    for s in sets:
        if s.prime != prime:
            raise PrimeMismatchError(f"cannot combine sets over p={s.prime} and p={prime}")
        intervals.extend(s.intervals)
    return CylinderSet.from_intervals(prime, intervals)


def contains(outer: CylinderSet, inner: CylinderSet) -> bool:
    return subtract(inner, outer).is_empty()


def complement_in(s: CylinderSet, region: CylinderSet) -> CylinderSet:
    return subtract(region, s)


def translate(s: CylinderSet, t: Point) -> CylinderSet:
    if t.prime != s.prime:
        raise PrimeMismatchError(f"cannot translate a p={s.prime} set by a p={t.prime} point")
    return CylinderSet.of(s.prime, (c.translate(t) for c in s.cylinders))


def dilate(s: CylinderSet, k: int) -> CylinderSet:
    """B^k s; maximal cylinders stay maximal, so no renormalization is needed."""
    return CylinderSet(s.prime, tuple(c.dilate(k) for c in s.cylinders))


def measure(s: CylinderSet) -> Fraction:
    return s.measure


@dataclass(frozen=True)
class AnnulusSplit:
    parts: dict
    theta_part: CylinderSet

    @property
    def meets_theta(self) -> bool:
        return not self.theta_part.is_empty()


def annulus_split(s: CylinderSet) -> AnnulusSplit:
    """Split s along the annuli D_k; cylinders holding theta are set apart."""
    buckets: dict[int, list[Cylinder]] = defaultdict(list)
    theta_cylinders = []
    for c in s.cylinders:
        k = c.annulus()
        if k is None:
            theta_cylinders.append(c)
        else:
            buckets[k].append(c)
    parts = {k: CylinderSet(s.prime, tuple(v)) for k, v in sorted(buckets.items())}
    if theta_cylinders:
        logger.debug("set %s meets every annulus near theta", s)
    return AnnulusSplit(parts=parts, theta_part=CylinderSet(s.prime, tuple(theta_cylinders)))


def congruence_partition(s: CylinderSet) -> list[tuple[Cylinder, Point]]:
    """Pieces E with their translation h in the annihilator of H, so that E + h = rho(E).

    Cylinders of negative resolution are refined to resolution 0 first.
    """
    out = []
    for c in s.cylinders:
        for piece in (c.refine(0) if c.resolution < 0 else [c]):
            out.append((piece, negate(lattice_part(piece.anchor))))
    return out


# -- step functions on U* ----------------------------------------------------


@dataclass(frozen=True)
class Profile:
    """A step function on U* in lambda* coordinates.

    ``pieces`` are contiguous ``(lo, hi, value)`` triples covering [0, 1) with
    adjacent equal values merged, so equality of profiles is structural.
    """

    prime: Prime
    pieces: tuple[tuple[Fraction, Fraction, object], ...]

    @classmethod
    def constant(cls, p, value) -> "Profile":
        return cls(as_prime(p), ((Fraction(0), Fraction(1), value),))

    @classmethod
    def from_weighted(cls, p, weighted: Iterable[tuple[Fraction, Fraction, object]]) -> "Profile":
        """Sum of weighted indicator functions of intervals inside [0, 1)."""
        events: dict[Fraction, object] = defaultdict(int)
        for lo, hi, w in weighted:
            events[Fraction(lo)] += w
            events[Fraction(hi)] -= w
        events.setdefault(Fraction(0), 0)
        events.setdefault(Fraction(1), 0)
        points = sorted(events)
        pieces = []
        level = 0
        for lo, hi in zip(points, points[1:]):
            level += events[lo]
            pieces.append((lo, hi, level))
        return cls(as_prime(p), _merge_pieces(pieces))

    @property
    def p(self) -> int:
        return self.prime.value

    def breakpoints(self) -> list[Fraction]:
        return [lo for lo, _, _ in self.pieces] + [Fraction(1)]

    def combine(self, other: "Profile", fn) -> "Profile":
        points = sorted(set(self.breakpoints()) | set(other.breakpoints()))
        out = []
        i = j = 0
        for lo, hi in zip(points, points[1:]):
            while self.pieces[i][1] <= lo:
                i += 1
            while other.pieces[j][1] <= lo:
                j += 1
            out.append((lo, hi, fn(self.pieces[i][2], other.pieces[j][2])))
        return Profile(self.prime, _merge_pieces(out))

    def __add__(self, other: "Profile") -> "Profile":
        return self.combine(other, lambda x, y: x + y)

    def map(self, fn) -> "Profile":
        return Profile(self.prime, _merge_pieces([(lo, hi, fn(v)) for lo, hi, v in self.pieces]))

    def translate_fraction(self, sigma: int) -> "Profile":
        """omega -> f(omega + 0.sigma): permutes the p first-level blocks."""
        p = self.p
        out = []
        for d in range(p):
            e = (d + sigma) % p
            offset = Fraction(d - e, p)
            block_lo, block_hi = Fraction(e, p), Fraction(e + 1, p)
            for lo, hi, v in self.pieces:
                lo, hi = max(lo, block_lo), min(hi, block_hi)
                if lo < hi:
                    out.append((lo + offset, hi + offset, v))
        out.sort(key=lambda t: t[0])
        return Profile(self.prime, _merge_pieces(out))

    def pull_back_i(self) -> "Profile":
        """omega -> f(I(omega)) = f(rho(B omega))."""
        p = self.p
        out = []
        for d in range(p):
            for lo, hi, v in self.pieces:
                out.append(((lo + d) / p, (hi + d) / p, v))
        out.sort(key=lambda t: t[0])
        return Profile(self.prime, _merge_pieces(out))

    def value_at(self, x: Fraction):
        for lo, hi, v in self.pieces:
            if lo <= x < hi:
                return v
        raise ValueError(f"{x} is outside [0, 1)")

    def minimum(self):
        return min(v for _, _, v in self.pieces)

    def maximum(self):
        return max(v for _, _, v in self.pieces)

    def integral(self) -> Fraction:
        return sum(((hi - lo) * v for lo, hi, v in self.pieces), Fraction(0))

    def mismatch(self, other: "Profile") -> list[tuple[Fraction, Fraction, object, object]]:
        """Intervals where the two profiles disagree, with both values."""
        points = sorted(set(self.breakpoints()) | set(other.breakpoints()))
        out = []
        i = j = 0
        for lo, hi in zip(points, points[1:]):
            while self.pieces[i][1] <= lo:
                i += 1
            while other.pieces[j][1] <= lo:
                j += 1
            a, b = self.pieces[i][2], other.pieces[j][2]
            if a != b:
                if out and out[-1][1] == lo and out[-1][2] == a and out[-1][3] == b:
                    out[-1] = (out[-1][0], hi, a, b)
                else:
                    out.append((lo, hi, a, b))
        return out

    def cell_averages(self, resolution: int) -> list[Fraction]:
        """Mean value on each resolution-K cell of U*; exact integers where the cell is resolved."""
        p = self.p
        size = Fraction(1, p ** resolution)
        out = []
        i = 0
        for cell in range(p ** resolution):
            lo, hi = cell * size, (cell + 1) * size
            total = Fraction(0)
            while self.pieces[i][1] <= lo:
                i += 1
            k = i
            while k < len(self.pieces) and self.pieces[k][0] < hi:
                a, b, v = self.pieces[k]
                total += (min(b, hi) - max(a, lo)) * v
                k += 1
            out.append(total / size)
        return out


def _merge_pieces(pieces: Sequence[tuple[Fraction, Fraction, object]]) -> tuple:
    merged: list[tuple[Fraction, Fraction, object]] = []
    for lo, hi, v in pieces:
        if lo >= hi:
            continue
        if merged and merged[-1][2] == v and merged[-1][1] == lo:
            merged[-1] = (merged[-1][0], hi, v)
        else:
            merged.append((lo, hi, v))
    return tuple(merged)


def mismatch_measure(rows) -> Fraction:
    return sum((hi - lo for lo, hi, *_ in rows), Fraction(0))


def rho_profile(p, cylinders: Iterable[Cylinder]) -> Profile:
    """Multiplicity of the rho-fold: value at omega counts preimages of omega in the cylinders."""
    weighted = []
    for c in cylinders:
        image = c.rho_image()
        weighted.append((image.lo, image.hi, c.rho_multiplicity()))
    return Profile.from_weighted(p, weighted)
