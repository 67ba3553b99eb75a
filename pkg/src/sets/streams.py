"""Sets with infinite descriptions: tail families and piece streams.

A :class:`PieceStream` is a finite cylinder set plus any number of tail
families (and optionally a generator procedure).  Its pieces are pairwise
disjoint, its total measure is known in closed form, and ``enumerate(J)``
returns the union of every piece with index <= J together with the exact
measure still missing.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from src.errors import InputError, OverlapError, PrimeMismatchError
from src.group.group_core import Point, Prime, format_point
from src.sets.set_algebra import CylinderSet, dilate, intersect, translate, union_all

logger = logging.getLogger(__name__)

DEFAULT_DEPTH = 24
DEFAULT_MAX_CELLS = 1 << 20


@dataclass(frozen=True)
class TailFamily:
    """The disjoint union over j >= start of B^(-j*ratio)(body) + anchor."""

    ratio: int
    anchor: Point
    body: CylinderSet
    start: int = 0

    def __post_init__(self):
        if self.ratio < 1:
            raise InputError(f"tail ratio must be >= 1, got {self.ratio}")
        if self.start < 0:
            raise InputError(f"tail start must be >= 0, got {self.start}")
        if any(j > 0 for j, _ in self.anchor.digits):
            raise InputError(f"tail anchor {format_point(self.anchor)} must have no fractional digits")
        if self.anchor.prime != self.body.prime:
            raise PrimeMismatchError("tail anchor and body use different primes")

    @property
    def prime(self) -> Prime:
        return self.body.prime

    def piece(self, j: int) -> CylinderSet:
        return translate(dilate(self.body, -j * self.ratio), self.anchor)

    def piece_measure(self, j: int) -> Fraction:
        return self.body.measure * Fraction(self.body.p) ** (-j * self.ratio)

    @property
    def total_measure(self) -> Fraction:
        q = Fraction(self.body.p) ** (-self.ratio)
        return self.body.measure * q ** self.start / (1 - q)

    def partial_measure(self, depth: int) -> Fraction:
        if depth < self.start:
            return Fraction(0)
        q = Fraction(self.body.p) ** (-self.ratio)
        count = depth - self.start + 1
        return self.body.measure * q ** self.start * (1 - q ** count) / (1 - q)

    def span(self) -> int | None:
        """Annulus span of the body; None when the body holds theta."""
        annuli = [c.annulus() for c in self.body.cylinders]
        if any(k is None for k in annuli):
            return None
        if not annuli:
            return 0
        return max(annuli) - min(annuli)

    def find_self_overlap(self) -> tuple[int, CylinderSet] | None:
        """First lag d with body meeting B^(-d*ratio) body.

        Pieces j and j + d overlap exactly when the body meets its own
        B^(-d*ratio) dilate, and lags beyond span/ratio move the body into
        disjoint annuli, so checking lags 1..span/ratio decides all of them.
        """
        if self.body.is_empty():
            return None
        span = self.span()
        if span is None:
            return 1, intersect(self.body, dilate(self.body, -self.ratio))
        for d in range(1, span // self.ratio + 1):
            common = intersect(self.body, dilate(self.body, -d * self.ratio))
            if not common.is_empty():
                return d, common
        return None


@dataclass(frozen=True)
class GeneratedSource:
    """Pieces produced by a procedure ``piece(j)`` for j >= start.

    ``tail_bound(J)`` must bound the measure of all pieces with index > J;
    ``total`` is the exact total measure when known.
    """

    piece: Callable[[int], CylinderSet]
    tail_bound: Callable[[int], Fraction]
    start: int = 1
    total: Fraction | None = None


@dataclass(frozen=True)
class PieceStream:
    prime: Prime
    finite: CylinderSet
    families: tuple[TailFamily, ...] = ()
    generator: GeneratedSource | None = None

    @classmethod
    def of(cls, s: "CylinderSet | PieceStream") -> "PieceStream":
        if isinstance(s, PieceStream):
            return s
        return cls(s.prime, s)

    @property
    def p(self) -> int:
        return self.prime.value

    def is_finite(self) -> bool:
        return not self.families and self.generator is None

    @property
    def total_measure(self) -> Fraction | None:
        total = self.finite.measure + sum((f.total_measure for f in self.families), Fraction(0))
        if self.generator is not None:
            if self.generator.total is None:
                return None
            total += self.generator.total
        return total

    def pieces(self, depth: int) -> list[tuple[str, CylinderSet]]:
        """Labelled pieces with index <= depth, in a fixed order."""
        out = []
        if not self.finite.is_empty():
            out.append(("finite", self.finite))
        for i, family in enumerate(self.families):
            for j in range(family.start, depth + 1):
                out.append((f"tail[{i}] j={j}", family.piece(j)))
        if self.generator is not None:
            for j in range(self.generator.start, depth + 1):
                out.append((f"generated j={j}", self.generator.piece(j)))
        return out

    def enumerate(self, depth: int = DEFAULT_DEPTH) -> tuple[CylinderSet, Fraction]:
        if depth < 0:
            raise InputError(f"depth must be >= 0, got {depth}")
        covered = union_all(self.prime, (s for _, s in self.pieces(depth)))
        if self.generator is not None:
            tail = self.generator.tail_bound(depth)
            for family in self.families:
                tail += family.total_measure - family.partial_measure(depth)
        else:
            tail = self.total_measure - covered.measure
        logger.debug("enumerated %d cylinders to depth %d, tail %s", len(covered), depth, tail)
        return covered, tail

    def find_overlap(self, depth: int) -> tuple[str, str, CylinderSet] | None:
        """First pair of enumerated pieces meeting in positive measure."""
        for i, family in enumerate(self.families):
            hit = family.find_self_overlap()
            if hit is not None:
                lag, common = hit
                j = family.start
                return f"tail[{i}] j={j}", f"tail[{i}] j={j + lag}", common
        labelled = self.pieces(depth)
        seen: list[tuple[str, CylinderSet]] = []
        for label, piece in labelled:
            for other_label, other in seen:
                if other_label.split(" ")[0] == label.split(" ")[0] and label.startswith("tail"):
                    continue
                common = intersect(piece, other)
                if not common.is_empty():
                    return other_label, label, common
            seen.append((label, piece))
        return None

    def validate(self, depth: int) -> None:
        hit = self.find_overlap(depth)
        if hit is not None:
            first, second, common = hit
            raise OverlapError(
                f"pieces {first} and {second} overlap on {common}",
                first=first,
                second=second,
            )


def as_stream(s) -> PieceStream:
    return PieceStream.of(s)


def measure(s) -> Fraction | None:
    """Exact measure of a cylinder set or the closed-form total of a stream."""
    if isinstance(s, CylinderSet):
        return s.measure
    return s.total_measure


def stream_enumerate(s, depth: int = DEFAULT_DEPTH) -> tuple[CylinderSet, Fraction]:
    return as_stream(s).enumerate(depth)


def lemma_stream(omega: CylinderSet, start: int = 1) -> PieceStream:
    """The stream of pieces B^-j omega, j >= start."""
    family = TailFamily(ratio=1, anchor=Point.zero(omega.prime), body=omega, start=start)
    return PieceStream(omega.prime, CylinderSet.empty(omega.prime), (family,))
