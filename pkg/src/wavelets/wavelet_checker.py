"""Exact checks of the wavelet-set conditions.

Dilation tiling is decided by projecting every annulus piece of a set onto
D_0 = U* minus B^-1 U*: the dilates {B^n omega} tile G* exactly when the
projections B^-k(omega intersect D_k) partition D_0, because
B^n omega intersect D_k = B^n(omega intersect D_(k-n)).

Translation congruence to U* is decided through rho: a set is congruent to
U* exactly when rho restricted to it is a bijection onto U*.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from src.report.verdict import Status, Verdict, Witness, fmt_fraction, weakest
from src.sets.set_algebra import (
    Cylinder,
    CylinderSet,
    Profile,
    annulus_split,
    rho_profile,
    subtract,
    unit_cylinder,
)
from src.sets.streams import DEFAULT_DEPTH, DEFAULT_MAX_CELLS, PieceStream, as_stream

logger = logging.getLogger(__name__)


def _collect(s, depth: int) -> tuple[PieceStream, CylinderSet, Fraction]:
    stream = as_stream(s)
    if stream.is_finite():
        return stream, stream.finite, Fraction(0)
    covered, tail = stream.enumerate(depth)
    return stream, covered, tail


def _first_nested_overlap(entries):
    """entries: (image, payload) pairs; images are p-adic cylinders.

    Two p-adic cylinders meet only when one contains the other, so after
    sorting by (lo, resolution) an overlap shows up as an image starting
    before the running maximum end.
    """
    entries = sorted(entries, key=lambda e: (e[0].lo, e[0].resolution))
    holder = None
    for image, payload in entries:
        if holder is not None and image.lo < holder[0].hi:
            return holder, (image, payload)
        if holder is None or image.hi > holder[0].hi:
            holder = (image, payload)
    return None


def rho_images(cylinders) -> list[tuple[Cylinder, Cylinder]]:
    """(rho-image, source) pairs after refining every piece to resolution >= 0."""
    out = []
    for c in cylinders:
        if c.resolution < 0:
            # p**-N subcells of resolution 0 all map onto U*; two are enough for a witness.
            for sub in c.refine(0)[:2]:
                out.append((sub.rho_image(), sub))
        else:
            out.append((c.rho_image(), c))
    return out


def check_translation_congruence(s, depth: int = DEFAULT_DEPTH) -> Verdict:
    stream, covered, tail = _collect(s, depth)
    p = stream.prime
    name = "translation congruence to U*"
    measures = {"covered": covered.measure, "tail": tail}
    total = stream.total_measure
    if total is not None:
        measures["measure"] = total

    images = rho_images(covered.cylinders)
    hit = _first_nested_overlap(images)
    if hit is not None:
        (outer, first), (inner, second) = hit
        witness = Witness(
            kind="rho-overlap",
            description=f"rho-images of {first} and {second} share the cell {inner}",
            cylinders=(first, second),
            cell=inner,
        )
        return Verdict.fail(name, witness, measures=measures, depth=None if stream.is_finite() else depth)

    image_set = CylinderSet.of(p, [img for img, _ in images])
    deficit = 1 - image_set.measure
    measures["uncovered"] = deficit
    if deficit > tail or (total is not None and total < 1):
        region = subtract(CylinderSet.unit(p), image_set)
        witness = Witness(
            kind="deficit",
            description=f"rho-images miss measure {fmt_fraction(deficit)} of U*",
            region=region,
        )
        return Verdict.fail(name, witness, measures=measures, depth=None if stream.is_finite() else depth)
    if tail == 0:
        return Verdict.pass_(name, measures=measures)
    if total is not None and total > 1:
        return Verdict.undecided(
            name,
            depth,
            measures=measures,
            report=["total measure exceeds 1 but no overlap was found among the enumerated pieces"],
        )
    return Verdict.certified(name, deficit, depth=depth, measures=measures)


@dataclass
class DilationProjection:
    """Projections B^-k(s intersect D_k) onto D_0, per annulus k."""

    pieces: dict = field(default_factory=dict)
    theta_part: CylinderSet | None = None
    entries: list = field(default_factory=list)

    @property
    def flagged(self) -> bool:
        return self.theta_part is not None and not self.theta_part.is_empty()


def dilation_projection(s: CylinderSet, source: str = "set 0") -> DilationProjection:
    split = annulus_split(s)
    result = DilationProjection(theta_part=split.theta_part)
    for k, part in split.parts.items():
        projected = CylinderSet(part.prime, tuple(c.dilate(-k) for c in part.cylinders))
        result.pieces[k] = projected
        for c in part.cylinders:
            result.entries.append((c.dilate(-k), (source, k, c)))
    return result


def fundamental_annulus(p) -> CylinderSet:
    """D_0 = U* minus B^-1 U*, i.e. [1/p, 1) under lambda*."""
    unit = CylinderSet.unit(p)
    return subtract(unit, CylinderSet(unit.prime, (unit_cylinder(p).dilate(-1),)))


def _projected_tail_bound(stream: PieceStream, depth: int) -> Fraction | None:
    """Bound on the D_0-measure that pieces with index > depth can still project."""
    if stream.is_finite():
        return Fraction(0)
    if stream.generator is not None:
        return None
    p = stream.p
    bound = Fraction(0)
    for family in stream.families:
        remaining = family.total_measure - family.partial_measure(depth)
        if remaining == 0:
            continue
        if family.anchor.is_zero():
            # every piece of a theta-anchored family projects onto the same cells
            return None
        annuli = [c.annulus() for c in family.body.cylinders]
        if any(k is None for k in annuli) or (depth + 1) * family.ratio <= max(annuli):
            return None
        index = sum(d * p ** (-j) for j, d in family.anchor.digits)
        k_anchor = len(_base_digits(index, p))
        bound += remaining * Fraction(p) ** (-k_anchor)
    return bound


def _base_digits(m: int, p: int) -> list[int]:
    out = []
    while m:
        m, d = divmod(m, p)
        out.append(d)
    return out


def check_dilation_tiling(sets, depth: int = DEFAULT_DEPTH) -> Verdict:
    name = "dilation tiling of G*"
    streams = [as_stream(s) for s in sets]
    if not streams:
        raise ValueError("at least one set is required")
    p = streams[0].prime
    entries = []
    projected_tail = Fraction(0)
    finite = True
    for i, stream in enumerate(streams):
        _, covered, _ = _collect(stream, depth)
        projection = dilation_projection(covered, source=f"set {i}")
        if projection.flagged:
            c = projection.theta_part.cylinders[0]
            witness = Witness(
                kind="theta-neighbourhood",
                description=f"set {i} contains the theta-neighbourhood {c}; its B-dilates nest",
                cylinders=(c,),
                sources=(f"set {i}",),
            )
            return Verdict.fail(name, witness)
        entries.extend(projection.entries)
        bound = _projected_tail_bound(stream, depth)
        finite = finite and stream.is_finite()
        projected_tail = None if bound is None or projected_tail is None else projected_tail + bound

    hit = _first_nested_overlap(entries)
    if hit is not None:
        (outer, (src1, k1, c1)), (inner, (src2, k2, c2)) = hit
        witness = Witness(
            kind="projection-overlap",
            description=f"{c1} ({src1}, annulus {k1}) and {c2} ({src2}, annulus {k2}) both project onto {inner}",
            cylinders=(c1, c2),
            cell=inner,
            sources=(f"{src1} annulus {k1}", f"{src2} annulus {k2}"),
        )
        return Verdict.fail(name, witness, depth=None if finite else depth)

    d0 = fundamental_annulus(p)
    image = CylinderSet.of(p, [img for img, _ in entries])
    deficit = d0.measure - image.measure
    measures = {"projected": image.measure, "annulus": d0.measure, "uncovered": deficit}
    if deficit == 0 and finite:
        return Verdict.pass_(name, measures=measures)
    if projected_tail is None:
        if deficit == 0:
            return Verdict.certified(name, 0, depth=depth, measures=measures)
        return Verdict.undecided(
            name, depth, measures=measures, report=["projection of the remaining tail is not bounded at this depth"]
        )
    if deficit > projected_tail:
        witness = Witness(
            kind="uncovered",
            description=f"projections miss measure {fmt_fraction(deficit)} of D_0",
            region=subtract(d0, image),
        )
        return Verdict.fail(name, witness, measures=measures, depth=None if finite else depth)
    if deficit == 0 and projected_tail == 0:
        return Verdict.pass_(name, measures=measures)
    return Verdict.certified(name, deficit, depth=depth, measures=measures)


def check_wavelet_set(s, depth: int = DEFAULT_DEPTH) -> Verdict:
    parts = [check_dilation_tiling([s], depth), check_translation_congruence(s, depth)]
    verdict = weakest("wavelet set", parts)
    verdict.report.append(f"(a) dilation tiling: {parts[0].status.value}")
    verdict.report.append(f"(b) translation congruence: {parts[1].status.value}")
    return verdict


def check_multiwavelet_set(sets, depth: int = DEFAULT_DEPTH) -> Verdict:
    streams = [as_stream(s) for s in sets]
    if not streams:
        raise ValueError("at least one set is required")
    p = streams[0].p
    notes = []
    if len(streams) != p - 1:
        logger.warning("multiwavelet check over %d sets, expected p-1 = %d", len(streams), p - 1)
        notes.append(f"warning: {len(streams)} sets given, the characterization is stated for p-1 = {p - 1}")
    tiling = check_dilation_tiling(streams, depth)
    congruences = []
    for i, stream in enumerate(streams):
        v = check_translation_congruence(stream, depth)
        v.name = f"translation congruence of set {i}"
        congruences.append(v)
    verdict = weakest("multiwavelet set", [tiling] + congruences)
    verdict.report.extend(notes)
    verdict.report.append(f"(a) joint dilation tiling: {tiling.status.value}")
    for v in congruences:
        verdict.report.append(f"(b) {v.name}: {v.status.value}")
    return verdict


@dataclass
class PackingReport:
    """Translate-count function f(omega) = sum_h 1_S(omega - h) on U*.

    ``cells`` maps each resolution-``resolution`` cell index where f is
    nonzero to its value; it is None when that table would exceed the cell
    limit, and ``status`` is then undecided.
    """

    minimum: object
    maximum: object
    measure: Fraction | None
    resolution: int
    cells: dict[int, int] | None
    tail: Fraction
    covering: bool
    packing: bool
    consistent: bool
    status: Status = Status.PASS

    def to_dict(self) -> dict:
        return {
            "min": str(self.minimum),
            "max": str(self.maximum),
            "measure": None if self.measure is None else fmt_fraction(self.measure),
            "resolution": self.resolution,
            "tail": fmt_fraction(self.tail),
            "covering": self.covering,
            "packing": self.packing,
            "consistent": self.consistent,
            "status": self.status.value,
        }


def _touched_cells(profile: Profile, resolution: int, max_cells: int) -> dict[int, int] | None:
    """Sparse table of the nonzero values of an integer profile whose breakpoints lie on the grid."""
    scale = profile.p ** resolution
    touched = sum(((hi - lo) * scale for lo, hi, v in profile.pieces if v), Fraction(0))
    if touched > max_cells:
        return None
    cells = {}
    for lo, hi, v in profile.pieces:
        if v:
            for cell in range(int(lo * scale), int(hi * scale)):
                cells[cell] = v
    return cells


def packing_tiling_check(
    s, resolution: int = 0, depth: int = DEFAULT_DEPTH, max_cells: int = DEFAULT_MAX_CELLS
) -> PackingReport:
    stream, covered, tail = _collect(s, depth)
    profile = rho_profile(stream.prime, covered.cylinders)
    finest = max(0, covered.finest_resolution() or 0)
    if finest > resolution:
        logger.debug("refining packing table from resolution %d to %d", resolution, finest)
        resolution = finest
    total = stream.total_measure
    lo, hi = profile.minimum(), profile.maximum()
    covering = lo >= 1
    packing = hi <= 1
    consistent = True
    if covering and total is not None and tail == 0:
        consistent = (hi == 1) == (total == 1)
    cells = _touched_cells(profile, resolution, max_cells)
    if cells is None:
        logger.warning("packing table at resolution %d exceeds %d cells", resolution, max_cells)
        status = Status.UNDECIDED
    else:
        status = Status.PASS if consistent else Status.FAIL
    return PackingReport(
        minimum=lo,
        maximum=hi,
        measure=total,
        resolution=resolution,
        cells=cells,
        tail=tail,
        covering=covering,
        packing=packing,
        consistent=consistent,
        status=status,
    )
