"""Generalized scaling sets and the sets built from the rho / I maps.

eta(omega) = sum over h in the annihilator of H of 1_S(omega + h) is kept as an
exact step function on U* (a :class:`Profile`), so every identity below is a
profile comparison.  Two facts carry most of the work:

    eta_S(omega + 0.sigma) summed over sigma  ==  eta_BS(I(omega))
    eta(B omega) == eta(I(omega))  for omega in U*

The first is the change of variables B^-1 H-perp = H-perp + {0.sigma}; the
second is H-perp periodicity.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from src.errors import DomainError
from src.group.group_core import fraction_point
from src.report.verdict import Verdict, Witness, fmt_fraction, fmt_value, weakest
from src.sets.set_algebra import (
    CylinderSet,
    Profile,
    contains,
    dilate,
    intersect,
    mismatch_measure,
    rho_profile,
    subtract,
    symmetric_difference,
    translate,
    union,
    union_all,
)
from src.sets.streams import DEFAULT_DEPTH, PieceStream, TailFamily, as_stream, lemma_stream
from src.wavelets.wavelet_checker import check_translation_congruence, check_wavelet_set

logger = logging.getLogger(__name__)

PLUS_ONE_READING = "eta(B omega) (+) 1 is read as the integer sum eta(B omega) + 1"
INVARIANCE_READING = "invariance under B^-1 is read as B^-1 S subset of S; the equality reading is reported alongside"
NECESSARY_ONLY = "the consistency equation is checked as a necessary condition only"


@dataclass
class EtaFunction:
    """eta on U* as cell means at resolution K, plus the exact profile behind them."""

    resolution: int
    values: list
    tail_uncertainty: Fraction
    profile: Profile

    def is_exact(self) -> bool:
        return self.tail_uncertainty == 0

    def value(self, cell: int):
        return self.values[cell]


def _enumerated(s, depth: int) -> tuple[PieceStream, CylinderSet, Fraction]:
    stream = as_stream(s)
    if stream.is_finite():
        return stream, stream.finite, Fraction(0)
    covered, tail = stream.enumerate(depth)
    return stream, covered, tail


def eta_profile(s: CylinderSet) -> Profile:
    return rho_profile(s.prime, s.cylinders)


def eta(s, resolution: int = 0, depth: int = DEFAULT_DEPTH) -> EtaFunction:
    if resolution < 0:
        raise DomainError(f"resolution must be >= 0, got {resolution}")
    _, covered, tail = _enumerated(s, depth)
    profile = eta_profile(covered)
    return EtaFunction(resolution, profile.cell_averages(resolution), tail, profile)


def translate_sum(profile: Profile) -> Profile:
    """omega -> sum over sigma of f(omega + 0.sigma)."""
    total = profile.translate_fraction(0)
    for sigma in range(1, profile.p):
        total = total + profile.translate_fraction(sigma)
    return total


def eta_dilation_identity(s: CylinderSet) -> list:
    """Mismatch rows of sum_sigma eta_S(omega + 0.sigma) against eta_BS(I omega); empty for every S."""
    lhs = translate_sum(eta_profile(s))
    rhs = eta_profile(dilate(s, 1)).pull_back_i()
    return lhs.mismatch(rhs)


def _rows_region(p, rows) -> CylinderSet:
    return CylinderSet.from_intervals(p, [(lo, hi) for lo, hi, *_ in rows])


def _compare_profiles(name, lhs: Profile, rhs: Profile, tail: Fraction, depth, finite: bool, slack: int) -> Verdict:
    """Exact comparison when finite; otherwise certify mismatches the tail can still explain.

    ``slack`` bounds how many times the tail measure can show up in the
    mismatch (each side's error integrates to a multiple of the tail and is
    integer valued where it is nonzero).
    """
    rows = lhs.mismatch(rhs)
    size = mismatch_measure(rows)
    measures = {"mismatch": size}
    if not finite:
        measures["tail"] = tail
    if not rows:
        if finite or tail == 0:
            return Verdict.pass_(name, measures=measures)
        return Verdict.certified(name, 0, depth=depth, measures=measures)
    if finite or size > slack * tail:
        lo, hi, a, b = rows[0]
        witness = Witness(
            kind="mismatch",
            description=f"sides differ on [{fmt_fraction(lo)}, {fmt_fraction(hi)}): {a} vs {b}",
            region=_rows_region(lhs.prime, rows),
        )
        return Verdict.fail(name, witness, measures=measures, depth=None if finite else depth)
    return Verdict.certified(name, size, depth=depth, measures=measures)


# -- scaling-set conditions ----------------------------------------------------


def _measure_condition(stream: PieceStream) -> Verdict:
    name = "(i) measure is 1/(p-1)"
    target = Fraction(1, stream.p - 1)
    total = stream.total_measure
    if total is None:
        return Verdict.undecided(name, None, report=["generated source has no closed-form total"])
    measures = {"measure": total, "target": target}
    if total == target:
        return Verdict.pass_(name, measures=measures)
    witness = Witness(
        kind="measure",
        description=f"measure {fmt_fraction(total)} differs from {fmt_fraction(target)}",
    )
    return Verdict.fail(name, witness, measures=measures)


def _structural(family: TailFamily) -> bool:
    return family.anchor.is_zero() and family.ratio == 1


def _unstructured_tail(stream: PieceStream, depth: int) -> Fraction:
    total = Fraction(0)
    for family in stream.families:
        if not _structural(family):
            total += family.total_measure - family.partial_measure(depth)
    if stream.generator is not None:
        total += stream.generator.tail_bound(depth)
    return total


def _structural_pieces(stream: PieceStream, depth: int) -> CylinderSet:
    pieces = [f.piece(j) for f in stream.families if _structural(f) for j in range(f.start, depth + 1)]
    return union_all(stream.prime, pieces)


def _inclusion(name, stream, inner, outer, settled, slack, tail, depth) -> Verdict:
    """inner subset of outer, where ``settled`` is known to satisfy it already.

    For streams the leftover may still be covered by unenumerated pieces, whose
    contribution to ``outer`` is at most ``slack`` times the tail.
    """
    leftover = subtract(inner, outer)
    if stream.is_finite():
        if leftover.is_empty():
            return Verdict.pass_(name)
        witness = Witness(
            kind="not-contained",
            description=f"measure {fmt_fraction(leftover.measure)} lies outside the containing set",
            region=leftover,
        )
        return Verdict.fail(name, witness, measures={"leftover": leftover.measure})
    leftover = subtract(leftover, settled)
    measures = {"leftover": leftover.measure, "tail": tail}
    unverified = _unstructured_tail(stream, depth)
    if leftover.is_empty():
        if unverified == 0:
            return Verdict.pass_(name, measures=measures)
        return Verdict.certified(name, unverified, depth=depth, measures=measures)
    if leftover.measure <= slack * tail:
        return Verdict.certified(name, leftover.measure, depth=depth, measures=measures)
    witness = Witness(
        kind="not-contained",
        description=f"measure {fmt_fraction(leftover.measure)} lies outside the containing set beyond what the tail can cover",
        region=leftover,
    )
    return Verdict.fail(name, witness, measures=measures, depth=depth)


def _subset_of_dilate(stream, covered, tail, depth) -> Verdict:
    # each piece B^-j body of a theta-anchored ratio-1 family is B of the next piece
    settled = _structural_pieces(stream, depth) if stream.families else CylinderSet.empty(stream.prime)
    return _inclusion("(ii) S subset of BS", stream, covered, dilate(covered, 1), settled, stream.p, tail, depth)


def _contracted_subset(stream, covered, tail, depth) -> Verdict:
    settled = dilate(_structural_pieces(stream, depth), -1) if stream.families else CylinderSet.empty(stream.prime)
    return _inclusion("(b) B^-1 S subset of S", stream, dilate(covered, -1), covered, settled, 1, tail, depth)


def _theta_block(p, length: int) -> CylinderSet:
    """R_L = U* minus B^-L U*, the fundamental domain of B^L near theta."""
    return subtract(CylinderSet.unit(p), dilate(CylinderSet.unit(p), -length))


def _fold_into_block(s: CylinderSet, length: int) -> CylinderSet:
    out = []
    for c in s.cylinders:
        k = c.annulus()
        folded = (k + length - 1) % length - length + 1
        out.append(c.dilate(folded - k))
    return CylinderSet.of(s.prime, out)


def theta_neighbourhood_condition(s, depth: int = DEFAULT_DEPTH, name: str = "(iii) contains a neighbourhood of theta") -> Verdict:
    """Whether some U*_N lies in s up to a null set.

    Near theta only the finite part's theta cylinders and the theta-anchored
    tail families matter.  The union over all j in Z of the B^-jL dilates of
    those families is B^L invariant, so it covers a neighbourhood of theta
    exactly when its fold into R_L covers R_L.
    """
    stream = as_stream(s)
    p = stream.p
    if stream.finite.contains_theta:
        return Verdict.pass_(name)
    anchored = [f for f in stream.families if f.anchor.is_zero() and not f.body.is_empty()]
    if any(f.body.contains_theta for f in anchored):
        return Verdict.pass_(name)
    length = lcm(*(f.ratio for f in anchored)) if anchored else 1
    block = _theta_block(p, length)
    missing = block
    if anchored:
        pieces = [dilate(f.body, -j * f.ratio) for f in anchored for j in range(length // f.ratio)]
        missing = subtract(block, _fold_into_block(union_all(p, pieces), length))
        if missing.is_empty():
            return Verdict.pass_(name, report=[f"theta-anchored families fold onto all of U* minus B^-{length} U*"])
    if stream.generator is not None:
        return Verdict.undecided(name, depth, report=["generated pieces may still reach theta"])
    witness = Witness(
        kind="theta-gap",
        description=f"B^-{length} dilates of a set of measure {fmt_fraction(missing.measure)} avoid the set arbitrarily close to theta",
        region=missing,
    )
    return Verdict.fail(name, witness)


def _plus_one_condition(stream, covered, tail, depth) -> Verdict:
    profile = eta_profile(covered)
    lhs = translate_sum(profile)
    rhs = profile.pull_back_i().map(lambda v: v + 1)
    return _compare_profiles(
        "(iv) sum_sigma eta(omega + 0.sigma) = eta(B omega) + 1",
        lhs,
        rhs,
        tail,
        depth,
        stream.is_finite(),
        stream.p + 1,
    )


def gss_check(s, depth: int = DEFAULT_DEPTH) -> Verdict:
    stream, covered, tail = _enumerated(s, depth)
    parts = [
        _measure_condition(stream),
        _subset_of_dilate(stream, covered, tail, depth),
        theta_neighbourhood_condition(stream, depth),
        _plus_one_condition(stream, covered, tail, depth),
    ]
    verdict = weakest("generalized scaling set", parts, decisions=[PLUS_ONE_READING])
    for part in parts:
        verdict.report.append(f"{part.name}: {part.status.value}")
    logger.debug("gss check at depth %d: %s", depth, verdict.status.value)
    return verdict


# -- wavelet set <-> scaling set ------------------------------------------------


def wavelet_from_gss(s, depth: int = DEFAULT_DEPTH) -> CylinderSet:
    """BS minus S.

    Exact for finite sets and for a single theta-anchored ratio-1 family with
    an empty finite part (BS minus S is then B^(1-start) body); any other
    stream is answered from its depth-J enumeration.
    """
    stream = as_stream(s)
    if stream.is_finite():
        return subtract(dilate(stream.finite, 1), stream.finite)
    if (
        stream.finite.is_empty()
        and stream.generator is None
        and len(stream.families) == 1
        and _structural(stream.families[0])
    ):
        family = stream.families[0]
        return dilate(family.body, 1 - family.start)
    logger.warning("BS minus S taken from the depth-%d enumeration", depth)
    covered, _ = stream.enumerate(depth)
    return subtract(dilate(covered, 1), covered)


def verify_gss(s, depth: int = DEFAULT_DEPTH) -> Verdict:
    """gss_check, followed by the wavelet-set check of BS minus S when it passes."""
    verdict = gss_check(s, depth)
    if not verdict.passed:
        return verdict
    omega = wavelet_from_gss(s, depth)
    conclusion = check_wavelet_set(omega, depth)
    conclusion.name = "BS minus S is a wavelet set"
    joined = weakest("generalized scaling set", verdict.conditions + [conclusion], decisions=list(verdict.decisions))
    joined.report = verdict.report + [f"{conclusion.name}: {conclusion.status.value} ({omega})"]
    return joined


@dataclass
class GssConstruction:
    stream: PieceStream
    verdict: Verdict


def gss_from_wavelet(omega: CylinderSet, depth: int = DEFAULT_DEPTH) -> GssConstruction:
    """S = union over j >= 1 of B^-j omega, with disjointness and measure checked."""
    stream = lemma_stream(omega)
    p = omega.p
    name = "pieces B^-j omega are pairwise disjoint"
    hit = stream.find_overlap(depth)
    if hit is None:
        disjoint = Verdict.pass_(name)
    else:
        first, second, common = hit
        disjoint = Verdict.fail(
            name,
            Witness(
                kind="piece-overlap",
                description=f"{first} and {second} meet in measure {fmt_fraction(common.measure)}",
                region=common,
                sources=(first, second),
            ),
        )
    measure = _measure_condition(stream)
    measure.name = "total measure is 1/(p-1)"
    verdict = weakest("scaling set from a wavelet set", [disjoint, measure])
    covered, tail = stream.enumerate(depth)
    verdict.measures = {"total": stream.total_measure, "enumerated": covered.measure, "tail": tail}
    verdict.depth = depth
    if not verdict.passed:
        logger.warning("input of measure %s does not give a scaling set over p=%d", omega.measure, p)
    return GssConstruction(stream, verdict)


def closure_verify(candidate: CylinderSet, omega: CylinderSet) -> Verdict:
    """candidate == union over j >= 1 of B^-j omega, via B^-1(omega + S) = S and omega, S disjoint."""
    name = "closed form of the union of B^-j omega"
    contracted = dilate(union(omega, candidate), -1)
    diff = symmetric_difference(contracted, candidate)
    common = intersect(omega, candidate)
    parts = []
    if diff.is_empty():
        parts.append(Verdict.pass_("B^-1(omega + S) = S"))
    else:
        parts.append(
            Verdict.fail(
                "B^-1(omega + S) = S",
                Witness(
                    kind="symmetric-difference",
                    description=f"sides differ in measure {fmt_fraction(diff.measure)}",
                    region=diff,
                ),
            )
        )
    if common.is_empty():
        parts.append(Verdict.pass_("omega and S are disjoint"))
    else:
        parts.append(
            Verdict.fail(
                "omega and S are disjoint",
                Witness(kind="intersection", description=f"common measure {fmt_fraction(common.measure)}", region=common),
            )
        )
    return weakest(name, parts)


def consistency_check(s, resolution: int = 0, depth: int = DEFAULT_DEPTH) -> Verdict:
    """1 + eta_S = eta_BS as step functions on U*."""
    stream, covered, tail = _enumerated(s, depth)
    lhs = eta_profile(covered).map(lambda v: v + 1)
    rhs = eta_profile(dilate(covered, 1))
    verdict = _compare_profiles(
        "1 + eta_S = eta_BS",
        lhs,
        rhs,
        tail,
        depth,
        stream.is_finite(),
        stream.p + 1,
    )
    verdict.decisions.append(NECESSARY_ONLY)
    verdict.report.append(f"1 + eta_S at resolution {resolution}: {_cells(lhs, resolution)}")
    verdict.report.append(f"eta_BS at resolution {resolution}: {_cells(rhs, resolution)}")
    return verdict


def _cells(profile: Profile, resolution: int) -> str:
    return " ".join(fmt_value(v) for v in profile.cell_averages(resolution))


def _equality_reading(covered: CylinderSet, tail: Fraction) -> str:
    """Compare B^-1 S with S on the enumerated part; the rest has measure at most tail (tail / p after B^-1)."""
    diff = symmetric_difference(dilate(covered, -1), covered)
    if diff.is_empty() and tail == 0:
        return "holds"
    if diff.measure > tail + tail / covered.p:
        return f"fails (they differ on {diff}, measure {fmt_fraction(diff.measure)})"
    return f"undecided (difference {fmt_fraction(diff.measure)} within the tail bound {fmt_fraction(tail)})"


def theorem47_check(s, depth: int = DEFAULT_DEPTH) -> Verdict:
    """Neighbourhood of theta + B^-1 invariance + consistency equation, then the wavelet-set conclusion."""
    stream, covered, tail = _enumerated(s, depth)
    neighbourhood = theta_neighbourhood_condition(stream, depth, name="(a) contains a neighbourhood of theta")
    invariance = _contracted_subset(stream, covered, tail, depth)
    consistency = consistency_check(stream, 0, depth)
    consistency.name = "(c) 1 + eta_S = eta_BS"
    hypotheses = [neighbourhood, invariance, consistency]

    report = [
        f"{v.name}: {v.status.value}" for v in hypotheses
    ]
    report.append(f"equality reading B^-1 S = S: {_equality_reading(covered, tail)}")

    omega = wavelet_from_gss(stream, depth)
    conclusion = check_wavelet_set(omega, depth)
    conclusion.name = "conclusion: BS minus S is a wavelet set"
    report.append(f"{conclusion.name}: {conclusion.status.value} ({omega})")
    if all(v.status.value == "pass" for v in hypotheses) and not conclusion.passed:
        logger.error("hypotheses pass exactly but %s does not", conclusion.name)
        report.append("internal-consistency alarm: hypotheses pass but the conclusion does not")

    verdict = weakest(
        "neighbourhood and B^-1 invariance criterion",
        hypotheses + [conclusion],
        decisions=[INVARIANCE_READING, NECESSARY_ONLY],
    )
    verdict.report = report
    return verdict


# -- the Upsilon chain ---------------------------------------------------------


def i_preimage(t: CylinderSet) -> CylinderSet:
    """{omega in U* : I(omega) in t}."""
    contracted = dilate(intersect(t, CylinderSet.unit(t.prime)), -1)
    branches = [translate(contracted, fraction_point(t.prime, sigma)) for sigma in range(t.p)]
    return intersect(union_all(t.prime, branches), CylinderSet.unit(t.prime))


def complement_hypothesis(u: CylinderSet) -> Verdict:
    """U* minus u == union over sigma = 1..p-1 of rho(u + 0.sigma)."""
    name = "complement of u is the union of rho(u + 0.sigma)"
    p = u.prime
    shifted = union_all(p, [translate(u, fraction_point(p, sigma)) for sigma in range(1, u.p)])
    complement = subtract(CylinderSet.unit(p), u)
    diff = symmetric_difference(complement, shifted)
    if diff.is_empty():
        return Verdict.pass_(name)
    return Verdict.fail(
        name,
        Witness(
            kind="symmetric-difference",
            description=f"complement and translates differ in measure {fmt_fraction(diff.measure)}",
            region=diff,
        ),
    )


@dataclass
class UpsilonChain:
    hypothesis: Verdict
    sets: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)

    @property
    def verdict(self) -> Verdict:
        return weakest("upsilon chain", [self.hypothesis] + self.verdicts)


def upsilon_construct(u: CylinderSet, n: int) -> UpsilonChain:
    if n < 0:
        raise DomainError(f"chain length must be >= 0, got {n}")
    if not contains(CylinderSet.unit(u.prime), u):
        raise DomainError(f"{u} is not contained in U*")
    hypothesis = complement_hypothesis(u)
    chain = UpsilonChain(hypothesis)
    if hypothesis.failed:
        return chain
    current = u
    for k in range(n + 1):
        if k:
            current = intersect(u, i_preimage(current))
        chain.sets.append(current)
        expected = Fraction(u.p) ** (-(k + 1))
        if current.measure == expected:
            size = Verdict.pass_(f"measure of upsilon_{k} is {fmt_fraction(expected)}")
        else:
            size = Verdict.fail(
                f"measure of upsilon_{k} is {fmt_fraction(expected)}",
                Witness(kind="measure", description=f"measure is {fmt_fraction(current.measure)}"),
            )
        congruence = check_translation_congruence(dilate(current, k + 1))
        congruence.name = f"B^{k + 1} upsilon_{k} is congruent to U*"
        chain.verdicts.append(weakest(f"upsilon_{k}", [size, congruence]))
        logger.debug("upsilon_%d = %s", k, current)
    return chain
