"""The uniform result type of every checker."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from src.group.group_core import Point, format_point
from src.sets.set_algebra import Cylinder, CylinderSet


class Status(str, Enum):
    PASS = "pass"
    PASS_CERTIFIED = "pass-certified"
    FAIL = "fail"
    UNDECIDED = "undecided"


_RANK = {Status.FAIL: 0, Status.UNDECIDED: 1, Status.PASS_CERTIFIED: 2, Status.PASS: 3}


def fmt_fraction(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def fmt_value(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else fmt_fraction(v)
    return str(v)


@dataclass(frozen=True)
class Witness:
    """Concrete evidence attached to a failing (or alarming) check.

    ``kind`` selects how :meth:`recheck` re-validates the evidence:
      - ``rho-overlap``: both cylinders have rho-images containing ``cell``
      - ``projection-overlap``: both cylinders project onto D_0 over ``cell``
      - anything else is descriptive (deficits, mismatches) and rechecks trivially
    """

    kind: str
    description: str
    cylinders: tuple[Cylinder, ...] = ()
    cell: Cylinder | None = None
    region: CylinderSet | None = None
    points: tuple[Point, ...] = ()
    sources: tuple[str, ...] = ()

    def recheck(self) -> bool:
        if self.kind == "rho-overlap":
            return len(self.cylinders) == 2 and all(c.rho_image().contains(self.cell) for c in self.cylinders)
        if self.kind == "projection-overlap":
            for c in self.cylinders:
                k = c.annulus()
                if k is None or not c.dilate(-k).contains(self.cell):
                    return False
            return len(self.cylinders) == 2
        return True

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "description": self.description}
        if self.cylinders:
            out["cylinders"] = [c.token() for c in self.cylinders]
        if self.cell is not None:
            out["cell"] = self.cell.token()
        if self.region is not None:
            out["region"] = self.region.tokens()
            out["region_measure"] = fmt_fraction(self.region.measure)
        if self.points:
            out["points"] = [format_point(x) for x in self.points]
        if self.sources:
            out["sources"] = list(self.sources)
        return out


@dataclass
class Verdict:
    name: str
    status: Status
    uncovered: Fraction | None = None
    depth: int | None = None
    witnesses: list[Witness] = field(default_factory=list)
    conditions: list["Verdict"] = field(default_factory=list)
    measures: dict[str, Fraction] = field(default_factory=dict)
    decisions: list[str] = field(default_factory=list)
    report: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status in (Status.PASS, Status.PASS_CERTIFIED)

    @property
    def failed(self) -> bool:
        return self.status == Status.FAIL

    @classmethod
    def pass_(cls, name, **kwargs) -> "Verdict":
        return cls(name, Status.PASS, **kwargs)

    @classmethod
    def certified(cls, name, uncovered, **kwargs) -> "Verdict":
        return cls(name, Status.PASS_CERTIFIED, uncovered=Fraction(uncovered), **kwargs)

    @classmethod
    def fail(cls, name, witness: Witness, **kwargs) -> "Verdict":
        return cls(name, Status.FAIL, witnesses=[witness], **kwargs)

    @classmethod
    def undecided(cls, name, depth, **kwargs) -> "Verdict":
        return cls(name, Status.UNDECIDED, depth=depth, **kwargs)

    def all_witnesses(self) -> list[Witness]:
        out = list(self.witnesses)
        for c in self.conditions:
            out.extend(c.all_witnesses())
        return out

    def all_decisions(self) -> list[str]:
        out = list(self.decisions)
        for c in self.conditions:
            for d in c.all_decisions():
                if d not in out:
                    out.append(d)
        return out

    def to_dict(self) -> dict:
        out = {"name": self.name, "status": self.status.value}
        if self.uncovered is not None:
            out["uncovered"] = fmt_fraction(self.uncovered)
        if self.depth is not None:
            out["depth"] = self.depth
        if self.measures:
            out["measures"] = {k: fmt_fraction(v) for k, v in self.measures.items()}
        if self.witnesses:
            out["witnesses"] = [w.to_dict() for w in self.witnesses]
        if self.conditions:
            out["conditions"] = [c.to_dict() for c in self.conditions]
        if self.report:
            out["report"] = list(self.report)
        return out


def weakest(name: str, parts: list[Verdict], **kwargs) -> Verdict:
    """Conjunction of verdicts: the weakest status wins.

    Each part measures its own unverified region, so a certified conjunction
    reports the largest of them.
    """
    if not parts:
        return Verdict.pass_(name, **kwargs)
    status = min((v.status for v in parts), key=_RANK.__getitem__)
    verdict = Verdict(name, status, conditions=list(parts), **kwargs)
    if status == Status.PASS_CERTIFIED:
        verdict.uncovered = max((v.uncovered or Fraction(0) for v in parts), default=Fraction(0))
    depths = [v.depth for v in parts if v.depth is not None]
    if depths and status != Status.PASS:
        verdict.depth = max(depths)
    return verdict
