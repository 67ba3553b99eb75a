"""Walsh-polynomial masks, blocked sets and the scaling-function transform.

A mask m(omega) = sum_alpha a_alpha * conj(W*_alpha(omega)) is constant on the
p**n resolution-n cells of U*.  Cells are indexed in lambda* order,
c = sum_i omega_i p^(n-i) with omega_1 the most significant digit, and the
pairing is <alpha, omega> = sum_i alpha_(i) * omega_(i+1).

Exact masks carry :class:`Cyclotomic` values; masks given with float
coefficients use numpy complex arrays and a tolerance.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from src.errors import DomainError, InputError
from src.group.group_core import Prime, as_prime
from src.masks.cyclotomic import Cyclotomic
from src.report.verdict import Status, Verdict, Witness, fmt_value, weakest
from src.sets.set_algebra import Cylinder
from src.sets.streams import DEFAULT_MAX_CELLS

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9

TRANSITION_READING = "blocked-set transitions use the p branches B^-1(omega_[l] + omega), l = 0..p-1"


def _digits(x: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        x, d = divmod(x, p)
        out.append(d)
    return out


def digit_reverse(x: int, p: int, n: int) -> int:
    y = 0
    for d in _digits(x, p, n):
        y = y * p + d
    return y


def pairing(alpha: int, cell: int, p: int, n: int) -> int:
    """<alpha, omega> mod p for the resolution-n cell index ``cell``."""
    a = _digits(alpha, p, n)
    w = _digits(cell, p, n)[::-1]
    return sum(x * y for x, y in zip(a, w)) % p


# -- value fields --------------------------------------------------------------


class ExactField:
    """Q(zeta_p) through :class:`Cyclotomic`."""

    exact = True

    def __init__(self, p: int):
        self.p = p

    def zero(self):
        return Cyclotomic.zero(self.p)

    def one(self):
        return Cyclotomic.one(self.p)

    def root(self, k: int):
        return Cyclotomic.zeta_power(self.p, k)

    def is_zero(self, x) -> bool:
        return x.is_zero()

    def equal(self, x, y) -> bool:
        return x == y

    def abs2(self, x):
        return x.abs2

    def above(self, x, bound) -> bool | None:
        sign = (x - bound).sign()
        return None if sign is None else sign > 0

    def fmt(self, x) -> str:
        if x.is_rational():
            return fmt_value(x.rational_value())
        return str(x)


class FloatField:
    """complex128 values compared within ``tolerance``."""

    exact = False

    def __init__(self, p: int, tolerance: float = DEFAULT_TOLERANCE):
        self.p = p
        self.tolerance = tolerance

    def zero(self):
        return 0j

    def one(self):
        return 1 + 0j

    def root(self, k: int):
        return complex(np.exp(2j * np.pi * k / self.p))

    def is_zero(self, x) -> bool:
        return abs(x) <= self.tolerance

    def equal(self, x, y) -> bool:
        return abs(x - y) <= self.tolerance

    def abs2(self, x):
        return complex(abs(x) ** 2)

    def above(self, x, bound) -> bool:
        return x.real > float(bound) + self.tolerance

    def fmt(self, x) -> str:
        x = complex(x)
        if abs(x.imag) <= self.tolerance:
            return f"{x.real:.12g}"
        return f"{x.real:.12g}{x.imag:+.12g}j"


# -- masks ---------------------------------------------------------------------


@dataclass(frozen=True)
class Mask:
    prime: Prime
    n: int
    coefficients: tuple
    tolerance: float | None = None

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"mask degree n must be >= 1, got {self.n}")
        size = self.p ** self.n
        if len(self.coefficients) != size:
            raise InputError(f"expected {size} coefficients, got {len(self.coefficients)}")

    @classmethod
    def exact(cls, p, n: int, coefficients) -> "Mask":
        prime = as_prime(p)
        coeffs = tuple(c if isinstance(c, Cyclotomic) else Cyclotomic.from_rational(prime.value, c) for c in coefficients)
        return cls(prime, n, coeffs)

    @classmethod
    def floating(cls, p, n: int, coefficients, tolerance: float = DEFAULT_TOLERANCE) -> "Mask":
        return cls(as_prime(p), n, tuple(complex(c) for c in coefficients), tolerance)

    @classmethod
    def from_values(cls, p, n: int, values, tolerance: float | None = None) -> "Mask":
        """Mask with the given cell values; coefficients come from the inverse transform."""
        prime = as_prime(p)
        if tolerance is None:
            vals = [v if isinstance(v, Cyclotomic) else Cyclotomic.from_rational(prime.value, v) for v in values]
            table = StepTable(prime, n, 0, vals)
            return cls(prime, n, tuple(inverse_mask_values(table, ExactField(prime.value))))
        table = StepTable(prime, n, 0, [complex(v) for v in values])
        return cls(prime, n, tuple(inverse_mask_values(table, FloatField(prime.value, tolerance))), tolerance)

    @property
    def p(self) -> int:
        return self.prime.value

    @property
    def is_exact(self) -> bool:
        return self.tolerance is None

    @property
    def field(self):
        if self.is_exact:
            return ExactField(self.p)
        return FloatField(self.p, self.tolerance)

    def coefficient_sum(self):
        f = self.field
        total = f.zero()
        for c in self.coefficients:
            total = total + c
        return total


@dataclass
class StepTable:
    """Values on the resolution-K cells of B^R U*, in lambda* order."""

    prime: Prime
    resolution: int
    region: int
    values: list

    @property
    def p(self) -> int:
        return self.prime.value

    def cell(self, index: int) -> Cylinder:
        return Cylinder(self.prime, self.resolution, index)

    def rows(self) -> list[tuple[Fraction, Fraction, object]]:
        size = Fraction(self.p) ** (-self.resolution)
        return [(i * size, (i + 1) * size, v) for i, v in enumerate(self.values)]

    def __len__(self):
        return len(self.values)


def _chrestenson(vec: list, p: int, n: int, sign: int, f) -> list:
    """In-place radix-p butterfly: out[beta] = sum_alpha vec[alpha] zeta^(sign * sum_i alpha_(i) beta_(i))."""
    vals = list(vec)
    roots = [f.root(sign * k) for k in range(p)]
    size = p ** n
    stride = 1
    for _ in range(n):
        for base in range(0, size, stride * p):
            for offset in range(stride):
                idx = [base + offset + d * stride for d in range(p)]
                column = [vals[i] for i in idx]
                for w, i in enumerate(idx):
                    acc = f.zero()
                    for a, x in enumerate(column):
                        acc = acc + x * roots[(a * w) % p]
                    vals[i] = acc
        stride *= p
    return vals


def mask_values(m: Mask) -> StepTable:
    p, n = m.p, m.n
    if not m.is_exact:
        tensor = np.asarray(m.coefficients, dtype=np.complex128).reshape((p,) * n)
        out = np.fft.fftn(tensor).transpose(tuple(range(n - 1, -1, -1))).reshape(-1)
        return StepTable(m.prime, n, 0, [complex(v) for v in out])
    transformed = _chrestenson(m.coefficients, p, n, -1, m.field)
    return StepTable(m.prime, n, 0, [transformed[digit_reverse(c, p, n)] for c in range(p ** n)])


def naive_mask_values(m: Mask) -> StepTable:
    """The direct double sum over cells and coefficients."""
    p, n = m.p, m.n
    f = m.field
    values = []
    for c in range(p ** n):
        acc = f.zero()
        for alpha, a in enumerate(m.coefficients):
            acc = acc + a * f.root(-pairing(alpha, c, p, n))
        values.append(acc)
    return StepTable(m.prime, n, 0, values)


def inverse_mask_values(table: StepTable, f=None) -> list:
    """Coefficients a_alpha recovered from the p**n cell values."""
    p = table.p
    n = table.resolution
    f = f or ExactField(p)
    if not f.exact:
        tensor = np.asarray(table.values, dtype=np.complex128).reshape((p,) * n)
        tensor = tensor.transpose(tuple(range(n - 1, -1, -1)))
        return [complex(v) for v in np.fft.ifftn(tensor).reshape(-1)]
    reordered = [table.values[digit_reverse(beta, p, n)] for beta in range(p ** n)]
    summed = _chrestenson(reordered, p, n, 1, f)
    return [v / p ** n for v in summed]


# -- hypotheses ----------------------------------------------------------------


def qmf_groups(p: int, n: int) -> list[list[int]]:
    """Cells differing only in omega_1, i.e. {omega + delta_l : l}."""
    step = p ** (n - 1)
    return [[l * step + t for l in range(p)] for t in range(step)]


def check_mask_hypotheses(m: Mask) -> Verdict:
    f = m.field
    table = mask_values(m)
    total = m.coefficient_sum()
    parts = []
    name = "coefficient sum is 1 (m(theta) = 1)"
    if f.equal(total, f.one()):
        parts.append(Verdict.pass_(name))
    else:
        parts.append(
            Verdict.fail(
                name,
                Witness(kind="mask-value", description=f"coefficients sum to {f.fmt(total)}", cylinders=(table.cell(0),)),
            )
        )

    name = "sum_l |m(omega + delta_l)|^2 = 1"
    witnesses = []
    for group in qmf_groups(m.p, m.n):
        power = f.zero()
        for c in group:
            power = power + f.abs2(table.values[c])
        if not f.equal(power, f.one()):
            values = ", ".join(f.fmt(table.values[c]) for c in group)
            witnesses.append(
                Witness(
                    kind="qmf",
                    description=f"cells {[table.cell(c).token() for c in group]} with values [{values}] give {f.fmt(power)}",
                    cylinders=tuple(table.cell(c) for c in group),
                )
            )
    if witnesses:
        parts.append(Verdict(name, Status.FAIL, witnesses=witnesses))
    else:
        parts.append(Verdict.pass_(name))
    verdict = weakest("mask hypotheses", parts)
    verdict.report = [f"m on {table.cell(c).token()}: {f.fmt(v)}" for c, v in enumerate(table.values)]
    return verdict


# -- blocked sets --------------------------------------------------------------


def _transition_cell(l: int, s: int, p: int, n: int) -> int:
    return l * p ** (n - 1) + s


def _transition_parent(l: int, s: int, p: int, n: int) -> int:
    return _transition_cell(l, s, p, n) // p


def is_blocked(m: Mask, cells, table: StepTable | None = None) -> bool:
    """Direct check of the blocked-set conditions for a set of resolution-(n-1) cells."""
    p, n = m.p, m.n
    f = m.field
    table = table or mask_values(m)
    cells = set(cells)
    if not cells or 0 in cells:
        return False
    for s in cells:
        for l in range(p):
            c = _transition_cell(l, s, p, n)
            if c // p not in cells and not f.is_zero(table.values[c]):
                return False
    return True


@dataclass
class BlockedSetResult:
    cells: list | None
    mra: bool
    verdict: Verdict
    hypotheses: Verdict
    removed: list = field(default_factory=list)

    def cylinders(self, prime: Prime, n: int) -> list[Cylinder]:
        return [Cylinder(prime, n - 1, s) for s in self.cells or []]


def blocked_set_find(m: Mask) -> BlockedSetResult:
    """Greatest fixed point of the blocked-set conditions over the nonzero resolution-(n-1) cells.

    A cell s survives while every branch cell c(l, s) is either a zero of m or
    lies inside a surviving cell; deletions propagate backwards through the
    branch relation with a work queue.
    """
    p, n = m.p, m.n
    f = m.field
    hypotheses = check_mask_hypotheses(m)
    if not hypotheses.passed:
        logger.warning("mask hypotheses fail; blocked-set search proceeds without them")
    table = mask_values(m)
    candidates = set(range(1, p ** (n - 1)))

    # cells whose membership depends on parent cell t
    dependants: dict[int, list[int]] = {}
    for s in candidates:
        for l in range(p):
            c = _transition_cell(l, s, p, n)
            if not f.is_zero(table.values[c]):
                dependants.setdefault(c // p, []).append(s)

    alive = set(candidates)
    queue = deque(sorted(candidates))
    removed = []
    while queue:
        s = queue.popleft()
        if s not in alive:
            continue
        for l in range(p):
            c = _transition_cell(l, s, p, n)
            if c // p not in alive and not f.is_zero(table.values[c]):
                alive.discard(s)
                removed.append(s)
                queue.extend(t for t in dependants.get(s, ()) if t in alive)
                break

    cells = sorted(alive) or None
    mra = cells is None
    name = "no blocked set (MRA)"
    if mra:
        verdict = Verdict.pass_(name)
    else:
        cyls = tuple(Cylinder(m.prime, n - 1, s) for s in cells)
        verdict = Verdict.fail(
            name,
            Witness(
                kind="blocked-set",
                description=f"maximal blocked set of {len(cells)} cell(s) at resolution {n - 1}",
                cylinders=cyls,
            ),
        )
    verdict.decisions.append(TRANSITION_READING)
    logger.debug("blocked-set search removed %d of %d candidate cells", len(removed), len(candidates))
    return BlockedSetResult(cells=cells, mra=mra, verdict=verdict, hypotheses=hypotheses, removed=removed)


# -- the scaling-function transform --------------------------------------------


def phi_hat(m: Mask, region: int, resolution: int | None = None, max_cells: int = DEFAULT_MAX_CELLS) -> StepTable:
    """Product of m(B^-j omega) over j >= 1 on the resolution-K cells of B^R U*.

    Factor j reads the digits of omega at positions 1-j .. n-j, so on B^R U*
    every factor beyond j = n + R - 1 is m(theta) = 1 and the product is finite
    and constant on resolution-(n-1) cells.
    """
    p, n = m.p, m.n
    f = m.field
    if region < 0:
        raise DomainError(f"region scale must be >= 0, got {region}")
    if resolution is None:
        resolution = n - 1
    if resolution < n - 1:
        raise DomainError(f"resolution {resolution} is below n-1 = {n - 1}")
    if not f.equal(m.coefficient_sum(), f.one()):
        raise DomainError(f"coefficient sum {f.fmt(m.coefficient_sum())} is not 1")
    count = p ** (region + resolution)
    if count > max_cells:
        raise InputError(f"table of {count} cells exceeds the limit of {max_cells}")

    mv = mask_values(m).values
    base = p ** (region + n - 1)
    factors = n + region - 1
    if not m.is_exact:
        mv_arr = np.asarray(mv, dtype=np.complex128)
        d = np.arange(base)
        phi = np.ones(base, dtype=np.complex128)
        for j in range(1, factors + 1):
            phi *= mv_arr[(d // p ** (j - 1)) % p ** n]
        coarse = [complex(v) for v in phi]
    else:
        coarse = []
        for d in range(base):
            value = f.one()
            for j in range(1, factors + 1):
                value = value * mv[(d // p ** (j - 1)) % p ** n]
                if value.is_zero():
                    break
            coarse.append(value)
    repeat = p ** (resolution - (n - 1))
    values = [v for v in coarse for _ in range(repeat)]
    return StepTable(m.prime, resolution, region, values)


def scaling_criteria_check(m: Mask, region: int, max_cells: int = DEFAULT_MAX_CELLS) -> Verdict:
    p, n = m.p, m.n
    f = m.field
    phi = phi_hat(m, region, max_cells=max_cells).values
    mv = mask_values(m).values
    parts = []

    name = "phi_hat(B omega) = m(omega) phi_hat(omega)"
    bad = [d for d in range(p ** (region - 1 + n)) if not f.equal(phi[d], mv[d % p ** n] * phi[d // p])] if region >= 1 else []
    if bad:
        d = bad[0]
        parts.append(
            Verdict.fail(
                name,
                Witness(kind="refinement", description=f"identity fails on cell {Cylinder(m.prime, n, d).token()}", cylinders=(Cylinder(m.prime, n, d),)),
            )
        )
    else:
        parts.append(Verdict.pass_(name, report=[f"checked on B^{max(region - 1, 0)} U* at resolution {n}"]))

    name = "phi_hat vanishes on H-perp minus theta"
    nonzero = [a for a in range(1, p ** region) if not f.is_zero(phi[a * p ** (n - 1)])]
    if nonzero:
        parts.append(
            Verdict.fail(
                name,
                Witness(
                    kind="strang-fix",
                    description=f"phi_hat({nonzero[0]}) = {f.fmt(phi[nonzero[0] * p ** (n - 1)])}",
                    cylinders=tuple(Cylinder(m.prime, n - 1, a * p ** (n - 1)) for a in nonzero[:8]),
                ),
            )
        )
    else:
        parts.append(Verdict.pass_(name, report=[f"checked at the {p ** region - 1} lattice points below {p ** region}"]))

    name = "sum_h |phi_hat(omega + h)|^2 = 1"
    sums = []
    for c in range(p ** (n - 1)):
        total = f.zero()
        for a in range(p ** region):
            total = total + f.abs2(phi[a * p ** (n - 1) + c])
        sums.append(total)
    above = [f.above(s, 1) for s in sums]
    over = [c for c, flag in enumerate(above) if flag]
    short = [c for c, s in enumerate(sums) if not f.equal(s, f.one())]
    report = [f"partial sum on {Cylinder(m.prime, n - 1, c).token()}: {f.fmt(s)}" for c, s in enumerate(sums)]
    unordered = [c for c, flag in enumerate(above) if flag is None]
    if unordered:
        report.append(f"partial sum on {Cylinder(m.prime, n - 1, unordered[0]).token()} is too close to 1 to order")
    if over:
        parts.append(
            Verdict.fail(
                name,
                Witness(kind="partial-sum", description=f"partial sum {f.fmt(sums[over[0]])} exceeds 1", cylinders=(Cylinder(m.prime, n - 1, over[0]),)),
                report=report,
            )
        )
    elif short:
        parts.append(Verdict.undecided(name, region, report=report + ["mass outside B^R U* is not examined"]))
    else:
        parts.append(Verdict.pass_(name, report=report))

    name = "phi_hat(B^-j omega) -> 1"
    if f.equal(phi[0], f.one()):
        parts.append(Verdict.pass_(name, report=[f"phi_hat = 1 on U*_{n - 1}, which holds B^-j omega for j >= n-1 and omega in U*"]))
    else:
        parts.append(Verdict.fail(name, Witness(kind="theta-cell", description=f"phi_hat on the theta cell is {f.fmt(phi[0])}")))

    return weakest("scaling-function criteria", parts, depth=None)


def walsh_orthonormality(p, n: int) -> list[list[Fraction]]:
    """Gram matrix of W*_alpha, alpha < p**n, in L2(U*); the identity matrix."""
    prime = as_prime(p)
    f = ExactField(prime.value)
    size = prime.value ** n
    rows = []
    for alpha in range(size):
        row = []
        for beta in range(size):
            acc = f.zero()
            for c in range(size):
                acc = acc + f.root(pairing(alpha, c, prime.value, n) - pairing(beta, c, prime.value, n))
            row.append((acc / size).rational_value())
        rows.append(row)
    return rows
