"""Set builders and brute-force oracles shared by the tests."""
import random
from fractions import Fraction

import numpy as np

from src.group import as_prime
from src.sets import Cylinder, CylinderSet, parse_cylinder


def cset(p, *tokens) -> CylinderSet:
    return CylinderSet.of(p, [parse_cylinder(t, p) for t in tokens])


def random_set(rng: random.Random, p: int, max_resolution: int, region: int, count: int = 4) -> CylinderSet:
    """Union of random cylinders of resolution 0..max_resolution inside B^region U*."""
    prime = as_prime(p)
    cylinders = []
    for _ in range(rng.randint(1, count)):
        resolution = rng.randint(0, max_resolution)
        index = rng.randrange(p ** (resolution + region))
        cylinders.append(Cylinder(prime, resolution, index))
    return CylinderSet.of(prime, cylinders)


def random_tiling(rng: random.Random, p: int, resolution: int, spread: int) -> CylinderSet:
    """Cells of [1/p, 1) at one resolution, each dilated by its own random power."""
    prime = as_prime(p)
    cells = range(p ** (resolution - 1), p ** resolution)
    return CylinderSet.of(prime, [Cylinder(prime, resolution, m).dilate(rng.randint(-spread, spread)) for m in cells])


def refined_cells(s: CylinderSet, resolution: int) -> set[int]:
    out = set()
    for c in s:
        out.update(x.index for x in c.refine(resolution))
    return out


def _valuation(q: Fraction, p: int) -> int:
    n, d, v = q.numerator, q.denominator, 0
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _runs(cells: list[int], resolution: int, p: int) -> list[tuple[Fraction, Fraction]]:
    """Maximal runs of consecutive cell indices as half-open intervals."""
    out = []
    for m in sorted(cells):
        lo, hi = Fraction(m, p ** resolution), Fraction(m + 1, p ** resolution)
        if out and out[-1][1] == lo:
            out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return out


def dilation_counts(p: int, intervals, region: int, resolution: int) -> tuple[np.ndarray, int]:
    """How often each resolution cell of [0, p**region) is hit by the dilates p**k [lo, hi).

    Dilates too fine for the grid are skipped; the second value is the first
    cell index above all of them, so counts from there on are exact.
    """
    grid = Fraction(p) ** resolution
    top = Fraction(p) ** region
    size = p ** (region + resolution)
    counts = np.zeros(size, dtype=np.int32)
    floor = Fraction(p) ** -resolution
    for lo, hi in intervals:
        nonzero = [_valuation(x, p) for x in (lo, hi) if x]
        k = -resolution - min(nonzero)
        floor = max(floor, hi * Fraction(p) ** (k - 1))
        full = 0
        while lo * Fraction(p) ** k < top and full < 2:
            scale = Fraction(p) ** k * grid
            start, stop = int(lo * scale), int(hi * scale)
            counts[start:min(stop, size)] += 1
            if stop >= size:
                full += 1
            k += 1
    level = -resolution
    while Fraction(p) ** level < floor:
        level += 1
    return counts, p ** (level + resolution)


def oracle_tiles(s: CylinderSet, region: int = 6, resolution: int = 6) -> bool:
    """Every cell above the skipped dilates is covered by exactly one p**k S."""
    return _tiles(s.p, [(c.lo, c.hi) for c in s], region, resolution)


def _tiles(p: int, intervals, region: int, resolution: int) -> bool:
    if not intervals:
        return False
    counts, first = dilation_counts(p, intervals, region, resolution)
    assert first < counts.size, "no annulus is resolved on this grid"
    return bool(np.all(counts[first:] == 1))


def _rho_bijective(cells: set[int], p: int, resolution: int) -> bool:
    images = {m % p ** resolution for m in cells}
    return len(cells) == p ** resolution and len(images) == p ** resolution


def oracle_congruent(s: CylinderSet) -> bool:
    """rho is a bijection onto U*: every resolution-K cell of U* is hit exactly once."""
    k = max(0, s.finest_resolution() or 0)
    return _rho_bijective(refined_cells(s, k), s.p, k)


def oracle_eta(s: CylinderSet, resolution: int) -> list[int]:
    p = s.p
    eta = [0] * p ** resolution
    for m in refined_cells(s, resolution):
        eta[m % p ** resolution] += 1
    return eta


def oracle_gss(s: CylinderSet, region: int = 6, resolution: int = 6) -> bool:
    """Measure 1/(p-1) and BS minus S a wavelet set, with BS built cell by cell."""
    p = s.p
    if s.measure * (p - 1) != 1:
        return False
    cells = refined_cells(s, resolution)
    scaled = {m * p + d for m in cells for d in range(p)}
    w = scaled - cells
    return _rho_bijective(w, p, resolution) and _tiles(p, _runs(w, resolution, p), region, resolution)
