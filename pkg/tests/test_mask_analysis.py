import random
from fractions import Fraction

import pytest

from src.errors import DomainError, InputError
from src.masks import (
    Cyclotomic,
    Mask,
    blocked_set_find,
    check_mask_hypotheses,
    inverse_mask_values,
    is_blocked,
    mask_values,
    naive_mask_values,
    phi_hat,
    scaling_criteria_check,
    walsh_orthonormality,
)
from src.masks.mask_analysis import digit_reverse, pairing, qmf_groups
from src.report import Status

HAAR = Mask.exact(2, 1, [Fraction(1, 2), Fraction(1, 2)])
BLOCKED = Mask.exact(2, 2, [Fraction(1, 2), 0, 0, Fraction(1, 2)])


def random_mask(rng, p, n, sum_one=False):
    values = [rng.choice((-1, 0, 0, 1, 2)) for _ in range(p ** n * (p - 1))]
    coefficients = [
        Cyclotomic(p, [Fraction(v, rng.choice((1, 2, 4))) for v in values[i * (p - 1):(i + 1) * (p - 1)]])
        for i in range(p ** n)
    ]
    if sum_one:
        rest = Cyclotomic.zero(p)
        for c in coefficients[1:]:
            rest = rest + c
        coefficients[0] = Cyclotomic.one(p) - rest
    return Mask.exact(p, n, coefficients)


def test_digit_helpers():
    assert digit_reverse(1, 2, 3) == 4
    assert digit_reverse(5, 3, 2) == 7
    # alpha = 3 has digits (1, 1); cell 2 is omega = 0.10
    assert pairing(3, 2, 2, 2) == 1
    assert qmf_groups(2, 2) == [[0, 2], [1, 3]]


def test_haar_mask():
    table = mask_values(HAAR)
    assert table.values == [1, 0]
    assert check_mask_hypotheses(HAAR).status == Status.PASS
    result = blocked_set_find(HAAR)
    assert result.mra
    assert result.cells is None
    assert result.verdict.status == Status.PASS


def test_haar_phi_hat_is_indicator_of_unit():
    table = phi_hat(HAAR, 3)
    assert table.resolution == 0
    assert len(table) == 8
    assert table.values == [1] + [0] * 7
    assert scaling_criteria_check(HAAR, 3).status == Status.PASS


def test_blocked_mask():
    assert mask_values(BLOCKED).values == [1, 0, 0, 1]
    assert check_mask_hypotheses(BLOCKED).status == Status.PASS
    result = blocked_set_find(BLOCKED)
    assert not result.mra
    assert result.cells == [1]
    assert [c.token() for c in result.cylinders(BLOCKED.prime, BLOCKED.n)] == ["0.1"]
    assert result.verdict.status == Status.FAIL
    assert is_blocked(BLOCKED, result.cells)

    # direct enumeration of the blocked-set conditions
    values = mask_values(BLOCKED).values
    p, n = 2, 2
    cells = set(result.cells)
    assert 0 not in cells
    for s in cells:
        for l in range(p):
            c = l * p ** (n - 1) + s
            assert values[c] == 0 or c // p in cells


def test_blocked_mask_phi_hat():
    table = phi_hat(BLOCKED, 1)
    assert table.values == [1, 0, 0, 0]
    verdict = scaling_criteria_check(BLOCKED, 1)
    refinement, strang_fix, partial, limit = verdict.conditions
    assert refinement.status == Status.PASS
    assert strang_fix.status == Status.PASS
    assert partial.status == Status.UNDECIDED
    assert "partial sum on 0.1: 0" in partial.report
    assert limit.status == Status.PASS
    assert verdict.status == Status.UNDECIDED


def test_non_blocked_sets_rejected():
    assert not is_blocked(BLOCKED, [])
    assert not is_blocked(BLOCKED, [0, 1])
    assert not is_blocked(HAAR, [0])


def test_failing_hypotheses():
    m = Mask.exact(2, 1, [1, 1])
    verdict = check_mask_hypotheses(m)
    assert verdict.status == Status.FAIL
    kinds = sorted(w.kind for w in verdict.all_witnesses())
    assert kinds == ["mask-value", "qmf"]
    with pytest.raises(DomainError):
        phi_hat(m, 2)


def test_phi_hat_cell_limit():
    with pytest.raises(InputError):
        phi_hat(HAAR, 10, max_cells=100)
    with pytest.raises(DomainError):
        phi_hat(BLOCKED, 2, resolution=0)


def test_phi_hat_finer_resolution_repeats_cells():
    table = phi_hat(BLOCKED, 1, resolution=2)
    assert table.values == [1, 1, 0, 0, 0, 0, 0, 0]


def test_fast_transform_matches_double_sum():
    rng = random.Random(200)
    for _ in range(200):
        p = rng.choice((2, 3))
        n = rng.randint(1, 3)
        m = random_mask(rng, p, n)
        assert mask_values(m).values == naive_mask_values(m).values


def test_inverse_transform_recovers_coefficients():
    rng = random.Random(5)
    m = random_mask(rng, 3, 2)
    assert inverse_mask_values(mask_values(m)) == list(m.coefficients)
    rebuilt = Mask.from_values(3, 2, mask_values(m).values)
    assert rebuilt.coefficients == m.coefficients


def test_phi_hat_refinement_identity_on_random_masks():
    rng = random.Random(50)
    region = 2
    for _ in range(50):
        p = rng.choice((2, 3))
        n = rng.randint(1, 2)
        m = random_mask(rng, p, n, sum_one=True)
        phi = phi_hat(m, region).values
        mv = mask_values(m).values
        for d in range(p ** (region - 1 + n)):
            assert phi[d] == mv[d % p ** n] * phi[d // p]


def test_float_backend_agrees_with_exact():
    rng = random.Random(9)
    for _ in range(20):
        p = rng.choice((2, 3))
        n = rng.randint(1, 2)
        m = random_mask(rng, p, n)
        floating = Mask.floating(p, n, [c.to_complex() for c in m.coefficients])
        exact = [v.to_complex() for v in mask_values(m).values]
        fast = mask_values(floating).values
        assert all(abs(a - b) < 1e-9 for a, b in zip(exact, fast))
        back = inverse_mask_values(mask_values(floating), floating.field)
        assert all(abs(a - b) < 1e-9 for a, b in zip(back, floating.coefficients))


def test_float_haar():
    m = Mask.floating(2, 1, [0.5, 0.5])
    assert check_mask_hypotheses(m).status == Status.PASS
    assert blocked_set_find(m).mra
    table = phi_hat(m, 2)
    assert [abs(v) for v in table.values] == [1.0, 0.0, 0.0, 0.0]


@pytest.mark.parametrize("p,n", [(2, 2), (3, 1), (3, 2)])
def test_walsh_functions_are_orthonormal(p, n):
    gram = walsh_orthonormality(p, n)
    size = p ** n
    assert gram == [[1 if i == j else 0 for j in range(size)] for i in range(size)]


def test_mask_shape_validation():
    with pytest.raises(InputError):
        Mask.exact(2, 2, [1, 0])
    with pytest.raises(InputError):
        Mask.exact(2, 0, [1])


# rationals whose squares sum to 1, one tuple per prime
UNIT_WEIGHTS = {
    2: (Fraction(3, 5), Fraction(4, 5)),
    3: (Fraction(1, 3), Fraction(2, 3), Fraction(2, 3)),
    5: (Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), 0),
}


def qmf_values(rng, p, n):
    values = [None] * p ** n
    for group in qmf_groups(p, n):
        weights = (1,) + (0,) * (p - 1) if 0 in group else rng.sample(UNIT_WEIGHTS[p], p)
        for c, w in zip(group, weights):
            values[c] = Cyclotomic.zeta_power(p, rng.randrange(p)) * w
    values[0] = Cyclotomic.one(p)
    return values


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2), (5, 1), (5, 2)])
def test_qmf_bounds_every_cell_value(p, n):
    rng = random.Random(40 + p * n)
    for _ in range(5):
        values = qmf_values(rng, p, n)
        m = Mask.from_values(p, n, values)
        assert mask_values(m).values == values
        assert check_mask_hypotheses(m).status == Status.PASS
        for v in mask_values(m).values:
            assert v.abs2.rational_value() <= 1
            assert m.field.above(v.abs2, 1) is False


def test_blocked_set_is_maximal():
    rng = random.Random(31)
    found = 0
    for _ in range(60):
        p = rng.choice((2, 3))
        n = rng.randint(2, 3)
        m = Mask.from_values(p, n, [1] + [rng.choice((0, 0, 1)) for _ in range(p ** n - 1)])
        cells = set(blocked_set_find(m).cells or [])
        if cells:
            found += 1
            assert is_blocked(m, cells)
        for extra in range(1, p ** (n - 1)):
            if extra not in cells:
                assert not is_blocked(m, cells | {extra})
    assert found


def test_transforms_over_p5():
    rng = random.Random(55)
    for n in (1, 2):
        m = random_mask(rng, 5, n)
        assert mask_values(m).values == naive_mask_values(m).values
        assert inverse_mask_values(mask_values(m)) == list(m.coefficients)
