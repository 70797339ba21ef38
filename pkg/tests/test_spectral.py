import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from positivity_kit.errors import DomainError
from positivity_kit.spectral import (HEJHAL_MU, LanglandsParams, ResidueSpec, ThreeValueConfig,
                                     certified_d, eigenvalue_from_d, hejhal_residue_eigenvalue,
                                     hejhal_threshold, laplace_eigenvalue, lubotzky_rows,
                                     lubotzky_table, monte_carlo_excess, negative_radius,
                                     partitions, residue_identity_rhs, residue_params,
                                     residue_shifts, scan_partitions, three_value_max,
                                     three_value_points, trivial_bound)
from published import (CERTIFIED_D, EIGENVALUE_BOUNDS, FIRST_SL2_EIGENVALUE,
                       HEJHAL_EIGENVALUE_ABSTRACT, HEJHAL_EIGENVALUE_THEOREM, LUBOTZKY_ROWS,
                       truncation_matches)


def test_laplace_eigenvalue_examples():
    lam = laplace_eigenvalue(LanglandsParams(2, (9.534j, -9.534j)))
    assert lam == pytest.approx(0.25 + 9.534 ** 2, abs=1e-12)
    # 9.534 is itself rounded, so the published eigenvalue is met to about 0.006
    assert abs(lam - FIRST_SL2_EIGENVALUE) < 0.01
    assert laplace_eigenvalue(LanglandsParams(3, (0, 0, 0))) == 1.0


def test_laplace_eigenvalue_errors():
    with pytest.raises(DomainError):
        LanglandsParams(2, (0.6, -0.6))
    with pytest.raises(DomainError):
        LanglandsParams(3, (0, 0))
    with pytest.raises(DomainError):
        laplace_eigenvalue(LanglandsParams(2, (0.1 + 1j, 0.1 - 2j)))


def test_trivial_bound_examples():
    assert trivial_bound(2).sum_sq == pytest.approx(103.68, abs=1e-12)
    nine = trivial_bound(9)
    assert nine.sum_sq == pytest.approx(58.32, abs=1e-12)
    assert nine.minus_sum_mu_sq == pytest.approx(56.07, abs=1e-12)
    assert trivial_bound(10).minus_sum_mu_sq == pytest.approx(55.10, abs=1e-12)
    assert nine.eigenvalue == pytest.approx(58.32 / 2 + (729 - 36) / 24)
    with pytest.raises(DomainError):
        trivial_bound(1)


def test_negative_radius(sgrid):
    assert 7.2 <= negative_radius(sgrid) < 7.4


@pytest.mark.parametrize("n", range(3, 13))
def test_partitions(n):
    parts = partitions(n)
    assert len(parts) == len(set(parts))
    for A, B, C in parts:
        assert A >= B >= C > 0 and A + B + C == n
    brute = {(A, B, n - A - B) for A in range(n) for B in range(1, A + 1)
             if 0 < n - A - B <= B}
    assert set(parts) == brute


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([(1, 1, 1), (2, 1, 1), (3, 2, 1), (4, 2, 2), (2, 2, 2)]),
       st.floats(1, 800), st.floats(-math.pi / 2, 3 * math.pi / 2))
def test_three_value_points_satisfy_constraints(abc, d, phi):
    A, B, C = abc
    cfg = ThreeValueConfig(A + B + C, d, A, B, C)
    r1, r2, r3 = three_value_points(cfg, phi)
    assert abs(A * r1 + B * r2 + C * r3) <= 1e-9 * math.sqrt(d)
    assert A * r1 ** 2 + B * r2 ** 2 + C * r3 ** 2 == pytest.approx(d, rel=1e-12)
    assert abs(r3) <= cfg.r3_range * (1 + 1e-12)


def test_three_value_config_validation():
    with pytest.raises(DomainError):
        ThreeValueConfig(3, 10, 1, 2, 0)
    with pytest.raises(DomainError):
        ThreeValueConfig(4, 10, 2, 1, 0)
    with pytest.raises(DomainError):
        ThreeValueConfig(3, 0, 1, 1, 1)


def test_three_value_examples(sgrid):
    assert three_value_max(ThreeValueConfig(3, 174, 1, 1, 1), sgrid).bound < 0
    tiny = three_value_max(ThreeValueConfig(3, 1, 1, 1, 1), sgrid)
    assert tiny.bound < 0 and max(abs(r) for r in tiny.argmax) < 7.2
    assert scan_partitions(8, 424, sgrid).certified
    with pytest.raises(DomainError):
        three_value_max(ThreeValueConfig(3, 31.0 ** 2, 1, 1, 1), sgrid)


@pytest.mark.parametrize("n", [3, 6])
def test_certified_d_examples(sgrid, n):
    row = certified_d(n, sgrid)
    assert row.d == CERTIFIED_D[n]
    assert row.eigenvalue == EIGENVALUE_BOUNDS[n]
    assert row.eigenvalue - (n ** 3 - 4 * n) / 24 == row.d / 2
    assert row.margin_at_d < 0 < row.max_at_d_plus_1


def test_certified_d_monotone(sgrid):
    ds = [certified_d(n, sgrid, lo=150).d for n in range(3, 9)]
    assert ds == sorted(ds)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_monte_carlo_never_beats_three_values(sgrid, n):
    d = CERTIFIED_D[n]
    worst = scan_partitions(n, d, sgrid).worst
    random_best, three_best = monte_carlo_excess(n, d, samples=100_000, seed=n, grid=sgrid)
    assert random_best <= three_best + worst.pad


def test_residue_examples():
    const = ResidueSpec(1, 9)
    assert laplace_eigenvalue(residue_params(const)) == pytest.approx(0.0, abs=1e-12)
    cusp = (3j, 2j, -5j)
    own = laplace_eigenvalue(LanglandsParams(3, cusp))
    assert laplace_eigenvalue(residue_params(ResidueSpec(3, 1, cusp))) == pytest.approx(own)
    lam = laplace_eigenvalue(residue_params(ResidueSpec(2, 34, (HEJHAL_MU * 1j, -HEJHAL_MU * 1j))))
    assert lam == pytest.approx(hejhal_residue_eigenvalue(), abs=1e-9)
    assert abs(lam - HEJHAL_EIGENVALUE_THEOREM) <= 0.5


def test_residue_shifts():
    assert np.array_equal(residue_shifts(3), [1.0, 0.0, -1.0])
    assert np.array_equal(residue_shifts(4), [1.5, 0.5, -0.5, -1.5])


def test_residue_identity_random():
    rng = np.random.default_rng(500)
    for _ in range(500):
        a = int(rng.integers(1, 9))
        r = int(rng.integers(1, 12))
        im = rng.normal(0, 8, a)
        im -= im.mean()
        spec = ResidueSpec(a, r, tuple(1j * im))
        n = a * r
        lam = laplace_eigenvalue(residue_params(spec))
        assert 2 * lam - (n ** 3 - n) / 12 == pytest.approx(residue_identity_rhs(spec), abs=1e-10 * max(1, n ** 3))
        assert residue_params(spec).n == n


def test_residue_spec_validation():
    with pytest.raises(DomainError):
        ResidueSpec(0, 3)
    with pytest.raises(DomainError):
        ResidueSpec(2, 3, (1j,))


def test_hejhal_threshold_and_eigenvalue():
    report = lubotzky_table(CERTIFIED_D)
    assert abs(report.threshold - 33.04) <= 0.01
    assert report.threshold_exact == pytest.approx(hejhal_threshold(2 * HEJHAL_MU ** 2))
    assert abs(report.eigenvalue_68 - HEJHAL_EIGENVALUE_THEOREM) <= 0.5
    assert report.eigenvalue_68_rounded == pytest.approx(HEJHAL_EIGENVALUE_THEOREM, abs=0.05)
    assert report.bound_68 == 13098.5
    assert report.eigenvalue_68 < report.bound_68
    # the rounded headline value differs from both recomputations by about 10
    assert abs(report.eigenvalue_68 - HEJHAL_EIGENVALUE_ABSTRACT) > 9


def test_lubotzky_rows_match_table():
    rows = {row.a: row for row in lubotzky_rows(CERTIFIED_D)}
    assert set(rows) == set(range(3, 35))
    for a, (r, lower, upper) in LUBOTZKY_ROWS.items():
        row = rows[a]
        assert row.r_max == r
        assert truncation_matches(upper, row.upper)
        assert row.contradiction
        if a == 3:
            assert row.lower == 173.25 and lower == 171.25
        else:
            assert truncation_matches(lower, row.lower), (a, lower, row.lower)


def test_lubotzky_consistency_all_pairs():
    lower = {row.a: row.lower for row in lubotzky_rows(CERTIFIED_D)}
    for a in range(3, 35):
        for r in range(1, 68):
            if 2 <= r * a < 68:
                assert lower[a] > a * (r * r - 1) / 12
    # a = 2: the residue eigenvalue stays below the bound exactly while r < threshold
    for r in range(1, 34):
        assert r < hejhal_threshold(2 * HEJHAL_MU ** 2)
    assert hejhal_residue_eigenvalue(34) < (68 ** 3 - 68) / 24


def test_eigenvalue_from_d():
    assert eigenvalue_from_d(3, 174) == 87.625
    assert eigenvalue_from_d(8, 424) == 232.0
