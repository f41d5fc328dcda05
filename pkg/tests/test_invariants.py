import numpy as np
import pytest

from artifact import BicriticalCoefficients, spectrum, equivalent, compare
from artifact.invariants import (RationalMap, as_rational, conjugate, scale_conjugate,
                                 compose, multiset_distance, spectrum_distance,
                                 swap_critical_labels, symmetry_orbit, polish_roots)
from artifact.errors import RootFindingFailure

from conftest import F_SPEC, G_SPEC, realized

# Spectrum of the realized F.  Checked against Newton's method on F(z) - z
# and F(F(z)) - z from 4000 random seeds (agreement to 1e-12), then frozen.
F_FIXED = [-2.12058706 - 2.29717688j, -2.12058706 - 2.29717688j,
           -1.68613634 + 1.40656321j, -1.68613634 + 1.40656321j]
F_PERIOD_TWO = [-3.31598321 + 3.21666624j, -3.31598321 + 3.21666624j,
                -1.21296008 + 0.00151886j, -1.21296008 + 0.00151886j, 9, 9]


def random_map(rng, d):
    A, B = rng.normal(size=2) + 1j * rng.normal(size=2)
    return BicriticalCoefficients(complex(A), complex(B), d)


def test_square_map():
    sq = RationalMap(np.array([1, 0, 0], complex), np.array([0, 0, 1], complex))
    s = spectrum(sq)
    assert multiset_distance(s.fixedPointMultipliers, [0, 0, 2]) < 1e-9
    assert multiset_distance(s.periodTwoMultipliers, [4, 4]) < 1e-9


def test_F_spectrum_golden():
    coeffs, _, _ = realized(F_SPEC)
    s = spectrum(coeffs)
    assert multiset_distance(s.fixedPointMultipliers, F_FIXED) < 1e-6
    assert multiset_distance(s.periodTwoMultipliers, F_PERIOD_TWO) < 1e-6


def test_spectrum_sizes():
    rng = np.random.default_rng(3)
    for d in (2, 3, 4):
        s = spectrum(random_map(rng, d))
        assert len(s.fixedPointMultipliers) == d + 1
        assert len(s.periodTwoMultipliers) == d * d - d


def test_conjugation_by_scaling():
    coeffs, _, _ = realized(F_SPEC)
    a = spectrum(coeffs)
    b = spectrum(scale_conjugate(coeffs, 2.0))
    assert spectrum_distance(a, b) < 1e-10


def test_conjugate_and_compose_agree_with_evaluation():
    rng = np.random.default_rng(5)
    f = random_map(rng, 3)
    M = np.array([[1, 0.5j], [0.2, 1]])
    g = conjugate(f, M)
    z = 0.3 + 0.1j
    Mi = lambda w: (M[1, 1] * w - M[0, 1]) / (-M[1, 0] * w + M[0, 0])
    Mz = lambda w: (M[0, 0] * w + M[0, 1]) / (M[1, 0] * w + M[1, 1])
    assert abs(g(z) - Mz(f(Mi(z)))) < 1e-10
    h = compose(f, f)
    assert abs(h(z) - f(f(z))) < 1e-9 * max(1, abs(h(z)))


def test_residual_symmetry_leaves_spectrum_unchanged():
    rng = np.random.default_rng(11)
    for d in (2, 3, 4, 5):
        for _ in range(5):
            f = random_map(rng, d)
            base = spectrum(f)
            for k in range(d - 1):
                lam = np.exp(2j * np.pi * k / (d - 1))
                assert spectrum_distance(base, spectrum(scale_conjugate(f, lam))) < 1e-6
            assert spectrum_distance(base, spectrum(swap_critical_labels(f))) < 1e-6


def test_swap_is_an_involution_and_a_conjugacy():
    f = BicriticalCoefficients(1.3 - 0.4j, -2 + 0.5j, 3)
    g = swap_critical_labels(f)
    assert g(0) == 1
    back = swap_critical_labels(g)
    assert abs(back.A - f.A) < 1e-12 and abs(back.B - f.B) < 1e-12
    # phi(z) = (A/B) / z swaps 0 and infinity and conjugates f to g
    lam = f.A / f.B
    for z in (0.4 + 0.7j, -1.1 + 0.2j, 2.5j):
        assert abs(g(lam / z) - lam / f(z)) < 1e-12 * max(1, abs(lam / f(z)))
    assert len(symmetry_orbit(f)) == 1 and len(symmetry_orbit(f, labelled=False)) == 2


def test_equivalence_laws():
    rng = np.random.default_rng(2)
    maps = [random_map(rng, 3) for _ in range(6)]
    for f in maps:
        assert equivalent(f, f)
        for g in maps:
            assert equivalent(f, g) == equivalent(g, f)
    f = maps[0]
    g = swap_critical_labels(f)
    h = swap_critical_labels(g)
    assert equivalent(f, h) and equivalent(g, g)
    assert equivalent(f, g, labelled=False) and equivalent(g, h, labelled=False)
    assert equivalent(f, h, labelled=False)


def test_F_and_G_differ():
    F = realized(F_SPEC)[0]
    G = realized(G_SPEC)[0]
    r = compare(F, G)
    assert r["equivalent"] is False and r["spectrum_distance"] > 1e-3


def test_degree_mismatch():
    f = BicriticalCoefficients(1, 2, 2)
    g = BicriticalCoefficients(1, 2, 3)
    assert compare(f, g)["equivalent"] is False


def test_polish_roots_failure():
    with pytest.raises(RootFindingFailure):
        polish_roots([1, -4, 6, -4, 1], tol=1e-20)     # fourfold root


def test_as_rational_rejects_other_types():
    with pytest.raises(TypeError):
        as_rational("z^2")
