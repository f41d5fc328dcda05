import time

import numpy as np
import pytest

from artifact import (MatingSpec, BicriticalCoefficients, initial_configuration,
                      solve_coefficients, pullback_step, realize_mating)
from artifact.pullback import (MarkedConfiguration, preimages, same_cluster_model,
                               iterate, realize, INF)
from artifact.errors import (BranchAmbiguity, DegenerateImage, InvalidInput,
                             Obstructed, SingularSystem)

from conftest import F_SPEC, G_SPEC, RABBIT_AEROPLANE, FIXED_D3, PERIOD2_D2, realized


def chordal(z, w):
    if np.isinf(z) and np.isinf(w):
        return 0.0
    if np.isinf(z):
        z, w = w, z
    if np.isinf(w):
        return 2 / np.sqrt(1 + abs(z) ** 2)
    return 2 * abs(z - w) / np.sqrt((1 + abs(z) ** 2) * (1 + abs(w) ** 2))


def chain_config(coeffs, z0, n):
    """Labels z0 -> F(z0) -> ... with the last one unused in solves."""
    pos = [complex(z0)]
    for _ in range(n - 1):
        pos.append(complex(coeffs(pos[-1])))
    labels = [f"x{k}" for k in range(n)]
    sig = np.array([min(k + 1, n - 1) for k in range(n)])
    return MarkedConfiguration(labels, np.array(pos), sig, np.ones(n, int),
                               coeffs.degree, {}), labels[:-1]


def critical_orbit_config(coeffs, p):
    """Both critical orbits of a realized map, pushed forward from 0 and inf."""
    w, b = [0j], [INF]
    for _ in range(p - 1):
        w.append(complex(coeffs(w[-1])))
        b.append(complex(coeffs(b[-1])))
    labels = [f"w{k}" for k in range(p)] + [f"b{k}" for k in range(p)]
    sig = np.array([(k + 1) % p for k in range(p)] + [p + (k + 1) % p for k in range(p)])
    deg = np.ones(2 * p, int)
    deg[0] = deg[p] = coeffs.degree
    return MarkedConfiguration(labels, np.array(w + b), sig, deg, coeffs.degree,
                               {"zero": "w0", "inf": "b0", "one": "w1"})


def test_coefficients_evaluate():
    f = BicriticalCoefficients(1 + 1j, -2, 3)
    assert f(0) == 1
    assert abs(f(INF) - (1 + 1j) / -2) < 1e-15
    z = 0.3 - 0.2j
    assert abs(f(z) - ((1 + 1j) * z ** 3 + 1) / (-2 * z ** 3 + 1)) < 1e-15
    h = 1e-7
    assert abs(f.derivative(z) - (f(z + h) - f(z - h)) / (2 * h)) < 1e-6
    assert BicriticalCoefficients.from_dict(f.to_dict()) == f
    with pytest.raises(InvalidInput):
        BicriticalCoefficients(1, 1, 2)


# the critical points are periodic, so they are already points of their own
# orbits: 2 * period marked points in all
@pytest.mark.parametrize("d,count", [(F_SPEC, 8), (RABBIT_AEROPLANE, 6)])
def test_initial_configuration(d, count):
    c = initial_configuration(MatingSpec.from_dict(d))
    assert len(c.labels) == count
    assert sorted(c.sigma) == list(range(count))
    assert c.position(c.pinned["zero"]) == 0
    assert np.isinf(c.position(c.pinned["inf"]))
    assert c.position(c.pinned["one"]) == 1


def test_obstructed_spec_is_refused():
    s = MatingSpec.from_dict({"degree": 2, "white": ["1/7", "2/7"], "black": ["5/7", "6/7"]})
    with pytest.raises(Obstructed):
        initial_configuration(s)


def test_solve_recovers_known_coefficients():
    f = BicriticalCoefficients(1 + 1j, -2, 3)
    cfg, use = chain_config(f, 0.4 + 0.3j, 6)
    g = solve_coefficients(cfg, use)
    assert abs(g.A - f.A) < 1e-12 and abs(g.B - f.B) < 1e-12


def test_solve_random_forward_generated():
    rng = np.random.default_rng(7)
    for _ in range(200):
        d = int(rng.integers(2, 6))
        A, B = rng.normal(size=2) + 1j * rng.normal(size=2)
        f = BicriticalCoefficients(A, B, d)
        cfg, use = chain_config(f, 0.5 * (rng.normal() + 1j * rng.normal()), 4)
        g = solve_coefficients(cfg, use)
        scale = max(1, abs(A), abs(B))
        assert abs(g.A - A) < 1e-8 * scale and abs(g.B - B) < 1e-8 * scale


def test_two_conditions_are_exact():
    f = BicriticalCoefficients(0.5 - 1j, 2 + 1j, 2)
    cfg, use = chain_config(f, 0.7j, 3)
    g = solve_coefficients(cfg, use)
    assert abs(g.A - f.A) < 1e-13 and abs(g.B - f.B) < 1e-13


def test_singular_system():
    f = BicriticalCoefficients(1 + 1j, -2, 3)
    cfg, use = chain_config(f, 0.4 + 0.3j, 3)
    with pytest.raises(SingularSystem):
        solve_coefficients(cfg, use[:1])


def test_preimages():
    f = BicriticalCoefficients(2 - 1j, 0.5j, 3)
    assert preimages(1, f)[0] == 0
    w = 0.3 + 0.8j
    for z in preimages(w, f):
        assert abs(f(z) - w) < 1e-12
    assert len(preimages(w, f)) == 3


def test_pullback_maps_one_to_zero_and_is_identity_on_a_fixed_point():
    coeffs, _, cfg = realized(F_SPEC)
    fwd = critical_orbit_config(coeffs, 4)
    assert max(chordal(a, b) for a, b in zip(fwd.positions, cfg.positions)) < 1e-9
    new = pullback_step(fwd, coeffs)
    assert new.position("w0") == 0
    fin = np.isfinite(fwd.positions)
    assert np.max(np.abs(new.positions[fin] - fwd.positions[fin])) < 1e-10


def test_branch_ambiguity_and_degenerate_image():
    f = BicriticalCoefficients(2, 1j, 2)
    w = 0.5
    r = preimages(w, f)
    mid = (r[0] + r[1]) / 2 + 1e-3 * 1j * (r[0] - r[1])   # equidistant from both roots
    pos = np.array([0, 1, INF, mid, w], complex)
    cfg = MarkedConfiguration(["w0", "w1", "b0", "x", "y"], pos,
                              np.array([1, 1, 2, 4, 3]), np.array([2, 1, 2, 1, 1]), 2,
                              {"zero": "w0", "inf": "b0", "one": "w1"})
    with pytest.raises(BranchAmbiguity):
        pullback_step(cfg, f)
    pos2 = pos.copy()
    pos2[4] = f.A / f.B
    with pytest.raises(DegenerateImage):
        pullback_step(cfg.copy(pos2), f)


@pytest.mark.parametrize("d,A,B", [
    (F_SPEC, 2.52260 + 1.43040j, -4.31748 - 7.21673j),
    (G_SPEC, 1.02505 + 2.73636j, -6.43698 + 5.60985j),
])
def test_published_maps(d, A, B):
    t = time.perf_counter()
    coeffs, trace = realize_mating(MatingSpec.from_dict(d), tol=1e-12, max_iter=500)
    assert time.perf_counter() - t < 10
    assert trace.converged and trace.iterations <= 500
    assert abs(coeffs.A - A) < 1e-3 and abs(coeffs.B - B) < 1e-3


@pytest.mark.parametrize("d", [F_SPEC, G_SPEC, RABBIT_AEROPLANE, FIXED_D3[0], PERIOD2_D2[0]])
def test_forward_consistency_and_normalisation(d):
    coeffs, trace, cfg = realized(d)
    img = coeffs(cfg.positions)
    for i, s in enumerate(cfg.sigma):
        assert chordal(complex(img[i]), complex(cfg.positions[s])) <= 10 * 1e-12
    for pos in cfg.history:
        assert pos[cfg.index(cfg.pinned["zero"])] == 0
        assert np.isinf(pos[cfg.index(cfg.pinned["inf"])])
        assert pos[cfg.index(cfg.pinned["one"])] == 1


@pytest.mark.parametrize("d", [F_SPEC, G_SPEC, RABBIT_AEROPLANE, FIXED_D3[0], PERIOD2_D2[0]])
def test_contraction_at_the_end(d):
    _, trace, _ = realized(d)
    mv = trace.maxMove
    assert (mv[-1] / mv[-10]) ** (1 / 9) < 0.95


def test_rabbit_aeroplane_is_postcritically_finite():
    coeffs, _, _ = realized(RABBIT_AEROPLANE)
    z = 0j
    for _ in range(3):
        z = coeffs(z)
    assert abs(z) < 1e-10
    u = coeffs(INF)
    for _ in range(2):
        u = coeffs(u)
    assert np.isinf(u) or abs(u) > 1e10


def test_deterministic_traces():
    s = MatingSpec.from_dict(RABBIT_AEROPLANE)
    a = realize(s)
    b = realize(s)
    assert a[1].maxMove == b[1].maxMove
    assert a[0] == b[0]


def test_same_cluster_model_collides():
    cfg, trace = iterate(same_cluster_model(3), tol=1e-12, max_iter=500)
    assert trace.collision is not None and not trace.converged
    assert set(trace.collision) == {"w1", "b1"}
