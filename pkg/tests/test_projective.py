import numpy as np
import pytest

from design_curves.design_sets import octahedron
from design_curves.errors import OrthogonalFibers, SameFiber
from design_curves.polys import monomial_basis, monomial_values, sphere_average
from design_curves.projective import (
    ProjPoint,
    builtin_projective,
    cp1_from_s2,
    cp_distance,
    fiber_average,
    fiber_curve,
    fiber_point,
    horizontal_lift,
    load_projective,
    proj,
    s2_from_cp1,
    save_projective,
    times_i,
    to_complex,
    verify_projective_design,
)
from design_curves.sphere import arclength_integral, curve_length


def rand_sphere(rng, n, D):
    x = rng.standard_normal((n, D))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def test_proj_examples():
    p = proj([1, 0, 0, 0])
    assert np.allclose(p.rep, [1, 0])
    w = rand_sphere(np.random.default_rng(0), 1, 4)[0]
    assert proj(w) == proj(times_i(w))
    q = proj([0, 0, 0, 1])
    assert np.allclose(q.rep, [0, 1])


def test_distance_examples():
    p = ProjPoint(np.array([1, 0], dtype=complex))
    q = ProjPoint(np.array([0, 1], dtype=complex))
    assert cp_distance(p, p) == 0
    assert cp_distance(p, q) == pytest.approx(np.pi / 2, abs=1e-15)
    O = octahedron().points
    # frozen: phase-sampled minimization oracle gives pi/4 for adjacent vertices
    assert cp_distance(cp1_from_s2(O[0]), cp1_from_s2(O[2])) == pytest.approx(np.pi / 4, abs=1e-12)
    assert cp_distance(cp1_from_s2(O[0]), cp1_from_s2(O[1])) == pytest.approx(np.pi / 2, abs=1e-12)


def test_distance_matches_phase_minimization():
    rng = np.random.default_rng(5)
    zs = np.exp(1j * np.linspace(0, 2 * np.pi, 20001))
    for _ in range(5):
        a, b = rand_sphere(rng, 2, 6)
        za, zb = to_complex(a), to_complex(b)
        # min over phases of the S^{2n+1} angle between a and e^{i phi} b
        brute = np.arccos(np.clip(np.max(np.real(np.vdot(zb, za) * zs)), -1, 1))
        assert cp_distance(proj(a), proj(b)) == pytest.approx(brute, abs=1e-7)


def test_triangle_inequality_cp2():
    rng = np.random.default_rng(11)
    pts = rand_sphere(rng, 3 * 10 ** 4, 6)
    P = [proj(x) for x in pts]
    for k in range(10 ** 4):
        a, b, c = P[3 * k: 3 * k + 3]
        assert cp_distance(a, c) <= cp_distance(a, b) + cp_distance(b, c) + 1e-9
        assert 0 <= cp_distance(a, b) <= np.pi / 2


def test_fiber_curve():
    p = ProjPoint(np.array([1, 0], dtype=complex))
    c = fiber_curve(p)
    assert curve_length(c) == pytest.approx(2 * np.pi)
    s, pts = c.sample(64)
    assert np.allclose(pts[:, 2:], 0) and np.allclose(np.linalg.norm(pts[:, :2], axis=1), 1)
    q = proj(rand_sphere(np.random.default_rng(1), 1, 4)[0])
    for x in fiber_curve(q).sample(50)[1]:
        assert proj(x) == q
    # fibers over distinct points are disjoint
    other = fiber_curve(p).sample(400)[1]
    mine = fiber_curve(q).sample(400)[1]
    assert np.min(np.linalg.norm(other[:, None] - mine[None], axis=2)) > 1e-3


def test_fiber_average_examples():
    p = ProjPoint(np.array([1, 0], dtype=complex))
    assert fiber_average(lambda x: np.ones(len(x)), p, 0) == pytest.approx(1)
    assert fiber_average(lambda x: x[:, 0], p, 1) == pytest.approx(0, abs=1e-15)
    assert fiber_average(lambda x: x[:, 0] ** 2, p, 2) == pytest.approx(0.5, abs=1e-15)
    # trapezoid result agrees with the arc-length integral over the fiber
    q = proj(rand_sphere(np.random.default_rng(2), 1, 6)[0])
    exps = monomial_basis(6, 5)
    f = lambda x: monomial_values(x, exps)
    ref = arclength_integral(fiber_curve(q), f) / (2 * np.pi)
    assert np.allclose(fiber_average(f, q, 5), ref, atol=1e-12)


def test_pullback_constant_on_fibers():
    rng = np.random.default_rng(3)
    for _ in range(5):
        q = proj(rand_sphere(rng, 1, 4)[0])
        pts = fiber_point(q, rng.uniform(0, 2 * np.pi, 50))
        z = to_complex(pts)
        g = np.abs(z[:, 0]) ** 2 * np.real(z[:, 0] * np.conj(z[:, 1]))  # a pulled-back function
        assert np.var(g) < 1e-18


def test_odd_degree_averages_vanish():
    rng = np.random.default_rng(4)
    Y = [proj(x) for x in rand_sphere(rng, 7, 6)]
    exps = monomial_basis(6, 5)
    odd = exps[exps.sum(axis=1) % 2 == 1]
    pick = odd[rng.choice(len(odd), 20, replace=False)]
    for alpha in pick:
        f = lambda x: monomial_values(x, alpha[None, :])
        avg = np.mean([fiber_average(f, y, int(alpha.sum())) for y in Y])
        assert abs(avg) < 1e-10 and sphere_average(alpha) == 0


def test_cp1_bridge():
    assert np.allclose(s2_from_cp1(ProjPoint(np.array([1, 0], dtype=complex))), [1, 0, 0])
    assert cp1_from_s2([1, 0, 0]) == ProjPoint(np.array([1, 0], dtype=complex))
    rng = np.random.default_rng(6)
    pts = rand_sphere(rng, 1000, 3)
    pts[0] = [-1, 0, 0]
    for p in pts:
        assert np.abs(s2_from_cp1(cp1_from_s2(p)) - p).max() < 1e-10
    for a, b in rand_sphere(rng, 200, 3).reshape(100, 2, 3):
        ang = np.arccos(np.clip(a @ b, -1, 1))
        assert cp_distance(cp1_from_s2(a), cp1_from_s2(b)) == pytest.approx(ang / 2, abs=1e-9)
    a = rand_sphere(rng, 1, 3)[0]
    assert cp_distance(cp1_from_s2(a), cp1_from_s2(-a)) == pytest.approx(np.pi / 2, abs=1e-9)


def test_verify_projective():
    O = builtin_projective("cp1-octahedron")
    rep = verify_projective_design(O, 3)
    assert rep.passed and len(rep.defects) == 330
    assert not verify_projective_design(O, 4).passed
    assert verify_projective_design(builtin_projective("cpn-basis", 2), 1).passed
    assert verify_projective_design(builtin_projective("cp1-tetrahedron"), 2).passed
    assert verify_projective_design(builtin_projective("cp1-icosahedron"), 5).passed


def test_projective_round_trip(tmp_path):
    Y = builtin_projective("cp1-icosahedron")
    save_projective(Y, tmp_path / "y.json")
    Z = load_projective(tmp_path / "y.json")
    assert all(a == b for a, b in zip(Y.points, Z.points))


class TestHorizontalLift:
    def test_aligned(self):
        a = 0.7
        q = ProjPoint(np.array([np.cos(a), np.sin(a)], dtype=complex))
        arc = horizontal_lift(np.array([1.0, 0, 0, 0]), q)
        assert arc.length() == pytest.approx(a, abs=1e-14)
        assert proj(arc.end_point) == q

    def test_midpoint_and_horizontality(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            z, w = rand_sphere(rng, 2, 6)
            q = proj(w)
            d = cp_distance(proj(z), q)
            arc = horizontal_lift(z, q)
            assert arc.length() == pytest.approx(d, abs=1e-12)
            mid = arc.points(arc.span / 2)[0]
            assert cp_distance(proj(mid), proj(z)) == pytest.approx(d / 2, abs=1e-9)
            assert cp_distance(proj(mid), q) == pytest.approx(d / 2, abs=1e-9)
            tau = np.linspace(0, arc.span, 11)
            pts, vel, _ = arc.frame(tau)
            for g, dg in zip(pts, vel):
                assert abs(np.dot(dg, times_i(g))) < 1e-8

    def test_errors(self):
        with pytest.raises(OrthogonalFibers):
            horizontal_lift(np.array([1.0, 0, 0, 0]), ProjPoint(np.array([0, 1], dtype=complex)))
        with pytest.raises(SameFiber):
            horizontal_lift(np.array([0.0, 1, 0, 0]), ProjPoint(np.array([1, 0], dtype=complex)))
