import itertools

import numpy as np
import pytest

from design_curves.assembly import (
    a_priori_eps,
    asymptotic_pipeline,
    assemble,
    assemble_gamma,
    build_mst,
    distance_matrix,
    empirical_defect,
    overlap_bound,
    rescale_c,
    tree_constants,
)
from design_curves.errors import DeltaOutOfRange, DuplicatePoints, EdgeTooLong
from design_curves.polys import monomial_basis, monomial_sups, monomial_values, sphere_averages
from design_curves.projective import (
    ProjPoint,
    ProjectiveDesignSet,
    builtin_projective,
    fiber_curve,
    proj,
)
from design_curves.sphere import arclength_integral, curve_length, is_simple

# frozen: brute-force MST over the 15 pairwise distances (12 at pi/4, 3 at pi/2)
W_O = 5 * np.pi / 2


def cp1(angle, phase=0.0):
    return ProjPoint(np.array([np.cos(angle), np.sin(angle) * np.exp(1j * phase)]))


@pytest.fixture(scope="module")
def octa():
    return builtin_projective("cp1-octahedron")


@pytest.fixture(scope="module")
def octa_assembly(octa):
    return assemble(octa, 0.1)


def brute_mst_weight(D):
    n = len(D)
    best = np.inf
    pairs = list(itertools.combinations(range(n), 2))
    for edges in itertools.combinations(pairs, n - 1):
        comp = list(range(n))

        def find(a):
            while comp[a] != a:
                a = comp[a]
            return a

        ok = True
        for i, j in edges:
            ri, rj = find(i), find(j)
            if ri == rj:
                ok = False
                break
            comp[ri] = rj
        if ok:
            best = min(best, sum(D[i, j] for i, j in edges))
    return best


class TestMST:
    def test_two_points(self):
        Y = ProjectiveDesignSet((cp1(0.0), cp1(0.4)))
        T = build_mst(Y)
        assert len(T.edges) == 1 and T.edges[0][2] == pytest.approx(0.4)

    def test_octahedron(self, octa):
        D = distance_matrix(octa)
        d = np.sort(D[np.triu_indices(6, 1)])
        assert np.allclose(d[:12], np.pi / 4) and np.allclose(d[12:], np.pi / 2)
        T = build_mst(octa)
        assert len(T.edges) == 5 and T.root == 0
        assert all(w == pytest.approx(np.pi / 4) for _, _, w in T.edges)
        assert 2 * T.total_weight == pytest.approx(W_O, abs=1e-12)

    def test_random_against_brute_force(self):
        rng = np.random.default_rng(2)
        for _ in range(5):
            pts = rng.standard_normal((6, 2)) + 1j * rng.standard_normal((6, 2))
            Y = ProjectiveDesignSet(tuple(ProjPoint(p / np.linalg.norm(p)) for p in pts))
            T = build_mst(Y)
            assert T.total_weight == pytest.approx(brute_mst_weight(distance_matrix(Y)), abs=1e-12)
            # connected and acyclic
            seen = {T.root}
            for p, c, w in T.edges:
                assert p in seen and c not in seen and 0 < w <= np.pi / 2
                seen.add(c)
            assert len(seen) == 6

    def test_collinear_triple(self):
        Y = ProjectiveDesignSet((cp1(0.0), cp1(0.1), cp1(0.3), cp1(0.3, np.pi / 2)))
        D = distance_matrix(Y)
        assert D[0, 1] == pytest.approx(0.1) and D[0, 2] == pytest.approx(0.3)
        Y3 = ProjectiveDesignSet((cp1(0.0), cp1(0.1), cp1(0.3, 1.0)))
        T = build_mst(Y3)
        ws = sorted(w for _, _, w in T.edges)
        D3 = distance_matrix(Y3)
        assert ws == pytest.approx(sorted(np.sort(D3[np.triu_indices(3, 1)])[:2]))

    def test_duplicates(self):
        with pytest.raises(DuplicatePoints):
            build_mst(ProjectiveDesignSet((cp1(0.2), cp1(0.2), cp1(1.0))))


class TestConstants:
    def test_octahedron(self, octa):
        K = tree_constants(build_mst(octa), 0.1)
        assert K.W == pytest.approx(W_O, abs=1e-12)
        assert K.delta_tilde == pytest.approx(0.01, abs=1e-15)
        assert K.W <= 2 * 5 * np.pi / 2
        assert K.M == pytest.approx(2 * np.pi * 5 / K.N)

    def test_star(self):
        Y = ProjectiveDesignSet((cp1(0.0), cp1(0.3, 0.0), cp1(0.3, 2.1), cp1(0.3, 4.2)))
        T = build_mst(Y)
        assert T.max_degree == 3
        K = tree_constants(T, 0.1)
        assert K.M == pytest.approx(2 * np.pi)

    def test_delta_range(self, octa):
        T = build_mst(octa)
        M = tree_constants(T, 0.1).M
        for bad in (M, 2 * M, 0.0, -0.1):
            with pytest.raises(DeltaOutOfRange):
                tree_constants(T, bad)


class TestAssemble:
    def test_octahedron_length(self, octa_assembly):
        A = octa_assembly
        assert A.simple and A.curve.closed and A.curve.is_geodesic
        assert A.length == pytest.approx(12 * np.pi + W_O - 0.1, abs=1e-9)
        fiber = sum(a.length() for a in A.fiber_arcs)
        lifts = sum(a.length() + b.length() for a, b in A.lift_arcs)
        assert fiber == pytest.approx(12 * np.pi - 0.1, abs=1e-9)
        assert lifts == pytest.approx(W_O, abs=1e-9)

    def test_twins(self, octa_assembly):
        for a, b in octa_assembly.lift_arcs:
            assert abs(a.length() - b.length()) < 1e-12

    def test_gap_disjointness(self, octa_assembly):
        dt = octa_assembly.constants.delta_tilde
        for y, gaps in octa_assembly.gaps.items():
            g = np.asarray(gaps)
            steps = np.diff(np.concatenate([g, [g[0] + 2 * np.pi]]))
            assert np.all(steps > dt), y

    def test_node_degrees(self, octa_assembly):
        A = octa_assembly
        deg = {}
        for seg in list(A.fiber_arcs) + [arc for pair in A.lift_arcs for arc in pair]:
            for node in (seg.start_node, seg.end_node):
                deg[node] = deg.get(node, 0) + 1
        assert set(deg.values()) == {2}
        assert is_simple(A.curve).simple

    def test_two_points(self):
        d = 0.6
        Y = ProjectiveDesignSet((cp1(0.0), cp1(d, 0.5)))
        A = assemble(Y, 0.05)
        assert A.length == pytest.approx(4 * np.pi + 2 * d - 0.05, abs=1e-9)
        assert A.simple

    def test_random_sets_conserve_length(self):
        rng = np.random.default_rng(7)
        for n in (3, 4, 5):
            pts = rng.standard_normal((n, 3)) + 1j * rng.standard_normal((n, 3))
            Y = ProjectiveDesignSet(tuple(ProjPoint(p / np.linalg.norm(p)) for p in pts))
            A = assemble(Y, 0.05, seed=3)
            W = A.constants.W
            assert A.length == pytest.approx(2 * np.pi * n + W - 0.05, abs=1e-9)

    def test_errors(self, octa):
        M = tree_constants(build_mst(octa), 0.1).M
        with pytest.raises(DeltaOutOfRange):
            assemble(octa, 2 * M)
        Y = ProjectiveDesignSet((cp1(0.0), cp1(np.pi / 2)))
        with pytest.raises(EdgeTooLong):
            assemble(Y, 0.1)

    def test_deterministic(self, octa):
        a = assemble_gamma(octa, delta=0.1, seed=4)
        b = assemble_gamma(octa, delta=0.1, seed=4)
        sa, pa = a.sample(200)
        sb, pb = b.sample(200)
        assert np.array_equal(pa, pb)


class TestAccounting:
    def test_a_priori(self):
        eps, c = a_priori_eps(6, W_O, 0.1)
        assert eps == pytest.approx((W_O + 0.1) / (12 * np.pi), abs=1e-15)
        assert c == pytest.approx(1 / (12 * np.pi), abs=1e-15)
        assert a_priori_eps(6, 1e-15, 1e-15)[0] < 1e-15
        with pytest.raises(ValueError):
            a_priori_eps(1, 0.0, 0.1)

    def test_rescale(self):
        assert rescale_c(0.2, 0.1, 3.0, 0.1) == 0.2
        assert rescale_c(0.0, 0.0, 2 * np.pi, 1 / (2 * np.pi)) == pytest.approx(1.0)

    def test_overlap(self):
        assert overlap_bound(0.1, 0.5, 2.0, 2.0, 2.0) == pytest.approx(0.1)
        n, W, d = 6, W_O, 0.1
        L = 2 * np.pi * n
        got = overlap_bound(0.0, 1 / L, L, L + W - d, L - d)
        assert got == pytest.approx((W + d) / L, abs=1e-15)
        assert overlap_bound(0.1, 0.5, 1.0, 2.0, 0.0) == pytest.approx(0.1 + 1.5)

    def test_exact_fiber_union(self, octa):
        fibers = [fiber_curve(p) for p in octa.points]
        rep = empirical_defect(fibers, 7, 1 / (12 * np.pi))
        assert rep.max_defect < 1e-9

    def test_assembled_bound(self, octa_assembly):
        eps, c = a_priori_eps(6, W_O, 0.1)
        rep = empirical_defect(octa_assembly.curve, 7, c, eps_claimed=eps)
        assert rep.max_defect <= eps + 1e-9
        ell = octa_assembly.length
        rep2 = empirical_defect(octa_assembly.curve, 7, 1 / ell)
        assert rep2.max_defect <= W_O / (6 * np.pi) + 1e-9
        assert rescale_c(eps, c, ell, 1 / ell) <= W_O / (6 * np.pi) + 1e-12

    def test_constant_only(self, octa_assembly):
        c = 0.01
        rep = empirical_defect(octa_assembly.curve, 0, c)
        assert rep.max_defect == pytest.approx(abs(c * octa_assembly.length - 1), abs=1e-12)

    def test_lp_consistency(self, octa_assembly):
        rng = np.random.default_rng(9)
        x = rng.standard_normal((10 ** 5, 4))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        exps = monomial_basis(4, 4)
        vals = monomial_values(x, exps)
        c = 1 / octa_assembly.length
        got = c * np.atleast_1d(arclength_integral(octa_assembly.curve, lambda p: monomial_values(p, exps)))
        raw = np.abs(got - sphere_averages(exps))
        sup = monomial_sups(exps)
        for p in (2, 4):
            norm_p = np.mean(np.abs(vals) ** p, axis=0) ** (1 / p)
            assert np.all(norm_p <= sup + 1e-12)
            assert np.all(raw / norm_p >= raw / sup - 1e-15)


class TestPipeline:
    def test_single_entry(self, octa):
        rows = asymptotic_pipeline([(7, octa)])
        assert len(rows) == 1
        r = rows[0]
        assert r["valid"] and r["W"] == pytest.approx(W_O)
        assert r["delta"] == pytest.approx(1 / 7)
        assert r["length"] == pytest.approx(12 * np.pi + W_O - 1 / 7, abs=1e-9)
        assert r["eps"] == pytest.approx(W_O / (6 * np.pi))
        assert r["eps_empirical"] <= r["eps"] + 1e-9

    def test_empty(self):
        assert asymptotic_pipeline([]) == []

    def test_invalid(self):
        Y = ProjectiveDesignSet((cp1(0.0), cp1(0.3)))
        rows = asymptotic_pipeline([(4, Y)])
        assert rows == [{"t": 4, "Y_size": 2, "valid": False}]
