import json

import numpy as np
import pytest

from design_curves.design_sets import (
    WeightedDesignSet,
    builtin_set,
    cross_polytope,
    load_set,
    octahedron,
    polygon,
    save_set,
    simplex,
    tetrahedron,
    verify_weighted_design_set,
)
from design_curves.errors import DimensionMismatch, InvariantViolation, ParseError, UnknownFamily

BUILTINS = ["polygon-3", "polygon-4", "polygon-7", "simplex-2", "simplex-3", "simplex-4",
            "cross-polytope-2", "cross-polytope-3", "octahedron", "tetrahedron", "icosahedron"]


@pytest.mark.parametrize("name", BUILTINS)
def test_builtin_strength_is_sharp(name):
    X = builtin_set(name)
    assert verify_weighted_design_set(X, X.strength).passed
    assert not verify_weighted_design_set(X, X.strength + 1).passed


def test_builtin_examples():
    sq = builtin_set("polygon-4")
    assert len(sq) == 4 and sq.strength == 3 and sq.dimension == 2
    assert verify_weighted_design_set(sq, 3).max_defect < 1e-12
    O = octahedron()
    assert O.points.tolist() == [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]]
    S = simplex(3)
    assert len(S) == 5 and S.dimension == 4 and S.strength == 2
    T = tetrahedron()
    assert np.allclose(T.points @ T.points.T - np.eye(4), -(1 / 3) * (1 - np.eye(4)) - 0 * np.eye(4))


def test_octahedron_fails_at_four_on_x1_4():
    rep = verify_weighted_design_set(octahedron(), 4)
    assert not rep.passed
    assert rep.defect_of((4, 0, 0)) >= 2 / 15 - 1e-9


def test_single_point_strength_zero():
    X = WeightedDesignSet.uniform([[0.0, 0.0, 1.0]])
    assert verify_weighted_design_set(X, 0).passed


def test_permutation_invariance():
    X = builtin_set("icosahedron")
    rng = np.random.default_rng(3)
    w = rng.uniform(0.5, 1.5, len(X))
    X = WeightedDesignSet(X.points, w / w.sum())
    a = verify_weighted_design_set(X, 4).defects
    b = verify_weighted_design_set(X.permuted(rng.permutation(len(X))), 4).defects
    assert np.allclose(a, b, atol=1e-15)


def test_invariants():
    with pytest.raises(InvariantViolation):
        WeightedDesignSet([[1.0, 0.0], [0.0, 1.0]], [0.45, 0.45])
    with pytest.raises(InvariantViolation):
        WeightedDesignSet([[1.0, 0.1]], [1.0])
    with pytest.raises(InvariantViolation):
        WeightedDesignSet([[1.0, 0.0], [0.0, 1.0]], [1.5, -0.5])
    with pytest.raises(DimensionMismatch):
        verify_weighted_design_set(octahedron(), 2, dimension=4)
    with pytest.raises(UnknownFamily):
        builtin_set("dodecahedron")


def test_round_trip(tmp_path):
    for X in (octahedron(), simplex(3), polygon(5, phase=0.3)):
        path = tmp_path / "x.json"
        save_set(X, path)
        data = json.loads(path.read_text())
        assert data["dimension"] == X.dimension and data["strength"] == X.strength
        Y = load_set(path)
        assert np.abs(Y.points - X.points).max() <= 1e-15
        assert np.abs(Y.weights - X.weights).max() <= 1e-15


def test_load_errors(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"dimension": 2, "points": [[1, 0], [0, 1]], "weights": [0.45, 0.45]}')
    with pytest.raises(InvariantViolation):
        load_set(p)
    p.write_text('{"dimension": 2, "points": [[1, 0.2]], "weights": [1]}')
    with pytest.raises(InvariantViolation):
        load_set(p)
    p.write_text("{not json")
    with pytest.raises(ParseError):
        load_set(p)
    p.write_text('{"points": [[1, 0]]}')
    with pytest.raises(ParseError):
        load_set(p)
