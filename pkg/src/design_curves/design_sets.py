"""Weighted t-design sets: built-in configurations, JSON I/O, verification."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvariantViolation, ParseError, UnknownFamily
from .polys import monomial_basis, monomial_values, sphere_averages
from .report import DesignReport, default_tol


@dataclass(frozen=True, eq=False)
class WeightedDesignSet:
    """Points on S^{D-1} (ambient dimension D) with positive weights summing to 1."""

    points: np.ndarray
    weights: np.ndarray
    strength: int = 0
    name: str = ""

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if len(pts) != len(w):
            raise DimensionMismatch(f"{len(pts)} points but {len(w)} weights")
        if pts.shape[1] < 1:
            raise DimensionMismatch("points need at least one coordinate")
        norms = np.linalg.norm(pts, axis=1)
        bad = np.nonzero(np.abs(norms - 1) > 1e-12)[0]
        if bad.size:
            raise InvariantViolation(f"point {bad[0]} is not unit (norm {norms[bad[0]]!r})")
        if np.any(w <= 0):
            raise InvariantViolation("weights must be positive")
        if abs(w.sum() - 1.0) > 1e-12:
            raise InvariantViolation(f"weights sum to {w.sum()!r}, not 1")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def dimension(self) -> int:
        """Ambient dimension D."""
        return int(self.points.shape[1])

    def __len__(self):
        return len(self.points)

    @property
    def partial_sums(self) -> np.ndarray:
        """Lambda_0 = 0, Lambda_i = sum of the first i weights."""
        out = np.concatenate([[0.0], np.cumsum(self.weights)])
        out[-1] = 1.0
        return out

    @classmethod
    def uniform(cls, points, strength: int = 0, name: str = "") -> "WeightedDesignSet":
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return cls(pts, np.full(len(pts), 1.0 / len(pts)), strength, name)

    def permuted(self, perm) -> "WeightedDesignSet":
        perm = np.asarray(perm)
        return WeightedDesignSet(self.points[perm], self.weights[perm], self.strength, self.name)


# ---------------------------------------------------------------- builtins

def polygon(s: int, phase: float = 0.0) -> WeightedDesignSet:
    """Vertices of a regular s-gon on S^1; an (s-1)-design."""
    if s < 1:
        raise ValueError("polygon needs s >= 1")
    ang = phase + 2 * np.pi * np.arange(s) / s
    return WeightedDesignSet.uniform(np.column_stack([np.cos(ang), np.sin(ang)]), s - 1, f"polygon-{s}")


def simplex(sphere_dim: int) -> WeightedDesignSet:
    """Regular simplex with sphere_dim + 2 vertices on S^sphere_dim; a 2-design."""
    D = sphere_dim + 1
    n = D + 1
    E = np.eye(n) - 1.0 / n
    # orthonormal basis of the hyperplane sum(x) = 0
    q, _ = np.linalg.qr(E[:, :D])
    pts = E @ q
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    return WeightedDesignSet.uniform(pts, 2, f"simplex-{sphere_dim}")


def cross_polytope(sphere_dim: int) -> WeightedDesignSet:
    """Points +-e_i on S^sphere_dim, ordered e1, -e1, e2, -e2, ...; a 3-design."""
    D = sphere_dim + 1
    pts = np.zeros((2 * D, D))
    for i in range(D):
        pts[2 * i, i] = 1.0
        pts[2 * i + 1, i] = -1.0
    return WeightedDesignSet.uniform(pts, 3, f"cross-polytope-{sphere_dim}")


def octahedron() -> WeightedDesignSet:
    out = cross_polytope(2)
    return WeightedDesignSet(out.points, out.weights, 3, "octahedron")


def tetrahedron() -> WeightedDesignSet:
    """South pole plus an equilateral triangle on the circle z = 1/3."""
    r = 2 * np.sqrt(2) / 3
    ang = 2 * np.pi * np.arange(3) / 3
    ring = np.column_stack([r * np.cos(ang), r * np.sin(ang), np.full(3, 1 / 3)])
    pts = np.vstack([[0.0, 0.0, -1.0], ring])
    return WeightedDesignSet.uniform(pts, 2, "tetrahedron")


def icosahedron() -> WeightedDesignSet:
    g = (1 + np.sqrt(5)) / 2
    pts = []
    for a in (1, -1):
        for b in (g, -g):
            pts += [(0, a, b), (a, b, 0), (b, 0, a)]
    pts = np.array(pts, dtype=float)
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    return WeightedDesignSet.uniform(pts, 5, "icosahedron")


_FAMILIES = {
    "polygon": polygon,
    "simplex": simplex,
    "cross-polytope": cross_polytope,
    "cross_polytope": cross_polytope,
    "octahedron": octahedron,
    "tetrahedron": tetrahedron,
    "icosahedron": icosahedron,
}


def builtin_set(name: str, *args, **params) -> WeightedDesignSet:
    """Named configuration.  A trailing ``-k`` supplies the integer argument,
    e.g. ``polygon-4`` or ``simplex-3`` (the sphere dimension)."""
    m = re.fullmatch(r"([a-z_-]+?)(?:-(\d+))?", name.strip().lower())
    if not m or m.group(1) not in _FAMILIES:
        raise UnknownFamily(name)
    if m.group(2) is not None:
        args = (int(m.group(2)),) + args
    try:
        return _FAMILIES[m.group(1)](*args, **params)
    except TypeError as exc:
        raise UnknownFamily(f"{name}: {exc}") from None


def builtin_names() -> list[str]:
    return ["polygon-<s>", "simplex-<d>", "cross-polytope-<d>", "octahedron", "tetrahedron",
            "icosahedron"]


# ---------------------------------------------------------------- verification

def verify_weighted_design_set(X: WeightedDesignSet, t: int, tol: float | None = None,
                               dimension: int | None = None) -> DesignReport:
    """Compare weighted point averages of all monomials of degree <= t with
    their sphere averages."""
    if dimension is not None and dimension != X.dimension:
        raise DimensionMismatch(f"set lives in R^{X.dimension}, expected R^{dimension}")
    tol = default_tol() if tol is None else tol
    exps = monomial_basis(X.dimension, t)
    got = X.weights @ monomial_values(X.points, exps)
    return DesignReport(t, exps, np.abs(got - sphere_averages(exps)), tol)


# ---------------------------------------------------------------- JSON

def set_to_dict(X: WeightedDesignSet) -> dict:
    return {"dimension": X.dimension, "strength": X.strength,
            "points": X.points.tolist(), "weights": X.weights.tolist()}


def set_from_dict(data: dict) -> WeightedDesignSet:
    try:
        pts = np.asarray(data["points"], dtype=float)
        w = np.asarray(data["weights"], dtype=float)
        strength = int(data.get("strength", 0))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed design set: {exc}") from None
    if pts.ndim != 2:
        raise ParseError("points must be a list of coordinate rows")
    if "dimension" in data and int(data["dimension"]) != pts.shape[1]:
        raise DimensionMismatch(f"declared dimension {data['dimension']} but rows have {pts.shape[1]}")
    return WeightedDesignSet(pts, w, strength)


def save_set(X: WeightedDesignSet, path) -> None:
    with open(path, "w") as fh:
        json.dump(set_to_dict(X), fh, indent=2)


def load_set(path) -> WeightedDesignSet:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from None
    return set_from_dict(data)
