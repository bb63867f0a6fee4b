"""Hybrid t-designs: a point set X and a curve gamma mixed with weight rho.

(X, gamma, rho) is a hybrid t-design when

    rho / |X| sum_{x in X} f(x) + (1 - rho) / len(gamma) int_gamma f = avg f

for every polynomial f of degree <= t.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .design_sets import WeightedDesignSet, verify_weighted_design_set
from .errors import GonNotSubset, InvariantViolation, ParseError, StrengthViolation
from .polys import monomial_basis, monomial_values, sphere_averages
from .projective import ProjectiveDesignSet, fiber_curve, fiber_point, verify_projective_design
from .report import DesignReport, default_tol
from .sphere import Curve, SmallCircle, arclength_integral, curve_from_dict, curve_length, curve_to_dict


@dataclass(frozen=True, eq=False)
class HybridDesign:
    X: np.ndarray          # (m, D), possibly empty
    gamma: Curve
    rho: float
    strength: int = 0

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float).reshape(-1, self.gamma.dim)
        object.__setattr__(self, "X", X)
        if not 0.0 <= self.rho <= 1.0:
            raise InvariantViolation(f"rho = {self.rho!r} outside [0, 1]")
        if len(X) == 0 and self.rho != 0:
            raise InvariantViolation("an empty point set needs rho = 0")
        if len(X) and np.abs(np.linalg.norm(X, axis=1) - 1).max() > 1e-12:
            raise InvariantViolation("hybrid points must be unit vectors")


def verify_hybrid(H: HybridDesign, t: int, tol: float | None = None) -> DesignReport:
    tol = default_tol() if tol is None else tol
    exps = monomial_basis(H.gamma.dim, t)
    values = lambda p: monomial_values(p, exps)
    length = curve_length(H.gamma)
    got = (1 - H.rho) / length * np.atleast_1d(arclength_integral(H.gamma, values))
    if len(H.X):
        got = got + H.rho * values(H.X).mean(axis=0)
    rep = DesignReport(t, exps, np.abs(got - sphere_averages(exps)), tol, length=length)
    rep.extra["rho"] = H.rho
    return rep


def circle_curve(center, u, v, radius) -> Curve:
    """Constant-speed closed circle center + radius (u cos + v sin)."""
    halves = [SmallCircle(center=center, u=u, v=v, radius=radius, a=0.0, b=np.pi, param_weight=0.5),
              SmallCircle(center=center, u=u, v=v, radius=radius, a=np.pi, b=2 * np.pi,
                          param_weight=0.5)]
    return Curve.chain(halves)


def ehler_tetrahedral_hybrid() -> HybridDesign:
    """South pole, the circle of height 1/3, rho = 1/4: a hybrid 2-design."""
    r = 2 * np.sqrt(2) / 3
    gamma = circle_curve(np.array([0, 0, 1 / 3]), np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), r)
    return HybridDesign(np.array([[0.0, 0.0, -1.0]]), gamma, 0.25, 2)


def ehler_octahedral_hybrid() -> HybridDesign:
    """Both poles, the equator, rho = 1/3: a hybrid 3-design."""
    gamma = circle_curve(np.zeros(3), np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), 1.0)
    return HybridDesign(np.array([[0, 0, 1.0], [0, 0, -1.0]]), gamma, 1 / 3, 3)


def konig_hybrid(Y: ProjectiveDesignSet, t: int, y0: int = 0, tol: float | None = None) -> HybridDesign:
    """Regular (t+1)-gons on the fibers above Y minus y0, plus the fiber above
    y0 as the curve, with rho = 1 - 1/|Y|."""
    if len(Y) < 2:
        if t > 1:
            raise StrengthViolation("with |Y| = 1 the curve is a single great circle, "
                                    "which is not a 2-design curve")
        raise ValueError("need |Y| >= 2")
    rep = verify_projective_design(Y, t // 2, tol)
    if not rep.passed:
        raise StrengthViolation(f"Y fails at strength {t // 2} (defect {rep.max_defect:.3g})")
    angles = 2 * np.pi * np.arange(t + 1) / (t + 1)
    X = np.vstack([fiber_point(p, angles) for k, p in enumerate(Y.points) if k != y0])
    return HybridDesign(X, fiber_curve(Y.points[y0]), 1 - 1 / len(Y), t)


def gon_split_hybrid(X: WeightedDesignSet, t: int, gon: list[int], tol: float = 1e-9) -> HybridDesign:
    """Replace a regular s-gon (s > t) inside a t-design set by its circle."""
    pts = X.points
    s = len(gon)
    if s <= t:
        raise ValueError(f"a {s}-gon cannot carry strength {t}; need s > t")
    if len(set(gon)) != s or min(gon) < 0 or max(gon) >= len(pts):
        raise GonNotSubset("gon indices must be distinct members of X")
    if not verify_weighted_design_set(X, t, tol).passed:
        raise StrengthViolation(f"X is not a {t}-design")
    P = pts[gon]
    center = P.mean(axis=0)
    rel = P - center
    radius = np.linalg.norm(rel, axis=1)
    if np.ptp(radius) > tol or radius[0] < tol:
        raise GonNotSubset("gon points are not on a common circle around their centroid")
    r = float(radius.mean())
    u = rel[0] / r
    perp = rel - (rel @ u)[:, None] * u
    w = perp[np.argmax(np.linalg.norm(perp, axis=1))]
    if np.linalg.norm(w) < tol:
        raise GonNotSubset("gon points are collinear")
    v = w / np.linalg.norm(w)
    if np.abs(rel - (rel @ u)[:, None] * u - (rel @ v)[:, None] * v).max() > tol:
        raise GonNotSubset("gon points are not coplanar")
    ang = np.sort(np.mod(np.arctan2(rel @ v, rel @ u), 2 * np.pi))
    steps = np.diff(np.concatenate([ang, [ang[0] + 2 * np.pi]]))
    if np.abs(steps - 2 * np.pi / s).max() > 1e-7:
        raise GonNotSubset("gon points are not equally spaced")
    if abs(np.dot(center, center) + r * r - 1) > 1e-9:
        raise GonNotSubset("gon circle does not lie on the sphere")
    rest = np.delete(pts, gon, axis=0)
    return HybridDesign(rest, circle_curve(center, u, v, r), 1 - s / len(pts), t)


def hybrid_to_dict(H: HybridDesign) -> dict:
    return {"dimension": H.gamma.dim, "strength": H.strength, "points": H.X.tolist(),
            "curve": curve_to_dict(H.gamma), "rho": H.rho}


def hybrid_from_dict(data: dict) -> HybridDesign:
    try:
        gamma = curve_from_dict(data["curve"])
        return HybridDesign(np.asarray(data.get("points", []), dtype=float), gamma,
                            float(data["rho"]), int(data.get("strength", 0)))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed hybrid design: {exc}") from None


def load_hybrid(path) -> HybridDesign:
    with open(path) as fh:
        try:
            return hybrid_from_dict(json.load(fh))
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from None


def save_hybrid(H: HybridDesign, path) -> None:
    with open(path, "w") as fh:
        json.dump(hybrid_to_dict(H), fh, indent=2)
