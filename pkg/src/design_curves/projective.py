"""Complex projective space CP^n as the quotient of S^{2n+1} by unit phases.

Points of S^{2n+1} are real vectors (re_0, im_0, re_1, im_1, ...).  A
projective point is stored through a canonical representative whose first
non-negligible complex coordinate is real and positive.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import OrthogonalFibers, ParseError, SameFiber, UnknownFamily, InvariantViolation
from .polys import monomial_basis, monomial_values, sphere_averages
from .report import DesignReport, default_tol
from .sphere import Arc, Curve, great_arc

CANON_TOL = 1e-12


def to_complex(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x[..., 0::2] + 1j * x[..., 1::2]


def to_real(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def times_i(x) -> np.ndarray:
    """Real form of i * omega."""
    return to_real(1j * to_complex(x))


def hermitian(x, y) -> complex:
    """<x, y> = sum x_k conj(y_k) for real-form vectors."""
    return complex(np.vdot(to_complex(y), to_complex(x)))


def _canonical(z: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(z) > CANON_TOL))
    return z * (abs(z[k]) / z[k])


@dataclass(frozen=True, eq=False)
class ProjPoint:
    """A complex line [omega] in C^{n+1}; ``rep`` is the canonical representative."""

    rep: np.ndarray  # complex

    def __post_init__(self):
        z = np.asarray(self.rep, dtype=complex).reshape(-1)
        nz = np.linalg.norm(z)
        if abs(nz - 1) > 1e-12:
            raise InvariantViolation(f"representative has norm {nz!r}")
        object.__setattr__(self, "rep", _canonical(z))

    @property
    def n(self) -> int:
        return len(self.rep) - 1

    @property
    def real(self) -> np.ndarray:
        return to_real(self.rep)

    def __eq__(self, other):
        if not isinstance(other, ProjPoint) or other.n != self.n:
            return NotImplemented
        return abs(abs(np.vdot(self.rep, other.rep)) - 1) <= 1e-9

    def __hash__(self):
        return hash(tuple(np.round(self.real, 8)))

    def __repr__(self):
        return "[" + ":".join(f"{c:.6g}" for c in self.rep) + "]"


def proj(omega) -> ProjPoint:
    """The projective point of a real-form unit vector on S^{2n+1}."""
    omega = np.asarray(omega, dtype=float)
    if omega.size % 2:
        raise ValueError("points of S^{2n+1} have an even number of real coordinates")
    return ProjPoint(to_complex(omega))


def cp_distance(p: ProjPoint, q: ProjPoint) -> float:
    """Fubini-Study distance arccos |<p, q>|, in [0, pi/2].

    Evaluated as arctan2(|q - h p|, |h|) with h = <q, p>, which stays
    accurate near 0 and pi/2.
    """
    h = np.vdot(p.rep, q.rep)
    perp = np.linalg.norm(q.rep - h * p.rep)
    return float(np.arctan2(perp, abs(h)))


def fiber_point(p: ProjPoint, theta) -> np.ndarray:
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    return to_real(np.exp(1j * theta)[:, None] * p.rep)


def fiber_curve(p: ProjPoint, start=None) -> Curve:
    """The great circle {rep e^{i theta}} as two half-circle arcs."""
    u = p.real if start is None else np.asarray(start, dtype=float)
    v = times_i(u)
    halves = [Arc(u=u, v=v, a=0.0, b=np.pi, param_weight=0.5),
              Arc(u=u, v=v, a=np.pi, b=2 * np.pi, param_weight=0.5)]
    return Curve.chain(halves, closed=True)


def fiber_average(f, p: ProjPoint, degree: int) -> np.ndarray:
    """Mean of f over the fiber of p, exact for polynomials of degree <= ``degree``.

    Along the fiber a degree-k polynomial is a trigonometric polynomial of
    degree k, so the 2k + 3 node trapezoid rule is exact.
    """
    N = 2 * degree + 3
    pts = fiber_point(p, 2 * np.pi * np.arange(N) / N)
    return np.asarray(f(pts), dtype=float).mean(axis=0)


# ---------------------------------------------------------------- CP^1 <-> S^2

def s2_from_cp1(q: ProjPoint) -> np.ndarray:
    z0, z1 = q.rep
    w = z0 * np.conj(z1)
    return np.array([abs(z0) ** 2 - abs(z1) ** 2, 2 * w.real, 2 * w.imag])


def cp1_from_s2(p) -> ProjPoint:
    x, y, z = np.asarray(p, dtype=float)
    if x >= 0:
        z0 = np.sqrt((1 + x) / 2)
        z1 = (y - 1j * z) / (2 * z0)
    else:
        z1 = np.sqrt((1 - x) / 2)
        z0 = (y + 1j * z) / (2 * z1)
    v = np.array([z0, z1], dtype=complex)
    return ProjPoint(v / np.linalg.norm(v))


# ---------------------------------------------------------------- design sets

@dataclass(frozen=True, eq=False)
class ProjectiveDesignSet:
    points: tuple
    strength: int = 0
    name: str = ""

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise ValueError("empty projective set")
        if len({p.n for p in pts}) != 1:
            raise ValueError("points live in different CP^n")

    @property
    def n(self) -> int:
        return self.points[0].n

    def __len__(self):
        return len(self.points)

    def min_separation(self) -> float:
        pts = self.points
        return min((cp_distance(pts[i], pts[j]) for i in range(len(pts)) for j in range(i)),
                   default=np.inf)


def _from_s2(name: str, pts, strength: int) -> ProjectiveDesignSet:
    return ProjectiveDesignSet(tuple(cp1_from_s2(p) for p in pts), strength, name)


def builtin_projective(name: str, n: int = 1) -> ProjectiveDesignSet:
    """cp1-octahedron (3), cp1-tetrahedron (2), cp1-icosahedron (5), cpn-basis (1)."""
    from . import design_sets as ds

    if name == "cp1-octahedron":
        return _from_s2(name, ds.octahedron().points, 3)
    if name == "cp1-tetrahedron":
        return _from_s2(name, ds.tetrahedron().points, 2)
    if name == "cp1-icosahedron":
        return _from_s2(name, ds.icosahedron().points, 5)
    if name.startswith("cpn-basis"):
        if name != "cpn-basis":
            n = int(name.split("-")[-1])
        return ProjectiveDesignSet(tuple(ProjPoint(row) for row in np.eye(n + 1, dtype=complex)),
                                   1, f"cpn-basis-{n}")
    raise UnknownFamily(name)


def projective_to_dict(Y: ProjectiveDesignSet) -> dict:
    return {"n": Y.n, "strength": Y.strength, "points": [p.real.tolist() for p in Y.points]}


def projective_from_dict(data: dict) -> ProjectiveDesignSet:
    try:
        rows = [np.asarray(r, dtype=float) for r in data["points"]]
        pts = tuple(ProjPoint(to_complex(r)) for r in rows)
        Y = ProjectiveDesignSet(pts, int(data.get("strength", 0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed projective set: {exc}") from None
    if "n" in data and int(data["n"]) != Y.n:
        raise ParseError(f"declared n={data['n']} but points live in CP^{Y.n}")
    return Y


def save_projective(Y: ProjectiveDesignSet, path) -> None:
    with open(path, "w") as fh:
        json.dump(projective_to_dict(Y), fh, indent=2)


def load_projective(path) -> ProjectiveDesignSet:
    with open(path) as fh:
        try:
            return projective_from_dict(json.load(fh))
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from None


def verify_projective_design(Y: ProjectiveDesignSet, t: int, tol: float | None = None) -> DesignReport:
    """Average over the fibers above Y of every monomial of degree <= 2t + 1
    on S^{2n+1}, compared with its sphere average."""
    tol = default_tol() if tol is None else tol
    deg = 2 * t + 1
    exps = monomial_basis(2 * Y.n + 2, deg)
    acc = np.zeros(len(exps))
    for p in Y.points:
        acc += fiber_average(lambda x: monomial_values(x, exps), p, deg)
    got = acc / len(Y)
    rep = DesignReport(t, exps, np.abs(got - sphere_averages(exps)), tol)
    rep.extra["test_degree"] = deg
    return rep


# ---------------------------------------------------------------- lifts

def phase_aligned(z_start, q: ProjPoint) -> np.ndarray:
    """Representative of q whose Hermitian product with z_start is real positive."""
    zs = to_complex(z_start)
    h = np.vdot(q.rep, zs)  # <z_start, q.rep>
    if abs(h) < 1e-12:
        raise OrthogonalFibers("fibers are orthogonal; the lift phase is not unique")
    return to_real(q.rep * (h / abs(h)))


def horizontal_lift(z_start, q: ProjPoint, start_node=None, end_node=None) -> Arc:
    """Great-circle arc from z_start, orthogonal to the fibers, ending over q.

    Its length equals the projective distance from [z_start] to q.
    """
    z_start = np.asarray(z_start, dtype=float)
    p = proj(z_start)
    d = cp_distance(p, q)
    if d < 1e-12:
        raise SameFiber("z_start already lies over q")
    if d >= np.pi / 2 - 1e-12:
        raise OrthogonalFibers(f"projective distance {d!r} is pi/2")
    return great_arc(z_start, phase_aligned(z_start, q), start_node, end_node)
