"""Points, arcs and piecewise curves on S^d, with line-integral quadrature.

A :class:`Curve` is an ordered chain of segments.  Each segment owns an
internal quadrature variable ``tau`` in which it is smooth, a local curve
parameter ``u`` in [0, 1], and a ``param_weight`` telling how much of the
global curve parameter s in [0, 1] it occupies.  Segments report
``frame(tau) -> (points, velocity, du/dtau)``; every integral in the package
is assembled from these three arrays.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import (
    AntipodalPoints,
    CoincidentPoints,
    DegreeViolation,
    Disconnected,
    InvariantViolation,
    QuadratureNonconvergence,
)

TWO_PI = 2.0 * np.pi
NODE_TOL = 1e-9
UNIT_TOL = 1e-12

_GL_X, _GL_W = np.polynomial.legendre.leggauss(32)


def gauss_legendre(fn: Callable, lo: float, hi: float, rtol: float = 1e-10,
                   max_panels: int = 1 << 12) -> np.ndarray:
    """Composite 32-node Gauss-Legendre on [lo, hi], doubling panels.

    ``fn`` maps a 1-D array of abscissae to values of shape (n,) or (n, K).
    Convergence is declared when two successive estimates agree to ``rtol``
    relative to max(|estimate|, integral of |fn|), per component.
    """
    if hi == lo:
        probe = np.asarray(fn(np.array([lo])), dtype=float)
        return np.zeros(probe.shape[1:] or (1,))
    prev = None
    panels = 1
    while panels <= max_panels:
        edges = np.linspace(lo, hi, panels + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        tau = (mid[:, None] + half[:, None] * _GL_X).ravel()
        wts = (half[:, None] * _GL_W).ravel()
        vals = np.asarray(fn(tau), dtype=float)
        if vals.ndim == 1:
            vals = vals[:, None]
        est = wts @ vals
        if prev is not None:
            scale = np.abs(wts) @ np.abs(vals)
            if np.all(np.abs(est - prev) <= rtol * np.maximum(np.abs(est), scale)):
                return est
        prev = est
        panels *= 2
    raise QuadratureNonconvergence(
        f"no convergence to rtol={rtol} on [{lo}, {hi}] with {max_panels} panels")


def as_point(x, tol: float = UNIT_TOL) -> np.ndarray:
    """Validate and return a unit vector of ambient dimension >= 2."""
    p = np.asarray(x, dtype=float).reshape(-1)
    if p.size < 2:
        raise ValueError("points need ambient dimension D >= 2")
    if abs(np.linalg.norm(p) - 1.0) > tol:
        raise InvariantViolation(f"point {p} is not unit (|p| = {np.linalg.norm(p)!r})")
    return p


def sphere_angle(p: np.ndarray, q: np.ndarray) -> float:
    """Great-circle distance, stable near 0 and pi."""
    c = float(np.dot(p, q))
    s = float(np.linalg.norm(q - c * p))
    return float(np.arctan2(s, c))


# ---------------------------------------------------------------- segments

@dataclass(frozen=True, eq=False, kw_only=True)
class Segment:
    """Base class.  Subclasses implement ``tau_span`` and ``frame``."""

    param_weight: float = 1.0
    start_node: Hashable = None
    end_node: Hashable = None

    kind = "formula"
    family = "formula"

    @property
    def tau_span(self) -> tuple[float, float]:
        raise NotImplementedError

    def frame(self, tau):
        raise NotImplementedError

    def points(self, tau) -> np.ndarray:
        return self.frame(np.atleast_1d(np.asarray(tau, dtype=float)))[0]

    @property
    def start_point(self) -> np.ndarray:
        return self.points(self.tau_span[0])[0]

    @property
    def end_point(self) -> np.ndarray:
        return self.points(self.tau_span[1])[0]

    def unit_tangent(self, at_end: bool) -> np.ndarray:
        lo, hi = self.tau_span
        v = self.frame(np.array([hi if at_end else lo]))[1][0]
        return v / np.linalg.norm(v)

    # generic local-parameter maps; subclasses override with closed forms
    def local_param(self, tau) -> np.ndarray:
        tau = np.atleast_1d(np.asarray(tau, dtype=float))
        lo, hi = self.tau_span
        half = 0.5 * (tau - lo)
        nodes = lo + half[:, None] * (_GL_X[None, :] + 1.0)
        dud = self.frame(nodes.ravel())[2].reshape(nodes.shape)
        return np.clip((half[:, None] * _GL_W[None, :] * dud).sum(axis=1), 0.0, 1.0)

    def tau_of(self, u) -> np.ndarray:
        u = np.atleast_1d(np.asarray(u, dtype=float))
        lo, hi = self.tau_span
        out = np.empty_like(u)
        for i, ui in enumerate(u):
            if ui <= 0.0:
                out[i] = lo
            elif ui >= 1.0:
                out[i] = hi
            else:
                out[i] = brentq(lambda x: self.local_param(x)[0] - ui, lo, hi, xtol=1e-15)
        return out

    def length(self) -> float:
        lo, hi = self.tau_span
        if hi <= lo:
            return 0.0
        return float(gauss_legendre(
            lambda tau: np.linalg.norm(self.frame(tau)[1], axis=1), lo, hi)[0])

    def reversed(self) -> "Segment":
        return Reversed(base=self, param_weight=self.param_weight,
                        start_node=self.end_node, end_node=self.start_node)

    def restricted(self, lo: float, hi: float) -> "Segment":
        return Restricted(base=self, lo=lo, hi=hi, param_weight=self.param_weight,
                          start_node=self.start_node, end_node=self.end_node)

    def transformed(self, Q: np.ndarray) -> "Segment":
        return Transformed(base=self, Q=np.asarray(Q, dtype=float),
                           param_weight=self.param_weight,
                           start_node=self.start_node, end_node=self.end_node)

    def with_(self, **changes) -> "Segment":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True, eq=False, kw_only=True)
class Arc(Segment):
    """Great-circle arc p(theta) = u cos(theta) + v sin(theta), theta in [a, b]."""

    u: np.ndarray
    v: np.ndarray
    a: float = 0.0
    b: float = 0.0

    kind = "arc"
    family = "arc"

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        v = np.asarray(self.v, dtype=float)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        if abs(np.linalg.norm(u) - 1) > UNIT_TOL or abs(np.linalg.norm(v) - 1) > UNIT_TOL:
            raise InvariantViolation("arc frame vectors must be unit")
        if abs(np.dot(u, v)) > UNIT_TOL:
            raise InvariantViolation("arc frame vectors must be orthogonal")
        if not 0.0 <= self.b - self.a <= TWO_PI + 1e-12:
            raise InvariantViolation(f"arc span {self.b - self.a} outside [0, 2pi]")

    @property
    def tau_span(self):
        return (self.a, self.b)

    @property
    def span(self) -> float:
        return self.b - self.a

    def frame(self, tau):
        tau = np.atleast_1d(np.asarray(tau, dtype=float))
        c, s = np.cos(tau), np.sin(tau)
        pts = c[:, None] * self.u + s[:, None] * self.v
        vel = -s[:, None] * self.u + c[:, None] * self.v
        span = self.span
        dud = np.full(tau.shape, 1.0 / span if span > 0 else 0.0)
        return pts, vel, dud

    def local_param(self, tau):
        tau = np.atleast_1d(np.asarray(tau, dtype=float))
        return (tau - self.a) / self.span

    def tau_of(self, u):
        u = np.atleast_1d(np.asarray(u, dtype=float))
        return self.a + u * self.span

    def length(self) -> float:
        return self.span

    def reversed(self) -> "Arc":
        # p(b - phi) = cos(phi) p(b) + sin(phi) (u sin b - v cos b)
        pb = np.cos(self.b) * self.u + np.sin(self.b) * self.v
        vb = np.sin(self.b) * self.u - np.cos(self.b) * self.v
        return Arc(u=pb, v=vb, a=0.0, b=self.span, param_weight=self.param_weight,
                   start_node=self.end_node, end_node=self.start_node)

    def restricted(self, lo, hi) -> "Arc":
        return dataclasses.replace(self, a=float(lo), b=float(hi))

    def transformed(self, Q) -> "Arc":
        Q = np.asarray(Q, dtype=float)
        return dataclasses.replace(self, u=Q @ self.u, v=Q @ self.v)

    def angle_of(self, p: np.ndarray) -> float:
        return float(np.arctan2(np.dot(p, self.v), np.dot(p, self.u)))


@dataclass(frozen=True, eq=False, kw_only=True)
class SmallCircle(Segment):
    """Arc of the circle center + radius (u cos theta + v sin theta)."""

    center: np.ndarray
    u: np.ndarray
    v: np.ndarray
    radius: float
    a: float = 0.0
    b: float = TWO_PI

    kind = "circle"
    family = "circle"

    def __post_init__(self):
        for name in ("center", "u", "v"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if abs(np.dot(self.center, self.center) + self.radius ** 2 - 1) > 1e-12:
            raise InvariantViolation("circle does not lie on the unit sphere")

    @property
    def tau_span(self):
        return (self.a, self.b)

    def frame(self, tau):
        tau = np.atleast_1d(np.asarray(tau, dtype=float))
        c, s = np.cos(tau), np.sin(tau)
        pts = self.center + self.radius * (c[:, None] * self.u + s[:, None] * self.v)
        vel = self.radius * (-s[:, None] * self.u + c[:, None] * self.v)
        return pts, vel, np.full(tau.shape, 1.0 / (self.b - self.a))

    def local_param(self, tau):
        return (np.atleast_1d(np.asarray(tau, dtype=float)) - self.a) / (self.b - self.a)

    def tau_of(self, u):
        return self.a + np.atleast_1d(np.asarray(u, dtype=float)) * (self.b - self.a)

    def length(self) -> float:
        return self.radius * (self.b - self.a)

    def restricted(self, lo, hi):
        return dataclasses.replace(self, a=float(lo), b=float(hi))

    def transformed(self, Q):
        Q = np.asarray(Q, dtype=float)
        return dataclasses.replace(self, center=Q @ self.center, u=Q @ self.u, v=Q @ self.v)


@dataclass(frozen=True, eq=False, kw_only=True)
class Reversed(Segment):
    base: Segment

    @property
    def kind(self):
        return self.base.kind

    @property
    def family(self):
        return self.base.family

    @property
    def tau_span(self):
        return self.base.tau_span

    def frame(self, tau):
        lo, hi = self.tau_span
        pts, vel, dud = self.base.frame(lo + hi - np.atleast_1d(tau))
        return pts, -vel, dud

    def local_param(self, tau):
        lo, hi = self.tau_span
        return 1.0 - self.base.local_param(lo + hi - np.atleast_1d(tau))

    def tau_of(self, u):
        lo, hi = self.tau_span
        return lo + hi - self.base.tau_of(1.0 - np.atleast_1d(u))

    def length(self):
        return self.base.length()


@dataclass(frozen=True, eq=False, kw_only=True)
class Restricted(Segment):
    base: Segment
    lo: float
    hi: float

    @property
    def kind(self):
        return self.base.kind

    @property
    def family(self):
        return self.base.family

    @property
    def tau_span(self):
        return (self.lo, self.hi)

    def _p(self):
        p = self.base.local_param(np.array([self.lo, self.hi]))
        return float(p[0]), float(p[1])

    def frame(self, tau):
        pts, vel, dud = self.base.frame(tau)
        p0, p1 = self._p()
        return pts, vel, dud / (p1 - p0)

    def local_param(self, tau):
        p0, p1 = self._p()
        return (self.base.local_param(tau) - p0) / (p1 - p0)

    def tau_of(self, u):
        p0, p1 = self._p()
        return self.base.tau_of(p0 + np.atleast_1d(u) * (p1 - p0))


@dataclass(frozen=True, eq=False, kw_only=True)
class Transformed(Segment):
    """An orthogonal image Q(segment)."""

    base: Segment
    Q: np.ndarray

    @property
    def kind(self):
        return self.base.kind

    @property
    def family(self):
        return self.base.family

    @property
    def tau_span(self):
        return self.base.tau_span

    def frame(self, tau):
        pts, vel, dud = self.base.frame(tau)
        return pts @ self.Q.T, vel @ self.Q.T, dud

    def local_param(self, tau):
        return self.base.local_param(tau)

    def tau_of(self, u):
        return self.base.tau_of(u)

    def length(self):
        return self.base.length()


# ---------------------------------------------------------------- curves

@dataclass(frozen=True, eq=False)
class Curve:
    """Ordered chain of segments parametrized on [0, 1] by param weights."""

    segments: tuple
    closed: bool = True

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        if not segs:
            raise InvariantViolation("a curve needs at least one segment")
        total = sum(s.param_weight for s in segs)
        if abs(total - 1.0) > 1e-12:
            raise InvariantViolation(f"param weights sum to {total!r}, not 1")
        if any(s.param_weight <= 0 for s in segs):
            raise InvariantViolation("param weights must be positive")
        pairs = list(zip(segs[:-1], segs[1:]))
        if self.closed:
            pairs.append((segs[-1], segs[0]))
        for left, right in pairs:
            if left.end_node != right.start_node:
                raise InvariantViolation(
                    f"segment ending at node {left.end_node!r} is followed by one "
                    f"starting at {right.start_node!r}")
            gap = np.linalg.norm(left.end_point - right.start_point)
            if gap > NODE_TOL:
                raise InvariantViolation(
                    f"node {left.end_node!r}: endpoints differ by {gap:.3e}")

    @classmethod
    def chain(cls, segments: Sequence[Segment], closed: bool = True) -> "Curve":
        """Build a curve assigning sequential junction node ids 0, 1, ..."""
        segs = list(segments)
        n = len(segs)
        out = []
        for k, seg in enumerate(segs):
            end = (k + 1) % n if closed else k + 1
            out.append(seg.with_(start_node=k, end_node=end))
        return cls(tuple(out), closed)

    @property
    def dim(self) -> int:
        return int(self.segments[0].start_point.size)

    @property
    def breakpoints(self) -> np.ndarray:
        return np.concatenate([[0.0], np.cumsum([s.param_weight for s in self.segments])])

    @property
    def is_geodesic(self) -> bool:
        return all(isinstance(s, Arc) for s in self.segments)

    def locate(self, s) -> tuple[np.ndarray, np.ndarray]:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        br = self.breakpoints
        idx = np.clip(np.searchsorted(br, s, side="right") - 1, 0, len(self.segments) - 1)
        w = np.array([seg.param_weight for seg in self.segments])
        u = np.clip((s - br[idx]) / w[idx], 0.0, 1.0)
        return idx, u

    def __call__(self, s) -> np.ndarray:
        idx, u = self.locate(s)
        out = np.empty((len(idx), self.dim))
        for k in np.unique(idx):
            sel = idx == k
            seg = self.segments[k]
            out[sel] = seg.points(seg.tau_of(u[sel]))
        return out

    def sample(self, n: int, by_arclength: bool = False) -> tuple[np.ndarray, np.ndarray]:
        """n samples; returns (parameter values s, points).

        by_arclength samples equally spaced in length; intended for plotting.
        """
        if not by_arclength:
            s = np.linspace(0.0, 1.0, n, endpoint=not self.closed)
            return s, self(s)
        lengths = np.array([seg.length() for seg in self.segments])
        cum = np.concatenate([[0.0], np.cumsum(lengths)])
        targets = np.linspace(0.0, cum[-1], n, endpoint=not self.closed)
        idx = np.clip(np.searchsorted(cum, targets, side="right") - 1, 0, len(lengths) - 1)
        br = self.breakpoints
        svals = np.empty(n)
        pts = np.empty((n, self.dim))
        for k in np.unique(idx):
            sel = idx == k
            seg = self.segments[k]
            lo, hi = seg.tau_span
            grid = np.linspace(lo, hi, 2049)
            speed = np.linalg.norm(seg.frame(grid)[1], axis=1)
            run = np.concatenate([[0.0], np.cumsum(0.5 * (speed[1:] + speed[:-1]) * np.diff(grid))])
            run *= lengths[k] / run[-1] if run[-1] > 0 else 1.0
            tau = np.interp(targets[sel] - cum[k], run, grid)
            pts[sel] = seg.points(tau)
            svals[sel] = br[k] + seg.param_weight * seg.local_param(tau)
        return svals, pts


def great_arc(p, q, start_node: Hashable = None, end_node: Hashable = None,
              param_weight: float = 1.0) -> Arc:
    """Minimal great-circle arc from p to q."""
    p = as_point(p)
    q = as_point(q)
    if p.shape != q.shape:
        raise ValueError("points live in different ambient dimensions")
    c = float(np.dot(p, q))
    perp = q - c * p
    s = float(np.linalg.norm(perp))
    if s < 1e-12:
        if c > 0:
            raise CoincidentPoints("arc endpoints coincide")
        raise AntipodalPoints("arc between antipodal points is not unique")
    return Arc(u=p, v=perp / s, a=0.0, b=float(np.arctan2(s, c)), param_weight=param_weight,
               start_node=start_node, end_node=end_node)


def segment_length(seg: Segment) -> float:
    return seg.length()


def curve_length(curve: Curve) -> float:
    return float(sum(seg.length() for seg in curve.segments))


def _as_columns(f, pts):
    vals = np.asarray(f(pts), dtype=float)
    return vals[:, None] if vals.ndim == 1 else vals


def segment_integral(seg: Segment, f: Callable, arclength: bool, rtol: float = 1e-10) -> np.ndarray:
    lo, hi = seg.tau_span

    def integrand(tau):
        pts, vel, dud = seg.frame(tau)
        vals = _as_columns(f, pts)
        if arclength:
            return vals * np.linalg.norm(vel, axis=1)[:, None]
        return vals * (seg.param_weight * dud)[:, None]

    return gauss_legendre(integrand, lo, hi, rtol=rtol)


def _curve_integral(curves, f, arclength, rtol):
    if isinstance(curves, Curve):
        curves = [curves]
    total = None
    scalar = True
    for curve in curves:
        for seg in curve.segments:
            probe = np.asarray(f(seg.points(seg.tau_span[0])), dtype=float)
            scalar = probe.ndim == 1
            part = segment_integral(seg, f, arclength, rtol)
            total = part if total is None else total + part
    return float(total[0]) if scalar else total


def param_integral(curve: Curve, f: Callable, rtol: float = 1e-10):
    """Integral of f(gamma(s)) ds over s in [0, 1]; no speed factor.

    f maps an (n, D) array of points to (n,) or (n, K).
    """
    return _curve_integral(curve, f, False, rtol)


def arclength_integral(curve, f: Callable, rtol: float = 1e-10):
    """Integral of f against arc length; ``curve`` may be a list of curves."""
    return _curve_integral(curve, f, True, rtol)


# ---------------------------------------------------------------- intersections

@dataclass
class Intersection:
    kind: str  # "empty" | "points" | "overlap"
    points: list
    overlaps: list

    def __bool__(self):
        return self.kind != "empty"


def _in_window(theta: float, a: float, b: float, tol: float) -> bool:
    off = (theta - a) % TWO_PI
    return off <= (b - a) + tol or off >= TWO_PI - tol


def _dedupe(points, tol=1e-9):
    out = []
    for p in points:
        if all(np.linalg.norm(p - q) > tol for q in out):
            out.append(p)
    return out


def arcs_intersect(a1: Arc, a2: Arc, tol: float = 1e-9) -> Intersection:
    """Intersection of two great-circle arcs in any ambient dimension."""
    A = np.column_stack([a1.u, a1.v, -a2.u, -a2.v])
    _, sv, vt = np.linalg.svd(A)
    svals = np.zeros(4)
    svals[: len(sv)] = sv
    null = vt[svals <= tol]
    if len(null) == 0:
        return Intersection("empty", [], [])
    if len(null) == 1:
        x = null[0]
        p = x[0] * a1.u + x[1] * a1.v
        p /= np.linalg.norm(p)
        hits = []
        for cand in (p, -p):
            if (_in_window(a1.angle_of(cand), a1.a, a1.b, tol)
                    and _in_window(a2.angle_of(cand), a2.a, a2.b, tol)):
                hits.append(cand)
        hits = _dedupe(hits)
        return Intersection("points" if hits else "empty", hits, [])
    # coplanar: same great circle, work in a1's angle coordinate
    start2 = a2.frame(np.array([a2.a]))[0][0]
    c0 = a1.angle_of(start2)
    same_orientation = (np.dot(a2.u, a1.u) * np.dot(a2.v, a1.v)
                        - np.dot(a2.u, a1.v) * np.dot(a2.v, a1.u)) > 0
    L2 = a2.span
    lo2 = c0 if same_orientation else c0 - L2
    lo2 = a1.a + (lo2 - a1.a) % TWO_PI
    points, overlaps = [], []
    for shift in (-TWO_PI, 0.0, TWO_PI):
        lo = max(a1.a, lo2 + shift)
        hi = min(a1.b, lo2 + shift + L2)
        if hi - lo > tol:
            overlaps.append(a1.restricted(lo, hi))
        elif hi - lo >= -tol:
            mid = 0.5 * (lo + hi)
            points.append(np.cos(mid) * a1.u + np.sin(mid) * a1.v)
    points = _dedupe(points)
    if overlaps:
        return Intersection("overlap", points, overlaps)
    return Intersection("points" if points else "empty", points, [])


@dataclass
class SimplicityResult:
    simple: bool
    witness: tuple | None = None
    heuristic: bool = False

    def __bool__(self):
        return self.simple


def _junctions(curve: Curve):
    n = len(curve.segments)
    out = {}
    last = n if curve.closed else n - 1
    for k in range(last):
        j = (k + 1) % n
        out.setdefault(frozenset((k, j)), []).append(curve.segments[k].end_point)
    return out


def is_simple(curve: Curve, tol: float = 1e-9, samples: int = 2048) -> SimplicityResult:
    """Check that a closed curve has no self-intersections.

    Geodesic cycles are checked exactly arc against arc.  Curves containing
    formula segments fall back to a dense-sampling test and the result is
    flagged ``heuristic``.
    """
    if not curve.is_geodesic:
        return _sampled_simplicity(curve, samples)
    segs = curve.segments
    n = len(segs)
    allowed = _junctions(curve)
    for i in range(n):
        for j in range(i + 1, n):
            hit = arcs_intersect(segs[i], segs[j], tol)
            if not hit:
                continue
            if hit.kind == "overlap":
                return SimplicityResult(False, (i, j))
            ok = allowed.get(frozenset((i, j)), [])
            for p in hit.points:
                if not any(np.linalg.norm(p - q) <= 1e-7 for q in ok):
                    return SimplicityResult(False, (i, j))
    return SimplicityResult(True)


def _sampled_simplicity(curve: Curve, samples: int) -> SimplicityResult:
    s, pts = curve.sample(samples)
    step = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    thresh = 0.5 * max(step.max(), 1e-12)
    window = 4
    for i in range(len(pts)):
        d = np.linalg.norm(pts - pts[i], axis=1)
        gap = np.abs(np.arange(len(pts)) - i)
        if curve.closed:
            gap = np.minimum(gap, len(pts) - gap)
        close = np.nonzero((d < thresh) & (gap > window))[0]
        if close.size:
            return SimplicityResult(False, (float(s[i]), float(s[close[0]])), heuristic=True)
    return SimplicityResult(True, heuristic=True)


# ---------------------------------------------------------------- assembly

def assemble_cycle(segments: Sequence[Segment]) -> Curve:
    """Chain segments sharing node ids into one closed, constant-speed curve.

    Every node id must be incident to exactly two segment ends.  The first
    segment keeps its orientation; the others are flipped as needed.
    """
    segs = list(segments)
    if not segs:
        raise Disconnected("no segments")
    incidence: dict = {}
    for k, seg in enumerate(segs):
        incidence.setdefault(seg.start_node, []).append(k)
        incidence.setdefault(seg.end_node, []).append(k)
    for node, ks in incidence.items():
        if len(ks) != 2:
            raise DegreeViolation(f"node {node!r} has degree {len(ks)}")
    used = [False] * len(segs)
    order = [segs[0]]
    used[0] = True
    origin = segs[0].start_node
    cur = segs[0].end_node
    while cur != origin:
        nxt = next((k for k in incidence[cur] if not used[k]), None)
        if nxt is None:
            raise DegreeViolation(f"walk stuck at node {cur!r}")
        used[nxt] = True
        seg = segs[nxt]
        if seg.start_node != cur:
            seg = seg.reversed()
        order.append(seg)
        cur = seg.end_node
    if not all(used):
        raise Disconnected(f"{used.count(False)} segments lie off the cycle through node {origin!r}")
    lengths = np.array([seg.length() for seg in order])
    weights = lengths / lengths.sum()
    weights[-1] = 1.0 - weights[:-1].sum()
    return Curve(tuple(seg.with_(param_weight=float(w)) for seg, w in zip(order, weights)), True)


# ---------------------------------------------------------------- serialization

def curve_to_dict(curve: Curve) -> dict:
    segs = []
    for seg in curve.segments:
        if isinstance(seg, Arc):
            segs.append({"kind": "arc", "u": seg.u.tolist(), "v": seg.v.tolist(),
                         "a": seg.a, "b": seg.b, "param_weight": seg.param_weight})
        elif isinstance(seg, SmallCircle):
            segs.append({"kind": "circle", "center": seg.center.tolist(), "u": seg.u.tolist(),
                         "v": seg.v.tolist(), "radius": seg.radius, "a": seg.a, "b": seg.b,
                         "param_weight": seg.param_weight})
        else:
            raise TypeError(f"cannot serialize {seg.family} segments")
    return {"closed": curve.closed, "segments": segs}


def curve_from_dict(data: dict) -> Curve:
    segs = []
    for rec in data["segments"]:
        rec = dict(rec)
        kind = rec.pop("kind")
        if kind == "arc":
            segs.append(Arc(**rec))
        elif kind == "circle":
            segs.append(SmallCircle(**rec))
        else:
            raise ValueError(f"unknown segment kind {kind!r}")
    weights = [s.param_weight for s in segs]
    curve_segs = [s.with_(param_weight=w) for s, w in zip(segs, weights)]
    return Curve.chain(curve_segs, closed=bool(data.get("closed", True)))
