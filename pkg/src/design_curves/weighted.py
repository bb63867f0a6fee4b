"""Weighted t-design curves.

* ``build_wxm``: a curve on S^d built from a weighted design set X on S^{d-1}
  by sweeping the first coordinate pole to pole once per point of X.
* ``explicit_s2``: the closed-form curve on S^2 from the regular 2t-gon.
* ``lift_s3`` / ``explicit_s3``: lifting a weighted curve on S^2 to S^3.
* ``verify_weighted_curve`` and corner smoothing.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from math import gcd
from typing import Callable

import numpy as np
from scipy.linalg import polar
from scipy.optimize import brentq
from scipy.special import beta as beta_fn
from scipy.special import betainc, betaincinv

from .design_sets import WeightedDesignSet, polygon
from .errors import (
    BudgetTooSmall,
    InvariantViolation,
    OddSetSize,
    ParseError,
    PhaseClosureViolation,
    PhaseExclusionViolation,
    SouthPoleViolation,
    WeightInvariantViolation,
)
from .polys import monomial_basis, monomial_values, sphere_averages
from .report import DesignReport, default_tol
from .sphere import Curve, Segment, curve_length, param_integral

FD_STEP = 1e-6


# ---------------------------------------------------------------- phases

@dataclass(frozen=True)
class PhaseFunction:
    """A real function of one variable with its derivative.

    kinds: ``const`` (v), ``linear`` (a + b x), ``sine`` (amp sin(2 pi freq x)),
    ``custom`` (user callable, derivative by central differences unless given).
    """

    kind: str
    params: tuple = ()
    fn: Callable | None = None
    dfn: Callable | None = None

    @classmethod
    def const(cls, v: float = 0.0) -> "PhaseFunction":
        return cls("const", (float(v),))

    @classmethod
    def linear(cls, a: float, b: float) -> "PhaseFunction":
        return cls("linear", (float(a), float(b)))

    @classmethod
    def sine(cls, amp: float, freq: int = 1) -> "PhaseFunction":
        return cls("sine", (float(amp), int(freq)))

    @classmethod
    def custom(cls, fn: Callable, dfn: Callable | None = None) -> "PhaseFunction":
        return cls("custom", (), fn, dfn)

    @classmethod
    def parse(cls, text: str) -> "PhaseFunction":
        """``const:v``, ``linear:a,b`` or ``sine:amp[,freq]``."""
        kind, _, rest = text.partition(":")
        try:
            vals = [float(v) for v in rest.split(",")] if rest else []
            if kind == "const" and len(vals) == 1:
                return cls.const(vals[0])
            if kind == "linear" and len(vals) == 2:
                return cls.linear(*vals)
            if kind == "sine" and len(vals) in (1, 2):
                return cls.sine(vals[0], int(vals[1]) if len(vals) == 2 else 1)
        except ValueError:
            pass
        raise ParseError(f"cannot parse phase function {text!r}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "const":
            return np.full(x.shape, self.params[0])
        if self.kind == "linear":
            return self.params[0] + self.params[1] * x
        if self.kind == "sine":
            amp, freq = self.params
            return amp * np.sin(2 * np.pi * freq * x)
        return np.asarray(self.fn(x), dtype=float)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "const":
            return np.zeros(x.shape)
        if self.kind == "linear":
            return np.full(x.shape, self.params[1])
        if self.kind == "sine":
            amp, freq = self.params
            return 2 * np.pi * freq * amp * np.cos(2 * np.pi * freq * x)
        if self.dfn is not None:
            return np.asarray(self.dfn(x), dtype=float)
        return (self(x + FD_STEP) - self(x - FD_STEP)) / (2 * FD_STEP)

    def closure_defect(self) -> float:
        """Distance of theta(0) - theta(1) from 2 pi Z."""
        gap = float(self(0.0) - self(1.0))
        return abs(gap - 2 * np.pi * round(gap / (2 * np.pi)))

    def describe(self) -> str:
        if self.kind == "custom":
            return "custom"
        return f"{self.kind}:" + ",".join(repr(p) for p in self.params)


# ---------------------------------------------------------------- rotation paths

def _plane_rotation(D: int, plane: tuple[int, int], ang: np.ndarray):
    i, j = plane
    n = len(ang)
    M = np.broadcast_to(np.eye(D), (n, D, D)).copy()
    dM = np.zeros((n, D, D))
    c, s = np.cos(ang), np.sin(ang)
    M[:, i, i], M[:, i, j], M[:, j, i], M[:, j, j] = c, -s, s, c
    dM[:, i, i], dM[:, i, j], dM[:, j, i], dM[:, j, j] = -s, -c, c, -s
    return M, dM


@dataclass(frozen=True, eq=False)
class RotationPath:
    """A piecewise smooth path M: [-1, 1] -> O(D).

    ``constant``: a fixed orthogonal matrix.  ``spin``: rotation by angle
    phase(w) in a coordinate plane.  ``table``: piecewise linear interpolation
    of orthogonal matrices, re-orthonormalized by polar decomposition.
    """

    kind: str
    D: int
    Q: np.ndarray | None = None
    plane: tuple[int, int] = (0, 1)
    phase: PhaseFunction | None = None
    nodes: np.ndarray | None = None
    mats: np.ndarray | None = None

    @classmethod
    def constant(cls, D: int, Q=None) -> "RotationPath":
        Q = np.eye(D) if Q is None else np.asarray(Q, dtype=float)
        if np.abs(Q.T @ Q - np.eye(D)).max() > 1e-10:
            raise InvariantViolation("constant rotation is not orthogonal")
        return cls("constant", D, Q=Q)

    @classmethod
    def spin(cls, D: int, phase: PhaseFunction | float, plane=(0, 1)) -> "RotationPath":
        """Rotation by phase(w) in ``plane``; a float means the rate w -> rate * w."""
        if not isinstance(phase, PhaseFunction):
            phase = PhaseFunction.linear(0.0, float(phase))
        if D < 2:
            raise ValueError("spin needs D >= 2")
        return cls("spin", D, plane=tuple(plane), phase=phase)

    @classmethod
    def table(cls, nodes, mats) -> "RotationPath":
        nodes = np.asarray(nodes, dtype=float)
        mats = np.asarray(mats, dtype=float)
        if np.any(np.diff(nodes) <= 0) or nodes[0] > -1 or nodes[-1] < 1:
            raise ValueError("table nodes must increase and cover [-1, 1]")
        for Q in mats:
            if np.abs(Q.T @ Q - np.eye(len(Q))).max() > 1e-10:
                raise InvariantViolation("table matrices must be orthogonal")
        return cls("table", mats.shape[1], nodes=nodes, mats=mats)

    def _table_eval(self, w):
        k = np.clip(np.searchsorted(self.nodes, w, side="right") - 1, 0, len(self.nodes) - 2)
        f = (w - self.nodes[k]) / (self.nodes[k + 1] - self.nodes[k])
        raw = (1 - f)[:, None, None] * self.mats[k] + f[:, None, None] * self.mats[k + 1]
        return np.array([polar(A)[0] for A in raw])

    def matrix(self, w) -> np.ndarray:
        w = np.atleast_1d(np.asarray(w, dtype=float))
        if self.kind == "constant":
            return np.broadcast_to(self.Q, (len(w), self.D, self.D))
        if self.kind == "spin":
            return _plane_rotation(self.D, self.plane, self.phase(w))[0]
        return self._table_eval(w)

    def derivative(self, w) -> np.ndarray:
        w = np.atleast_1d(np.asarray(w, dtype=float))
        if self.kind == "constant":
            return np.zeros((len(w), self.D, self.D))
        if self.kind == "spin":
            dM = _plane_rotation(self.D, self.plane, self.phase(w))[1]
            return dM * self.phase.derivative(w)[:, None, None]
        return (self._table_eval(w + FD_STEP) - self._table_eval(w - FD_STEP)) / (2 * FD_STEP)

    @property
    def is_constant(self) -> bool:
        return self.kind == "constant" or (self.kind == "spin" and self.phase.kind == "const")


# ---------------------------------------------------------------- w_{X,M}

@dataclass(frozen=True, eq=False, kw_only=True)
class WxmPiece(Segment):
    """One pole-to-pole sweep (w, sqrt(1 - w^2) M(w) x) of w_{X,M}.

    Quadrature variable: the polar angle phi in [0, pi], w = -cos(phi) when
    ascending and cos(phi) when descending.  The local parameter u is the
    regularized incomplete beta function I_{sin^2(phi/2)}(a, a); with
    a = d/2 the height w is then distributed on [-1, 1] exactly as the first
    coordinate of a uniform point of S^d, which is what makes the curve a
    weighted design in every dimension.  a = 1 is the linear height sweep,
    which coincides with a = d/2 on S^2.
    """

    x: np.ndarray
    path: RotationPath
    ascending: bool = True
    a: float = 1.0

    family = "wxm-piece"

    @property
    def tau_span(self):
        return (0.0, np.pi)

    def frame(self, tau):
        phi = np.atleast_1d(np.asarray(tau, dtype=float))
        c, s = np.cos(phi), np.sin(phi)
        sign = -1.0 if self.ascending else 1.0
        w = sign * c
        dw = -sign * s
        M = self.path.matrix(w)
        Mx = M @ self.x
        dMx = self.path.derivative(w) @ self.x
        pts = np.column_stack([w, s[:, None] * Mx])
        vel = np.column_stack([dw, c[:, None] * Mx + (s * dw)[:, None] * dMx])
        dud = s ** (2 * self.a - 1) / (4 ** (self.a - 1) * 2 * beta_fn(self.a, self.a))
        return pts, vel, dud

    def local_param(self, tau):
        phi = np.atleast_1d(np.asarray(tau, dtype=float))
        return betainc(self.a, self.a, np.sin(phi / 2) ** 2)

    def tau_of(self, u):
        u = np.clip(np.atleast_1d(np.asarray(u, dtype=float)), 0.0, 1.0)
        return 2 * np.arcsin(np.sqrt(betaincinv(self.a, self.a, u)))

    def length(self):
        if self.path.is_constant:
            return np.pi
        return super().length()


def _wxm_segments(X: WeightedDesignSet, M: RotationPath, profile: str):
    if profile not in ("beta", "linear"):
        raise ValueError(f"unknown height profile {profile!r}")
    d = X.dimension  # the curve lives on S^d
    a = d / 2 if profile == "beta" else 1.0
    return [WxmPiece(x=x, path=M, ascending=(i % 2 == 0), a=a, param_weight=float(lam))
            for i, (x, lam) in enumerate(zip(X.points, X.weights))]


def build_wxm(X: WeightedDesignSet, M: RotationPath | None = None, *,
              profile: str = "beta", target_length: float | None = None,
              spin_plane: tuple[int, int] = (0, 1), xtol: float = 1e-10) -> Curve:
    """The weighted curve w_{X,M} on S^d from a weighted design set on S^{d-1}.

    Piece i occupies [Lambda_{i-1}, Lambda_i] and sweeps the first coordinate
    from pole to pole, ascending for even i.  With ``target_length`` the path
    is a spin w -> omega w in ``spin_plane`` whose rate is solved for so that
    the curve has the requested length.
    """
    if len(X) % 2:
        raise OddSetSize(f"w_X,M needs an even number of points, got {len(X)}")
    w = X.weights
    if np.any(w <= 0) or abs(w.sum() - 1) > 1e-12:
        raise WeightInvariantViolation("weights must be positive and sum to 1")
    D = X.dimension
    if target_length is not None:
        return _wxm_with_length(X, target_length, profile, spin_plane, xtol)
    M = RotationPath.constant(D) if M is None else M
    if M.D != D:
        raise ValueError(f"rotation path acts on R^{M.D}, set lives in R^{D}")
    return Curve.chain(_wxm_segments(X, M, profile), closed=True)


def _wxm_with_length(X, target, profile, plane, xtol):
    D = X.dimension
    base = np.pi * len(X)
    if target < base - 1e-12:
        raise ValueError(f"length {target} is below the minimum pi |X| = {base}")

    def excess(rate):
        M = RotationPath.spin(D, float(rate), plane)
        return curve_length(Curve.chain(_wxm_segments(X, M, profile))) - target

    if abs(target - base) <= 1e-12:
        return build_wxm(X, profile=profile)
    hi = 1.0
    while excess(hi) < 0:
        hi *= 2
        if hi > 1e6:
            raise ValueError("cannot reach target length with a single-plane spin")
    rate = brentq(excess, 0.0, hi, xtol=xtol, rtol=1e-15)
    return Curve.chain(_wxm_segments(X, RotationPath.spin(D, rate, plane), profile))


def explicit_s2(t: int, theta1: PhaseFunction | None = None) -> Curve:
    """Weighted (2t-1)-design curve on S^2 from the regular 2t-gon.

    Equal to w_{V_2t, M} with M the rotation by theta1(w) of the plane.
    """
    if t < 1:
        raise ValueError("explicit S^2 curve needs t >= 1")
    theta1 = PhaseFunction.const(0.0) if theta1 is None else theta1
    return build_wxm(polygon(2 * t), RotationPath.spin(2, theta1))


def explicit_s2_formula(t: int, theta1: PhaseFunction | None = None) -> Callable:
    """Direct evaluation of the closed-form S^2 curve; independent of ``build_wxm``."""
    theta1 = PhaseFunction.const(0.0) if theta1 is None else theta1

    def gamma(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        k = np.minimum(np.floor(2 * t * s), 2 * t - 1)
        a1 = (-1.0) ** k * (4 * t * s - 2 * k - 1)
        r = np.sqrt(np.clip(1 - a1 ** 2, 0, None))
        ang = np.pi * k / t + theta1(a1)
        return np.column_stack([a1, r * np.cos(ang), r * np.sin(ang)])

    return gamma


# ---------------------------------------------------------------- S^3 lift

@dataclass(frozen=True, eq=False, kw_only=True)
class LiftPiece(Segment):
    """Part of the S^3 lift above one piece of a base curve on S^2.

    The base point (a_R, a_C) maps to (sqrt(1 + a_R), conj(a_C) / sqrt(1 + a_R))
    / sqrt(2) times the phase exp(i (2 pi s + theta(r))), where r is the base
    curve parameter and s = (m + r) / rate.
    """

    base: Segment
    r0: float          # base-curve parameter at the start of ``base``
    rw: float          # param weight of ``base`` in the base curve
    rate: float
    m: int
    theta: PhaseFunction
    lo: float          # tau window inside ``base``
    hi: float

    family = "lift-s3-piece"

    @property
    def tau_span(self):
        return (self.lo, self.hi)

    def _u_window(self):
        u = self.base.local_param(np.array([self.lo, self.hi]))
        return float(u[0]), float(u[1])

    def frame(self, tau):
        tau = np.atleast_1d(np.asarray(tau, dtype=float))
        p, v, dud = self.base.frame(tau)
        u = self.base.local_param(tau)
        r = self.r0 + self.rw * u
        dr = self.rw * dud
        s = (self.m + r) / self.rate
        ph = 2 * np.pi * s + self.theta(r)
        dph = 2 * np.pi * dr / self.rate + self.theta.derivative(r) * dr
        aR, aC = p[:, 0], p[:, 1] + 1j * p[:, 2]
        daR, daC = v[:, 0], v[:, 1] + 1j * v[:, 2]
        q = np.sqrt(1 + aR)
        z0 = q / np.sqrt(2)
        z1 = np.conj(aC) / (np.sqrt(2) * q)
        dz0 = daR / (2 * np.sqrt(2) * q)
        dz1 = (np.conj(daC) / q - 0.5 * np.conj(aC) * daR / q ** 3) / np.sqrt(2)
        e = np.exp(1j * ph)
        w0, w1 = z0 * e, z1 * e
        dw0 = (dz0 + 1j * dph * z0) * e
        dw1 = (dz1 + 1j * dph * z1) * e
        pts = np.column_stack([w0.real, w0.imag, w1.real, w1.imag])
        vel = np.column_stack([dw0.real, dw0.imag, dw1.real, dw1.imag])
        u0, u1 = self._u_window()
        return pts, vel, dud / (u1 - u0)

    def local_param(self, tau):
        u0, u1 = self._u_window()
        return (self.base.local_param(tau) - u0) / (u1 - u0)

    def tau_of(self, u):
        u0, u1 = self._u_window()
        return self.base.tau_of(u0 + np.atleast_1d(u) * (u1 - u0))


def _min_height(alpha: Curve, n: int = 513) -> float:
    low = np.inf
    for seg in alpha.segments:
        lo, hi = seg.tau_span
        low = min(low, float(seg.points(np.linspace(lo, hi, n))[:, 0].min()))
    return low


def _check_phase_closure(theta: PhaseFunction):
    if theta.closure_defect() > 1e-10:
        raise PhaseClosureViolation(
            f"theta(0) - theta(1) = {float(theta(0.0) - theta(1.0))!r} is not in 2 pi Z")


def _lift_segments(alpha: Curve, theta: PhaseFunction, rate: float) -> list:
    """Cut the lift at every wrap of r = rate s and every base breakpoint."""
    br = alpha.breakpoints
    n_wraps = int(np.ceil(rate - 1e-12))
    cuts = set()
    for m in range(n_wraps):
        for b in br:
            s = (m + b) / rate
            if s <= 1.0 + 1e-15:
                cuts.add(min(s, 1.0))
    cuts.add(1.0)
    cuts = np.array(sorted(cuts))
    # merge cut points closer than roundoff
    cuts = cuts[np.concatenate([[True], np.diff(cuts) > 1e-13])]
    segs = []
    for s0, s1 in zip(cuts[:-1], cuts[1:]):
        mid = 0.5 * (s0 + s1)
        m = int(np.floor(rate * mid))
        j = int(np.clip(np.searchsorted(br, rate * mid - m, side="right") - 1, 0, len(br) - 2))
        base = alpha.segments[j]
        w = base.param_weight
        u0 = np.clip((rate * s0 - m - br[j]) / w, 0.0, 1.0)
        u1 = np.clip((rate * s1 - m - br[j]) / w, 0.0, 1.0)
        lo, hi = base.tau_span
        tlo = lo if u0 <= 1e-14 else float(base.tau_of(u0)[0])
        thi = hi if u1 >= 1 - 1e-14 else float(base.tau_of(u1)[0])
        segs.append(LiftPiece(base=base, r0=float(br[j]), rw=w, rate=float(rate), m=m,
                              theta=theta, lo=tlo, hi=thi, param_weight=float(s1 - s0)))
    total = sum(s.param_weight for s in segs)
    last = segs[-1]
    segs[-1] = dataclasses.replace(last, param_weight=last.param_weight + 1.0 - total)
    return segs


def lift_s3(alpha: Curve, theta: PhaseFunction | None, t: int, margin: float = 1e-6) -> Curve:
    """Lift a weighted floor(t/2)-design curve on S^2 to a weighted t-design on S^3.

    The base curve is traversed t + 1 times while the fiber phase makes one
    full turn.  Its first coordinate must stay above -1 + margin.
    """
    theta = PhaseFunction.const(0.0) if theta is None else theta
    if alpha.dim != 3:
        raise ValueError("lift needs a base curve on S^2")
    _check_phase_closure(theta)
    low = _min_height(alpha)
    if low <= -1 + margin:
        raise SouthPoleViolation(f"base curve reaches height {low!r} (limit {-1 + margin})")
    return Curve.chain(_lift_segments(alpha, theta, t + 1), closed=True)


_PERMUTE = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]], dtype=float)


def check_phase_exclusion(t: int, theta1: PhaseFunction, tol: float = 1e-9) -> None:
    """Reject theta1(0) in {m pi - 2 n pi / t}, i.e. in (pi gcd(t, 2) / t) Z."""
    step = np.pi * gcd(t, 2) / t
    v = float(theta1(0.0))
    if abs(v - step * round(v / step)) <= tol:
        raise PhaseExclusionViolation(f"theta1(0) = {v!r} lies in (pi gcd(t,2)/t) Z")


def explicit_s3(t: int, theta1: PhaseFunction | None = None, theta2: PhaseFunction | None = None,
                *, strict_formula: bool = False, target_length: float | None = None) -> Curve:
    """Weighted (4t-1)-design curve on S^3.

    The S^2 curve ``explicit_s2(t, theta1)`` with coordinates reversed is
    lifted with strength 4t - 1, so r = 4 t s mod 1.  ``strict_formula``
    instead uses r = 4 pi t s mod 1 verbatim; that curve does not close.
    ``target_length`` replaces theta2 by beta sin(2 pi r) with beta solved
    for the requested length.
    """
    theta1 = PhaseFunction.const(np.pi / 3) if theta1 is None else theta1
    theta2 = PhaseFunction.const(0.0) if theta2 is None else theta2
    check_phase_exclusion(t, theta1)
    _check_phase_closure(theta2)
    base = explicit_s2(t, theta1)
    alpha = Curve(tuple(seg.transformed(_PERMUTE) for seg in base.segments), True)
    low = _min_height(alpha)
    if low <= -1 + 1e-6:
        raise SouthPoleViolation(f"permuted base curve reaches height {low!r}")
    if strict_formula:
        return Curve.chain(_lift_segments(alpha, theta2, 4 * np.pi * t), closed=False)
    rate = 4 * t
    if target_length is None:
        return Curve.chain(_lift_segments(alpha, theta2, rate), closed=True)

    def build(amp):
        return Curve.chain(_lift_segments(alpha, PhaseFunction.sine(amp), rate), closed=True)

    def excess(amp):
        return curve_length(build(amp)) - target_length

    if excess(0.0) > 0:
        raise ValueError(f"target length {target_length} is below the theta2 = 0 length")
    hi = 1.0
    while excess(hi) < 0:
        hi *= 2
        if hi > 1e4:
            raise ValueError("target length not reachable by a sine phase")
    return build(brentq(excess, 0.0, hi, xtol=1e-13, rtol=1e-15))


# ---------------------------------------------------------------- verification

def verify_weighted_curve(gamma: Curve, t: int, tol: float | None = None,
                          with_length: bool = True) -> DesignReport:
    """Parameter integrals of all monomials of degree <= t against sphere averages."""
    tol = default_tol() if tol is None else tol
    exps = monomial_basis(gamma.dim, t)
    got = param_integral(gamma, lambda p: monomial_values(p, exps))
    got = np.atleast_1d(got)
    rep = DesignReport(t, exps, np.abs(got - sphere_averages(exps)), tol,
                       length=curve_length(gamma) if with_length else None)
    rep.extra["closed"] = gamma.closed
    return rep


# ---------------------------------------------------------------- smoothing

@dataclass(frozen=True, eq=False, kw_only=True)
class Blend(Segment):
    """C^1 connector from A (tangent TA) to B (tangent TB) on the sphere.

    A cubic Hermite curve in R^D plus beta 16 tau^2 (1 - tau)^2 N, projected
    radially onto the sphere; beta tunes the length.
    """

    A: np.ndarray
    B: np.ndarray
    TA: np.ndarray
    TB: np.ndarray
    N: np.ndarray
    beta: float = 0.0

    family = "blend"

    @property
    def tau_span(self):
        return (0.0, 1.0)

    def frame(self, tau):
        x = np.atleast_1d(np.asarray(tau, dtype=float))[:, None]
        k = np.linalg.norm(self.B - self.A)
        h00, h10 = 2 * x ** 3 - 3 * x ** 2 + 1, x ** 3 - 2 * x ** 2 + x
        h01, h11 = -2 * x ** 3 + 3 * x ** 2, x ** 3 - x ** 2
        d00, d10 = 6 * x ** 2 - 6 * x, 3 * x ** 2 - 4 * x + 1
        d01, d11 = -6 * x ** 2 + 6 * x, 3 * x ** 2 - 2 * x
        bump = 16 * x ** 2 * (1 - x) ** 2
        dbump = 32 * x * (1 - x) * (1 - 2 * x)
        P = h00 * self.A + h10 * k * self.TA + h01 * self.B + h11 * k * self.TB + self.beta * bump * self.N
        dP = d00 * self.A + d10 * k * self.TA + d01 * self.B + d11 * k * self.TB + self.beta * dbump * self.N
        r = np.linalg.norm(P, axis=1, keepdims=True)
        p = P / r
        v = (dP - np.sum(p * dP, axis=1, keepdims=True) * p) / r
        return p, v, np.ones(len(x))

    def local_param(self, tau):
        return np.atleast_1d(np.asarray(tau, dtype=float))

    def tau_of(self, u):
        return np.atleast_1d(np.asarray(u, dtype=float))


def _tau_at_distance(seg: Segment, h: float, from_end: bool) -> float:
    """Quadrature variable at arc length h from one end of ``seg``."""
    lo, hi = seg.tau_span
    if hasattr(seg, "span") and seg.family == "arc":
        return hi - h if from_end else lo + h

    def run(x):
        a, b = (x, hi) if from_end else (lo, x)
        return seg.restricted(a, b).length() - h

    return brentq(run, lo, hi, xtol=1e-14)


def _corners(gamma: Curve, angle_tol: float) -> list[int]:
    segs = gamma.segments
    n = len(segs)
    last = n if gamma.closed else n - 1
    out = []
    for k in range(last):
        ta = segs[k].unit_tangent(at_end=True)
        tb = segs[(k + 1) % n].unit_tangent(at_end=False)
        if np.linalg.norm(ta - tb) > angle_tol:
            out.append(k)
    return out


def _bulge_direction(A, B, TA, TB):
    m = A + B
    m /= np.linalg.norm(m)
    chord = B - A
    basis = [m, chord / np.linalg.norm(chord)]
    for cand in [TA - TB] + list(np.eye(len(A))):
        v = np.array(cand, dtype=float)
        for e in basis:
            v = v - np.dot(v, e) * e
        if np.linalg.norm(v) > 1e-6:
            return v / np.linalg.norm(v)
    raise BudgetTooSmall("no room for a blend in this dimension")


def smooth_curve(gamma: Curve, delta: float, angle_tol: float = 1e-8) -> Curve:
    """Round every corner of ``gamma``; the result is C^1 and exactly delta longer.

    At each of the K corners an arc length of delta / (4K) is trimmed on both
    sides and the gap is bridged by a blend of length 3 delta / (2K).  The
    removed and inserted pieces total 2 delta, so for any c the defect of an
    (eps, c)-approximate design grows by at most 2 delta c.  Segments outside
    the trimmed windows are unchanged and keep their curve parameters.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    corners = _corners(gamma, angle_tol)
    if not corners:
        return gamma
    K = len(corners)
    h = delta / (4 * K)
    segs = list(gamma.segments)
    n = len(segs)
    trim_start = [0.0] * n
    trim_end = [0.0] * n
    for k in corners:
        trim_end[k] = h
        trim_start[(k + 1) % n] = h
    lengths = [s.length() for s in segs]
    for j in range(n):
        if trim_start[j] + trim_end[j] >= lengths[j]:
            raise BudgetTooSmall(f"segment {j} of length {lengths[j]:.3g} cannot absorb the blend windows")
    trimmed = []
    freed = [0.0] * n  # param measure removed at the end / start, per segment
    freed_start = [0.0] * n
    for j, seg in enumerate(segs):
        lo, hi = seg.tau_span
        a = _tau_at_distance(seg, trim_start[j], False) if trim_start[j] else lo
        b = _tau_at_distance(seg, trim_end[j], True) if trim_end[j] else hi
        u = seg.local_param(np.array([a, b]))
        freed_start[j] = float(u[0]) * seg.param_weight
        freed[j] = float(1 - u[1]) * seg.param_weight
        w = float(u[1] - u[0]) * seg.param_weight
        trimmed.append(seg.restricted(a, b).with_(param_weight=w))
    target = 3 * delta / (2 * K)
    out = []
    blend_after = {}
    for k in corners:
        left, right = trimmed[k], trimmed[(k + 1) % n]
        A, B = left.end_point, right.start_point
        TA, TB = left.unit_tangent(True), right.unit_tangent(False)
        N = _bulge_direction(A, B, TA, TB)
        weight = freed[k] + freed_start[(k + 1) % n]

        def excess(beta, A=A, B=B, TA=TA, TB=TB, N=N):
            return Blend(A=A, B=B, TA=TA, TB=TB, N=N, beta=beta).length() - target

        if excess(0.0) > 0:
            raise BudgetTooSmall("corner too sharp for the blend length budget")
        hi = h
        while excess(hi) < 0:
            hi *= 2
        beta = brentq(excess, 0.0, hi, xtol=1e-15, rtol=1e-15)
        blend_after[k] = Blend(A=A, B=B, TA=TA, TB=TB, N=N, beta=beta, param_weight=weight)
    head = []
    wrap = blend_after.pop(n - 1, None) if gamma.closed else None
    if wrap is not None:
        # split the closing blend so the first segment keeps its parameter range
        cut = freed[n - 1] / wrap.param_weight
        if freed_start[0] > 0:
            head.append(wrap.restricted(cut, 1.0).with_(param_weight=freed_start[0]))
        if freed[n - 1] > 0:
            blend_after[n - 1] = wrap.restricted(0.0, cut).with_(param_weight=freed[n - 1])
    out.extend(head)
    for j in range(n):
        out.append(trimmed[j])
        if j in blend_after:
            out.append(blend_after[j])
    total = sum(s.param_weight for s in out)
    out[-1] = out[-1].with_(param_weight=out[-1].param_weight + 1.0 - total)
    return Curve.chain(out, closed=gamma.closed)
