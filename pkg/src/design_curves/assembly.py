"""Approximate t-design cycles on S^{2n+1} from projective design sets.

The fibers above a projective design Y average polynomials exactly.  They
are joined into one simple geodesic cycle along a minimal spanning tree of
Y: every tree edge is realized by a horizontal lift and a twin shifted by
the phase delta~, and an arc of length delta~ is cut out of each fiber at
both ends of the pair.  The cycle is an (eps, c)-approximate design with
eps = (W + delta) / (2 pi |Y|) and c = 1 / (2 pi |Y|).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DeltaOutOfRange,
    DuplicatePoints,
    EdgeInteriorPoint,
    EdgeTooLong,
    SimplicityFailure,
)
from .polys import monomial_basis, monomial_sups, monomial_values, sphere_averages
from .projective import (
    ProjectiveDesignSet,
    cp_distance,
    horizontal_lift,
    times_i,
    verify_projective_design,
)
from .report import DesignReport, default_tol
from .sphere import Arc, Curve, arclength_integral, assemble_cycle, curve_length, is_simple

TWO_PI = 2 * np.pi


@dataclass
class SpanningTree:
    root: int
    edges: list            # (parent, child, weight)
    children: dict
    parent: dict
    size: int

    @property
    def total_weight(self) -> float:
        return float(sum(w for _, _, w in self.edges))

    def degree(self, i: int) -> int:
        return len(self.children[i]) + (0 if i == self.root else 1)

    @property
    def max_degree(self) -> int:
        return max(self.degree(i) for i in range(self.size))

    def weight(self, child: int) -> float:
        return next(w for p, c, w in self.edges if c == child)


def distance_matrix(Y: ProjectiveDesignSet) -> np.ndarray:
    n = len(Y)
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            D[i, j] = D[j, i] = cp_distance(Y.points[i], Y.points[j])
    return D


def build_mst(Y: ProjectiveDesignSet, root: int = 0, interior_tol: float = 1e-9) -> SpanningTree:
    """Kruskal on the complete graph; ties broken by (weight, i, j)."""
    n = len(Y)
    if n < 2:
        raise ValueError("a spanning tree needs at least two points")
    D = distance_matrix(Y)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for i, j in pairs:
        if D[i, j] <= 1e-9:
            raise DuplicatePoints(f"points {i} and {j} coincide")
    pairs.sort(key=lambda ij: (round(D[ij], 12), ij[0], ij[1]))
    comp = list(range(n))

    def find(a):
        while comp[a] != a:
            comp[a] = comp[comp[a]]
            a = comp[a]
        return a

    chosen = []
    for i, j in pairs:
        ri, rj = find(i), find(j)
        if ri != rj:
            comp[ri] = rj
            chosen.append((i, j))
            if len(chosen) == n - 1:
                break
    for i, j in chosen:
        for k in range(n):
            if k not in (i, j) and D[i, k] + D[k, j] - D[i, j] <= interior_tol:
                raise EdgeInteriorPoint(f"point {k} lies on the geodesic between {i} and {j}")
    adj = {i: [] for i in range(n)}
    for i, j in chosen:
        adj[i].append(j)
        adj[j].append(i)
    parent = {root: None}
    children = {i: [] for i in range(n)}
    order = [root]
    for y in order:
        for c in sorted(adj[y]):
            if c not in parent:
                parent[c] = y
                children[y].append(c)
                order.append(c)
    edges = [(parent[c], c, float(D[parent[c], c])) for c in order[1:]]
    return SpanningTree(root, edges, children, parent, n)


@dataclass(frozen=True)
class AssemblyConstants:
    W: float
    N: int
    M: float
    delta: float
    delta_tilde: float


def tree_constants(T: SpanningTree, delta: float) -> AssemblyConstants:
    W = 2 * T.total_weight
    N = T.max_degree
    M = TWO_PI * (T.size - 1) / N
    if not 0 < delta < M:
        raise DeltaOutOfRange(f"delta = {delta!r} must lie in (0, {M!r})")
    return AssemblyConstants(W, N, M, float(delta), delta / (2 * (T.size - 1)))


@dataclass
class Assembly:
    curve: Curve
    tree: SpanningTree
    constants: AssemblyConstants
    offsets: dict
    gaps: dict             # node -> sorted list of gap start angles
    fiber_arcs: list
    lift_arcs: list        # pairs (lift, twin)
    seed: int | None
    attempts: int
    simple: bool = True
    extra: dict = field(default_factory=dict)

    @property
    def length(self) -> float:
        return curve_length(self.curve)


def _build_segments(Y, T, K: AssemblyConstants, offsets):
    dt = K.delta_tilde
    arrival = {T.root: Y.points[T.root].real}
    gaps = {}
    fiber_arcs, lift_arcs = [], []
    order = [T.root]
    for y in order:
        a = arrival[y]
        kids = T.children[y]
        is_root = y == T.root
        m = len(kids) + (0 if is_root else 1)
        slots = [] if is_root else [(0.0, 0)]
        first = 0 if is_root else 1
        for j, c in enumerate(kids):
            slot = j + first
            alpha = TWO_PI * slot / m + offsets[c]
            slots.append((alpha, slot))
            z = np.cos(alpha) * a + np.sin(alpha) * times_i(a)
            zt = np.cos(alpha + dt) * a + np.sin(alpha + dt) * times_i(a)
            lift = horizontal_lift(z, Y.points[c], (y, slot, "a"), (c, 0, "a"))
            twin = horizontal_lift(zt, Y.points[c], (y, slot, "b"), (c, 0, "b"))
            lift_arcs.append((lift, twin))
            arrival[c] = lift.end_point
            order.append(c)
        slots.sort()
        gaps[y] = [s[0] for s in slots]
        ia = times_i(a)
        for k, (alpha, slot) in enumerate(slots):
            nxt_alpha, nxt_slot = slots[(k + 1) % len(slots)]
            if k + 1 == len(slots):
                nxt_alpha += TWO_PI
            fiber_arcs.append(Arc(u=a, v=ia, a=alpha + dt, b=nxt_alpha,
                                  start_node=(y, slot, "b"), end_node=(y, nxt_slot, "a")))
    return fiber_arcs, lift_arcs, gaps


def assemble(Y: ProjectiveDesignSet, delta: float, T: SpanningTree | None = None,
             offsets: dict | None = None, seed: int | None = 0, max_retries: int = 64) -> Assembly:
    """Join the fibers above Y into one simple geodesic cycle.

    Child phase offsets default to the middle of [0, 2 pi / N - delta~); if
    the cycle is not simple they are redrawn uniformly from that window with
    a generator seeded by ``seed``.
    """
    T = build_mst(Y) if T is None else T
    K = tree_constants(T, delta)
    for p, c, w in T.edges:
        if w >= np.pi / 2 - 1e-12:
            raise EdgeTooLong(f"edge {p}-{c} has length pi/2; the lift is not unique")
    window = TWO_PI / K.N - K.delta_tilde
    if offsets is None:
        offsets = {c: window / 2 for _, c, _ in T.edges}
    else:
        offsets = dict(offsets)
        for c, off in offsets.items():
            if not 0 <= off < window:
                raise DeltaOutOfRange(f"offset {off!r} for node {c} outside [0, {window!r})")
    rng = np.random.default_rng(seed)
    for attempt in range(1, max_retries + 1):
        fibers, lifts, gaps = _build_segments(Y, T, K, offsets)
        segs = list(fibers) + [arc for pair in lifts for arc in pair]
        curve = assemble_cycle(segs)
        if is_simple(curve):
            return Assembly(curve, T, K, offsets, gaps, fibers, lifts, seed, attempt)
        offsets = {c: float(rng.uniform(0, window)) for _, c, _ in T.edges}
    raise SimplicityFailure(f"no simple cycle after {max_retries} attempts")


def assemble_gamma(Y: ProjectiveDesignSet, T: SpanningTree | None = None, delta: float = 0.1,
                   offsets: dict | None = None, seed: int | None = 0) -> Curve:
    return assemble(Y, delta, T, offsets, seed).curve


# ---------------------------------------------------------------- (eps, c) accounting

def a_priori_eps(n_points: int, W: float, delta: float) -> tuple[float, float]:
    if n_points < 2:
        raise ValueError("need |Y| >= 2")
    c = 1.0 / (TWO_PI * n_points)
    return (W + delta) * c, c


def rescale_c(eps: float, c: float, length: float, c_new: float) -> float:
    """eps after changing the scaling constant from c to c_new."""
    if length <= 0 or c_new <= 0:
        raise ValueError("length and c_new must be positive")
    return eps + abs(c_new - c) * length


def overlap_bound(eps: float, c: float, L_length: float, gamma_length: float,
                  shared_length: float) -> float:
    """eps for a curve sharing ``shared_length`` with an (eps, c)-approximate set L."""
    if shared_length > min(L_length, gamma_length) + 1e-12:
        raise ValueError("shared length exceeds one of the lengths")
    return eps + c * (L_length + gamma_length - 2 * shared_length)


def empirical_defect(gamma, t: int, c: float, eps_claimed: float | None = None,
                     tol: float | None = None) -> DesignReport:
    """max over monomials of |c int_gamma f - avg f| / sup f, degree <= t.

    ``gamma`` may be a curve or a list of curves (integrals are summed).
    """
    tol = default_tol() if tol is None else tol
    curves = [gamma] if isinstance(gamma, Curve) else list(gamma)
    exps = monomial_basis(curves[0].dim, t)
    got = np.atleast_1d(arclength_integral(curves, lambda p: monomial_values(p, exps)))
    defects = np.abs(c * got - sphere_averages(exps)) / monomial_sups(exps)
    length = float(sum(curve_length(g) for g in curves))
    return DesignReport(t, exps, defects, tol, length=length, c=c, epsilon_claimed=eps_claimed)


def asymptotic_pipeline(entries, tol: float | None = None, seed: int | None = 0) -> list[dict]:
    """One row per (t, Y_t) with delta_t = min(1, W_t) / t.

    Rows whose Y_t fails to verify at strength floor(t/2) are flagged
    ``valid = False`` and not assembled.
    """
    rows = []
    for t, Y in entries:
        row = {"t": int(t), "Y_size": len(Y)}
        if not verify_projective_design(Y, t // 2, tol).passed:
            row["valid"] = False
            rows.append(row)
            continue
        T = build_mst(Y)
        W = 2 * T.total_weight
        delta = min(1.0, W) / t
        A = assemble(Y, delta, T, seed=seed)
        ell = A.length
        eps_t = W / (np.pi * len(Y))
        rep = empirical_defect(A.curve, t, 1.0 / ell, eps_claimed=eps_t, tol=tol)
        row.update({"valid": True, "W": W, "delta": delta, "length": ell, "eps": eps_t,
                    "eps_empirical": rep.max_defect, "pass": rep.passed})
        rows.append(row)
    return rows
