"""Certification records shared by the verification routines."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOL = 1e-9


def default_tol() -> float:
    """Pass tolerance, overridable through DESIGN_CURVES_TOL."""
    raw = os.environ.get("DESIGN_CURVES_TOL")
    if raw is None:
        return DEFAULT_TOL
    return float(raw)


@dataclass
class DesignReport:
    strength: int
    exponents: np.ndarray
    defects: np.ndarray
    tol: float = DEFAULT_TOL
    length: float | None = None
    c: float | None = None
    epsilon_claimed: float | None = None
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def max_defect(self) -> float:
        return float(self.defects.max()) if len(self.defects) else 0.0

    @property
    def worst(self) -> tuple[int, ...] | None:
        if not len(self.defects):
            return None
        return tuple(int(e) for e in self.exponents[int(np.argmax(self.defects))])

    @property
    def epsilon_empirical(self) -> float | None:
        # only meaningful for sup-normalized (approximate) defects
        return self.max_defect if self.c is not None else None

    @property
    def passed(self) -> bool:
        if self.epsilon_claimed is not None:
            return self.max_defect <= self.epsilon_claimed + self.tol
        return self.max_defect <= self.tol

    def defect_of(self, alpha) -> float:
        alpha = np.asarray(alpha)
        hit = np.all(self.exponents == alpha, axis=1)
        if not hit.any():
            raise KeyError(tuple(alpha))
        return float(self.defects[np.argmax(hit)])

    def to_dict(self, full: bool = False) -> dict:
        out = {
            "strength": self.strength,
            "n_monomials": int(len(self.defects)),
            "max_defect": self.max_defect,
            "worst_monomial": list(self.worst) if self.worst is not None else None,
            "length": self.length,
            "c": self.c,
            "epsilon_claimed": self.epsilon_claimed,
            "epsilon_empirical": self.epsilon_empirical,
            "tol": self.tol,
            "pass": self.passed,
            "seed": self.seed,
        }
        if full:
            out["defects"] = [
                {"alpha": [int(e) for e in a], "defect": float(v)}
                for a, v in zip(self.exponents, self.defects)
            ]
        out.update(self.extra)
        return out
