"""Dichotomy condition for a compliance tensor field.

From the compliance components the coefficients ``a = (A, 4C, 2B + 4E, 4D, F)``
define the quartic ``a0 s^4 + a1 s^3 + a2 s^2 + a3 s + a4`` and the 7x7
matrix ``M`` pairing it with its derivative. The condition asks that
``|det M| / a0`` be positive at every point or zero at every point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tensor4 import Tensor4, duality

DEFAULT_TOL = 1e-9

POSITIVE = "PositiveEverywhere"
ZERO = "ZeroEverywhere"
VIOLATED = "Violated"


class InvalidSampleError(ValueError):
    pass


@dataclass(frozen=True)
class DichotomyCoeffs:
    a0: float
    a1: float
    a2: float
    a3: float
    a4: float

    def as_array(self) -> np.ndarray:
        return np.array([self.a0, self.a1, self.a2, self.a3, self.a4], dtype=float)


def coeffs_from_compliance(S0: Tensor4) -> DichotomyCoeffs:
    if S0.kind != "compliance":
        raise ValueError("dichotomy coefficients are defined from a compliance tensor")
    return DichotomyCoeffs(S0.A, 4 * S0.C, 2 * S0.B + 4 * S0.E, 4 * S0.D, S0.F)


def build_M(a) -> np.ndarray:
    a = a.as_array() if isinstance(a, DichotomyCoeffs) else np.asarray(a, dtype=float)
    d = np.array([4 * a[0], 3 * a[1], 2 * a[2], a[3]])
    M = np.zeros((7, 7))
    for r in range(3):
        M[r, r:r + 5] = a
    for r in range(4):
        M[3 + r, r:r + 4] = d
    return M


def det_M(a) -> float:
    """Determinant by LU with partial pivoting."""
    return float(np.linalg.det(build_M(a)))


def relative_det(a) -> float:
    """``|det M| / (max row norm)^7``, invariant under scaling of ``a``."""
    M = build_M(a)
    scale = np.linalg.norm(M, axis=1).max()
    if scale == 0:
        return 0.0
    return abs(float(np.linalg.det(M / scale)))


@dataclass
class DichotomyReport:
    classification: str
    tolerance: float
    points: list
    det: list
    normalized: list
    relative: list
    offending: list = field(default_factory=list)
    unverified: str = "smoothness (C^{1,1}) of the field between samples is not checked"

    @property
    def holds(self) -> bool:
        return self.classification != VIOLATED

    def to_dict(self) -> dict:
        return {
            "classification": self.classification,
            "holds": self.holds,
            "tolerance": self.tolerance,
            "samples": [
                {"point": p, "det_M": d, "normalized_det": n, "relative_det": r}
                for p, d, n, r in zip(self.points, self.det, self.normalized, self.relative)
            ],
            "offending_points": self.offending,
            "unverified": self.unverified,
        }


def classify_field(samples, tol: float = DEFAULT_TOL) -> DichotomyReport:
    """Classify sampled ``(point, tensor)`` pairs.

    Elastic-kind tensors are converted to compliance by duality first. The
    zero test is ``|det M| <= tol * (max row norm)^7``. When both branches
    occur, the offending points are the samples where the determinant
    vanishes.
    """
    samples = list(samples)
    if not samples:
        raise InvalidSampleError("no samples supplied")
    points, dets, norm, rel = [], [], [], []
    for point, T in samples:
        S0 = duality(T) if T.kind == "elastic" else T
        a = coeffs_from_compliance(S0)
        if not a.a0 > 0:
            raise InvalidSampleError(f"a0 = {a.a0} must be positive (at point {list(point)})")
        d = det_M(a)
        points.append([float(v) for v in point])
        dets.append(d)
        norm.append(abs(d) / a.a0)
        rel.append(relative_det(a))
    zero = [r <= tol for r in rel]
    if all(zero):
        cls, bad = ZERO, []
    elif not any(zero):
        cls, bad = POSITIVE, []
    else:
        cls, bad = VIOLATED, [p for p, z in zip(points, zero) if z]
    return DichotomyReport(cls, tol, points, dets, norm, rel, bad)
