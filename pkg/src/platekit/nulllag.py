"""Null-Lagrangian averages: boundary integrals against area quadrature.

``<grad^2 u>``, ``<C grad^2 u>`` and ``<det grad^2 u>`` depend only on
boundary data; ``<det C grad^2 u>`` does not. Averages are normalized by the
domain area; the raw integrals are reported alongside.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .curve import ClosedCurve
from .manufactured import ManufacturedSolution, apply_tensor, hessian
from .poly import X1, X2, PolyField
from .tensor4 import Tensor4, rotate2

DEFAULT_QUAD_DEGREE = 16


# ---------------------------------------------------------------------------
# Area quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Ellipse:
    a: float = 1.0
    b: float = 1.0
    center: tuple = (0.0, 0.0)

    @property
    def area(self) -> float:
        return float(np.pi * self.a * self.b)


def Disk(radius: float = 1.0, center=(0.0, 0.0)) -> Ellipse:
    return Ellipse(radius, radius, tuple(center))


@dataclass(frozen=True)
class Rectangle:
    x1: tuple = (0.0, 1.0)
    x2: tuple = (0.0, 1.0)

    @property
    def area(self) -> float:
        return float((self.x1[1] - self.x1[0]) * (self.x2[1] - self.x2[0]))


@dataclass(frozen=True)
class StarShaped:
    """``{r < rho(theta)}`` for a radial Fourier boundary."""

    r0: float
    cos: tuple = ()
    sin: tuple = ()

    def rho(self, th):
        r = np.full_like(th, self.r0, dtype=float)
        for k, a in enumerate(self.cos, start=1):
            r = r + a * np.cos(k * th)
        for k, b in enumerate(self.sin, start=1):
            r = r + b * np.sin(k * th)
        return r

    @property
    def area(self) -> float:
        return area_quadrature(lambda x1, x2: np.ones_like(x1), self)


def domain_for(curve: ClosedCurve):
    """Area domain matching a curve descriptor (circle, ellipse or radial custom)."""
    d = curve.descriptor
    p = d.get("params", {})
    center = tuple(p.get("center", (0.0, 0.0)))
    if d.get("type") == "circle":
        return Disk(p.get("radius", 1.0), center)
    if d.get("type") == "ellipse":
        return Ellipse(p["a"], p["b"], center)
    if d.get("type") == "custom" and "r0" in p:
        return StarShaped(p["r0"], tuple(p.get("cos", ())), tuple(p.get("sin", ())))
    raise ValueError("no area quadrature for this curve; use a circle, ellipse or radial curve")


def area_quadrature(f: PolyField | Callable, domain, degree: int = DEFAULT_QUAD_DEGREE):
    """Integral of ``f`` over ``domain``.

    Disks and ellipses use Gauss-Legendre in the radius times the trapezoidal
    rule in angle, exact for polynomials of total degree <= ``degree``.
    Rectangles use tensor Gauss-Legendre with the same exactness.
    """
    func = f if callable(f) and not isinstance(f, PolyField) else f.__call__
    n_gl = degree // 2 + 2
    xg, wg = np.polynomial.legendre.leggauss(n_gl)
    if isinstance(domain, Rectangle):
        (a1, b1), (a2, b2) = domain.x1, domain.x2
        s = 0.5 * (b1 - a1) * xg + 0.5 * (a1 + b1)
        t = 0.5 * (b2 - a2) * xg + 0.5 * (a2 + b2)
        S, T = np.meshgrid(s, t, indexing="ij")
        W = np.outer(wg, wg) * 0.25 * (b1 - a1) * (b2 - a2)
        out = np.tensordot(W, func(S, T), axes=([0, 1], [0, 1]))
        return float(out) if np.ndim(out) == 0 else out
    n_th = degree + 2
    th = 2 * np.pi * np.arange(n_th) / n_th
    if isinstance(domain, Ellipse):
        r = 0.5 * (xg + 1)
        R, TH = np.meshgrid(r, th, indexing="ij")
        X1v = domain.center[0] + domain.a * R * np.cos(TH)
        X2v = domain.center[1] + domain.b * R * np.sin(TH)
        W = np.outer(0.5 * wg * r, np.full(n_th, 2 * np.pi / n_th)) * domain.a * domain.b
    elif isinstance(domain, StarShaped):
        n_th = max(n_th, 256)
        th = 2 * np.pi * np.arange(n_th) / n_th
        rho = domain.rho(th)
        R = 0.5 * (xg[:, None] + 1) * rho[None, :]
        TH = np.broadcast_to(th, R.shape)
        X1v, X2v = R * np.cos(TH), R * np.sin(TH)
        W = (0.5 * wg[:, None] * rho[None, :]) * R * (2 * np.pi / n_th)
    else:
        raise TypeError(f"unsupported domain {domain!r}")
    vals = func(X1v, X2v)
    out = np.tensordot(W, vals, axes=([0, 1], [0, 1]))
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# Boundary formulas
# ---------------------------------------------------------------------------

def _sym_outer_integral(curve: ClosedCurve, a: np.ndarray) -> np.ndarray:
    M = np.einsum("p,pi,pj->ij", curve.ds, a, curve.n)
    return 0.5 * (M + M.T)


def avg_hessian_boundary(curve: ClosedCurve, grad_u) -> np.ndarray:
    """``(1/|Omega|) oint sym(grad u (x) n) ds``."""
    return _sym_outer_integral(curve, curve.check(grad_u)) / curve.area


def avg_strain_boundary(curve: ClosedCurve, v) -> np.ndarray:
    """``<eps> = (1/|Omega|) oint sym(v (x) n) ds``."""
    return _sym_outer_integral(curve, curve.check(v)) / curve.area


def avg_C_hessian_boundary(curve: ClosedCurve, v) -> np.ndarray:
    """``<C grad^2 u> = R^T <eps> R`` from the boundary displacement."""
    return rotate2(avg_strain_boundary(curve, v))


def avg_det_hessian_boundary(curve: ClosedCurve, grad_u) -> float:
    """``(1/|Omega|) oint (u1 u22 n1 - u1 u12 n2) ds``.

    ``u22 n1 - u12 n2`` equals the second component of ``(grad^2 u) t``, which
    is the tangential derivative of ``grad u``; only boundary data enter.
    """
    grad_u = curve.check(grad_u)
    hess_t = curve.d_dt(grad_u)
    return float(curve.circulate(grad_u[:, 0] * hess_t[:, 1])) / curve.area


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class AverageReport:
    quantity: str
    boundary_value: object
    area_value: object
    discrepancy: float | None
    area: float
    boundary_integral: object = None
    area_integral: object = None

    def to_dict(self) -> dict:
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, np.ndarray):
                d[k] = v.tolist()
        return d


def _report(name, bvalue, avalue, area) -> AverageReport:
    bvalue = np.asarray(bvalue, dtype=float)
    avalue = np.asarray(avalue, dtype=float)
    disc = float(np.abs(bvalue - avalue).max())
    unwrap = (lambda a: float(a) if a.ndim == 0 else a)
    return AverageReport(name, unwrap(bvalue), unwrap(avalue), disc, area,
                         unwrap(bvalue * area), unwrap(avalue * area))


def det2(field: PolyField) -> PolyField:
    return field[0, 0] * field[1, 1] - field[0, 1] * field[0, 1]


def null_lagrangian_reports(curve: ClosedCurve, grad_u, v, u: PolyField, C: Tensor4,
                            domain=None, degree: int = DEFAULT_QUAD_DEGREE) -> list[AverageReport]:
    """Boundary vs area values of ``<grad^2 u>``, ``<C grad^2 u>``, ``<det grad^2 u>``.

    The boundary side sees only ``grad u`` and ``v`` on the curve; the area
    side integrates the polynomial ``u`` over ``domain``.
    """
    domain = domain if domain is not None else domain_for(curve)
    area = domain.area
    H = hessian(u)
    return [
        _report("hessian", avg_hessian_boundary(curve, grad_u),
                area_quadrature(H, domain, degree) / area, area),
        _report("C_hessian", avg_C_hessian_boundary(curve, v),
                area_quadrature(apply_tensor(C, H), domain, degree) / area, area),
        _report("det_hessian", avg_det_hessian_boundary(curve, grad_u),
                area_quadrature(det2(H), domain, degree) / area, area),
    ]


def solution_reports(sol: ManufacturedSolution, domain=None,
                     degree: int = DEFAULT_QUAD_DEGREE) -> list[AverageReport]:
    return null_lagrangian_reports(sol.curve, sol.grad_u(), sol.elast_dirichlet.v,
                                   sol.u, sol.C, domain, degree)


@dataclass
class CounterexampleResult:
    """Two fields with identical plate Dirichlet data on the unit circle."""

    det_C_hessian: tuple
    det_hessian: tuple
    separation: float
    control_gap: float
    dirichlet_gap: float

    def reports(self) -> list[AverageReport]:
        return [*self.det_C_hessian, *self.det_hessian]


BUMP = (1 - X1 * X1 - X2 * X2) ** 2


def det_C_hessian_counterexample(curve: ClosedCurve, C: Tensor4, u1: PolyField | None = None,
                                 degree: int = DEFAULT_QUAD_DEGREE) -> CounterexampleResult:
    """Compare ``u1`` with ``u2 = u1 + (1 - |x|^2)^2`` on the unit disk.

    ``u2`` has the same ``(u, u_n)`` on the unit circle, so every null-Lagrangian
    agrees; ``<det C grad^2 u>`` generally does not.
    """
    if C.kind != "elastic":
        raise ValueError("C must be an elastic-kind tensor")
    u1 = X1 ** 3 if u1 is None else u1
    u2 = u1 + BUMP
    domain = Disk(1.0)
    area = domain.area

    def dirichlet(u):
        g = u.gradient().at(curve.x)
        return np.column_stack([u.at(curve.x), np.einsum("ij,ij->i", g, curve.n)])

    gap = float(np.abs(dirichlet(u1) - dirichlet(u2)).max())
    det_c, det_h = [], []
    for name, u in (("u1", u1), ("u2", u2)):
        H = hessian(u)
        val_c = area_quadrature(det2(apply_tensor(C, H)), domain, degree) / area
        val_h = area_quadrature(det2(H), domain, degree) / area
        bval_h = avg_det_hessian_boundary(curve, u.gradient().at(curve.x))
        det_c.append(AverageReport(f"det_C_hessian[{name}]", None, val_c, None,
                                   area, None, val_c * area))
        det_h.append(_report(f"det_hessian[{name}]", bval_h, val_h, area))
    separation = abs(det_c[0].area_value - det_c[1].area_value)
    control = abs(det_h[0].area_value - det_h[1].area_value)
    return CounterexampleResult(tuple(det_c), tuple(det_h), separation, control, gap)
