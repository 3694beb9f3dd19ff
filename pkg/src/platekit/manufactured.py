"""Exact polynomial plate/elasticity solutions used as oracles.

An Airy polynomial ``u`` solving ``div div (C grad^2 u) = 0`` with constant
``C`` yields the stress ``sigma = R^T grad^2 u R``, the strain
``eps = S sigma`` with ``S = R C R``, and a displacement ``v`` with
``sym grad v = eps``. Only sampling on the boundary introduces rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundary_data import ElastDirichlet, ElastNeumann, PlateDirichlet, PlateNeumann
from .curve import ClosedCurve
from .poly import PolyField, integrate_gradient
from .tensor4 import R_PERP, Tensor4, duality
from .transforms import plate_neumann_via_psi, plate_residual

COMPAT_TOL = 1e-12


def hessian(u: PolyField) -> PolyField:
    if u.value_shape:
        raise ValueError("hessian needs a scalar field")
    return u.gradient().gradient()


def _conjugate(field: PolyField) -> PolyField:
    return PolyField(np.einsum("ai,ab...,bj->ij...", R_PERP, field.coeffs, R_PERP))


def stress_from_airy(u: PolyField) -> PolyField:
    """``sigma = R_perp^T (grad^2 u) R_perp = [[u22, -u12], [-u12, u11]]``."""
    return _conjugate(hessian(u))


def apply_tensor(T: Tensor4, field: PolyField) -> PolyField:
    return PolyField(np.tensordot(T.full(), field.coeffs, axes=([2, 3], [0, 1])))


def strain_from_stress(sigma: PolyField, S: Tensor4) -> PolyField:
    if S.kind != "compliance":
        raise ValueError("Hooke's law eps = S sigma needs a compliance tensor")
    return apply_tensor(S, sigma)


def sym_grad(v: PolyField) -> PolyField:
    G = v.gradient()
    return (G + G.transpose()) * 0.5


def compatibility(eps: PolyField) -> PolyField:
    """``eps11,22 + eps22,11 - 2 eps12,12``."""
    return (eps[0, 0].diff(1).diff(1) + eps[1, 1].diff(0).diff(0)
            - 2 * eps[0, 1].diff(0).diff(1))


def displacement_from_strain(eps: PolyField, base=(0.0, 0.0)) -> PolyField:
    """Polynomial ``v`` with ``sym grad v = eps``, ``v(base) = 0`` and zero rotation at ``base``.

    The rotation ``omega = (v2,1 - v1,2)/2`` has gradient
    ``(eps12,1 - eps11,2, eps22,1 - eps12,2)``; each row of
    ``grad v = eps + omega [[0, -1], [1, 0]]`` is then integrated.
    """
    if eps.value_shape != (2, 2):
        raise ValueError("strain must be a 2x2 matrix field")
    comp = compatibility(eps)
    if comp.max_abs() > COMPAT_TOL * max(eps.max_abs(), 1.0):
        raise ValueError(f"strain is incompatible: residual {comp.max_abs():.3e}")
    e11, e12, e22 = eps[0, 0], eps[0, 1], eps[1, 1]
    grad_omega = PolyField.stack([e12.diff(0) - e11.diff(1), e22.diff(0) - e12.diff(1)])
    omega = integrate_gradient(grad_omega, tol=COMPAT_TOL)
    bx, by = float(base[0]), float(base[1])
    omega = omega - float(omega(bx, by))
    v1 = integrate_gradient(PolyField.stack([e11, e12 - omega]), tol=COMPAT_TOL)
    v2 = integrate_gradient(PolyField.stack([e12 + omega, e22]), tol=COMPAT_TOL)
    v1 = v1 - float(v1(bx, by))
    v2 = v2 - float(v2(bx, by))
    return PolyField.stack([v1, v2])


def _monomials(degree: int):
    return [(i, d - i) for d in range(degree + 1) for i in range(d, -1, -1)]


def plate_kernel_basis(C: Tensor4, degree: int) -> list[PolyField]:
    """Basis of polynomials of degree <= ``degree`` (at most 4) solving the plate equation.

    Everything up to cubic is a solution; homogeneous quartics must satisfy
    one linear constraint ``sum_k r_k a_k = 0`` on their five coefficients.
    """
    if not 0 <= degree <= 4:
        raise ValueError("plate kernel basis is available for degree 0..4")
    basis = [PolyField.monomial(i, j) for i, j in _monomials(min(degree, 3))]
    if degree == 4:
        quartic = [PolyField.monomial(4 - k, k) for k in range(5)]
        row = np.array([float(plate_residual(q, C).coeffs[0, 0]) for q in quartic])
        if not np.any(row):
            basis.extend(quartic)
        else:
            p = int(np.argmax(np.abs(row)))
            for k in range(5):
                if k != p:
                    basis.append(quartic[k] - quartic[p] * (row[k] / row[p]))
    return basis


def random_airy(rng: np.random.Generator, C: Tensor4, degree: int = 3) -> PolyField:
    """Random combination of the kernel basis with standard normal weights."""
    basis = plate_kernel_basis(C, degree)
    w = rng.normal(size=len(basis))
    out = PolyField.zeros()
    for wk, b in zip(w, basis):
        out = out + b * wk
    return out


@dataclass
class ManufacturedSolution:
    """An exact plate solution with all derived fields and boundary traces."""

    u: PolyField
    C: Tensor4
    S: Tensor4
    sigma: PolyField
    eps: PolyField
    v: PolyField
    curve: ClosedCurve
    plate_dirichlet: PlateDirichlet
    plate_neumann: PlateNeumann
    elast_dirichlet: ElastDirichlet
    elast_neumann: ElastNeumann

    def datasets(self) -> dict:
        return {d.kind: d for d in (self.plate_dirichlet, self.plate_neumann,
                                     self.elast_dirichlet, self.elast_neumann)}

    def grad_u(self) -> np.ndarray:
        return self.u.gradient().at(self.curve.x)


def eval_all_boundary_data(u: PolyField, C: Tensor4, curve: ClosedCurve) -> ManufacturedSolution:
    """Exact traces of all four boundary datasets for the plate solution ``u``.

    The displacement is gauged at the curve's base node: ``v = 0`` and zero
    rotation there.
    """
    if C.kind != "elastic":
        raise ValueError("C must be an elastic-kind tensor")
    S = duality(C)
    sigma = stress_from_airy(u)
    eps = strain_from_stress(sigma, S)
    base = curve.x[curve.base_index]
    v = displacement_from_strain(eps, base)
    x = curve.x
    grad = u.gradient().at(x)
    pd = PlateDirichlet(curve, u.at(x), np.einsum("ij,ij->i", grad, curve.n))
    en = ElastNeumann(curve, np.einsum("pij,pj->pi", sigma.at(x), curve.n))
    ed = ElastDirichlet(curve, v.at(x))
    pn = plate_neumann_via_psi(curve, u, C)
    return ManufacturedSolution(u, C, S, sigma, eps, v, curve, pd, pn, ed, en)
