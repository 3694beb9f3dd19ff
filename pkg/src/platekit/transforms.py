"""Conversions between plate and elasticity boundary data.

Traction and plate Dirichlet data are linked by ``R^T sigma n = (grad^2 u) t``;
displacement and plate moments by ``M_n = t.(grad v)t``,
``M_t = -n.(grad v)t`` and its inverse ``v_t = -M_t n + M_n t``.

All second derivatives on the boundary are tangential derivatives of the
recovered gradient, ``(grad^2 u) t = d/dt grad u``; normal derivatives of the
data are never needed.
"""

from __future__ import annotations

import numpy as np

from .boundary_data import (
    ElastDirichlet,
    ElastNeumann,
    GaugeReport,
    InadmissibleDataError,
    PlateDirichlet,
    PlateNeumann,
    normalize,
)
from .curve import ClosedCurve
from .poly import PolyField
from .tensor4 import R_PERP, Tensor4

DEFAULT_CLOSURE_TOL = 1e-6

#: M_n = n.(C grad^2 u)n (coheres with the displacement route)
OPERATIVE = "operative"
#: (C grad^2 u)n.n = -M_n
APPLIED = "applied"


def _relative(res, scale: float) -> float:
    mag = float(np.linalg.norm(np.atleast_1d(res)))
    return mag / scale if scale > 0 else mag


def _check_same_curve(curve: ClosedCurve, d) -> None:
    if d.curve is not curve and d.curve.N != curve.N:
        raise ValueError("dataset and curve disagree on the node count")


def traction_to_plate_dirichlet(curve: ClosedCurve, data: ElastNeumann,
                                tol: float = DEFAULT_CLOSURE_TOL) -> tuple[PlateDirichlet, GaugeReport]:
    """Recover ``(u, u_n)`` from a traction ``sigma n``.

    ``grad u`` is the arclength antiderivative of ``R^T sigma n`` and ``u`` the
    antiderivative of ``u_t = grad u . t``. The two closure residuals are the
    net force and (up to sign conventions) the net torque of the traction.
    """
    _check_same_curve(curve, data)
    sn = curve.check(data.traction)
    scale = curve.circulate(np.hypot(sn[:, 0], sn[:, 1]))
    g = sn @ R_PERP  # rows: R^T sn
    grad_u, _ = curve.integrate_from(g)
    force = curve.circulate(sn)  # the closure of g is R^T force, same magnitude
    rel_force = _relative(force, scale)
    residuals = {"net_force": force, "net_force_relative": rel_force}
    if rel_force > tol:
        raise InadmissibleDataError(
            f"traction is not equilibrated: |net force| / oint|sn| = {rel_force:.3e} > {tol:.1e}",
            residuals)
    u_t = np.einsum("ij,ij->i", grad_u, curve.t)
    u, torque = curve.integrate_from(u_t)
    u_scale = curve.circulate(np.abs(u_t))
    rel_torque = _relative(torque, u_scale)
    residuals.update(u_t_closure=torque, u_t_closure_relative=rel_torque)
    if rel_torque > tol:
        raise InadmissibleDataError(
            f"traction carries a net torque: |oint u_t ds| relative {rel_torque:.3e} > {tol:.1e}",
            residuals)
    u_n = np.einsum("ij,ij->i", grad_u, curve.n)
    out, report = normalize(PlateDirichlet(curve, u, u_n))
    report.residuals.update(residuals)
    return out, report


def plate_dirichlet_to_traction(curve: ClosedCurve, data: PlateDirichlet) -> ElastNeumann:
    """``sigma n = R_perp (d/dt grad u)`` with ``grad u = u_n n + u_t t``."""
    _check_same_curve(curve, data)
    u_t = curve.d_dt(data.u)
    grad_u = data.u_n[:, None] * curve.n + u_t[:, None] * curve.t
    hess_t = curve.d_dt(grad_u)
    return ElastNeumann(curve, hess_t @ R_PERP.T)


def displacement_to_moments(curve: ClosedCurve, data: ElastDirichlet) -> PlateNeumann:
    """``M_n = t.v_t`` and ``M_t = -n.v_t`` where ``v_t = (grad v) t``."""
    _check_same_curve(curve, data)
    v_t = curve.d_dt(data.v)
    M_n = np.einsum("ij,ij->i", v_t, curve.t)
    M_t = -np.einsum("ij,ij->i", v_t, curve.n)
    return PlateNeumann(curve, M_n, M_t)


def moments_to_displacement(curve: ClosedCurve, data: PlateNeumann,
                            tol: float = DEFAULT_CLOSURE_TOL) -> tuple[ElastDirichlet, GaugeReport]:
    """Integrate ``v_t = -M_t n + M_n t`` along the boundary.

    A constant added to ``M_t`` shows up as a rigid rotation of ``v``.
    """
    _check_same_curve(curve, data)
    w = -np.asarray(data.M_t)[:, None] * curve.n + np.asarray(data.M_n)[:, None] * curve.t
    v, closure = curve.integrate_from(w)
    rel = _relative(closure, curve.circulate(np.hypot(w[:, 0], w[:, 1])))
    residuals = {"v_t_closure": closure, "v_t_closure_relative": rel}
    if rel > tol:
        raise InadmissibleDataError(
            f"moment data do not close: |oint v_t ds| relative {rel:.3e} > {tol:.1e}", residuals)
    out, report = normalize(ElastDirichlet(curve, v))
    report.residuals.update(residuals)
    return out, report


def plate_moment_field(u: PolyField, C: Tensor4) -> PolyField:
    """``C grad^2 u`` as a matrix-valued polynomial."""
    if C.kind != "elastic":
        raise ValueError("plate moments need an elastic-kind tensor")
    H = u.gradient().gradient()
    return PolyField(np.tensordot(C.full(), H.coeffs, axes=([2, 3], [0, 1])))


def plate_residual(u: PolyField, C: Tensor4) -> PolyField:
    """``div div (C grad^2 u)``; identically zero for plate solutions."""
    return plate_moment_field(u, C).div().div()


def plate_neumann_via_psi(curve: ClosedCurve, u: PolyField, C: Tensor4,
                          tol: float = DEFAULT_CLOSURE_TOL, convention: str = OPERATIVE,
                          return_psi: bool = False):
    """Plate Neumann data from an exact solution through the potential ``psi``.

    ``psi`` is the arclength antiderivative of ``q = div(C grad^2 u).n`` with
    ``psi(base) = 0``; then ``M_t = psi + (C grad^2 u)n.t`` and
    ``M_n = n.(C grad^2 u)n``. With ``convention="applied"`` the sign of
    ``M_n`` is flipped to ``(C grad^2 u)n.n = -M_n``.
    """
    if convention not in (OPERATIVE, APPLIED):
        raise ValueError(f"unknown sign convention {convention!r}")
    m = plate_moment_field(u, C)
    pde = m.div().div()
    if pde.max_abs() > 1e-10 * max(m.max_abs(), 1.0):
        raise ValueError(f"u does not solve the plate equation: residual {pde.max_abs():.3e}")
    mvals = m.at(curve.x)  # (N, 2, 2)
    q = np.einsum("ij,ij->i", m.div().at(curve.x), curve.n)
    psi, closure = curve.integrate_from(q)
    scale = curve.circulate(np.abs(q))
    if _relative(closure, scale) > tol:
        raise InadmissibleDataError("psi does not close along the boundary",
                                    {"psi_closure": closure})
    mn = np.einsum("pij,pj->pi", mvals, curve.n)
    M_t = psi + np.einsum("pi,pi->p", mn, curve.t)
    M_n = np.einsum("pi,pi->p", mn, curve.n)
    if convention == APPLIED:
        M_n = -M_n
    out = PlateNeumann(curve, M_n, M_t)
    if return_psi:
        return out, psi, closure
    return out
