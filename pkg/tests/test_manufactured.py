import numpy as np
import pytest
import sympy as sp

from platekit.boundary_data import normalize
from platekit.curve import ClosedCurve
from platekit.manufactured import (
    apply_tensor,
    compatibility,
    displacement_from_strain,
    eval_all_boundary_data,
    hessian,
    plate_kernel_basis,
    random_airy,
    stress_from_airy,
    strain_from_stress,
    sym_grad,
)
from platekit.poly import MAX_DEGREE, X1, X2, PolyField, integrate_gradient
from platekit.tensor4 import Tensor4, duality, isotropic_compliance, isotropic_plate, rotate2
from platekit.transforms import plate_residual

x, y = sp.symbols("x y")


def to_sympy(p: PolyField):
    c = p.coeffs
    return sum(sp.Rational(c[i, j]) * x ** i * y ** j for i, j in zip(*np.nonzero(c)))


def from_sympy(expr) -> PolyField:
    terms = sp.Poly(sp.expand(expr), x, y).terms()
    return PolyField.from_terms({m: float(c) for m, c in terms})


def random_poly(rng, degree):
    terms = {(i, d - i): float(rng.integers(-5, 6)) for d in range(degree + 1) for i in range(d + 1)}
    return PolyField.from_terms(terms)


def mat(rows):
    return PolyField.matrix([[from_sympy(e) for e in r] for r in rows])


# -- PolyField --------------------------------------------------------------

def test_eval_and_derivatives_match_sympy(rng):
    p = random_poly(rng, 5)
    e = to_sympy(p)
    pts = rng.normal(size=(10, 2))
    vals = [float(e.subs({x: a, y: b})) for a, b in pts]
    np.testing.assert_allclose(p.at(pts), vals, rtol=1e-12)
    assert to_sympy(p.diff(0)) == sp.expand(sp.diff(e, x))
    assert to_sympy(p.diff(1).diff(1)) == sp.expand(sp.diff(e, y, 2))


def test_products_match_sympy(rng):
    a, b = random_poly(rng, 3), random_poly(rng, 3)
    assert to_sympy(a * b) == sp.expand(to_sympy(a) * to_sympy(b))
    assert to_sympy((1 - X1 * X1 - X2 * X2) ** 2) == sp.expand((1 - x ** 2 - y ** 2) ** 2)


def test_degree_cap():
    with pytest.raises(ValueError, match="cap"):
        PolyField.monomial(4, 0) * PolyField.monomial(0, 3)
    with pytest.raises(ValueError, match="cap"):
        PolyField.monomial(MAX_DEGREE, 0).antidiff(0)
    assert PolyField.monomial(3, 2).degree == 5
    assert PolyField.monomial(3, 2).diff(0).degree == 4
    assert PolyField.zeros().degree == -1


def test_serialization_roundtrip(rng):
    p = PolyField.stack([random_poly(rng, 3), random_poly(rng, 2)])
    q = PolyField.from_dict(p.to_dict())
    np.testing.assert_array_equal(p.coeffs, q.coeffs)


def test_integrate_gradient(rng):
    phi = random_poly(rng, 4)
    rec = integrate_gradient(phi.gradient())
    np.testing.assert_array_equal(rec.coeffs, (phi - float(phi(0, 0))).coeffs)
    with pytest.raises(ValueError, match="not a gradient"):
        integrate_gradient(PolyField.stack([X2, -X1]))


# -- hessian / stress -------------------------------------------------------

def test_hessian_examples():
    H = hessian(X1 ** 3)
    assert to_sympy(H[0, 0]) == 6 * x and H[0, 1].is_zero() and H[1, 1].is_zero()
    H = hessian(X1 * X2)
    assert H[0, 1].coeffs[0, 0] == 1 and H[0, 0].is_zero() and H[1, 1].is_zero()
    H = hessian(X1 ** 2 * X2 ** 2)
    assert to_sympy(H[0, 0]) == 2 * y ** 2
    assert to_sympy(H[0, 1]) == to_sympy(H[1, 0]) == 4 * x * y
    assert to_sympy(H[1, 1]) == 2 * x ** 2


def test_stress_examples():
    s = stress_from_airy(0.5 * (X1 * X1 + X2 * X2))
    np.testing.assert_array_equal(s(0.3, -0.2), np.eye(2))
    s = stress_from_airy(X1 * X1)
    np.testing.assert_array_equal(s(0.7, 0.1), np.diag([0.0, 2.0]))


def test_stress_divergence_free(rng):
    for _ in range(5):
        u = random_poly(rng, 5)
        assert stress_from_airy(u).div().is_zero()


# -- strain / displacement ----------------------------------------------------

def test_strain_isotropic_examples():
    S = isotropic_compliance(2.0, 2.0)
    I = PolyField.matrix([[PolyField.monomial(0, 0), PolyField.zeros()],
                          [PolyField.zeros(), PolyField.monomial(0, 0)]])
    # eps = sigma/(2mu') + (1/kappa - 1/mu') tr(sigma) I / 4 = I/4
    np.testing.assert_allclose(strain_from_stress(I, S)(0.0, 0.0), 0.25 * np.eye(2), atol=1e-16)
    assert strain_from_stress(PolyField.zeros((2, 2)), S).is_zero()
    S = isotropic_compliance(3.0, 5.0)
    dev = mat([[x, y ** 2], [y ** 2, -x]])
    np.testing.assert_allclose(strain_from_stress(dev, S).coeffs, (dev * (1 / 10)).coeffs, atol=1e-16)


def test_strain_needs_compliance():
    with pytest.raises(ValueError, match="compliance"):
        strain_from_stress(PolyField.zeros((2, 2)), isotropic_plate(1, 0.3))


def test_displacement_examples():
    eye = mat([[1, 0], [0, 1]])
    base = (0.3, -0.4)
    v = displacement_from_strain(eye, base)
    pts = np.array([[1.0, 2.0], [-0.5, 0.25]])
    np.testing.assert_allclose(v.at(pts), pts - np.array(base), atol=1e-15)
    assert displacement_from_strain(PolyField.zeros((2, 2))).is_zero()
    v = displacement_from_strain(mat([[y, 0], [0, 0]]))
    assert to_sympy(v[0]) == x * y
    assert to_sympy(v[1]) == -x ** 2 / 2


def test_displacement_recovers_strain(rng, iso):
    for C in (iso, Tensor4.random_convex(rng)):
        u = random_airy(rng, C, 4)
        eps = strain_from_stress(stress_from_airy(u), duality(C))
        base = rng.normal(size=2)
        v = displacement_from_strain(eps, base)
        assert (sym_grad(v) - eps).max_abs() <= 1e-12 * eps.max_abs()
        np.testing.assert_allclose(v(*base), 0.0, atol=1e-13)
        G = v.gradient()(*base)
        assert abs(G[1, 0] - G[0, 1]) <= 1e-12


def test_incompatible_strain_rejected():
    with pytest.raises(ValueError, match="incompatible"):
        displacement_from_strain(mat([[y ** 2, 0], [0, 0]]))
    assert to_sympy(compatibility(mat([[y ** 2, 0], [0, 0]]))) == 2


def test_eps_identity(rng):
    # C grad^2 u = R^T eps R with C = R S R
    for _ in range(5):
        S = Tensor4.random_convex(rng, kind="compliance")
        C = duality(S)
        u = random_poly(rng, 5)
        lhs = apply_tensor(C, hessian(u))
        eps = strain_from_stress(stress_from_airy(u), S)
        rhs = PolyField(np.einsum("ai,ab...,bj->ij...", np.array([[0, 1], [-1, 0]]), eps.coeffs,
                                  np.array([[0, 1], [-1, 0]])))
        assert (lhs - rhs).max_abs() <= 1e-12 * lhs.max_abs()


# -- plate kernel -------------------------------------------------------------

def test_kernel_degree3(iso):
    basis = plate_kernel_basis(iso, 3)
    assert len(basis) == 10
    assert {tuple(np.argwhere(b.coeffs)[0]) for b in basis} == {(i, d - i) for d in range(4) for i in range(d + 1)}


def _in_span(p, basis):
    A = np.array([b.coeffs.ravel() for b in basis]).T
    coef, *_ = np.linalg.lstsq(A, p.coeffs.ravel(), rcond=None)
    return np.abs(A @ coef - p.coeffs.ravel()).max() < 1e-12


def test_kernel_isotropic_quartics(iso):
    basis = plate_kernel_basis(iso, 4)
    quartic = [b for b in basis if b.degree == 4]
    assert len(basis) == 14 and len(quartic) == 4
    # biharmonic constraint 3 a40 + a22 + 3 a04 = 0 on every quartic element
    for q in quartic:
        c = q.coeffs
        assert 3 * c[4, 0] + c[2, 2] + 3 * c[0, 4] == pytest.approx(0.0, abs=1e-14)
    assert _in_span(X1 ** 4 - X2 ** 4, basis)
    assert _in_span(X1 ** 3 * X2, basis)
    assert not _in_span((X1 * X1 + X2 * X2) ** 2, basis)


def test_kernel_residual_vanishes(rng, iso):
    for C in (iso, Tensor4.random_convex(rng), Tensor4.random_convex(rng)):
        for b in plate_kernel_basis(C, 4):
            assert plate_residual(b, C).max_abs() <= 1e-13


def test_kernel_residual_matches_sympy(rng):
    C = Tensor4.random_convex(rng)
    T = C.full()
    u = random_airy(rng, C, 4)
    e = to_sympy(u)
    var = (x, y)
    res = sum(T[i, j, k, l] * sp.diff(e, var[i], var[j], var[k], var[l])
              for i in range(2) for j in range(2) for k in range(2) for l in range(2))
    assert abs(float(res)) <= 1e-10


def test_kernel_degree_bounds(iso):
    with pytest.raises(ValueError):
        plate_kernel_basis(iso, 5)


# -- all four datasets --------------------------------------------------------

def test_affine_u_gives_zero_data(circle, iso):
    sol = eval_all_boundary_data(2.0 + 3 * X1 - X2, iso, circle)
    for d in sol.datasets().values():
        assert np.abs(normalize(d)[0].values()).max() <= 1e-12


def test_quadratic_chain(circle):
    S = isotropic_compliance(2.0, 2.0)
    C = duality(S)
    sol = eval_all_boundary_data(0.5 * (X1 * X1 + X2 * X2), C, circle)
    np.testing.assert_allclose(sol.elast_neumann.traction, circle.n, atol=1e-15)
    base = circle.x[circle.base_index]
    np.testing.assert_allclose(sol.elast_dirichlet.v, 0.25 * (circle.x - base), atol=1e-15)


def test_random_datasets_admissible(circle, rng):
    from platekit.boundary_data import admissibility

    C = Tensor4.random_convex(rng)
    sol = eval_all_boundary_data(random_airy(rng, C, 3), C, circle)
    adm = admissibility(sol.elast_neumann)
    assert np.abs(adm["net_force"]).max() <= 1e-11
    assert abs(adm["net_torque"]) <= 1e-11
    assert np.abs(admissibility(sol.plate_neumann)["v_t_closure"]).max() <= 1e-11


def test_eval_needs_elastic(circle):
    with pytest.raises(ValueError):
        eval_all_boundary_data(X1 ** 3, duality(isotropic_plate(1, 0.3)), circle)
