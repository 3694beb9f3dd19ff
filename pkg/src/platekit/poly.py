"""Bivariate polynomial fields with scalar, vector or matrix values.

Coefficients live in an array of shape ``value_shape + (SIZE, SIZE)``, where
entry ``[..., i, j]`` multiplies ``x1**i * x2**j``. Differentiation and
integration only rescale coefficients by small integers, so fields with
integer-valued coefficients stay exact in double precision.
"""

from __future__ import annotations

import numpy as np

MAX_DEGREE = 6
SIZE = MAX_DEGREE + 1

_I, _J = np.indices((SIZE, SIZE))
_OVER_CAP = (_I + _J) > MAX_DEGREE


class PolyField:
    """Polynomial field in ``(x1, x2)`` of total degree at most ``MAX_DEGREE``."""

    __array_priority__ = 100

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=float)
        if c.ndim < 2:
            raise ValueError("coefficient array needs at least two axes")
        n1, n2 = c.shape[-2:]
        if n1 > SIZE or n2 > SIZE:
            extra = c.copy()
            extra[..., :SIZE, :SIZE] = 0
            if np.any(extra):
                raise ValueError(f"polynomial degree exceeds the cap {MAX_DEGREE}")
            c = c[..., :SIZE, :SIZE]
        full = np.zeros(c.shape[:-2] + (SIZE, SIZE))
        full[..., : c.shape[-2], : c.shape[-1]] = c
        if np.any(full[..., _OVER_CAP]):
            raise ValueError(f"polynomial degree exceeds the cap {MAX_DEGREE}")
        self.coeffs = full

    # -- construction ----------------------------------------------------
    @classmethod
    def zeros(cls, value_shape=()) -> "PolyField":
        return cls(np.zeros(tuple(value_shape) + (SIZE, SIZE)))

    @classmethod
    def monomial(cls, i: int, j: int, coef: float = 1.0) -> "PolyField":
        if i + j > MAX_DEGREE:
            raise ValueError(f"monomial degree {i + j} exceeds the cap {MAX_DEGREE}")
        c = np.zeros((SIZE, SIZE))
        c[i, j] = coef
        return cls(c)

    @classmethod
    def from_terms(cls, terms: dict) -> "PolyField":
        """Scalar polynomial from ``{(i, j): coefficient}``."""
        out = cls.zeros()
        for (i, j), v in terms.items():
            out = out + cls.monomial(i, j, v)
        return out

    @classmethod
    def stack(cls, parts) -> "PolyField":
        return cls(np.stack([p.coeffs for p in parts]))

    @classmethod
    def matrix(cls, rows) -> "PolyField":
        return cls.stack([cls.stack(r) for r in rows])

    # -- structure -------------------------------------------------------
    @property
    def value_shape(self) -> tuple:
        return self.coeffs.shape[:-2]

    @property
    def degree(self) -> int:
        nz = np.any(self.coeffs != 0, axis=tuple(range(len(self.value_shape))))
        if not nz.any():
            return -1
        return int((_I + _J)[nz].max())

    def __getitem__(self, idx) -> "PolyField":
        if not isinstance(idx, tuple):
            idx = (idx,)
        return PolyField(self.coeffs[idx + (slice(None), slice(None))])

    def max_abs(self) -> float:
        return float(np.abs(self.coeffs).max())

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.max_abs() <= tol

    def transpose(self) -> "PolyField":
        if len(self.value_shape) != 2:
            raise ValueError("transpose needs a matrix-valued field")
        return PolyField(self.coeffs.swapaxes(0, 1))

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, PolyField):
            return PolyField(self.coeffs + other.coeffs)
        c = self.coeffs.copy()
        c[..., 0, 0] += other
        return PolyField(c)

    __radd__ = __add__

    def __neg__(self):
        return PolyField(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PolyField):
            return PolyField(self.coeffs * other)
        if self.value_shape and other.value_shape:
            raise ValueError("product needs at least one scalar-valued factor")
        scalar, field = (self, other) if not self.value_shape else (other, self)
        out = np.zeros(field.coeffs.shape)
        a = scalar.coeffs
        for i, j in zip(*np.nonzero(a)):
            shifted = np.zeros(field.coeffs.shape)
            src = field.coeffs[..., : SIZE - i, : SIZE - j]
            shifted[..., i:, j:] = src
            lost = field.coeffs.copy()
            lost[..., : SIZE - i, : SIZE - j] = 0
            if np.any(lost) or np.any(shifted[..., _OVER_CAP]):
                raise ValueError(f"product degree exceeds the cap {MAX_DEGREE}")
            out += a[i, j] * shifted
        return PolyField(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = PolyField.monomial(0, 0)
        for _ in range(k):
            out = out * self
        return out

    # -- calculus --------------------------------------------------------
    def diff(self, axis: int) -> "PolyField":
        """Partial derivative in ``x1`` (axis 0) or ``x2`` (axis 1)."""
        c = self.coeffs
        out = np.zeros_like(c)
        k = np.arange(1, SIZE, dtype=float)
        if axis == 0:
            out[..., :-1, :] = c[..., 1:, :] * k[:, None]
        elif axis == 1:
            out[..., :, :-1] = c[..., :, 1:] * k[None, :]
        else:
            raise ValueError("axis must be 0 or 1")
        return PolyField(out)

    def antidiff(self, axis: int) -> "PolyField":
        """Antiderivative in one variable, vanishing on the other axis."""
        c = self.coeffs
        out = np.zeros_like(c)
        k = np.arange(1, SIZE, dtype=float)
        if axis == 0:
            if np.any(c[..., -1, :]):
                raise ValueError(f"antiderivative degree exceeds the cap {MAX_DEGREE}")
            out[..., 1:, :] = c[..., :-1, :] / k[:, None]
        else:
            if np.any(c[..., :, -1]):
                raise ValueError(f"antiderivative degree exceeds the cap {MAX_DEGREE}")
            out[..., :, 1:] = c[..., :, :-1] / k[None, :]
        return PolyField(out)

    def gradient(self) -> "PolyField":
        """Appends a derivative axis: ``grad(f)[..., j] = f_{,j}``."""
        axis = len(self.value_shape)
        return PolyField(np.stack([self.diff(0).coeffs, self.diff(1).coeffs], axis=axis))

    def div(self) -> "PolyField":
        """Contracts the last value axis with the gradient: ``sum_j f_{..j,j}``."""
        if not self.value_shape or self.value_shape[-1] != 2:
            raise ValueError("divergence needs a trailing value axis of length 2")
        return self[..., 0].diff(0) + self[..., 1].diff(1)

    def restrict_x1_zero(self) -> "PolyField":
        """The field evaluated on ``x1 = 0`` (a polynomial in ``x2``)."""
        c = np.zeros_like(self.coeffs)
        c[..., 0, :] = self.coeffs[..., 0, :]
        return PolyField(c)

    # -- evaluation ------------------------------------------------------
    def __call__(self, x1, x2) -> np.ndarray:
        """Values at points; result shape is ``shape(x1) + value_shape``."""
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        pts_shape = np.broadcast(x1, x2).shape
        p1 = np.broadcast_to(x1, pts_shape).reshape(-1, 1) ** np.arange(SIZE)
        p2 = np.broadcast_to(x2, pts_shape).reshape(-1, 1) ** np.arange(SIZE)
        vals = np.einsum("...ij,pi,pj->p...", self.coeffs, p1, p2)
        return vals.reshape(pts_shape + self.value_shape)

    def at(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        return self(points[..., 0], points[..., 1])

    # -- serialization ---------------------------------------------------
    def to_dict(self) -> dict:
        """Sparse form ``{value_shape, terms: [[value_index..., i, j, coef], ...]}``."""
        terms = [[*map(int, idx), float(self.coeffs[idx])] for idx in zip(*np.nonzero(self.coeffs))]
        return {"value_shape": list(self.value_shape), "terms": terms}

    @classmethod
    def from_dict(cls, d: dict) -> "PolyField":
        out = np.zeros(tuple(d.get("value_shape", ())) + (SIZE, SIZE))
        for *idx, coef in d["terms"]:
            out[tuple(int(i) for i in idx)] = coef
        return cls(out)

    def __repr__(self) -> str:
        return f"PolyField(value_shape={self.value_shape}, degree={self.degree})"


X1 = PolyField.monomial(1, 0)
X2 = PolyField.monomial(0, 1)


def integrate_gradient(g: PolyField, tol: float = 1e-12) -> PolyField:
    """Scalar potential ``phi`` with ``grad(phi) = g`` and ``phi(0) = 0``.

    Raises ``ValueError`` if ``g`` is not curl-free (relative to ``tol``).
    """
    if g.value_shape[-1:] != (2,):
        raise ValueError("gradient field needs a trailing axis of length 2")
    p, q = g[..., 0], g[..., 1]
    curl = p.diff(1) - q.diff(0)
    if curl.max_abs() > tol * max(g.max_abs(), 1.0):
        raise ValueError(f"field is not a gradient: curl residual {curl.max_abs():.3e}")
    phi = p.antidiff(0)
    rest = (q - phi.diff(1)).restrict_x1_zero()
    return phi + rest.antidiff(1)
