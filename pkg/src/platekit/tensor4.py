"""Fourth-order tensors on 2x2 symmetric matrices.

A tensor with minor and major symmetry in 2D has six independent
components. They are stored under the labels ``A``...``F``::

    compliance:  S1111 = F   S2222 = A   S1122 = B
                 S1112 = -D  S2212 = -C  S1212 = E
    elastic:     C1111 = A   C2222 = F   C1122 = B
                 C1112 = C   C2212 = D   C1212 = E

With this labelling the rotational conjugation ``C = R S R`` keeps the six
numbers and only flips the ``kind`` flag.

Symmetric 2x2 matrices are plain ``(2, 2)`` numpy arrays throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Iterable

import numpy as np

LABELS = ("A", "B", "C", "D", "E", "F")
KINDS = ("elastic", "compliance")

#: R_perp = [[0, 1], [-1, 0]]
R_PERP = np.array([[0.0, 1.0], [-1.0, 0.0]])

SYMMETRY_TOL = 1e-12
_SQRT2 = np.sqrt(2.0)


def _rotation_tensor() -> np.ndarray:
    # (R A)_ij = R_perp^T A R_perp = sum_ab R_ai A_ab R_bj
    return np.einsum("ai,bj->ijab", R_PERP, R_PERP)


ROTATION = _rotation_tensor()


@dataclass(frozen=True)
class Tensor4:
    """Six-component symmetric 4th-order tensor in 2D."""

    A: float
    B: float
    C: float
    D: float
    E: float
    F: float
    kind: str = "compliance"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")

    # -- component views -------------------------------------------------
    def labels(self) -> dict[str, float]:
        return {k: getattr(self, k) for k in LABELS}

    def principal(self) -> tuple[float, float, float, float, float, float]:
        """Return (T1111, T2222, T1122, T1112, T2212, T1212)."""
        if self.kind == "elastic":
            return self.A, self.F, self.B, self.C, self.D, self.E
        return self.F, self.A, self.B, -self.D, -self.C, self.E

    def full(self) -> np.ndarray:
        """Full ``(2, 2, 2, 2)`` array with all 16 index combinations."""
        t1111, t2222, t1122, t1112, t2212, t1212 = self.principal()
        T = np.zeros((2, 2, 2, 2))
        T[0, 0, 0, 0] = t1111
        T[1, 1, 1, 1] = t2222
        T[0, 0, 1, 1] = T[1, 1, 0, 0] = t1122
        for i, j in ((0, 1), (1, 0)):
            T[0, 0, i, j] = T[i, j, 0, 0] = t1112
            T[1, 1, i, j] = T[i, j, 1, 1] = t2212
            for k, m in ((0, 1), (1, 0)):
                T[i, j, k, m] = t1212
        return T

    def component(self, i: int, j: int, k: int, l: int) -> float:
        """Component with 1-based indices, ``T.component(1, 1, 2, 2)``."""
        return float(self.full()[i - 1, j - 1, k - 1, l - 1])

    def voigt(self) -> np.ndarray:
        """Symmetric 3x3 matrix on (a11, a22, sqrt(2) a12).

        The weighting makes ``a . M a == (T A) : A`` and ``a . a == |A|^2``.
        """
        t1111, t2222, t1122, t1112, t2212, t1212 = self.principal()
        return np.array([
            [t1111, t1122, _SQRT2 * t1112],
            [t1122, t2222, _SQRT2 * t2212],
            [_SQRT2 * t1112, _SQRT2 * t2212, 2.0 * t1212],
        ])

    # -- constructors ----------------------------------------------------
    @classmethod
    def from_full(cls, T, kind: str = "compliance", tol: float = SYMMETRY_TOL) -> "Tensor4":
        """Build from a full index array, checking minor and major symmetry."""
        T = np.asarray(T, dtype=float)
        if T.shape != (2, 2, 2, 2):
            raise ValueError(f"expected shape (2, 2, 2, 2), got {T.shape}")
        scale = max(np.abs(T).max(), 1.0)
        for perm in ((1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)):
            dev = np.abs(T - T.transpose(perm)).max()
            if dev > tol * scale:
                raise ValueError(f"tensor violates symmetry {perm}: deviation {dev:.3e}")
        t1111, t2222 = T[0, 0, 0, 0], T[1, 1, 1, 1]
        t1122, t1112, t2212, t1212 = T[0, 0, 1, 1], T[0, 0, 0, 1], T[1, 1, 0, 1], T[0, 1, 0, 1]
        if kind == "elastic":
            vals = (t1111, t1122, t1112, t2212, t1212, t2222)
        else:
            vals = (t2222, t1122, -t2212, -t1112, t1212, t1111)
        return cls(*(float(v) for v in vals), kind=kind)

    @classmethod
    def from_voigt(cls, M, kind: str = "compliance") -> "Tensor4":
        """Inverse of :meth:`voigt`."""
        M = np.asarray(M, dtype=float)
        proxy = cls(A=M[0, 0], B=M[0, 1], C=M[0, 2] / _SQRT2, D=M[1, 2] / _SQRT2,
                    E=M[2, 2] / 2.0, F=M[1, 1], kind="elastic")
        T = proxy.full()
        return cls.from_full(T, kind=kind)

    @classmethod
    def random_convex(cls, rng: np.random.Generator, kind: str = "elastic",
                      margin: float = 0.2) -> "Tensor4":
        """Random anisotropic tensor with convexity margin at least ``margin``."""
        G = rng.normal(size=(3, 3))
        M = G @ G.T + margin * np.eye(3)
        return cls.from_voigt(M, kind=kind)

    # -- serialization ---------------------------------------------------
    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        d.update(self.labels())
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Tensor4":
        if "isotropic" in d:
            iso = d["isotropic"]
            T = isotropic_plate(float(iso["B"]), float(iso["nu"]))
            if d.get("kind", "elastic") == "compliance":
                T = duality(T)
            return T
        missing = [k for k in LABELS + ("kind",) if k not in d]
        if missing:
            raise ValueError(f"tensor record missing keys: {missing}")
        return cls(*(float(d[k]) for k in LABELS), kind=d["kind"])


def apply(T: Tensor4, A) -> np.ndarray:
    """Contraction ``(T A)_ij = sum_kl T_ijkl A_kl``."""
    return np.tensordot(T.full(), np.asarray(A, dtype=float), axes=([2, 3], [0, 1]))


def rotate2(A) -> np.ndarray:
    """``R_perp^T A R_perp``: swaps the diagonal, negates the off-diagonal."""
    A = np.asarray(A)
    return R_PERP.T @ A @ R_PERP


def duality(T: Tensor4) -> Tensor4:
    """Conjugate by the rotation map, ``R T R``; toggles elastic/compliance."""
    full = np.einsum("ijab,abcd,cdkl->ijkl", ROTATION, T.full(), ROTATION)
    other = "elastic" if T.kind == "compliance" else "compliance"
    return Tensor4.from_full(full, kind=other)


def isotropic_plate(B: float, nu: float) -> Tensor4:
    """Isotropic plate tensor ``B(1-nu)/2 (d_ik d_jl + d_il d_jk) + B nu d_ij d_kl``."""
    if not B > 0:
        raise ValueError(f"bending stiffness must be positive, got {B}")
    if not -1 < nu < 1:
        raise ValueError(f"Poisson coefficient must lie in (-1, 1), got {nu}")
    return Tensor4(A=B, B=B * nu, C=0.0, D=0.0, E=0.5 * B * (1 - nu), F=B, kind="elastic")


def isotropic_compliance(kappa: float, mu_prime: float) -> Tensor4:
    """Compliance ``1/(4 mu') (d_ik d_jl + d_il d_jk) + 1/4 (1/kappa - 1/mu') d_ij d_kl``.

    Hooke's law reads ``eps = sigma / (2 mu') + (1/kappa - 1/mu') tr(sigma) I / 4``.
    """
    if not (kappa > 0 and mu_prime > 0):
        raise ValueError("kappa and mu_prime must be positive")
    diag = 0.25 * (1 / kappa + 1 / mu_prime)
    off = 0.25 * (1 / kappa - 1 / mu_prime)
    return Tensor4(A=diag, B=off, C=0.0, D=0.0, E=0.25 / mu_prime, F=diag, kind="compliance")


def convexity_margin(T: Tensor4) -> float:
    """Smallest value of ``(T A) : A`` over unit symmetric ``A``.

    Negative values mean the tensor is not strongly convex.
    """
    return float(np.linalg.eigvalsh(T.voigt())[0])


# ---------------------------------------------------------------------------
# Isotropic moduli
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsotropicModuli:
    B: float | None = None
    nu: float | None = None
    E: float | None = None
    lam: float | None = None
    mu: float | None = None
    h: float | None = None
    kappa: float | None = None
    mu_prime: float | None = None

    def known(self) -> set[str]:
        return {f.name for f in fields(self) if getattr(self, f.name) is not None}

    def check_physical(self) -> None:
        """Raise ``ValueError`` when any supplied modulus is out of range."""
        if self.nu is not None and not -1 < self.nu < 1:
            raise ValueError(f"nu must lie in (-1, 1), got {self.nu}")
        for name in ("B", "h", "E", "kappa", "mu_prime"):
            val = getattr(self, name)
            if val is not None and not val > 0:
                raise ValueError(f"{name} must be positive, got {val}")
        if self.mu is not None and not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        if self.mu is not None and self.lam is not None and not 2 * self.mu + 3 * self.lam > 0:
            raise ValueError("2 mu + 3 lambda must be positive")


def _div(num: float, den: float, what: str) -> float:
    if den == 0:
        raise ZeroDivisionError(f"degenerate moduli: {what}")
    return num / den


# each rule: (needed fields, produced field, function)
_RULES = [
    (("lam", "mu"), "E", lambda m: _div(m.mu * (2 * m.mu + 3 * m.lam), m.mu + m.lam, "mu + lambda = 0")),
    (("lam", "mu"), "nu", lambda m: _div(m.lam, 2 * (m.mu + m.lam), "mu + lambda = 0")),
    (("E", "nu"), "mu", lambda m: _div(m.E, 2 * (1 + m.nu), "nu = -1")),
    (("E", "nu"), "lam", lambda m: _div(m.E * m.nu, (1 + m.nu) * (1 - 2 * m.nu), "nu = -1 or 1/2")),
    (("E", "nu", "h"), "B", lambda m: m.h ** 3 / 12 * _div(m.E, 1 - m.nu ** 2, "nu = +-1")),
    (("B", "nu", "h"), "E", lambda m: m.B * 12 / m.h ** 3 * (1 - m.nu ** 2)),
    (("B", "E", "nu"), "h", lambda m: (12 * m.B * (1 - m.nu ** 2) / m.E) ** (1 / 3)),
    (("B", "nu"), "kappa", lambda m: _div(2.0, m.B * (1 + m.nu), "B (1 + nu) = 0")),
    (("B", "nu"), "mu_prime", lambda m: _div(2.0, m.B * (1 - m.nu), "B (1 - nu) = 0")),
    (("kappa", "mu_prime"), "B", lambda m: 1 / m.kappa + 1 / m.mu_prime),
    (("kappa", "mu_prime"), "nu", lambda m: (1 / m.kappa - 1 / m.mu_prime) / (1 / m.kappa + 1 / m.mu_prime)),
]


def moduli_convert(m: IsotropicModuli, want: Iterable[str]) -> IsotropicModuli:
    """Fill the requested fields of ``m`` by repeated substitution.

    The plate relations used are ``E = mu(2mu + 3lam)/(mu + lam)``,
    ``nu = lam / (2(mu + lam))``, ``B = h^3 E / (12 (1 - nu^2))``,
    ``kappa = 2 / (B(1 + nu))`` and ``mu' = 2 / (B(1 - nu))``.
    """
    want = set(want)
    unknown = want - {f.name for f in fields(IsotropicModuli)}
    if unknown:
        raise ValueError(f"unknown moduli requested: {sorted(unknown)}")
    cur = m
    progress = True
    while not want <= cur.known() and progress:
        progress = False
        for needs, out, fn in _RULES:
            known = cur.known()
            if out not in known and set(needs) <= known:
                cur = replace(cur, **{out: float(fn(cur))})
                progress = True
    missing = want - cur.known()
    if missing:
        raise ValueError(f"underdetermined moduli: cannot derive {sorted(missing)} from {sorted(m.known())}")
    return cur
