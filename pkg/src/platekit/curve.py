"""Discrete calculus on a smooth, closed, counterclockwise boundary curve.

Nodes sit at equispaced parameter values ``theta_k = 2 pi k / N``. Fields on
the boundary are plain arrays of shape ``(N,)`` (scalar) or ``(N, 2)``
(vector). Differentiation and antidifferentiation are spectral in ``theta``
(trigonometric interpolation), quadrature is the periodic trapezoidal rule.
"""

from __future__ import annotations

import numpy as np

MIN_NODES = 16


def _wavenumbers(N: int) -> np.ndarray:
    k = np.fft.fftfreq(N, d=1.0 / N)
    if N % 2 == 0:
        k[N // 2] = 0.0
    return k


def _shape_for(k: np.ndarray, f: np.ndarray) -> np.ndarray:
    return k.reshape((-1,) + (1,) * (f.ndim - 1))


def spectral_derivative(f: np.ndarray) -> np.ndarray:
    """d/dtheta of periodic samples along axis 0 (Nyquist mode dropped)."""
    f = np.asarray(f, dtype=float)
    k = _shape_for(_wavenumbers(f.shape[0]), f)
    return np.real(np.fft.ifft(1j * k * np.fft.fft(f, axis=0), axis=0))


def spectral_antiderivative(f: np.ndarray) -> np.ndarray:
    """Periodic antiderivative in theta of the zero-mean part of ``f``."""
    f = np.asarray(f, dtype=float)
    k = _shape_for(_wavenumbers(f.shape[0]), f)
    F = np.fft.fft(f, axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        G = np.where(k != 0, F / (1j * k), 0.0)
    return np.real(np.fft.ifft(G, axis=0))


def central_derivative(f: np.ndarray) -> np.ndarray:
    """Second-order periodic central difference in theta."""
    f = np.asarray(f, dtype=float)
    h = 2 * np.pi / f.shape[0]
    return (np.roll(f, -1, axis=0) - np.roll(f, 1, axis=0)) / (2 * h)


class ClosedCurve:
    """Sampled closed curve with unit tangent ``t`` and outward normal ``n``.

    ``t = (-n2, n1)``, i.e. ``t = -R_perp n``. Clockwise input is rejected.
    """

    def __init__(self, x, dx, base_index: int = 0, descriptor: dict | None = None):
        x = np.asarray(x, dtype=float)
        dx = np.asarray(dx, dtype=float)
        N = x.shape[0]
        if x.shape != (N, 2) or dx.shape != (N, 2):
            raise ValueError("positions and derivatives must have shape (N, 2)")
        if N < MIN_NODES or N % 2:
            raise ValueError(f"need an even number of nodes >= {MIN_NODES}, got {N}")
        if not 0 <= base_index < N:
            raise ValueError(f"base index {base_index} out of range for N={N}")
        speed = np.hypot(dx[:, 0], dx[:, 1])
        if np.any(speed <= 0) or not np.all(np.isfinite(speed)):
            raise ValueError("degenerate geometry: vanishing parametric speed")
        self.N = N
        self.theta = 2 * np.pi * np.arange(N) / N
        self.x = x
        self.dx = dx
        self.speed = speed
        self.base_index = int(base_index)
        self.descriptor = dict(descriptor) if descriptor else {"type": "custom"}
        self.t = dx / speed[:, None]
        self.n = np.column_stack([self.t[:, 1], -self.t[:, 0]])
        self.ds = speed * (2 * np.pi / N)
        self.length = float(self.ds.sum())
        self.area = float(0.5 * np.sum(x[:, 0] * dx[:, 1] - x[:, 1] * dx[:, 0]) * 2 * np.pi / N)
        if self.area <= 0:
            raise ValueError("curve must be positively (counterclockwise) oriented")
        for a in (self.x, self.dx, self.speed, self.t, self.n, self.ds):
            a.setflags(write=False)

    # -- constructors ----------------------------------------------------
    @classmethod
    def circle(cls, radius: float = 1.0, N: int = 256, base_index: int = 0,
               center=(0.0, 0.0)) -> "ClosedCurve":
        return cls.ellipse(radius, radius, N, base_index, center, _kind="circle")

    @classmethod
    def ellipse(cls, a: float, b: float, N: int = 256, base_index: int = 0,
                center=(0.0, 0.0), _kind: str = "ellipse") -> "ClosedCurve":
        if not (a > 0 and b > 0):
            raise ValueError("radii must be positive")
        th = 2 * np.pi * np.arange(N) / N
        c = np.asarray(center, dtype=float)
        x = np.column_stack([c[0] + a * np.cos(th), c[1] + b * np.sin(th)])
        dx = np.column_stack([-a * np.sin(th), b * np.cos(th)])
        params = {"radius": a} if _kind == "circle" else {"a": a, "b": b}
        if np.any(c != 0):
            params["center"] = c.tolist()
        return cls(x, dx, base_index, {"type": _kind, "params": params})

    @classmethod
    def smooth(cls, r0: float, cos=(), sin=(), N: int = 256, base_index: int = 0) -> "ClosedCurve":
        """Star-shaped curve ``r(theta) = r0 + sum_k a_k cos(k theta) + b_k sin(k theta)``."""
        th = 2 * np.pi * np.arange(N) / N
        r = np.full(N, float(r0))
        dr = np.zeros(N)
        for k, a in enumerate(cos, start=1):
            r += a * np.cos(k * th)
            dr -= k * a * np.sin(k * th)
        for k, b in enumerate(sin, start=1):
            r += b * np.sin(k * th)
            dr += k * b * np.cos(k * th)
        if np.any(r <= 0):
            raise ValueError("degenerate geometry: radius function must stay positive")
        x = np.column_stack([r * np.cos(th), r * np.sin(th)])
        dx = np.column_stack([dr * np.cos(th) - r * np.sin(th), dr * np.sin(th) + r * np.cos(th)])
        params = {"r0": float(r0), "cos": [float(v) for v in cos], "sin": [float(v) for v in sin]}
        return cls(x, dx, base_index, {"type": "custom", "params": params})

    @classmethod
    def from_points(cls, points, base_index: int = 0) -> "ClosedCurve":
        """Curve through equispaced-in-parameter samples; derivatives are spectral."""
        x = np.asarray(points, dtype=float)
        return cls(x, spectral_derivative(x), base_index,
                   {"type": "custom", "params": {"points": x.tolist()}})

    @classmethod
    def from_descriptor(cls, d: dict) -> "ClosedCurve":
        """Build from ``{type: circle|ellipse|custom, params, N, base_index}``."""
        kind = d.get("type")
        params = d.get("params", {})
        N = int(d.get("N", 256))
        base = int(d.get("base_index", 0))
        center = params.get("center", (0.0, 0.0))
        if kind == "circle":
            return cls.circle(float(params.get("radius", 1.0)), N, base, center)
        if kind == "ellipse":
            return cls.ellipse(float(params["a"]), float(params["b"]), N, base, center)
        if kind == "custom":
            if "points" in params:
                return cls.from_points(params["points"], base)
            return cls.smooth(params["r0"], params.get("cos", ()), params.get("sin", ()), N, base)
        raise ValueError(f"unknown curve type {kind!r}")

    def to_descriptor(self) -> dict:
        d = dict(self.descriptor)
        d.setdefault("params", {})
        d["N"] = self.N
        d["base_index"] = self.base_index
        return d

    def with_base(self, base_index: int) -> "ClosedCurve":
        return ClosedCurve(self.x, self.dx, base_index, self.descriptor)

    # -- geometry --------------------------------------------------------
    @property
    def arclength(self) -> np.ndarray:
        """Arclength from node 0 at every node."""
        mean_speed = self.speed.mean()
        fluct = spectral_antiderivative(self.speed - mean_speed)
        return mean_speed * self.theta + fluct - fluct[0]

    def signed_area(self) -> float:
        return self.area

    # -- calculus --------------------------------------------------------
    def check(self, f) -> np.ndarray:
        f = np.asarray(f, dtype=float)
        if f.shape[0] != self.N:
            raise ValueError(f"field has {f.shape[0]} samples, curve has {self.N} nodes")
        return f

    def _per_node(self, w: np.ndarray, f: np.ndarray) -> np.ndarray:
        return w.reshape((-1,) + (1,) * (f.ndim - 1))

    def d_dt(self, f, method: str = "spectral") -> np.ndarray:
        """Arclength derivative ``f_{,t}`` (componentwise for vector fields)."""
        f = self.check(f)
        if method == "spectral":
            df = spectral_derivative(f)
        elif method == "central":
            df = central_derivative(f)
        else:
            raise ValueError(f"unknown differentiation method {method!r}")
        return df / self._per_node(self.speed, f)

    def circulate(self, f) -> np.ndarray | float:
        """``oint f ds``."""
        f = self.check(f)
        out = np.tensordot(self.ds, f, axes=(0, 0))
        return float(out) if np.ndim(out) == 0 else out

    def mean(self, f) -> np.ndarray | float:
        """Arclength-weighted mean of ``f``."""
        return self.circulate(f) / self.length

    def integrate_from(self, f, base_index: int | None = None,
                       method: str = "spectral") -> tuple[np.ndarray, np.ndarray | float]:
        """Antiderivative ``F`` of ``f`` in arclength with ``F(base) = 0``.

        Returns ``(F, residual)`` where ``residual = oint f ds``. A nonzero
        residual means ``f`` is not the derivative of a periodic field; in that
        case ``F`` is the antiderivative of ``f - residual / length``.
        """
        f = self.check(f)
        k0 = self.base_index if base_index is None else int(base_index)
        residual = self.circulate(f)
        g = (f - np.asarray(residual) / self.length) * self._per_node(self.speed, f)
        if method == "spectral":
            F = spectral_antiderivative(g)
        elif method == "trapezoid":
            h = 2 * np.pi / self.N
            F = np.concatenate([np.zeros((1,) + g.shape[1:]),
                                np.cumsum(0.5 * h * (g[1:] + g[:-1]), axis=0)])
        else:
            raise ValueError(f"unknown integration method {method!r}")
        return F - F[k0], residual
