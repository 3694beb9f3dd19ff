"""The four boundary datasets, their gauge ambiguities and file formats.

==================  ===================  =====================================
kind                fields               gauge
==================  ===================  =====================================
plate-dirichlet     u, u_n               affine: u + c.x + d, u_n + c.n
plate-neumann       M_n, M_t             additive constant in M_t
elast-dirichlet     v (2-vector)         constant translation
elast-neumann       traction (2-vector)  exact
==================  ===================  =====================================

Canonical gauges are mean-zero conventions (arclength mean), which do not
depend on the choice of base point.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .curve import ClosedCurve

RAW = "raw"
CANONICAL = "canonical"


class InadmissibleDataError(ValueError):
    """Boundary data fails a closure condition; ``residuals`` holds the numbers."""

    def __init__(self, message: str, residuals: dict):
        super().__init__(message)
        self.residuals = residuals


@dataclass
class GaugeReport:
    ambiguity: str
    normalization: str
    removed: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return _jsonable(asdict(self))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


@dataclass(frozen=True, eq=False)
class PlateDirichlet:
    curve: ClosedCurve
    u: np.ndarray
    u_n: np.ndarray
    gauge: str = RAW

    kind = "plate-dirichlet"
    ambiguity = "affine"
    columns = ("u", "u_n")

    def grad_u(self) -> np.ndarray:
        """``grad u = u_n n + u_t t`` at every node."""
        c = self.curve
        u_t = c.d_dt(self.u)
        return self.u_n[:, None] * c.n + u_t[:, None] * c.t

    def values(self) -> np.ndarray:
        return np.column_stack([self.u, self.u_n])


@dataclass(frozen=True, eq=False)
class PlateNeumann:
    curve: ClosedCurve
    M_n: np.ndarray
    M_t: np.ndarray
    gauge: str = RAW

    kind = "plate-neumann"
    ambiguity = "additive-constant"
    columns = ("M_n", "M_t")

    def values(self) -> np.ndarray:
        return np.column_stack([self.M_n, self.M_t])


@dataclass(frozen=True, eq=False)
class ElastDirichlet:
    curve: ClosedCurve
    v: np.ndarray
    gauge: str = RAW

    kind = "elast-dirichlet"
    ambiguity = "translation"
    columns = ("v1", "v2")

    def values(self) -> np.ndarray:
        return np.asarray(self.v)


@dataclass(frozen=True, eq=False)
class ElastNeumann:
    curve: ClosedCurve
    traction: np.ndarray
    gauge: str = RAW

    kind = "elast-neumann"
    ambiguity = "exact"
    columns = ("sn1", "sn2")

    def values(self) -> np.ndarray:
        return np.asarray(self.traction)


DATASET_TYPES = {cls.kind: cls for cls in (PlateDirichlet, PlateNeumann, ElastDirichlet, ElastNeumann)}


def make_dataset(kind: str, curve: ClosedCurve, values, gauge: str = RAW):
    """Build a dataset of ``kind`` from an ``(N, 2)`` value array."""
    if kind not in DATASET_TYPES:
        raise ValueError(f"unknown dataset kind {kind!r}; expected one of {sorted(DATASET_TYPES)}")
    values = curve.check(values)
    if values.shape != (curve.N, 2):
        raise ValueError(f"{kind} needs two value columns, got shape {values.shape}")
    cls = DATASET_TYPES[kind]
    if cls in (PlateDirichlet, PlateNeumann):
        return cls(curve, values[:, 0].copy(), values[:, 1].copy(), gauge)
    return cls(curve, values.copy(), gauge)


# ---------------------------------------------------------------------------
# Gauge handling
# ---------------------------------------------------------------------------

def normalize(d):
    """Return ``(canonical dataset, GaugeReport)``.

    Already-canonical datasets are returned unchanged, so normalization is
    idempotent.
    """
    c = d.curve
    if d.gauge == CANONICAL:
        return d, GaugeReport(d.ambiguity, "already canonical")
    if isinstance(d, PlateDirichlet):
        shift = c.mean(d.grad_u())
        u = d.u - c.x @ shift
        offset = c.mean(u)
        out = replace(d, u=u - offset, u_n=d.u_n - c.n @ shift, gauge=CANONICAL)
        return out, GaugeReport(d.ambiguity, "mean-zero grad u and u",
                                {"gradient_shift": shift, "constant": offset})
    if isinstance(d, PlateNeumann):
        offset = c.mean(d.M_t)
        out = replace(d, M_t=d.M_t - offset, gauge=CANONICAL)
        return out, GaugeReport(d.ambiguity, "mean-zero M_t", {"constant": offset})
    if isinstance(d, ElastDirichlet):
        shift = c.mean(d.v)
        out = replace(d, v=d.v - shift, gauge=CANONICAL)
        return out, GaugeReport(d.ambiguity, "mean-zero v", {"translation": shift})
    if isinstance(d, ElastNeumann):
        return replace(d, gauge=CANONICAL), GaugeReport(d.ambiguity, "identity")
    raise TypeError(f"not a boundary dataset: {type(d).__name__}")


def equal_mod_gauge(d1, d2, tol: float = 1e-10, relative: bool = False) -> tuple[bool, float]:
    """Compare canonical forms; returns ``(equal, max pointwise deviation)``.

    With ``relative=True`` the deviation is divided by the largest absolute
    canonical value of ``d2`` (or 1 if that is zero).
    """
    if d1.kind != d2.kind:
        raise ValueError(f"kind mismatch: {d1.kind} vs {d2.kind}")
    if d1.curve is not d2.curve and (d1.curve.N != d2.curve.N
                                     or not np.allclose(d1.curve.x, d2.curve.x, rtol=0, atol=1e-12)):
        raise ValueError("datasets live on different curves")
    a = normalize(d1)[0].values()
    b = normalize(d2)[0].values()
    dev = float(np.abs(a - b).max())
    if relative:
        scale = float(np.abs(b).max())
        dev = dev / scale if scale > 0 else dev
    return dev <= tol, dev


def admissibility(d) -> dict:
    """Closure residuals of a dataset.

    * elast-neumann: net force ``oint sn ds`` and net torque ``oint x x sn ds``
    * plate-neumann: ``oint (-M_t n + M_n t) ds`` (closure of ``v_t``)
    * plate-dirichlet: ``oint u_t ds`` and ``oint d/dt grad u ds``
    * elast-dirichlet: ``oint v_t ds``
    """
    c = d.curve
    if isinstance(d, ElastNeumann):
        sn = d.traction
        torque = c.circulate(c.x[:, 0] * sn[:, 1] - c.x[:, 1] * sn[:, 0])
        return {"net_force": c.circulate(sn), "net_torque": torque,
                "scale": c.circulate(np.hypot(sn[:, 0], sn[:, 1]))}
    if isinstance(d, PlateNeumann):
        w = -d.M_t[:, None] * c.n + d.M_n[:, None] * c.t
        return {"v_t_closure": c.circulate(w), "scale": c.circulate(np.hypot(w[:, 0], w[:, 1]))}
    if isinstance(d, PlateDirichlet):
        g = d.grad_u()
        return {"u_t_closure": c.circulate(c.d_dt(d.u)), "grad_closure": c.circulate(c.d_dt(g))}
    if isinstance(d, ElastDirichlet):
        return {"v_t_closure": c.circulate(c.d_dt(d.v))}
    raise TypeError(f"not a boundary dataset: {type(d).__name__}")


# ---------------------------------------------------------------------------
# Files
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def write_dataset(d, path, curve_ref: str | None = None) -> Path:
    """Write CSV (``node_index, s, x1, x2, <values>``) plus a JSON envelope.

    Floats are written with ``repr``, which round-trips doubles exactly.
    """
    path = Path(path)
    c = d.curve
    s = c.arclength
    vals = d.values()
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["node_index", "s", "x1", "x2", *d.columns])
        for k in range(c.N):
            w.writerow([k, _fmt(s[k]), _fmt(c.x[k, 0]), _fmt(c.x[k, 1]), *map(_fmt, vals[k])])
    envelope = {"kind": d.kind, "curve_ref": curve_ref, "gauge": d.gauge,
                "ambiguity": d.ambiguity, "columns": ["node_index", "s", "x1", "x2", *d.columns]}
    envelope_path(path).write_text(json.dumps(envelope, indent=2, sort_keys=True) + "\n")
    return path


def envelope_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".json")


def read_dataset(path, curve: ClosedCurve, kind: str | None = None):
    """Read a dataset CSV; the kind comes from the envelope or the value columns."""
    path = Path(path)
    env = envelope_path(path)
    gauge = RAW
    if env.exists():
        meta = json.loads(env.read_text())
        kind = kind or meta.get("kind")
        gauge = meta.get("gauge", RAW)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty dataset file")
    header, body = rows[0], rows[1:]
    if header[:4] != ["node_index", "s", "x1", "x2"] or len(header) != 6:
        raise ValueError(f"{path}: unexpected header {header}")
    by_columns = {tuple(cls.columns): k for k, cls in DATASET_TYPES.items()}
    col_kind = by_columns.get(tuple(header[4:]))
    if col_kind is None:
        raise ValueError(f"{path}: unknown value columns {header[4:]}")
    if kind is not None and kind != col_kind:
        raise ValueError(f"{path}: columns describe {col_kind}, expected {kind}")
    try:
        arr = np.array([[float(v) for v in r] for r in body])
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None
    if arr.shape != (curve.N, 6):
        raise ValueError(f"{path}: expected {curve.N} rows of 6 values, got {arr.shape}")
    if not np.array_equal(arr[:, 0], np.arange(curve.N)):
        raise ValueError(f"{path}: node_index column must be 0..N-1")
    if not np.allclose(arr[:, 2:4], curve.x, rtol=0, atol=1e-9):
        raise ValueError(f"{path}: node positions do not match the curve")
    return make_dataset(col_kind, curve, arr[:, 4:], gauge)
