"""Parametric hypersurface charts, frames, normals and shape operators.

A chart maps an n-dimensional parameter box (axes flagged periodic or open)
into the coordinates of an ambient model.  ``frame_at`` assembles the
first-order data (tangent frame, induced metric, oriented unit normal, area
density); ``shape_operator_at`` adds the Weingarten matrix of A = grad of
the unit normal, in the chart frame.

Derivatives of the chart come from one of three interchangeable backends:
closed-form ``jacobian``/``hessian`` callables, forward-mode hyperdual
differentiation of the map program, or central finite differences.
"""

from __future__ import annotations

import math
import threading
import weakref
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import autodiff as ad
from .spaceform import AmbientModel, GeometryError, ModelKind, inner_raw, norm_raw

FRAME_MEMBERSHIP_TOL = 1e-10
RANK_TOL = 1e-10
COND_LIMIT = 1e12
SYM_GUARD = 1e-6


class ImmersionError(ValueError):
    """Chart evaluation failed: rank, membership, or conditioning."""


@dataclass(frozen=True)
class Axis:
    lo: float
    hi: float
    periodic: bool = False

    @property
    def length(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True, eq=False)
class Chart:
    """Parameter box -> ambient coordinates, with a derivative oracle.

    ``backend`` selects how jac/hess are produced: "analytic" requires the
    closed-form callables, "ad" replays ``map`` on hyperdual numbers, "fd"
    uses central differences.  "auto" prefers analytic, then ad.
    """

    axes: tuple
    map: Callable
    jacobian: Optional[Callable] = None
    hessian: Optional[Callable] = None
    backend: str = "auto"
    name: str = ""

    @property
    def n(self) -> int:
        return len(self.axes)

    def _mode(self) -> str:
        if self.backend == "auto":
            return "analytic" if (self.jacobian is not None and self.hessian is not None) else "ad"
        return self.backend

    def point(self, u) -> np.ndarray:
        out = self.map(np.asarray(u, dtype=float))
        return np.array([ad.value(c) for c in out], dtype=float)

    def jac(self, u) -> np.ndarray:
        """Partial derivatives, shape (n, coord_len); row j is dF/du_j."""
        u = np.asarray(u, dtype=float)
        mode = self._mode()
        if mode == "analytic":
            if self.jacobian is None:
                raise ImmersionError("analytic backend requested without a jacobian")
            return np.asarray(self.jacobian(u), dtype=float)
        if mode == "ad":
            return ad.jacobian_ad(self.map, u).T
        if mode == "fd":
            return ad.jacobian_fd(self.map, u).T
        raise ImmersionError(f"unknown derivative backend {self.backend!r}")

    def hess(self, u) -> np.ndarray:
        """Second partials, shape (n, n, coord_len)."""
        u = np.asarray(u, dtype=float)
        mode = self._mode()
        if mode == "analytic":
            if self.hessian is None:
                raise ImmersionError("analytic backend requested without a hessian")
            return np.asarray(self.hessian(u), dtype=float)
        if mode == "ad":
            _, _, hess = ad.value_jac_hess_ad(self.map, u)
            return np.transpose(hess, (1, 2, 0))
        if mode == "fd":
            return np.transpose(ad.hessian_fd(self.map, u), (1, 2, 0))
        raise ImmersionError(f"unknown derivative backend {self.backend!r}")


@dataclass(frozen=True, eq=False)
class Hypersurface:
    """A closed oriented hypersurface given by a single chart.

    Closedness is declared by the axis flags (periodic seams or polar-type
    open ends of measure zero), not checked.  ``normal_sign`` flips the
    default orientation rule.
    """

    ambient: AmbientModel
    chart: Chart
    normal_sign: int = 1
    name: str = ""

    def __post_init__(self):
        if self.chart.n != self.ambient.dim - 1:
            raise ImmersionError("chart parameter count must equal ambient dim - 1")
        if self.normal_sign not in (-1, 1):
            raise ImmersionError("normal_sign must be +1 or -1")

    @property
    def n(self) -> int:
        return self.chart.n


@dataclass(frozen=True, eq=False)
class FirstOrderData:
    """Frame, induced metric, oriented unit normal and density at one node."""

    u: np.ndarray
    point: np.ndarray
    frame: np.ndarray   # rows T_j = dF/du_j, in ambient coordinates
    metric: np.ndarray  # g_jk = <T_j, T_k>
    normal: np.ndarray
    density: float      # sqrt(det g)


@dataclass(frozen=True, eq=False)
class ShapeData:
    first: FirstOrderData
    weingarten: np.ndarray  # W with A T_j = sum_k W[k, j] T_k
    sym_defect: float       # max |b - b^T| before symmetrization


# -- small exact-shape determinants and the generalized cross product --------

def _det(M: np.ndarray) -> float:
    k = M.shape[0]
    if k == 1:
        return float(M[0, 0])
    if k == 2:
        return float(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
    if k == 3:
        return float(
            M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
            - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
            + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0]))
    return float(np.linalg.det(M))


def generalized_cross(rows: np.ndarray) -> np.ndarray:
    """Vector orthogonal to k row vectors in R^(k+1).

    Satisfies <cross, w> = det([rows; w]) for every w, hence
    det([rows; cross]) = |cross|^2 > 0 for independent rows.
    """
    k, L = rows.shape
    if L != k + 1:
        raise ImmersionError(f"cross product needs k vectors in R^(k+1), got {rows.shape}")
    out = np.empty(L)
    cols = np.arange(L)
    for i in range(L):
        minor = rows[:, cols != i]
        out[i] = (-1.0) ** (k + i) * _det(minor)
    return out


def _model_normal_column(model: AmbientModel, p: np.ndarray) -> Optional[np.ndarray]:
    """Reference last column of the orientation determinant, if any."""
    if model.kind is ModelKind.EUCLIDEAN:
        return None
    if model.kind is ModelKind.SPHERE:
        return p / model.radius
    if model.kind is ModelKind.HYPERBOLOID:
        raised = np.array(p)
        raised[0] = -raised[0]
        return raised / model.radius
    col = np.zeros_like(p)
    col[1:] = p[1:]
    return col


def _raw_normal(model: AmbientModel, p: np.ndarray, frame: np.ndarray) -> np.ndarray:
    """Unit vector orthogonal to the frame inside the ambient tangent space.

    Oriented by det(T_1..T_n, nu [, N_model]) > 0 before normal_sign.
    """
    n, L = frame.shape
    if model.kind is ModelKind.EUCLIDEAN:
        if L != n + 1:
            raise ImmersionError("normal construction failure: dimension mismatch")
        c = generalized_cross(frame)
    elif model.kind in (ModelKind.SPHERE, ModelKind.HYPERBOLOID):
        if L != n + 2:
            raise ImmersionError("normal construction failure: dimension mismatch")
        c = generalized_cross(np.vstack([frame, p]))
        if model.kind is ModelKind.HYPERBOLOID:
            c = np.array(c)
            c[0] = -c[0]  # Lorentz raise makes c orthogonal in the Lorentz sense
    else:
        if L != n + 2:
            raise ImmersionError("normal construction failure: dimension mismatch")
        yrow = np.zeros(L)
        yrow[1:] = p[1:]
        c = generalized_cross(np.vstack([frame, yrow]))
        psi2 = model.warp.value(p[0]) ** 2
        c = np.array(c)
        c[1:] /= psi2  # inverse metric raise for the warped block
    cn = norm_raw(model, p, c)
    if cn < 1e-14:
        raise ImmersionError("normal construction failure: degenerate frame")
    nu = c / cn
    columns = [frame[j] for j in range(n)] + [nu]
    ref = _model_normal_column(model, p)
    if ref is not None:
        columns.append(ref)
    d = _det(np.column_stack(columns))
    if d == 0.0:
        raise ImmersionError("orientation determinant vanished")
    return nu if d > 0.0 else -nu


# -- per-surface memo of node data -------------------------------------------

_FRAME_CACHE: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()
_SHAPE_CACHE: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()
_CACHE_LOCK = threading.Lock()


def _cache_for(table, surface):
    with _CACHE_LOCK:
        per = table.get(surface)
        if per is None:
            per = {}
            table[surface] = per
        return per


def frame_at(surface: Hypersurface, u) -> FirstOrderData:
    """First-order data of the immersion at parameter point u."""
    u = np.asarray(u, dtype=float)
    cache = _cache_for(_FRAME_CACHE, surface)
    key = u.tobytes()
    hit = cache.get(key)
    if hit is not None:
        return hit

    model = surface.ambient
    chart = surface.chart
    p = chart.point(u)
    defect = model.membership_defect(p)
    if defect > FRAME_MEMBERSHIP_TOL:
        raise ImmersionError(f"chart image leaves the model (defect {defect:.3e}) at u={u}")
    frame = chart.jac(u)
    n = chart.n
    g = np.empty((n, n))
    for j in range(n):
        for k in range(j, n):
            g[j, k] = g[k, j] = inner_raw(model, p, frame[j], frame[k])
    eigs = np.linalg.eigvalsh(g)
    if eigs[0] <= RANK_TOL:
        raise ImmersionError(f"rank-deficient frame at u={u} (min gram eigenvalue {eigs[0]:.3e})")
    density = math.sqrt(float(np.prod(eigs)))
    nu = surface.normal_sign * _raw_normal(model, p, frame)
    data = FirstOrderData(u=u, point=p, frame=frame, metric=g, normal=nu, density=density)
    cache[key] = data
    return data


def _second_fundamental_flat(model: AmbientModel, fod: FirstOrderData,
                             hess: np.ndarray) -> np.ndarray:
    """b_jk = <nabla_{T_j} nu, T_k> = -<nu, d2F/du_j du_k> in flat realizations."""
    n = fod.frame.shape[0]
    nu = fod.normal
    if model.kind is ModelKind.HYPERBOLOID:
        nu = np.array(nu)
        nu[0] = -nu[0]
    b = np.empty((n, n))
    for j in range(n):
        for k in range(j, n):
            b[j, k] = b[k, j] = -float(nu @ hess[j, k])
    return b


def _second_fundamental_warped(surface: Hypersurface, fod: FirstOrderData) -> np.ndarray:
    """b via differentiating nu(u) along the chart, warped connection applied."""
    model = surface.ambient
    n = surface.n
    p = fod.point
    r, y = p[0], p[1:]
    psi = model.warp.value(r)
    f = model.warp.slope(r) / psi
    b = np.empty((n, n))
    for j in range(n):
        h = ad.FD_STEP1 * (1.0 + abs(float(fod.u[j])))
        up = np.array(fod.u); up[j] += h
        um = np.array(fod.u); um[j] -= h
        dnu = (frame_at(surface, up).normal - frame_at(surface, um).normal) / (2.0 * h)
        t = fod.frame[j]
        nu = fod.normal
        a_r = dnu[0] - f * psi * psi * float(nu[1:] @ t[1:])
        a_t = dnu[1:] - float(dnu[1:] @ y) * y + f * (nu[0] * t[1:] + t[0] * nu[1:])
        nab = np.concatenate(([a_r], a_t))
        for k in range(n):
            b[j, k] = inner_raw(model, p, nab, fod.frame[k])
    return b


def shape_operator_at(surface: Hypersurface, u) -> ShapeData:
    """Weingarten matrix of A = grad(nu) in the chart frame at u."""
    u = np.asarray(u, dtype=float)
    cache = _cache_for(_SHAPE_CACHE, surface)
    key = u.tobytes()
    hit = cache.get(key)
    if hit is not None:
        return hit

    fod = frame_at(surface, u)
    model = surface.ambient
    if model.kind is ModelKind.WARPED:
        b = _second_fundamental_warped(surface, fod)
    else:
        b = _second_fundamental_flat(model, fod, surface.chart.hess(u))
    scale = 1.0 + float(np.max(np.abs(b)))
    sym_defect = float(np.max(np.abs(b - b.T)))
    if sym_defect > SYM_GUARD * scale:
        raise ImmersionError(f"second fundamental form grossly asymmetric "
                             f"({sym_defect:.3e}) at u={u}")
    b = 0.5 * (b + b.T)
    g = fod.metric
    eigs = np.linalg.eigvalsh(g)
    if eigs[-1] / eigs[0] > COND_LIMIT:
        raise ImmersionError(f"metric ill-conditioned at u={u}")
    W = np.linalg.solve(g, b)
    data = ShapeData(first=fod, weingarten=W, sym_defect=sym_defect)
    cache[key] = data
    return data


def principal_curvatures(surface: Hypersurface, u) -> np.ndarray:
    """Sorted eigenvalues of the Weingarten matrix at u."""
    W = shape_operator_at(surface, u).weingarten
    lam = np.linalg.eigvals(W)
    if float(np.max(np.abs(lam.imag))) > 1e-8 * (1.0 + float(np.max(np.abs(lam)))):
        raise ImmersionError("complex principal curvatures: frame representation broke down")
    return np.sort(lam.real)
