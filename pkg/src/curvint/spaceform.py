"""Ambient spaces of constant curvature and warped products.

Four realizations are supported:

* ``EUCLIDEAN`` -- flat R^m, identity metric;
* ``SPHERE`` -- the round sphere of radius R0 embedded in flat R^(m+1);
* ``HYPERBOLOID`` -- the upper hyperboloid sheet <x,x>_L = -R0^2 in Lorentz
  space with signature (-,+,...,+);
* ``WARPED`` -- an interval times the round unit n-sphere with metric
  dr^2 + psi(r)^2 g_{S^n}, points stored as (r, y) with |y| = 1.

All tangent calculus happens in the coordinates of the realization.  The
module provides the metric, orthogonal projections onto tangent spaces, the
covariant derivative of vector fields, geodesic distance, the warp profiles
(s_c, lambda_c), position vector fields and Killing field constructors.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from . import autodiff as ad

MEMBERSHIP_TOL = 1e-12
TANGENCY_TOL = 1e-12


class GeometryError(ValueError):
    """Invalid geometric input (wrong model, broken invariant, bad generator)."""


class AntipodalError(GeometryError):
    """Antipodal point pair on the sphere: construction is singular there."""


class AntipodalWarning(UserWarning):
    """Distance is defined but downstream gradients are not."""


class ModelKind(enum.Enum):
    EUCLIDEAN = "euclidean"
    SPHERE = "sphere"
    HYPERBOLOID = "hyperboloid"
    WARPED = "warped"


@dataclass(frozen=True, eq=False)
class Warp:
    """Warp profile psi(r) with a first-derivative oracle.

    ``fn`` may be an ordinary float program or a hyperdual-capable one; when
    no closed-form ``dfn`` is supplied the slope is obtained by forward-mode
    differentiation with a finite-difference fallback.
    """

    fn: Callable
    dfn: Optional[Callable] = None
    curvature: Optional[float] = None  # set when psi == s_c of a space form

    def value(self, r: float) -> float:
        return float(ad.value(self.fn(r)))

    def slope(self, r: float) -> float:
        if self.dfn is not None:
            return float(self.dfn(r))
        return float(ad.derivative(self.fn, r))

    @staticmethod
    def space_form(c: float) -> "Warp":
        """psi = s_c, the polar warp of the curvature-c space form."""
        return Warp(fn=lambda r: warp_functions(c, ad.value(r))[0],
                    dfn=lambda r: warp_functions(c, r)[1],
                    curvature=float(c))


def _lorentz_form(dim_plus_one: int) -> np.ndarray:
    eta = np.eye(dim_plus_one)
    eta[0, 0] = -1.0
    return eta


def _ldot(u: np.ndarray, v: np.ndarray) -> float:
    return float(-u[0] * v[0] + np.dot(u[1:], v[1:]))


@dataclass(frozen=True, eq=False)
class AmbientModel:
    """A constant-curvature or warped ambient space with a fixed realization.

    ``dim`` is the intrinsic dimension m = n + 1 of the ambient manifold.
    """

    kind: ModelKind
    dim: int
    curvature: Optional[float] = None
    radius: Optional[float] = None
    warp: Optional[Warp] = None
    interval: Optional[tuple] = None

    # -- constructors -----------------------------------------------------
    @staticmethod
    def euclidean(dim: int) -> "AmbientModel":
        return AmbientModel(ModelKind.EUCLIDEAN, dim, curvature=0.0)

    @staticmethod
    def sphere(dim: int, radius: float = 1.0) -> "AmbientModel":
        return AmbientModel(ModelKind.SPHERE, dim,
                            curvature=1.0 / radius ** 2, radius=float(radius))

    @staticmethod
    def hyperbolic(dim: int, radius: float = 1.0) -> "AmbientModel":
        return AmbientModel(ModelKind.HYPERBOLOID, dim,
                            curvature=-1.0 / radius ** 2, radius=float(radius))

    @staticmethod
    def warped(dim: int, warp: Warp, interval: tuple) -> "AmbientModel":
        lo, hi = float(interval[0]), float(interval[1])
        if not lo < hi:
            raise GeometryError("warp interval must be non-empty")
        return AmbientModel(ModelKind.WARPED, dim, curvature=warp.curvature,
                            warp=warp, interval=(lo, hi))

    # -- coordinates -------------------------------------------------------
    @property
    def coord_len(self) -> int:
        return self.dim if self.kind is ModelKind.EUCLIDEAN else self.dim + 1

    def membership_defect(self, coords: np.ndarray) -> float:
        """Relative violation of the model-membership constraint."""
        x = np.asarray(coords, dtype=float)
        if x.shape != (self.coord_len,):
            return math.inf
        if self.kind is ModelKind.EUCLIDEAN:
            return 0.0
        if self.kind is ModelKind.SPHERE:
            return abs(float(x @ x) - self.radius ** 2) / self.radius ** 2
        if self.kind is ModelKind.HYPERBOLOID:
            if x[0] <= 0.0:
                return math.inf
            return abs(_ldot(x, x) + self.radius ** 2) / self.radius ** 2
        r, y = x[0], x[1:]
        lo, hi = self.interval
        if not (lo < r < hi):
            return math.inf
        return abs(float(y @ y) - 1.0)

    def point(self, coords, tol: float = MEMBERSHIP_TOL) -> "AmbientPoint":
        x = np.asarray(coords, dtype=float)
        defect = self.membership_defect(x)
        if defect > tol:
            raise GeometryError(
                f"coordinates violate {self.kind.value} membership "
                f"(relative defect {defect:.3e} > {tol:.1e})")
        return AmbientPoint(x)

    def tangency_defect(self, p: np.ndarray, v: np.ndarray) -> float:
        scale = 1.0 + float(np.linalg.norm(v))
        if self.kind is ModelKind.EUCLIDEAN:
            return 0.0
        if self.kind is ModelKind.SPHERE:
            return abs(float(p @ v)) / (self.radius * scale)
        if self.kind is ModelKind.HYPERBOLOID:
            return abs(_ldot(p, v)) / (self.radius * scale)
        return abs(float(p[1:] @ v[1:])) / scale

    def tangent(self, p, vec, tol: float = TANGENCY_TOL) -> "TangentVector":
        base = p if isinstance(p, AmbientPoint) else self.point(p)
        v = np.asarray(vec, dtype=float)
        defect = self.tangency_defect(base.coords, v)
        if defect > tol:
            raise GeometryError(
                f"vector violates tangency on {self.kind.value} "
                f"(relative defect {defect:.3e} > {tol:.1e})")
        return TangentVector(base, v)


@dataclass(frozen=True, eq=False)
class AmbientPoint:
    coords: np.ndarray


@dataclass(frozen=True, eq=False)
class TangentVector:
    base: AmbientPoint
    vec: np.ndarray


def _coords(x) -> np.ndarray:
    if isinstance(x, AmbientPoint):
        return x.coords
    if isinstance(x, TangentVector):
        return x.vec
    return np.asarray(x, dtype=float)


# -- metric ----------------------------------------------------------------

def inner_raw(model: AmbientModel, p: np.ndarray, u: np.ndarray, v: np.ndarray) -> float:
    """Riemannian inner product of tangent coordinate vectors at p."""
    if model.kind in (ModelKind.EUCLIDEAN, ModelKind.SPHERE):
        return float(u @ v)
    if model.kind is ModelKind.HYPERBOLOID:
        return _ldot(u, v)
    psi = model.warp.value(p[0])
    return float(u[0] * v[0] + psi * psi * (u[1:] @ v[1:]))


def inner(model: AmbientModel, u: TangentVector, v: TangentVector) -> float:
    pu, pv = _coords(u.base), _coords(v.base)
    if not np.allclose(pu, pv, rtol=0.0, atol=1e-12 * (1.0 + float(np.max(np.abs(pu))))):
        raise GeometryError("inner product requires a shared base point")
    if model.membership_defect(pu) > 1e-10:
        raise GeometryError("base point violates model membership")
    return inner_raw(model, pu, u.vec, v.vec)


def norm_raw(model: AmbientModel, p: np.ndarray, u: np.ndarray) -> float:
    return math.sqrt(max(inner_raw(model, p, u, u), 0.0))


# -- tangent projection ------------------------------------------------------

def project_raw(model: AmbientModel, p: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Orthogonal projection of an ambient coordinate vector onto T_p(model).

    Euclidean models have no constraint, so the identity map is applied; on
    warped products the sphere-factor component is projected componentwise.
    """
    if model.kind is ModelKind.EUCLIDEAN:
        return np.array(w, dtype=float)
    if model.kind is ModelKind.SPHERE:
        return w - (float(w @ p) / model.radius ** 2) * p
    if model.kind is ModelKind.HYPERBOLOID:
        return w + (_ldot(w, p) / model.radius ** 2) * p
    y = p[1:]
    out = np.array(w, dtype=float)
    out[1:] -= float(out[1:] @ y) * y
    return out


def project_tangent(model: AmbientModel, p, w) -> TangentVector:
    base = p if isinstance(p, AmbientPoint) else model.point(p)
    return TangentVector(base, project_raw(model, base.coords, np.asarray(w, dtype=float)))


# -- model-respecting curves for directional differentiation ----------------

def _curve(model: AmbientModel, p: np.ndarray, y: np.ndarray) -> Callable[[float], np.ndarray]:
    """A curve c(t) on the model with c(0) = p and c'(0) = y."""
    if model.kind is ModelKind.EUCLIDEAN:
        return lambda t: p + t * y
    if model.kind is ModelKind.SPHERE:
        R = model.radius

        def c_sphere(t):
            q = p + t * y
            return (R / float(np.linalg.norm(q))) * q
        return c_sphere
    if model.kind is ModelKind.HYPERBOLOID:
        R = model.radius

        def c_hyp(t):
            q = p + t * y
            return (R / math.sqrt(-_ldot(q, q))) * q
        return c_hyp
    lo, hi = model.interval

    def c_warp(t):
        r = p[0] + t * y[0]
        if not (lo < r < hi):
            raise GeometryError("curve leaves the warp interval")
        q = p[1:] + t * y[1:]
        return np.concatenate(([r], q / float(np.linalg.norm(q))))
    return c_warp


def _flat_directional(model: AmbientModel, field, p: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Componentwise derivative of field along a model curve with velocity y."""
    directional = getattr(field, "directional", None)
    if directional is not None:
        return np.asarray(directional(p, y), dtype=float)
    speed = float(np.linalg.norm(y))
    if speed == 0.0:
        return np.zeros_like(p)
    yhat = y / speed
    c = _curve(model, p, yhat)
    h = ad.FD_STEP1 * (1.0 + float(np.linalg.norm(p)))
    vp = _coords(field(c(h)))
    vm = _coords(field(c(-h)))
    return speed * (vp - vm) / (2.0 * h)


def covariant_derivative(model: AmbientModel, field, p, Y) -> TangentVector:
    """Levi-Civita covariant derivative of ``field`` at p along Y.

    ``field`` maps coordinate vectors (or AmbientPoints) to tangent
    coordinate vectors; an optional attribute ``directional(p, y)`` supplies
    the flat derivative analytically, otherwise central differences along a
    model curve are used.
    """
    pc = _coords(p)
    yc = _coords(Y)
    dv = _flat_directional(model, field, pc, yc)
    if model.kind is ModelKind.EUCLIDEAN:
        nabla = dv
    elif model.kind in (ModelKind.SPHERE, ModelKind.HYPERBOLOID):
        nabla = project_raw(model, pc, dv)
    else:
        r, y = pc[0], pc[1:]
        psi = model.warp.value(r)
        f = model.warp.slope(r) / psi
        v = _coords(field(pc))
        vr, vt = v[0], v[1:]
        ur, ut = yc[0], yc[1:]
        a_r = dv[0] - f * psi * psi * float(vt @ ut)
        a_t = dv[1:] - float(dv[1:] @ y) * y + f * (vr * ut + ur * vt)
        nabla = np.concatenate(([a_r], a_t))
    base = p if isinstance(p, AmbientPoint) else model.point(pc, tol=1e-10)
    return TangentVector(base, nabla)


# -- distance ----------------------------------------------------------------

def geodesic_distance(model: AmbientModel, base, p) -> float:
    a = _coords(base)
    b = _coords(p)
    if model.kind is ModelKind.EUCLIDEAN:
        return float(np.linalg.norm(b - a))
    if model.kind is ModelKind.SPHERE:
        x = float(a @ b) / model.radius ** 2
        x = min(1.0, max(-1.0, x))
        if x < -1.0 + 1e-12:
            warnings.warn("antipodal point pair: distance is defined but its "
                          "gradient is not", AntipodalWarning, stacklevel=2)
        return model.radius * math.acos(x)
    if model.kind is ModelKind.HYPERBOLOID:
        x = -_ldot(a, b) / model.radius ** 2
        return model.radius * math.acosh(max(1.0, x))
    if float(np.linalg.norm(a[1:] - b[1:])) > 1e-9:
        raise GeometryError("warped geodesic distance is defined only along a "
                            "shared base-sphere ray")
    return abs(float(b[0] - a[0]))


# -- warp profiles ------------------------------------------------------------

def warp_functions(c: float, r: float) -> tuple:
    """(s_c(r), lambda_c(r)): sin/linear/sinh profile and its derivative."""
    rv = ad.value(r)
    if rv < 0.0:
        raise GeometryError("warp functions need r >= 0")
    if c > 0.0:
        rc = math.sqrt(c)
        if rv >= math.pi / rc:
            raise GeometryError("r out of range for positive curvature")
        return math.sin(rc * rv) / rc, math.cos(rc * rv)
    if c == 0.0:
        return rv, 1.0
    rc = math.sqrt(-c)
    return math.sinh(rc * rv) / rc, math.cosh(rc * rv)


# -- position fields -----------------------------------------------------------

class PositionField(NamedTuple):
    """Field P with nabla_Y P = lam(p) * Y; ``field`` returns coordinates."""

    field: Callable
    lam: Callable


class _EuclideanPosition:
    def __init__(self, base: np.ndarray):
        self.base = base

    def __call__(self, p):
        return _coords(p) - self.base

    def directional(self, p, y):
        return np.asarray(y, dtype=float)


class _EmbeddedPosition:
    """P(p) = s_c(r) * (unit tangent at p of the geodesic leaving base)."""

    def __init__(self, model: AmbientModel, base: np.ndarray):
        self.model = model
        self.base = base

    def __call__(self, p):
        model, b = self.model, self.base
        pc = _coords(p)
        if model.kind is ModelKind.SPHERE:
            cosv = float(pc @ b) / model.radius ** 2
            if cosv < -1.0 + 1e-12:
                raise AntipodalError("position field undefined at the antipode "
                                     "of the base point")
        r = geodesic_distance(model, b, pc)
        s, _ = warp_functions(model.curvature, r)
        w = project_raw(model, pc, -b)
        wn = norm_raw(model, pc, w)
        if wn < 1e-14 * model.radius:
            return np.zeros_like(pc)
        return (s / wn) * w


def position_field(model: AmbientModel, base=None) -> PositionField:
    """Position vector field P and its factor lambda (nabla_Y P = lambda Y).

    Euclidean: P(x) = x - base with lambda = 1.  Sphere/hyperboloid:
    P = s_c(r) times the outward unit geodesic direction from ``base``,
    lambda = lambda_c(r).  Warped products: P = psi(r) d/dr with
    lambda = psi'(r); the base point is implicit and ignored.
    """
    if model.kind is ModelKind.WARPED:
        def field_w(p):
            pc = _coords(p)
            out = np.zeros_like(pc)
            out[0] = model.warp.value(pc[0])
            return out

        def lam_w(p):
            return model.warp.slope(_coords(p)[0])
        return PositionField(field_w, lam_w)

    b = _coords(base)
    if model.membership_defect(b) > 1e-10:
        raise GeometryError("base point violates model membership")
    if model.kind is ModelKind.EUCLIDEAN:
        return PositionField(_EuclideanPosition(b), lambda p: 1.0)

    def lam_e(p):
        r = geodesic_distance(model, b, _coords(p))
        return warp_functions(model.curvature, r)[1]
    return PositionField(_EmbeddedPosition(model, b), lam_e)


# -- Killing fields --------------------------------------------------------------

class KillingField:
    """Linear isometry generator realized on the model coordinates."""

    def __init__(self, omega: np.ndarray, translation: Optional[np.ndarray] = None):
        self.omega = omega
        self.translation = translation

    def __call__(self, p):
        x = self.omega @ _coords(p)
        if self.translation is not None:
            x = x + self.translation
        return x

    def directional(self, p, y):
        return self.omega @ np.asarray(y, dtype=float)


def killing_field(model: AmbientModel, generator) -> KillingField:
    """Killing field from a (Lorentz-)skew generator.

    Euclidean: ``generator`` is (Omega, v0) with Omega m x m skew, giving
    X(x) = Omega x + v0.  Sphere: Omega skew (m+1) x (m+1), X(x) = Omega x.
    Hyperboloid: Omega Lorentz-skew (Omega^T eta + eta Omega = 0).
    """
    if model.kind is ModelKind.EUCLIDEAN:
        omega, v0 = generator
        omega = np.asarray(omega, dtype=float)
        v0 = np.asarray(v0, dtype=float)
        defect = float(np.max(np.abs(omega + omega.T)))
        if defect > 1e-12 * (1.0 + float(np.max(np.abs(omega)))):
            raise GeometryError(f"generator is not skew (defect {defect:.3e})")
        return KillingField(omega, v0)
    omega = np.asarray(generator, dtype=float)
    if model.kind is ModelKind.SPHERE:
        defect = float(np.max(np.abs(omega + omega.T)))
    elif model.kind is ModelKind.HYPERBOLOID:
        eta = _lorentz_form(model.coord_len)
        defect = float(np.max(np.abs(omega.T @ eta + eta @ omega)))
    else:
        raise GeometryError("no Killing constructors for warped models")
    if defect > 1e-12 * (1.0 + float(np.max(np.abs(omega)))):
        raise GeometryError(f"generator fails (Lorentz-)skewness (defect {defect:.3e})")
    return KillingField(omega)


def killing_defect(model: AmbientModel, X, samples: Sequence) -> float:
    """Numerical certificate of the Killing property.

    Max over samples (p, Y, Z) of |<nabla_Y X, Z> + <nabla_Z X, Y>| scaled by
    the tangent norms; zero (up to derivative noise) iff X is Killing.
    """
    worst = 0.0
    for p, y, z in samples:
        pc, ycv, zcv = _coords(p), _coords(y), _coords(z)
        dy = covariant_derivative(model, X, pc, ycv).vec
        dz = covariant_derivative(model, X, pc, zcv).vec
        num = abs(inner_raw(model, pc, dy, zcv) + inner_raw(model, pc, dz, ycv))
        den = norm_raw(model, pc, ycv) * norm_raw(model, pc, zcv)
        if den > 0.0:
            worst = max(worst, num / den)
    return worst
