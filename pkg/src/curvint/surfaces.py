"""Built-in closed test surfaces.

Every builder returns a :class:`Hypersurface` whose chart carries both a
closed-form jacobian/hessian (the default backend) and a map program that
replays on hyperdual numbers, so the analytic, forward-mode and
finite-difference derivative backends are interchangeable on the same
surface.
"""

from __future__ import annotations

import math

import numpy as np

from . import autodiff as ad
from .immersion import Axis, Chart, Hypersurface
from .spaceform import AmbientModel, GeometryError, ModelKind

TWO_PI = 2.0 * math.pi


def _axis_theta() -> Axis:
    return Axis(0.0, math.pi, periodic=False)


def _axis_phi() -> Axis:
    return Axis(0.0, TWO_PI, periodic=True)


# -- ellipsoid family in R^3 --------------------------------------------------

def ellipsoid(a: float, b: float, c: float, center=(0.0, 0.0, 0.0),
              normal_sign: int = 1, backend: str = "auto") -> Hypersurface:
    """Ellipsoid with semi-axes (a, b, c), spherical chart (theta, phi)."""
    a, b, c = float(a), float(b), float(c)
    cx = np.asarray(center, dtype=float)

    def fmap(u):
        th, ph = u[0], u[1]
        st, ct = ad.sin(th), ad.cos(th)
        sp, cp = ad.sin(ph), ad.cos(ph)
        return [a * st * cp + cx[0], b * st * sp + cx[1], c * ct + cx[2]]

    def jac(u):
        th, ph = u
        st, ct = math.sin(th), math.cos(th)
        sp, cp = math.sin(ph), math.cos(ph)
        return np.array([[a * ct * cp, b * ct * sp, -c * st],
                         [-a * st * sp, b * st * cp, 0.0]])

    def hess(u):
        th, ph = u
        st, ct = math.sin(th), math.cos(th)
        sp, cp = math.sin(ph), math.cos(ph)
        h = np.empty((2, 2, 3))
        h[0, 0] = [-a * st * cp, -b * st * sp, -c * ct]
        h[0, 1] = h[1, 0] = [-a * ct * sp, b * ct * cp, 0.0]
        h[1, 1] = [-a * st * cp, -b * st * sp, 0.0]
        return h

    chart = Chart(axes=(_axis_theta(), _axis_phi()), map=fmap,
                  jacobian=jac, hessian=hess, backend=backend,
                  name=f"ellipsoid({a},{b},{c})")
    return Hypersurface(AmbientModel.euclidean(3), chart,
                        normal_sign=normal_sign, name=chart.name)


def sphere(radius: float = 1.0, center=(0.0, 0.0, 0.0), normal_sign: int = 1,
           backend: str = "auto") -> Hypersurface:
    """Round sphere in R^3; the default orientation rule yields the outward normal."""
    s = ellipsoid(radius, radius, radius, center=center,
                  normal_sign=normal_sign, backend=backend)
    return Hypersurface(s.ambient, s.chart, normal_sign=normal_sign,
                        name=f"sphere({radius})")


def torus(R: float = 2.0, r: float = 1.0, normal_sign: int = 1,
          backend: str = "auto") -> Hypersurface:
    """Torus of revolution about the z-axis, chart (u, v) both periodic."""
    R, r = float(R), float(r)

    def fmap(u):
        uu, vv = u[0], u[1]
        cu, su = ad.cos(uu), ad.sin(uu)
        cv, sv = ad.cos(vv), ad.sin(vv)
        w = R + r * cv
        return [w * cu, w * su, r * sv]

    def jac(u):
        uu, vv = u
        cu, su = math.cos(uu), math.sin(uu)
        cv, sv = math.cos(vv), math.sin(vv)
        w = R + r * cv
        return np.array([[-w * su, w * cu, 0.0],
                         [-r * sv * cu, -r * sv * su, r * cv]])

    def hess(u):
        uu, vv = u
        cu, su = math.cos(uu), math.sin(uu)
        cv, sv = math.cos(vv), math.sin(vv)
        w = R + r * cv
        h = np.empty((2, 2, 3))
        h[0, 0] = [-w * cu, -w * su, 0.0]
        h[0, 1] = h[1, 0] = [r * sv * su, -r * sv * cu, 0.0]
        h[1, 1] = [-r * cv * cu, -r * cv * su, -r * sv]
        return h

    chart = Chart(axes=(_axis_phi(), _axis_phi()), map=fmap,
                  jacobian=jac, hessian=hess, backend=backend,
                  name=f"torus({R},{r})")
    return Hypersurface(AmbientModel.euclidean(3), chart,
                        normal_sign=normal_sign, name=chart.name)


# -- latitude spheres inside the 3-sphere -------------------------------------

def latitude_sphere_s3(t: float, R0: float = 1.0, normal_sign: int = 1,
                       backend: str = "auto") -> Hypersurface:
    """The 2-sphere |x| = sqrt(R0^2 - t^2) at height t along the S^3 axis.

    Parameter order is (phi, theta) so that the default orientation rule
    selects the normal (1/(R0 Rt)) (-t x, Rt^2) used in the umbilic
    closed forms.
    """
    t, R0 = float(t), float(R0)
    if not -R0 < t < R0:
        raise GeometryError("latitude parameter must satisfy |t| < R0")
    rt = math.sqrt(R0 * R0 - t * t)

    def fmap(u):
        ph, th = u[0], u[1]
        st, ct = ad.sin(th), ad.cos(th)
        sp, cp = ad.sin(ph), ad.cos(ph)
        return [rt * st * cp, rt * st * sp, rt * ct, t]

    def jac(u):
        ph, th = u
        st, ct = math.sin(th), math.cos(th)
        sp, cp = math.sin(ph), math.cos(ph)
        return np.array([[-rt * st * sp, rt * st * cp, 0.0, 0.0],
                         [rt * ct * cp, rt * ct * sp, -rt * st, 0.0]])

    def hess(u):
        ph, th = u
        st, ct = math.sin(th), math.cos(th)
        sp, cp = math.sin(ph), math.cos(ph)
        h = np.empty((2, 2, 4))
        h[0, 0] = [-rt * st * cp, -rt * st * sp, 0.0, 0.0]
        h[0, 1] = h[1, 0] = [-rt * ct * sp, rt * ct * cp, 0.0, 0.0]
        h[1, 1] = [-rt * st * cp, -rt * st * sp, -rt * ct, 0.0]
        return h

    chart = Chart(axes=(_axis_phi(), _axis_theta()), map=fmap,
                  jacobian=jac, hessian=hess, backend=backend,
                  name=f"latitude_sphere_s3(t={t})")
    return Hypersurface(AmbientModel.sphere(3, R0), chart,
                        normal_sign=normal_sign, name=chart.name)


# -- geodesic spheres ----------------------------------------------------------

def geodesic_sphere(ambient: AmbientModel, rho: float, normal_sign: int = 1,
                    backend: str = "auto") -> Hypersurface:
    """Geodesic sphere of radius rho about the model pole, ambient dim 3."""
    if ambient.dim != 3:
        raise GeometryError("geodesic spheres are built for ambient dimension 3")
    rho = float(rho)

    if ambient.kind is ModelKind.EUCLIDEAN:
        return sphere(radius=rho, normal_sign=normal_sign, backend=backend)

    if ambient.kind is ModelKind.SPHERE:
        R0 = ambient.radius
        if not 0.0 < rho < math.pi * R0:
            raise GeometryError("geodesic radius must lie in (0, pi*R0)")
        return latitude_sphere_s3(t=R0 * math.cos(rho / R0), R0=R0,
                                  normal_sign=normal_sign, backend=backend)

    if ambient.kind is ModelKind.HYPERBOLOID:
        R0 = ambient.radius
        ch, sh = math.cosh(rho / R0), math.sinh(rho / R0)

        def fmap(u):
            th, ph = u[0], u[1]
            st, ct = ad.sin(th), ad.cos(th)
            sp, cp = ad.sin(ph), ad.cos(ph)
            return [R0 * ch, R0 * sh * st * cp, R0 * sh * st * sp, R0 * sh * ct]

        def jac(u):
            th, ph = u
            st, ct = math.sin(th), math.cos(th)
            sp, cp = math.sin(ph), math.cos(ph)
            s = R0 * sh
            return np.array([[0.0, s * ct * cp, s * ct * sp, -s * st],
                             [0.0, -s * st * sp, s * st * cp, 0.0]])

        def hess(u):
            th, ph = u
            st, ct = math.sin(th), math.cos(th)
            sp, cp = math.sin(ph), math.cos(ph)
            s = R0 * sh
            h = np.empty((2, 2, 4))
            h[0, 0] = [0.0, -s * st * cp, -s * st * sp, -s * ct]
            h[0, 1] = h[1, 0] = [0.0, -s * ct * sp, s * ct * cp, 0.0]
            h[1, 1] = [0.0, -s * st * cp, -s * st * sp, 0.0]
            return h

        chart = Chart(axes=(_axis_theta(), _axis_phi()), map=fmap,
                      jacobian=jac, hessian=hess, backend=backend,
                      name=f"geodesic_sphere_h3(rho={rho})")
        return Hypersurface(ambient, chart, normal_sign=normal_sign, name=chart.name)

    # warped product: the latitude sphere r = rho over the round base
    lo, hi = ambient.interval
    if not lo < rho < hi:
        raise GeometryError("geodesic radius outside the warp interval")

    def fmap_w(u):
        th, ph = u[0], u[1]
        st, ct = ad.sin(th), ad.cos(th)
        sp, cp = ad.sin(ph), ad.cos(ph)
        return [rho, st * cp, st * sp, ct]

    def jac_w(u):
        th, ph = u
        st, ct = math.sin(th), math.cos(th)
        sp, cp = math.sin(ph), math.cos(ph)
        return np.array([[0.0, ct * cp, ct * sp, -st],
                         [0.0, -st * sp, st * cp, 0.0]])

    def hess_w(u):
        th, ph = u
        st, ct = math.sin(th), math.cos(th)
        sp, cp = math.sin(ph), math.cos(ph)
        h = np.empty((2, 2, 4))
        h[0, 0] = [0.0, -st * cp, -st * sp, -ct]
        h[0, 1] = h[1, 0] = [0.0, -ct * sp, ct * cp, 0.0]
        h[1, 1] = [0.0, -st * cp, -st * sp, 0.0]
        return h

    chart = Chart(axes=(_axis_theta(), _axis_phi()), map=fmap_w,
                  jacobian=jac_w, hessian=hess_w, backend=backend,
                  name=f"geodesic_sphere_warped(rho={rho})")
    return Hypersurface(ambient, chart, normal_sign=normal_sign, name=chart.name)


def plane_patch(side: float = 1.0, normal_sign: int = 1) -> Hypersurface:
    """Flat open square in R^3 (not closed; for local shape-operator checks)."""

    def fmap(u):
        return [u[0], u[1], 0.0 * u[0]]

    def jac(u):
        return np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])

    def hess(u):
        return np.zeros((2, 2, 3))

    chart = Chart(axes=(Axis(-side, side), Axis(-side, side)), map=fmap,
                  jacobian=jac, hessian=hess, name="plane_patch")
    return Hypersurface(AmbientModel.euclidean(3), chart,
                        normal_sign=normal_sign, name="plane_patch")
