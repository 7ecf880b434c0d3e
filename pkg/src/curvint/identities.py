"""Integral identity residuals for closed hypersurfaces of space forms.

Each functional integrates a combination whose vanishing the corresponding
theorem asserts, and reports the signed residual together with a normalizer
(the integral of the absolute parts), so callers can apply a relative
pass/fail threshold.  Tolerances are quadrature artifacts; the identities
themselves are exact.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field
from math import comb
from typing import Optional

import numpy as np

from .curvature import mean_curvatures
from .immersion import Hypersurface, shape_operator_at
from .quadrature import GridRule, integrate
from .spaceform import (AmbientModel, GeometryError, ModelKind, inner_raw,
                        killing_defect, position_field)


class IdentityError(ValueError):
    pass


@dataclass(frozen=True)
class IdentityReport:
    """Self-describing result of one identity evaluation."""

    identity: str
    i: int
    residual: float
    normalizer: float
    resolution: tuple
    elapsed: float
    j: Optional[int] = None
    detail: str = ""

    @property
    def relative(self) -> float:
        if self.normalizer == 0.0:
            return abs(self.residual)
        return abs(self.residual) / self.normalizer


def _curvatures_at(surface: Hypersurface, u) -> tuple:
    return mean_curvatures(shape_operator_at(surface, u).weingarten).H


def _h_or_zero(H: tuple, k: int) -> float:
    n = len(H) - 1
    if 0 <= k <= n:
        return float(H[k])
    return 0.0


def _require_curvature(model: AmbientModel, what: str) -> float:
    if model.curvature is None:
        raise IdentityError(f"{what} needs a constant-curvature ambient "
                            "(warped models qualify only with psi = s_c)")
    return model.curvature


def minkowski_residual(surface: Hypersurface, base, i: int,
                       grid: GridRule) -> IdentityReport:
    """Euclidean Hsiung-Minkowski residual: integral of H_i - <P,nu> H_(i+1)."""
    if surface.ambient.kind is not ModelKind.EUCLIDEAN:
        raise IdentityError("minkowski_residual requires a Euclidean ambient")
    n = surface.n
    if not 0 <= i <= n - 1:
        raise IdentityError(f"index i must be in 0..{n - 1}")
    start = time.perf_counter()
    P = position_field(surface.ambient, base).field

    def parts(u):
        sd = shape_operator_at(surface, u)
        H = mean_curvatures(sd.weingarten).H
        pn = float(P(sd.first.point) @ sd.first.normal)
        return float(H[i]), pn * float(H[i + 1])

    def signed(u):
        a, b = parts(u)
        return a - b

    def absolute(u):
        a, b = parts(u)
        return abs(a) + abs(b)

    residual = integrate(surface, grid, signed)
    normalizer = integrate(surface, grid, absolute)
    return IdentityReport("minkowski", i, residual, normalizer,
                          grid.resolution, time.perf_counter() - start)


def spaceform_residual(surface: Hypersurface, base, i: int,
                       grid: GridRule) -> IdentityReport:
    """Space-form residual: integral of lambda_c(r) H_i - <P,nu> H_(i+1).

    Valid on any constant-curvature ambient; on warped products the position
    field is psi d/dr and lambda = psi', which equals lambda_c exactly when
    psi = s_c.
    """
    model = surface.ambient
    _require_curvature(model, "spaceform_residual")
    n = surface.n
    if not 0 <= i <= n - 1:
        raise IdentityError(f"index i must be in 0..{n - 1}")
    start = time.perf_counter()
    pf = position_field(model, base)

    def parts(u):
        sd = shape_operator_at(surface, u)
        H = mean_curvatures(sd.weingarten).H
        p = sd.first.point
        lam = pf.lam(p)
        pn = inner_raw(model, p, np.asarray(pf.field(p), dtype=float), sd.first.normal)
        return lam * float(H[i]), pn * float(H[i + 1])

    def signed(u):
        a, b = parts(u)
        return a - b

    def absolute(u):
        a, b = parts(u)
        return abs(a) + abs(b)

    residual = integrate(surface, grid, signed)
    normalizer = integrate(surface, grid, absolute)
    return IdentityReport("spaceform", i, residual, normalizer,
                          grid.resolution, time.perf_counter() - start)


def flux_residual(surface: Hypersurface, v0, j: int,
                  grid: GridRule) -> IdentityReport:
    """Parallel-field residual: integral of <v0, nu> H_j over the surface."""
    if surface.ambient.kind is not ModelKind.EUCLIDEAN:
        raise IdentityError("flux_residual requires a Euclidean ambient")
    n = surface.n
    if j == 0:
        warnings.warn("flux with j = 0 is the divergence-theorem diagnostic, "
                          "outside the stated range 1..n", RuntimeWarning,
                      stacklevel=2)
    elif not 1 <= j <= n:
        raise IdentityError(f"index j must be in 1..{n}")
    start = time.perf_counter()
    v0 = np.asarray(v0, dtype=float)

    def part(u):
        sd = shape_operator_at(surface, u)
        H = mean_curvatures(sd.weingarten).H
        return float(v0 @ sd.first.normal) * float(H[j])

    residual = integrate(surface, grid, part)
    normalizer = integrate(surface, grid, lambda u: abs(part(u)))
    return IdentityReport("flux", j, residual, normalizer,
                          grid.resolution, time.perf_counter() - start, j=j)


KILLING_DEFECT_LIMIT = 1e-6
_CERT_SAMPLES = 12


def _certify_killing(surface: Hypersurface, X, grid: GridRule) -> float:
    """Killing certificate sampled from quadrature nodes; refuse above limit."""
    model = surface.ambient
    step = max(1, grid.count // _CERT_SAMPLES)
    samples = []
    for a in range(0, grid.count, step):
        sd = shape_operator_at(surface, grid.points[a])
        t1, t2 = sd.first.frame[0], sd.first.frame[-1]
        p = sd.first.point
        samples.extend([(p, t1, t1), (p, t1, t2), (p, t2, t2)])
    defect = killing_defect(model, X, samples)
    if defect > KILLING_DEFECT_LIMIT:
        raise IdentityError(
            f"field fails the Killing certificate: symmetrized-derivative "
            f"defect {defect:.3e} > {KILLING_DEFECT_LIMIT:.1e}")
    return defect


def katsurada_residual(surface: Hypersurface, X, i: int,
                       grid: GridRule) -> IdentityReport:
    """Killing-field residual of the two-term curvature combination.

    integral of <X,nu> [ (i+1) binom(n,i+1) H_(i+1)
                         - c (n-i+1) binom(n,i-1) H_(i-1) ],
    with the out-of-range terms defined as zero so i = 0 and i = n run
    uniformly.
    """
    model = surface.ambient
    c = _require_curvature(model, "katsurada_residual")
    n = surface.n
    if not 0 <= i <= n:
        raise IdentityError(f"index i must be in 0..{n}")
    start = time.perf_counter()
    defect = _certify_killing(surface, X, grid)
    up = (i + 1) * (comb(n, i + 1) if i + 1 <= n else 0)
    down = c * (n - i + 1) * (comb(n, i - 1) if i >= 1 else 0)

    def parts(u):
        sd = shape_operator_at(surface, u)
        H = mean_curvatures(sd.weingarten).H
        p = sd.first.point
        xn = inner_raw(model, p, np.asarray(X(p), dtype=float), sd.first.normal)
        return xn * up * _h_or_zero(H, i + 1), xn * down * _h_or_zero(H, i - 1)

    def signed(u):
        a, b = parts(u)
        return a - b

    def absolute(u):
        a, b = parts(u)
        return abs(a) + abs(b)

    residual = integrate(surface, grid, signed)
    normalizer = integrate(surface, grid, absolute)
    return IdentityReport("katsurada", i, residual, normalizer,
                          grid.resolution, time.perf_counter() - start,
                          detail=f"killing_defect={defect:.3e}")


def katsurada_ratio(surface: Hypersurface, X, i: int, grid: GridRule):
    """Both sides of the even-dimension ratio form of the Killing identity.

    lhs = integral of <X,nu> H_(i+1), rhs = (i c formulation/(n-i)) times the
    H_(i-1) integral; returns (lhs, rhs, report) with residual = lhs - rhs.
    """
    model = surface.ambient
    c = _require_curvature(model, "katsurada_ratio")
    n = surface.n
    if n % 2 != 0:
        raise IdentityError("the ratio form applies to even hypersurface dimension")
    if not 1 <= i <= n - 1:
        raise IdentityError(f"index i must be in 1..{n - 1}")
    start = time.perf_counter()
    defect = _certify_killing(surface, X, grid)
    factor = i * c / (n - i)

    def term(u, k):
        sd = shape_operator_at(surface, u)
        H = mean_curvatures(sd.weingarten).H
        p = sd.first.point
        xn = inner_raw(model, p, np.asarray(X(p), dtype=float), sd.first.normal)
        return xn * _h_or_zero(H, k)

    lhs = integrate(surface, grid, lambda u: term(u, i + 1))
    rhs = factor * integrate(surface, grid, lambda u: term(u, i - 1))
    normalizer = (integrate(surface, grid, lambda u: abs(term(u, i + 1)))
                  + abs(factor) * integrate(surface, grid, lambda u: abs(term(u, i - 1))))
    report = IdentityReport("katsurada_ratio", i, lhs - rhs, normalizer,
                            grid.resolution, time.perf_counter() - start,
                            detail=f"killing_defect={defect:.3e}")
    return lhs, rhs, report
