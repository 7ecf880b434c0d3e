"""Forward-mode differentiation and finite-difference fallbacks.

A :class:`HyperDual` number carries a value, two independent first-derivative
channels and one mixed second-derivative channel.  Evaluating a program on
hyperdual inputs therefore yields f, df/da, df/db and d2f/da db in a single
pass, exact up to floating-point rounding.  This is the "algorithmic" branch
of the derivative oracle; central finite differences are the fallback for
programs that cannot be replayed on hyperdual numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

_EPS = float(np.finfo(float).eps)
FD_STEP1 = _EPS ** (1.0 / 3.0)  # central first differences
FD_STEP2 = _EPS ** 0.25         # central second differences


@dataclass(frozen=True)
class HyperDual:
    """Truncated polynomial a + b*e1 + c*e2 + d*e1*e2 with e1^2 = e2^2 = 0."""

    f: float
    da: float = 0.0
    db: float = 0.0
    dab: float = 0.0

    # -- ring operations -------------------------------------------------
    def __add__(self, o):
        if isinstance(o, HyperDual):
            return HyperDual(self.f + o.f, self.da + o.da, self.db + o.db, self.dab + o.dab)
        return HyperDual(self.f + o, self.da, self.db, self.dab)

    __radd__ = __add__

    def __neg__(self):
        return HyperDual(-self.f, -self.da, -self.db, -self.dab)

    def __sub__(self, o):
        return self + (-o if isinstance(o, HyperDual) else -o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, HyperDual):
            return HyperDual(
                self.f * o.f,
                self.f * o.da + self.da * o.f,
                self.f * o.db + self.db * o.f,
                self.f * o.dab + self.da * o.db + self.db * o.da + self.dab * o.f,
            )
        return HyperDual(self.f * o, self.da * o, self.db * o, self.dab * o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, HyperDual):
            return self * o._reciprocal()
        return self * (1.0 / o)

    def __rtruediv__(self, o):
        return self._reciprocal() * o

    def __pow__(self, p):
        if isinstance(p, int) and p >= 0:
            out = HyperDual(1.0)
            for _ in range(p):
                out = out * self
            return out
        v = self.f
        return _chain(self, v ** p, p * v ** (p - 1), p * (p - 1) * v ** (p - 2))

    def _reciprocal(self):
        v = self.f
        if v == 0.0:
            raise ZeroDivisionError("hyperdual division by zero value part")
        return _chain(self, 1.0 / v, -1.0 / v ** 2, 2.0 / v ** 3)


def _chain(x: HyperDual, g: float, gp: float, gpp: float) -> HyperDual:
    """Compose x with a scalar function given g(v), g'(v), g''(v)."""
    return HyperDual(g, gp * x.da, gp * x.db, gp * x.dab + gpp * x.da * x.db)


def value(x) -> float:
    return x.f if isinstance(x, HyperDual) else float(x)


def _unary(mf: Callable[[float], float], dmf: Callable[[float], float],
           ddmf: Callable[[float], float]):
    def op(x):
        if isinstance(x, HyperDual):
            return _chain(x, mf(x.f), dmf(x.f), ddmf(x.f))
        return mf(x)
    return op


sin = _unary(math.sin, math.cos, lambda v: -math.sin(v))
cos = _unary(math.cos, lambda v: -math.sin(v), lambda v: -math.cos(v))
sinh = _unary(math.sinh, math.cosh, math.sinh)
cosh = _unary(math.cosh, math.sinh, math.cosh)
exp = _unary(math.exp, math.exp, math.exp)
log = _unary(math.log, lambda v: 1.0 / v, lambda v: -1.0 / v ** 2)
sqrt = _unary(math.sqrt, lambda v: 0.5 / math.sqrt(v),
              lambda v: -0.25 / math.sqrt(v) ** 3)


def derivative(fn: Callable, t: float) -> float:
    """d fn/dt by a single hyperdual evaluation; falls back to differences."""
    try:
        out = fn(HyperDual(float(t), da=1.0))
        if isinstance(out, HyperDual):
            return out.da
    except (TypeError, AttributeError):
        pass
    h = FD_STEP1 * (1.0 + abs(t))
    return (fn(t + h) - fn(t - h)) / (2.0 * h)


# -- vector-valued program helpers ---------------------------------------

def _as_floats(out) -> np.ndarray:
    return np.array([value(c) for c in out], dtype=float)


def jacobian_ad(fn: Callable[[Sequence], Sequence], u: np.ndarray) -> np.ndarray:
    """Jacobian d fn_k / d u_j, shape (len(fn(u)), len(u))."""
    n = len(u)
    cols = []
    for j in range(n):
        args = [HyperDual(float(u[l]), da=1.0 if l == j else 0.0) for l in range(n)]
        out = fn(args)
        cols.append([c.da if isinstance(c, HyperDual) else 0.0 for c in out])
    return np.array(cols, dtype=float).T


def value_jac_hess_ad(fn, u: np.ndarray):
    """(value, jacobian, hessian) of a hyperdual-capable program.

    Hessian has shape (m, n, n); costs n(n+1)/2 program evaluations.
    """
    n = len(u)
    val = None
    jac = None
    hess = None
    for j in range(n):
        for k in range(j, n):
            args = [HyperDual(float(u[l]),
                              da=1.0 if l == j else 0.0,
                              db=1.0 if l == k else 0.0) for l in range(n)]
            out = fn(args)
            if val is None:
                m = len(out)
                val = _as_floats(out)
                jac = np.zeros((m, n))
                hess = np.zeros((m, n, n))
            for a, c in enumerate(out):
                if isinstance(c, HyperDual):
                    jac[a, j] = c.da
                    jac[a, k] = c.db
                    hess[a, j, k] = hess[a, k, j] = c.dab
    return val, jac, hess


def jacobian_fd(fn, u: np.ndarray) -> np.ndarray:
    n = len(u)
    cols = []
    for j in range(n):
        h = FD_STEP1 * (1.0 + abs(float(u[j])))
        up = np.array(u, dtype=float); up[j] += h
        um = np.array(u, dtype=float); um[j] -= h
        cols.append((_as_floats(fn(up)) - _as_floats(fn(um))) / (2.0 * h))
    return np.array(cols).T


def hessian_fd(fn, u: np.ndarray) -> np.ndarray:
    n = len(u)
    f0 = _as_floats(fn(np.asarray(u, dtype=float)))
    m = len(f0)
    hess = np.zeros((m, n, n))
    steps = [FD_STEP2 * (1.0 + abs(float(u[j]))) for j in range(n)]

    def at(delta):
        return _as_floats(fn(np.asarray(u, dtype=float) + delta))

    for j in range(n):
        hj = steps[j]
        ej = np.zeros(n); ej[j] = hj
        hess[:, j, j] = (at(ej) - 2.0 * f0 + at(-ej)) / hj ** 2
        for k in range(j + 1, n):
            hk = steps[k]
            ek = np.zeros(n); ek[k] = hk
            mixed = (at(ej + ek) - at(ej - ek) - at(-ej + ek) + at(-ej - ek)) / (4.0 * hj * hk)
            hess[:, j, k] = hess[:, k, j] = mixed
    return hess
