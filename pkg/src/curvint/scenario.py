"""Scenario file parsing for the command-line front end.

Format: line-oriented sections headed by ``[section]`` with ``key = value``
pairs, UTF-8, ``#`` comments.  Numeric values accept rationals ``p/q``.
Repeated keys accumulate (used for ``v0`` and ``check`` lines).  Parse errors
carry 1-based line numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import surfaces
from .immersion import Hypersurface
from .spaceform import AmbientModel, KillingField, Warp, killing_field

SECTIONS = ("ambient", "surface", "field", "checks", "quadrature", "output")
CHECK_NAMES = ("minkowski", "spaceform", "flux", "katsurada", "katsurada_ratio",
               "umbilic", "hvalues")


class ScenarioError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def _number(text: str, line: int) -> float:
    text = text.strip()
    try:
        if "/" in text:
            return float(Fraction(text))
        if text == "pi":
            return math.pi
        return float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ScenarioError(f"bad numeric value {text!r}: {exc}", line)


def _vector(text: str, line: int) -> np.ndarray:
    return np.array([_number(t, line) for t in text.split()], dtype=float)


def _matrix(text: str, line: int) -> np.ndarray:
    rows = [r.strip() for r in text.split(";") if r.strip()]
    mat = [_vector(r, line) for r in rows]
    width = {len(r) for r in mat}
    if len(width) != 1:
        raise ScenarioError("matrix rows have unequal lengths", line)
    return np.array(mat)


@dataclass(frozen=True)
class CheckSpec:
    name: str
    indices: tuple
    tolerance: float
    line: int


@dataclass
class Scenario:
    """Declarative description of one verification run."""

    path: str
    ambient: AmbientModel
    surface: Hypersurface
    base: Optional[np.ndarray]
    v0s: list
    killing: Optional[KillingField]
    checks: list
    resolution: tuple
    csv_path: Optional[str] = None
    plot_path: Optional[str] = None
    surface_params: dict = field(default_factory=dict)


def _parse_sections(text: str):
    """{section: [(line_no, key, value), ...]} preserving order."""
    out = {name: [] for name in SECTIONS}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ScenarioError("unterminated section header", lineno)
            name = line[1:-1].strip().lower()
            if name not in SECTIONS:
                raise ScenarioError(f"unknown section [{name}]", lineno)
            current = name
            continue
        if current is None:
            raise ScenarioError("key outside any [section]", lineno)
        if "=" not in line:
            raise ScenarioError("expected key = value", lineno)
        key, value = line.split("=", 1)
        out[current].append((lineno, key.strip().lower(), value.strip()))
    return out


def _single(entries, key, line_hint=0, required=False, default=None):
    hits = [(ln, v) for ln, k, v in entries if k == key]
    if not hits:
        if required:
            raise ScenarioError(f"missing required key {key!r}", line_hint)
        return None, default
    if len(hits) > 1:
        raise ScenarioError(f"key {key!r} given more than once", hits[1][0])
    return hits[0]


def _build_ambient(entries) -> AmbientModel:
    ln, kind = _single(entries, "kind", required=True, line_hint=1)
    ln_d, dim_text = _single(entries, "dim", default="3")
    dim = int(_number(dim_text, ln_d or ln))
    kind = kind.lower()
    if kind == "euclidean":
        return AmbientModel.euclidean(dim)
    if kind in ("sphere", "hyperbolic"):
        ln_r, r0 = _single(entries, "r0", default="1")
        radius = _number(r0, ln_r or ln)
        return (AmbientModel.sphere(dim, radius) if kind == "sphere"
                else AmbientModel.hyperbolic(dim, radius))
    if kind == "warped":
        ln_p, psi = _single(entries, "psi", required=True, line_hint=ln)
        ln_i, iv = _single(entries, "interval", required=True, line_hint=ln)
        lo, hi = _vector(iv, ln_i)
        head, _, rest = psi.partition(":")
        head = head.strip().lower()
        if head == "s_c":
            warp = Warp.space_form(_number(rest, ln_p))
        elif head == "polynomial":
            coeffs = [_number(t, ln_p) for t in rest.split()]

            def poly(r, _c=tuple(coeffs)):
                acc = 0.0 * r
                for c in reversed(_c):
                    acc = acc * r + c
                return acc
            warp = Warp(fn=poly)
        else:
            raise ScenarioError("psi must be 's_c: <c>' or 'polynomial: c0 c1 ...'", ln_p)
        return AmbientModel.warped(dim, warp, (lo, hi))
    raise ScenarioError(f"unknown ambient kind {kind!r}", ln)


def _build_surface(entries, ambient: AmbientModel):
    ln, name = _single(entries, "name", required=True, line_hint=1)
    name = name.lower().replace("_", "-")
    ln_s, sign_text = _single(entries, "normal_sign", default="1")
    sign = int(_number(sign_text, ln_s or ln))
    params = {}

    def num(key, default=None, required=False):
        ln_k, v = _single(entries, key, default=default, required=required, line_hint=ln)
        val = _number(v, ln_k or ln)
        params[key] = val
        return val

    if name == "sphere":
        return surfaces.sphere(radius=num("radius", "1"), normal_sign=sign), params
    if name == "torus":
        return surfaces.torus(R=num("big-r", "2") if _single(entries, "big-r")[1] else num("r", "2"),
                              r=num("r_minor", "1") if _single(entries, "r_minor")[1] else num("rr", "1"),
                              normal_sign=sign), params
    if name == "ellipsoid":
        return surfaces.ellipsoid(num("a", "1"), num("b", "1"), num("c", "1"),
                                  normal_sign=sign), params
    if name == "latitude-sphere-in-s3":
        if ambient.radius is None:
            raise ScenarioError("latitude-sphere-in-s3 needs a sphere ambient", ln)
        return surfaces.latitude_sphere_s3(t=num("t", required=True),
                                           R0=ambient.radius, normal_sign=sign), params
    if name == "geodesic-sphere":
        return surfaces.geodesic_sphere(ambient, rho=num("rho", required=True),
                                        normal_sign=sign), params
    raise ScenarioError(f"unknown built-in surface {name!r}", ln)


def _parse_indices(text: str, line: int) -> tuple:
    text = text.strip()
    if ":" in text:
        lo, hi = text.split(":", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return (int(text),)


def _build_checks(entries) -> list:
    checks = []
    for ln, key, value in entries:
        if key != "check":
            raise ScenarioError(f"unexpected key {key!r} in [checks]", ln)
        parts = value.split()
        if not parts:
            raise ScenarioError("empty check line", ln)
        name = parts[0].lower()
        if name not in CHECK_NAMES:
            raise ScenarioError(f"unknown check {name!r}", ln)
        indices: tuple = (0,)
        tol = None
        for tok in parts[1:]:
            if "=" not in tok:
                raise ScenarioError(f"bad check token {tok!r}", ln)
            k, v = tok.split("=", 1)
            k = k.lower()
            if k in ("i", "j"):
                indices = _parse_indices(v, ln)
            elif k == "tol":
                tol = _number(v, ln)
            else:
                raise ScenarioError(f"unknown check option {k!r}", ln)
        if tol is None or tol <= 0.0:
            raise ScenarioError("every check needs tol > 0", ln)
        checks.append(CheckSpec(name=name, indices=indices, tolerance=tol, line=ln))
    if not checks:
        raise ScenarioError("scenario declares no checks")
    return checks


def parse_scenario(path: str, text: Optional[str] = None) -> Scenario:
    if text is None:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    sections = _parse_sections(text)
    ambient = _build_ambient(sections["ambient"])
    surface, params = _build_surface(sections["surface"], ambient)

    fld = sections["field"]
    ln_b, base_text = _single(fld, "base")
    base = _vector(base_text, ln_b) if base_text else None
    v0s = [_vector(v, ln) for ln, k, v in fld if k == "v0"]
    ln_o, omega_text = _single(fld, "omega")
    killing = None
    if omega_text is not None:
        omega = _matrix(omega_text, ln_o)
        ln_t, trans_text = _single(fld, "translation")
        if ambient.kind.value == "euclidean":
            trans = (_vector(trans_text, ln_t) if trans_text
                     else np.zeros(ambient.dim))
            killing = killing_field(ambient, (omega, trans))
        else:
            if trans_text is not None:
                raise ScenarioError("translation only applies to Euclidean ambients", ln_t)
            killing = killing_field(ambient, omega)

    checks = _build_checks(sections["checks"])

    ln_r, res_text = _single(sections["quadrature"], "resolution", required=True, line_hint=1)
    resolution = tuple(int(x) for x in _vector(res_text, ln_r))
    if len(resolution) != surface.chart.n:
        raise ScenarioError("resolution must list one entry per chart axis", ln_r)

    out = sections["output"]
    _, csv_path = _single(out, "csv")
    _, plot_path = _single(out, "plot")

    return Scenario(path=path, ambient=ambient, surface=surface, base=base,
                    v0s=v0s, killing=killing, checks=checks,
                    resolution=resolution, csv_path=csv_path,
                    plot_path=plot_path, surface_params=params)
