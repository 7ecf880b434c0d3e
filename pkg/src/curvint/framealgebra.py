"""Exact exterior algebra of the interpolating n-forms on a 2n-coframe.

The model space has basis covectors e^1..e^n (horizontal) and
e^(n+1)..e^(2n) (vertical).  The family alpha_i of degree-n forms
interpolates between the horizontal volume alpha_0 and the fiber volume
alpha_n; the mirror map B sends horizontal basis vectors to their vertical
partners and kills verticals.  Everything here is exact: coefficients are
rationals, sums over permutations are enumerated, and the checks below are
equalities, not tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import comb, factorial
from typing import Mapping, Sequence

import numpy as np

MAX_N = 6


class FrameAlgebraError(ValueError):
    pass


def _sort_sign(idx: Sequence[int]):
    """(sorted tuple, sign) of an index word; None sign for repeats."""
    idx = list(idx)
    sign = 1
    for a in range(1, len(idx)):
        b = a
        while b > 0 and idx[b - 1] > idx[b]:
            idx[b - 1], idx[b] = idx[b], idx[b - 1]
            sign = -sign
            b -= 1
    for a in range(1, len(idx)):
        if idx[a - 1] == idx[a]:
            return None, 0
    return tuple(idx), sign


@dataclass(frozen=True)
class ExteriorForm:
    """Homogeneous form over the 2n-coframe with rational coefficients."""

    n: int
    degree: int
    terms: Mapping

    @staticmethod
    def build(n: int, degree: int, raw: dict) -> "ExteriorForm":
        clean = {}
        for idx, coeff in raw.items():
            c = Fraction(coeff)
            if c != 0:
                clean[idx] = c
        return ExteriorForm(n=n, degree=degree, terms=clean)

    @staticmethod
    def zero(n: int, degree: int) -> "ExteriorForm":
        return ExteriorForm(n=n, degree=degree, terms={})

    @staticmethod
    def basis(n: int, indices: Sequence[int]) -> "ExteriorForm":
        idx, sign = _sort_sign(indices)
        if sign == 0:
            return ExteriorForm.zero(n, len(indices))
        for a in idx:
            if not 1 <= a <= 2 * n:
                raise FrameAlgebraError(f"covector index {a} outside 1..{2 * n}")
        return ExteriorForm(n=n, degree=len(idx), terms={idx: Fraction(sign)})

    def is_zero(self) -> bool:
        return not self.terms

    def scale(self, c) -> "ExteriorForm":
        c = Fraction(c)
        if c == 0:
            return ExteriorForm.zero(self.n, self.degree)
        return ExteriorForm(self.n, self.degree,
                            {i: c * v for i, v in self.terms.items()})

    def __add__(self, other: "ExteriorForm") -> "ExteriorForm":
        if self.n != other.n or self.degree != other.degree:
            raise FrameAlgebraError("can only add forms of equal n and degree")
        out = dict(self.terms)
        for idx, c in other.terms.items():
            out[idx] = out.get(idx, Fraction(0)) + c
        return ExteriorForm.build(self.n, self.degree, out)

    def __sub__(self, other: "ExteriorForm") -> "ExteriorForm":
        return self + other.scale(-1)

    def __eq__(self, other) -> bool:
        return (isinstance(other, ExteriorForm) and self.n == other.n
                and self.degree == other.degree
                and dict(self.terms) == dict(other.terms))

    def __hash__(self):
        return hash((self.n, self.degree, tuple(sorted(self.terms.items()))))


def wedge(a: ExteriorForm, b: ExteriorForm) -> ExteriorForm:
    """Graded-antisymmetric exterior product with exact signs."""
    if a.n != b.n:
        raise FrameAlgebraError("wedge needs forms over the same coframe")
    out: dict = {}
    for ia, ca in a.terms.items():
        for ib, cb in b.terms.items():
            idx, sign = _sort_sign(ia + ib)
            if sign == 0:
                continue
            out[idx] = out.get(idx, Fraction(0)) + sign * ca * cb
    return ExteriorForm.build(a.n, a.degree + b.degree, out)


@dataclass(frozen=True)
class SlotMap:
    """Exact-rational endomorphism of the 2n-dimensional model space."""

    n: int
    matrix: tuple  # 2n x 2n rows of Fractions

    @staticmethod
    def from_rows(n: int, rows) -> "SlotMap":
        m = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if len(m) != 2 * n or any(len(r) != 2 * n for r in m):
            raise FrameAlgebraError("slot map must be 2n x 2n")
        return SlotMap(n=n, matrix=m)

    @staticmethod
    def identity(n: int) -> "SlotMap":
        return SlotMap.from_rows(n, [[1 if i == j else 0 for j in range(2 * n)]
                                     for i in range(2 * n)])

    @staticmethod
    def mirror(n: int) -> "SlotMap":
        """B: e_j -> e_(n+j), e_(n+j) -> 0; B^2 = 0 with rank n."""
        rows = [[0] * (2 * n) for _ in range(2 * n)]
        for j in range(n):
            rows[n + j][j] = 1
        return SlotMap.from_rows(n, rows)

    def compose_with(self, other: "SlotMap") -> "SlotMap":
        a, b = self.matrix, other.matrix
        k = 2 * self.n
        rows = [[sum(a[i][l] * b[l][j] for l in range(k)) for j in range(k)]
                for i in range(k)]
        return SlotMap.from_rows(self.n, rows)

    def covector_pullback(self, i: int) -> dict:
        """e^i composed with this map, as {index: coefficient}."""
        row = self.matrix[i - 1]
        return {j + 1: c for j, c in enumerate(row) if c != 0}

    def rank(self) -> int:
        rows = [list(r) for r in self.matrix]
        k = len(rows)
        rank = 0
        for col in range(k):
            piv = next((r for r in range(rank, k) if rows[r][col] != 0), None)
            if piv is None:
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            lead = rows[rank][col]
            for r in range(rank + 1, k):
                if rows[r][col] != 0:
                    factor = rows[r][col] / lead
                    rows[r] = [x - factor * y for x, y in zip(rows[r], rows[rank])]
            rank += 1
        return rank


def _wedge_covectors(factors, n: int, degree: int) -> dict:
    """Expand a wedge of one-forms given as {index: coeff} dicts."""
    out: dict = {(): Fraction(1)}
    for one in factors:
        nxt: dict = {}
        for word, c in out.items():
            for j, cj in one.items():
                if j in word:
                    continue
                idx, sign = _sort_sign(word + (j,))
                if sign == 0:
                    continue
                nxt[idx] = nxt.get(idx, Fraction(0)) + sign * c * cj
        out = nxt
        if not out:
            break
    return out


def compose(omega: ExteriorForm, maps: Sequence[SlotMap],
            _perturb_convention: bool = False) -> ExteriorForm:
    """Alternating composition of a degree-k form with k slot maps.

    Each decomposable term phi_1 ^ ... ^ phi_k contributes
    sum over permutations s of (phi_1 o A_{s(1)}) ^ ... ^ (phi_k o A_{s(k)}),
    extended linearly.  The test hook ``_perturb_convention`` inserts a bogus
    permutation sign, which must break the dual-definition calibration.
    """
    k = omega.degree
    if len(maps) != k:
        raise FrameAlgebraError(f"degree-{k} form needs exactly {k} slot maps")
    out: dict = {}
    pulled = [[m.covector_pullback(i) for i in range(1, 2 * omega.n + 1)] for m in maps]
    for idx, coeff in omega.terms.items():
        for sigma in permutations(range(k)):
            factors = [pulled[sigma[r]][idx[r] - 1] for r in range(k)]
            expanded = _wedge_covectors(factors, omega.n, k)
            if _perturb_convention:
                flip = 1
                seen = list(sigma)
                for a in range(k):
                    for b in range(a + 1, k):
                        if seen[a] > seen[b]:
                            flip = -flip
                coeff_eff = coeff * flip
            else:
                coeff_eff = coeff
            for word, c in expanded.items():
                out[word] = out.get(word, Fraction(0)) + coeff_eff * c
    return ExteriorForm.build(omega.n, k, out)


def alpha_explicit(n: int, i: int) -> ExteriorForm:
    """The degree-n form alpha_i by its explicit signed permutation sum.

    alpha_(-1) and alpha_(n+1) are zero by convention; n is guarded to keep
    the S_n enumeration trivial in cost.
    """
    if not 2 <= n <= MAX_N:
        raise FrameAlgebraError(f"n must be in 2..{MAX_N}")
    if i in (-1, n + 1):
        return ExteriorForm.zero(n, n)
    if not 0 <= i <= n:
        raise FrameAlgebraError(f"alpha index {i} outside -1..{n + 1}")
    ni = Fraction(1, factorial(i) * factorial(n - i))
    out: dict = {}
    for sigma in permutations(range(1, n + 1)):
        word = tuple(sigma[:n - i]) + tuple(n + s for s in sigma[n - i:])
        idx, sign = _sort_sign(word)
        if sign == 0:
            continue
        psign = _permutation_sign(sigma)
        out[idx] = out.get(idx, Fraction(0)) + ni * psign * sign
    return ExteriorForm.build(n, n, out)


def _permutation_sign(sigma) -> int:
    sign = 1
    seq = list(sigma)
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                sign = -sign
    return sign


def alpha_composed(n: int, i: int) -> ExteriorForm:
    """alpha_i as n_i * alpha_n o (B^(n-i) wedge 1^i): the dual definition."""
    if i in (-1, n + 1):
        return ExteriorForm.zero(n, n)
    alpha_n = ExteriorForm.basis(n, tuple(range(n + 1, 2 * n + 1)))
    maps = [SlotMap.mirror(n)] * (n - i) + [SlotMap.identity(n)] * i
    ni = Fraction(1, factorial(i) * factorial(n - i))
    return compose(alpha_n, maps).scale(ni)


def lemma21_check(n: int, i: int) -> bool:
    """alpha_(n-1) o (B^(n-i) wedge 1^i) == i! (n-i+1)! alpha_(i-1), exactly."""
    if not 0 <= i <= n <= MAX_N:
        raise FrameAlgebraError("need 0 <= i <= n <= 6")
    maps = [SlotMap.mirror(n)] * (n - i) + [SlotMap.identity(n)] * i
    lhs = compose(alpha_explicit(n, n - 1), maps)
    rhs = alpha_explicit(n, i - 1).scale(factorial(i) * factorial(n - i + 1))
    return lhs == rhs


def wedge_identity_check(n: int, j: int) -> bool:
    """alpha_j ^ alpha_(n-j) == (-1)^j binom(n,j) alpha_0 ^ alpha_n, exactly."""
    lhs = wedge(alpha_explicit(n, j), alpha_explicit(n, n - j))
    rhs = wedge(alpha_explicit(n, 0), alpha_explicit(n, n)).scale(
        Fraction((-1) ** j * comb(n, j)))
    return lhs == rhs


def weingarten_pullback(n: int, i: int, W) -> Fraction:
    """Pull alpha_i back through the vertical-coframe substitution by W.

    Substitutes e^(n+j) -> sum_k W[j][k] e^k (horizontal coframe), reduces,
    and returns the coefficient of e^1 ^ ... ^ e^n.  Contract: this equals
    e_i(W), the degree-i elementary symmetric function of W.
    """
    if not 2 <= n <= MAX_N:
        raise FrameAlgebraError(f"n must be in 2..{MAX_N}")
    Wm = [[Fraction(x) for x in row] for row in np.asarray(W, dtype=object)]
    if len(Wm) != n or any(len(r) != n for r in Wm):
        raise FrameAlgebraError("Weingarten matrix must be n x n")
    form = alpha_explicit(n, i)
    target = tuple(range(1, n + 1))
    total = Fraction(0)
    for idx, coeff in form.terms.items():
        factors = []
        for a in idx:
            if a <= n:
                factors.append({a: Fraction(1)})
            else:
                j = a - n
                factors.append({k + 1: Wm[j - 1][k] for k in range(n)
                                if Wm[j - 1][k] != 0})
        expanded = _wedge_covectors(factors, n, n)
        total += coeff * expanded.get(target, Fraction(0))
    return total
