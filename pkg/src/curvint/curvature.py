"""Higher mean curvatures from a Weingarten matrix, without eigenvalues.

The elementary symmetric functions e_i of the principal curvatures are
obtained from power sums through Newton's recursion, which stays exact when
the matrix entries are rationals.  H_i = e_i / binom(n, i).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np


@dataclass(frozen=True)
class MeanCurvatures:
    """H_0..H_n and e_0..e_n for an n x n Weingarten matrix."""

    n: int
    H: tuple
    e: tuple


def _is_exact(W: np.ndarray) -> bool:
    return W.dtype == object


def power_sums(W: np.ndarray, kmax: int):
    """p_k = trace(W^k) for k = 1..kmax, by iterated multiplication."""
    W = np.asarray(W)
    n = W.shape[0]
    if not 1 <= kmax <= n:
        raise ValueError(f"kmax must be in 1..{n}")
    out = []
    M = W
    for _ in range(kmax):
        out.append(M.trace())
        M = M @ W
    return out


def elementary_symmetric(W: np.ndarray):
    """e_0..e_n of the eigenvalues of W via Newton's identities."""
    W = np.asarray(W)
    n = W.shape[0]
    p = power_sums(W, n)
    one = Fraction(1) if _is_exact(W) else 1.0
    e = [one]
    for k in range(1, n + 1):
        acc = sum((-1) ** (j - 1) * e[k - j] * p[j - 1] for j in range(1, k + 1))
        e.append(acc / k if _is_exact(W) else acc / float(k))
    return e


def mean_curvatures(W: np.ndarray) -> MeanCurvatures:
    """Mean curvatures H_i with binom(n,i) * H_i = e_i; H_0 = 1."""
    W = np.asarray(W)
    n = W.shape[0]
    e = elementary_symmetric(W)
    if _is_exact(W):
        H = [e[i] / comb(n, i) for i in range(n + 1)]
    else:
        H = [e[i] / float(comb(n, i)) for i in range(n + 1)]
    return MeanCurvatures(n=n, H=tuple(H), e=tuple(e))
