"""Elementary and complete homogeneous symmetric functions.

The tables built here index truncated prefixes of a list
``delta = (a_1, ..., a_n)``: ``e(i, j)`` is the ``i``-th elementary symmetric
function of ``(a_1, ..., a_j)`` and ``h(i, j)`` the complete homogeneous one.
Prefixes longer than ``n`` are padded with zeros, so lookups with ``j > n``
saturate at ``j = n``. ``e_tail(i, j)`` is the elementary symmetric function
of the suffix ``(a_{j+1}, ..., a_n)``.

All lookups are total: indices outside the defined range return 0, which is
the convention the closed-form solver in :mod:`niep.realize` relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._tol import DEFAULT_TOL, scaled
from .errors import NonRealResult

__all__ = [
    "SymTable",
    "build_sym_table",
    "complete_hom",
    "elem_sym",
    "newton_eh_residual",
    "power_sum",
    "split_e2_residual",
    "truncated_eh_residual",
]


def elem_sym(xs, k):
    """Return ``e_k(xs)``; 0 when ``k < 0`` or ``k > len(xs)``.

    Works for ints, floats and complex values alike. Integer inputs give an
    exact integer result.
    """
    n = len(xs)
    if k < 0 or k > n:
        return 0
    e = [1] + [0] * k
    for m, x in enumerate(xs, start=1):
        for i in range(min(m, k), 0, -1):
            e[i] = e[i] + x * e[i - 1]
    return e[k]


def complete_hom(xs, k):
    """Return ``h_k(xs)``; 0 when ``k < 0``."""
    if k < 0:
        return 0
    h = [1] + [0] * k
    for x in xs:
        # ascending sweep: h[i-1] already includes powers of x
        for i in range(1, k + 1):
            h[i] = h[i] + x * h[i - 1]
    return h[k]


def power_sum(xs, k, tol=DEFAULT_TOL):
    """Return ``sum(x**k for x in xs)`` as a real number.

    Complex inputs must be self-conjugate; an imaginary residue larger than
    ``tol * max(1, sum |x|**k)`` raises :class:`NonRealResult`.
    """
    if k < 1:
        raise ValueError(f"power sums are defined for k >= 1, got {k}")
    if all(not isinstance(x, complex) or x.imag == 0 for x in xs):
        return float(sum(float(getattr(x, "real", x)) ** k for x in xs))
    zs = [complex(x) ** k for x in xs]
    total = sum(zs, 0j)
    if abs(total.imag) > scaled(tol, sum(abs(z) for z in zs)):
        raise NonRealResult(
            f"s_{k} has imaginary part {total.imag:.3e}; input is not self-conjugate"
        )
    return total.real


@dataclass(frozen=True, eq=False)
class SymTable:
    """Dense tables of truncated symmetric functions of ``delta``.

    ``eps[i, j] = e_i(a_1..a_j)`` for ``0 <= i, j <= n``;
    ``eta[i, j] = h_i(a_1..a_j)`` for ``0 <= i <= degree_bound``;
    ``eps_prime[i, j] = e_i(a_{j+1}..a_n)`` for ``0 <= j <= n`` (column ``n``
    is the empty suffix).
    """

    delta: tuple[float, ...]
    eps: np.ndarray
    eta: np.ndarray
    eps_prime: np.ndarray

    @property
    def n(self) -> int:
        return len(self.delta)

    @property
    def degree_bound(self) -> int:
        return self.eta.shape[0] - 1

    def e(self, i: int, j: int) -> float:
        if i < 0 or j < 0:
            return 0.0
        j = min(j, self.n)
        if i > j:
            return 0.0
        return float(self.eps[i, j])

    def h(self, i: int, j: int) -> float:
        if i < 0 or j < 0:
            return 0.0
        if i > self.degree_bound:
            raise IndexError(
                f"h_{i} requested but table was built with degree_bound={self.degree_bound}"
            )
        return float(self.eta[i, min(j, self.n)])

    def e_tail(self, i: int, j: int) -> float:
        if j < 0 or j > self.n or i < 0 or i > self.n - j:
            return 0.0
        return float(self.eps_prime[i, j])


def build_sym_table(delta: Sequence[float], degree_bound: int | None = None) -> SymTable:
    """Fill a :class:`SymTable` via the prefix recurrences.

    ``e_i^(j) = e_i^(j-1) + a_j e_{i-1}^(j-1)`` and
    ``h_i^(j) = sum_r a_j^r h_{i-r}^(j-1)``; the suffix table uses the same
    elementary recurrence run from the back.
    """
    a = np.asarray(delta, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise ValueError("delta must be a nonempty 1-D list")
    if not np.all(np.isfinite(a)):
        raise ValueError("delta entries must be finite")
    n = a.size
    D = n if degree_bound is None else degree_bound
    if D < n:
        raise ValueError(f"degree_bound must be >= n={n}, got {D}")

    eps = np.zeros((n + 1, n + 1))
    eps[0, :] = 1.0
    for j in range(1, n + 1):
        eps[1 : j + 1, j] = eps[1 : j + 1, j - 1] + a[j - 1] * eps[0:j, j - 1]

    eta = np.zeros((D + 1, n + 1))
    eta[0, :] = 1.0
    for j in range(1, n + 1):
        powers = a[j - 1] ** np.arange(D + 1)
        for i in range(1, D + 1):
            eta[i, j] = np.dot(powers[: i + 1], eta[i::-1, j - 1])

    eps_prime = np.zeros((n + 1, n + 1))
    eps_prime[0, :] = 1.0
    for j in range(n - 1, -1, -1):
        eps_prime[1:, j] = eps_prime[1:, j + 1] + a[j] * eps_prime[:-1, j + 1]

    return SymTable(tuple(float(x) for x in a), eps, eta, eps_prime)


# Identity residuals. Each returns (residual, scale) where scale is the
# largest magnitude among the summed terms.


def newton_eh_residual(xs, m):
    """``sum_{i=0}^m (-1)^i e_i(xs) h_{m-i}(xs)``, which vanishes for ``m > 0``."""
    terms = [(-1) ** i * elem_sym(xs, i) * complete_hom(xs, m - i) for i in range(m + 1)]
    return sum(terms), max(abs(t) for t in terms)


def truncated_eh_residual(table: SymTable, k: int, m: int):
    """``sum_{i=0}^m (-1)^i e_i^(k+i) h_{m-i}^(k+i+1)`` for ``k >= 0, m > 0``."""
    terms = [
        (-1) ** i * table.e(i, k + i) * table.h(m - i, k + i + 1) for i in range(m + 1)
    ]
    return sum(terms), max(abs(t) for t in terms)


def split_e2_residual(table: SymTable, k: int):
    """Residual of ``e_2 = e_2^(p+1) + e'_2^(p) + e_1^(p) e'_1^(p+1)``, ``p = n - 2k + 1``."""
    n = table.n
    p = n - 2 * k + 1
    terms = [
        table.e(2, n),
        -table.e(2, p + 1),
        -table.e_tail(2, p),
        -table.e(1, p) * table.e_tail(1, p + 1),
    ]
    return sum(terms), max(abs(t) for t in terms)
