"""Nonnegative realisation with a prescribed diagonal.

For a spectrum ``(rho, lambda_2, ..., lambda_n)`` whose non-Perron entries
have nonpositive real parts and a diagonal ``a_1 >= ... >= a_n >= 0``, a
realising nonnegative matrix exists iff the traces agree and
``s_2(delta) <= s_2(sigma)``. When it does, one is

    [[a_1, 1,              ],
     [     a_2, 1,         ],
     [          ...   ...  ],
     [               a_{n-1}, 1  ],
     [b_n, b_{n-1}, ..., b_2, a_n]]

This module computes the ``b_j`` in two independent ways (closed form and
coefficient-matching recurrence), assembles the matrix and certifies it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._tol import DEFAULT_TOL, scaled
from .errors import (
    DimensionError,
    Infeasible,
    InternalContradiction,
    InvalidInput,
    NonRealResult,
    NotRealisable,
    PreconditionViolated,
)
from .spectra import Spectrum, as_diagonal, is_suleimanova, target_poly
from .symfunc import SymTable, build_sym_table, elem_sym
from .verify import CertReport, certify

__all__ = [
    "CompanionDiagonalMatrix",
    "GateResult",
    "KTable",
    "QChainReport",
    "RangeResult",
    "Realization",
    "Violation",
    "assemble",
    "b2_direct",
    "diag_range",
    "gate",
    "q_chain_report",
    "q_values",
    "realize",
    "realize_2x2",
    "realize_3x3_complex",
    "realize_3x3_real",
    "solve_b_closed",
    "solve_b_recurrence",
]


@dataclass(frozen=True)
class CompanionDiagonalMatrix:
    """Diagonal ``diag``, unit superdiagonal, bottom row ``(b_n, ..., b_2, a_n)``.

    ``b`` is stored as ``(b_2, ..., b_n)``.
    """

    diag: tuple[float, ...]
    b: tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.diag)

    def bottom_row(self) -> tuple[float, ...]:
        return tuple(reversed(self.b)) + (self.diag[-1],)

    def dense(self) -> np.ndarray:
        n = self.n
        A = np.diag(np.asarray(self.diag, dtype=float))
        if n > 1:
            A[np.arange(n - 1), np.arange(1, n)] = 1.0
            A[n - 1, : n - 1] = self.b[::-1]
        return A


@dataclass(frozen=True)
class Violation:
    condition: str
    margin: float
    detail: str = ""

    def __str__(self):
        return self.detail or f"{self.condition} violated (margin {self.margin:.6g})"

    def to_dict(self) -> dict:
        return {"condition": self.condition, "margin": self.margin, "detail": str(self)}


@dataclass
class GateResult:
    s1_margin: float
    s2_margin: float
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _s1_s2(delta: np.ndarray) -> tuple[float, float]:
    return float(delta.sum()), float(np.dot(delta, delta))


def gate(sigma: Spectrum, delta: Sequence[float], tol: float = DEFAULT_TOL) -> GateResult:
    """Check ``s_1(delta) = s_1(sigma)``, ``s_2(delta) <= s_2(sigma)`` and the
    nonpositive-real-part hypothesis."""
    a = np.asarray(delta, dtype=float)
    if a.size != sigma.n:
        raise DimensionError(f"diagonal has {a.size} entries, spectrum has {sigma.n}")
    s1d, s2d = _s1_s2(a)
    s1s, s2s = sigma.power_sum(1), sigma.power_sum(2)
    res = GateResult(s1_margin=s1d - s1s, s2_margin=s2s - s2d)
    if not is_suleimanova(sigma, tol):
        worst = max(z.real for z in sigma.rest)
        res.violations.append(
            Violation(
                "suleimanova",
                -worst,
                f"a non-Perron eigenvalue has positive real part {worst:.6g}; "
                "for n = 3 use realize_3x3_real / realize_3x3_complex",
            )
        )
    if abs(res.s1_margin) > scaled(tol, s1d, s1s):
        res.violations.append(
            Violation("s1", -abs(res.s1_margin), f"trace mismatch: s1(delta)={s1d:.6g} != s1(sigma)={s1s:.6g}")
        )
    if res.s2_margin < -scaled(tol, s2d, s2s):
        res.violations.append(
            Violation("s2", res.s2_margin, f"s2(delta)={s2d:.6g} > s2(sigma)={s2s:.6g}")
        )
    return res


def _require_trace(sigma: Spectrum, a: np.ndarray, tol: float):
    if a.size != sigma.n:
        raise DimensionError(f"diagonal has {a.size} entries, spectrum has {sigma.n}")
    s1d, s1s = float(a.sum()), sigma.power_sum(1)
    if abs(s1d - s1s) > scaled(tol, s1d, s1s):
        raise PreconditionViolated(f"trace mismatch: s1(delta)={s1d} vs s1(sigma)={s1s}")


def b2_direct(sigma: Spectrum, delta: Sequence[float], tol: float = DEFAULT_TOL) -> float:
    """``b_2 = (s_2(sigma) - s_2(delta)) / 2``, valid when the traces agree."""
    a = np.asarray(delta, dtype=float)
    _require_trace(sigma, a, tol)
    return 0.5 * (sigma.power_sum(2) - float(np.dot(a, a)))


@dataclass(frozen=True, eq=False)
class KTable:
    """``K[i, j]`` for ``0 <= i <= j <= n``; ``b_j = sum_i K[i, j]``.

    ``K[i, j]`` is the degree-``i`` part of ``b_j`` viewed as a polynomial in
    the diagonal entries. Columns ``j = 0, 1`` are included because the same
    formula yields ``b_0 = -1`` and ``b_1 = 0``, which the degree-slice
    recurrence needs.
    """

    K: np.ndarray
    table: SymTable

    @property
    def n(self) -> int:
        return self.K.shape[1] - 1

    def k(self, i: int, j: int) -> float:
        if i < 0 or j < 0 or i > j or j > self.n:
            return 0.0
        return float(self.K[i, j])

    def recurrence_residuals(self) -> list[tuple[int, int, float, float]]:
        """``(j, m, residual, scale)`` of ``sum_r (-1)^r e_r^(n-j+r) K[m-r, j-r]``
        for ``j = 2..n`` and ``m = 2..j``."""
        n, t = self.n, self.table
        out = []
        for j in range(2, n + 1):
            for m in range(2, j + 1):
                terms = [
                    (-1) ** r * t.e(r, n - j + r) * self.k(m - r, j - r) for r in range(m + 1)
                ]
                out.append((j, m, sum(terms), max(abs(x) for x in terms)))
        return out


def _ktable(c, table: SymTable) -> KTable:
    n = table.n
    e1 = table.e(1, n)
    K = np.zeros((n + 1, n + 1))
    for j in range(n + 1):
        s = n - j + 1
        for i in range(j + 1):
            K[i, j] = table.h(i, s) * (c(1) * c(j - i - 1) - c(j - i)) + e1 * table.h(
                i - 1, s
            ) * c(j - i)
    return KTable(K, table)


def solve_b_closed(
    sigma: Spectrum, delta: Sequence[float], tol: float = DEFAULT_TOL
) -> tuple[np.ndarray, KTable]:
    """Closed-form ``b_j = sum_{i=0}^{j} K_{i,j}`` for ``j = 2..n``.

    ``K_{i,j} = h_i^(n-j+1) (c_1 c_{j-i-1} - c_{j-i}) + e_1^(n) h_{i-1}^(n-j+1) c_{j-i}``
    with ``c_i`` the coefficients of ``prod (x - lambda_i)`` over the
    non-Perron entries (``c_0 = 1``, zero outside ``0..n-1``).
    """
    a = np.asarray(delta, dtype=float)
    _require_trace(sigma, a, tol)
    g, _ = target_poly(sigma, tol)
    kt = _ktable(g.c, build_sym_table(a))
    b = kt.K[:, 2:].sum(axis=0)
    return b, kt


def solve_b_recurrence(
    sigma: Spectrum, delta: Sequence[float], tol: float = DEFAULT_TOL
) -> np.ndarray:
    """Solve for ``b_2..b_n`` by matching coefficients one power at a time.

    ``b_k = -q_k + (-1)^k e_k(delta) - sum_{j=2}^{k-1} (-1)^(k-j) e_{k-j}(a_1..a_{n-j}) b_j``
    where ``q_k`` is the coefficient of ``x^(n-k)`` in the target polynomial.
    Uses direct symmetric-function evaluation, not :class:`SymTable`.
    """
    a = np.asarray(delta, dtype=float)
    _require_trace(sigma, a, tol)
    n = a.size
    _, full = target_poly(sigma, tol)
    ad = a.tolist()
    b = {}
    for k in range(2, n + 1):
        acc = -full.c(k) + (-1) ** k * elem_sym(ad, k)
        for j in range(2, k):
            acc -= (-1) ** (k - j) * elem_sym(ad[: n - j], k - j) * b[j]
        b[k] = acc
    return np.array([b[k] for k in range(2, n + 1)], dtype=float)


def assemble(delta: Sequence[float], b: Sequence[float]) -> CompanionDiagonalMatrix:
    """Build the structured matrix; the diagonal order is taken as given."""
    diag = tuple(float(x) for x in delta)
    bb = tuple(float(x) for x in b)
    if len(diag) == 0 or len(bb) != len(diag) - 1:
        raise DimensionError(f"need n-1 = {len(diag) - 1} bottom-row entries, got {len(bb)}")
    return CompanionDiagonalMatrix(diag, bb)


@dataclass
class Realization:
    matrix: CompanionDiagonalMatrix
    certificate: CertReport
    permutation: list[int]
    ktable: KTable

    @property
    def b(self) -> tuple[float, ...]:
        return self.matrix.b

    def dense(self) -> np.ndarray:
        return self.matrix.dense()


def _is_nonincreasing(a: np.ndarray) -> bool:
    return bool(np.all(a[:-1] >= a[1:]))


def realize(
    sigma: Spectrum,
    delta: Sequence[float],
    tol: float = DEFAULT_TOL,
    sort: bool = True,
) -> Realization:
    """Construct and certify a nonnegative realisation of ``sigma`` with diagonal ``delta``.

    The diagonal is sorted into nonincreasing order unless ``sort`` is false;
    ``Realization.permutation[i]`` is the input index placed at position ``i``.
    Raises :class:`Infeasible` when the gate fails, or when an unsorted
    diagonal yields a negative bottom-row entry. Raises
    :class:`InternalContradiction` if a sorted diagonal that passed the gate
    does not produce a certified nonnegative matrix.
    """
    a = as_diagonal(delta, tol)
    if a.size != sigma.n:
        raise DimensionError(f"diagonal has {a.size} entries, spectrum has {sigma.n}")
    perm = np.argsort(-a, kind="stable") if sort else np.arange(a.size)
    a = a[perm]

    g = gate(sigma, a, tol)
    if not g.ok:
        raise Infeasible(g.violations)
    sigma = sigma.clamp_real_parts(tol)

    b, kt = solve_b_closed(sigma, a, tol)
    b_rec = solve_b_recurrence(sigma, a, tol)
    for j, (x, y) in enumerate(zip(b, b_rec), start=2):
        if abs(x - y) > scaled(tol, x, y):
            raise InternalContradiction(f"closed form b_{j}={x!r} disagrees with recurrence {y!r}")

    ordered = _is_nonincreasing(a)
    thresholds = [scaled(tol, np.abs(kt.K[: j + 1, j]).sum()) for j in range(2, a.size + 1)]
    negative = [(j, x) for j, (x, t) in enumerate(zip(b, thresholds), start=2) if x < -t]
    if negative:
        matrix = assemble(a, b)
        cert = certify(matrix, sigma, tol)
        if ordered:
            raise InternalContradiction(
                "gate passed but "
                + ", ".join(f"b_{j} = {x:.6g}" for j, x in negative)
                + " is negative"
            )
        raise Infeasible(
            [
                Violation("nonnegativity", x, f"negative entry b{j} = {x:.6g}")
                for j, x in negative
            ],
            b=b,
            matrix=matrix,
            certificate=cert,
        )
    b = np.where(b < 0, 0.0, b)
    matrix = assemble(a, b)
    cert = certify(matrix, sigma, tol)
    if not cert.ok:
        raise InternalContradiction(f"assembled matrix failed certification: {cert.to_dict()}")
    return Realization(matrix, cert, perm.tolist(), kt)


def _infeasible(condition: str, margin: float, detail: str):
    raise Infeasible([Violation(condition, margin, detail)])


def realize_2x2(lambda1: float, lambda2: float, a1: float, a2: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Realise ``(lambda1, lambda2)`` with diagonal ``(a1, a2)`` as ``[[a1, 1], [b2, a2]]``.

    Feasible iff ``a1 <= lambda1`` and ``a1 + a2 = lambda1 + lambda2``.
    """
    if lambda1 < lambda2 or a1 < a2 or a2 < -tol:
        raise InvalidInput("need lambda1 >= lambda2 and a1 >= a2 >= 0")
    if a1 > lambda1 + scaled(tol, lambda1):
        _infeasible("a1<=lambda1", lambda1 - a1, f"a1={a1} exceeds lambda1={lambda1}")
    if abs(a1 + a2 - lambda1 - lambda2) > scaled(tol, a1 + a2, lambda1 + lambda2):
        _infeasible("s1", -abs(a1 + a2 - lambda1 - lambda2), "trace mismatch")
    b2 = max(a1 * a2 - lambda1 * lambda2, 0.0)
    return np.array([[a1, 1.0], [b2, a2]])


def _three_by_three(a: np.ndarray, b2: float, b3: float) -> np.ndarray:
    return np.array([[a[0], 1.0, 0.0], [0.0, a[1], 1.0], [b3, b2, a[2]]])


def _check_3x3_traces(s1d, s2d, s1s, s2s, tol):
    if abs(s1d - s1s) > scaled(tol, s1d, s1s):
        _infeasible("s1", -abs(s1d - s1s), f"trace mismatch: {s1d:.6g} != {s1s:.6g}")
    if s2d > s2s + scaled(tol, s2d, s2s):
        _infeasible("s2", s2s - s2d, f"s2(delta)={s2d:.6g} > s2(sigma)={s2s:.6g}")


def realize_3x3_real(lambdas: Sequence[float], delta: Sequence[float], tol: float = DEFAULT_TOL) -> np.ndarray:
    """Three real eigenvalues (any signs) with a prescribed diagonal.

    Both lists are sorted into nonincreasing order first. Feasible iff
    ``lambda_2 <= a_1 <= lambda_1`` and the trace and second power-sum
    conditions hold; then ``b_3 = -(a_1 - lambda_1)(a_1 - lambda_2)(a_1 - lambda_3)``.
    """
    lam = np.sort(np.asarray(lambdas, dtype=float))[::-1]
    a = np.sort(as_diagonal(delta, tol))[::-1]
    if lam.size != 3 or a.size != 3:
        raise DimensionError("realize_3x3_real needs three eigenvalues and three diagonal entries")
    if not (lam[1] - scaled(tol, lam[1]) <= a[0] <= lam[0] + scaled(tol, lam[0])):
        _infeasible(
            "lambda2<=a1<=lambda1",
            min(a[0] - lam[1], lam[0] - a[0]),
            f"a1={a[0]:.6g} outside [{lam[1]:.6g}, {lam[0]:.6g}]",
        )
    s1s, s2s = float(lam.sum()), float(np.dot(lam, lam))
    s1d, s2d = _s1_s2(a)
    _check_3x3_traces(s1d, s2d, s1s, s2s, tol)
    b2 = max(0.5 * (s2s - s2d), 0.0)
    b3 = max(-(a[0] - lam[0]) * (a[0] - lam[1]) * (a[0] - lam[2]), 0.0)
    return _three_by_three(a, b2, b3)


def realize_3x3_complex(
    rho: float, alpha: float, beta: float, delta: Sequence[float], tol: float = DEFAULT_TOL
) -> np.ndarray:
    """Spectrum ``(rho, alpha + i beta, alpha - i beta)`` with a prescribed diagonal.

    Feasible iff ``a_1 <= rho`` and the trace and second power-sum conditions
    hold; then ``b_3 = -(a_1 - rho)((a_1 - alpha)^2 + beta^2)``.
    """
    if rho < 0 or beta < 0:
        raise InvalidInput("need rho >= 0 and beta >= 0")
    a = np.sort(as_diagonal(delta, tol))[::-1]
    if a.size != 3:
        raise DimensionError("realize_3x3_complex needs three diagonal entries")
    if a[0] > rho + scaled(tol, rho):
        _infeasible("a1<=rho", rho - a[0], f"a1={a[0]:.6g} exceeds rho={rho:.6g}")
    s1s = rho + 2 * alpha
    s2s = rho**2 + 2 * (alpha**2 - beta**2)
    s1d, s2d = _s1_s2(a)
    _check_3x3_traces(s1d, s2d, s1s, s2s, tol)
    b2 = max(0.5 * (s2s - s2d), 0.0)
    b3 = max(-(a[0] - rho) * ((a[0] - alpha) ** 2 + beta**2), 0.0)
    return _three_by_three(a, b2, b3)


@dataclass(frozen=True)
class RangeResult:
    """Attainable values of a single diagonal entry."""

    a_min: float
    a_max: float
    s1: float
    n: int

    def witness(self, a: float) -> np.ndarray:
        """Diagonal ``(a, r, ..., r)`` with ``r = (s_1 - a)/(n - 1)``, sorted nonincreasing."""
        if self.n == 1:
            return np.array([float(a)])
        rest = (self.s1 - a) / (self.n - 1)
        return np.sort(np.array([float(a)] + [rest] * (self.n - 1)))[::-1]

    def to_dict(self) -> dict:
        return {"a_min": self.a_min, "a_max": self.a_max, "s1": self.s1, "n": self.n}


def diag_range(sigma: Spectrum, tol: float = DEFAULT_TOL) -> RangeResult:
    """Interval of values ``a`` that some diagonal entry of a nonnegative
    realisation of ``sigma`` can take.

    ``[max(0, (s_1 - d)/n), min(s_1, (s_1 + d)/n)]`` with
    ``d = sqrt((n - 1)(n s_2 - s_1^2))``. Requires ``s_1 >= 0`` and
    ``s_1^2 <= n s_2``, else :class:`NotRealisable`.
    """
    if not is_suleimanova(sigma, tol):
        raise PreconditionViolated("diag_range needs nonpositive real parts off the Perron entry")
    n = sigma.n
    s1, s2 = sigma.power_sum(1), sigma.power_sum(2)
    if s1 < -scaled(tol, s1):
        raise NotRealisable(f"s1 = {s1:.6g} < 0")
    s1 = max(s1, 0.0)
    jll = n * s2 - s1**2
    if jll < -scaled(tol, n * s2, s1**2):
        raise NotRealisable(f"s1^2 = {s1**2:.6g} exceeds n*s2 = {n * s2:.6g}")
    d = math.sqrt((n - 1) * max(jll, 0.0))
    return RangeResult(max(0.0, (s1 - d) / n), min(s1, (s1 + d) / n), s1, n)


def _complex_elem_sym(xs, k, tol):
    v = complex(elem_sym(xs, k))
    if abs(v.imag) > scaled(tol, abs(v)):
        raise NonRealResult(f"e_{k} has imaginary part {v.imag:.3e}")
    return v.real


def q_values(r: float, xs: Sequence[complex], tol: float = DEFAULT_TOL) -> list[float]:
    """Binomially normalised mixed coefficients ``Q_0..Q_{n+1}`` of ``(r, xs)``.

    ``Q_{2k} = (e_{2k} - r e_{2k-1}) / C(ceil(n/2), k)`` and
    ``Q_{2k+1} = (e_{2k+1} - r e_{2k}) / C(floor(n/2), k)``.
    """
    xs = [complex(x) for x in xs]
    n = len(xs)
    e = [_complex_elem_sym(xs, k, tol) for k in range(n + 2)]
    e_prev = lambda k: e[k - 1] if k >= 1 else 0.0  # noqa: E731
    q = []
    for idx in range(n + 2):
        k, odd = divmod(idx, 2)
        top = n // 2 if odd else (n + 1) // 2
        q.append((e[idx] - r * e_prev(idx)) / math.comb(top, k))
    return q


@dataclass
class QChainReport:
    q: list[float]
    even_top: int | None
    odd_top: int | None
    worst_margin: float
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def q_chain_report(r: float, xs: Sequence[complex], tol: float = DEFAULT_TOL) -> QChainReport:
    """Audit the positivity and log-concavity chains of the ``Q`` sequence.

    With ``s`` the largest index for which ``Q_{2s} > 0``: every
    ``Q_{2i}, i <= s`` must be positive and
    ``Q_{2k} Q_{2l} >= Q_{2k-2} Q_{2l+2}`` for ``1 <= k <= l <= s - 1``;
    likewise for the odd chain. Margins are relative to the larger product.
    """
    q = q_values(r, xs, tol)
    n = len(xs)
    thresh = scaled(tol, max(abs(x) for x in q))
    viol: list[str] = []
    worst = math.inf

    def chain(parity: int, last: int):
        nonlocal worst
        idx = lambda i: 2 * i + parity  # noqa: E731
        tops = [s for s in range(last + 1) if q[idx(s)] > thresh]
        if not tops:
            return None
        s = max(tops)
        for i in range(s + 1):
            if q[idx(i)] <= 0:
                viol.append(f"Q_{idx(i)} = {q[idx(i)]:.6g} not positive below Q_{idx(s)} > 0")
        for k in range(1, s):
            for l in range(k, s):
                lhs = q[idx(k)] * q[idx(l)]
                rhs = q[idx(k - 1)] * q[idx(l + 1)]
                margin = (lhs - rhs) / max(1.0, abs(lhs), abs(rhs))
                worst = min(worst, margin)
                if margin < -tol:
                    viol.append(
                        f"Q_{idx(k)}Q_{idx(l)} < Q_{idx(k - 1)}Q_{idx(l + 1)} (margin {margin:.3e})"
                    )
        return s

    even_top = chain(0, (n + 1) // 2)
    odd_top = chain(1, n // 2)
    return QChainReport(q, even_top, odd_top, worst, viol)
