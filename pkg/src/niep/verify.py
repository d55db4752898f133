"""Certification of candidate realisations.

Everything here compares characteristic polynomial coefficients; no roots are
computed. The structured path expands the closed form of the characteristic
polynomial of a companion-plus-diagonal matrix, the dense path runs the
Faddeev-LeVerrier trace recurrence on the full matrix and serves as its
independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._tol import DEFAULT_TOL
from .errors import DimensionError
from .spectra import RealPolynomial, Spectrum, target_poly

__all__ = ["CertReport", "certify", "certify_dense", "charpoly_dense", "charpoly_structured"]

DENSE_MAX_N = 64


def charpoly_structured(m) -> RealPolynomial:
    """Characteristic polynomial of a companion-plus-diagonal matrix.

    ``f = P_n - b_2 P_{n-2} - ... - b_n P_0`` where ``P_k`` is the product of
    ``(x - a_i)`` over the first ``k`` diagonal entries.
    """
    a = np.asarray(m.diag, dtype=float)
    n = a.size
    prefix = [np.array([1.0])]
    for ai in a:
        prefix.append(np.convolve(prefix[-1], [1.0, -ai]))
    f = prefix[n].copy()
    for j, bj in enumerate(m.b, start=2):
        p = prefix[n - j]
        f[n - p.size + 1 :] -= bj * p
    return RealPolynomial(f)


def charpoly_dense(M) -> RealPolynomial:
    """``det(xI - M)`` by the Faddeev-LeVerrier recurrence.

    The recurrence cancels heavily, so it runs in ``np.longdouble`` (80-bit
    on x86 Linux; plain double elsewhere). Raises :class:`DimensionError` for
    non-square input or ``n > 64``.
    """
    A = np.asarray(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise DimensionError(f"expected a nonempty square matrix, got shape {A.shape}")
    n = A.shape[0]
    if n > DENSE_MAX_N:
        raise DimensionError(f"dense oracle is limited to n <= {DENSE_MAX_N}, got {n}")
    A = A.astype(np.longdouble)
    coeffs = np.zeros(n + 1, dtype=np.longdouble)
    coeffs[0] = 1
    Mk = np.zeros_like(A)
    eye = np.eye(n, dtype=np.longdouble)
    for k in range(1, n + 1):
        Mk = A @ Mk + coeffs[k - 1] * eye
        coeffs[k] = -np.trace(A @ Mk) / k
    return RealPolynomial(coeffs.astype(float))


def _coeff_deviation(f: RealPolynomial, t: RealPolynomial) -> np.ndarray:
    if f.degree != t.degree:
        raise DimensionError(f"degree {f.degree} polynomial compared with degree {t.degree}")
    return f.coeffs - t.coeffs


def _within(dev: np.ndarray, ref: np.ndarray, tol: float) -> bool:
    return bool(np.all(np.abs(dev) <= tol * np.maximum(1.0, np.abs(ref))))


@dataclass
class CertReport:
    """Outcome of :func:`certify`; all flags true is a certificate.

    ``coeff_deviation`` is indexed like the polynomial coefficients
    (descending powers). ``negative_entries`` holds 0-based ``(row, col)``
    positions. ``oracle_match`` is ``None`` when no independent oracle ran.
    """

    charpoly_match: bool
    max_coeff_deviation: float
    coeff_deviation: list[float]
    oracle_match: bool | None
    oracle_deviation: float | None
    residual_max: float
    residual_ok: bool
    nonnegative: bool
    negative_entries: list[tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.charpoly_match
            and self.oracle_match is not False
            and self.residual_ok
            and self.nonnegative
        )

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "charpoly_match": self.charpoly_match,
            "max_coeff_deviation": self.max_coeff_deviation,
            "coeff_deviation": self.coeff_deviation,
            "oracle_match": self.oracle_match,
            "oracle_deviation": self.oracle_deviation,
            "residual_max": self.residual_max,
            "residual_ok": self.residual_ok,
            "nonnegative": self.nonnegative,
            "negative_entries": [list(p) for p in self.negative_entries],
        }


def _residual(f: RealPolynomial, sigma: Spectrum) -> float:
    n = f.degree
    return max(abs(f(lam)) / max(1.0, abs(lam) ** n) for lam in sigma.values)


def _negative_entries(A: np.ndarray, tol: float) -> list[tuple[int, int]]:
    return [(int(i), int(j)) for i, j in zip(*np.nonzero(A < -tol))]


def certify(m, sigma: Spectrum, tol: float = DEFAULT_TOL) -> CertReport:
    """Certify that the structured matrix ``m`` is nonnegative with spectrum ``sigma``."""
    if m.n != sigma.n:
        raise DimensionError(f"matrix is {m.n}x{m.n} but spectrum has {sigma.n} entries")
    _, target = target_poly(sigma)
    f = charpoly_structured(m)
    dev = _coeff_deviation(f, target)
    A = m.dense()

    oracle_match = oracle_dev = None
    if m.n <= DENSE_MAX_N:
        odev = _coeff_deviation(charpoly_dense(A), f)
        oracle_match = _within(odev, f.coeffs, tol)
        oracle_dev = float(np.abs(odev).max())

    residual = _residual(f, sigma)
    neg = _negative_entries(A, tol)
    return CertReport(
        charpoly_match=_within(dev, target.coeffs, tol),
        max_coeff_deviation=float(np.abs(dev).max()),
        coeff_deviation=dev.tolist(),
        oracle_match=oracle_match,
        oracle_deviation=oracle_dev,
        residual_max=residual,
        residual_ok=residual <= tol,
        nonnegative=not neg,
        negative_entries=neg,
    )


def certify_dense(M, sigma: Spectrum, tol: float = DEFAULT_TOL) -> CertReport:
    """Certify an arbitrary dense matrix using the trace-recurrence polynomial only."""
    A = np.asarray(M, dtype=float)
    f = charpoly_dense(A)
    if f.degree != sigma.n:
        raise DimensionError(f"matrix is {f.degree}x{f.degree} but spectrum has {sigma.n} entries")
    _, target = target_poly(sigma)
    dev = _coeff_deviation(f, target)
    residual = _residual(f, sigma)
    neg = _negative_entries(A, tol)
    return CertReport(
        charpoly_match=_within(dev, target.coeffs, tol),
        max_coeff_deviation=float(np.abs(dev).max()),
        coeff_deviation=dev.tolist(),
        oracle_match=None,
        oracle_deviation=None,
        residual_max=residual,
        residual_ok=residual <= tol,
        nonnegative=not neg,
        negative_entries=neg,
    )
