"""Spectra, diagonal lists, necessary conditions and target polynomials."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ._tol import DEFAULT_TOL, PAIR_TOL, scaled
from .errors import InternalContradiction, InvalidInput, NoPerron, NotSelfConjugate
from .symfunc import power_sum

__all__ = [
    "ConditionRecord",
    "NecessaryReport",
    "RealPolynomial",
    "Spectrum",
    "as_diagonal",
    "check_diag_necessary",
    "check_necessary",
    "is_suleimanova",
    "parity_sign_violations",
    "parse_spectrum",
    "target_poly",
]


def _to_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise InvalidInput(f"complex entries are [re, im] pairs, got {v!r}")
        z = complex(float(v[0]), float(v[1]))
    elif isinstance(v, (int, float, complex, np.number)):
        z = complex(v)
    else:
        raise InvalidInput(f"cannot read {v!r} as a complex number")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidInput(f"non-finite spectrum entry {v!r}")
    return z


def _pair_conjugates(zs: Sequence[complex], tol: float = PAIR_TOL) -> tuple[complex, ...]:
    """Return ``zs`` with conjugate partners replaced by exact conjugates.

    Real entries (``|Im| <= tol``) become exactly real. Each entry in the
    upper half-plane is greedily matched, in input order, with the nearest
    unused lower entry in the ``(Re, |Im|)`` plane; the pair is then replaced
    by its average. Order of the input is preserved.
    """
    out = list(zs)
    upper, lower = [], []
    for idx, z in enumerate(zs):
        if abs(z.imag) <= scaled(tol, abs(z)):
            out[idx] = complex(z.real, 0.0)
        elif z.imag > 0:
            upper.append(idx)
        else:
            lower.append(idx)
    if len(upper) != len(lower):
        raise NotSelfConjugate(
            f"{len(upper)} entries above the real axis but {len(lower)} below"
        )
    free = set(lower)
    for i in upper:
        zi = zs[i]
        j = min(free, key=lambda j: math.hypot(zi.real - zs[j].real, zi.imag + zs[j].imag))
        zj = zs[j]
        if math.hypot(zi.real - zj.real, zi.imag + zj.imag) > scaled(tol, abs(zi)):
            raise NotSelfConjugate(f"{zi} has no conjugate partner (closest: {zj})")
        free.remove(j)
        re = 0.5 * (zi.real + zj.real)
        im = 0.5 * (zi.imag - zj.imag)
        out[i] = complex(re, im)
        out[j] = complex(re, -im)
    return tuple(out)


@dataclass(frozen=True)
class Spectrum:
    """A Perron value ``rho`` plus the self-conjugate remainder ``rest``.

    Construction symmetrises conjugate pairs so downstream arithmetic sees an
    exactly self-conjugate list.
    """

    rho: float
    rest: tuple[complex, ...] = ()

    def __post_init__(self):
        rho = float(self.rho)
        if not math.isfinite(rho) or rho < 0:
            raise InvalidInput(f"Perron value must be finite and >= 0, got {self.rho}")
        object.__setattr__(self, "rho", rho)
        rest = tuple(_to_complex(z) for z in self.rest)
        object.__setattr__(self, "rest", _pair_conjugates(rest))

    @property
    def n(self) -> int:
        return 1 + len(self.rest)

    @property
    def values(self) -> tuple[complex, ...]:
        return (complex(self.rho, 0.0),) + self.rest

    def power_sum(self, k: int) -> float:
        return power_sum(self.values, k)

    def clamp_real_parts(self, tol: float = DEFAULT_TOL) -> "Spectrum":
        """Zero the real parts of non-Perron entries lying in ``(0, tol]``."""
        rest = tuple(
            complex(0.0, z.imag) if 0 < z.real <= tol else z for z in self.rest
        )
        return Spectrum(self.rho, rest)

    def to_pairs(self) -> list[list[float]]:
        return [[z.real, z.imag] for z in self.values]


def parse_spectrum(values: Iterable, tol: float = PAIR_TOL) -> Spectrum:
    """Build a :class:`Spectrum` from an undifferentiated list.

    Entries may be complex numbers, reals, or ``[re, im]`` pairs. The Perron
    entry is the maximal-modulus entry with the largest real part (first in
    input order on ties); it must be real and nonnegative within ``tol``.

    >>> parse_spectrum([4, 1j, -1j]).rho
    4.0
    """
    zs = [_to_complex(v) for v in values]
    if not zs:
        raise InvalidInput("spectrum must be nonempty")
    top = max(abs(z) for z in zs)
    cutoff = top - scaled(tol, top)
    ties = [i for i, z in enumerate(zs) if abs(z) >= cutoff]
    p = max(ties, key=lambda i: (zs[i].real, -i))
    z = zs[p]
    if abs(z.imag) > scaled(tol, top) or z.real < -tol:
        raise NoPerron(f"maximal-modulus entry {z} is not real and nonnegative")
    rest = _pair_conjugates(zs[:p] + zs[p + 1 :], tol)
    return Spectrum(max(z.real, 0.0), rest)


def is_suleimanova(sigma: Spectrum, tol: float = DEFAULT_TOL) -> bool:
    return all(z.real <= tol for z in sigma.rest)


def as_diagonal(delta: Iterable[float], tol: float = DEFAULT_TOL) -> np.ndarray:
    """Validate a diagonal list, clamping entries in ``[-tol, tol]`` to 0.

    Ordering is not enforced here; see :func:`niep.realize.realize`.
    """
    a = np.array([float(x) for x in delta], dtype=float)
    if a.size == 0:
        raise InvalidInput("diagonal must be nonempty")
    if not np.all(np.isfinite(a)):
        raise InvalidInput("diagonal entries must be finite")
    if np.any(a < -tol):
        raise InvalidInput(f"diagonal entries must be nonnegative, got {a.tolist()}")
    a[np.abs(a) <= tol] = 0.0
    return a


@dataclass(frozen=True)
class RealPolynomial:
    """Monic real polynomial ``x^d + c_1 x^(d-1) + ... + c_d``.

    ``coeffs`` are stored in descending order with ``coeffs[0] == 1``.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).ravel()
        if c.size == 0 or c[0] != 1.0:
            raise ValueError("polynomial must be monic")
        if not np.all(np.isfinite(c)):
            raise ValueError("polynomial coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def c(self, i: int) -> float:
        """Coefficient of ``x^(degree - i)``; 0 outside ``0..degree``."""
        if 0 <= i <= self.degree:
            return float(self.coeffs[i])
        return 0.0

    def __call__(self, x):
        acc = 0.0
        for c in self.coeffs:
            acc = acc * x + c
        return acc

    def __mul__(self, other: "RealPolynomial") -> "RealPolynomial":
        return RealPolynomial(np.convolve(self.coeffs, other.coeffs))

    def __eq__(self, other):
        return isinstance(other, RealPolynomial) and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def tolist(self) -> list[float]:
        return self.coeffs.tolist()


def target_poly(sigma: Spectrum, tol: float = DEFAULT_TOL) -> tuple[RealPolynomial, RealPolynomial]:
    """Return ``(g, full)`` with ``g = prod (x - lambda_i)`` and ``full = (x - rho) g``.

    ``g`` is built from real linear and quadratic factors only.
    """
    g = np.array([1.0])
    for z in sigma.rest:
        if z.imag == 0:
            g = np.convolve(g, [1.0, -z.real])
        elif z.imag > 0:
            g = np.convolve(g, [1.0, -2.0 * z.real, z.real**2 + z.imag**2])
    full = np.convolve(g, [1.0, -sigma.rho])
    if is_suleimanova(sigma, tol):
        scale = np.abs(g).max()
        if np.any(g < -scaled(tol, scale)):
            raise InternalContradiction(
                f"negative coefficient in g for a Suleimanova spectrum: {g.tolist()}"
            )
    return RealPolynomial(g), RealPolynomial(full)


def parity_sign_violations(coeffs: Sequence[float], tol: float = DEFAULT_TOL) -> list[int]:
    """Indices ``k >= 1`` where ``c_k <= 0`` but ``c_{k+2} > 0``.

    ``coeffs`` is a monic coefficient list ``[1, c_1, ..., c_n]``. Sign
    comparisons use ``tol`` scaled by the largest coefficient.
    """
    c = np.asarray(coeffs, dtype=float)
    t = scaled(tol, np.abs(c).max())
    n = c.size - 1
    return [k for k in range(1, n - 1) if c[k] <= t and c[k + 2] > t]


@dataclass
class ConditionRecord:
    condition: str
    holds: bool
    witness: float | None
    margin: float

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "holds": self.holds,
            "witness": self.witness,
            "margin": self.margin,
        }


@dataclass
class NecessaryReport:
    records: list[ConditionRecord] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.holds for r in self.records)

    def failed(self) -> list[ConditionRecord]:
        return [r for r in self.records if not r.holds]

    def __getitem__(self, condition: str) -> ConditionRecord:
        for r in self.records:
            if r.condition == condition:
                return r
        raise KeyError(condition)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "records": [r.to_dict() for r in self.records]}


def _raw_power_sum(zs, k):
    total = sum((z**k for z in zs), 0j)
    return total.real, sum(abs(z) ** k for z in zs)


def check_necessary(
    sigma: Spectrum | Sequence[complex],
    k_max: int = 6,
    m_max: int = 3,
    tol: float = DEFAULT_TOL,
) -> NecessaryReport:
    """Run the classical necessary conditions for realisability.

    Records, in order: ``self_conjugate``; ``perron`` (max modulus attained
    by a real nonnegative entry); ``s{k}_nonneg`` for ``k = 1..k_max*m_max``;
    ``jll_k{k}_m{m}`` i.e. ``s_k^m <= n^(m-1) s_{km}`` for ``k <= k_max`` and
    ``2 <= m <= m_max``.

    ``sigma`` may also be a raw complex list, which is how corrupted inputs
    that no longer parse as a :class:`Spectrum` are audited.
    """
    if k_max < 1 or m_max < 1:
        raise ValueError("k_max and m_max must be positive")
    report = NecessaryReport()
    if isinstance(sigma, Spectrum):
        zs = list(sigma.values)
        report.records.append(ConditionRecord("self_conjugate", True, None, 0.0))
    else:
        zs = [_to_complex(z) for z in sigma]
        try:
            _pair_conjugates(zs)
            report.records.append(ConditionRecord("self_conjugate", True, None, 0.0))
        except NotSelfConjugate:
            report.records.append(ConditionRecord("self_conjugate", False, None, math.nan))
    n = len(zs)

    top = max(abs(z) for z in zs)
    real_nonneg = [z.real for z in zs if abs(z.imag) <= scaled(tol, top) and z.real >= -tol]
    best = max(real_nonneg, default=-math.inf)
    margin = best - top
    report.records.append(
        ConditionRecord("perron", margin >= -scaled(tol, top), top, margin)
    )

    s = {}
    for k in range(1, k_max * m_max + 1):
        s[k], mag = _raw_power_sum(zs, k)
        report.records.append(
            ConditionRecord(f"s{k}_nonneg", s[k] >= -scaled(tol, mag), s[k], s[k])
        )
    for k in range(1, k_max + 1):
        for m in range(2, m_max + 1):
            lhs = s[k] ** m
            rhs = n ** (m - 1) * s[k * m]
            report.records.append(
                ConditionRecord(
                    f"jll_k{k}_m{m}", rhs - lhs >= -scaled(tol, lhs, rhs), lhs, rhs - lhs
                )
            )
    return report


def check_diag_necessary(
    sigma: Spectrum,
    delta: Sequence[float],
    m_max: int = 4,
    tol: float = DEFAULT_TOL,
) -> NecessaryReport:
    """Trace equality ``s_1(delta) = s_1(sigma)`` and ``s_m(delta) <= s_m(sigma)``."""
    a = np.asarray(delta, dtype=float)
    if a.size != sigma.n:
        raise InvalidInput(f"diagonal has {a.size} entries, spectrum has {sigma.n}")
    report = NecessaryReport()
    for m in range(1, m_max + 1):
        sd = float(np.sum(a**m))
        ss = sigma.power_sum(m)
        if m == 1:
            report.records.append(
                ConditionRecord("s1_trace", abs(sd - ss) <= scaled(tol, sd, ss), sd, ss - sd)
            )
        else:
            report.records.append(
                ConditionRecord(f"s{m}_diag", sd <= ss + scaled(tol, sd, ss), sd, ss - sd)
            )
    return report
