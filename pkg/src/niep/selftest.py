"""Randomised invariant suites, shared by ``niep selftest`` and the test suite."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._tol import DEFAULT_TOL
from .realize import b2_direct, q_chain_report, realize, solve_b_closed, solve_b_recurrence
from .sampling import random_instance, random_rest
from .spectra import check_necessary, parity_sign_violations
from .symfunc import build_sym_table, newton_eh_residual, split_e2_residual, truncated_eh_residual

__all__ = ["SuiteResult", "run_all"]

IDENTITY_TOL = 1e-10
MAX_INDEX = 12


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    # worst normalised margin; negative means a failure
    worst: float = math.inf

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, margin: float, what: str):
        self.cases += 1
        self.worst = min(self.worst, margin)
        if margin < 0:
            self.failures.append(what)

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "cases": self.cases,
            "failures": len(self.failures),
            "worst_margin": None if math.isinf(self.worst) else self.worst,
            "first_failures": self.failures[:5],
        }


def _vanish_margin(residual, scale, tol):
    return 1.0 - abs(residual) / (tol * max(1.0, scale))


def identity_suite(rng, count) -> SuiteResult:
    """Newton-type e/h identities, their truncated generalisation and the
    e_2 splitting identity on random lists of length <= 10."""
    res = SuiteResult("identities")
    for _ in range(count):
        n = int(rng.integers(1, 11))
        xs = rng.uniform(-2.0, 2.0, n) if rng.random() < 0.5 else rng.uniform(0.0, 2.0, n)
        xl = xs.tolist()
        for m in range(1, MAX_INDEX + 1):
            r, s = newton_eh_residual(xl, m)
            res.record(_vanish_margin(r, s, IDENTITY_TOL), f"eh m={m} xs={xl}")
        table = build_sym_table(xs, MAX_INDEX)
        for k in range(0, MAX_INDEX):
            for m in range(1, MAX_INDEX - k + 1):
                r, s = truncated_eh_residual(table, k, m)
                res.record(_vanish_margin(r, s, IDENTITY_TOL), f"truncated k={k} m={m} xs={xl}")
        for k in range(1, (n + 1) // 2 + 1):
            r, s = split_e2_residual(table, k)
            res.record(_vanish_margin(r, s, IDENTITY_TOL), f"split k={k} xs={xl}")
    return res


def realization_suites(rng, count, tol=DEFAULT_TOL) -> list[SuiteResult]:
    """Closed form vs recurrence, sign of b, certification, degree-slice
    recurrence and the necessary-condition battery on random feasible problems."""
    oracle = SuiteResult("oracle_equality")
    signs = SuiteResult("b_nonnegative")
    cert = SuiteResult("certification")
    krec = SuiteResult("ktable_recurrence")
    b2 = SuiteResult("b2_direct")
    nec = SuiteResult("necessary_conditions")
    for _ in range(count):
        sigma, delta = random_instance(rng)
        tag = f"sigma={sigma.to_pairs()} delta={delta.tolist()}"
        bc, kt = solve_b_closed(sigma, delta, tol)
        br = solve_b_recurrence(sigma, delta, tol)
        rel = np.abs(bc - br) / np.maximum(1.0, np.maximum(np.abs(bc), np.abs(br)))
        oracle.record(1.0 - float(rel.max(initial=0.0)) / tol, f"closed != recurrence {tag}")
        signs.record(float(bc.min(initial=0.0)) / tol + 1.0, f"negative b {tag}")
        b2.record(
            1.0 - abs(float(bc[0]) - b2_direct(sigma, delta)) / 1e-10 if bc.size else 1.0,
            f"b2 mismatch {tag}",
        )
        for j, m, r, s in kt.recurrence_residuals():
            krec.record(_vanish_margin(r, s, IDENTITY_TOL), f"K recurrence j={j} m={m} {tag}")
        try:
            real = realize(sigma, delta, tol)
            cert.record(1.0 if real.certificate.ok else -1.0, f"certificate {tag}")
        except Exception as exc:  # any failure here is a suite failure
            cert.record(-1.0, f"{type(exc).__name__}: {exc} {tag}")
        nec.record(1.0 if check_necessary(sigma).ok else -1.0, f"necessary battery {tag}")
    return [oracle, signs, b2, krec, cert, nec]


def sign_suites(rng, count) -> list[SuiteResult]:
    """Coefficient sign regularity and the Q-sequence chains."""
    parity = SuiteResult("parity_signs")
    chains = SuiteResult("q_chains")
    for _ in range(count):
        m = int(rng.integers(1, 10))
        rest = random_rest(rng, m)
        rho = rng.uniform(0.0, 4.0)
        full = np.convolve(np.poly(rest).real, [1.0, -rho])
        parity.record(-1.0 if parity_sign_violations(full) else 1.0, f"rho={rho} rest={rest}")
        xs = [-z for z in rest]
        c1 = float(np.sum(xs).real)
        for r in (c1, rng.uniform(-3.0, 1.0)):
            rep = q_chain_report(r, xs)
            chains.record(
                -1.0 if rep.violations else min(1.0, 1.0 + rep.worst_margin / DEFAULT_TOL),
                f"r={r} xs={xs}: {rep.violations[:1]}",
            )
    return [parity, chains]


def run_all(seed: int = 0, count: int = 200) -> list[SuiteResult]:
    rng = np.random.default_rng(seed)
    return [
        identity_suite(rng, count),
        *realization_suites(rng, count),
        *sign_suites(rng, count),
    ]
