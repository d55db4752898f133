"""Random problem generators for the property suites."""

from __future__ import annotations

import numpy as np

from .spectra import Spectrum

__all__ = ["random_diagonal", "random_instance", "random_rest", "random_suleimanova"]


def random_rest(rng: np.random.Generator, m: int, interior: bool = False) -> list[complex]:
    """``m`` self-conjugate values with nonpositive real parts.

    Unless ``interior`` is set, about one entry in eight sits on the
    imaginary axis.
    """
    out: list[complex] = []
    while len(out) < m:
        on_axis = not interior and rng.random() < 0.125
        re = 0.0 if on_axis else -rng.uniform(0.05, 2.0)
        if m - len(out) >= 2 and rng.random() < 0.6:
            im = rng.uniform(0.1, 2.0)
            out += [complex(re, im), complex(re, -im)]
        else:
            out.append(complex(re, 0.0))
    rng.shuffle(out)
    return out


def random_suleimanova(rng: np.random.Generator, n: int, interior: bool = False) -> Spectrum:
    """A realisable spectrum: ``s_1 >= 0`` and ``s_1^2 <= n s_2``."""
    while True:
        rest = random_rest(rng, n - 1, interior)
        floor = max([-sum(z.real for z in rest)] + [abs(z) for z in rest])
        rho = floor + rng.uniform(0.0, 2.0)
        sigma = Spectrum(rho, tuple(rest))
        s1, s2 = sigma.power_sum(1), sigma.power_sum(2)
        if s1 >= 0 and s1 * s1 <= n * s2:
            return sigma


def random_diagonal(
    rng: np.random.Generator, sigma: Spectrum, strict: bool = False, max_tries: int = 500
) -> np.ndarray | None:
    """Nonincreasing diagonal on the simplex ``sum = s_1(sigma)`` with
    ``s_2(delta) <= s_2(sigma)``, by rejection; ``None`` if none was found.

    The Dirichlet concentration is drawn per attempt so that both spread-out
    and near-constant diagonals occur.
    """
    n = sigma.n
    s1, s2 = sigma.power_sum(1), sigma.power_sum(2)
    for _ in range(max_tries):
        alpha = rng.choice([0.5, 1.0, 3.0, 10.0, 50.0])
        a = s1 * rng.dirichlet(np.full(n, alpha)) if n > 1 else np.array([s1])
        s2d = float(np.dot(a, a))
        if s2d < s2 or (not strict and s2d == s2):
            return np.sort(a)[::-1]
    return None


def random_instance(
    rng: np.random.Generator, n_min: int = 2, n_max: int = 8, interior: bool = False
) -> tuple[Spectrum, np.ndarray]:
    while True:
        n = int(rng.integers(n_min, n_max + 1))
        sigma = random_suleimanova(rng, n, interior)
        delta = random_diagonal(rng, sigma, strict=interior)
        if delta is not None:
            return sigma, delta
