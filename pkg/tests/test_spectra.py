import cmath

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from niep.errors import InvalidInput, NoPerron, NotSelfConjugate
from niep.sampling import random_rest
from niep.spectra import (
    RealPolynomial,
    Spectrum,
    as_diagonal,
    check_diag_necessary,
    check_necessary,
    is_suleimanova,
    parity_sign_violations,
    parse_spectrum,
    target_poly,
)
from niep.symfunc import elem_sym


def test_parse_example_spectrum():
    s = parse_spectrum([(4, 0), (0, 1), (0, -1), (0, 1), (0, -1)])
    assert s.rho == 4
    assert s.rest == (1j, -1j, 1j, -1j)
    assert s.n == 5


def test_parse_singleton_and_no_perron():
    assert parse_spectrum([[3, 0]]) == Spectrum(3.0, ())
    with pytest.raises(NoPerron):
        parse_spectrum([[0, 1], [0, -1]])
    with pytest.raises(NoPerron):
        parse_spectrum([1, -5])
    with pytest.raises(InvalidInput):
        parse_spectrum([])


def test_parse_tie_prefers_largest_real_part():
    w = cmath.exp(2j * cmath.pi / 3)
    s = parse_spectrum([w, 1, w.conjugate()])
    assert s.rho == 1.0
    assert s.rest[0] == s.rest[1].conjugate()
    s = parse_spectrum([-1, 1])
    assert s.rho == 1 and s.rest == (-1,)


def test_parse_symmetrises_near_conjugates():
    s = parse_spectrum([5, complex(-1, 2 + 1e-10), complex(-1 + 1e-10, -2)])
    a, b = s.rest
    assert a == b.conjugate()
    assert a.imag > 0


def test_parse_rejects_unpaired():
    with pytest.raises(NotSelfConjugate):
        parse_spectrum([5, 1j, -2j])
    with pytest.raises(NotSelfConjugate):
        parse_spectrum([5, 1j])


def test_spectrum_rejects_negative_rho():
    with pytest.raises(InvalidInput):
        Spectrum(-1.0, ())


@pytest.mark.parametrize(
    "sigma, expected",
    [
        (Spectrum(4, (1j, -1j, 1j, -1j)), True),
        (Spectrum(7, (2, 1)), False),
        (Spectrum(1, (0, 0)), True),
        (Spectrum(1, (5e-10, -0.5)), True),
    ],
)
def test_is_suleimanova(sigma, expected):
    assert is_suleimanova(sigma) is expected


def test_clamp_real_parts():
    s = Spectrum(1, (complex(5e-10, 1), complex(5e-10, -1))).clamp_real_parts()
    assert s.rest == (1j, -1j)


def test_check_necessary_example(double_pairs):
    rep = check_necessary(double_pairs)
    assert rep.ok
    assert rep["s1_nonneg"].witness == pytest.approx(4)
    assert rep["s2_nonneg"].witness == pytest.approx(12)
    assert rep["jll_k1_m2"].witness == pytest.approx(16)
    assert rep["jll_k1_m2"].margin == pytest.approx(5 * 12 - 16)
    # k_max * m_max power sums, k_max * (m_max - 1) JLL records, plus two structural
    assert len(rep.records) == 2 + 18 + 12


def test_check_necessary_boundaries(cube_roots):
    rep = check_necessary(Spectrum(1, (-1,)))
    assert rep.ok and rep["s1_nonneg"].margin == 0
    rep = check_necessary(cube_roots)
    assert rep.ok
    assert abs(rep["jll_k1_m2"].margin) < 1e-12


def test_check_necessary_flags_failures():
    rep = check_necessary([-4, 1j, -1j])
    failed = {r.condition for r in rep.failed()}
    assert "perron" in failed and "s1_nonneg" in failed
    rep = check_necessary([1, 1j])
    assert not rep["self_conjugate"].holds


def test_check_diag_necessary(double_pairs, mixed4):
    rep = check_diag_necessary(double_pairs, [2, 2, 0, 0, 0])
    assert rep.ok
    assert rep["s2_diag"].witness == 8 and rep["s2_diag"].margin == pytest.approx(4)
    rep = check_diag_necessary(mixed4, [2, 0, 0, 0])
    assert rep["s1_trace"].holds
    assert not rep["s2_diag"].holds
    assert rep["s2_diag"].margin == pytest.approx(2 - 4)
    s1 = mixed4.power_sum(1)
    assert check_diag_necessary(mixed4, [s1 / 4] * 4)["s1_trace"].holds


def test_as_diagonal():
    assert as_diagonal([1, -1e-12]).tolist() == [1, 0]
    with pytest.raises(InvalidInput):
        as_diagonal([1, -0.1])


def test_target_poly_examples(double_pairs, mixed4):
    g, full = target_poly(double_pairs)
    assert g.tolist() == [1, 0, 2, 0, 1]
    assert full.tolist() == [1, -4, 2, -8, 1, -4]
    _, full = target_poly(mixed4)
    # (x - 3)(x^2 + 4)(x + 1)
    assert full.tolist() == [1, -2, 1, -8, -12]
    g, full = target_poly(Spectrum(2.5))
    assert g.tolist() == [1] and full.tolist() == [1, -2.5]


def test_real_polynomial_contract():
    p = RealPolynomial([1, -3, 2])
    assert p.degree == 2 and p(1) == 0 and p(2) == 0
    assert p.c(-1) == 0 and p.c(3) == 0 and p.c(0) == 1
    assert (p * RealPolynomial([1, 1])).tolist() == [1, -2, -1, 2]
    with pytest.raises(ValueError):
        RealPolynomial([2, 1])


@given(st.integers(0, 2**32 - 1), st.integers(1, 9))
def test_coefficients_are_elementary_functions_of_negated_roots(seed, m):
    rest = random_rest(np.random.default_rng(seed), m)
    g, _ = target_poly(Spectrum(3.0, tuple(rest)))
    neg = [-z for z in rest]
    for i in range(m + 1):
        ref = elem_sym(neg, i)
        assert abs(ref.imag) < 1e-9
        assert g.c(i) == pytest.approx(ref.real, rel=1e-10, abs=1e-10)
        assert g.c(i) >= -1e-9


@given(st.integers(0, 2**32 - 1), st.integers(1, 9))
def test_rho_identity(seed, m):
    rng = np.random.default_rng(seed)
    rest = random_rest(rng, m)
    rho = -sum(z.real for z in rest) + rng.uniform(0, 3)
    sigma = Spectrum(rho, tuple(rest))
    g, _ = target_poly(sigma)
    delta = sigma.power_sum(1) * rng.dirichlet(np.ones(m + 1))
    assert rho == pytest.approx(g.c(1) + delta.sum(), abs=1e-10, rel=1e-10)


def test_parity_sign_regularity():
    rng = np.random.default_rng(7)
    for _ in range(500):
        rest = random_rest(rng, int(rng.integers(1, 10)))
        _, full = target_poly(Spectrum(rng.uniform(0, 4), tuple(rest)))
        assert parity_sign_violations(full.coeffs) == []


def test_parity_sign_detector_fires():
    # x^3 - x^2 + ... : c1 < 0 and c3 > 0 is a violation
    assert parity_sign_violations([1, -1, 0, 1]) == [1]
