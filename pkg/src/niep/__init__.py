"""Nonnegative matrices with prescribed spectrum and diagonal.

Decides whether a spectrum whose non-Perron entries have nonpositive real
parts is realised by a nonnegative matrix with a given diagonal, and builds
a certified companion-plus-diagonal realisation when it is.
"""

from .errors import (
    DimensionError,
    Infeasible,
    InternalContradiction,
    InvalidInput,
    NiepError,
    NonRealResult,
    NoPerron,
    NotRealisable,
    NotSelfConjugate,
    PreconditionViolated,
)
from .realize import (
    CompanionDiagonalMatrix,
    KTable,
    RangeResult,
    Realization,
    assemble,
    b2_direct,
    diag_range,
    gate,
    q_chain_report,
    q_values,
    realize,
    realize_2x2,
    realize_3x3_complex,
    realize_3x3_real,
    solve_b_closed,
    solve_b_recurrence,
)
from .spectra import (
    NecessaryReport,
    RealPolynomial,
    Spectrum,
    check_diag_necessary,
    check_necessary,
    is_suleimanova,
    parse_spectrum,
    target_poly,
)
from .symfunc import SymTable, build_sym_table, complete_hom, elem_sym, power_sum
from .verify import CertReport, certify, certify_dense, charpoly_dense, charpoly_structured

__version__ = "0.1.0"
