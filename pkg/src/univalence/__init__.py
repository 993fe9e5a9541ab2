"""Exact Grunsky-matrix certificates and interval-certified univalence bounds."""
from .bounds import (
    BoundReport,
    Mode,
    annulus_bounds,
    check_lower_bound,
    h_function,
    lemma_tech_check,
    phi_enclose,
    preschwarzian_bound,
    solve_threshold,
)
from .certificate import (
    Certificate,
    find_certificate,
    min_eigenpair,
    rationalize,
    scan_upper_bound,
    verify_certificate,
)
from .grunsky import (
    GrunskyMatrix,
    GrunskyTable,
    PSDReport,
    coefficient_bound_check,
    grunsky_matrix,
    grunsky_table,
    psd_check,
    quadratic_form,
)
from .interval import Interval
from .ratseries import (
    PowerSeries,
    arctan_series,
    exp_series,
    f_a_series,
    q_a_series,
    series_log1p_composed,
    series_multiply,
)

__all__ = [
    "annulus_bounds",
    "arctan_series",
    "BoundReport",
    "Certificate",
    "check_lower_bound",
    "coefficient_bound_check",
    "exp_series",
    "f_a_series",
    "find_certificate",
    "grunsky_matrix",
    "grunsky_table",
    "GrunskyMatrix",
    "GrunskyTable",
    "h_function",
    "Interval",
    "lemma_tech_check",
    "min_eigenpair",
    "Mode",
    "phi_enclose",
    "PowerSeries",
    "preschwarzian_bound",
    "psd_check",
    "PSDReport",
    "q_a_series",
    "quadratic_form",
    "rationalize",
    "scan_upper_bound",
    "series_log1p_composed",
    "series_multiply",
    "solve_threshold",
    "verify_certificate",
]

__version__ = "0.1.0"
