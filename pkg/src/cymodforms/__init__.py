"""Calabi-Yau modular forms: charts of the enhanced moduli space of the Dwork
family, the modular vector field and its Lie algebra, Rankin-Cohen brackets, and
exact q-series for the low-dimensional solutions."""

from .calibration import calibrate_cn
from .exact import (
    ExactArithmeticError,
    MatrixRF,
    Polynomial,
    RationalFunction,
    Ring,
    format_rational,
    parse_expression,
    rf_equal,
)
from .fields import CYSystem, VectorField, cy_system, lie_bracket
from .gauss_manin import gm_matrix, stirling2
from .moduli import build_chart, chart_dimension
from .qseries import QSeries, eta, theta2, theta3, theta3_neg
from .rc import CYModularForms, GradedElement, canonical_bracket, is_two_cy, rc_bracket, weight_of

__version__ = "0.1.0"
