"""Cross correlation of an m-sequence of period 2^m - 1 with a decimated
m-sequence of period 2^(m/2) - 1, and exhaustive checks of its distribution."""

from .analysis import (
    classify_valuedness,
    count_nu,
    lemma6_check,
    search_decimations,
    theorem1_prediction,
    verify_theorem1,
)
from .decimation import (
    DecimationParams,
    derive_params,
    enumerate_decimations,
    find_l_i,
    normalize_l,
)
from .gf2m import FieldElement, FieldSpec, build_field, gcd_pow2, is_in_subfield, trace
from .sequences import CorrelationSpectrum, m_sequence, spectrum

__version__ = "0.1.0"
