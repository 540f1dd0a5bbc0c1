"""Nega-P numeral systems, Salem-type functions and the Moran sets S(-P,u).

All values are exact :class:`fractions.Fraction`; floats appear only in the
dimension solvers and at the CLI boundary.
"""
from .cylinders import Cylinder, Interval, cyl_interval_negP, cyl_interval_P, cyl_interval_S, parse_cylinder
from .digits import (BlockSeq, DigitError, DigitSeq, LanguageError, SystemParams, complement_even,
                     complement_odd, contract_blocks, expand_blocks, format_word, parse_word)
from .dimension import (DimensionTrace, ParityCounts, TransferMatrix, alpha_k_product, alpha_k_transfer,
                        alpha_limit, boxcount_estimate, dim_theorem5, dim_theorem7, dimension_trace,
                        parity_counts, solve_moran_eq2)
from .moran import CapExceeded, Cover, build_cover, measure_sequence, set_extrema
from .numeral import eval_nega_s_adic, eval_s_adic
from .salem import (ProbVector, ProbVectorError, eval_F_ddot, eval_F_tilde, eval_f_zeta, eval_negP, eval_P,
                    parse_prob_vector)

__version__ = "0.1.0"
