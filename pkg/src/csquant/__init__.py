"""Coherent-state, frame, prime and integral quantization on truncated Fock space."""

from .cs import lower_symbol, quantize_cs, semiclassical_scan, trajectory_check, weak_matrix_element
from .fock import (FockParams, OscillatorParams, TruncationWarning, annihilation, coherent_ket,
                   creation, displacement, eigen_spectrum, evolve_expectation,
                   heisenberg_saturation, momentum_op, position_op)
from .frame import (build_frame, diagonal_quantization, lower_symbol_finite, overlap_prob,
                    quantize_finite, rotation)
from .measure import (OperatorValuedMeasure, check_resolution, load_measure, quantize_general,
                      save_measure, sesquilinear_form)
from .ordering import OrderingScheme, compare_orderings, order_monomial, quantize_polynomial
from .prime import Region, dirac_residual, kernel_eval, localization_operator, prime_quantize
from .quadrature import QuadratureScheme
from .symbols import Symbol, parse_symbol, poisson_bracket, scale_hbar

__version__ = "0.1.0"
