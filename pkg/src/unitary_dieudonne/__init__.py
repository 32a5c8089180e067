"""Computational toolkit for unitary Dieudonne modules of signature (a, b).

Layers, bottom up: truncated Witt vector arithmetic (``padic_ring``),
matrices and semilinear maps (``semilinear``), lattices (``lattice``),
modules with their tau-chains and minimal heights (``dieudonne_module``),
explicit families (``gallery``), Newton slope certificates (``slopes``)
and the command line (``cli``).
"""

from .dieudonne_module import (UnitaryDM, chain_analysis, chain_conditions, direct_sum,
                               is_superspecial, is_supersingular, lambda_and_height,
                               truncation_congruent, validate)
from .gallery import (build_deformed, build_even_product, build_flip_10, build_height_realization,
                      build_odd, build_parallel, default_context)
from .lattice import Lattice, PairingContext
from .padic_ring import PrecisionError, RingContext, delta_element, make_context
from .semilinear import Matrix, SemilinearMap, column_hnf, compose, semilinear_power
from .slopes import not_supersingular_certificate, projection_coefficient, slope_samples

__all__ = [
    "Lattice", "Matrix", "PairingContext", "PrecisionError", "RingContext", "SemilinearMap",
    "UnitaryDM", "build_deformed", "build_even_product", "build_flip_10",
    "build_height_realization", "build_odd", "build_parallel", "chain_analysis",
    "chain_conditions", "column_hnf", "compose", "default_context", "delta_element",
    "direct_sum", "is_superspecial", "is_supersingular", "lambda_and_height", "make_context",
    "not_supersingular_certificate", "projection_coefficient", "semilinear_power",
    "slope_samples", "truncation_congruent", "validate",
]
