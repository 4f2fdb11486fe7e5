"""Exact cohomology of polyhedral products and polyhedral smash products.

Given a simplicial complex K and, for each vertex, a strongly free splitting
of the cohomology of a CW pair (X_i, A_i), the package lists labelled
additive generators of H*(Z(K; (X,A))) and of the smash pieces Ẑ(K_J),
computes Hilbert-Poincaré series, and multiplies generators.
"""

from .complex import (ComplexError, SimplicialComplex, cycle, discrete, empty_complex,
                      full_subcomplex, join, link, shortlex_faces, simplex, simplex_boundary,
                      validate_complex)
from .homalg import GF, QQ, CohomologyBasis, Field, betti_numbers, express, join_class, pullback, \
    reduced_cohomology
from .series import PoincareSeries, series_arith, series_of_complex
from .pairdata import (CWPair, GradedGen, PairDecomposition, PairValidationError, builtin,
                       builtin_pair, pair_from_betti, validate_pair, wedge_model)
from .cartan import (Generator, full_generators, full_series, generator_degree, parse_label,
                     smash_generators, smash_series, unit_generator)
from .starprod import LinkClass, StarClass, cup, link_maps, link_star, star
from .oracle import corpus_check, euler_characteristic, hochster_direct

__version__ = "0.1.0"
