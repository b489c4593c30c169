"""Exact normal forms, stability groups and equivalence for real hypersurfaces in C^2.

A surface is given by ``v = F(z, zb, u)`` with ``w = u + iv``; ``F`` is a
real weighted polynomial truncated at a fixed weight.
"""
from .equivalence import equivalent, linear_equivalent
from .normalform import absorb_harmonic, check_normal_form, normalize, prepare, special_mu, special_normalize
from .parse import parse_map, parse_polynomial, parse_surface
from .scalars import GaussianRational, Q
from .series import HoloMapPair, MultiIndex, WeightedSeries
from .surface import Hypersurface, anchor_index, validate_surface
from .symmetry import SymmetryGroup, classify, diagonal_stabilizer
from .transform import InitialData, RootOfUnity, ok_model_automorphism, pushforward

__version__ = "0.1.0"
