"""Exact renormalization and Lax-pair flows on the Hopf algebra of rooted trees."""

from .birkhoff import beta, birkhoff, is_local, renormalized
from .characters import (
    Character,
    InfinitesimalCharacter,
    char_inverse,
    char_log,
    commutator,
    convolve,
    inf_exp,
    normal_coordinate,
    r_tilde,
    r_tilde_inv,
)
from .coeffs import LaurentSeries, SymbolPoly
from .forest import Forest, RootedTree, all_trees, enumerate_forests, parse_tree
from .hopf import antipode, coproduct, reduced_coproduct
from .lax import flow, lax_solve
from .toy import ToyConfig, toy_character

__all__ = [
    "Character", "Forest", "InfinitesimalCharacter", "LaurentSeries", "RootedTree", "SymbolPoly",
    "ToyConfig", "all_trees", "antipode", "beta", "birkhoff", "char_inverse", "char_log",
    "commutator", "convolve", "coproduct", "enumerate_forests", "flow", "inf_exp", "is_local",
    "lax_solve", "normal_coordinate", "parse_tree", "r_tilde", "r_tilde_inv", "reduced_coproduct",
    "renormalized", "toy_character",
]
