"""Symplectic cobordism computations over F2: Landweber-Novikov actions on
Ray's elements and the first differential of the Adams-Novikov complex."""

from .algebra import PolyF2, parse_poly
from .binomial import PhiVector, alpha_bruteforce, closed_form, gamma_bruteforce
from .hopf import OpIndex, s_on_phi
from .mass import check_relation, d1, homology, is_boundary, is_cycle

__version__ = "0.1.0"

__all__ = [
    "OpIndex", "PhiVector", "PolyF2", "alpha_bruteforce", "check_relation", "closed_form", "d1",
    "gamma_bruteforce", "homology", "is_boundary", "is_cycle", "parse_poly", "s_on_phi",
]
