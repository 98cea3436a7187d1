"""Truncated de Rham-Witt complexes of Laurent towers over finite fields.

Exact arithmetic for Witt vectors and de Rham-Witt forms of
``F_{p^r}((t))`` and ``F_{p^r}((u))((t))``, the Brylinski-Kato filtration,
the Cartier operator and (refined) Swan conductors of
Artin-Schreier-Witt characters, with a seeded law harness.
"""

from __future__ import annotations

from .cartier import cartier_C, is_F_image, is_Z1, one_minus_C, zb_group_test
from .conductor import AswCharacter, SwanReport, asw_best_form, h1_crosscheck, refined_swan, swan
from .errors import DrwError
from .field import GaloisRing
from .filtration import fil_level, fil_level_multi, fil_level_witt, fil_member, fil_member_witt, graded_rep
from .forms import DrwForm, dlog, from_witt, teich_form, to_witt
from .harness import LawSuite, run_suite
from .laurent import LaurentElem, TowerSpec
from .parser import evaluate, parse_expr, print_expr
from .witt import WittVec, gen_witt_polys, teichmuller

__version__ = "0.1.0"

__all__ = [
    "AswCharacter", "DrwError", "DrwForm", "GaloisRing", "LaurentElem", "LawSuite", "SwanReport",
    "TowerSpec", "WittVec", "asw_best_form", "cartier_C", "dlog", "evaluate", "fil_level",
    "fil_level_multi", "fil_level_witt", "fil_member", "fil_member_witt", "from_witt", "gen_witt_polys",
    "graded_rep", "h1_crosscheck", "is_F_image", "is_Z1", "one_minus_C", "parse_expr", "print_expr",
    "refined_swan", "run_suite", "swan", "teich_form", "teichmuller", "to_witt", "zb_group_test",
]
