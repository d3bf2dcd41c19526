"""Finite checkers for independence and interpolation in nonmonotonic logics."""

from .lang import Language, ModelSet, parse_formula
from .pref import PreferenceRelation, mu
from .verdict import Verdict

__all__ = ["Language", "ModelSet", "PreferenceRelation", "Verdict", "mu", "parse_formula"]
