"""Formulas of the branching-time and monadic time logics."""
from .ast import *  # noqa: F401,F403
from .ast import to_text
from .parser import parse_ctlkp, parse_wmlo, tokenize
from .poly import Poly
from .transform import (UNBOUNDED, MixedTimeFormula, eliminate_clock, eval_polynomial,
                        normalize_conditional, path_shape, qualitative_shape, temporal_depth,
                        translate_prop2)
