"""Exact model checking of probabilistic temporal-epistemic logic over
partially observed Markov chains."""
from .markov import (PODTMC, bilinear_form, cylinder_probability, distribution_at, make_model,
                     matrix_power, validate)
from .modelfile import load_model, parse_model, write_model

__version__ = "0.1.0"
