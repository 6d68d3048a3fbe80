"""Executable hardness constructions."""
from .diophantine import IntPolynomial, diophantine_chain, diophantine_to_formula, parse_int_polynomial
from .embedding import StochasticEmbedding, embedding_model, stochastic_embedding
from .lrs import (LRS, format_lrs, lrs_eval, lrs_terms, lrs_to_bilinear, lrs_to_companion, parse_lrs,
                  skolem_search)
from .pfa import (PFA, parse_pfa, pfa_correspondence_check, pfa_to_podtmc, pfa_value, validate_pfa,
                  write_pfa)
