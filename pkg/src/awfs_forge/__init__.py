"""Exact engine for algebraic weak factorization systems on finite presheaf
categories: small object argument, lifting solvers, model-structure and
transport coherence checks, and deterministic certificates."""

__version__ = "0.1.0"
