"""Audit LLM text generation for value bias against a value lexicon."""

__version__ = "0.1.0"
