"""Proof generation for description-logic entailments."""

__version__ = "0.1.0"
