"""Sliding-block-code calculus, finite-semigroup analysis, and Karoubi
envelopes for subshifts."""

__version__ = "0.1.0"
