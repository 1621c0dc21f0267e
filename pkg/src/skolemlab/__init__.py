"""Exact computations with rational functions over valued fields: integer-valuedness,
value ideals and Skolem-closure checks on valuation and pseudovaluation domains."""

__version__ = "0.1.0"
