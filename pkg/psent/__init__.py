"""
psent: movable algebraic singularities of y'' = sum a_n(z) y^n.

Symbolic side: canonical form, resonance conditions, Puiseux expansions and
the W-function machinery. Numeric side: adaptive continuation along complex
paths, singularity location through regularizing charts, monodromy loops and
the accumulation demos.
"""

__version__ = "0.1.0"
