"""Executable combinatorics of coarse geometry at desk scale.

Tilings of finite metric windows into Folner sets of prescribed invariance,
clopen castles with exact type vectors, bounded decision procedures for
finitely presented commutative monoids, the amenable/paradoxical dichotomy
via matchings, and degree-0 uniformly finite homology via transshipment.
"""

__version__ = "0.1.0"
