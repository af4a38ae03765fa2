"""Exact-arithmetic spinor kernel for Weil classes on products of abelian varieties.

Subpackages by role: fieldtower (the biquadratic coefficient tower),
exteralg (sparse exterior algebra), clifford (normal-ordered Clifford
calculus), purespinor (annihilator subspaces), weilcm (the assembled Weil
structure), fmtransform (cohomological integral transforms), secantpipe
(presets, pipeline, reports), cli (the verify command).
"""

__version__ = "0.1.0"
