"""Tropical multi-section toolkit: integral affine surfaces, branched covers
with piecewise linear slope data, exact transition-matrix algebra, equivariant
characteristic classes, gluing obstructions and simplicity criteria."""

__version__ = "0.1.0"
