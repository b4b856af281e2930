"""Exact twisted module algebras over quantized enveloping algebras.

Subpackages: :mod:`qorbit.scalars` (coefficients), :mod:`qorbit.free`
(free bialgebra), :mod:`qorbit.cell` (module algebras), :mod:`qorbit.phi`
(φ-maps, twisted actions, cyclic modules), :mod:`qorbit.rmatrix` and the
shipped instances in :mod:`qorbit.instances`.
"""

__version__ = "0.1.0"
