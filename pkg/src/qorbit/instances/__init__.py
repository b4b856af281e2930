"""Concrete bialgebra / module-algebra / φ data sets."""
