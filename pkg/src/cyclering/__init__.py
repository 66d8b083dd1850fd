"""Exact special-cycle ring computations for positive definite lattices."""
