"""Finite-scale laboratory for forcing with trees, subtrees and side conditions."""
