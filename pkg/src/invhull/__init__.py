"""Convex hulls of the graph of modular inversion and related experiments."""

from .hull import HullResult, brute_force_hull, compute_hull, factor_hull, search_hull

__all__ = ["HullResult", "brute_force_hull", "compute_hull", "factor_hull", "search_hull"]
__version__ = "0.1.0"
