"""Evolutionary Sokoban level generation with a two-archive MOEA."""

__version__ = "0.1.0"
