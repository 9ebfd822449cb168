"""Permutation-dynamics cellular automata: cogwheel, Ising exchange chain, Dirac necklace."""

__version__ = "0.1.0"
