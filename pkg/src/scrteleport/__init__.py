"""Simulation of quantum teleportation through a scrambling unitary."""

__version__ = "0.1.0"
