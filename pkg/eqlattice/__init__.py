"""Equilibrium lattice package initialization."""
