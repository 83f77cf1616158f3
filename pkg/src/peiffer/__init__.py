"""Peiffer commutators, crossed-module reflections and central-extension
certificates for finite precrossed modules over groups and Lie algebras."""

__version__ = "0.1.0"
