"""Kernels, group actions and invariant subspaces on the Siegel upper half-space."""

__version__ = "0.1.0"
