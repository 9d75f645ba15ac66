"""Flatness of dual webs of products of lines and foliations on the projective plane."""

__version__ = "0.1.0"
