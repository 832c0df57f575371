"""Exact traces of Hecke operators on newforms with prescribed supercuspidal local components."""

__version__ = "0.1.0"
