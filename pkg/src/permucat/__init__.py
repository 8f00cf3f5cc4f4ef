"""Exceptional collections on Losev-Manin spaces and their GIT quotients, checked by exact arithmetic."""

__version__ = "0.1.0"
