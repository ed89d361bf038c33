"""Adler-Moser vortex configurations and Gross-Pitaevskii traveling-wave checks."""

__version__ = "0.1.0"
