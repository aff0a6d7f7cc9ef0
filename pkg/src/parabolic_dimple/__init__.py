"""Trap-plus-dimple quantum mechanics: spectra, transitions, scattering and delta limits."""

__version__ = "0.1.0"
