"""Generating functions for partial chord diagrams by genus and boundary spectra."""

__version__ = "0.1.0"
