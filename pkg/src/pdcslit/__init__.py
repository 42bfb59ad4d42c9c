"""One- and two-photon double-slit interference for parametric down-conversion."""

__version__ = "0.1.0"
