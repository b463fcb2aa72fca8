"""Single-orbit constraints for generalized Reed-Muller codes."""

__version__ = "0.1.0"
