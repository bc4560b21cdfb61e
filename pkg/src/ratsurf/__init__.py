"""Exact Picard-lattice workbench for anticanonical rational surfaces."""

__version__ = "0.1.0"
