"""Certified upper bounds on the illumination number of cap bodies."""

__version__ = "0.1.0"
