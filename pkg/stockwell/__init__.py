"""
Directional Stockwell transform toolkit for sampled functions on the plane.
"""

__version__ = "1.0.0"
