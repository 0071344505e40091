"""designlab: numerics for anti-concentration and design properties of random circuits."""

__version__ = "0.1.0"
