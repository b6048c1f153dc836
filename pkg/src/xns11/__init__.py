"""xns11: exact and numerical verification of the generators and Jacobian of X_ns(11)."""

__version__ = "0.1.0"
