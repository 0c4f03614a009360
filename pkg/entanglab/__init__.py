"""Buffer-conditioned state approximations and decorrelation audits for finite spin lattices."""

__version__ = "0.1.0"
