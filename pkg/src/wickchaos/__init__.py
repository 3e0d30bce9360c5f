"""Truncated white-noise calculus on Wiener-chaos expansions."""
