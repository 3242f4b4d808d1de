"""Exact p-adic arithmetic, Morita's Gamma_p and truncated hypergeometric sums,
with verifiers for the supercongruences built from them."""

__version__ = "0.1.0"
