"""Exact and p-adic tools for Rankin-Eisenstein classes: q-expansions,
Eisenstein series, Clebsch-Gordan maps, modular-form spaces, complex and
p-adic Rankin L-values, and the syntomic regulator formula."""

__version__ = "0.1.0"
