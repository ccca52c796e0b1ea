"""Dominios de relaycap: fading, lmgf, solver, simulator y scenarios."""
