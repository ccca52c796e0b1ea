"""Solver de la capacidad efectiva de un enlace de dos saltos."""
