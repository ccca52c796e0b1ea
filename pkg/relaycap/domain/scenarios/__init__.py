"""Escenarios del CLI: parámetros de enlaces, barridos y simulación, y las tablas que producen."""
