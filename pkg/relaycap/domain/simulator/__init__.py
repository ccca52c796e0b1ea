"""Simulador Monte Carlo por bloques de la cola en tándem fuente–relay."""
