"""LMGF del servicio por bloque, capacidad efectiva y curvas virtuales."""
