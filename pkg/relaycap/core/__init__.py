"""Utilidades transversales: logging, excepciones y unidades."""
