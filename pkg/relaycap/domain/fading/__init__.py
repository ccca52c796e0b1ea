"""Distribuciones de fading: modelos, codec de texto y esperanzas."""
