"""Conversiones de unidades compartidas."""


def db_to_linear(value_db: float) -> float:
    """SNR en dB a escala lineal: 10^(dB/10)."""
    return 10.0 ** (value_db / 10.0)
