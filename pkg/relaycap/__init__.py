"""relaycap - capacidad efectiva de enlaces de dos saltos con QoS estadística."""
