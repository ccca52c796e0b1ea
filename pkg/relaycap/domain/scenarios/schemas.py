"""Entrada de escenarios: archivo JSON plano + flags del CLI.

Las claves del archivo son las mismas que los flags (con guion bajo):
theta1, theta2, snr1_db, snr2_db, block_s, bandwidth_hz, fading1, fading2, sweep,
rate_frac, blocks, seed, thresholds, warmup, replications, single_queue, format, tol.
Los flags tienen prioridad sobre el archivo.
"""

import json
from pathlib import Path
from typing import Any, Dict, Iterable, Tuple, Union

from pydantic import ValidationError

from relaycap.core.exceptions import ConfigurationException

from ..fading.schemas import parse_fading
from .models import Scenario

LINK_KEYS = ("snr1_db", "snr2_db", "block_s", "bandwidth_hz", "fading1", "fading2")
SIMULATION_KEYS = ("rate_frac", "blocks", "seed", "thresholds", "warmup", "replications", "single_queue")
SCENARIO_KEYS = frozenset(LINK_KEYS + SIMULATION_KEYS + ("theta1", "theta2", "sweep", "format", "tol"))

DEFAULT_SNR_DB = {"1": 0.0, "2": 10.0}


def parse_sweep(text: str) -> Dict[str, Any]:
    """Convierte "VAR:LO:HI:N[:log|lin]" en los campos de SweepSpec.

    Raises:
        ConfigurationException: Si el formato no es válido (clave "sweep").

    Ejemplo:
        parse_sweep("theta2:1e-4:1:50:log")
        # {"variable": "theta2", "lo": 0.0001, "hi": 1.0, "points": 50, "spacing": "log"}
    """
    parts = text.strip().split(":")
    if len(parts) not in (4, 5):
        raise ConfigurationException("sweep", f"'{text}' no sigue VAR:LO:HI:N:log|lin")
    try:
        fields = {
            "variable": parts[0],
            "lo": float(parts[1]),
            "hi": float(parts[2]),
            "points": int(parts[3]),
        }
    except ValueError as e:
        raise ConfigurationException("sweep", f"'{text}' tiene valores no numéricos") from e
    if len(parts) == 5:
        fields["spacing"] = parts[4]
    return fields


def parse_thresholds(value: Union[str, Iterable[float]]) -> Tuple[float, ...]:
    """Umbrales como "100,200,400" o lista numérica."""
    try:
        if isinstance(value, str):
            return tuple(float(item) for item in value.split(",") if item.strip())
        return tuple(float(item) for item in value)
    except (TypeError, ValueError) as e:
        raise ConfigurationException("thresholds", f"'{value}' no es una lista de números") from e


def load_scenario_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Lee un escenario JSON plano.

    Raises:
        ConfigurationException: Si el archivo no existe, no es JSON o no es un objeto.
    """
    try:
        with open(path, encoding="utf-8") as f:
            values = json.load(f)
    except OSError as e:
        raise ConfigurationException("scenario", f"no se puede leer '{path}' ({e})") from e
    except json.JSONDecodeError as e:
        raise ConfigurationException("scenario", f"'{path}' no es JSON válido ({e})") from e
    if not isinstance(values, dict):
        raise ConfigurationException("scenario", "el archivo debe contener un objeto JSON")
    return values


def _link_fields(values: Dict[str, Any], index: str) -> Dict[str, Any]:
    fields: Dict[str, Any] = {"snr_db": values.get(f"snr{index}_db", DEFAULT_SNR_DB[index])}
    for key in ("block_s", "bandwidth_hz"):
        if key in values:
            fields[key] = values[key]
    fading = values.get(f"fading{index}")
    if fading is not None:
        fields["fading"] = parse_fading(str(fading), key=f"fading{index}")
    return fields


def _flat_key(loc: Tuple[Any, ...]) -> str:
    """Clave plana del escenario que corresponde a la ruta de un error de pydantic."""
    if not loc:
        return "scenario"
    head = str(loc[0])
    field = str(loc[1]) if len(loc) > 1 else None
    if head in ("link1", "link2"):
        index = head[-1]
        return {"snr_db": f"snr{index}_db", "fading": f"fading{index}"}.get(field, field or head)
    if head == "simulation":
        return field or head
    if head == "output_format":
        return "format"
    return head


def build_scenario(values: Dict[str, Any]) -> Scenario:
    """Construye un Scenario validado a partir de claves planas.

    Args:
        values (Dict[str, Any]): Claves del archivo combinadas con los flags.

    Returns:
        Scenario: Escenario validado.

    Raises:
        ConfigurationException: Con la clave plana del primer valor inválido.
    """
    unknown = sorted(set(values) - SCENARIO_KEYS)
    if unknown:
        raise ConfigurationException(unknown[0], "clave desconocida")

    data: Dict[str, Any] = {
        "link1": _link_fields(values, "1"),
        "link2": _link_fields(values, "2"),
    }
    for key in ("theta1", "theta2", "tol"):
        if values.get(key) is not None:
            data[key] = values[key]
    if values.get("format") is not None:
        data["output_format"] = values["format"]

    sweep = values.get("sweep")
    if sweep is not None:
        data["sweep"] = parse_sweep(sweep) if isinstance(sweep, str) else sweep

    simulation = {k: values[k] for k in SIMULATION_KEYS if values.get(k) is not None}
    if "thresholds" in simulation:
        simulation["thresholds"] = parse_thresholds(simulation["thresholds"])
    data["simulation"] = simulation

    try:
        return Scenario(**data)
    except ValidationError as e:
        error = e.errors()[0]
        raise ConfigurationException(_flat_key(error["loc"]), error["msg"]) from e
