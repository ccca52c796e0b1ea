"""relaycap - CLI.

Subcomandos:
- compute: capacidad efectiva de un punto (θ₁, θ₂) con todos los exponentes.
- curves: curvas E_C / E_B normalizadas y su cruce θ*.
- sweep: r_e frente a θ₂, o θ'₂ frente a SNR₂.
- simulate: validación Monte Carlo de las pendientes de desbordamiento.

Las tablas van a stdout (CSV o JSON lines); los logs y errores a stderr.
"""

import argparse
import json
import math
import sys
from typing import Any, Dict, List, Optional, TextIO

import numpy as np
import pandas as pd

from relaycap.config.settings import settings
from relaycap.core.exceptions import RelayCapException
from relaycap.core.logger import logger
from relaycap.domain.fading.schemas import format_fading
from relaycap.domain.scenarios.models import Scenario
from relaycap.domain.scenarios.schemas import SCENARIO_KEYS, build_scenario, load_scenario_file
from relaycap.domain.scenarios.service import (
    compute_record,
    curves_table,
    simulate_tables,
    sweep_table,
)

FLOAT_FORMAT = "%.10g"


def _json_safe(table: pd.DataFrame) -> pd.DataFrame:
    """±∞ como texto: JSON no tiene infinitos y pandas los escribiría como null."""
    return table.replace([np.inf, -np.inf], ["inf", "-inf"])


def _emit(table: pd.DataFrame, output_format: str, out: TextIO):
    if output_format == "json":
        text = _json_safe(table).to_json(orient="records", lines=True, double_precision=15)
        out.write(text if text.endswith("\n") else text + "\n")
    else:
        table.to_csv(out, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def _format_value(value: float) -> str:
    return FLOAT_FORMAT % value


def cmd_compute(scenario: Scenario, out: TextIO):
    """Un registro con r_e (bits/bloque y bits/s/Hz), la rama y los exponentes."""
    _emit(pd.DataFrame([compute_record(scenario)]), scenario.output_format, out)


def cmd_curves(scenario: Scenario, out: TextIO):
    """Tabla theta, E_C_norm, E_B_norm con θ* al final."""
    table, theta_star = curves_table(scenario)
    _emit(table, scenario.output_format, out)
    if scenario.output_format == "json":
        footer = {"theta_star": theta_star if math.isfinite(theta_star) else "inf"}
        out.write(json.dumps(footer) + "\n")
    else:
        out.write(f"# theta_star={_format_value(theta_star)}\n")


def cmd_sweep(scenario: Scenario, out: TextIO):
    """Barrido en θ₂ o en SNR₂."""
    _emit(sweep_table(scenario), scenario.output_format, out)


def cmd_simulate(scenario: Scenario, out: TextIO):
    """Tabla de probabilidades de desbordamiento seguida del resumen por cola.

    En CSV el resumen es un segundo bloque separado por una línea vacía; en JSON
    cada fila del resumen lleva "record": "summary".
    """
    table, summary = simulate_tables(scenario)
    _emit(table, scenario.output_format, out)
    if scenario.output_format == "json":
        _emit(summary.assign(record="summary"), "json", out)
    else:
        out.write("\n")
        _emit(summary, "csv", out)


COMMANDS = {
    "compute": cmd_compute,
    "curves": cmd_curves,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
}


def build_parser() -> argparse.ArgumentParser:
    """Parser con los flags comunes a todos los subcomandos."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", help="Archivo JSON con claves iguales a los flags")
    common.add_argument("--theta1", type=float, help="Exponente QoS de la fuente (1/bits)")
    common.add_argument("--theta2", type=float, help="Exponente QoS del relay (1/bits)")
    common.add_argument("--snr1-db", type=float, help="SNR del enlace S-H en dB")
    common.add_argument("--snr2-db", type=float, help="SNR del enlace H-D en dB")
    common.add_argument("--block-s", type=float, help="Duración del bloque T en segundos")
    common.add_argument("--bandwidth-hz", type=float, help="Ancho de banda B en Hz")
    common.add_argument("--fading1", help="rayleigh:<mean> | constant:<z0> | discrete:z@p,...")
    common.add_argument("--fading2", help="Igual que --fading1, para el enlace H-D")
    common.add_argument("--sweep", help="VAR:LO:HI:N:log|lin (VAR = theta2, snr2_db o theta)")
    common.add_argument("--rate-frac", type=float, help="R como fracción de r_e")
    common.add_argument("--blocks", type=int, help="Bloques por réplica")
    common.add_argument("--seed", type=int, help="Semilla de la primera réplica")
    common.add_argument("--thresholds", help="Umbrales en bits separados por comas")
    common.add_argument("--warmup", type=int, help="Bloques de warmup")
    common.add_argument("--replications", type=int, help="Réplicas independientes")
    common.add_argument(
        "--single-queue", action="store_true", default=None, help="Desactiva el enlace H-D"
    )
    common.add_argument("--format", choices=("csv", "json"), help="Formato de salida")
    common.add_argument("--tol", type=float, help="Tolerancia relativa de las raíces")
    common.add_argument("--verbose", action="store_true", help="Logs de nivel DEBUG")

    parser = argparse.ArgumentParser(
        prog="relaycap",
        description="Capacidad efectiva de un enlace de dos saltos con QoS estadística",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, command in COMMANDS.items():
        subparsers.add_parser(name, parents=[common], help=command.__doc__.splitlines()[0])
    return parser


def _flag_values(args: argparse.Namespace) -> Dict[str, Any]:
    return {k: v for k, v in vars(args).items() if k in SCENARIO_KEYS and v is not None}


def main(argv: Optional[List[str]] = None) -> int:
    """Punto de entrada; devuelve el código de salida."""
    args = build_parser().parse_args(argv)
    if args.verbose:
        logger.set_level("DEBUG")

    root_tol = settings.root_tol
    try:
        values = load_scenario_file(args.scenario) if args.scenario else {}
        values.update(_flag_values(args))
        scenario = build_scenario(values)
        logger.debug(
            "Escenario",
            command=args.command,
            fading1=format_fading(scenario.link1.fading),
            fading2=format_fading(scenario.link2.fading),
        )
        if scenario.tol is not None:
            settings.root_tol = scenario.tol
        COMMANDS[args.command](scenario, sys.stdout)
    except RelayCapException as e:
        logger.error(e.message, command=args.command, details=e.details)
        print(f"error: {e.message}", file=sys.stderr)
        return e.exit_code
    finally:
        settings.root_tol = root_tol
    return 0
