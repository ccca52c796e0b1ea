#!/usr/bin/env python3
"""
Genera las tablas de las figuras de capacidad efectiva en un directorio.

Crea:
- curves.csv: E_C(θ) del enlace H-D y E_B(θ − θ₁) del S-H normalizadas, con θ* al final
- theta2_sweep.csv: r_e frente a θ₂ para SNR₂ ∈ {5, 10, 15} dB
- snr2_sweep.csv: θ'₂ frente a SNR₂

Uso:
    python scripts/reproduce_figures.py [--output-dir DIR] [--points N]

Los parámetros son los de por defecto del CLI (T = 2 ms, B = 10⁵ Hz, θ₁ = 0.01,
SNR₁ = 0 dB, Rayleigh de media 1).
"""

import argparse
import os
import sys
from pathlib import Path

import pandas as pd

# Añadir el directorio raíz al path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from relaycap.core.exceptions import RelayCapException
from relaycap.domain.scenarios.schemas import build_scenario
from relaycap.domain.scenarios.service import curves_table, sweep_table

SNR2_LEVELS_DB = (5.0, 10.0, 15.0)


class Colors:
    OKCYAN = "\033[96m"
    OKGREEN = "\033[92m"
    FAIL = "\033[91m"
    ENDC = "\033[0m"
    BOLD = "\033[1m"


def print_step(message: str):
    print(f"{Colors.OKCYAN}{Colors.BOLD}▸ {message}{Colors.ENDC}")


def print_success(message: str):
    print(f"{Colors.OKGREEN}✓ {message}{Colors.ENDC}")


def write_curves(output_dir: Path, points: int):
    print_step("Curvas E_C / E_B")
    scenario = build_scenario({"sweep": f"theta:0.01:1:{points}:log"})
    table, theta_star = curves_table(scenario)
    path = output_dir / "curves.csv"
    with open(path, "w", encoding="utf-8") as f:
        table.to_csv(f, index=False, float_format="%.10g", lineterminator="\n")
        f.write(f"# theta_star={theta_star:.10g}\n")
    print_success(f"{path} (theta_star = {theta_star:.6g})")


def write_theta2_sweep(output_dir: Path, points: int):
    print_step("r_e frente a θ₂")
    tables = []
    for snr2_db in SNR2_LEVELS_DB:
        scenario = build_scenario({"snr2_db": snr2_db, "sweep": f"theta2:1e-4:1:{points}:log"})
        tables.append(sweep_table(scenario).assign(snr2_db=snr2_db))
    path = output_dir / "theta2_sweep.csv"
    pd.concat(tables, ignore_index=True).to_csv(
        path, index=False, float_format="%.10g", lineterminator="\n"
    )
    print_success(str(path))


def write_snr2_sweep(output_dir: Path, points: int):
    print_step("θ'₂ frente a SNR₂")
    scenario = build_scenario({"sweep": f"snr2_db:1:20:{points}:lin"})
    path = output_dir / "snr2_sweep.csv"
    sweep_table(scenario).to_csv(path, index=False, float_format="%.10g", lineterminator="\n")
    print_success(str(path))


def main():
    parser = argparse.ArgumentParser(description="Tablas de las figuras de capacidad efectiva")
    parser.add_argument("--output-dir", default="figures", help="Directorio de salida")
    parser.add_argument("--points", type=int, default=50, help="Puntos por barrido")
    args = parser.parse_args()

    output_dir = Path(args.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    try:
        write_curves(output_dir, max(args.points, 2))
        write_theta2_sweep(output_dir, args.points)
        write_snr2_sweep(output_dir, args.points)
    except RelayCapException as e:
        print(f"{Colors.FAIL}✗ {e.message}{Colors.ENDC}")
        sys.exit(e.exit_code)


if __name__ == "__main__":
    main()
