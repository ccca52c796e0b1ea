"""
Tests de integración del script de figuras.

Lanzan scripts/reproduce_figures.py como proceso aparte desde un directorio
cualquiera, igual que un usuario sin el paquete instalado.
"""

import os
import subprocess
import sys
from pathlib import Path

import pandas as pd
import pytest

SCRIPT = Path(__file__).resolve().parents[2] / "scripts" / "reproduce_figures.py"


@pytest.mark.integration
class TestReproduceFigures:
    """Tests de scripts/reproduce_figures.py"""

    def test_runs_outside_repo_root(self, tmp_path):
        """Sin PYTHONPATH ni cwd en la raíz escribe las tres tablas"""
        # Configurar
        env = {k: v for k, v in os.environ.items() if k != "PYTHONPATH"}
        output_dir = tmp_path / "figures"

        # Ejecutar
        completed = subprocess.run(
            [sys.executable, str(SCRIPT), "--output-dir", str(output_dir), "--points", "4"],
            cwd=tmp_path,
            env=env,
            capture_output=True,
            text=True,
            timeout=600,
        )

        # Verificar
        assert completed.returncode == 0, completed.stderr
        for name in ("curves.csv", "theta2_sweep.csv", "snr2_sweep.csv"):
            assert (output_dir / name).exists()
        sweep = pd.read_csv(output_dir / "theta2_sweep.csv")
        assert set(sweep["snr2_db"]) == {5.0, 10.0, 15.0}
        assert (sweep["r_e"] >= 0).all()
