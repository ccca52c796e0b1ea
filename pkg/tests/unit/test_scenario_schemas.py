"""
Tests unitarios para la entrada de escenarios (archivo + flags).
"""

import json

import numpy as np
import pytest

from relaycap.core.exceptions import ConfigurationException
from relaycap.domain.fading.models import ConstantFading, RayleighFading
from relaycap.domain.scenarios.models import SweepSpec
from relaycap.domain.scenarios.schemas import (
    build_scenario,
    load_scenario_file,
    parse_sweep,
    parse_thresholds,
)


@pytest.mark.unit
class TestParseSweep:
    """Tests de VAR:LO:HI:N:log|lin"""

    def test_full_form(self):
        """Cinco campos"""
        assert parse_sweep("theta2:1e-4:1:50:log") == {
            "variable": "theta2",
            "lo": 1e-4,
            "hi": 1.0,
            "points": 50,
            "spacing": "log",
        }

    def test_spacing_is_optional(self):
        """Sin espaciado se usa el del modelo"""
        assert "spacing" not in parse_sweep("snr2_db:0:20:5")

    @pytest.mark.edge_case
    def test_wrong_field_count(self):
        """Número de campos incorrecto → clave sweep"""
        with pytest.raises(ConfigurationException) as exc_info:
            parse_sweep("theta2:1")

        assert exc_info.value.key == "sweep"

    @pytest.mark.edge_case
    def test_non_numeric(self):
        """Valores no numéricos → clave sweep"""
        with pytest.raises(ConfigurationException):
            parse_sweep("theta2:a:b:5:log")


@pytest.mark.unit
class TestSweepSpec:
    """Tests de la malla del barrido"""

    def test_log_grid(self):
        """Log-espaciado incluye ambos extremos"""
        grid = SweepSpec(variable="theta2", lo=1e-3, hi=1e-1, points=3).grid()

        np.testing.assert_allclose(grid, [1e-3, 1e-2, 1e-1])

    def test_linear_grid(self):
        """Lin-espaciado"""
        grid = SweepSpec(variable="snr2_db", lo=0, hi=20, points=5, spacing="lin").grid()

        np.testing.assert_allclose(grid, [0, 5, 10, 15, 20])

    def test_single_point(self):
        """Un punto degenerado"""
        assert list(SweepSpec(variable="theta2", lo=0.02, hi=0.02, points=1).grid()) == [0.02]

    @pytest.mark.edge_case
    def test_descending_range(self):
        """El rango debe ser ascendente"""
        with pytest.raises(ValueError):
            SweepSpec(variable="theta2", lo=1.0, hi=0.1, points=5)

    @pytest.mark.edge_case
    def test_log_needs_positive_lo(self):
        """Espaciado log con lo <= 0 es inválido"""
        with pytest.raises(ValueError):
            SweepSpec(variable="snr2_db", lo=0.0, hi=10.0, points=5, spacing="log")


@pytest.mark.unit
class TestBuildScenario:
    """Tests de la construcción del escenario"""

    def test_defaults(self):
        """Sin claves → parámetros de referencia"""
        scenario = build_scenario({})

        assert scenario.theta1 == 0.01
        assert scenario.theta2 == 0.01
        assert scenario.link1.snr_db == 0.0
        assert scenario.link2.snr_db == 10.0
        assert scenario.link1.block_s == 0.002
        assert scenario.link1.bandwidth_hz == 1e5
        assert scenario.link1.fading == RayleighFading(mean=1.0)
        assert scenario.simulation.rate_frac == 0.999
        assert scenario.output_format == "csv"

    def test_shared_block_parameters(self):
        """block_s y bandwidth_hz valen para los dos enlaces"""
        scenario = build_scenario({"block_s": 0.001, "bandwidth_hz": 2e5})

        assert scenario.link1.to_link().tb == pytest.approx(200.0)
        assert scenario.link2.to_link().tb == pytest.approx(200.0)

    def test_fading_strings(self):
        """fading1/fading2 se parsean"""
        scenario = build_scenario({"fading1": "constant:1", "fading2": "rayleigh:2"})

        assert scenario.link1.fading == ConstantFading(z0=1.0)
        assert scenario.link2.fading == RayleighFading(mean=2.0)

    def test_db_conversion(self):
        """snr = 10^(dB/10)"""
        link = build_scenario({"snr2_db": 20.0}).link2.to_link()

        assert link.snr == pytest.approx(100.0, rel=1e-12)

    def test_simulation_block(self):
        """Las claves de simulación van al bloque de simulación"""
        scenario = build_scenario(
            {"blocks": 1000, "seed": 3, "thresholds": "10,20,40", "single_queue": True}
        )

        assert scenario.simulation.blocks == 1000
        assert scenario.simulation.seed == 3
        assert scenario.simulation.thresholds == (10.0, 20.0, 40.0)
        assert scenario.simulation.single_queue is True

    def test_sweep_string(self):
        """El barrido se acepta como texto"""
        scenario = build_scenario({"sweep": "theta2:1e-3:1e-1:3:log"})

        assert scenario.sweep.variable == "theta2"
        assert scenario.sweep.points == 3

    @pytest.mark.edge_case
    @pytest.mark.parametrize(
        "values, key",
        [
            ({"theta1": -1.0}, "theta1"),
            ({"snr1_db": "abc"}, "snr1_db"),
            ({"block_s": 0.0}, "block_s"),
            ({"fading2": "gauss:1"}, "fading2"),
            ({"blocks": 0}, "blocks"),
            ({"blocks": 100, "warmup": 200}, "warmup"),
            ({"thresholds": "5,1"}, "thresholds"),
            ({"format": "xml"}, "format"),
            ({"sweep": "theta2:1:0.1:5:log"}, "sweep"),
            ({"unknown_key": 1}, "unknown_key"),
        ],
    )
    def test_invalid_values_name_the_key(self, values, key):
        """Cada error nombra la clave plana responsable"""
        with pytest.raises(ConfigurationException) as exc_info:
            build_scenario(values)

        assert exc_info.value.key == key
        assert exc_info.value.exit_code == 2


@pytest.mark.unit
class TestScenarioFile:
    """Tests de lectura de archivos de escenario"""

    def test_load(self, tmp_path):
        """Un objeto JSON plano"""
        path = tmp_path / "scenario.json"
        path.write_text(json.dumps({"theta2": 0.02, "snr2_db": 15}))

        assert load_scenario_file(path) == {"theta2": 0.02, "snr2_db": 15}

    @pytest.mark.edge_case
    def test_missing_file(self, tmp_path):
        """Archivo inexistente → clave scenario"""
        with pytest.raises(ConfigurationException) as exc_info:
            load_scenario_file(tmp_path / "missing.json")

        assert exc_info.value.key == "scenario"

    @pytest.mark.edge_case
    def test_invalid_json(self, tmp_path):
        """JSON mal formado"""
        path = tmp_path / "scenario.json"
        path.write_text("{theta2: ")

        with pytest.raises(ConfigurationException):
            load_scenario_file(path)

    @pytest.mark.edge_case
    def test_not_an_object(self, tmp_path):
        """El JSON debe ser un objeto"""
        path = tmp_path / "scenario.json"
        path.write_text("[1, 2]")

        with pytest.raises(ConfigurationException):
            load_scenario_file(path)


@pytest.mark.unit
def test_parse_thresholds_list():
    """Umbrales desde una lista numérica"""
    assert parse_thresholds([1, 2.5]) == (1.0, 2.5)
