"""
Тесты для config/validators.py и config/settings.py - конфигурация запуска
"""
import json
from argparse import Namespace

import pytest

from config.settings import (
    RunConfig,
    default_run_config,
    load_run_config,
    merge_cli_overrides,
    parse_assignments,
    parse_grid,
    parse_run_config,
)
from config.validators import InputValidator
from utils.errors import ConfigError

pytestmark = [pytest.mark.unit, pytest.mark.cli]


class TestInputValidator:
    """Тесты валидации входных данных"""

    def test_validate_family_valid(self):
        assert InputValidator.validate_family("morse") == (True, None)

    def test_validate_family_unknown(self):
        is_valid, error = InputValidator.validate_family("scarf")
        assert is_valid is False
        assert "scarf" in error

    def test_validate_params_unknown_key(self):
        is_valid, error = InputValidator.validate_params("morse", {"A": 1.0, "beta": 0.5})
        assert is_valid is False
        assert "beta" in error

    def test_validate_params_negative_alpha(self):
        is_valid, _ = InputValidator.validate_params("morse", {"alpha": -1.0})
        assert is_valid is False

    def test_validate_params_beta_range(self):
        assert InputValidator.validate_params("ginocchio", {"beta": 1.0})[0] is True
        assert InputValidator.validate_params("ginocchio", {"beta": 0.0})[0] is False

    def test_validate_params_not_a_number(self):
        is_valid, error = InputValidator.validate_params("morse", {"A": "abc"})
        assert is_valid is False
        assert "числом" in error

    def test_validate_order(self):
        assert InputValidator.validate_order("morse", 3)[0] is True
        assert InputValidator.validate_order("morse", 4)[0] is False
        assert InputValidator.validate_order("morse", True)[0] is False

    def test_validate_levels(self):
        assert InputValidator.validate_levels("ginocchio", 4)[0] is True
        assert InputValidator.validate_levels("ginocchio", 0)[0] is False

    def test_validate_method_and_suite(self):
        assert InputValidator.validate_method("si")[0] is True
        assert InputValidator.validate_method("lu")[0] is False
        assert InputValidator.validate_suite("residuals")[0] is True
        assert InputValidator.validate_suite("everything")[0] is False

    def test_validate_grid(self):
        assert InputValidator.validate_grid((-1.0, 1.0, 11))[0] is True
        assert InputValidator.validate_grid((-1.0, 1.0, 11.5))[0] is False
        assert InputValidator.validate_grid((-1.0, float("inf"), 11))[0] is False
        assert InputValidator.validate_grid((-1.0, 1.0))[0] is False

    def test_validate_tolerances(self):
        assert InputValidator.validate_tolerances({"residual": 1e-5})[0] is True
        assert InputValidator.validate_tolerances({"residual": 0.0})[0] is False
        assert InputValidator.validate_tolerances({"speed": 1.0})[0] is False


class TestRunConfig:
    """Загрузка и слияние конфигурации"""

    def test_defaults_per_family(self):
        config = default_run_config("ginocchio")
        assert config.params == {"beta": 0.8, "upsilon": 4.0}
        assert config.levels == 4
        assert config.grid == (-2.5, 2.5, 101)

    def test_tolerance_overrides_merge(self):
        config = RunConfig(tolerance_overrides={"residual": 1e-4})
        assert config.tolerances["residual"] == 1e-4
        assert config.tolerances["equivalence"] == 1e-8

    def test_parse_full_document(self):
        config = parse_run_config(
            {
                "family": {"name": "morse", "params": {"A": 3.0}, "levels": 2},
                "order": 2,
                "method": "crum",
                "grid": {"min": -2.0, "max": 2.0, "count": 41, "node_scan": False},
                "tolerances": {"equivalence": 1e-9},
            }
        )
        assert config.params == {"A": 3.0, "alpha": 1.0}
        assert config.levels == 2
        assert config.grid == (-2.0, 2.0, 41)
        assert config.node_scan is False
        assert config.tolerances["equivalence"] == 1e-9

    def test_family_as_string(self):
        assert parse_run_config({"family": "ginocchio"}).family == "ginocchio"

    @pytest.mark.parametrize(
        "document",
        [
            {"colour": "red"},
            {"family": {"name": "morse", "shape": 1}},
            {"grid": {"min": 0.0, "step": 0.1}},
        ],
    )
    def test_unknown_keys_rejected(self, document):
        with pytest.raises(ConfigError):
            parse_run_config(document)

    def test_invalid_tolerance_rejected(self):
        with pytest.raises(ConfigError):
            parse_run_config({"tolerances": {"residual": -1.0}})

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"family": "morse", "order": 2}), encoding="utf-8")
        assert load_run_config(str(path)).order == 2

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_run_config(str(tmp_path / "absent.json"))

    def test_load_not_json(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text("family: morse", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_run_config(str(path))

    def test_as_dict_round_trip(self):
        document = default_run_config("morse").as_dict()
        del document["out"]
        assert parse_run_config(document).as_dict() == {**document, "out": None}


class TestCliOverrides:
    """Флаги важнее файла"""

    def test_parse_assignments(self):
        assert parse_assignments(["A=2.5", "alpha = 1"], "--param") == {"A": 2.5, "alpha": 1.0}
        with pytest.raises(ConfigError):
            parse_assignments(["A"], "--param")
        with pytest.raises(ConfigError):
            parse_assignments(["A=x"], "--param")

    def test_parse_grid(self):
        assert parse_grid("-3,3,121") == (-3.0, 3.0, 121)
        with pytest.raises(ConfigError):
            parse_grid("-3,3")

    def test_flags_override_file(self):
        base = parse_run_config({"family": "morse", "order": 1, "method": "crum"})
        args = Namespace(order=2, method="both", param=["A=3"], grid="-1,1,11", tol=["residual=1e-5"])
        config = merge_cli_overrides(base, args)
        assert config.order == 2
        assert config.method == "both"
        assert config.params["A"] == 3.0
        assert config.grid == (-1.0, 1.0, 11)
        assert config.tolerances["residual"] == 1e-5

    def test_family_switch_resets_params(self):
        base = parse_run_config({"family": "morse", "order": 2})
        config = merge_cli_overrides(base, Namespace(family="ginocchio"))
        assert config.family == "ginocchio"
        assert config.params == {"beta": 0.8, "upsilon": 4.0}
        assert config.order == 2

    def test_no_file(self):
        config = merge_cli_overrides(None, Namespace(family=None, no_node_scan=True, allow_unbound=True))
        assert config.family == "morse"
        assert config.node_scan is False
        assert config.allow_unbound is True
