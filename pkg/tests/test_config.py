from pathlib import Path

import pytest

from ssr_ent.config import Settings, Tolerances, default_tolerances, load_config
from ssr_ent.errors import ConfigError

REPO_ROOT = Path(__file__).resolve().parent.parent


def test_defaults_when_file_missing(tmp_path):
    settings = load_config(tmp_path / "missing.yaml")
    assert settings == Settings()
    assert settings.tolerances.majorization == 1e-9


def test_shipped_config_matches_defaults():
    assert load_config(REPO_ROOT / "config" / "ssr_ent.yaml") == Settings()


def test_partial_file_is_merged(tmp_path):
    path = tmp_path / "partial.yaml"
    path.write_text(
        "tolerances:\n  chi: 1.0e-6\nsearch:\n  max_workers: 4\nlogging:\n  level: debug\n"
    )
    settings = load_config(path)
    assert settings.tolerances.chi == 1e-6
    assert settings.tolerances.weight == 1e-9
    assert settings.max_workers == 4
    assert settings.grid_step == 0.05
    assert settings.log_level == "DEBUG"


def test_config_env_path(tmp_path, monkeypatch):
    path = tmp_path / "env.yaml"
    path.write_text("analysis:\n  ssr: number\n  keep_party: B\n")
    monkeypatch.setenv("SSR_ENT_CONFIG", str(path))
    settings = load_config()
    assert settings.ssr == "number"
    assert settings.keep_party == "B"


def test_tolerance_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("SSR_ENT_TOLERANCE", "1e-6")
    assert load_config(tmp_path / "missing.yaml").tolerances.majorization == 1e-6
    assert default_tolerances().majorization == 1e-6
    assert default_tolerances().chi == Tolerances().chi


@pytest.mark.parametrize("value", ["tight", "0", "-1e-9"])
def test_invalid_tolerance_env(tmp_path, monkeypatch, value):
    monkeypatch.setenv("SSR_ENT_TOLERANCE", value)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.yaml")


def test_invalid_yaml(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("search: [1, 2\n")
    with pytest.raises(ConfigError, match="invalid YAML"):
        load_config(path)


def test_top_level_must_be_mapping(tmp_path):
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigError):
        load_config(path)


def test_bad_value_type(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("search:\n  grid_step: fine\n")
    with pytest.raises(ConfigError):
        load_config(path)


def test_unknown_tolerance_keys_are_ignored():
    assert Tolerances.from_mapping({"chi": 1e-3, "colour": 5}).chi == 1e-3
