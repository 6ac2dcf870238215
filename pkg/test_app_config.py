import pytest

from src.app_config import DEFAULT_CONFIG_PATH, load_config


def test_defaults():
    config = load_config()
    assert config["report"]["schema_version"] == "1"
    assert config["output"]["format"] == "text"
    assert config["sweep"]["jobs"] == 1
    assert config["certify"]["max_d"] == 100
    assert config["logging"]["level"] == "WARNING"


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError, match="Missing config file"):
        load_config(str(tmp_path / "nope.yaml"))


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("HASSETT_JOBS", "4")
    monkeypatch.setenv("HASSETT_LOG_LEVEL", "debug")
    config = load_config()
    assert config["sweep"]["jobs"] == 4
    assert config["logging"]["level"] == "DEBUG"


def test_invalid_override(monkeypatch):
    monkeypatch.setenv("HASSETT_JOBS", "many")
    with pytest.raises(ValueError, match="HASSETT_JOBS"):
        load_config()


def test_config_path_from_environment(monkeypatch, tmp_path):
    path = tmp_path / "custom.yaml"
    path.write_text(DEFAULT_CONFIG_PATH.read_text().replace('format: "text"', 'format: "json"'))
    monkeypatch.setenv("HASSETT_CONFIG", str(path))
    assert load_config()["output"]["format"] == "json"


def test_invalid_log_level(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("logging:\n  level: LOUD\n")
    with pytest.raises(ValueError, match="logging.level"):
        load_config(str(path))


def test_partial_config_keeps_defaults(tmp_path):
    path = tmp_path / "partial.yaml"
    path.write_text("logging:\n  level: INFO\n")
    config = load_config(str(path))
    assert config["logging"]["level"] == "INFO"
    assert config["output"]["format"] == "text"
    assert config["sweep"]["max_d"] == 100
    assert config["certify"]["output_dir"] == "data/certificates"


def test_partial_section_keeps_sibling_keys(tmp_path):
    path = tmp_path / "partial.yaml"
    path.write_text("sweep:\n  jobs: 3\n")
    config = load_config(str(path))
    assert config["sweep"]["jobs"] == 3
    assert config["sweep"]["max_d"] == 100


@pytest.mark.parametrize("text", ["- a\n- b\n", "sweep: 4\n"])
def test_non_mapping_config(tmp_path, text):
    path = tmp_path / "bad.yaml"
    path.write_text(text)
    with pytest.raises(ValueError):
        load_config(str(path))
