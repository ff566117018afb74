import pytest

from maintscore.config import (
    DEFAULT_THRESHOLDS,
    ConfigError,
    Guideline,
    GuidelineConfig,
    Level,
    RunConfig,
    load_config,
    parse_guidelines,
)


def test_level_of_uses_inclusive_upper_bounds():
    cfg = GuidelineConfig((15, 30, 60), DEFAULT_THRESHOLDS)
    assert [cfg.level_of(v) for v in (15, 16, 30, 31, 60, 61)] == [
        Level.LOW, Level.MEDIUM, Level.MEDIUM, Level.HIGH, Level.HIGH, Level.VERY_HIGH,
    ]


@pytest.mark.parametrize("thresholds", [(0.2, 0.3, 0.1), (0.4, 0.2, 0.0), (1.0, 0.2, 0.1), (0.4, 0.4, 0.1)])
def test_thresholds_must_decrease_inside_unit_interval(thresholds):
    with pytest.raises(ConfigError):
        GuidelineConfig((1, 2, 3), thresholds)


def test_load_config_file_and_overrides(tmp_path, monkeypatch):
    p = tmp_path / "run.ini"
    p.write_text(
        "[run]\nseed = 11\naggregate = mean\nguidelines = UnitSize, Duplication\ncache_dir = ~/c\n"
        "[UnitSize]\nboundaries = 10, 20, 40\nthresholds = 0.5 0.3 0.1\n",
        encoding="utf-8",
    )
    cfg = load_config(p, seed=None, workers=3)
    assert cfg.seed == 11 and cfg.workers == 3 and cfg.aggregate == "mean"
    assert cfg.selected == (Guideline.UNIT_SIZE, Guideline.DUPLICATION)
    assert cfg.guidelines[Guideline.UNIT_SIZE].boundaries == (10, 20, 40)
    assert load_config(p, seed=5).seed == 5


def test_cache_dir_env(monkeypatch, tmp_path):
    monkeypatch.setenv("MAINTSCORE_CACHE", str(tmp_path))
    assert RunConfig().cache_dir == tmp_path


@pytest.mark.parametrize("kw", [{"aggregate": "max"}, {"workers": 0}, {"language": "cobol"}, {"alpha": 1.5}])
def test_run_config_validation(kw):
    with pytest.raises(ConfigError):
        RunConfig(**kw)


def test_bad_config_values(tmp_path):
    p = tmp_path / "bad.ini"
    p.write_text("[run]\nseed = seven\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(p)
    with pytest.raises(ConfigError):
        parse_guidelines("UnitSize,Bogus")
