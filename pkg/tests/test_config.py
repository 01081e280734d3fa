import math

import numpy as np
import pytest

from anyonladder.config import (
    ConfigError,
    ExperimentConfig,
    parse_angle,
    parse_angle_list,
    parse_config_text,
    parse_grid,
)

COUNTS_MIN = {
    "kind": "counts_vs_jp",
    "model.L": "4",
    "model.N": "2",
    "grid.theta": "0,0.4pi",
    "grid.jp": "log:1e-3:0.1:3",
}


def test_parse_angle_spellings():
    assert parse_angle("0.4pi") == pytest.approx(0.4 * math.pi)
    assert parse_angle("pi") == math.pi
    assert parse_angle("-pi") == -math.pi
    assert parse_angle("PI") == math.pi
    assert parse_angle("-0.5pi") == pytest.approx(-0.5 * math.pi)
    assert parse_angle("2.5") == 2.5
    with pytest.raises(ConfigError) as err:
        parse_angle("xpi", "model.theta")
    assert err.value.field == "model.theta"


def test_parse_grid_forms():
    log = parse_grid("log:1e-3:1:4", "g")
    assert np.allclose(log, np.geomspace(1e-3, 1.0, 4))
    lin = parse_grid("linear:0:1:5", "g")
    assert np.allclose(lin, np.linspace(0.0, 1.0, 5))
    lst = parse_grid("0.1, 0.2,0.3", "g")
    assert np.allclose(lst, [0.1, 0.2, 0.3])
    assert parse_grid("0.5", "g").tolist() == [0.5]


@pytest.mark.parametrize(
    "bad",
    ["log:1:2", "log:1:2:0", "linear:2:1:5", "log:0:1:5", "", "0.2,0.1"],
)
def test_parse_grid_rejects(bad):
    with pytest.raises(ConfigError):
        parse_grid(bad, "g")


def test_parse_angle_list():
    vals = parse_angle_list("0, 0.4pi, pi", "grid.theta")
    assert vals == pytest.approx([0.0, 0.4 * math.pi, math.pi])
    with pytest.raises(ConfigError):
        parse_angle_list(" , ", "grid.theta")


def test_parse_config_text():
    text = """
    # experiment
    kind = counts_vs_jp
    model.L = 10   # rungs per leg
    model.N= 2
    """
    out = parse_config_text(text)
    assert out == {"kind": "counts_vs_jp", "model.L": "10", "model.N": "2"}
    with pytest.raises(ConfigError, match="line 1"):
        parse_config_text("just words")


def test_minimal_config_validates():
    cfg = ExperimentConfig.from_mapping(COUNTS_MIN)
    assert cfg.kind == "counts_vs_jp"
    assert cfg.theta_grid() == pytest.approx([0.0, 0.4 * math.pi])
    assert cfg.jp_grid().size == 3
    p = cfg.model_params()
    assert (p.L, p.N) == (4, 2)
    assert p.U == 16.0  # model defaults fill the gaps


def test_unknown_kind_and_key():
    with pytest.raises(ConfigError) as err:
        ExperimentConfig.from_mapping({**COUNTS_MIN, "kind": "mystery"})
    assert err.value.field == "kind"
    with pytest.raises(ConfigError) as err:
        ExperimentConfig.from_mapping({**COUNTS_MIN, "grid.zeta": "1"})
    assert err.value.field == "grid.zeta"


def test_missing_required_key():
    partial = {k: v for k, v in COUNTS_MIN.items() if k != "grid.jp"}
    with pytest.raises(ConfigError) as err:
        ExperimentConfig.from_mapping(partial)
    assert err.value.field == "grid.jp"
    assert "grid.jp" in str(err.value)


def test_model_errors_surface_at_validation():
    with pytest.raises(ConfigError) as err:
        ExperimentConfig.from_mapping({**COUNTS_MIN, "model.L": "0"})
    assert err.value.field == "model"


def test_quench_requirements_and_time_grid():
    raw = {
        "kind": "quench",
        "model.L": "4",
        "model.N": "2",
        "model.theta": "0.4pi",
        "quench.j_ini": "0.035",
        "quench.j_final": "0.045",
    }
    cfg = ExperimentConfig.from_mapping(raw)
    t = cfg.time_grid()
    assert t[0] == 0.0
    assert t.size == 201  # default 200-point log grid plus the prepended zero
    assert np.all(np.diff(t) > 0)
    with pytest.raises(ConfigError):
        ExperimentConfig.from_mapping({k: v for k, v in raw.items() if k != "quench.j_final"})
    cfg2 = ExperimentConfig.from_mapping({**raw, "time.grid": "0,1,2"})
    assert cfg2.time_grid().tolist() == [0.0, 1.0, 2.0]
    with pytest.raises(ConfigError, match="nonnegative"):
        ExperimentConfig.from_mapping({**raw, "time.grid": "linear:-1:1:3"}).time_grid()


def test_L_grid_ordering():
    raw = {
        "kind": "threshold_vs_L",
        "model.L": "4",
        "model.N": "2",
        "grid.theta": "0",
        "grid.L": "4,6,8",
        "grid.jp": "log:1e-3:0.2:5",
    }
    assert ExperimentConfig.from_mapping(raw).L_grid() == [4, 6, 8]
    for bad in ("8,6", "4,4,6"):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_mapping({**raw, "grid.L": bad})


def test_dos_extras():
    raw = {
        "kind": "im_dos",
        "model.L": "4",
        "model.N": "2",
        "model.theta": "0.4pi",
        "model.Jp": "0.045",
    }
    ExperimentConfig.from_mapping(raw)
    ExperimentConfig.from_mapping({**raw, "dos.bins": "11", "dos.range": "-0.1,0.1"})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_mapping({**raw, "dos.bins": "0"})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_mapping({**raw, "dos.range": "0.2,0.1"})


def test_canonical_ignores_order_and_spelling():
    a = ExperimentConfig.from_mapping(
        {
            "grid.jp": "log:1e-3:0.1:3",
            "model.N": "2",
            "kind": "counts_vs_jp",
            "model.L": "4",
            "grid.theta": "0,0.4pi",
            "model.theta": "0.4pi",
        }
    )
    b = ExperimentConfig.from_mapping(
        {
            "kind": "counts_vs_jp",
            "model.L": "04",
            "model.N": "2",
            "model.theta": repr(0.4 * math.pi),
            "grid.theta": f"0.0,{0.4 * math.pi!r}",
            "grid.jp": ",".join(repr(float(v)) for v in np.geomspace(1e-3, 0.1, 3)),
        }
    )
    assert a.canonical() == b.canonical()
    assert a.canonical() == sorted(a.canonical())


def test_canonical_distinguishes_substance():
    a = ExperimentConfig.from_mapping(COUNTS_MIN)
    b = ExperimentConfig.from_mapping({**COUNTS_MIN, "model.N": "3"})
    assert a.canonical() != b.canonical()
