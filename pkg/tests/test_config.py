"""Config file parsing, validation, and the canonical echo."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from saddlesim.config import (SimConfig, apply_overrides, echo_config,
                              parse_config, snapshot_schedule, step_count)
from saddlesim.errors import ConfigError
from saddlesim.grid import DomainVariant


def test_empty_text_gives_defaults():
    assert parse_config("") == SimConfig()


def test_parse_basic_keys():
    cfg = parse_config("re = 2500\nnr=32 # inline comment\n\nswirl = false\n")
    assert cfg.re == 2500.0
    assert cfg.nr == 32
    assert cfg.swirl is False


def test_parse_variant_and_times():
    cfg = parse_config("variant = centered\nsnapshot_times = 0.1, 0.5\n")
    assert cfg.variant is DomainVariant.CENTERED
    assert cfg.snapshot_times == (0.1, 0.5)


def test_unknown_key_names_key_and_line():
    with pytest.raises(ConfigError) as err:
        parse_config("re = 100\nbogus = 3\n")
    assert err.value.key == "bogus"
    assert err.value.line == 2


def test_duplicate_key_rejected():
    with pytest.raises(ConfigError) as err:
        parse_config("re = 100\nre = 200\n")
    assert err.value.key == "re"
    assert err.value.line == 2


def test_bad_value_reports_line():
    with pytest.raises(ConfigError) as err:
        parse_config("tau = fast\n")
    assert err.value.key == "tau"
    assert err.value.line == 1


def test_line_without_equals_rejected():
    with pytest.raises(ConfigError):
        parse_config("just some words\n")


def test_nan_rejected():
    with pytest.raises(ConfigError):
        parse_config("re = nan\n")


def test_echo_round_trip_defaults():
    cfg = SimConfig()
    assert parse_config(echo_config(cfg)) == cfg


def test_echo_is_byte_stable():
    cfg = SimConfig(re=12345.678, snapshot_times=(0.25,))
    assert echo_config(cfg) == echo_config(parse_config(echo_config(cfg)))


def test_apply_overrides():
    cfg = apply_overrides(SimConfig(), ["re=750", "swirl=false"])
    assert cfg.re == 750.0 and cfg.swirl is False


def test_apply_overrides_rejects_unknown():
    with pytest.raises(ConfigError):
        apply_overrides(SimConfig(), ["nope=1"])


def test_apply_overrides_rejects_malformed():
    with pytest.raises(ConfigError):
        apply_overrides(SimConfig(), ["re"])


@pytest.mark.parametrize("key,value", [
    ("re", 0.0), ("tau", -1.0), ("lin_tol", 2.0), ("lin_maxit", 0),
    ("record_every", 0), ("r_core", 0.0), ("r_core", 1.5),
    ("t_end", -0.1), ("h_rule", "global"), ("xi_floor", -1e-9),
])
def test_validation_rejects(key, value):
    with pytest.raises(ConfigError):
        SimConfig(**{key: value})


def test_step_count_floors():
    assert step_count(SimConfig(t_end=1.0, tau=0.25)) == 4
    assert step_count(SimConfig(t_end=0.9, tau=0.25)) == 3
    assert step_count(SimConfig(t_end=0.0, tau=0.25)) == 0


def test_snapshot_schedule_lands_and_drops():
    cfg = SimConfig(t_end=1.0, tau=0.25, snapshot_times=(0.5, 0.51, 2.0))
    # 0.5 lands on step 2; 0.51 would collide there and loses; 2.0 is out
    assert snapshot_schedule(cfg) == {2: 0.5}


config_strategy = st.builds(
    SimConfig,
    re=st.floats(1.0, 1e6),
    tau=st.floats(1e-4, 0.5),
    nr=st.integers(2, 200),
    nz=st.integers(2, 200),
    grading=st.floats(0.5, 1.0),
    swirl=st.booleans(),
    t_end=st.floats(0.0, 10.0),
    variant=st.sampled_from(list(DomainVariant)),
    snapshot_times=st.lists(st.floats(0.0, 10.0), max_size=3).map(tuple),
)


@given(config_strategy)
@settings(max_examples=80, deadline=None)
def test_echo_round_trip_property(cfg):
    """parse(echo(cfg)) reproduces cfg exactly, including float bits."""
    assert parse_config(echo_config(cfg)) == cfg
