import pytest

from tiered.config import (NodeCoord, TierConfig, as_config, capacity_at, child_coord, child_of, circ_range,
                           coord_of_slot, field_width, leaf_ordinal, node_count, offset_slot, wrap)
from tiered.errors import ConfigError


def test_parse_and_str_round_trip():
    cfg = TierConfig.parse("64-64-64-512")
    assert cfg.widths == (64, 64, 64, 512)
    assert str(cfg) == "64-64-64-512"
    assert as_config("4-4-4") == as_config((4, 4, 4)) == TierConfig((4, 4, 4))


def test_capacities():
    cfg = TierConfig.parse("64-64-64-512")
    assert cfg.capacity == 134_217_728
    assert cfg.capacities == (134_217_728, 2_097_152, 32_768, 512)
    assert capacity_at(cfg, 3) == 512
    assert cfg.tiers == 4 and cfg.leaf_width == 512


@pytest.mark.parametrize("text", [
    "32-32-32-4096", "32-32-64-2048", "32-64-64-1024", "64-64-64-512", "64-64-128-256", "64-128-128-128",
    "8192-16384", "512-512-512", "16-16-32-32-512", "8-8-16-16-16-512",
])
def test_sweep_configs_parse(text):
    assert TierConfig.parse(text).capacity == 1 << 27


@pytest.mark.parametrize("bad", ["", "64", "64-x-3", "1-4", "4--4"])
def test_bad_configs(bad):
    with pytest.raises(ConfigError):
        TierConfig.parse(bad)


def test_pow2_flag():
    assert TierConfig.parse("4-8").pow2
    assert not TierConfig.parse("3-5-2").pow2


def test_wrap_is_non_negative():
    assert wrap(3, 2, 4) == 1
    assert wrap(0, -1, 5) == 4
    assert wrap(0, -1, 8) == 7
    assert list(circ_range(3, 3, 4)) == [3, 0, 1]


def test_child_of_non_uniform():
    cfg = TierConfig((3, 5, 2))
    assert child_of(0, cfg, 0) == (0, 0)
    assert child_of(11, cfg, 0) == (1, 1)
    assert child_of(7, cfg, 1) == (3, 1)
    with pytest.raises(ConfigError):
        child_of(0, cfg, 2)


def test_level_numbering():
    cfg = TierConfig((2, 3, 4))
    assert cfg.level_sizes == (1, 2, 6)
    assert cfg.level_starts == (0, 1, 3)
    assert node_count(cfg) == 9
    assert child_coord(cfg, NodeCoord(1, 1), 2) == NodeCoord(2, 5)
    assert offset_slot(cfg, NodeCoord(2, 5)) == 8
    assert coord_of_slot(cfg, 8) == NodeCoord(2, 5)
    assert leaf_ordinal(cfg, NodeCoord(2, 5)) == 5
    with pytest.raises(ConfigError):
        child_coord(cfg, NodeCoord(2, 0), 0)
    with pytest.raises(ConfigError):
        offset_slot(cfg, NodeCoord(1, 2))


def test_field_width():
    assert field_width(2) == 1
    assert field_width(512) == 9
    assert field_width(513) == 10
    assert field_width(1) == 1
