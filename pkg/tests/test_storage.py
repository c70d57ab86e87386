import numpy as np
import pytest

from tiered import VARIANTS, ConfigError, ContractError, TieredVec, make_storage
from tiered.config import TierConfig, field_width

LAZY = ("original", "opt-original", "lazy", "packed-lazy")


@pytest.mark.parametrize("variant", VARIANTS)
def test_offsets_round_trip(variant):
    st = make_storage(variant, "4-4-4")
    for d, idx, x in [(0, 0, 17), (1, 3, 5), (2, 0, 3)]:
        if d == 2:
            st.ensure_leaf(idx)
        st.write_offset((d, idx), x)
        assert st.read_offset((d, idx)) == x
    with pytest.raises(ConfigError):
        st.write_offset((1, 0), 16)
    with pytest.raises(ConfigError):
        st.read_offset((3, 0))


@pytest.mark.parametrize("variant", VARIANTS)
def test_elements_and_blocks(variant):
    st = make_storage(variant, "4-4-4")
    lazy = variant in LAZY
    assert st.is_allocated(5) is (not lazy)
    st.ensure_leaf(5)
    assert st.is_allocated(5)
    st.write_element(5, 2, 99)
    assert st.read_element(5, 2) == 99
    st.release_leaf(5)
    assert st.is_allocated(5) is (not lazy)
    assert st.allocated_blocks() == (0 if lazy else 16)
    with pytest.raises(ConfigError):
        st.read_element(16, 0)


@pytest.mark.parametrize("variant", LAZY)
def test_release_live_leaf_is_contract_error(variant):
    tv = TieredVec("4-4-4", variant)
    tv.extend(np.arange(6))
    with pytest.raises(ContractError):
        tv.storage.release_leaf(0)


@pytest.mark.parametrize("variant", VARIANTS)
def test_counters_reset(variant):
    tv = TieredVec("4-4-4", variant)
    tv.extend(np.arange(10))
    tv.reset_counters()
    tv.get(3)
    c = tv.counters()
    assert c.element_reads == 1
    assert c.total == c.reads
    tv.reset_counters()
    assert tv.counters().total == 0


def test_packed_implicit_offset_bits_formula():
    cfg = TierConfig.parse("64-64-64-512")
    st = make_storage("packed-implicit", cfg)
    expected = 1 * 27 + 64 * 21 + 4096 * 15 + 262144 * 9
    assert st.offset_bits() == expected
    assert expected == sum(s * field_width(c) for s, c in zip(cfg.level_sizes, cfg.capacities))


def test_packed_lazy_rejects_wide_leaves():
    with pytest.raises(ConfigError):
        make_storage("packed-lazy", (2, 1 << 17))


def test_unknown_variant():
    with pytest.raises(ConfigError):
        make_storage("heap", "4-4")


def test_lazy_storage_grows_with_content():
    tv = TieredVec("8-8-64", "lazy")
    empty = tv.bytes_used()
    tv.extend(np.arange(1000))
    assert tv.storage.allocated_blocks() == 16
    assert tv.bytes_used() - empty == 16 * 64 * 8


def test_implicit_bytes_close_to_elements():
    tv = TieredVec("16-16-64", "implicit", dtype=np.int32)
    elems = tv.capacity() * 4
    assert elems <= tv.bytes_used() <= 1.15 * elems
