import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tiered import VARIANTS, CapacityError, StructureError, TieredVec

CONFIGS = ("4-4-4", "3-5-2")


def filled(cfg="4-4-4", variant="implicit", n=20, **kw):
    tv = TieredVec(cfg, variant, **kw)
    tv.extend(np.arange(n))
    return tv


def test_empty():
    tv = TieredVec("4-4-4")
    assert len(tv) == 0
    assert tv.capacity() == 64
    assert tv.to_list() == []
    assert tv.validate() is None
    with pytest.raises(IndexError):
        tv.get(0)
    with pytest.raises(IndexError):
        tv.remove(0)


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("cfg", CONFIGS)
def test_basic_ops(variant, cfg):
    tv = TieredVec(cfg, variant, debug=True)
    tv.push_back(1)
    tv.push_back(2)
    tv.push_front(0)
    tv.insert(3, 3)
    tv.insert(1, 9)
    assert tv.to_list() == [0, 9, 1, 2, 3]
    assert tv.remove(1) == 9
    assert tv.set(0, 7) == 0
    assert tv[0] == 7
    tv[0] = 0
    assert list(tv.get_range(1, 3)) == [1, 2, 3]
    assert list(tv) == [0, 1, 2, 3]


@pytest.mark.parametrize("variant", VARIANTS)
def test_fill_to_capacity_and_drain(variant):
    tv = TieredVec("3-5-2", variant, debug=True)
    for k in range(tv.capacity()):
        tv.insert(k // 2, k)
    with pytest.raises(CapacityError):
        tv.push_back(0)
    with pytest.raises(CapacityError):
        tv.insert(0, 0)
    ref = tv.to_list()
    while ref:
        assert tv.remove(len(ref) // 3) == ref.pop(len(ref) // 3)
    assert tv.storage.allocated_blocks() == (0 if variant in ("original", "opt-original", "lazy", "packed-lazy")
                                             else 15)


def test_extend_capacity_error():
    tv = TieredVec("2-2")
    with pytest.raises(CapacityError):
        tv.extend(range(5))


def test_range_errors():
    tv = filled(n=10)
    for i, m in [(-1, 1), (5, 6), (0, -1)]:
        with pytest.raises(IndexError):
            tv.get_range(i, m)
    assert tv.get_range(10, 0).size == 0


def test_shift_low_level():
    tv = filled(n=10)
    assert tv.shift(99, 2, 3) == 5
    assert tv.to_list() == [0, 1, 99, 2, 3, 4, 6, 7, 8, 9]
    assert tv.shift(42, 4, 0) == 3
    with pytest.raises(CapacityError):
        tv.shift(0, 60, 4)


def test_successor():
    tv = TieredVec("4-4-4")
    tv.extend([10, 20, 30])
    assert tv.successor(15) == 1
    assert tv.successor(10) == 0
    assert tv.successor(31) is None
    assert TieredVec("4-4").successor(0) is None


def test_successor_matches_linear_scan():
    rng = np.random.default_rng(3)
    vals = np.sort(rng.integers(0, 5000, 10**5))
    tv = TieredVec("64-64-32")
    tv.extend(vals)
    for x in rng.integers(-10, 5010, 1000):
        hit = np.nonzero(vals >= x)[0]
        assert tv.successor(x) == (int(hit[0]) if hit.size else None)


def test_fault_injection_detected():
    tv = filled(n=40)
    assert tv.validate() is None
    tv.poke_offset(1, 0, 99)
    assert "offset" in tv.validate()


def test_debug_mode_raises_on_corruption():
    tv = filled(n=40, debug=True)
    tv.poke_offset(0, 0, 1000)
    with pytest.raises(StructureError):
        tv.push_back(1)


def test_scramble_empty_is_noop():
    tv = TieredVec("4-4-4")
    tv.scramble(1)
    assert len(tv) == 0 and tv.validate() is None


@pytest.mark.parametrize("variant", VARIANTS)
def test_scramble_keeps_structure_valid(variant):
    tv = filled(variant=variant, n=64)
    tv.scramble(7)
    assert tv.validate() is None
    assert sorted(tv.to_list()) == list(range(64))
    assert tv.to_list() != list(range(64))
    assert list(tv.get_range(0, 64)) == [tv.get(i) for i in range(64)]


def test_locate_and_peek():
    tv = filled(n=20)
    leaf, slot = tv.locate(5)
    assert (leaf, slot) == (1, 1)
    assert tv.peek_slot(5) == 5
    assert TieredVec("4-4-4", "lazy").peek_slot(0) is None


def test_dump_shows_tree():
    text = filled(n=5).dump()
    assert text.splitlines()[0] == "4-4-4 implicit n=5"
    assert "| 0 1 2 3" in text
    assert "| 4 . . ." in text


def test_counting_probes_of_single_get():
    tv = filled("64-64-64-512", "implicit", n=5000)
    tv.reset_counters()
    tv.get(4321)
    assert tv.counters().total == 4


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 1000), max_size=50), st.data())
def test_insert_postcondition(prefix, data):
    tv = TieredVec("4-4-4")
    tv.extend(prefix)
    i = data.draw(st.integers(0, len(prefix)))
    x = data.draw(st.integers(-5, 5))
    tv.insert(i, x)
    after = tv.to_list()
    assert after[i] == x
    assert after[:i] == prefix[:i]
    assert after[i + 1:] == prefix[i:]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(["ins", "del", "front", "back"]), st.integers(0, 10**6)),
                max_size=80),
       st.sampled_from(VARIANTS), st.sampled_from(CONFIGS))
def test_random_ops_match_list(ops, variant, cfg):
    tv = TieredVec(cfg, variant, debug=True)
    ref: list[int] = []
    for kind, v in ops:
        if kind == "del":
            if ref:
                p = v % len(ref)
                assert tv.remove(p) == ref.pop(p)
        elif len(ref) < tv.capacity():
            if kind == "ins":
                p = v % (len(ref) + 1)
                tv.insert(p, v)
                ref.insert(p, v)
            elif kind == "front":
                tv.push_front(v)
                ref.insert(0, v)
            else:
                tv.push_back(v)
                ref.append(v)
    assert tv.to_list() == ref
    for i in range(len(ref)):
        for m in range(len(ref) - i + 1):
            assert list(tv.get_range(i, m)) == ref[i:i + m]
