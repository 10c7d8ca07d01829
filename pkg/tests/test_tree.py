import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from threadkd.tree import (DUMMY, InvalidTargetError, OrderingError,
                           ThreadedAvlTree)


def build_sequential(values):
    """Insert single-dim keys in the given order using oracle-found hints."""
    t = ThreadedAvlTree()
    oracle = []
    handles = {}
    import bisect
    for v in values:
        i = bisect.bisect_left(oracle, v)
        pos = handles[oracle[i - 1]] if i > 0 else DUMMY
        handles[v] = t.insert_after(pos, (v,))
        oracle.insert(i, v)
    return t, handles, oracle


def height(t, h=None):
    if h is None:
        h = t.root
    if h == DUMMY:
        return 0
    n = t.node(h)
    hl = height(t, n.left) if not n.lthread else 0
    hr = height(t, n.right) if not n.rthread else 0
    return 1 + max(hl, hr)


def test_empty_tree():
    t = ThreadedAvlTree()
    assert t.size == 0
    assert t.root == DUMMY
    assert t.first() == DUMMY
    assert t.last() == DUMMY
    assert list(t.keys()) == []
    assert t.validate() == []


def test_single_insert_via_dummy():
    t = ThreadedAvlTree()
    h = t.insert_after(DUMMY, (5,))
    assert t.root == h
    assert t.first() == h and t.last() == h
    assert t.in_succ(h) == DUMMY and t.in_pred(h) == DUMMY
    assert t.validate() == []


def test_three_ascending_rotates_to_middle():
    # appending 2, 6, 8 forces one left rotation; 6 ends up on top
    t = ThreadedAvlTree()
    a = t.insert_after(DUMMY, (2,))
    b = t.insert_after(a, (6,))
    t.insert_after(b, (8,))
    assert t.node(t.root).key == (6,)
    assert [k[0] for k in t.keys()] == [2, 6, 8]
    assert t.rotations == 1
    assert t.validate() == []


def test_seven_ascending_is_perfect():
    t, handles, _ = build_sequential(range(1, 8))
    assert t.node(t.root).key == (4,)
    assert height(t) == 3
    for v in range(1, 8):
        assert t.node(handles[v]).balance == 0
    assert t.validate() == []


def test_insert_new_first():
    t, handles, _ = build_sequential([10, 20, 30])
    h = t.insert_after(DUMMY, (5,))
    assert t.first() == h
    assert [k[0] for k in t.keys()] == [5, 10, 20, 30]
    assert t.validate() == []


def test_insert_between_via_hint():
    t, handles, _ = build_sequential([10, 30])
    h = t.insert_after(handles[10], (20,))
    assert t.in_pred(h) == handles[10]
    assert t.in_succ(h) == handles[30]
    assert t.validate() == []


def test_insert_rejects_misordered_key():
    t, handles, _ = build_sequential([10, 20, 30])
    with pytest.raises(OrderingError):
        t.insert_after(handles[10], (30,))   # collides past successor
    with pytest.raises(OrderingError):
        t.insert_after(handles[20], (20,))   # equal to position
    with pytest.raises(OrderingError):
        t.insert_after(handles[30], (5,))
    with pytest.raises(OrderingError):
        t.insert_after(DUMMY, (15,))         # not below current first
    assert t.validate() == []


def test_insert_rejects_dead_handle():
    t, handles, _ = build_sequential([1, 2, 3])
    t.delete_node(handles[2])
    with pytest.raises(InvalidTargetError):
        t.insert_after(handles[2], (2,))


def test_delete_leaf():
    t, handles, _ = build_sequential([10, 20, 30])
    t.delete_node(handles[10])
    assert [k[0] for k in t.keys()] == [20, 30]
    assert t.validate() == []


def test_delete_single_child_node():
    t, handles, _ = build_sequential([10, 20, 30, 5])
    # 10 holds only the left child 5
    t.delete_node(handles[10])
    assert [k[0] for k in t.keys()] == [5, 20, 30]
    assert t.validate() == []


def test_delete_two_children_successor_is_right_child():
    t, handles, _ = build_sequential([20, 10, 30])
    t.delete_node(handles[20])
    assert [k[0] for k in t.keys()] == [10, 30]
    assert t.validate() == []


def test_delete_two_children_deep_successor():
    t, handles, _ = build_sequential([50, 20, 70, 10, 30, 60, 80, 55])
    t.delete_node(handles[50])   # successor 55 sits below 60
    assert [k[0] for k in t.keys()] == [10, 20, 30, 55, 60, 70, 80]
    assert t.validate() == []


def test_delete_keeps_other_handles_alive():
    """Removing a two-children node must not move any surviving node."""
    t, handles, _ = build_sequential(range(1, 21))
    victim = t.node(t.root).key[0]
    t.delete_node(handles[victim])
    for v in range(1, 21):
        if v == victim:
            continue
        assert t.node(handles[v]).key == (v,)
    assert t.validate() == []


def test_delete_down_to_empty():
    t, handles, _ = build_sequential([3, 1, 4, 1.5, 9, 2, 6])
    for v in [3, 1, 4, 1.5, 9, 2, 6]:
        t.delete_node(handles[v])
        assert t.validate() == []
    assert t.size == 0
    assert t.root == DUMMY


def test_delete_rejects_dummy_and_dead():
    t, handles, _ = build_sequential([1, 2])
    with pytest.raises(InvalidTargetError):
        t.delete_node(DUMMY)
    t.delete_node(handles[1])
    with pytest.raises(InvalidTargetError):
        t.delete_node(handles[1])


def test_thread_navigation_round_trip():
    t, handles, oracle = build_sequential(random.Random(7).sample(range(10000), 1000))
    for h in t.inorder():
        s = t.in_succ(h)
        if s != DUMMY:
            assert t.in_pred(s) == h
    assert [k[0] for k in t.keys()] == oracle
    assert t.validate() == []


def test_validate_catches_corrupt_thread():
    t, handles, _ = build_sequential([10, 20, 30, 40, 50])
    n = t.node(handles[10])
    assert n.rthread
    n.right = handles[40]   # should thread to 20
    assert any("thread" in v for v in t.validate())


def test_validate_catches_corrupt_balance():
    t, handles, _ = build_sequential([10, 20, 30, 40, 50])
    t.node(t.root).balance += 1
    assert t.validate() != []


def test_validate_catches_order_violation():
    t, handles, _ = build_sequential([10, 20, 30])
    t.node(handles[10]).key = (25,)
    assert any("bound" in v or "ordering" in v for v in t.validate())


def test_fuzz_against_sorted_list():
    import bisect
    rng = random.Random(20240817)
    t = ThreadedAvlTree()
    oracle = []
    handles = {}
    for step in range(4000):
        if oracle and rng.random() < 0.4:
            v = rng.choice(oracle)
            t.delete_node(handles.pop(v))
            oracle.remove(v)
        else:
            v = rng.randrange(10**6)
            if v in handles:
                continue
            i = bisect.bisect_left(oracle, v)
            pos = handles[oracle[i - 1]] if i > 0 else DUMMY
            handles[v] = t.insert_after(pos, (v,))
            oracle.insert(i, v)
        if step % 97 == 0:
            assert t.validate() == [], f"step {step}"
            assert [k[0] for k in t.keys()] == oracle
    assert t.validate() == []
    assert [k[0] for k in t.keys()] == oracle


@given(st.lists(st.integers(0, 10**6), unique=True, max_size=120))
@settings(max_examples=60, deadline=None)
def test_arbitrary_arrival_order_stays_valid(values):
    t, handles, oracle = build_sequential(values)
    assert [k[0] for k in t.keys()] == oracle
    assert t.validate() == []


@given(st.lists(st.integers(0, 500), unique=True, min_size=1, max_size=80),
       st.randoms(use_true_random=False))
@settings(max_examples=60, deadline=None)
def test_deleting_random_subset_stays_valid(values, rnd):
    t, handles, oracle = build_sequential(values)
    doomed = [v for v in values if rnd.random() < 0.5]
    for v in doomed:
        t.delete_node(handles[v])
    survivors = sorted(set(values) - set(doomed))
    assert [k[0] for k in t.keys()] == survivors
    assert t.validate() == []


def test_arena_reuses_freed_cells():
    t, handles, _ = build_sequential(range(100))
    cells_before = len(t.nodes)
    for v in range(50):
        t.delete_node(handles[v])
    for v in range(200, 250):
        t.insert_after(t.last(), (v,))
    assert len(t.nodes) == cells_before
    assert t.validate() == []
