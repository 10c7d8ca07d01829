import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from threadkd.index import KdPointIndex

FIVE = [(2, 2), (2, 6), (6, 2), (6, 6), (8, 10)]


def snapshot(idx):
    """Handle-free structural dump: keys, cross targets, trie contents."""
    out = []
    for i, tree in enumerate(idx.trees):
        level = []
        for h in tree.inorder():
            n = tree.node(h)
            cl = None
            if n.cross_link is not None:
                cl = idx.trees[i + 1].node(n.cross_link).key
            items = None
            if n.trie is not None:
                items = [(c, tree.node(hh).key) for c, hh in n.trie.items()]
            level.append((n.key, cl, items))
        out.append(level)
    return out


def test_empty_index():
    idx = KdPointIndex(2, 16)
    assert len(idx) == 0
    assert list(idx.points()) == []
    assert not idx.contains((3, 3))
    assert idx.validate() == []


def test_singleton_layout():
    idx = KdPointIndex(2, 16, radix=4, width=2)
    assert idx.insert((2, 2))
    assert [t.size for t in idx.trees] == [1, 1]
    t0, t1 = idx.trees
    h0 = t0.first()
    assert t0.node(h0).key == (2,)
    assert t1.node(t0.node(h0).cross_link).key == (2, 2)
    assert list(t0.node(h0).trie.keys()) == [2]
    assert list(t1.node(t1.first()).trie.keys()) == [2]
    assert idx.validate() == []


def test_five_point_layout():
    idx = KdPointIndex.from_points(2, 16, FIVE, radix=4, width=2)
    t0, t1 = idx.trees
    assert list(t0.keys()) == [(2,), (6,), (8,)]
    assert list(t1.keys()) == sorted(FIVE)
    targets = [t1.node(t0.node(h).cross_link).key for h in t0.inorder()]
    assert targets == [(2, 2), (6, 2), (8, 10)]
    assert list(t0.node(t0.first()).trie.keys()) == [2, 6, 8]
    assert idx.validate() == []


def test_min_rule_on_insert():
    idx = KdPointIndex(2, 16)
    idx.insert((2, 6))
    idx.insert((2, 2))
    t0, t1 = idx.trees
    h = t0.first()
    assert t1.node(t0.node(h).cross_link).key == (2, 2)
    assert idx.validate() == []


def test_reinsert_is_noop():
    idx = KdPointIndex.from_points(2, 16, FIVE)
    before = snapshot(idx)
    assert not idx.insert((6, 6))
    assert snapshot(idx) == before
    assert len(idx) == 5
    assert idx.validate() == []


def test_contains():
    idx = KdPointIndex.from_points(2, 16, FIVE)
    assert idx.contains((6, 6))
    assert (6, 6) in idx
    assert not idx.contains((6, 7))
    assert not idx.contains((3, 2))


def test_delete_prunes_prefix():
    idx = KdPointIndex.from_points(2, 16, FIVE)
    assert idx.delete((8, 10))
    t0 = idx.trees[0]
    assert list(t0.keys()) == [(2,), (6,)]
    assert list(t0.node(t0.first()).trie.keys()) == [2, 6]
    assert idx.validate() == []


def test_delete_group_min_retargets():
    idx = KdPointIndex.from_points(2, 16, FIVE)
    assert idx.delete((2, 2))
    t0, t1 = idx.trees
    assert t1.node(t0.node(t0.first()).cross_link).key == (2, 6)
    assert idx.validate() == []


def test_delete_only_point():
    idx = KdPointIndex.from_points(2, 16, [(3, 3)])
    assert idx.delete((3, 3))
    assert len(idx) == 0
    assert all(t.size == 0 for t in idx.trees)
    assert idx.validate() == []


def test_delete_absent():
    idx = KdPointIndex.from_points(2, 16, FIVE)
    before = snapshot(idx)
    assert not idx.delete((3, 3))
    assert snapshot(idx) == before
    assert len(idx) == 5


def test_insert_then_delete_restores_structure():
    idx = KdPointIndex.from_points(2, 16, FIVE)
    before = snapshot(idx)
    for p in [(0, 0), (2, 4), (6, 1), (8, 9), (15, 15)]:
        assert idx.insert(p)
        assert idx.delete(p)
        assert snapshot(idx) == before, p
        assert idx.validate() == []


def test_domain_errors():
    idx = KdPointIndex(2, 16)
    with pytest.raises(ValueError):
        idx.insert((1, 2, 3))
    with pytest.raises(ValueError):
        idx.insert((-1, 2))
    with pytest.raises(ValueError):
        idx.insert((16, 2))
    with pytest.raises(ValueError):
        idx.insert((1.5, 2))
    with pytest.raises(ValueError):
        KdPointIndex(2, 300, radix=16, width=1)
    with pytest.raises(ValueError):
        KdPointIndex(0, 16)


def test_validate_catches_bad_cross_link():
    idx = KdPointIndex.from_points(2, 16, FIVE)
    t0, t1 = idx.trees
    h = t0.first()
    # aim the first cross link at a non-minimum member of its group
    wrong = [hh for hh in t1.inorder() if t1.node(hh).key == (2, 6)][0]
    t0.node(h).cross_link = wrong
    assert any("minimum" in v for v in idx.validate())


def test_validate_catches_missing_trie():
    idx = KdPointIndex.from_points(2, 16, FIVE)
    t0 = idx.trees[0]
    t0.node(t0.first()).trie = None
    assert any("trie" in v for v in idx.validate())


def test_validate_catches_stale_trie_entry():
    idx = KdPointIndex.from_points(2, 16, FIVE)
    t0 = idx.trees[0]
    trie = t0.node(t0.first()).trie
    trie.delete(6)
    trie.insert(7, t0.first())
    assert idx.validate() != []


def test_one_dimensional_index():
    idx = KdPointIndex(1, 256)
    for v in [9, 3, 200, 3, 77]:
        idx.insert((v,))
    assert list(idx.points()) == [(3,), (9,), (77,), (200,)]
    assert idx.delete((9,))
    assert not idx.delete((9,))
    assert idx.validate() == []


@pytest.mark.parametrize("k,bound", [(1, 64), (2, 64), (3, 16)])
def test_fuzz_against_set_oracle(k, bound):
    rng = random.Random(1000 + k)
    idx = KdPointIndex(k, bound, radix=4)
    oracle = set()
    for step in range(1200):
        p = tuple(rng.randrange(bound) for _ in range(k))
        if oracle and rng.random() < 0.4:
            p = rng.choice(sorted(oracle)) if rng.random() < 0.8 else p
            assert idx.delete(p) == (p in oracle)
            oracle.discard(p)
        else:
            assert idx.insert(p) == (p not in oracle)
            oracle.add(p)
        if step % 50 == 0:
            assert idx.validate() == [], f"step {step}"
            assert list(idx.points()) == sorted(oracle)
    assert idx.validate() == []
    assert list(idx.points()) == sorted(oracle)


@given(st.lists(st.tuples(st.integers(0, 31), st.integers(0, 31),
                          st.integers(0, 31)), max_size=60))
@settings(max_examples=50, deadline=None)
def test_built_index_always_valid(pts):
    idx = KdPointIndex.from_points(3, 32, pts, radix=2, width=5)
    assert list(idx.points()) == sorted(set(pts))
    assert idx.validate() == []
