"""Orthogonal window reporting over a KdPointIndex, with visit counters.

A query window is a sequence of k inclusive (lo, hi) coordinate pairs.
The walk starts from level 0's first node and descends: every level-i
candidate's cross link leads to a group one level down, where the group
walk either starts at the group minimum (when it already clears lo),
jumps via the group trie's successor lookup, or stops cold when the
minimum exceeds hi.  Candidates on the last level are the answer, in
lexicographic order.

Counting rules, chosen so the documented bounds hold exactly: every
node whose range test runs counts one tree visit (candidates plus the
probe that ends a walk); reading a group minimum through its cross link
is part of the link follow, not a visit; trie costs are tracked
separately per lookup.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .index import KdPointIndex
from .stats import VisitStats
from .tree import DUMMY


class WindowError(ValueError):
    """Window is malformed: wrong arity, lo > hi, or out-of-range bound."""


def check_window(index: KdPointIndex,
                 window: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
    w = [(lo, hi) for lo, hi in window]
    if len(w) != index.k:
        raise WindowError(f"window has {len(w)} ranges, expected {index.k}")
    for j, (lo, hi) in enumerate(w):
        if lo > hi:
            raise WindowError(f"range {j}: lo {lo} > hi {hi}")
        if not (0 <= lo and hi < index.bound):
            raise WindowError(f"range {j}: [{lo}, {hi}] outside universe "
                              f"[0, {index.bound})")
    return w


def level_candidates(index: KdPointIndex, level: int, group_first: int,
                     lo: int, hi: int,
                     stats: Optional[VisitStats] = None) -> list[int]:
    """Handles in group_first's group whose level coordinate is in [lo, hi].

    Walks inorder threads from the chosen start node; ends on the first
    node past hi or outside the group, which costs one probe visit.  A
    group whose minimum exceeds hi is rejected on that probe alone,
    without opening the trie.
    """
    tree = index.trees[level]
    first = tree.node(group_first)
    prefix = first.key[:level]
    out: list[int] = []
    m = first.key[level]
    if m > hi:
        if stats is not None:
            stats.tree_nodes_visited += 1
        return out
    if m >= lo:
        start = group_first
    else:
        e = first.trie.succ_geq(lo, stats)
        if e is None:
            return out
        start = e.value
    h = start
    while h != DUMMY:
        n = tree.node(h)
        if stats is not None:
            stats.tree_nodes_visited += 1
        if n.key[level] > hi or n.key[:level] != prefix:
            break
        out.append(h)
        h = tree.in_succ(h, stats)
    return out


def window_query(index: KdPointIndex, window: Sequence[Sequence[int]],
                 stats: Optional[VisitStats] = None
                 ) -> tuple[list[tuple], VisitStats]:
    """All stored points inside the window, plus the traversal counters."""
    w = check_window(index, window)
    st = stats if stats is not None else VisitStats()
    st.per_level_candidates = [0] * index.k
    results: list[tuple] = []
    if index.size == 0:
        return results, st
    k = index.k

    def walk(level: int, group_first: int) -> None:
        lo, hi = w[level]
        cands = level_candidates(index, level, group_first, lo, hi, st)
        st.per_level_candidates[level] += len(cands)
        tree = index.trees[level]
        if level == k - 1:
            for h in cands:
                results.append(tree.node(h).key)
        else:
            for h in cands:
                st.cross_links_followed += 1
                walk(level + 1, tree.node(h).cross_link)

    walk(0, index.trees[0].first())
    return results, st
