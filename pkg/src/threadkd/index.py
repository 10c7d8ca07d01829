"""Multi-level index over k-dimensional integer points.

Level i (0-based) is a threaded balanced tree whose keys are the
distinct (i+1)-coordinate prefixes of the stored points, ordered
lexicographically; the last level holds the points themselves.  Nodes
sharing an i-prefix sit contiguously in level i's inorder sequence and
form a group.  Each level-i node (i < k-1) carries a cross link to its
group's first node one level down: the member with the smallest next
coordinate.  Every group-first node (and the inorder-first node of
level 0) carries a successor-threaded trie mapping the group members'
level coordinate to their tree handles.

The tries replace key search entirely: membership walks k tries,
insertion derives each level's position hint from trie successors and
neighbouring groups' cross links, so the per-level structural work does
not grow with the number of stored points.  Deletion walks bottom-up,
pruning prefix nodes whose group emptied and re-aiming cross links and
tries when a group minimum goes away.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Sequence

from .stats import VisitStats
from .tree import DUMMY, ThreadedAvlTree
from .trie import ThreadedTrie


class KdPointIndex:
    """Dynamic set of distinct k-tuples with windowed retrieval support.

    Coordinates are ints in [0, bound); bound must fit the trie shape,
    bound <= radix ** width.  Single writer, concurrent readers only
    while no mutation runs.
    """

    def __init__(self, k: int, bound: int, radix: int = 16,
                 width: Optional[int] = None):
        if k < 1:
            raise ValueError("k must be >= 1")
        if bound < 1:
            raise ValueError("bound must be >= 1")
        if width is None:
            width = 1
            while radix ** width < bound:
                width += 1
        if radix ** width < bound:
            raise ValueError(f"radix**width = {radix ** width} cannot cover "
                             f"bound {bound}")
        self.k = k
        self.bound = bound
        self.radix = radix
        self.width = width
        self.trees = [ThreadedAvlTree() for _ in range(k)]
        self.size = 0

    @classmethod
    def from_points(cls, k: int, bound: int, points: Iterable[Sequence[int]],
                    radix: int = 16, width: Optional[int] = None) -> "KdPointIndex":
        idx = cls(k, bound, radix, width)
        for p in points:
            idx.insert(p)
        return idx

    def __len__(self) -> int:
        return self.size

    def points(self) -> Iterator[tuple]:
        """Stored points in lexicographic order."""
        return self.trees[self.k - 1].keys()

    def _check_point(self, point: Sequence[int]) -> tuple:
        p = tuple(point)
        if len(p) != self.k:
            raise ValueError(f"point has {len(p)} coordinates, expected {self.k}")
        for c in p:
            if not isinstance(c, int):
                raise ValueError(f"coordinate {c!r} is not an integer")
            if not 0 <= c < self.bound:
                raise ValueError(f"coordinate {c} outside [0, {self.bound})")
        return p

    # -- lookups ---------------------------------------------------------

    def _level_trie(self, i: int, path: list[int]) -> Optional[ThreadedTrie]:
        """Trie governing the group that p[:i+1] belongs to, given the
        handles of the shallower prefixes."""
        tree = self.trees[i]
        if i == 0:
            if tree.size == 0:
                return None
            return tree.node(tree.first()).trie
        g = self.trees[i - 1].node(path[i - 1]).cross_link
        return tree.node(g).trie

    def _find_path(self, p: tuple,
                   stats: Optional[VisitStats] = None) -> Optional[list[int]]:
        """Handles of every prefix of p, or None where the walk first misses."""
        if self.size == 0:
            return None
        path: list[int] = []
        for i in range(self.k):
            trie = self._level_trie(i, path)
            e = trie.find(p[i], stats)
            if e is None:
                return None
            path.append(e.value)
        return path

    def contains(self, point: Sequence[int]) -> bool:
        p = self._check_point(point)
        return self._find_path(p) is not None

    def __contains__(self, point) -> bool:
        return self.contains(point)

    # -- insertion -------------------------------------------------------

    def insert(self, point: Sequence[int],
               stats: Optional[VisitStats] = None) -> bool:
        """Add a point; returns False (and changes nothing) if present."""
        p = self._check_point(point)
        k = self.k

        # depth of the longest prefix already present
        path: list[int] = []
        jstar = 0
        if self.size > 0:
            for i in range(k):
                e = self._level_trie(i, path).find(p[i], stats)
                if e is None:
                    break
                path.append(e.value)
                jstar = i + 1
        if jstar == k:
            return False

        for i in range(jstar, k):
            key = p[:i + 1]
            tree = self.trees[i]
            if i > jstar:
                # brand-new group: it slots in right before the group of
                # the fresh level-(i-1) node's inorder successor
                above = self.trees[i - 1]
                s = above.in_succ(path[i - 1], stats)
                if s == DUMMY:
                    pos = tree.last(stats)
                else:
                    pos = tree.in_pred(above.node(s).cross_link, stats)
                h = tree.insert_after(pos, key, stats)
                trie = ThreadedTrie(self.radix, self.width)
                tree.node(h).trie = trie
                trie.insert(p[i], h, stats)
            elif i == 0 and tree.size == 0:
                h = tree.insert_after(DUMMY, key, stats)
                trie = ThreadedTrie(self.radix, self.width)
                tree.node(h).trie = trie
                trie.insert(p[i], h, stats)
            else:
                # joins an existing group
                if i == 0:
                    g = tree.first(stats)
                else:
                    g = self.trees[i - 1].node(path[i - 1]).cross_link
                trie = tree.node(g).trie
                e = trie.succ_geq(p[i], stats)
                if e is not None:
                    pos = tree.in_pred(e.value, stats)
                else:
                    # past the group maximum: squeeze in before the next
                    # group over, or at the very end
                    if i == 0:
                        pos = tree.last(stats)
                    else:
                        above = self.trees[i - 1]
                        s = above.in_succ(path[i - 1], stats)
                        if s == DUMMY:
                            pos = tree.last(stats)
                        else:
                            pos = tree.in_pred(above.node(s).cross_link, stats)
                h = tree.insert_after(pos, key, stats)
                if p[i] < tree.node(g).key[i]:
                    # new group minimum: the trie moves here, and the
                    # parent's cross link must follow
                    tree.node(h).trie = trie
                    tree.node(g).trie = None
                    if i > 0:
                        self.trees[i - 1].node(path[i - 1]).cross_link = h
                trie.insert(p[i], h, stats)
            if i > jstar:
                self.trees[i - 1].node(path[i - 1]).cross_link = h
            path.append(h)
        self.size += 1
        return True

    # -- deletion --------------------------------------------------------

    def delete(self, point: Sequence[int],
               stats: Optional[VisitStats] = None) -> bool:
        """Remove a point; returns False if it was not stored."""
        p = self._check_point(point)
        path = self._find_path(p, stats)
        if path is None:
            return False
        k = self.k
        for i in range(k - 1, -1, -1):
            tree = self.trees[i]
            h = path[i]
            if i == 0:
                g = tree.first(stats)
            else:
                g = self.trees[i - 1].node(path[i - 1]).cross_link
            trie = tree.node(g).trie
            if trie.size > 1:
                trie.delete(p[i], stats)
                if g == h:
                    # group minimum leaves: trie and cross link move to
                    # the next member up
                    nf = tree.in_succ(h, stats)
                    tree.node(nf).trie = trie
                    tree.node(h).trie = None
                    if i > 0:
                        self.trees[i - 1].node(path[i - 1]).cross_link = nf
                tree.delete_node(h, stats)
                break
            # sole member: the whole group goes, so the prefix one level
            # up must go too
            tree.delete_node(h, stats)
        self.size -= 1
        return True

    # -- verification ----------------------------------------------------

    def validate(self) -> list[str]:
        """Check every cross-level invariant; returns violation strings."""
        out: list[str] = []
        k = self.k
        for i, tree in enumerate(self.trees):
            for v in tree.validate():
                out.append(f"level {i}: {v}")
        if out:
            return out

        level_keys = [list(t.keys()) for t in self.trees]
        points = level_keys[k - 1]
        if len(points) != self.size:
            out.append(f"size {self.size} but {len(points)} points stored")
        for i in range(k):
            expect = sorted({p[:i + 1] for p in points})
            if level_keys[i] != expect:
                out.append(f"level {i}: keys differ from the prefix set "
                           f"({len(level_keys[i])} vs {len(expect)})")
        for i in range(k - 1):
            if not self.trees[i].size <= self.trees[i + 1].size:
                out.append(f"level {i}: larger than level {i + 1}")
        for i in range(k):
            for key in level_keys[i]:
                for c in key:
                    if not 0 <= c < self.bound:
                        out.append(f"level {i}: coordinate {c} out of range")
        if out:
            return out

        # per level: group layout, tries, cross links
        handle_of = []
        for i in range(k):
            handle_of.append({self.trees[i].node(h).key: h
                              for h in self.trees[i].inorder()})
        for i in range(k):
            tree = self.trees[i]
            groups: dict[tuple, list[int]] = {}
            for h in tree.inorder():
                groups.setdefault(tree.node(h).key[:i], []).append(h)
            firsts = {members[0] for members in groups.values()}
            for prefix, members in groups.items():
                gf = members[0]
                trie = tree.node(gf).trie
                if trie is None:
                    out.append(f"level {i}: group {prefix} first node lacks a trie")
                    continue
                for v in trie.validate():
                    out.append(f"level {i}: group {prefix} trie: {v}")
                want = [(tree.node(h).key[i], h) for h in members]
                got = list(trie.items())
                if got != want:
                    out.append(f"level {i}: group {prefix} trie maps "
                               f"{got} instead of {want}")
            for h in tree.inorder():
                n = tree.node(h)
                if h not in firsts and n.trie is not None:
                    out.append(f"level {i}: non-first node {n.key} carries a trie")
                if i < k - 1:
                    cl = n.cross_link
                    below = self.trees[i + 1]
                    if cl is None:
                        out.append(f"level {i}: node {n.key} lacks a cross link")
                        continue
                    target_key = below.node(cl).key
                    if target_key[:i + 1] != n.key:
                        out.append(f"level {i}: cross link of {n.key} targets "
                                   f"{target_key}")
                        continue
                    pred = below.in_pred(cl)
                    if pred != DUMMY and below.node(pred).key[:i + 1] == n.key:
                        out.append(f"level {i}: cross link of {n.key} misses the "
                                   f"group minimum {target_key}")
                elif n.cross_link is not None:
                    out.append(f"last level: node {n.key} has a cross link")
        return out
