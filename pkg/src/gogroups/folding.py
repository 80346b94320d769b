"""Stallings folding for finitely generated subgroups of a free group.

One audited implementation backs membership, injectivity testing and
cogenerator search for every homomorphism whose codomain is free.  The
graph is built as a wedge of labeled cycles (one per subgroup generator
word) and folded; the fold history is kept so that a membership path can
be lifted back to the wedge, which rewrites the member as a word in the
original subgroup generators.

Words over a free group of rank n are tuples of nonzero ints: +i is the
i-th letter (1-based), -i its inverse, with no xx^-1 adjacency.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass


def free_reduce(word):
    out = []
    for s in word:
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def free_mul(a, b):
    return free_reduce(tuple(a) + tuple(b))


def free_inv(a):
    return tuple(-s for s in reversed(a))


class _UndoDSU:
    """Union-find over ints with an undo journal (no path compression)."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n
        self.journal = []

    def find(self, x):
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            self.journal.append(None)
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.journal.append(rb)
        return ra

    def undo(self):
        rb = self.journal.pop()
        if rb is not None:
            self.parent[rb] = rb
            # size bookkeeping is only used for balancing; stale values are fine


@dataclass(frozen=True)
class _Fold:
    kept: int        # surviving edge id
    dropped: int     # merged-away edge id
    shared: str      # "origin" or "target"
    v_kept: int      # free endpoint of kept edge before the fold
    v_dropped: int   # free endpoint of dropped edge before the fold


class FoldedSubgroup:
    """Folded graph of the subgroup generated by ``image_words`` inside a
    free group of rank ``ambient_rank``."""

    BASE = 0

    def __init__(self, ambient_rank, image_words):
        self.ambient_rank = ambient_rank
        self.image_words = [free_reduce(w) for w in image_words]
        # edge tables, indexed by edge id
        self._origin = []
        self._target = []
        self._letter = []
        # designated edge per nonempty generator cycle: (edge id, +1/-1)
        self._designated = {}
        self._gen_of_edge = {}
        n_vertices = 1 + sum(max(len(w) - 1, 0) for w in self.image_words if w)
        self._dsu = _UndoDSU(n_vertices)
        self._alive = set()
        self._folds = []
        next_vertex = 1
        for gi, w in enumerate(self.image_words):
            if not w:
                continue
            cycle_vertices = [self.BASE]
            for _ in range(len(w) - 1):
                cycle_vertices.append(next_vertex)
                next_vertex += 1
            cycle_vertices.append(self.BASE)
            for j, s in enumerate(w):
                a, b = cycle_vertices[j], cycle_vertices[j + 1]
                if s > 0:
                    eid = self._new_edge(a, b, s)
                    direction = 1
                else:
                    eid = self._new_edge(b, a, -s)
                    direction = -1
                if j == len(w) - 1:
                    self._designated[eid] = (gi, direction)
        self._fold_all()
        self._index_adjacency()

    # -- construction internals ------------------------------------------

    def _new_edge(self, origin, target, letter):
        eid = len(self._origin)
        self._origin.append(origin)
        self._target.append(target)
        self._letter.append(letter)
        self._alive.add(eid)
        return eid

    def _fold_all(self):
        changed = True
        while changed:
            changed = False
            by_origin = {}
            by_target = {}
            for eid in sorted(self._alive):
                o = self._dsu.find(self._origin[eid])
                t = self._dsu.find(self._target[eid])
                letter = self._letter[eid]
                key = (o, letter)
                if key in by_origin:
                    self._apply_fold(by_origin[key], eid, "origin")
                    changed = True
                    break
                by_origin[key] = eid
                key = (t, letter)
                if key in by_target:
                    self._apply_fold(by_target[key], eid, "target")
                    changed = True
                    break
                by_target[key] = eid

    def _apply_fold(self, kept, dropped, shared):
        if shared == "origin":
            v1 = self._dsu.find(self._target[kept])
            v2 = self._dsu.find(self._target[dropped])
        else:
            v1 = self._dsu.find(self._origin[kept])
            v2 = self._dsu.find(self._origin[dropped])
        self._dsu.union(v1, v2)
        self._alive.discard(dropped)
        self._folds.append(_Fold(kept, dropped, shared, v1, v2))

    def _index_adjacency(self):
        self._out = {}
        self._in = {}
        self._classes = set()
        for eid in sorted(self._alive):
            o = self._dsu.find(self._origin[eid])
            t = self._dsu.find(self._target[eid])
            letter = self._letter[eid]
            assert (o, letter) not in self._out, "graph not folded"
            assert (t, letter) not in self._in, "graph not folded"
            self._out[(o, letter)] = eid
            self._in[(t, letter)] = eid
            self._classes.update((o, t))
        if not self._classes:
            self._classes = {self.BASE}
        self._base_class = self._dsu.find(self.BASE)

    # -- queries -----------------------------------------------------------

    def rank(self) -> int:
        """Rank of the subgroup: E - V + 1 of the (connected) folded graph."""
        if not self._alive:
            return 0
        return len(self._alive) - len(self._classes) + 1

    def read(self, word):
        """Follow ``word`` from the base.

        Returns (ok, closes, path) where path is a list of (edge id, +-1)
        traversals; ok is False when some letter has no edge to follow.
        """
        v = self._base_class
        path = []
        for s in free_reduce(word):
            if s > 0:
                eid = self._out.get((v, s))
                if eid is None:
                    return False, False, path
                path.append((eid, 1))
                v = self._dsu.find(self._target[eid])
            else:
                eid = self._in.get((v, -s))
                if eid is None:
                    return False, False, path
                path.append((eid, -1))
                v = self._dsu.find(self._origin[eid])
        return True, v == self._base_class, path

    def contains(self, word) -> bool:
        ok, closes, _ = self.read(word)
        return ok and closes

    def preimage(self, word):
        """A word in the subgroup generators mapping onto ``word``, or None.

        The membership path is lifted backwards through the fold history;
        in the unfolded wedge the crossings of each cycle's designated edge
        spell the answer.
        """
        ok, closes, path = self.read(word)
        if not (ok and closes):
            return None
        lifted = self._lift(path)
        out = []
        for eid, direction in lifted:
            tag = self._designated.get(eid)
            if tag is not None:
                gi, orient = tag
                out.append((gi + 1) * (1 if direction == orient else -1))
        return free_reduce(out)

    def _lift(self, path):
        """Rewrite a folded-graph path into a wedge path by undoing folds."""
        path = list(path)
        for fold in reversed(self._folds):
            self._dsu.undo()
            path = [(fold.kept if eid == fold.dropped else eid, d) for eid, d in path]
            connector = self._connector(fold)
            fixed = []
            at = self._dsu.find(self.BASE)
            for eid, d in path:
                start = self._dsu.find(self._origin[eid] if d > 0 else self._target[eid])
                if start != at:
                    fixed.extend(self._bridge(fold, connector, at, start))
                fixed.append((eid, d))
                at = self._dsu.find(self._target[eid] if d > 0 else self._origin[eid])
            base = self._dsu.find(self.BASE)
            if at != base:
                fixed.extend(self._bridge(fold, connector, at, base))
            path = fixed
        # re-apply the folds so the structure stays usable
        for fold in self._folds:
            self._dsu.union(fold.v_kept, fold.v_dropped)
        return path

    def _connector(self, fold):
        """Path from v_kept to v_dropped valid before the fold."""
        if fold.shared == "origin":
            return [(fold.kept, -1), (fold.dropped, 1)]
        return [(fold.kept, 1), (fold.dropped, -1)]

    def _bridge(self, fold, connector, frm, to):
        vk = self._dsu.find(fold.v_kept)
        vd = self._dsu.find(fold.v_dropped)
        if frm == vk and to == vd:
            return connector
        if frm == vd and to == vk:
            return [(eid, -d) for eid, d in reversed(connector)]
        raise AssertionError("path junction does not match the undone fold")

    def is_all(self) -> bool:
        """Whether the subgroup is the whole ambient free group."""
        if self.ambient_rank == 0:
            return True
        core_alive, core_classes = self._core()
        if len(core_classes) != 1:
            return False
        return len(core_alive) == self.ambient_rank

    def _core(self):
        """Trim hanging trees (never removing the base class)."""
        alive = set(self._alive)
        while True:
            degree = {}
            for eid in alive:
                o = self._dsu.find(self._origin[eid])
                t = self._dsu.find(self._target[eid])
                degree[o] = degree.get(o, 0) + 1
                degree[t] = degree.get(t, 0) + 1
            leaf_edges = set()
            for eid in alive:
                for end in (self._origin[eid], self._target[eid]):
                    c = self._dsu.find(end)
                    if c != self._base_class and degree.get(c, 0) == 1:
                        leaf_edges.add(eid)
            if not leaf_edges:
                break
            alive -= leaf_edges
        classes = set()
        for eid in alive:
            classes.add(self._dsu.find(self._origin[eid]))
            classes.add(self._dsu.find(self._target[eid]))
        if not classes:
            classes = {self._base_class}
        return alive, classes

    def cogenerator(self):
        """Shortlex-first reduced word outside the subgroup; None when the
        subgroup is everything."""
        if self.is_all():
            return None
        letters = []
        for i in range(1, self.ambient_rank + 1):
            letters.extend((i, -i))
        queue = deque([()])
        bound = 2 * (len(self._classes) + 2)
        while queue:
            w = queue.popleft()
            if w and not self.contains(w):
                return w
            if len(w) >= bound:
                continue
            for s in letters:
                if w and w[-1] == -s:
                    continue
                queue.append(w + (s,))
        raise AssertionError("cogenerator search exhausted its bound")
