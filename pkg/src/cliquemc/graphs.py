"""Labeled undirected graphs, chordality testing, and clique decompositions.

Vertices are labeled 1..n throughout. A graph is decomposable (chordal) iff
every cycle of length >= 4 has a chord; equivalently its maximal cliques
admit a perfect ordering with the running-intersection property. The
decomposition routine uses maximum cardinality search (MCS) with clique
boundary detection, which visits the maximal cliques in a perfect order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .errors import InvalidFlipError, NotDecomposableError, TooLargeError

ENUMERATION_CAP = 6
BRUTE_FORCE_CAP = 10


def all_pairs(n: int) -> list[tuple[int, int]]:
    """All unordered vertex pairs (i, j) with 1 <= i < j <= n, sorted."""
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


@dataclass(frozen=True)
class LabeledGraph:
    """Simple undirected graph on vertices 1..n.

    ``edges`` is a frozenset of (i, j) tuples with i < j. Instances are
    immutable; mutation-style operations return new graphs.
    """

    n: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"vertex count must be positive, got {self.n}")
        normalized = set()
        for e in self.edges:
            i, j = e
            if i == j:
                raise ValueError(f"self-loop on vertex {i}")
            if i > j:
                i, j = j, i
            if not (1 <= i < j <= self.n):
                raise ValueError(f"edge {e} outside vertex range 1..{self.n}")
            normalized.add((i, j))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def empty(cls, n: int) -> "LabeledGraph":
        return cls(n, frozenset())

    @classmethod
    def complete(cls, n: int) -> "LabeledGraph":
        return cls(n, frozenset(all_pairs(n)))

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "LabeledGraph":
        return cls(n, frozenset(tuple(p) for p in pairs))

    @property
    def r(self) -> int:
        """Edge count."""
        return len(self.edges)

    @property
    def m(self) -> int:
        """Maximal possible edge count n(n-1)/2."""
        return self.n * (self.n - 1) // 2

    def has_edge(self, i: int, j: int) -> bool:
        if i > j:
            i, j = j, i
        return (i, j) in self.edges

    def adjacency(self) -> list[set]:
        """Neighbor sets indexed 1..n (index 0 unused)."""
        adj = [set() for _ in range(self.n + 1)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def with_edge_flipped(self, i: int, j: int) -> "LabeledGraph":
        if i > j:
            i, j = j, i
        e = (i, j)
        if e in self.edges:
            return LabeledGraph(self.n, self.edges - {e})
        return LabeledGraph(self.n, self.edges | {e})

    def relabel(self, perm: dict) -> "LabeledGraph":
        """Apply a vertex permutation given as a mapping old -> new label."""
        return LabeledGraph(
            self.n, frozenset(tuple(sorted((perm[i], perm[j]))) for i, j in self.edges)
        )

    def sorted_edges(self) -> tuple:
        """Canonical identity: lexicographically sorted edge tuple."""
        return tuple(sorted(self.edges))

    def edge_list_str(self) -> str:
        """Canonical text form: sorted "i-j" pairs, space separated."""
        return " ".join(f"{i}-{j}" for i, j in self.sorted_edges())

    @classmethod
    def from_edge_list_str(cls, n: int, text: str) -> "LabeledGraph":
        pairs = []
        for token in text.split():
            i, _, j = token.partition("-")
            pairs.append((int(i), int(j)))
        return cls.from_edges(n, pairs)


@dataclass(frozen=True)
class CliqueDecomposition:
    """Maximal cliques in a perfect ordering with their separators.

    ``separators[k]`` is the intersection of ``cliques[k+1]`` with the union
    of all earlier cliques; empty separators join disconnected components.
    ``n_s`` counts non-empty separators with multiplicity.
    """

    cliques: tuple
    separators: tuple
    n_s: int = field(init=False)

    def __post_init__(self):
        if len(self.separators) != max(len(self.cliques) - 1, 0):
            raise ValueError("need exactly one separator per clique after the first")
        object.__setattr__(self, "n_s", sum(1 for s in self.separators if s))

    @property
    def n_c(self) -> int:
        return len(self.cliques)

    def clique_sizes(self) -> list[int]:
        return [len(c) for c in self.cliques]

    def nonempty_separator_sizes(self) -> list[int]:
        return [len(s) for s in self.separators if s]


@dataclass(frozen=True)
class EdgeFlipProposal:
    """A single-edge perturbation and whether it stays decomposable."""

    pair: tuple
    action: str  # "add" | "delete"
    legal: bool


def _mcs(n: int, adj: list[set]):
    """Maximum cardinality search with smallest-label tie-breaking.

    Returns (order, madj, pos) where order is the selection sequence,
    madj[k] the earlier-selected neighbors of order[k], and pos[v] the
    1-based selection position of vertex v.
    """
    weight = [0] * (n + 1)
    numbered = [False] * (n + 1)
    pos = [0] * (n + 1)
    order = []
    madj = []
    done: set = set()
    for step in range(1, n + 1):
        best = -1
        best_w = -1
        for v in range(1, n + 1):
            if not numbered[v] and weight[v] > best_w:
                best = v
                best_w = weight[v]
        v = best
        numbered[v] = True
        pos[v] = step
        order.append(v)
        madj.append(adj[v] & done)
        done.add(v)
        for u in adj[v]:
            if not numbered[u]:
                weight[u] += 1
    return order, madj, pos


def _is_perfect(order: list, madj: list, pos: list) -> bool:
    """Zero fill-in test: the MCS order certifies chordality iff, for each
    vertex, its earlier neighbors minus the latest one are all neighbors of
    that latest one."""
    madj_of = {}
    for k, v in enumerate(order):
        mv = madj[k]
        if mv:
            u = max(mv, key=lambda w: pos[w])
            if not (mv - {u}) <= madj_of[u]:
                return False
        madj_of[v] = mv
    return True


def _extract_cliques(order: list, madj: list):
    """Maximal cliques and separators in MCS discovery order.

    Valid only for chordal input: a new clique starts whenever the weighted
    cardinality fails to increase, and its separator is the earlier-neighbor
    set of the starting vertex.
    """
    cliques = []
    separators = []
    current = {order[0]}
    prev_w = 0
    for k in range(1, len(order)):
        w = len(madj[k])
        if w <= prev_w:
            cliques.append(frozenset(current))
            separators.append(frozenset(madj[k]))
            current = {order[k]} | madj[k]
        else:
            current.add(order[k])
        prev_w = w
    cliques.append(frozenset(current))
    return tuple(cliques), tuple(separators)


def _decompose_adj(n: int, adj: list[set]):
    """Shared fast path: (cliques, separators) or None if not chordal."""
    order, madj, pos = _mcs(n, adj)
    if not _is_perfect(order, madj, pos):
        return None
    return _extract_cliques(order, madj)


def is_decomposable(g: LabeledGraph) -> bool:
    """True iff g is chordal, decided by MCS plus the zero fill-in test."""
    order, madj, pos = _mcs(g.n, g.adjacency())
    return _is_perfect(order, madj, pos)


def clique_decomposition(g: LabeledGraph) -> CliqueDecomposition:
    """Perfectly ordered maximal cliques and separators of a chordal graph.

    Deterministic for fixed input (MCS ties broken by smallest label).
    Raises NotDecomposableError when g has a chordless cycle.
    """
    result = _decompose_adj(g.n, g.adjacency())
    if result is None:
        raise NotDecomposableError(f"graph with edges {g.sorted_edges()} is not decomposable")
    cliques, separators = result
    return CliqueDecomposition(cliques, separators)


def edge_flip_legal(g: LabeledGraph, e: tuple, action: str) -> EdgeFlipProposal:
    """Check whether flipping edge e keeps the graph decomposable.

    ``action`` must match the current adjacency ("add" requires the pair to
    be absent, "delete" present); the flipped graph itself is not returned.
    """
    i, j = e
    if i > j:
        i, j = j, i
    if not (1 <= i < j <= g.n):
        raise InvalidFlipError(f"pair {e} outside vertex range 1..{g.n}")
    present = (i, j) in g.edges
    if action == "add" and present:
        raise InvalidFlipError(f"cannot add existing edge {(i, j)}")
    if action == "delete" and not present:
        raise InvalidFlipError(f"cannot delete absent edge {(i, j)}")
    if action not in ("add", "delete"):
        raise InvalidFlipError(f"unknown action {action!r}")
    legal = is_decomposable(g.with_edge_flipped(i, j))
    return EdgeFlipProposal((i, j), action, legal)


def enumerate_decomposable_graphs(n: int) -> list[LabeledGraph]:
    """All labeled decomposable graphs on n vertices, n <= 6.

    Exhausts the 2^(n(n-1)/2) edge subsets; used as an exact oracle for
    prior normalization and sampler validation.
    """
    if not 1 <= n <= ENUMERATION_CAP:
        raise TooLargeError(f"enumeration capped at n={ENUMERATION_CAP}, got {n}")
    pairs = all_pairs(n)
    m = len(pairs)
    out = []
    for mask in range(1 << m):
        edges = frozenset(pairs[b] for b in range(m) if mask >> b & 1)
        g = LabeledGraph(n, edges)
        if is_decomposable(g):
            out.append(g)
    return out


def brute_force_chordal(g: LabeledGraph) -> bool:
    """Independent chordality oracle: search for a chordless cycle.

    A chordless cycle of length >= 4 is exactly an induced cycle, so every
    vertex subset is checked for inducing one (all degrees two and
    connected). Capped at n <= 10.
    """
    if g.n > BRUTE_FORCE_CAP:
        raise TooLargeError(f"brute force capped at n={BRUTE_FORCE_CAP}, got {g.n}")
    n = g.n
    mask = [0] * (n + 1)
    for i, j in g.edges:
        mask[i] |= 1 << j
        mask[j] |= 1 << i
    for k in range(4, n + 1):
        for sub in combinations(range(1, n + 1), k):
            smask = 0
            for v in sub:
                smask |= 1 << v
            if any((mask[v] & smask).bit_count() != 2 for v in sub):
                continue
            # degrees all two: a disjoint union of cycles; one cycle iff connected
            seen = 1 << sub[0]
            stack = [sub[0]]
            while stack:
                nb = mask[stack.pop()] & smask & ~seen
                while nb:
                    low = nb & -nb
                    nb ^= low
                    seen |= low
                    stack.append(low.bit_length() - 1)
            if seen == smask:
                return False
    return True
