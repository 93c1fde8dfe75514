"""Core hypergraph types, degree and colouring computations, and pattern
generators.

Vertices are dense 0-based integers.  Plain hypergraph edges are sorted
tuples kept in a lexicographically sorted, deduplicated list, so equal
hypergraphs compare equal structurally and membership tests are cheap.
Partite hypergraph edges are ordered by part index instead (position ``i``
holds the part-``i`` vertex), which makes truncation by leading parts a
tuple slice.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BudgetExceededError, SizeLimitError
from .seeds import rng_for

Edge = tuple[int, ...]


def _sorted_edge(e: Iterable[int]) -> Edge:
    return tuple(sorted(int(v) for v in e))


@dataclass(frozen=True)
class Hypergraph:
    """A k-uniform hypergraph on vertices ``0..n_vertices-1``."""

    k: int
    n_vertices: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError("uniformity k must be >= 2")
        if self.n_vertices < 0:
            raise ValueError("n_vertices must be >= 0")
        prev = None
        for e in self.edges:
            if len(e) != self.k or len(set(e)) != self.k:
                raise ValueError(f"edge {e} is not a {self.k}-set of distinct vertices")
            if list(e) != sorted(e):
                raise ValueError(f"edge {e} is not sorted")
            if e[0] < 0 or e[-1] >= self.n_vertices:
                raise ValueError(f"edge {e} outside vertex range 0..{self.n_vertices - 1}")
            if prev is not None and e <= prev:
                raise ValueError("edge list is not sorted and deduplicated")
            prev = e

    @classmethod
    def make(cls, k: int, n_vertices: int, edges: Iterable[Iterable[int]]) -> "Hypergraph":
        """Build with canonicalisation: sorts each edge, dedupes, sorts the list."""
        return cls(k, n_vertices, tuple(sorted({_sorted_edge(e) for e in edges})))

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def to_json(self) -> dict:
        return {"k": self.k, "n": self.n_vertices, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, obj: dict) -> "Hypergraph":
        return cls.make(int(obj["k"]), int(obj["n"]), obj["edges"])


@dataclass(frozen=True)
class PartiteHypergraph:
    """An l-uniform l-partite hypergraph.

    ``parts`` are disjoint sorted vertex tuples covering the vertex set;
    every edge is a transversal, stored ordered by part index.
    """

    parts: tuple[tuple[int, ...], ...]
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for part in self.parts:
            if list(part) != sorted(part):
                raise ValueError("parts must be sorted")
            if seen.intersection(part):
                raise ValueError("parts are not disjoint")
            seen.update(part)
        owners = {v: i for i, part in enumerate(self.parts) for v in part}
        prev = None
        for e in self.edges:
            if len(e) != self.l:
                raise ValueError(f"edge {e} does not have one vertex per part")
            for i, v in enumerate(e):
                if owners.get(v) != i:
                    raise ValueError(f"edge {e}: position {i} is not a part-{i} vertex")
            if prev is not None and e <= prev:
                raise ValueError("edge list is not sorted and deduplicated")
            prev = e

    @classmethod
    def make(
        cls,
        parts: Sequence[Sequence[int]],
        edges: Iterable[Iterable[int]],
    ) -> "PartiteHypergraph":
        """Build with canonicalisation; edges may be given in any vertex order."""
        tidy_parts = tuple(tuple(sorted(int(v) for v in part)) for part in parts)
        owner = {v: i for i, part in enumerate(tidy_parts) for v in part}
        canon: set[Edge] = set()
        for e in edges:
            e = [int(v) for v in e]
            slots: list[int | None] = [None] * len(tidy_parts)
            for v in e:
                if v not in owner:
                    raise ValueError(f"edge vertex {v} is in no part")
                if slots[owner[v]] is not None:
                    raise ValueError(f"edge {e} repeats part {owner[v]}")
                slots[owner[v]] = v
            if any(s is None for s in slots):
                raise ValueError(f"edge {e} misses a part")
            canon.add(tuple(slots))  # type: ignore[arg-type]
        return cls(tidy_parts, tuple(sorted(canon)))

    @property
    def l(self) -> int:  # noqa: E743 - domain name
        return len(self.parts)

    @property
    def n_vertices(self) -> int:
        return sum(len(p) for p in self.parts)

    def part_sizes(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.parts)

    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def part_of(self) -> dict[int, int]:
        return {v: i for i, part in enumerate(self.parts) for v in part}

    def to_json(self) -> dict:
        return {
            "k": self.l,
            "n": self.n_vertices,
            "parts": [list(p) for p in self.parts],
            "edges": [list(e) for e in self.edges],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PartiteHypergraph":
        return cls.make(obj["parts"], obj["edges"])


@dataclass(frozen=True)
class EdgeSet:
    """A set of edges from one partite level, with its cached weight.

    The weight of an edge set is the size of the union of its edges.
    """

    edges: tuple[Edge, ...]
    weight: int

    @classmethod
    def make(cls, edges: Iterable[Edge]) -> "EdgeSet":
        tidy = tuple(sorted(set(edges)))
        return cls(tidy, weight(tidy))

    def __post_init__(self) -> None:
        if self.weight != weight(self.edges):
            raise ValueError("cached weight does not match the union size")


def weight(edges: Iterable[Edge]) -> int:
    """Size of the union of the given edges."""
    union: set[int] = set()
    for e in edges:
        union.update(e)
    return len(union)


def max_degree(h: Hypergraph) -> int:
    """Largest number of edges containing a single vertex; 0 when edgeless."""
    counts: dict[int, int] = {}
    for e in h.edges:
        for v in e:
            counts[v] = counts.get(v, 0) + 1
    return max(counts.values(), default=0)


def degrees(h: Hypergraph) -> list[int]:
    out = [0] * h.n_vertices
    for e in h.edges:
        for v in e:
            out[v] += 1
    return out


def shadow_graph(h: Hypergraph) -> Hypergraph:
    """The graph on the same vertices joining any two vertices that co-occur
    in an edge of ``h``."""
    pairs: set[Edge] = set()
    for e in h.edges:
        pairs.update(itertools.combinations(e, 2))
    return Hypergraph(2, h.n_vertices, tuple(sorted(pairs)))


def _adjacency_masks(g: Hypergraph) -> list[int]:
    adj = [0] * g.n_vertices
    for u, v in g.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return adj


def _greedy_colouring(adj: list[int], order: Sequence[int]) -> dict[int, int]:
    colour: dict[int, int] = {}
    for v in order:
        used = 0
        for u, cu in colour.items():
            if adj[v] >> u & 1:
                used |= 1 << cu
        c = 0
        while used >> c & 1:
            c += 1
        colour[v] = c
    return colour


def _greedy_clique(adj: list[int], order: Sequence[int]) -> int:
    clique: list[int] = []
    for v in order:
        if all(adj[v] >> u & 1 for u in clique):
            clique.append(v)
    return len(clique)


def _is_colourable(adj: list[int], order: list[int], n_colours: int) -> bool:
    n = len(order)
    colour = [0] * len(adj)

    def place(i: int, used_max: int) -> bool:
        if i == n:
            return True
        v = order[i]
        forbidden = 0
        for j in range(i):
            u = order[j]
            if adj[v] >> u & 1:
                forbidden |= 1 << colour[u]
        # Trying one fresh colour index suffices; larger ones are symmetric.
        cap = min(n_colours, used_max + 1)
        for c in range(cap):
            if not forbidden >> c & 1:
                colour[v] = c
                if place(i + 1, max(used_max, c + 1)):
                    return True
        return False

    return place(0, 0)


def strong_chromatic_number(
    h: Hypergraph,
    mode: str = "exact",
    max_exact_vertices: int = 20,
) -> tuple[int, dict[int, int]]:
    """Fewest colours such that no edge of ``h`` repeats a colour, with a
    witnessing vertex colouring.

    This equals the chromatic number of ``shadow_graph(h)``.  ``greedy``
    colours vertices in index order with the smallest available colour and
    needs at most ``(k-1) * max_degree(h) + 1`` colours.  ``exact`` runs
    branch-and-bound on the shadow graph and refuses instances above
    ``max_exact_vertices``.
    """
    if mode not in ("exact", "greedy"):
        raise ValueError(f"unknown mode {mode!r}")
    shadow = shadow_graph(h)
    adj = _adjacency_masks(shadow)
    if h.n_vertices == 0:
        return 0, {}
    order = list(range(h.n_vertices))
    greedy = _greedy_colouring(adj, order)
    greedy_count = max(greedy.values()) + 1
    if mode == "greedy":
        return greedy_count, greedy
    if h.n_vertices > max_exact_vertices:
        raise SizeLimitError(
            f"exact colouring limited to {max_exact_vertices} vertices, got {h.n_vertices}"
        )
    by_degree = sorted(order, key=lambda v: -bin(adj[v]).count("1"))
    lower = _greedy_clique(adj, by_degree)
    best = greedy_count
    for target in range(lower, greedy_count):
        if _is_colourable(adj, by_degree, target):
            best = target
            break
    # Recover a witness colouring with `best` colours deterministically.
    colour: dict[int, int] = {}
    for v in order:
        used = {colour[u] for u in colour if adj[v] >> u & 1}
        for c in range(best):
            if c not in used:
                colour[v] = c
                break
        else:  # pragma: no cover - greedy order can exceed the optimum
            colour = _exact_witness(adj, by_degree, best)
            break
    return best, colour


def _exact_witness(adj: list[int], order: list[int], n_colours: int) -> dict[int, int]:
    colour: dict[int, int] = {}

    def place(i: int, used_max: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        forbidden = {colour[u] for u in colour if adj[v] >> u & 1}
        for c in range(min(n_colours, used_max + 1)):
            if c not in forbidden:
                colour[v] = c
                if place(i + 1, max(used_max, c + 1)):
                    return True
                del colour[v]
        return False

    if not place(0, 0):
        raise AssertionError("witness extraction for a feasible colour count failed")
    return colour


# ---------------------------------------------------------------------------
# pattern generators


def complete_hypergraph(l: int, k: int) -> Hypergraph:
    """The complete k-uniform hypergraph on l vertices."""
    if not 2 <= k <= l:
        raise ValueError("need 2 <= k <= l")
    return Hypergraph(k, l, tuple(itertools.combinations(range(l), k)))


def cycle_spoke(n: int) -> Hypergraph:
    """The 3-uniform pattern with edges {v_i, v_{i+1}, v_j} over a cyclic
    vertex order (index n wraps to 0), the spoke j ranging over the other
    vertices.

    The edge family is a set: the two orientations of each consecutive
    triple collapse, giving exactly n^2 - 3n edges for n >= 5.
    """
    if n < 4:
        raise ValueError("cycle_spoke needs n >= 4")
    edges: set[Edge] = set()
    for i in range(n):
        nxt = (i + 1) % n
        for j in range(n):
            if j in (i, nxt):
                continue
            edges.add(_sorted_edge((i, nxt, j)))
    return Hypergraph(3, n, tuple(sorted(edges)))


def random_hypergraph(k: int, n: int, m: int, seed: int) -> Hypergraph:
    """A seed-deterministic k-uniform hypergraph with m distinct edges."""
    total = math.comb(n, k)
    if m > total:
        raise ValueError(f"m={m} exceeds the {total} available edges")
    rng = rng_for(seed, 0xE06E)
    if total <= 10**6:
        pool = list(itertools.combinations(range(n), k))
        idx = rng.choice(total, size=m, replace=False)
        return Hypergraph(k, n, tuple(sorted(pool[i] for i in idx)))
    chosen: set[Edge] = set()
    while len(chosen) < m:
        chosen.add(tuple(sorted(rng.choice(n, size=k, replace=False).tolist())))
    return Hypergraph(k, n, tuple(sorted(chosen)))


def gen_pattern(kind: str, **kwargs) -> Hypergraph:
    """Dispatch by name: ``complete(l,k)``, ``cycle_spoke(n)``,
    ``random(k,n,m,seed)``."""
    if kind == "complete":
        return complete_hypergraph(kwargs["l"], kwargs["k"])
    if kind == "cycle_spoke":
        return cycle_spoke(kwargs["n"])
    if kind == "random":
        return random_hypergraph(kwargs["k"], kwargs["n"], kwargs["m"], kwargs["seed"])
    raise ValueError(f"unknown pattern kind {kind!r}")


def _block_parts(l: int, n_per_part: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(range(i * n_per_part, (i + 1) * n_per_part)) for i in range(l))


def complete_partite(l: int, n_per_part: int, budget: int = 10**6) -> PartiteHypergraph:
    """The complete l-uniform l-partite hypergraph with parts of equal size."""
    if n_per_part**l > budget:
        raise BudgetExceededError(f"{n_per_part}^{l} transversals exceed budget {budget}")
    parts = _block_parts(l, n_per_part)
    return PartiteHypergraph(parts, tuple(itertools.product(*parts)))


def random_partite(
    l: int,
    n_per_part: int,
    density: float,
    seed: int,
    budget: int = 10**6,
) -> PartiteHypergraph:
    """A seed-deterministic l-partite host keeping each transversal with the
    given probability."""
    total = n_per_part**l
    if total > budget:
        raise BudgetExceededError(f"{n_per_part}^{l} transversals exceed budget {budget}")
    rng = rng_for(seed, 0x9A27)
    keep = rng.random(total) < density
    parts = _block_parts(l, n_per_part)
    edges = tuple(e for e, flag in zip(itertools.product(*parts), keep) if flag)
    return PartiteHypergraph(parts, edges)


def random_partite_pattern(
    part_sizes: Sequence[int],
    n_edges: int,
    degree_bound: int,
    seed: int,
    max_attempts: int = 10**5,
) -> PartiteHypergraph:
    """A random l-partite pattern with transversal edges and every vertex in
    at most ``degree_bound`` edges."""
    offsets = [0]
    for size in part_sizes:
        offsets.append(offsets[-1] + size)
    parts = tuple(tuple(range(offsets[i], offsets[i + 1])) for i in range(len(part_sizes)))
    rng = rng_for(seed, 0xFA77)
    deg: dict[int, int] = {}
    edges: set[Edge] = set()
    attempts = 0
    while len(edges) < n_edges:
        attempts += 1
        if attempts > max_attempts:
            raise ValueError(
                f"could not place {n_edges} edges under the degree bound "
                f"(placed {len(edges)})"
            )
        e = tuple(int(part[rng.integers(len(part))]) for part in parts)
        if e in edges or any(deg.get(v, 0) >= degree_bound for v in e):
            continue
        edges.add(e)
        for v in e:
            deg[v] = deg.get(v, 0) + 1
    return PartiteHypergraph(parts, tuple(sorted(edges)))
