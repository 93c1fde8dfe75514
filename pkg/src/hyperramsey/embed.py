"""Embedding a bounded-degree l-partite pattern into the top level of a
condensation chain.

Vertices are embedded part by part, last part first; a candidate host
vertex for a pattern vertex in part p must complete every partially
embedded pattern edge through it into an edge of the chain level living on
parts p..l-1.  The search is greedy or depth-first with a node budget; the
goodness audit is a separate report and never gates the search.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceededError
from .drc import DrcChain, equal_part_size, leading_links
from .hypercore import PartiteHypergraph
from .seeds import rng_for


@dataclass(frozen=True)
class EmbeddingOrder:
    """Pattern vertices in embedding order: whole parts descending by part
    index, ascending vertex index inside a part."""

    sequence: tuple[int, ...]
    part_of: dict[int, int]


def embedding_order(f_pattern: PartiteHypergraph) -> EmbeddingOrder:
    seq: list[int] = []
    for part in reversed(f_pattern.parts):
        seq.extend(part)
    return EmbeddingOrder(tuple(seq), f_pattern.part_of())


@dataclass(frozen=True)
class TraceNeighbourhood:
    """Earlier-ordered pattern vertices sharing an edge with ``vertex``."""

    vertex: int
    members: frozenset[int]


def trace_neighbourhoods(
    f_pattern: PartiteHypergraph, order: EmbeddingOrder
) -> list[TraceNeighbourhood]:
    rank = {v: i for i, v in enumerate(order.sequence)}
    out = []
    for v in order.sequence:
        members = {
            u for e in f_pattern.edges if v in e for u in e if u != v and rank[u] < rank[v]
        }
        out.append(TraceNeighbourhood(v, frozenset(members)))
    return out


@dataclass
class Embedding:
    """A partial injective, part-respecting map from pattern vertices to
    host vertices; ``frontier`` counts how many order positions are filled."""

    pattern: PartiteHypergraph
    assignment: dict[int, int]
    frontier: int


def _incidence(f_pattern: PartiteHypergraph) -> dict[int, list[tuple[int, ...]]]:
    inc: dict[int, list[tuple[int, ...]]] = {v: [] for part in f_pattern.parts for v in part}
    for e in f_pattern.edges:
        for v in e:
            inc[v].append(e)
    return inc


def _candidates(
    chain: DrcChain,
    level_edge_sets: list[frozenset],
    assignment: dict[int, int],
    used_per_part: list[set[int]],
    incident_edges: list[tuple[int, ...]],
    part: int,
) -> list[int]:
    host_part = chain.top.parts[part]
    out = []
    for v in host_part:
        if v in used_per_part[part]:
            continue
        ok = True
        for e in incident_edges:
            image = (v,) + tuple(assignment[u] for u in e[part + 1 :])
            if image not in level_edge_sets[part]:
                ok = False
                break
        if ok:
            out.append(v)
    return out


def candidate_set(chain: DrcChain, emb: Embedding, next_vertex: int) -> set[int]:
    """Host vertices that could extend ``emb`` to ``next_vertex``: unused,
    in the matching part, and completing every pattern edge through
    ``next_vertex`` into the chain level for that part."""
    part = emb.pattern.part_of()[next_vertex]
    level_edge_sets = [lvl.edge_set() for lvl in chain.levels]
    incident = [e for e in emb.pattern.edges if next_vertex in e]
    for e in incident:
        for u in e[part + 1 :]:
            if u not in emb.assignment:
                raise ValueError(f"pattern vertex {u} must be embedded before {next_vertex}")
    used = set(emb.assignment.values())
    result = set()
    for v in chain.top.parts[part]:
        if v in used:
            continue
        if all(
            (v,) + tuple(emb.assignment[u] for u in e[part + 1 :]) in level_edge_sets[part]
            for e in incident
        ):
            result.add(v)
    return result


@dataclass(frozen=True)
class EmbedResult:
    """Outcome of an embedding attempt, success or not."""

    ok: bool
    embedding: Embedding | None
    nodes_expanded: int
    deepest_frontier: int
    expansions_per_depth: tuple[int, ...]
    policy: str
    seed: int
    budget_exhausted: bool = False

    def to_json(self) -> dict:
        return {
            "assignment": (
                {str(v): h for v, h in sorted(self.embedding.assignment.items())}
                if self.embedding is not None
                else None
            ),
            "verified": self.ok,
            "policy": self.policy,
            "seed": self.seed,
            "nodes_expanded": self.nodes_expanded,
            "deepest_frontier": self.deepest_frontier,
            "budget_exhausted": self.budget_exhausted,
        }


class _BudgetHit(Exception):
    pass


def embed_pattern(
    chain: DrcChain,
    f_pattern: PartiteHypergraph,
    policy: str = "backtrack",
    seed: int = 0,
    node_budget: int = 10**6,
) -> EmbedResult:
    """Try to embed ``f_pattern`` into the chain's top level.

    ``greedy`` takes the smallest-index candidate at every step and fails
    at the first empty candidate set; ``random`` is greedy with a seeded
    shuffle, ``backtrack`` explores candidates depth-first within
    ``node_budget`` expansions.  Same inputs and seed give the same result.
    """
    if policy not in ("greedy", "random", "backtrack"):
        raise ValueError(f"unknown policy {policy!r}")
    if f_pattern.l != chain.top.l:
        raise ValueError("pattern and host must have the same number of parts")
    for i, part in enumerate(f_pattern.parts):
        if len(part) > len(chain.top.parts[i]):
            raise ValueError(f"pattern part {i} does not fit in the host part")
    order = embedding_order(f_pattern)
    part_of = order.part_of
    level_edge_sets = [lvl.edge_set() for lvl in chain.levels]
    incidence = _incidence(f_pattern)
    used_per_part: list[set[int]] = [set() for _ in f_pattern.parts]
    assignment: dict[int, int] = {}
    n = len(order.sequence)
    rng = rng_for(seed, 0xE3BED)
    nodes = 0
    deepest = 0
    expansions = [0] * max(n, 1)

    def dfs(i: int) -> bool:
        nonlocal nodes, deepest
        deepest = max(deepest, i)
        if i == n:
            return True
        u = order.sequence[i]
        part = part_of[u]
        cands = _candidates(
            chain, level_edge_sets, assignment, used_per_part, incidence[u], part
        )
        if policy == "random":
            rng.shuffle(cands)
        for v in cands:
            nodes += 1
            expansions[i] += 1
            if nodes > node_budget:
                raise _BudgetHit
            assignment[u] = v
            used_per_part[part].add(v)
            if dfs(i + 1):
                return True
            del assignment[u]
            used_per_part[part].remove(v)
            if policy in ("greedy", "random"):
                return False
        return False

    budget_hit = False
    try:
        ok = dfs(0)
    except _BudgetHit:
        ok = False
        budget_hit = True
    emb = Embedding(f_pattern, dict(assignment), len(assignment)) if ok else None
    return EmbedResult(
        ok, emb, nodes, deepest, tuple(expansions), policy, seed, budget_hit
    )


def check_embedding(
    host: PartiteHypergraph, f_pattern: PartiteHypergraph, emb: Embedding
) -> bool:
    """True iff ``emb`` is total, injective, part-respecting, and maps every
    pattern edge onto a host edge."""
    f = emb.assignment
    pattern_vertices = [v for part in f_pattern.parts for v in part]
    if set(f) != set(pattern_vertices):
        return False
    if len(set(f.values())) != len(f):
        return False
    host_part_of = host.part_of()
    pat_part_of = f_pattern.part_of()
    if any(host_part_of.get(f[v]) != pat_part_of[v] for v in f):
        return False
    host_edges = host.edge_set()
    return all(tuple(f[u] for u in e) in host_edges for e in f_pattern.edges)


@dataclass(frozen=True)
class GoodnessEntry:
    vertex: int | None  # None for the empty-set baseline
    image: tuple[int, ...]
    bad_edges_containing: int
    threshold: Fraction
    good: bool


@dataclass(frozen=True)
class GoodnessReport:
    entries: tuple[GoodnessEntry, ...]
    dangerous_union_count: int
    degree_bound: int

    @property
    def all_good(self) -> bool:
        return all(e.good for e in self.entries)


def _dangerous_unions(
    chain: DrcChain, degree_bound: int, beta: Fraction, budget: int
) -> list[frozenset[int]]:
    n = equal_part_size(chain.top)
    total = 0
    for lower in chain.levels[1:]:
        m = len(lower.edges)
        total += sum(math.comb(m, t) for t in range(1, min(degree_bound, m) + 1))
    if total > budget:
        raise BudgetExceededError(f"{total} candidate subsets exceed budget {budget}")
    unions: set[frozenset[int]] = set()
    for upper, lower in zip(chain.levels, chain.levels[1:]):
        links = leading_links(upper)
        ext = {e: frozenset(v for v in upper.parts[0] if e in links[v]) for e in lower.edges}
        cap = min(degree_bound, len(lower.edges))
        for t in range(1, cap + 1):
            for subset in itertools.combinations(lower.edges, t):
                common: frozenset[int] | None = None
                union: set[int] = set()
                for e in subset:
                    union.update(e)
                    common = ext[e] if common is None else common & ext[e]
                if len(common) < beta * n:  # type: ignore[arg-type]
                    unions.add(frozenset(union))
    return sorted(unions, key=sorted)


def goodness_audit(
    chain: DrcChain,
    emb: Embedding,
    beta: Fraction,
    budget: int = 10**7,
) -> GoodnessReport:
    """Audit of the embedded trace-neighbourhood images.

    A bad-extension edge is a set with exactly ``degree_bound`` vertices in
    each host part that contains the union of some dangerous subset from
    any chain level.  An audited set U is bad when at least
    ``(beta/(4*l*degree_bound))^(l*degree_bound-|U|) * C(N, l*degree_bound-|U|)``
    such edges contain it.  This is a report only; the embedder never
    consults it.
    """
    pattern = emb.pattern
    counts: dict[int, int] = {}
    for e in pattern.edges:
        for v in e:
            counts[v] = counts.get(v, 0) + 1
    degree_bound = max(counts.values(), default=0)
    l = chain.top.l
    n = equal_part_size(chain.top)
    if degree_bound == 0:
        return GoodnessReport((GoodnessEntry(None, (), 0, Fraction(1), True),), 0, 0)
    unions = _dangerous_unions(chain, degree_bound, beta, budget)
    order = embedding_order(pattern)
    embedded = set(emb.assignment)
    targets: list[tuple[int | None, tuple[int, ...]]] = [(None, ())]
    for tn in trace_neighbourhoods(pattern, order):
        members = tn.members & embedded
        image = tuple(sorted(emb.assignment[u] for u in members))
        targets.append((tn.vertex, image))
    host_part_of = chain.top.part_of()
    entries = []
    seen: set[tuple[int | None, tuple[int, ...]]] = set()
    for vertex, image in targets:
        if (vertex, image) in seen:
            continue
        seen.add((vertex, image))
        per_part = [len([v for v in image if host_part_of[v] == i]) for i in range(l)]
        missing = l * degree_bound - len(image)
        threshold = (beta / (4 * l * degree_bound)) ** missing * math.comb(n, missing)
        if any(c > degree_bound for c in per_part):
            count = 0
        else:
            count = _count_bad_extensions(
                chain, image, per_part, degree_bound, unions, budget
            )
        entries.append(GoodnessEntry(vertex, image, count, threshold, count < threshold))
    return GoodnessReport(tuple(entries), len(unions), degree_bound)


def _count_bad_extensions(
    chain: DrcChain,
    image: tuple[int, ...],
    per_part: list[int],
    degree_bound: int,
    unions: list[frozenset[int]],
    budget: int,
) -> int:
    base = set(image)
    pools = []
    work = 1
    for i, part in enumerate(chain.top.parts):
        free = [v for v in part if v not in base]
        need = degree_bound - per_part[i]
        work *= math.comb(len(free), need)
        pools.append(itertools.combinations(free, need))
    if work > budget:
        raise BudgetExceededError(f"{work} extensions exceed budget {budget}")
    count = 0
    for chosen in itertools.product(*pools):
        t = base.union(*chosen)
        if any(u <= t for u in unions):
            count += 1
    return count
