"""Independent brute-force oracles used as ground truth in tests and
self-checks.

Everything here is deliberately naive and shares no code with the fast
search paths elsewhere in the package: dual implementation is the point.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import BudgetExceededError
from .hypercore import Edge, Hypergraph
from .seeds import rng_for


@dataclass(frozen=True)
class SearchBudget:
    """Caps for oracle searches: node count, wall clock, and mode."""

    max_nodes: int = 10**7
    max_millis: int | None = None
    mode: str = "exhaustive"
    trials: int = 0

    def __post_init__(self) -> None:
        if self.max_nodes <= 0:
            raise ValueError("max_nodes must be positive")
        if self.max_millis is not None and self.max_millis <= 0:
            raise ValueError("max_millis must be positive")
        if self.mode not in ("exhaustive", "sampled"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class CopySearchResult:
    status: str  # "found" | "none" | "budget"
    mapping: dict[int, int] | None
    nodes: int


def _edge_images_ok(
    pattern: Hypergraph,
    mapping: dict[int, int],
    edge_ok: Callable[[Edge], bool],
) -> bool:
    for e in pattern.edges:
        if all(v in mapping for v in e):
            if not edge_ok(tuple(sorted(mapping[v] for v in e))):
                return False
    return True


def naive_find_copy(
    host_vertices: Sequence[int],
    edge_ok: Callable[[Edge], bool],
    pattern: Hypergraph,
    budget: SearchBudget = SearchBudget(),
) -> CopySearchResult:
    """Backtracking search for an injective copy of ``pattern`` whose edge
    images all satisfy ``edge_ok``.

    Pattern vertices are assigned in index order and host candidates tried
    in the given order; the only pruning is checking each pattern edge as
    soon as its image is complete.  Any returned copy is re-verified edge
    by edge before it is reported.
    """
    started = time.monotonic()
    nodes = 0
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def out_of_budget() -> bool:
        if nodes > budget.max_nodes:
            return True
        if budget.max_millis is not None:
            return (time.monotonic() - started) * 1000 > budget.max_millis
        return False

    def place(i: int) -> str:
        nonlocal nodes
        if i == pattern.n_vertices:
            return "found"
        for h in host_vertices:
            if h in used:
                continue
            nodes += 1
            if out_of_budget():
                return "budget"
            mapping[i] = h
            used.add(h)
            if _edge_images_ok(pattern, mapping, edge_ok):
                verdict = place(i + 1)
                if verdict != "none":
                    return verdict
            del mapping[i]
            used.discard(h)
        return "none"

    verdict = place(0)
    if verdict == "found":
        final = dict(mapping)
        for e in pattern.edges:
            assert edge_ok(tuple(sorted(final[v] for v in e)))
        return CopySearchResult("found", final, nodes)
    return CopySearchResult(verdict, None, nodes)


@dataclass(frozen=True)
class ArrowingVerdict:
    arrows: bool | None  # None when a sampled run found no counterexample
    mode: str
    witness: dict[Edge, int] | None
    colourings_checked: int


def _has_mono_copy(
    n: int,
    q: int,
    colour_of: Callable[[Edge], int],
    pattern: Hypergraph,
    budget: SearchBudget,
) -> bool:
    verts = list(range(n))
    for c in range(q):
        res = naive_find_copy(verts, lambda e, c=c: colour_of(e) == c, pattern, budget)
        if res.status == "budget":
            raise BudgetExceededError("copy search inside arrowing check ran out of budget")
        if res.status == "found":
            return True
    return False


def exhaustive_ramsey_check(
    pattern: Hypergraph,
    n: int,
    q: int,
    budget: SearchBudget = SearchBudget(),
    seed: int = 0,
) -> ArrowingVerdict:
    """Does every q-colouring of the complete ``pattern.k``-uniform
    hypergraph on n vertices contain a monochromatic copy of ``pattern``?

    Exhaustive mode iterates all raw colourings (no isomorphism reduction,
    by design); sampled mode only hunts for a counterexample.
    """
    k = pattern.k
    slots = list(itertools.combinations(range(n), k))
    n_colourings = q ** len(slots)
    if budget.mode == "exhaustive":
        if n_colourings > budget.max_nodes:
            raise BudgetExceededError(
                f"{n_colourings} colourings exceed the {budget.max_nodes} node budget"
            )
        assign = [0] * len(slots)
        index = {e: i for i, e in enumerate(slots)}
        for count in range(n_colourings):
            x = count
            for i in range(len(slots)):
                assign[i] = x % q
                x //= q
            if not _has_mono_copy(n, q, lambda e: assign[index[e]], pattern, budget):
                witness = {e: assign[i] for e, i in index.items()}
                return ArrowingVerdict(False, "exhaustive", witness, count + 1)
        return ArrowingVerdict(True, "exhaustive", None, n_colourings)
    rng = rng_for(seed, 0x0AC1)
    index = {e: i for i, e in enumerate(slots)}
    for t in range(budget.trials):
        assign = rng.integers(q, size=len(slots)).tolist()
        if not _has_mono_copy(n, q, lambda e: assign[index[e]], pattern, budget):
            witness = {e: assign[i] for e, i in index.items()}
            return ArrowingVerdict(False, "sampled", witness, t + 1)
    return ArrowingVerdict(None, "sampled", None, budget.trials)


def naive_count_mono_cliques(
    n: int,
    k: int,
    q: int,
    colour_of: Callable[[Edge], int],
    l: int,
    budget: int = 10**7,
) -> list[int]:
    """Per-colour counts of l-subsets all of whose k-subsets share that
    colour, by scanning every l-subset."""
    if math.comb(n, l) > budget:
        raise BudgetExceededError(f"C({n},{l}) exceeds budget {budget}")
    counts = [0] * q
    for subset in itertools.combinations(range(n), l):
        colours = {colour_of(e) for e in itertools.combinations(subset, k)}
        if len(colours) == 1:
            counts[colours.pop()] += 1
    return counts


@dataclass(frozen=True)
class MonteCarloResult:
    trials: int
    mean: float
    std: float
    stderr: float
    values: tuple[float, ...]


def montecarlo(
    trial: Callable[..., float],
    trials: int,
    seed: int,
    aggregator: Callable[[object], float] = float,
) -> MonteCarloResult:
    """Run seeded independent trials and report mean, sample standard
    deviation, and standard error.

    Each trial receives its own generator derived from ``(seed, index)``,
    so results are identical regardless of execution order.
    """
    if trials < 2:
        raise ValueError("need at least 2 trials")
    values = [aggregator(trial(rng_for(seed, 0x3C, t))) for t in range(trials)]
    mean = sum(values) / trials
    var = sum((x - mean) ** 2 for x in values) / (trials - 1)
    std = math.sqrt(var)
    return MonteCarloResult(trials, mean, std, std / math.sqrt(trials), tuple(values))
