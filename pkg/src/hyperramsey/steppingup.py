"""Stepping-up lower-bound construction: a 4-colouring of the complete
3-uniform hypergraph on the binary strings of length m, lifted from a
red/blue colouring of the pairs of coordinates, plus a searcher that
certifies the absence of monochromatic pattern copies.

Coordinates are 1-based; a string is little-endian (coordinate 1 first),
so its rank is ``sum(bit_i * 2^(i-1))``.  The colour of a triple depends
only on the relative order of the two last-difference coordinates and the
base colour of that coordinate pair, so the ground set of size ``2^m`` is
never materialised: colours are computed per query.
"""

from __future__ import annotations

import functools
import itertools
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BudgetExceededError
from .hypercore import Hypergraph
from .oracle import SearchBudget
from .seeds import rng_for

RED = "red"
BLUE = "blue"
COLOUR_NAMES = ("C1", "C2", "C3", "C4")


@dataclass(frozen=True)
class BinaryString:
    """A 0/1 string, little-endian: ``bits[i]`` is coordinate ``i + 1``."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.bits:
            raise ValueError("strings must have length >= 1")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0 or 1")

    @property
    def m(self) -> int:
        return len(self.bits)

    @property
    def rank(self) -> int:
        return sum(b << i for i, b in enumerate(self.bits))

    @classmethod
    def from_rank(cls, rank: int, m: int) -> "BinaryString":
        if not 0 <= rank < 1 << m:
            raise ValueError(f"rank {rank} out of range for length {m}")
        return cls(tuple(rank >> i & 1 for i in range(m)))


def delta_rank(a: int, b: int) -> int:
    """Largest (1-based) coordinate at which two ranks differ."""
    if a == b:
        raise ValueError("delta is undefined for equal strings")
    return (a ^ b).bit_length()


def delta(e1: BinaryString, e2: BinaryString) -> int:
    """Largest coordinate at which two equal-length strings differ."""
    if e1.m != e2.m:
        raise ValueError("strings must have equal length")
    return delta_rank(e1.rank, e2.rank)


def string_order(e1: BinaryString, e2: BinaryString) -> str:
    """``"less"`` or ``"greater"``, by comparing ranks."""
    if e1.m != e2.m:
        raise ValueError("strings must have equal length")
    if e1.rank == e2.rank:
        raise ValueError("order is undefined for equal strings")
    return "less" if e1.rank < e2.rank else "greater"


def order_by_highest_difference(e1: BinaryString, e2: BinaryString) -> str:
    """The same order derived from the bit at the last-difference
    coordinate; kept separate so the two rules can be checked against each
    other."""
    d = delta(e1, e2)
    return "less" if e1.bits[d - 1] == 0 else "greater"


def delta_max_property(chain: Sequence[BinaryString]) -> bool:
    """For a strictly increasing chain, does the ends' last-difference
    coordinate equal the maximum over consecutive pairs?"""
    if len(chain) < 2:
        raise ValueError("need a chain of length >= 2")
    ranks = [e.rank for e in chain]
    if any(a >= b for a, b in zip(ranks, ranks[1:])):
        raise ValueError("chain must be strictly increasing")
    consecutive = [delta_rank(a, b) for a, b in zip(ranks, ranks[1:])]
    return delta_rank(ranks[0], ranks[-1]) == max(consecutive)


@dataclass(frozen=True)
class BaseColouring:
    """A total red/blue colouring of the pairs of 1-based coordinates."""

    m: int
    colour: dict[tuple[int, int], str]
    provenance: str
    mono_clique_report: dict[str, int] | None = None

    def __post_init__(self) -> None:
        expected = {(i, j) for i in range(1, self.m + 1) for j in range(i + 1, self.m + 1)}
        if set(self.colour) != expected:
            raise ValueError("colouring must cover exactly the coordinate pairs")
        if any(c not in (RED, BLUE) for c in self.colour.values()):
            raise ValueError("colours must be red or blue")

    def of(self, i: int, j: int) -> str:
        return self.colour[(i, j) if i < j else (j, i)]

    def to_csv(self) -> str:
        rows = [f"{i},{j},{self.colour[(i, j)]}" for i, j in sorted(self.colour)]
        return "\n".join(rows) + "\n"

    @classmethod
    def from_csv(cls, text: str, provenance: str = "file") -> "BaseColouring":
        colour: dict[tuple[int, int], str] = {}
        top = 0
        for line in text.strip().splitlines():
            parts = line.strip().split(",")
            if len(parts) != 3:
                raise ValueError(f"bad row {line!r}; expected 'i,j,red|blue'")
            i, j, c = int(parts[0]), int(parts[1]), parts[2].strip()
            if i == j:
                raise ValueError(f"bad row {line!r}: loop pair")
            colour[(min(i, j), max(i, j))] = c
            top = max(top, i, j)
        return cls(top, colour, provenance, _mono_clique_report(top, colour))


def _mono_clique_report(
    m: int, colour: dict[tuple[int, int], str], budget: int = 1 << 14
) -> dict[str, int] | None:
    """Largest monochromatic clique per colour by scanning all coordinate
    subsets; ``None`` when 2^m exceeds the budget."""
    if 1 << m > budget:
        return None
    best = {RED: 1 if m else 0, BLUE: 1 if m else 0}
    for size in range(2, m + 1):
        for subset in itertools.combinations(range(1, m + 1), size):
            seen = {colour[p] for p in itertools.combinations(subset, 2)}
            if len(seen) == 1:
                c = seen.pop()
                best[c] = max(best[c], size)
    return best


def pentagon_base() -> BaseColouring:
    """Five coordinates: the 5-cycle {i, i+1} red, its complement blue.
    Neither colour contains a triangle."""
    colour = {}
    cycle = {(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)}
    for pair in itertools.combinations(range(1, 6), 2):
        colour[pair] = RED if pair in cycle else BLUE
    return BaseColouring(5, colour, "pentagon", _mono_clique_report(5, colour))


def random_base(m: int, seed: int) -> BaseColouring:
    rng = rng_for(seed, 0xBA5E)
    colour = {
        pair: RED if rng.integers(2) else BLUE
        for pair in itertools.combinations(range(1, m + 1), 2)
    }
    return BaseColouring(m, colour, f"random(seed={seed})", _mono_clique_report(m, colour))


def base_colouring(kind: str, m: int | None = None, seed: int = 0, text: str | None = None) -> BaseColouring:
    """Dispatch by name: ``pentagon`` (m fixed at 5), ``random``, ``file``."""
    if kind == "pentagon":
        if m not in (None, 5):
            raise ValueError("the pentagon base needs m = 5")
        return pentagon_base()
    if kind == "random":
        if m is None:
            raise ValueError("random base needs m")
        return random_base(m, seed)
    if kind == "file":
        if text is None:
            raise ValueError("file base needs CSV text")
        return BaseColouring.from_csv(text)
    raise ValueError(f"unknown base colouring kind {kind!r}")


@dataclass(frozen=True)
class StepUpColouring:
    """The lifted 4-colouring on the 2^m binary strings, as a functional
    colouring of 3-sets of ranks (k=3, q=4)."""

    base: BaseColouring

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def k(self) -> int:
        return 3

    @property
    def q(self) -> int:
        return 4

    @property
    def n_vertices(self) -> int:
        return 1 << self.base.m

    def colour_of(self, triple: Iterable[int]) -> int:
        a, b, c = sorted(triple)
        if a == b or b == c:
            raise ValueError("triple must have three distinct strings")
        d1 = delta_rank(a, b)
        d2 = delta_rank(b, c)
        assert d1 != d2, "consecutive last differences can never coincide"
        base = self.base.of(d1, d2)
        if base == RED:
            return 0 if d1 < d2 else 1
        return 2 if d1 < d2 else 3


def stepup_colour(su: StepUpColouring, triple: Sequence[BinaryString]) -> str:
    """Colour name C1..C4 for a triple of strings; order-insensitive."""
    if len(triple) != 3:
        raise ValueError("need exactly three strings")
    if any(e.m != su.m for e in triple):
        raise ValueError("string length must match the base colouring")
    return COLOUR_NAMES[su.colour_of(e.rank for e in triple)]


@dataclass(frozen=True)
class VerifyVerdict:
    """Outcome of a monochromatic-copy search."""

    mode: str  # "exhaustive" | "sampled"
    result: str  # "none" | "counterexample"
    colour: str | None
    copy: dict[int, int] | None
    nodes: int
    seed: int
    downgraded: bool = False
    trials: int = 0

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "result": self.result,
            "colour": self.colour,
            "copy": sorted(self.copy.items()) if self.copy else None,
            "nodes": self.nodes,
            "seed": self.seed,
            "downgraded": self.downgraded,
            "trials": self.trials,
        }


def _verify_copy_direct(su: StepUpColouring, pattern: Hypergraph,
                        mapping: dict[int, int], colour_idx: int) -> bool:
    """Recheck a claimed copy from first principles: deltas by scanning the
    bit tuples, never the xor shortcut used by the searcher."""
    m = su.m
    for e in pattern.edges:
        ranks = sorted(mapping[v] for v in e)
        strings = [BinaryString.from_rank(r, m) for r in ranks]
        d1 = max(i + 1 for i in range(m) if strings[0].bits[i] != strings[1].bits[i])
        d2 = max(i + 1 for i in range(m) if strings[1].bits[i] != strings[2].bits[i])
        base = su.base.of(d1, d2)
        idx = (0 if d1 < d2 else 1) if base == RED else (2 if d1 < d2 else 3)
        if idx != colour_idx:
            return False
    return True


def _edges_completed_at(pattern: Hypergraph) -> list[list[tuple[int, ...]]]:
    out: list[list[tuple[int, ...]]] = [[] for _ in range(pattern.n_vertices)]
    for e in pattern.edges:
        out[max(e)].append(e)
    return out


def verify_no_mono_copy(
    su: StepUpColouring,
    pattern: Hypergraph,
    budget: SearchBudget = SearchBudget(),
    seed: int = 0,
) -> VerifyVerdict:
    """Search the lifted colouring for a copy of ``pattern`` whose edges all
    receive one colour.

    Exhaustive mode runs a pruned backtracking search per colour, with host
    candidates in rank order; if the node budget runs out it downgrades to
    sampled mode with a warning flag.  Any counterexample is re-verified by
    the independent bit-scanning checker before being reported.
    """
    if pattern.k != 3:
        raise ValueError("the lifted colouring is 3-uniform")
    n_host = su.n_vertices
    if pattern.n_vertices > n_host:
        raise ValueError("pattern has more vertices than the ground set")
    colour_of = su.colour_of
    if n_host <= 64:  # small enough to precompute every triple colour
        table = {
            t: su.colour_of(t) for t in itertools.combinations(range(n_host), 3)
        }
        colour_of = lambda t: table[tuple(sorted(t))]  # noqa: E731
    completed = _edges_completed_at(pattern)
    started = time.monotonic()
    nodes = 0

    def out_of_time() -> bool:
        if budget.max_millis is None:
            return False
        return (time.monotonic() - started) * 1000 > budget.max_millis

    class _Exhausted(Exception):
        pass

    def dfs(target: int, mapping: list[int], used: set[int]) -> dict[int, int] | None:
        nonlocal nodes
        i = len(mapping)
        if i == pattern.n_vertices:
            return dict(enumerate(mapping))
        for h in range(n_host):
            if h in used:
                continue
            nodes += 1
            if nodes > budget.max_nodes or (nodes % 4096 == 0 and out_of_time()):
                raise _Exhausted
            mapping.append(h)
            if all(
                colour_of(tuple(mapping[v] for v in e)) == target for e in completed[i]
            ):
                used.add(h)
                found = dfs(target, mapping, used)
                if found is not None:
                    return found
                used.discard(h)
            mapping.pop()
        return None

    if budget.mode == "exhaustive":
        try:
            for target in range(4):
                found = dfs(target, [], set())
                if found is not None:
                    assert _verify_copy_direct(su, pattern, found, target)
                    return VerifyVerdict(
                        "exhaustive", "counterexample", COLOUR_NAMES[target], found, nodes, seed
                    )
            return VerifyVerdict("exhaustive", "none", None, None, nodes, seed)
        except _Exhausted:
            pass
        downgraded = True
    else:
        downgraded = False

    trials = budget.trials or 10**4
    rng = rng_for(seed, 0x57E9)
    for t in range(trials):
        picks = rng.choice(n_host, size=pattern.n_vertices, replace=False)
        mapping = {v: int(picks[v]) for v in range(pattern.n_vertices)}
        colours = {colour_of(tuple(mapping[v] for v in e)) for e in pattern.edges}
        if len(colours) == 1:
            target = colours.pop()
            assert _verify_copy_direct(su, pattern, mapping, target)
            return VerifyVerdict(
                "sampled", "counterexample", COLOUR_NAMES[target], mapping,
                nodes, seed, downgraded, t + 1,
            )
    return VerifyVerdict("sampled", "none", None, None, nodes, seed, downgraded, trials)
