"""Dependent-random-choice condensation: one sampling step, its iterated
chain, and the dangerous-set census.

A step takes an r-partite level with equal part sizes N, samples a multiset
T of s vertices from the leading part, and keeps exactly those transversals
of the trailing parts that extend to an edge through every vertex of T.
Densities follow the recurrence ``delta_{r-1} = delta_r ** s / 2`` and are
tracked in exact rationals throughout; binary floating point would
underflow after a handful of levels.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceededError, RetriesExhaustedError
from .hypercore import Edge, PartiteHypergraph
from .seeds import rng_for


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def equal_part_size(g: PartiteHypergraph) -> int:
    sizes = set(g.part_sizes())
    if len(sizes) != 1:
        raise ValueError(f"parts must have equal sizes, got {sorted(sizes)}")
    return sizes.pop()


def edge_density(g: PartiteHypergraph) -> Fraction:
    """|edges| / N^l, exact."""
    n = equal_part_size(g)
    return Fraction(len(g.edges), n**g.l)


def leading_links(g: PartiteHypergraph) -> dict[int, frozenset[Edge]]:
    """For each vertex v of the leading part, the set of trailing-part
    transversals e with (v,)+e an edge."""
    links: dict[int, set[Edge]] = {v: set() for v in g.parts[0]}
    for e in g.edges:
        links[e[0]].add(e[1:])
    return {v: frozenset(s) for v, s in links.items()}


def edge_degree(g: PartiteHypergraph, e: Edge) -> int:
    """Number of leading-part vertices v with (v,)+e an edge of g."""
    if len(e) != g.l - 1:
        raise ValueError(f"expected a transversal of the {g.l - 1} trailing parts")
    for i, v in enumerate(e):
        if v not in g.parts[i + 1]:
            raise ValueError(f"vertex {v} is not in part {i + 1}")
    edge_set = g.edge_set()
    return sum(1 for v in g.parts[0] if (v,) + e in edge_set)


def exact_expected_survivors(g: PartiteHypergraph, s: int, budget: int = 10**7) -> Fraction:
    """Expected survivor count for an s-sample: the sum over trailing-part
    transversals e of (degree(e)/N)^s, computed exactly.

    Transversals of degree zero contribute nothing, so the sum only visits
    truncations that actually occur among the edges.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    n = equal_part_size(g)
    if len(g.edges) > budget:
        raise BudgetExceededError(f"{len(g.edges)} edges exceed budget {budget}")
    degree: dict[Edge, int] = {}
    for e in g.edges:
        degree[e[1:]] = degree.get(e[1:], 0) + 1
    return sum((Fraction(d, n) ** s for d in degree.values()), Fraction(0))


@dataclass(frozen=True)
class DrcParams:
    """Knobs for one condensation step."""

    s: int
    beta: Fraction
    delta_target: Fraction
    max_retries: int
    seed: int
    min_survivors: int = 1

    def __post_init__(self) -> None:
        if self.s < 1:
            raise ValueError("s must be >= 1")
        if not 0 < self.beta <= 1:
            raise ValueError("beta must be in (0, 1]")
        if not 0 < self.delta_target <= 1:
            raise ValueError("delta_target must be in (0, 1]")
        if self.max_retries < 1:
            raise ValueError("max_retries must be >= 1")


@dataclass(frozen=True)
class DrcSample:
    """One sampling attempt: the witness multiset T and what survived it."""

    witnesses: tuple[int, ...]
    survivor_edges: tuple[Edge, ...]
    x: int

    def __post_init__(self) -> None:
        if self.x != len(self.survivor_edges):
            raise ValueError("x must equal the survivor count")


@dataclass(frozen=True)
class DangerousCensus:
    """Counts of dangerous edge sets by weight, next to their ceilings.

    A nonempty set S of at most ``degree_bound`` lower-level edges is
    dangerous when fewer than beta*N leading-part vertices extend every
    edge of S.  The ceiling for weight w is
    ``4*r*degree_bound * eps^-s * beta^s * w^(r*degree_bound) * r^w * N^w``
    with eps the upper level's density.  In sampled (unaudited) mode the
    per-weight values are unbiased estimates rather than exact counts.
    """

    per_weight: dict[int, float]
    bound_per_weight: dict[int, Fraction]
    within_bounds: bool
    audited: bool
    subsets_seen: int

    def to_json(self) -> dict:
        return {
            "Yw": {str(w): self.per_weight[w] for w in sorted(self.per_weight)},
            "Yw_bound": {str(w): frac_str(b) for w, b in sorted(self.bound_per_weight.items())},
            "within_bounds": self.within_bounds,
            "audited": self.audited,
            "subsets_seen": self.subsets_seen,
        }


def _census_ceilings(
    r: int,
    n: int,
    degree_bound: int,
    epsilon: Fraction,
    s: int,
    beta: Fraction,
    weights: list[int],
) -> dict[int, Fraction]:
    alpha = Fraction(4 * r * degree_bound) / epsilon**s
    return {w: alpha * beta**s * w ** (r * degree_bound) * r**w * n**w for w in weights}


def _dangerous_weight(
    subset: tuple[Edge, ...],
    extension_sets: dict[Edge, frozenset[int]],
    beta_n: Fraction,
) -> tuple[int, bool]:
    union: set[int] = set()
    common: frozenset[int] | None = None
    for e in subset:
        union.update(e)
        common = extension_sets[e] if common is None else common & extension_sets[e]
    return len(union), len(common) < beta_n  # type: ignore[arg-type]


def dangerous_census(
    upper: PartiteHypergraph,
    lower: PartiteHypergraph,
    degree_bound: int,
    beta: Fraction,
    budget: int = 10**7,
    seed: int = 0,
    sample_size: int = 10**5,
    s: int = 1,
) -> DangerousCensus:
    """Census of dangerous subsets of ``lower``'s edges relative to ``upper``.

    Enumerates every nonempty subset of size at most ``degree_bound`` when
    the subset count fits the budget; otherwise samples subsets uniformly
    and reports scaled estimates flagged as unaudited.  ``s`` only enters
    the ceilings, which are evaluated at the sampling exponent the caller
    used to build ``lower``.
    """
    if lower.parts != upper.parts[1:]:
        raise ValueError("lower level must live on the trailing parts of the upper level")
    r = upper.l
    n = equal_part_size(upper)
    epsilon = edge_density(upper)
    if epsilon == 0:
        raise ValueError("upper level has no edges; the census ceiling is undefined")
    m = len(lower.edges)
    cap = min(degree_bound, m)
    weights = list(range(r - 1, (r - 1) * cap + 1)) if m else []
    ceilings = _census_ceilings(r, n, degree_bound, epsilon, s, beta, weights)
    links = leading_links(upper)
    extension_sets = {
        e: frozenset(v for v in upper.parts[0] if e in links[v]) for e in lower.edges
    }
    beta_n = beta * n
    total = sum(math.comb(m, t) for t in range(1, cap + 1))
    counts: dict[int, float] = {w: 0 for w in weights}
    if total <= budget:
        for t in range(1, cap + 1):
            for subset in itertools.combinations(lower.edges, t):
                w, dangerous = _dangerous_weight(subset, extension_sets, beta_n)
                if dangerous:
                    counts[w] += 1
        audited = True
        seen = total
    else:
        rng = rng_for(seed, 0xCE45)
        sizes = [math.comb(m, t) for t in range(1, cap + 1)]
        probs = [sz / total for sz in sizes]
        hits: dict[int, int] = {w: 0 for w in weights}
        for _ in range(sample_size):
            t = 1 + int(rng.choice(cap, p=probs))
            idx = rng.choice(m, size=t, replace=False)
            subset = tuple(lower.edges[i] for i in idx)
            w, dangerous = _dangerous_weight(subset, extension_sets, beta_n)
            if dangerous:
                hits[w] += 1
        counts = {w: hits[w] * total / sample_size for w in weights}
        audited = False
        seen = sample_size
    within = all(counts[w] < ceilings[w] for w in weights)
    return DangerousCensus(counts, ceilings, within, audited, seen)


def _sample_step(g: PartiteHypergraph, links: dict[int, frozenset[Edge]],
                 s: int, rng) -> DrcSample:
    part0 = g.parts[0]
    picks = sorted(int(part0[i]) for i in rng.integers(0, len(part0), size=s))
    survivors: frozenset[Edge] | None = None
    for v in set(picks):
        survivors = links[v] if survivors is None else survivors & links[v]
        if not survivors:
            break
    edges = tuple(sorted(survivors or ()))
    return DrcSample(tuple(picks), edges, len(edges))


def drc_step(
    g: PartiteHypergraph,
    degree_bound: int,
    p: DrcParams,
    census_budget: int = 10**7,
) -> tuple[PartiteHypergraph, DrcSample, DangerousCensus]:
    """One condensation step: resample T until the survivor level is dense
    enough, then census its dangerous subsets.

    Success means ``x >= delta_target * N^(r-1)`` and ``x >= min_survivors``.
    Raises :class:`RetriesExhaustedError` carrying the best attempt when the
    retry cap runs out.
    """
    if g.l < 2:
        raise ValueError("need at least 2 parts to condense")
    n = equal_part_size(g)
    r = g.l
    links = leading_links(g)
    needed = p.delta_target * n ** (r - 1)
    best: DrcSample | None = None
    for attempt in range(p.max_retries):
        sample = _sample_step(g, links, p.s, rng_for(p.seed, 0xD6C, attempt))
        if best is None or sample.x > best.x:
            best = sample
        if sample.x >= needed and sample.x >= p.min_survivors:
            level = PartiteHypergraph(g.parts[1:], sample.survivor_edges)
            census = dangerous_census(
                g, level, degree_bound, p.beta, census_budget, p.seed, s=p.s
            )
            return level, sample, census
    raise RetriesExhaustedError(
        f"no sample reached {float(needed):.3g} survivors in {p.max_retries} attempts "
        f"(best x={best.x if best else 0})",
        best=best,
        attempts=p.max_retries,
    )


def chain_density_closed_form(epsilon: Fraction, s: int, i: int) -> Fraction:
    """Density target i levels below the top: 2^-(s^i-1)/(s-1) * eps^(s^i),
    with the geometric-sum exponent so s = 1 is well defined."""
    exponent = sum(s**j for j in range(i))
    return Fraction(1, 2**exponent) * epsilon ** (s**i)


@dataclass(frozen=True)
class DrcChain:
    """Levels from the full host down to a single part, with the density
    targets that each level was required to meet."""

    levels: tuple[PartiteHypergraph, ...]
    densities: tuple[Fraction, ...]
    params: tuple[DrcParams, ...]
    samples: tuple[DrcSample, ...]
    censuses: tuple[DangerousCensus, ...]

    @property
    def top(self) -> PartiteHypergraph:
        return self.levels[0]

    def level_for_uniformity(self, r: int) -> PartiteHypergraph:
        return self.levels[self.top.l - r]

    def step_reports(self) -> list[dict]:
        out = []
        for i, (p, sample, census) in enumerate(zip(self.params, self.samples, self.censuses)):
            out.append(
                {
                    "level": self.top.l - i - 1,
                    "s": p.s,
                    "beta": frac_str(p.beta),
                    "x": sample.x,
                    "delta_required": frac_str(p.delta_target),
                    "seed": p.seed,
                    **self.censuses[i].to_json(),
                }
            )
        return out


def drc_chain(
    g: PartiteHypergraph,
    degree_bound: int,
    s: int,
    beta: Fraction,
    seed: int,
    max_retries: int | None = None,
    retry_cap: int = 1000,
    min_last_survivors: int = 1,
    census_budget: int = 10**7,
) -> DrcChain:
    """Iterate condensation down to one part.

    The density targets follow ``delta_top = eps`` (the host's actual
    density) and ``delta_{r-1} = delta_r^s / 2``.  The default retry cap is
    ``ceil(8 / eps^s)`` (clamped to ``retry_cap``), matching the success
    probability of a single sampling round.  ``min_last_survivors`` lets
    callers insist on enough surviving bottom-level vertices to host a
    pattern part.
    """
    equal_part_size(g)
    epsilon = edge_density(g)
    if max_retries is None:
        es = float(epsilon**s)
        max_retries = retry_cap if es <= 0 else min(retry_cap, max(1, math.ceil(8 / es)))
    densities = [epsilon]
    for _ in range(g.l - 1):
        densities.append(densities[-1] ** s / 2)
    levels = [g]
    params: list[DrcParams] = []
    samples: list[DrcSample] = []
    censuses: list[DangerousCensus] = []
    for i in range(g.l - 1):
        target = densities[i + 1]
        if not 0 < target <= 1:
            raise ValueError("density target left (0,1]; the host level is empty")
        p = DrcParams(
            s=s,
            beta=beta,
            delta_target=target,
            max_retries=max_retries,
            seed=seed + i,
            min_survivors=min_last_survivors if i == g.l - 2 else 1,
        )
        level, sample, census = drc_step(levels[-1], degree_bound, p, census_budget)
        levels.append(level)
        params.append(p)
        samples.append(sample)
        censuses.append(census)
    return DrcChain(tuple(levels), tuple(densities), tuple(params), tuple(samples), tuple(censuses))
