"""From 2- and q-coloured complete hypergraphs to partite embeddings:
monochromatic clique counting, the majority-colour clique hypergraph, a
random equitable partition, the degree-preserving partite extension of a
pattern, the end-to-end monochromatic-copy pipeline, and the explicit
bound calculators (tower function included).

All bound arithmetic is exact big-integer/rational; values that would blow
past the digit cap are returned symbolically instead of approximated.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import drc as drc_mod
from .embed import Embedding, check_embedding, embed_pattern
from .errors import BudgetExceededError, HyperRamseyError, RetriesExhaustedError, SizeLimitError
from .hypercore import (
    Edge,
    Hypergraph,
    PartiteHypergraph,
    max_degree,
    strong_chromatic_number,
)
from .seeds import child_seed, rng_for


class CertificateError(HyperRamseyError):
    """A projected copy failed its colour certificate; upstream bug."""


@dataclass(frozen=True)
class QColouring:
    """A total colouring of the k-subsets of [n] with colours 0..q-1."""

    k: int
    n_vertices: int
    q: int
    fn: Callable[[Edge], int]

    def colour_of(self, kset: Iterable[int]) -> int:
        e = tuple(sorted(kset))
        if len(e) != self.k or len(set(e)) != self.k:
            raise ValueError(f"{e} is not a {self.k}-subset")
        if e[0] < 0 or e[-1] >= self.n_vertices:
            raise ValueError(f"{e} is outside the vertex range")
        c = self.fn(e)
        if not 0 <= c < self.q:
            raise ValueError(f"colour {c} out of range for q={self.q}")
        return c

    @classmethod
    def from_table(cls, k: int, n: int, q: int, table: dict[Edge, int]) -> "QColouring":
        tidy = {tuple(sorted(e)): int(c) for e, c in table.items()}
        missing = sum(1 for e in itertools.combinations(range(n), k) if e not in tidy)
        if missing:
            raise ValueError(f"table misses {missing} {k}-subsets")
        return cls(k, n, q, lambda e: tidy[e])

    @classmethod
    def constant(cls, k: int, n: int, q: int, colour: int = 0) -> "QColouring":
        return cls(k, n, q, lambda e: colour)

    @classmethod
    def random(cls, k: int, n: int, q: int, seed: int) -> "QColouring":
        rng = rng_for(seed, 0xC0105)
        table = {
            e: int(rng.integers(q)) for e in itertools.combinations(range(n), k)
        }
        return cls(k, n, q, lambda e: table[e])

    def to_json(self, budget: int = 10**6) -> dict:
        if math.comb(self.n_vertices, self.k) > budget:
            raise BudgetExceededError("too many subsets to serialise explicitly")
        return {
            "k": self.k,
            "n": self.n_vertices,
            "q": self.q,
            "edges": [
                [list(e), self.colour_of(e)]
                for e in itertools.combinations(range(self.n_vertices), self.k)
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "QColouring":
        table = {tuple(e): int(c) for e, c in obj["edges"]}
        return cls.from_table(int(obj["k"]), int(obj["n"]), int(obj["q"]), table)


def pentagon_colouring() -> QColouring:
    """K_5 with a red (colour 0) 5-cycle and blue (colour 1) complement."""
    cycle = {(i, (i + 1) % 5) for i in range(5)}
    cycle = {tuple(sorted(p)) for p in cycle}
    return QColouring(2, 5, 2, lambda e: 0 if e in cycle else 1)


def tower(i: int, x: int, digit_cap: int = 10**6) -> int:
    """Iterated exponential: height 1 is x itself, each extra level is
    2 to the previous value.  Refuses once values pass ``digit_cap`` digits."""
    if i < 1:
        raise ValueError("height must be >= 1")
    if x != int(x):
        raise ValueError("only integral arguments are supported exactly")
    value = int(x)
    for _ in range(i - 1):
        if value * 0.30103 > digit_cap:  # digits of 2**value
            raise SizeLimitError(f"tower value would exceed {digit_cap} digits")
        value = 2**value
    return value


def count_mono_cliques(c: QColouring, l: int, budget: int = 10**7) -> list[int]:
    """Per-colour counts of l-subsets all of whose k-subsets share that
    colour, via extension search that prunes any prefix already showing a
    second colour."""
    if l < c.k:
        raise ValueError("clique size below uniformity")
    if math.comb(c.n_vertices, l) > budget:
        raise BudgetExceededError(f"C({c.n_vertices},{l}) exceeds budget {budget}")
    return [len(_mono_cliques(c, col, l)) for col in range(c.q)]


def clique_hypergraph(c: QColouring, colour: int, l: int, budget: int = 10**7) -> Hypergraph:
    """The l-uniform hypergraph whose edges are the colour-``colour``
    monochromatic l-subsets."""
    if math.comb(c.n_vertices, l) > budget:
        raise BudgetExceededError(f"C({c.n_vertices},{l}) exceeds budget {budget}")
    return Hypergraph(l, c.n_vertices, tuple(_mono_cliques(c, colour, l)))


def _mono_cliques(c: QColouring, colour: int, l: int) -> list[Edge]:
    found: list[Edge] = []
    prefix: list[int] = []

    def extend(start: int) -> None:
        if len(prefix) == l:
            found.append(tuple(prefix))
            return
        for v in range(start, c.n_vertices - (l - len(prefix)) + 1):
            if len(prefix) >= c.k - 1:
                ok = all(
                    c.colour_of(rest + (v,)) == colour
                    for rest in itertools.combinations(prefix, c.k - 1)
                )
                if not ok:
                    continue
            prefix.append(v)
            extend(v + 1)
            prefix.pop()

    extend(0)
    return found


def transversal_probability(n: int, l: int) -> Fraction:
    """Exact chance that a fixed l-set ends up with one vertex in each part
    of a uniformly random equitable l-partition of [n]."""
    if n % l:
        raise ValueError("part size must divide the vertex count")
    size = n // l
    good = math.factorial(l) * math.factorial(n - l) // math.factorial(size - 1) ** l
    total = math.factorial(n) // math.factorial(size) ** l
    return Fraction(good, total)


def random_equitable_partition(g: Hypergraph, seed: int) -> PartiteHypergraph:
    """Partition the vertex set into ``g.k`` equal random parts and keep
    the transversal edges."""
    l = g.k
    if g.n_vertices % l:
        raise ValueError(f"{l} does not divide {g.n_vertices}")
    size = g.n_vertices // l
    perm = rng_for(seed, 0x9A57).permutation(g.n_vertices).tolist()
    parts = [sorted(perm[i * size : (i + 1) * size]) for i in range(l)]
    owner = {v: i for i, part in enumerate(parts) for v in part}
    edges = [e for e in g.edges if len({owner[v] for v in e}) == l]
    return PartiteHypergraph.make(parts, edges)


@dataclass(frozen=True)
class PartiteExtension:
    """A pattern extended to an l-partite l-uniform pattern.

    Original vertices keep their ids (0..n-1) and sit in the part given by
    a proper strong colouring; each original edge gains one fresh auxiliary
    vertex in every part it misses.
    """

    pattern: PartiteHypergraph
    parts: tuple[tuple[int, ...], ...]
    n_original: int
    colouring: dict[int, int]


def extend_to_partite(h: Hypergraph, l: int) -> PartiteExtension:
    """Extend ``h`` to an l-partite pattern without raising its maximum
    degree; refuses when l is below the strong chromatic number."""
    if l < h.k:
        raise ValueError("need at least as many parts as the uniformity")
    count, colouring = strong_chromatic_number(h, "greedy")
    if count > l:
        try:
            count, colouring = strong_chromatic_number(h, "exact")
        except SizeLimitError:
            raise SizeLimitError(
                f"greedy colouring needs {count} > {l} parts and the instance is too "
                "large to certify the exact strong chromatic number"
            )
    if count > l:
        raise ValueError(f"l={l} is below the strong chromatic number {count}")
    part_lists: list[list[int]] = [[] for _ in range(l)]
    for v in range(h.n_vertices):
        part_lists[colouring.get(v, 0)].append(v)
    next_id = h.n_vertices
    edges = []
    for e in h.edges:
        present = {colouring[v] for v in e}
        full = list(e)
        for part in range(l):
            if part not in present:
                part_lists[part].append(next_id)
                full.append(next_id)
                next_id += 1
        edges.append(full)
    pattern = PartiteHypergraph.make(part_lists, edges)
    return PartiteExtension(pattern, pattern.parts, h.n_vertices, dict(colouring))


@dataclass(frozen=True)
class CertificateRow:
    edge: Edge
    image: Edge
    colour: int


@dataclass(frozen=True)
class Projection:
    vertex_map: dict[int, int]
    colour: int
    certificate: tuple[CertificateRow, ...]

    def to_json(self) -> dict:
        return {
            "vertex_map": {str(v): h for v, h in sorted(self.vertex_map.items())},
            "colour": self.colour,
            "certificate": [
                {"edge": list(r.edge), "image": list(r.image), "colour": r.colour}
                for r in self.certificate
            ],
        }


def project_embedding(
    emb: Embedding,
    c: QColouring,
    h: Hypergraph,
    expected_colour: int | None = None,
) -> Projection:
    """Restrict an embedding of the extended pattern to the original
    vertices and certify edge by edge that every image k-set carries one
    colour."""
    vmap = {}
    for v in range(h.n_vertices):
        if v not in emb.assignment:
            raise CertificateError(f"original vertex {v} missing from the embedding")
        vmap[v] = emb.assignment[v]
    rows = []
    seen: set[int] = set()
    for e in h.edges:
        image = tuple(sorted(vmap[v] for v in e))
        col = c.colour_of(image)
        rows.append(CertificateRow(e, image, col))
        seen.add(col)
    if h.edges:
        if len(seen) != 1:
            raise CertificateError(f"images carry several colours: {sorted(seen)}")
        colour = seen.pop()
        if expected_colour is not None and colour != expected_colour:
            raise CertificateError(
                f"images carry colour {colour}, expected {expected_colour}"
            )
    else:
        colour = expected_colour if expected_colour is not None else 0
    return Projection(vmap, colour, tuple(rows))


@dataclass
class PipelineConfig:
    """Desk-scale knobs for the end-to-end pipeline."""

    seed: int = 0
    l: int | str = "degree"  # "degree", "chromatic", or an explicit part count
    s: int | None = None  # None: twice (parts * degree bound)
    beta: Fraction | None = None
    beta_floor: Fraction = Fraction(1, 2**16)
    beta_exponent_cap: int = 10**4
    attempts: int = 10
    max_retries: int | None = None
    retry_cap: int = 200
    clique_budget: int = 10**7
    census_budget: int = 10**6
    census_sample_size: int = 1024
    node_budget: int = 10**5
    policy: str = "backtrack"


@dataclass
class PipelineReport:
    ok: bool
    stages: list[dict]
    colour: int | None = None
    projection: Projection | None = None
    seed: int = 0

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "colour": self.colour,
            "projection": self.projection.to_json() if self.projection else None,
            "stages": self.stages,
            "seed": self.seed,
        }


def _pipeline_l(h: Hypergraph, cfg: PipelineConfig) -> int:
    if isinstance(cfg.l, int):
        return cfg.l
    if cfg.l == "degree":
        return (h.k - 1) * max_degree(h) + 1
    if cfg.l == "chromatic":
        try:
            count, _ = strong_chromatic_number(h, "exact")
        except SizeLimitError:
            count, _ = strong_chromatic_number(h, "greedy")
        return max(count, h.k)
    raise ValueError(f"unknown l mode {cfg.l!r}")


def _faithful_beta(epsilon: Fraction, l: int, degree_bound: int, cfg: PipelineConfig) -> Fraction:
    """2 * (eps/2)^((2*l*degree)^(l-1)) when that exponent is tractable,
    otherwise the configured floor."""
    exponent = (2 * l * degree_bound) ** (l - 1)
    if exponent > cfg.beta_exponent_cap:
        return cfg.beta_floor
    beta = 2 * (epsilon / 2) ** exponent
    return min(beta, Fraction(1)) if beta > 0 else cfg.beta_floor


def _truncate(g: Hypergraph, n_keep: int) -> Hypergraph:
    edges = tuple(e for e in g.edges if e[-1] < n_keep)
    return Hypergraph(g.k, n_keep, edges)


def ramsey_pipeline(c: QColouring, h: Hypergraph, cfg: PipelineConfig | None = None) -> PipelineReport:
    """Hunt for a monochromatic copy of ``h`` inside the colouring ``c``.

    Composition: per-colour monochromatic clique counts -> clique
    hypergraph of the strongest colour -> random equitable partition ->
    condensation chain -> partite embedding of the extended pattern ->
    projection with a colour certificate.  Colours are tried in descending
    clique-count order; partition, chain, and embedding are retried
    jointly up to ``cfg.attempts`` times per colour.  Failures come back
    as reports, not exceptions.
    """
    cfg = cfg or PipelineConfig()
    stages: list[dict] = []
    report = PipelineReport(False, stages, seed=cfg.seed)
    degree_h = max_degree(h)
    l = _pipeline_l(h, cfg)
    stages.append({"stage": "parameters", "l": l, "pattern_degree": degree_h})
    try:
        extension = extend_to_partite(h, l)
    except (ValueError, SizeLimitError) as exc:
        stages.append({"stage": "extend", "ok": False, "error": str(exc)})
        return report
    pattern = extension.pattern
    degree_f = max(degree_h, 1)
    s = cfg.s if cfg.s is not None else 2 * l * degree_f
    stages.append(
        {
            "stage": "extend",
            "ok": True,
            "pattern_vertices": pattern.n_vertices,
            "pattern_edges": len(pattern.edges),
            "s": s,
        }
    )
    try:
        counts = count_mono_cliques(c, l, cfg.clique_budget)
    except BudgetExceededError as exc:
        stages.append({"stage": "cliques", "ok": False, "error": str(exc)})
        return report
    stages.append({"stage": "cliques", "ok": True, "counts": counts})
    order = sorted(range(c.q), key=lambda col: (-counts[col], col))
    n_keep = l * (c.n_vertices // l)
    min_last = max(len(pattern.parts[-1]), 1)
    for colour in order:
        if counts[colour] == 0:
            stages.append({"stage": "colour", "colour": colour, "ok": False, "error": "no cliques"})
            continue
        cliques = clique_hypergraph(c, colour, l, cfg.clique_budget)
        for attempt in range(cfg.attempts):
            attempt_stage: dict = {"stage": "attempt", "colour": colour, "attempt": attempt}
            stages.append(attempt_stage)
            host = random_equitable_partition(
                _truncate(cliques, n_keep), child_seed(cfg.seed, colour, attempt, 1)
            )
            epsilon = drc_mod.edge_density(host)
            attempt_stage["partite_edges"] = len(host.edges)
            if epsilon == 0:
                attempt_stage["error"] = "no transversal edges"
                continue
            beta = cfg.beta if cfg.beta is not None else _faithful_beta(epsilon, l, degree_f, cfg)
            try:
                chain = drc_mod.drc_chain(
                    host,
                    degree_f,
                    s,
                    beta,
                    child_seed(cfg.seed, colour, attempt, 2),
                    max_retries=cfg.max_retries,
                    retry_cap=cfg.retry_cap,
                    min_last_survivors=min_last,
                    census_budget=cfg.census_budget,
                )
            except RetriesExhaustedError as exc:
                attempt_stage["error"] = f"chain: {exc}"
                continue
            attempt_stage["level_edges"] = [len(lvl.edges) for lvl in chain.levels]
            result = embed_pattern(
                chain,
                pattern,
                cfg.policy,
                child_seed(cfg.seed, colour, attempt, 3),
                cfg.node_budget,
            )
            attempt_stage["nodes_expanded"] = result.nodes_expanded
            attempt_stage["deepest_frontier"] = result.deepest_frontier
            if not result.ok:
                attempt_stage["error"] = "embedding failed"
                continue
            assert result.embedding is not None
            if not check_embedding(host, pattern, result.embedding):
                raise CertificateError("embedder returned an unsound embedding")
            projection = project_embedding(result.embedding, c, h, expected_colour=colour)
            attempt_stage["ok"] = True
            report.ok = True
            report.colour = colour
            report.projection = projection
            return report
    return report


# ---------------------------------------------------------------------------
# explicit bound calculators


@dataclass(frozen=True)
class BoundParams:
    """Inputs for the bound calculators.

    ``rkl`` is a caller-supplied value (or upper bound) for the q-colour
    Ramsey number of the complete k-uniform hypergraph on the relevant
    part count; alternatively ``erdos_rado_c`` resolves it as
    ``tower(k, ceil(c * l))``.  Neither constant is defaulted: inventing
    one would fake precision.
    """

    k: int
    degree: int
    q: int = 2
    rkl: int | None = None
    erdos_rado_c: Fraction | None = None

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        if self.q < 2:
            raise ValueError("q must be >= 2")
        if self.rkl is None and self.erdos_rado_c is None:
            raise ValueError("supply rkl or erdos_rado_c")


@dataclass(frozen=True)
class BoundResult:
    mode: str
    value: int | None  # None when past the digit cap
    symbolic: str
    trace: tuple[tuple[str, str, str], ...]

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "value": str(self.value) if self.value is not None else None,
            "symbolic": self.symbolic,
            "trace": [list(row) for row in self.trace],
        }


def _resolve_rkl(p: BoundParams, l: int, digit_cap: int, trace: list) -> int | None:
    if p.rkl is not None:
        if p.rkl < l:
            raise ValueError(f"rkl={p.rkl} below the trivial lower bound {l}")
        trace.append(("rkl", f"literal r_{p.k}({l};{p.q})", str(p.rkl)))
        return p.rkl
    x = math.ceil(p.erdos_rado_c * l)
    trace.append(("rkl", f"tower({p.k}, ceil(c*l)) with c={p.erdos_rado_c}, l={l}", f"tower({p.k},{x})"))
    try:
        value = tower(p.k, x, digit_cap)
        trace.append(("rkl", "tower evaluated", str(value)))
        return value
    except SizeLimitError:
        trace.append(("rkl", "tower past digit cap", "symbolic"))
        return None


def _power_with_cap(base: int, exponent: int, digit_cap: int) -> int | None:
    if base < 2:
        return base**exponent
    digits = exponent * math.log10(base)
    if digits > digit_cap:
        return None
    return base**exponent


def _ceil_mult_sqrt(c: Fraction, m: int) -> int:
    """Exact ceil(c * sqrt(m)) for a positive rational c and integer m."""
    if c <= 0 or m < 0:
        raise ValueError("need c > 0 and m >= 0")
    # Smallest x with (x * den)^2 >= num^2 * m.
    target = c.numerator**2 * m
    den = c.denominator
    x = math.isqrt(target) // den
    while (x * den) ** 2 < target:
        x += 1
    return x


def bound_calculator(
    p: BoundParams,
    mode: str,
    l: int | None = None,
    m: int | None = None,
    lower_c: Fraction | None = None,
    digit_cap: int = 10**5,
) -> BoundResult:
    """Per-vertex Ramsey factors with a step-by-step derivation trace.

    Modes: ``degree`` (k >= 3; factor ``rkl^((2k*degree^2)^(k*degree))``
    over part count k*degree), ``chromatic`` (factor ``rkl^((2l*degree)^l)``
    at a given strong chromatic number l), ``edges`` (first
    ``l = ceil(k*sqrt(m))``, then the chromatic formula), and
    ``edges-lower`` (the 4-colour lower bound ``tower(3, ceil(c*sqrt(m)))``
    with caller-supplied c).  Values past ``digit_cap`` digits come back
    symbolic, never rounded.
    """
    trace: list[tuple[str, str, str]] = []
    if mode == "degree":
        if p.k < 3:
            raise ValueError("the degree-parameter bound needs k >= 3")
        l_eff = p.k * p.degree
        trace.append(("parts", "l = k*degree", str(l_eff)))
        exponent = (2 * p.k * p.degree**2) ** (p.k * p.degree)
        trace.append(
            ("exponent", f"(2k*degree^2)^(k*degree) = (2*{p.k}*{p.degree}^2)^({p.k}*{p.degree})", str(exponent))
        )
        trace.append(
            (
                "embedding threshold",
                "host part size needed: (eps/2)^-(2l*degree)^(l-1) * degree^2 * n",
                f"(eps/2)^-{(2 * l_eff * p.degree) ** (l_eff - 1)} * {p.degree**2} * n",
            )
        )
        base = _resolve_rkl(p, l_eff, digit_cap, trace)
        symbolic = f"rkl^{exponent}" if base is None else f"{base}^{exponent}"
        value = None if base is None else _power_with_cap(base, exponent, digit_cap)
        trace.append(("factor", "rkl^exponent", symbolic if value is None else str(value)))
        return BoundResult(mode, value, symbolic, tuple(trace))
    if mode == "chromatic":
        if l is None:
            raise ValueError("chromatic mode needs l")
        exponent = (2 * l * p.degree) ** l
        trace.append(("exponent", f"(2l*degree)^l = (2*{l}*{p.degree})^{l}", str(exponent)))
        base = _resolve_rkl(p, l, digit_cap, trace)
        symbolic = f"rkl^{exponent}" if base is None else f"{base}^{exponent}"
        value = None if base is None else _power_with_cap(base, exponent, digit_cap)
        trace.append(("factor", "rkl^exponent", symbolic if value is None else str(value)))
        return BoundResult(mode, value, symbolic, tuple(trace))
    if mode == "edges":
        if m is None:
            raise ValueError("edges mode needs m")
        l_eff = _ceil_mult_sqrt(Fraction(p.k), m)
        trace.append(("parts", f"l = ceil(k*sqrt(m)) = ceil({p.k}*sqrt({m}))", str(l_eff)))
        inner = bound_calculator(p, "chromatic", l=l_eff, digit_cap=digit_cap)
        return BoundResult(mode, inner.value, inner.symbolic, tuple(trace) + inner.trace)
    if mode == "edges-lower":
        if m is None:
            raise ValueError("edges-lower mode needs m")
        if lower_c is None:
            raise ValueError("edges-lower mode needs an explicit constant")
        x = _ceil_mult_sqrt(lower_c, m)
        trace.append(("height", f"x = ceil(c*sqrt(m)) with c={lower_c}, m={m}", str(x)))
        symbolic = f"tower(3,{x})"
        try:
            value = tower(3, x, digit_cap)
        except SizeLimitError:
            value = None
        trace.append(("factor", "tower(3, x)", symbolic if value is None else str(value)))
        return BoundResult(mode, value, symbolic, tuple(trace))
    raise ValueError(f"unknown mode {mode!r}")
