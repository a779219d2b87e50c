"""Graphs that seed storage systems, and code construction over GF(q).

A qualifying graph is simple, connected, has vertices ordered by
nondecreasing degree with minimum degree 2, and its first k vertices form
an independent set. Each vertex becomes a node storing deg(v) packets,
its neighbor set becomes the node's single surviving set, beta is 1, and
the file size is the sum of the first k degrees.

Packets are distributed in two steps: the first k nodes split the B
standard basis vectors contiguously; every later node j draws its packets
as seeded random linear combinations of the packets already placed on its
earlier neighbors (adjacent vertices with smaller index). A candidate
code is accepted only after the full verification suite passes, retrying
with fresh coefficients up to a budget, which turns a per-instance claim
into a checked certificate.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import (ConstructionFailedError, ConstructionImpossibleError,
                     ValidationError)
from .field import Field, Vector, combine, rank
from .model import DssSpec, validate_dss


@dataclass(frozen=True)
class GraphSpec:
    """An ordered graph on vertices 1..n with undirected edges.

    The edge list is kept exactly as parsed (duplicates and loops
    included) so validation can report them; query helpers deduplicate.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValidationError(f"vertex count must be an integer >= 1, got {self.n!r}")
        for e in self.edges:
            if len(e) != 2 or any(not isinstance(v, int) or isinstance(v, bool) for v in e):
                raise ValidationError(f"edge {e!r} is not a pair of vertex ids")
            if any(not 1 <= v <= self.n for v in e):
                raise ValidationError(f"edge {e!r} references a vertex outside 1..{self.n}")

    def neighbors(self, i: int) -> set[int]:
        out = set()
        for a, b in self.edges:
            if a == i and b != i:
                out.add(b)
            elif b == i and a != i:
                out.add(a)
        return out

    def degree(self, i: int) -> int:
        return len(self.neighbors(i))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "vertices": list(range(1, self.n + 1)),
            "edges": [list(e) for e in self.edges],
        }

    @classmethod
    def from_json(cls, raw: Mapping) -> "GraphSpec":
        if not isinstance(raw, Mapping):
            raise ValidationError("graph description must be a JSON object")
        n = raw.get("n")
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ValidationError(f"n: expected an integer >= 1, got {n!r}")
        vertices = raw.get("vertices", list(range(1, n + 1)))
        if list(vertices) != list(range(1, n + 1)):
            raise ValidationError(
                f"vertices: must be exactly [1..{n}] in order (the order carries "
                f"the degree rule), got {vertices!r}"
            )
        edges = raw.get("edges")
        if not isinstance(edges, list):
            raise ValidationError("edges: expected a list of pairs")
        return cls(n=n, edges=tuple(tuple(e) for e in edges))


def validate_graph(graph: GraphSpec, k: int) -> GraphSpec:
    """Check every qualifying condition, reporting all violations.

    Distinct error codes: k-range, loop, parallel-edge, min-degree,
    degree-order, disconnected, first-k-adjacent.
    """
    errors: list[str] = []
    if not isinstance(k, int) or not 1 <= k < graph.n:
        errors.append(f"k-range: k must satisfy 1 <= k < n={graph.n}, got {k!r}")
        raise ValidationError(errors)

    seen = set()
    for a, b in graph.edges:
        if a == b:
            errors.append(f"loop: edge {{{a},{b}}} joins a vertex to itself")
            continue
        key = (min(a, b), max(a, b))
        if key in seen:
            errors.append(f"parallel-edge: edge {{{key[0]},{key[1]}}} appears more than once")
        seen.add(key)

    degrees = [graph.degree(i) for i in range(1, graph.n + 1)]
    for i, d in enumerate(degrees, start=1):
        if d < 2:
            errors.append(f"min-degree: vertex {i} has degree {d} < 2")
    for i in range(1, graph.n):
        if degrees[i - 1] > degrees[i]:
            errors.append(
                f"degree-order: deg(v{i})={degrees[i - 1]} exceeds deg(v{i + 1})={degrees[i]}"
            )

    if graph.n > 1:
        reached = {1}
        frontier = [1]
        while frontier:
            v = frontier.pop()
            for u in graph.neighbors(v):
                if u not in reached:
                    reached.add(u)
                    frontier.append(u)
        if len(reached) != graph.n:
            missing = sorted(set(range(1, graph.n + 1)) - reached)
            errors.append(f"disconnected: vertices {missing} unreachable from v1")

    for a, b in seen:
        if a <= k and b <= k:
            errors.append(f"first-k-adjacent: v{a} and v{b} are both among the first {k} "
                          f"vertices but share an edge")

    if errors:
        raise ValidationError(errors)
    return graph


def derive_dss(graph: GraphSpec, k: int) -> DssSpec:
    """The storage system a qualifying graph induces.

    alpha_i = d_i = deg(v_i), beta = 1, one surviving set per node (its
    neighbors), B = sum of the first k degrees.
    """
    validate_graph(graph, k)
    raw = {
        "n": graph.n,
        "k": k,
        "beta": 1,
        "alpha": [graph.degree(i) for i in range(1, graph.n + 1)],
        "surviving_sets": {str(i): [sorted(graph.neighbors(i))] for i in range(1, graph.n + 1)},
        "B": sum(graph.degree(i) for i in range(1, k + 1)),
    }
    return validate_dss(raw)


@dataclass(frozen=True)
class Code:
    """Per-node packet coefficient vectors over a finite field.

    Every packet is a length-B vector: the packet content equals the dot
    product of the vector with the B message symbols. Stored packets are
    never the zero vector.
    """

    field: Field
    B: int
    nodes: tuple[tuple[Vector, ...], ...]
    seed: int | None = None

    def __post_init__(self):
        problems = []
        if not isinstance(self.B, int) or self.B < 1:
            problems.append(f"B must be an integer >= 1, got {self.B!r}")
        for i, packets in enumerate(self.nodes, start=1):
            if not packets:
                problems.append(f"node {i} stores no packets")
            for j, packet in enumerate(packets, start=1):
                if len(packet) != self.B:
                    problems.append(f"node {i} packet {j}: length {len(packet)} != B={self.B}")
                    continue
                try:
                    for x in packet:
                        self.field.check(x)
                except ValidationError as exc:
                    problems.append(f"node {i} packet {j}: {exc}")
                    continue
                if not any(packet):
                    problems.append(f"node {i} packet {j}: stored packets must be nonzero")
        if problems:
            raise ValidationError(problems)

    @property
    def n(self) -> int:
        return len(self.nodes)

    def packet_counts(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.nodes)

    def to_json(self) -> dict:
        return {
            "q": self.field.q,
            "modulus": list(self.field.modulus) if self.field.modulus else [],
            "B": self.B,
            "nodes": [[list(v) for v in packets] for packets in self.nodes],
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, raw: Mapping) -> "Code":
        if not isinstance(raw, Mapping):
            raise ValidationError("code description must be a JSON object")
        for key in ("q", "B", "nodes"):
            if key not in raw:
                raise ValidationError(f"code file is missing {key!r}")
        field = Field(int(raw["q"]), raw.get("modulus") or None)
        nodes = tuple(tuple(tuple(int(x) for x in v) for v in packets) for packets in raw["nodes"])
        return cls(field=field, B=int(raw["B"]), nodes=nodes, seed=raw.get("seed"))


def construct_code(graph: GraphSpec, k: int, field: Field, seed: int,
                   max_retries: int = 32) -> Code:
    """Build a verified code for a qualifying graph.

    Deterministic in (graph, k, field, seed): retry r draws from a
    generator seeded with "seed/r", and the first attempt whose full
    verification passes (including full local rank on every node) is
    returned. Raises ConstructionImpossibleError when some later vertex
    has no earlier neighbor, ConstructionFailedError when the budget runs
    out.
    """
    from .verify import verify_code  # deferred: verify imports this module

    validate_graph(graph, k)
    spec = derive_dss(graph, k)
    n = graph.n
    degrees = [graph.degree(i) for i in range(1, n + 1)]
    B = sum(degrees[:k])
    earlier = {j: sorted(m for m in graph.neighbors(j) if m < j) for j in range(k + 1, n + 1)}
    for j, ms in earlier.items():
        if not ms:
            raise ConstructionImpossibleError(
                f"vertex v{j} has no earlier neighbor: its packets have no "
                f"combination support under this vertex order"
            )

    last_failure = None
    for attempt in range(max_retries):
        rng = random.Random(f"{seed}/{attempt}")
        nodes: list[tuple[Vector, ...]] = []
        offset = 0
        for l in range(1, k + 1):
            basis = []
            for t in range(degrees[l - 1]):
                vec = [0] * B
                vec[offset + t] = 1
                basis.append(tuple(vec))
            nodes.append(tuple(basis))
            offset += degrees[l - 1]

        ok = True
        for j in range(k + 1, n + 1):
            support = [v for m in earlier[j] for v in nodes[m - 1]]
            packets: list[Vector] = []
            for _ in range(degrees[j - 1]):
                vec = _draw_packet(support, packets, field, rng)
                if vec is None:
                    ok = False
                    break
                packets.append(vec)
            if not ok:
                break
            nodes.append(tuple(packets))
        if not ok:
            last_failure = "sampling could not produce distinct nonzero packets"
            continue

        code = Code(field=field, B=B, nodes=tuple(nodes), seed=seed)
        report = verify_code(code, spec)
        if report.passed and report.local.full_rank_ok:
            return code
        last_failure = report.first_failure()

    raise ConstructionFailedError(
        f"no candidate passed verification in {max_retries} attempts "
        f"(last failure: {last_failure})",
        last_failure=last_failure,
    )


def _draw_packet(support: Sequence[Vector], existing: Sequence[Vector],
                 field: Field, rng: random.Random, cap: int = 1000) -> Vector | None:
    """One random combination of the support, rejecting zero vectors and
    duplicates of packets already on the same node."""
    for _ in range(cap):
        coeffs = [rng.randrange(field.q) for _ in support]
        vec = combine(support, coeffs, field)
        if any(vec) and vec not in existing:
            return vec
    return None
