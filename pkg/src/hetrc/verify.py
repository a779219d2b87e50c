"""Certification of a concrete code against its storage system.

Four verdicts: any-k reconstruction (every k-subset of nodes pools packets
of full rank B), repairability (every node regenerates its exact packets
from each of its surviving sets, downloading beta packets per helper),
bound achievement (the declared file size equals the computed bound), and
local structure (packet counts match capacities and no two packets on one
node are dependent; full local rank is reported alongside).

Repair plans are searched in two phases. The selection phase tries every
choice of beta stored packets per helper in lexicographic index order.
When no selection works, the recombination phase lets each helper send
beta linear combinations of its stored packets, searched exhaustively
over one representative per direction of the relevant subspaces:

* with no slack (d * beta equals the failed node's local rank) every sent
  vector must lie inside the lost span, so candidates are the directions
  of span(helper) meet span(lost);
* with slack and beta = 1 a sent vector is only ever useful inside
  span(helper) meet (span(lost) + other helpers' spans);
* otherwise candidates are all directions of span(helper).

Both phases are deterministic, and a returned plan always carries the
recombination coefficients that reproduce each lost packet exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .bound import fundamental_bound
from .construct import Code
from .errors import UnsupportedParameterError, ValidationError
from .field import (Vector, combine, intersect_spans, projective_reps, rank,
                    rref, solve_in_span, span_contains)
from .jsonio import frac_to_json
from .model import DssSpec


@dataclass(frozen=True)
class HelperDownload:
    """What one helper sends: beta rows of coefficients over its stored
    packets, plus the resulting packet vectors."""

    helper: int
    coeffs: tuple[Vector, ...]
    packets: tuple[Vector, ...]

    def to_json(self) -> dict:
        return {
            "helper": self.helper,
            "coeffs": [list(c) for c in self.coeffs],
            "packets": [list(p) for p in self.packets],
        }


@dataclass(frozen=True)
class RepairPlan:
    failed: int
    set_index: int
    beta: int
    downloads: tuple[HelperDownload, ...]
    recombination: tuple[Vector, ...]  # one row per lost packet, over all downloads

    def download_count(self) -> int:
        return sum(len(d.packets) for d in self.downloads)

    def is_selection(self) -> bool:
        """True when every download is a stored packet taken verbatim."""
        return all(sum(1 for x in row if x) == 1 and max(row) == 1
                   for d in self.downloads for row in d.coeffs)

    def selected_indices(self) -> tuple[tuple[int, ...], ...] | None:
        """Per-helper stored-packet indices, when the plan is a pure selection."""
        if not self.is_selection():
            return None
        return tuple(tuple(row.index(1) for row in d.coeffs) for d in self.downloads)

    def to_json(self) -> dict:
        return {
            "failed": self.failed,
            "set_index": self.set_index,
            "beta": self.beta,
            "downloads": [d.to_json() for d in self.downloads],
            "recombination": [list(r) for r in self.recombination],
            "is_selection": self.is_selection(),
        }


def _require_integer_beta(beta) -> int:
    if isinstance(beta, Fraction):
        if beta.denominator != 1:
            raise UnsupportedParameterError(
                f"plan search needs an integer repair traffic (packets are "
                f"indivisible); got beta = {beta}"
            )
        beta = beta.numerator
    if not isinstance(beta, int) or isinstance(beta, bool) or beta < 1:
        raise UnsupportedParameterError(f"beta must be an integer >= 1, got {beta!r}")
    return beta


def find_repair_plan(code: Code, spec: DssSpec, failed: int, set_index: int,
                     beta: int | Fraction | None = None) -> RepairPlan | None:
    """First working plan in deterministic order, or None.

    The selection phase scans the product of per-helper index combinations
    lexicographically; the recombination phase scans candidate directions
    in their enumeration order. Absence means neither phase found a plan.
    """
    beta = _require_integer_beta(spec.beta if beta is None else beta)
    if not 1 <= failed <= code.n:
        raise ValidationError(f"failed node id {failed} outside 1..{code.n}")
    if not 1 <= set_index <= spec.tau(failed):
        raise ValidationError(
            f"node {failed}: set index {set_index} outside 1..{spec.tau(failed)}"
        )
    fld = code.field
    helpers = sorted(spec.members(failed, set_index))
    targets = list(code.nodes[failed - 1])
    stored = [list(code.nodes[h - 1]) for h in helpers]

    # phase 1: stored-packet selections (possible only when every helper
    # stores at least beta distinct packets)
    if all(len(s) >= beta for s in stored):
        plan = _selection_plan(code, failed, set_index, beta, helpers, targets, stored)
        if plan is not None:
            return plan

    # phase 2: helper-side recombination
    return _recombination_plan(code, failed, set_index, beta, helpers, targets, stored)


def _selection_plan(code: Code, failed: int, set_index: int, beta: int,
                    helpers: list[int], targets: list[Vector],
                    stored: list[list[Vector]]) -> RepairPlan | None:
    fld = code.field
    index_choices = [list(combinations(range(len(s)), beta)) for s in stored]
    for pick in product(*index_choices):
        downloads = [stored[hp][idx] for hp in range(len(helpers)) for idx in pick[hp]]
        rows = [solve_in_span(downloads, t, fld) for t in targets]
        if all(r is not None for r in rows):
            per_helper = []
            for hp, h in enumerate(helpers):
                coeffs = []
                for idx in pick[hp]:
                    row = [0] * len(stored[hp])
                    row[idx] = 1
                    coeffs.append(tuple(row))
                per_helper.append(HelperDownload(
                    helper=h, coeffs=tuple(coeffs),
                    packets=tuple(stored[hp][idx] for idx in pick[hp])))
            return RepairPlan(failed=failed, set_index=set_index, beta=beta,
                              downloads=tuple(per_helper),
                              recombination=tuple(rows))
    return None


def _recombination_plan(code: Code, failed: int, set_index: int, beta: int,
                        helpers: list[int], targets: list[Vector],
                        stored: list[list[Vector]]) -> RepairPlan | None:
    fld = code.field
    lost_basis, _ = rref(targets, fld)
    w = len(lost_basis)
    d = len(helpers)
    if w > d * beta:
        return None
    spans = [rref(s, fld)[0] for s in stored]

    slack = d * beta - w
    cands: list[list[Vector]] = []
    for hp in range(d):
        if slack == 0:
            pool = intersect_spans(spans[hp], lost_basis, fld)
        elif beta == 1:
            others = [v for other in range(d) if other != hp for v in spans[other]]
            pool = intersect_spans(spans[hp], lost_basis + others, fld)
        else:
            pool = spans[hp]
        cands.append(list(projective_reps(pool, fld)))

    # suffix[i] = concatenated span bases of helpers i..d-1
    suffix: list[list[Vector]] = [[] for _ in range(d + 1)]
    for i in range(d - 1, -1, -1):
        suffix[i] = [tuple(v) for v in spans[i]] + suffix[i + 1]

    chosen: list[list[Vector]] = [[] for _ in range(d)]
    flat: list[Vector] = []

    def covered() -> bool:
        if not flat:
            return w == 0
        return all(span_contains(flat, t, fld) for t in lost_basis)

    def rec(hp: int, slots_left: int, ci: int) -> bool:
        if hp == d:
            return covered()
        avail = flat + (suffix[hp] if slots_left else suffix[hp + 1])
        if not all(span_contains(avail, t, fld) for t in lost_basis):
            return False
        if slots_left:
            for idx in range(ci, len(cands[hp])):
                v = cands[hp][idx]
                if flat and span_contains(flat, v, fld):
                    continue  # adds nothing to the span
                chosen[hp].append(v)
                flat.append(v)
                if covered() or rec(hp, slots_left - 1, idx + 1):
                    return True
                chosen[hp].pop()
                flat.pop()
        return rec(hp + 1, beta, 0)

    if not (covered() if w == 0 else rec(0, beta, 0)):
        return None

    per_helper = []
    for hp, h in enumerate(helpers):
        coeffs = [solve_in_span(stored[hp], v, fld) for v in chosen[hp]]
        packets = list(chosen[hp])
        while len(coeffs) < beta:  # pad idle slots by re-sending the first stored packet
            row = [0] * len(stored[hp])
            row[0] = 1
            coeffs.append(tuple(row))
            packets.append(stored[hp][0])
        per_helper.append(HelperDownload(helper=h, coeffs=tuple(coeffs),
                                         packets=tuple(packets)))
    downloads = [p for d_ in per_helper for p in d_.packets]
    rows = [solve_in_span(downloads, t, fld) for t in targets]
    if any(r is None for r in rows):  # pragma: no cover - covered() guarantees solvability
        return None
    return RepairPlan(failed=failed, set_index=set_index, beta=beta,
                      downloads=tuple(per_helper), recombination=tuple(rows))


def execute_plan(plan: RepairPlan, code: Code) -> tuple[Vector, ...]:
    """Re-run a plan through field arithmetic: helpers combine their
    stored packets, then the recombination rows rebuild each lost packet."""
    fld = code.field
    downloads = []
    for d in plan.downloads:
        stored = code.nodes[d.helper - 1]
        for row in d.coeffs:
            downloads.append(combine(stored, row, fld))
    return tuple(combine(downloads, row, fld) for row in plan.recombination)


@dataclass(frozen=True)
class ReconstructionVerdict:
    file_dimension: int
    k: int
    subsets: tuple[tuple[tuple[int, ...], int], ...]  # (node ids, pooled rank)

    @property
    def passed(self) -> bool:
        return all(r == self.file_dimension for _, r in self.subsets)

    def failures(self) -> list[tuple[tuple[int, ...], int]]:
        return [(s, r) for s, r in self.subsets if r != self.file_dimension]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "k": self.k,
            "file_dimension": self.file_dimension,
            "subsets": [{"nodes": list(s), "rank": r} for s, r in self.subsets],
        }


def verify_reconstruction(code: Code, k: int) -> ReconstructionVerdict:
    """Rank of the pooled packets of every k-subset of nodes vs B."""
    if not 1 <= k <= code.n:
        raise ValidationError(f"k must be in 1..{code.n}, got {k!r}")
    entries = []
    for subset in combinations(range(1, code.n + 1), k):
        pooled = [v for i in subset for v in code.nodes[i - 1]]
        entries.append((subset, rank(pooled, code.field)))
    return ReconstructionVerdict(file_dimension=code.B, k=k, subsets=tuple(entries))


@dataclass(frozen=True)
class RepairabilityVerdict:
    entries: tuple[tuple[int, int, RepairPlan | None], ...]

    @property
    def passed(self) -> bool:
        return all(plan is not None for _, _, plan in self.entries)

    def failures(self) -> list[tuple[int, int]]:
        return [(i, l) for i, l, plan in self.entries if plan is None]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "entries": [{"failed": i, "set_index": l,
                         "plan": plan.to_json() if plan else None}
                        for i, l, plan in self.entries],
        }


def verify_repairability(code: Code, spec: DssSpec) -> RepairabilityVerdict:
    """A plan for every node and every one of its surviving sets."""
    beta = _require_integer_beta(spec.beta)
    entries = []
    for i in range(1, spec.n + 1):
        for l in range(1, spec.tau(i) + 1):
            entries.append((i, l, find_repair_plan(code, spec, i, l, beta)))
    return RepairabilityVerdict(entries=tuple(entries))


@dataclass(frozen=True)
class BoundAchievementVerdict:
    code_file_size: int
    declared_file_size: int | None
    bound: Fraction

    @property
    def passed(self) -> bool:
        if self.declared_file_size is not None and self.declared_file_size != self.code_file_size:
            return False
        return Fraction(self.code_file_size) == self.bound

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "code_file_size": self.code_file_size,
            "declared_file_size": self.declared_file_size,
            "bound": frac_to_json(self.bound),
        }


def verify_bound_achievement(code: Code, spec: DssSpec) -> BoundAchievementVerdict:
    """Does the stored file size meet the computed bound exactly?"""
    bound = fundamental_bound(spec).value
    return BoundAchievementVerdict(code_file_size=code.B,
                                   declared_file_size=spec.B, bound=bound)


@dataclass(frozen=True)
class NodeLocalCheck:
    node: int
    packet_count: int
    alpha: int
    local_rank: int
    pairwise_independent: bool


@dataclass(frozen=True)
class LocalVerdict:
    nodes: tuple[NodeLocalCheck, ...]

    @property
    def counts_ok(self) -> bool:
        return all(c.packet_count == c.alpha for c in self.nodes)

    @property
    def pairwise_ok(self) -> bool:
        return all(c.pairwise_independent for c in self.nodes)

    @property
    def full_rank_ok(self) -> bool:
        return all(c.local_rank == c.alpha for c in self.nodes)

    @property
    def passed(self) -> bool:
        return self.counts_ok and self.pairwise_ok

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "counts_ok": self.counts_ok,
            "pairwise_ok": self.pairwise_ok,
            "full_rank_ok": self.full_rank_ok,
            "nodes": [{"node": c.node, "packet_count": c.packet_count,
                       "alpha": c.alpha, "local_rank": c.local_rank,
                       "pairwise_independent": c.pairwise_independent}
                      for c in self.nodes],
        }


def verify_local(code: Code, spec: DssSpec) -> LocalVerdict:
    """Per-node packet counts, pairwise independence, and local rank.

    Pairwise independence (no stored packet a scalar multiple of another
    on the same node) is what repairs and reconstruction minimally need
    stated locally; full local rank is the stronger constructor-side gate
    and is reported, not required, here.
    """
    checks = []
    for i in range(1, code.n + 1):
        packets = code.nodes[i - 1]
        pairwise = all(rank([a, b], code.field) == 2
                       for a, b in combinations(packets, 2))
        checks.append(NodeLocalCheck(
            node=i, packet_count=len(packets), alpha=spec.alpha_of(i),
            local_rank=rank(packets, code.field), pairwise_independent=pairwise))
    return LocalVerdict(nodes=tuple(checks))


@dataclass(frozen=True)
class VerificationReport:
    reconstruction: ReconstructionVerdict
    repair: RepairabilityVerdict
    bound: BoundAchievementVerdict
    local: LocalVerdict

    @property
    def passed(self) -> bool:
        return (self.reconstruction.passed and self.repair.passed
                and self.bound.passed and self.local.passed)

    def first_failure(self) -> str | None:
        if not self.local.passed:
            return f"local structure: {self.local.to_json()['nodes']}"
        if not self.reconstruction.passed:
            return f"reconstruction failures: {self.reconstruction.failures()}"
        if not self.repair.passed:
            return f"repair failures at (node, set): {self.repair.failures()}"
        if not self.bound.passed:
            return (f"file size {self.bound.code_file_size} vs bound "
                    f"{self.bound.bound} (declared {self.bound.declared_file_size})")
        return None

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "reconstruction": self.reconstruction.to_json(),
            "repair": self.repair.to_json(),
            "bound": self.bound.to_json(),
            "local": self.local.to_json(),
        }


def verify_code(code: Code, spec: DssSpec) -> VerificationReport:
    """Run all four verdicts; overall pass requires every one of them."""
    if code.n != spec.n:
        raise ValidationError(f"code has {code.n} nodes but the system has {spec.n}")
    return VerificationReport(
        reconstruction=verify_reconstruction(code, spec.k),
        repair=verify_repairability(code, spec),
        bound=verify_bound_achievement(code, spec),
        local=verify_local(code, spec),
    )
