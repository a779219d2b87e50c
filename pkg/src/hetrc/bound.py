"""File-size bound and optimality parameters, all in exact rationals.

The supportable file size of a system is the minimum, over every ordered
choice of k distinct nodes each paired with one of its surviving sets, of

    sum_j min(alpha_{f_j}, |S_{f_j} minus previously failed nodes| * beta).

Orderings of all n nodes never need enumerating: position j's term only
depends on the first j choices and only k terms are summed, so minimizing
over length-k prefixes is equivalent. ``oracle_bound`` keeps the full
length-n enumeration alive purely as a cross-check of that reduction.

Search is depth-first in lexicographic (node id, set index) order with an
admissible prune: a branch is abandoned when its partial sum plus the
smallest possible remaining terms cannot beat the best complete prefix
seen so far. Pruning never changes the minimum or the reported minimizer,
only how many prefixes get scored. The enumeration is partitioned by the
first node so results (including the scored count) are identical no
matter how many workers share the partitions.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .errors import InfeasibleError, ValidationError
from .jsonio import frac_to_json
from .model import (DssSpec, Prefix, enumerate_full_sequences, full_sequence_count,
                    prefix_count, validate_prefix)


def cut_value(prefix, spec: DssSpec, beta: Fraction | None = None) -> Fraction:
    """Exact value of one prefix: sum of min(alpha, helpers-left * beta).

    A position whose surviving set was entirely consumed by earlier
    failures contributes min(alpha, 0) = 0.
    """
    beta = spec.beta if beta is None else Fraction(beta)
    tup = validate_prefix(prefix, spec, length=len(tuple(prefix)))
    members = spec.member_table()
    total = Fraction(0)
    prior: set[int] = set()
    for i, l in tup:
        remaining = len(members[i - 1][l - 1] - prior)
        total += min(Fraction(spec.alpha[i - 1]), remaining * beta)
        prior.add(i)
    return total


@dataclass(frozen=True)
class BoundReport:
    """Result of the bound minimization.

    ``minimizer`` is the lexicographically least prefix attaining the
    bound; ``terms`` are its per-position values and sum to ``value``.
    ``prefixes_total`` is the size of the search domain;
    ``prefixes_scored`` counts complete prefixes actually evaluated under
    pruning (identical for any worker count).
    """

    value: Fraction
    minimizer: Prefix
    terms: tuple[Fraction, ...]
    prefixes_total: int
    prefixes_scored: int
    beta: Fraction

    def to_json(self) -> dict:
        return {
            "value": frac_to_json(self.value),
            "minimizer": [list(p) for p in self.minimizer],
            "terms": [frac_to_json(t) for t in self.terms],
            "prefixes_total": self.prefixes_total,
            "beta": frac_to_json(self.beta),
        }


def _partition_search(spec: DssSpec, beta: Fraction, first: int, prune: bool):
    """Best (value, prefix) among prefixes starting at node ``first``.

    Returns (value, prefix, scored). Lexicographic DFS updating only on
    strict improvement, so the reported prefix is the lex-least minimizer
    within the partition.
    """
    n, k = spec.n, spec.k
    alpha = spec.alpha
    members = spec.member_table()
    taus = [len(per) for per in members]
    # admissible per-node lower bound on any term the node can contribute
    floor = [min(Fraction(alpha[i]), max(0, len(members[i][0]) - (k - 1)) * beta)
             for i in range(n)]

    best: list = [None, None]
    scored = 0

    def optimistic(exclude: set[int], count: int) -> Fraction:
        if count == 0:
            return Fraction(0)
        pool = sorted(floor[i] for i in range(n) if (i + 1) not in exclude)
        return sum(pool[:count], Fraction(0))

    def rec(prefix: list, used: set[int], partial: Fraction):
        nonlocal scored
        if len(prefix) == k:
            scored += 1
            if best[0] is None or partial < best[0]:
                best[0] = partial
                best[1] = tuple(prefix)
            return
        rest = k - len(prefix) - 1
        start = first if not prefix else 1
        stop = first if not prefix else n
        for i in range(start, stop + 1):
            if i in used:
                continue
            used.add(i)
            for l in range(1, taus[i - 1] + 1):
                # i is never a member of its own sets, so adding it to
                # ``used`` first does not disturb the difference
                remaining = len(members[i - 1][l - 1] - used)
                term = min(Fraction(alpha[i - 1]), remaining * beta)
                child = partial + term
                if prune and best[0] is not None and child + optimistic(used, rest) >= best[0]:
                    continue
                prefix.append((i, l))
                rec(prefix, used, child)
                prefix.pop()
            used.discard(i)

    rec([], set(), Fraction(0))
    return best[0], best[1], scored


def _partition_worker(payload):
    raw, beta_pair, first, prune = payload
    spec = DssSpec.from_json(raw)
    value, prefix, scored = _partition_search(spec, Fraction(*beta_pair), first, prune)
    return (first, None if value is None else (value.numerator, value.denominator), prefix, scored)


def fundamental_bound(spec: DssSpec, beta: Fraction | None = None, *,
                      prune: bool = True, workers: int = 1) -> BoundReport:
    """Minimum cut value over every length-k prefix, with witnesses."""
    beta = spec.beta if beta is None else Fraction(beta)
    if beta <= 0:
        raise ValidationError(f"beta must be positive, got {beta}")
    firsts = list(range(1, spec.n + 1))
    if workers > 1 and spec.n > 1:
        raw = spec.to_json()
        payloads = [(raw, (beta.numerator, beta.denominator), f, prune) for f in firsts]
        with ProcessPoolExecutor(max_workers=min(workers, len(firsts))) as pool:
            results = list(pool.map(_partition_worker, payloads))
        parts = []
        for _, value_pair, prefix, scored in results:
            value = None if value_pair is None else Fraction(*value_pair)
            parts.append((value, prefix, scored))
    else:
        parts = [_partition_search(spec, beta, f, prune) for f in firsts]

    best_value, best_prefix = None, None
    scored_total = 0
    for value, prefix, scored in parts:  # ascending first node keeps lex order
        scored_total += scored
        if value is not None and (best_value is None or value < best_value):
            best_value, best_prefix = value, prefix
    if best_value is None:
        raise ValidationError("system has no valid prefix to evaluate")
    terms = _prefix_terms(best_prefix, spec, beta)
    return BoundReport(value=best_value, minimizer=best_prefix, terms=terms,
                       prefixes_total=prefix_count(spec),
                       prefixes_scored=scored_total, beta=beta)


def _prefix_terms(prefix: Prefix, spec: DssSpec, beta: Fraction) -> tuple[Fraction, ...]:
    members = spec.member_table()
    terms = []
    prior: set[int] = set()
    for i, l in prefix:
        remaining = len(members[i - 1][l - 1] - prior)
        terms.append(min(Fraction(spec.alpha[i - 1]), remaining * beta))
        prior.add(i)
    return tuple(terms)


def oracle_bound(spec: DssSpec, beta: Fraction | None = None) -> Fraction:
    """Bound recomputed the slow way: over full length-n orderings.

    Only the first k positions of each ordering contribute; the value must
    equal fundamental_bound for every system. Guarded to small n.
    """
    beta = spec.beta if beta is None else Fraction(beta)
    k = spec.k
    alpha = spec.alpha
    members = spec.member_table()
    int_beta = beta.numerator if beta.denominator == 1 else None
    best = None
    for seq in enumerate_full_sequences(spec):
        prior: set[int] = set()
        if int_beta is not None:
            total = 0
            for i, l in seq[:k]:
                remaining = len(members[i - 1][l - 1] - prior)
                total += min(alpha[i - 1], remaining * int_beta)
                prior.add(i)
        else:
            total = Fraction(0)
            for i, l in seq[:k]:
                remaining = len(members[i - 1][l - 1] - prior)
                total += min(Fraction(alpha[i - 1]), remaining * beta)
                prior.add(i)
        if best is None or total < best:
            best = total
    if best is None:
        raise ValidationError("system has no full sequence to evaluate")
    return Fraction(best)


def _saturation_scan(spec: DssSpec) -> tuple[Fraction | None, int]:
    """Max over prefixes and positions of alpha / helpers-left.

    Positions whose surviving set is exhausted by earlier failures have no
    ratio (division by zero); they are skipped and counted separately.
    """
    members = spec.member_table()
    taus = [len(per) for per in members]
    alpha = spec.alpha
    n, k = spec.n, spec.k
    best: list = [None]
    skipped = [0]

    def rec(used: set[int], depth: int):
        if depth == k:
            return
        for i in range(1, n + 1):
            if i in used:
                continue
            for l in range(1, taus[i - 1] + 1):
                remaining = len(members[i - 1][l - 1] - used)
                if remaining == 0:
                    skipped[0] += 1
                else:
                    ratio = Fraction(alpha[i - 1], remaining)
                    if best[0] is None or ratio > best[0]:
                        best[0] = ratio
            used.add(i)
            rec(used, depth + 1)
            used.discard(i)

    rec(set(), 0)
    return best[0], skipped[0]


def beta_min_saturating(spec: DssSpec) -> Fraction:
    """Smallest repair traffic at which no storage term is ever clipped.

    At this value every prefix position satisfies alpha <= helpers-left *
    beta, so the bound equals the sum of the k smallest capacities. It is
    a sufficient level for bound achievement, not always the least one;
    compare beta_min_search.
    """
    value, _ = _saturation_scan(spec)
    if value is None:
        raise InfeasibleError(
            "every prefix position has an empty helper set; no repair traffic can saturate"
        )
    return value


def beta_min_search(spec: DssSpec, B: int) -> Fraction:
    """Least candidate repair traffic whose bound supports file size B.

    Candidates are the breakpoints alpha_i / c (1 <= c <= d_i) where some
    min(alpha, c * beta) changes regime. The bound is nondecreasing in
    beta, so a binary search over the sorted candidates is exact.
    """
    if not isinstance(B, int) or isinstance(B, bool) or B < 1:
        raise ValidationError(f"B must be an integer >= 1, got {B!r}")
    candidates = sorted({Fraction(spec.alpha[i - 1], c)
                         for i in range(1, spec.n + 1)
                         for c in range(1, spec.d(i) + 1)})
    top = fundamental_bound(spec, candidates[-1]).value
    if top < B:
        raise InfeasibleError(
            f"file size {B} is unachievable: the bound never exceeds {top} "
            f"(reached at beta = {candidates[-1]})"
        )
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if fundamental_bound(spec, candidates[mid]).value >= B:
            hi = mid
        else:
            lo = mid + 1
    return candidates[lo]


def min_total_storage(alphas, k: int, B: int) -> Fraction:
    """Smallest total storage that still fits B through the k lightest shares.

    Keeps each node's share c_i = alpha_i / sum(alpha) fixed and shrinks
    the total until the k smallest shares exactly carry B: the result is
    B / (sum of the k smallest c_i).
    """
    alphas = list(alphas)
    if not alphas or any(not isinstance(a, int) or isinstance(a, bool) or a < 1 for a in alphas):
        raise ValidationError(f"capacities must be integers >= 1, got {alphas!r}")
    if not isinstance(k, int) or not 1 <= k <= len(alphas):
        raise ValidationError(f"k must be in 1..{len(alphas)}, got {k!r}")
    if not isinstance(B, int) or isinstance(B, bool) or B < 1:
        raise ValidationError(f"B must be an integer >= 1, got {B!r}")
    total = sum(alphas)
    shares = sorted(Fraction(a, total) for a in alphas)
    return B / sum(shares[:k], Fraction(0))


@dataclass(frozen=True)
class OptimalityReport:
    """Optimality parameters of a system against a declared file size.

    ``storage_shares`` lists c_i = alpha_i / sum(alpha) in node order.
    ``beta_min_saturating`` may clip positions with exhausted helper sets;
    those are counted in ``saturation_skipped``. ``bound_equals_B`` is the
    achievement flag (exact equality); ``B_within_bound`` only says the
    file size is supportable.
    """

    storage_shares: tuple[Fraction, ...]
    min_total_storage: Fraction
    beta_min_saturating: Fraction | None
    saturation_skipped: int
    beta_min_search: Fraction | None
    beta_min_search_error: str | None
    bound_value: Fraction
    alpha_matches_repair: bool
    bound_equals_B: bool
    B_within_bound: bool

    def to_json(self) -> dict:
        return {
            "storage_shares": [frac_to_json(c) for c in self.storage_shares],
            "min_total_storage": frac_to_json(self.min_total_storage),
            "beta_min_saturating": None if self.beta_min_saturating is None
                                   else frac_to_json(self.beta_min_saturating),
            "saturation_skipped": self.saturation_skipped,
            "beta_min_search": None if self.beta_min_search is None
                               else frac_to_json(self.beta_min_search),
            "beta_min_search_error": self.beta_min_search_error,
            "bound_value": frac_to_json(self.bound_value),
            "alpha_matches_repair": self.alpha_matches_repair,
            "bound_equals_B": self.bound_equals_B,
            "B_within_bound": self.B_within_bound,
        }


def check_optimality(spec: DssSpec, B: int | None = None) -> OptimalityReport:
    """Assemble every optimality quantity; failures land in the report."""
    B = spec.B if B is None else B
    if B is None:
        raise ValidationError("no file size declared: pass B or set it on the system")
    total = sum(spec.alpha)
    shares = tuple(Fraction(a, total) for a in spec.alpha)
    sat_value, sat_skipped = _saturation_scan(spec)
    search_value, search_error = None, None
    try:
        search_value = beta_min_search(spec, B)
    except (InfeasibleError, ValidationError) as exc:
        search_error = str(exc)
    bound = fundamental_bound(spec).value
    return OptimalityReport(
        storage_shares=shares,
        min_total_storage=min_total_storage(list(spec.alpha), spec.k, B),
        beta_min_saturating=sat_value,
        saturation_skipped=sat_skipped,
        beta_min_search=search_value,
        beta_min_search_error=search_error,
        bound_value=bound,
        alpha_matches_repair=all(Fraction(spec.alpha_of(i)) == spec.gamma(i)
                                 for i in range(1, spec.n + 1)),
        bound_equals_B=bound == B,
        B_within_bound=B <= bound,
    )


def oracle_report(spec: DssSpec, beta: Fraction | None = None) -> dict:
    """Machine-readable result of the full-sequence oracle."""
    beta = spec.beta if beta is None else Fraction(beta)
    value = oracle_bound(spec, beta)
    return {
        "value": frac_to_json(value),
        "sequences_total": full_sequence_count(spec),
        "beta": frac_to_json(beta),
    }
