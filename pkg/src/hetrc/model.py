"""Heterogeneous storage-system model and surviving-sequence enumeration.

A system has n nodes with per-node storage capacities alpha_i (packets),
one shared repair traffic beta (an exact rational, packets per helper),
and for every node an ordered table of surviving sets: the groups of
helper nodes able to repair it. All sets of one node share a size d_i,
the node's repair degree; gamma_i = d_i * beta is its repair bandwidth.

Node ids and surviving-set indices are 1-based everywhere, matching the
file format. Validation reports every violated invariant, not just the
first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from .errors import ValidationError
from .jsonio import frac_from_json, frac_to_json

Prefix = tuple[tuple[int, int], ...]  # ((node id, set index), ...) pairs, 1-based

FULL_SEQUENCE_NODE_LIMIT = 7


@dataclass(frozen=True)
class DssSpec:
    """A validated (n, k) heterogeneous storage system.

    ``sets[i-1][l-1]`` is the sorted member tuple of node i's l-th
    surviving set. ``B`` is the declared file size in packets; it stays
    None until a code is attached.
    """

    n: int
    k: int
    beta: Fraction
    alpha: tuple[int, ...]
    sets: tuple[tuple[tuple[int, ...], ...], ...]
    B: int | None = None

    def d(self, i: int) -> int:
        return len(self.sets[i - 1][0])

    def tau(self, i: int) -> int:
        return len(self.sets[i - 1])

    def gamma(self, i: int) -> Fraction:
        return self.d(i) * self.beta

    def alpha_of(self, i: int) -> int:
        return self.alpha[i - 1]

    def members(self, i: int, l: int) -> frozenset[int]:
        return frozenset(self.sets[i - 1][l - 1])

    def member_table(self) -> list[list[frozenset[int]]]:
        """Per-node list of surviving sets as frozensets (0-indexed)."""
        return [[frozenset(s) for s in per_node] for per_node in self.sets]

    def with_beta(self, beta: Fraction) -> "DssSpec":
        return DssSpec(self.n, self.k, Fraction(beta), self.alpha, self.sets, self.B)

    def to_json(self) -> dict:
        obj = {
            "n": self.n,
            "k": self.k,
            "beta": frac_to_json(self.beta),
            "alpha": list(self.alpha),
            "surviving_sets": {str(i): [list(s) for s in self.sets[i - 1]] for i in range(1, self.n + 1)},
        }
        if self.B is not None:
            obj["B"] = self.B
        return obj

    @classmethod
    def from_json(cls, raw: Mapping) -> "DssSpec":
        return validate_dss(raw)


def validate_dss(raw: Mapping) -> DssSpec:
    """Build a DssSpec from a parsed description, collecting every violation.

    Raises ValidationError carrying the full list of problems; the spec is
    returned only when it is entirely clean.
    """
    errors: list[str] = []
    if not isinstance(raw, Mapping):
        raise ValidationError("system description must be a JSON object")

    def need_int(key, minimum=None):
        v = raw.get(key)
        if not isinstance(v, int) or isinstance(v, bool):
            errors.append(f"{key}: expected an integer, got {v!r}")
            return None
        if minimum is not None and v < minimum:
            errors.append(f"{key}: must be >= {minimum}, got {v}")
            return None
        return v

    n = need_int("n", 1)
    k = need_int("k", 1)
    if n is not None and k is not None and not k < n:
        errors.append(f"k: reconstruction degree must satisfy k < n, got k={k}, n={n}")

    beta = None
    try:
        beta = frac_from_json(raw.get("beta"))
        if beta <= 0:
            errors.append(f"beta: repair traffic must be positive, got {beta}")
            beta = None
    except ValidationError as exc:
        errors.append(f"beta: {exc}")

    B = None
    if "B" in raw:
        B = need_int("B", 1)

    alpha: tuple[int, ...] = ()
    raw_alpha = raw.get("alpha")
    if not isinstance(raw_alpha, list) or (n is not None and len(raw_alpha) != n):
        errors.append(f"alpha: expected a list of {n} capacities")
    else:
        bad = [a for a in raw_alpha if not isinstance(a, int) or isinstance(a, bool) or a < 1]
        if bad:
            errors.append(f"alpha: capacities must be integers >= 1, got {bad}")
        else:
            alpha = tuple(raw_alpha)

    sets: list[tuple[tuple[int, ...], ...]] = []
    raw_sets = raw.get("surviving_sets")
    if not isinstance(raw_sets, Mapping):
        errors.append("surviving_sets: expected an object keyed by node id")
    elif n is not None:
        keys = set()
        for key in raw_sets:
            try:
                keys.add(int(key))
            except (TypeError, ValueError):
                errors.append(f"surviving_sets: bad node id key {key!r}")
        if keys != set(range(1, n + 1)):
            errors.append(f"surviving_sets: keys must be exactly 1..{n}, got {sorted(keys)}")
        else:
            for i in range(1, n + 1):
                per_node = raw_sets.get(str(i), raw_sets.get(i))
                if not isinstance(per_node, list) or not per_node:
                    errors.append(f"node {i}: needs at least one surviving set")
                    sets.append(((),))
                    continue
                cleaned = []
                sizes = set()
                for l, members in enumerate(per_node, start=1):
                    if not isinstance(members, list) or not members:
                        errors.append(f"node {i}: surviving set {l} must be a nonempty list")
                        continue
                    ms = sorted(set(members))
                    if len(ms) != len(members):
                        errors.append(f"node {i}: surviving set {l} repeats a member")
                    if any(not isinstance(m, int) or isinstance(m, bool) or not 1 <= m <= n for m in ms):
                        errors.append(f"node {i}: surviving set {l} has ids outside 1..{n}")
                        continue
                    if i in ms:
                        errors.append(f"node {i}: node in own surviving set {l}")
                    sizes.add(len(ms))
                    cleaned.append(tuple(ms))
                if len(sizes) > 1:
                    errors.append(f"node {i}: surviving sets have unequal sizes {sorted(sizes)}")
                sets.append(tuple(cleaned) if cleaned else ((),))

    if not errors and beta is not None and alpha:
        for i in range(1, n + 1):
            d_i = len(sets[i - 1][0])
            if alpha[i - 1] > d_i * beta:
                errors.append(
                    f"node {i}: alpha {alpha[i - 1]} exceeds repair capacity "
                    f"d*beta = {d_i * beta}, node is irreparable"
                )

    if errors:
        raise ValidationError(errors)
    return DssSpec(n=n, k=k, beta=beta, alpha=alpha, sets=tuple(sets), B=B)


def enumerate_prefixes(spec: DssSpec) -> Iterator[Prefix]:
    """Every ordered choice of k distinct nodes with one surviving-set
    index each, in lexicographic (node id, set index) order."""
    yield from _sequences(spec, spec.k)


def enumerate_full_sequences(spec: DssSpec) -> Iterator[Prefix]:
    """Every ordering of all n nodes with one surviving-set index each.

    Exists as a brute-force cross-check of the k-prefix reduction; refuses
    systems above n = 7 because the count grows as n! * prod(tau_i).
    """
    if spec.n > FULL_SEQUENCE_NODE_LIMIT:
        raise ValidationError(
            f"full-sequence enumeration refused for n={spec.n}: the guard is "
            f"n <= {FULL_SEQUENCE_NODE_LIMIT} (count grows as n! * prod tau_i)"
        )
    yield from _sequences(spec, spec.n)


def _sequences(spec: DssSpec, length: int) -> Iterator[Prefix]:
    taus = [spec.tau(i) for i in range(1, spec.n + 1)]
    prefix: list[tuple[int, int]] = []
    used: set[int] = set()

    def rec() -> Iterator[Prefix]:
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for i in range(1, spec.n + 1):
            if i in used:
                continue
            used.add(i)
            for l in range(1, taus[i - 1] + 1):
                prefix.append((i, l))
                yield from rec()
                prefix.pop()
            used.discard(i)

    yield from rec()


def prefix_count(spec: DssSpec) -> int:
    """Number of prefixes enumerate_prefixes yields: k! * e_k(tau_1..tau_n)."""
    taus = [spec.tau(i) for i in range(1, spec.n + 1)]
    elem = [1] + [0] * spec.k  # elementary symmetric polynomials, degree <= k
    for t in taus:
        for deg in range(min(spec.k, len(elem) - 1), 0, -1):
            elem[deg] += elem[deg - 1] * t
    return math.factorial(spec.k) * elem[spec.k]


def full_sequence_count(spec: DssSpec) -> int:
    out = math.factorial(spec.n)
    for i in range(1, spec.n + 1):
        out *= spec.tau(i)
    return out


def validate_prefix(prefix, spec: DssSpec, length: int | None = None) -> Prefix:
    """Check node distinctness and index ranges; returns the tuple form."""
    length = spec.k if length is None else length
    tup = tuple((int(i), int(l)) for i, l in prefix)
    if len(tup) != length:
        raise ValidationError(f"expected {length} (node, set-index) pairs, got {len(tup)}")
    seen = set()
    for i, l in tup:
        if not 1 <= i <= spec.n:
            raise ValidationError(f"node id {i} outside 1..{spec.n}")
        if i in seen:
            raise ValidationError(f"node id {i} repeated in prefix")
        seen.add(i)
        if not 1 <= l <= spec.tau(i):
            raise ValidationError(f"node {i}: set index {l} outside 1..{spec.tau(i)}")
    return tup
