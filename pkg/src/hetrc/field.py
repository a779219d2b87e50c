"""Exact arithmetic over GF(p^m) and the linear algebra built on it.

Field elements are canonical integers in ``[0, q)``. For prime fields the
integer is the residue itself. For extension fields the base-p digits of
the integer are the coefficients of the residue polynomial, least
significant digit first: over GF(4) with modulus z^2 + z + 1 the integer 2
is the polynomial z, and 3 is z + 1.

Reduction polynomials are canonical per (p, m): the first monic
irreducible polynomial of degree m in the digit-counter order (constant
term varies fastest). That yields z^2+z+1 for q=4, z^3+z+1 for q=8,
z^4+z+1 for q=16. A different modulus may be supplied explicitly; it must
be monic and irreducible.

Everything here is exact integer arithmetic; there is no floating point
and no pivot tolerance anywhere.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import ValidationError

MAX_ORDER = 1 << 16

Vector = tuple[int, ...]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split q into (p, m) with q = p**m and p prime."""
    if not isinstance(q, int) or q < 2:
        raise ValidationError(f"field order must be an integer >= 2, got {q!r}")
    if q > MAX_ORDER:
        raise ValidationError(f"field order {q} exceeds the supported maximum {MAX_ORDER}")
    for p in range(2, q + 1):
        if q % p == 0:
            m = 0
            rest = q
            while rest % p == 0:
                rest //= p
                m += 1
            if rest != 1:
                raise ValidationError(f"{q} is not a prime power")
            return p, m
    raise ValidationError(f"{q} is not a prime power")  # pragma: no cover


# -- polynomials over GF(p): ascending coefficient tuples, no trailing zeros --

def _ptrim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pdivmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    rem = list(a)
    quo = [0] * max(1, len(a) - len(b) + 1)
    inv_lead = pow(b[-1], p - 2, p)
    while len(rem) >= len(b) and any(rem):
        shift = len(rem) - len(b)
        factor = (rem[-1] * inv_lead) % p
        if factor:
            quo[shift] = factor
            for i, bi in enumerate(b):
                rem[shift + i] = (rem[shift + i] - factor * bi) % p
        del rem[-1]
    return _ptrim(quo), _ptrim(rem)


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg // 2."""
    poly = _ptrim(list(coeffs))
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            divisor = tuple(low) + (1,)
            _, rem = _pdivmod(poly, divisor, p)
            if not rem:
                return False
    return True


@lru_cache(maxsize=None)
def default_modulus(p: int, m: int) -> tuple[int, ...]:
    """First monic irreducible polynomial of degree m over GF(p) in
    digit-counter order (ascending coefficients, constant term first)."""
    for counter in range(p ** m):
        digits = []
        c = counter
        for _ in range(m):
            digits.append(c % p)
            c //= p
        cand = tuple(digits) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise ValidationError(f"no irreducible polynomial of degree {m} over GF({p})")  # pragma: no cover


class Field:
    """GF(q) on canonical integer representatives 0..q-1.

    All operations validate their inputs and return canonical
    representatives; instances are immutable and safe to share.
    """

    __slots__ = ("q", "p", "m", "modulus")

    def __init__(self, q: int, modulus: Sequence[int] | None = None):
        p, m = prime_power(q)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "m", m)
        if m == 1:
            if modulus is not None and tuple(modulus) != ():
                raise ValidationError("prime fields take no reduction polynomial")
            object.__setattr__(self, "modulus", None)
            return
        coeffs = tuple(default_modulus(p, m) if modulus is None else (int(c) % p for c in modulus))
        if len(coeffs) != m + 1:
            raise ValidationError(f"reduction polynomial must have {m + 1} coefficients, got {len(coeffs)}")
        if coeffs[-1] != 1:
            raise ValidationError("reduction polynomial must be monic")
        if not is_irreducible(coeffs, p):
            raise ValidationError(f"reduction polynomial {list(coeffs)} is reducible over GF({p})")
        object.__setattr__(self, "modulus", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("Field instances are immutable")

    def __repr__(self) -> str:
        if self.m == 1:
            return f"Field({self.q})"
        return f"Field({self.q}, modulus={list(self.modulus)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and self.q == other.q and self.modulus == other.modulus

    def __hash__(self) -> int:
        return hash((self.q, self.modulus))

    def check(self, a: int) -> int:
        if not isinstance(a, int) or isinstance(a, bool) or not 0 <= a < self.q:
            raise ValidationError(f"{a!r} is not a canonical element of GF({self.q})")
        return a

    def elements(self) -> range:
        return range(self.q)

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.m):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, digits: Iterable[int]) -> int:
        out = 0
        for d in reversed(list(digits)):
            out = out * self.p + d
        return out

    def add(self, a: int, b: int) -> int:
        self.check(a), self.check(b)
        if self.m == 1:
            return (a + b) % self.p
        da, db = self._digits(a), self._digits(b)
        return self._undigits((x + y) % self.p for x, y in zip(da, db))

    def neg(self, a: int) -> int:
        self.check(a)
        if self.m == 1:
            return (-a) % self.p
        return self._undigits((-x) % self.p for x in self._digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        self.check(a), self.check(b)
        if self.m == 1:
            return (a * b) % self.p
        prod = _pmul(_ptrim(self._digits(a)), _ptrim(self._digits(b)), self.p)
        _, rem = _pdivmod(prod, self.modulus, self.p) if len(prod) > self.m else ((), prod)
        digits = list(rem) + [0] * (self.m - len(rem))
        return self._undigits(digits)

    def inv(self, a: int) -> int:
        self.check(a)
        if a == 0:
            raise ZeroDivisionError(f"0 has no multiplicative inverse in GF({self.q})")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        # extended Euclid in GF(p)[z] against the modulus
        r0, r1 = self.modulus, _ptrim(self._digits(a))
        t0, t1 = (), (1,)
        while r1:
            quo, rem = _pdivmod(r0, r1, self.p)
            r0, r1 = r1, rem
            prod = _pmul(quo, t1, self.p)
            width = max(len(t0), len(prod))
            t0, t1 = t1, _ptrim([(x - y) % self.p for x, y in
                                 zip(list(t0) + [0] * (width - len(t0)),
                                     list(prod) + [0] * (width - len(prod)))])
        # r0 is the gcd, a nonzero constant since the modulus is irreducible
        scale = pow(r0[0], self.p - 2, self.p)
        digits = [(c * scale) % self.p for c in t0]
        digits += [0] * (self.m - len(digits))
        return self._undigits(digits[:self.m])

    def arith(self, op: str, a: int, b: int | None = None) -> int:
        """Dispatch one of {add, mul, inv, neg} on canonical representatives."""
        if op == "add":
            return self.add(a, b)
        if op == "mul":
            return self.mul(a, b)
        if op == "neg":
            return self.neg(a)
        if op == "inv":
            return self.inv(a)
        raise ValidationError(f"unknown field operation {op!r}")

    def to_json(self) -> dict:
        return {"q": self.q, "modulus": list(self.modulus) if self.modulus else []}

    @classmethod
    def from_json(cls, obj: dict) -> "Field":
        modulus = obj.get("modulus") or None
        return cls(int(obj["q"]), modulus)


# -- exact linear algebra on packet vectors (rows of field elements) --

def _check_rows(rows: Sequence[Sequence[int]], field: Field, width: int | None = None) -> list[list[int]]:
    mat = []
    for r in rows:
        row = [field.check(x) for x in r]
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ValidationError(f"ragged rows: expected length {width}, got {len(row)}")
        mat.append(row)
    if width is not None and width == 0:
        raise ValidationError("rows must have length >= 1")
    return mat


def rref(rows: Sequence[Sequence[int]], field: Field) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form with lowest-index pivots.

    Returns (nonzero reduced rows, pivot column indices). Deterministic:
    pivot search scans rows top-down, columns left to right.
    """
    mat = _check_rows(rows, field)
    if not mat:
        return [], []
    width = len(mat[0])
    pivots: list[int] = []
    r = 0
    for col in range(width):
        pr = next((i for i in range(r, len(mat)) if mat[i][col] != 0), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = field.inv(mat[r][col])
        mat[r] = [field.mul(inv, x) for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows: Sequence[Sequence[int]], field: Field) -> int:
    """Dimension of the span of the given vectors."""
    return len(rref(rows, field)[1])


def solve_in_span(rows: Sequence[Sequence[int]], target: Sequence[int], field: Field) -> Vector | None:
    """Coefficients c with sum(c_i * rows_i) == target, or None.

    When the system is underdetermined, free coefficients are set to zero,
    so the answer is the one produced by elimination with lowest-index
    pivots and is deterministic.
    """
    if not rows:
        raise ValidationError("rows must be nonempty")
    mat = _check_rows(rows, field)
    tgt = [field.check(x) for x in target]
    width = len(mat[0])
    if len(tgt) != width:
        raise ValidationError(f"dimension mismatch: rows have length {width}, target {len(tgt)}")
    n = len(mat)
    # one equation per coordinate: columns are the unknown coefficients
    aug = [[mat[i][col] for i in range(n)] + [tgt[col]] for col in range(width)]
    red, pivots = rref(aug, field)
    coeffs = [0] * n
    for row, pc in zip(red, pivots):
        if pc == n:
            return None  # inconsistent: pivot in the augmented column
        coeffs[pc] = row[n]
    return tuple(coeffs)


def span_contains(rows: Sequence[Sequence[int]], target: Sequence[int], field: Field) -> bool:
    return solve_in_span(rows, target, field) is not None


def combine(rows: Sequence[Sequence[int]], coeffs: Sequence[int], field: Field) -> Vector:
    """sum(c_i * rows_i) evaluated exactly."""
    if len(rows) != len(coeffs):
        raise ValidationError("coefficient count must match row count")
    width = len(rows[0])
    out = [0] * width
    for c, row in zip(coeffs, rows):
        if c:
            for j in range(width):
                out[j] = field.add(out[j], field.mul(c, row[j]))
    return tuple(out)


def nullspace(rows: Sequence[Sequence[int]], field: Field) -> list[Vector]:
    """Basis of {c : sum(c_i * rows_i) = 0}, free variables ascending."""
    mat = _check_rows(rows, field)
    n = len(mat)
    if n == 0:
        return []
    width = len(mat[0])
    system = [[mat[i][col] for i in range(n)] for col in range(width)]
    red, pivots = rref(system, field)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        vec = [0] * n
        vec[f] = 1
        for row, pc in zip(red, pivots):
            vec[pc] = field.neg(row[f])
        basis.append(tuple(vec))
    return basis


def intersect_spans(rows_a: Sequence[Sequence[int]], rows_b: Sequence[Sequence[int]], field: Field) -> list[Vector]:
    """RREF basis of span(rows_a) & span(rows_b)."""
    base_a, _ = rref(rows_a, field)
    base_b, pivots_b = rref(rows_b, field)
    if not base_a or not base_b:
        return []

    def reduce_mod_b(v: Sequence[int]) -> list[int]:
        v = list(v)
        for row, pc in zip(base_b, pivots_b):
            if v[pc] != 0:
                f = v[pc]
                v = [field.sub(x, field.mul(f, y)) for x, y in zip(v, row)]
        return v

    residues = [reduce_mod_b(a) for a in base_a]
    combos = nullspace(residues, field)
    inside = [combine(base_a, c, field) for c in combos]
    return [tuple(r) for r in rref(inside, field)[0]]


def projective_reps(basis: Sequence[Sequence[int]], field: Field) -> Iterator[Vector]:
    """One representative per 1-dimensional subspace of span(basis).

    Representatives are combinations whose first nonzero coefficient is 1,
    yielded in lexicographic coefficient order; deterministic.
    """
    base = [list(b) for b in basis]
    r = len(base)
    for lead in range(r):
        for tail in product(range(field.q), repeat=r - lead - 1):
            coeffs = (0,) * lead + (1,) + tail
            yield combine(base, coeffs, field)
