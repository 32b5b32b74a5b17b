"""Vectors over finite domains, families of vectors and coefficient-wise operations.

Vectors are plain tuples of small ints. Boolean families additionally expose a
bit-packed view (``Family.masks``) where coordinate ``i`` (0-based) is bit ``i``
of a Python int, so that meet, join, xor and inclusion tests cost one word
operation per machine word.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Sequence

Vector = tuple


class DomainError(ValueError):
    """Raised on length/domain mismatches between vectors, families and operations."""


def to_mask(vec: Sequence[int]) -> int:
    mask = 0
    for i, x in enumerate(vec):
        if x:
            mask |= 1 << i
    return mask


def from_mask(mask: int, n: int) -> Vector:
    return tuple((mask >> i) & 1 for i in range(n))


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def full_mask(n: int) -> int:
    return (1 << n) - 1


def check_vector(vec: Sequence[int], n: int, d: int) -> Vector:
    vec = tuple(int(x) for x in vec)
    if len(vec) != n:
        raise DomainError(f"vector has length {len(vec)}, expected {n}")
    for x in vec:
        if not 0 <= x < d:
            raise DomainError(f"coordinate {x} outside domain 0..{d - 1}")
    return vec


class Family:
    """Duplicate-free, insertion-ordered set of equal-length vectors over ``{0..d-1}``.

    Immutable once built. ``n`` must be given explicitly when ``members`` is empty.
    """

    def __init__(self, members: Iterable[Sequence[int]] = (), n: int | None = None, d: int = 2):
        if d < 2:
            raise DomainError("domain size must be at least 2")
        rows = [tuple(int(x) for x in v) for v in members]
        if n is None:
            if not rows:
                raise DomainError("cannot infer vector length of an empty family")
            n = len(rows[0])
        seen: dict[Vector, int] = {}
        for row in rows:
            check_vector(row, n, d)
            if row not in seen:
                seen[row] = len(seen)
        self.n = n
        self.d = d
        self.members: tuple[Vector, ...] = tuple(seen)
        self._index = seen

    @classmethod
    def from_masks(cls, masks: Iterable[int], n: int) -> "Family":
        return cls((from_mask(x, n) for x in masks), n=n, d=2)

    @property
    def m(self) -> int:
        return len(self.members)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        if self.d != 2:
            raise DomainError("bit-packed view only exists for boolean families")
        return tuple(to_mask(v) for v in self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, vec) -> bool:
        return tuple(vec) in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, Family):
            return NotImplemented
        return (self.n, self.d) == (other.n, other.d) and set(self.members) == set(other.members)

    def __hash__(self) -> int:
        return hash((self.n, self.d, frozenset(self.members)))

    def __repr__(self) -> str:
        body = ", ".join(render_vector(v) for v in self.members[:8])
        more = ", ..." if self.m > 8 else ""
        return f"Family(n={self.n}, d={self.d}, m={self.m}: {{{body}{more}}})"

    def union(self, vectors: Iterable[Sequence[int]]) -> "Family":
        return Family(itertools.chain(self.members, vectors), n=self.n, d=self.d)

    def check(self, vec: Sequence[int]) -> Vector:
        return check_vector(vec, self.n, self.d)


def check_indices(indices: Iterable[int], n: int) -> tuple[int, ...]:
    """Validate a 1-based index set and return it as a sorted 0-based tuple."""
    idx = sorted(set(int(i) for i in indices))
    for i in idx:
        if not 1 <= i <= n:
            raise IndexError(f"index {i} outside [1, {n}]")
    return tuple(i - 1 for i in idx)


def project(family: Family, indices: Iterable[int]) -> Family:
    """Restrict every member of ``family`` to the 1-based ``indices``."""
    idx = check_indices(indices, family.n)
    return Family((tuple(v[i] for i in idx) for v in family.members), n=len(idx), d=family.d)


def prefix(family: Family, length: int) -> Family:
    """Projection onto the first ``length`` coordinates."""
    return project(family, range(1, length + 1))


@dataclass(frozen=True)
class Operation:
    """A total operation ``D^arity -> D`` stored as a flat truth table.

    The table is indexed in mixed radix with the first argument most significant,
    so ``table[0]`` is ``f(0, ..., 0)`` and ``table[-1]`` is ``f(d-1, ..., d-1)``.
    """

    name: str
    arity: int
    d: int
    table: tuple[int, ...]
    _minterms: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if self.arity < 1:
            raise DomainError("operations need arity >= 1")
        if len(self.table) != self.d ** self.arity:
            raise DomainError(
                f"{self.name}: table has {len(self.table)} entries, expected {self.d ** self.arity}"
            )
        if any(not 0 <= x < self.d for x in self.table):
            raise DomainError(f"{self.name}: table value outside domain")
        if self.d == 2:
            terms = tuple(
                tuple((a >> (self.arity - 1 - k)) & 1 for k in range(self.arity))
                for a, out in enumerate(self.table)
                if out
            )
            object.__setattr__(self, "_minterms", terms)

    @classmethod
    def from_function(cls, name: str, arity: int, d: int, fn: Callable[..., int]) -> "Operation":
        table = tuple(int(fn(*args)) for args in itertools.product(range(d), repeat=arity))
        return cls(name, arity, d, table)

    def __call__(self, *args: int) -> int:
        idx = 0
        for a in args:
            idx = idx * self.d + a
        return self.table[idx]

    def inputs(self):
        return itertools.product(range(self.d), repeat=self.arity)

    @cached_property
    def is_symmetric(self) -> bool:
        for args in self.inputs():
            out = self(*args)
            for perm in itertools.permutations(args):
                if self(*perm) != out:
                    return False
        return True

    @cached_property
    def _mask_kernel(self) -> Callable[..., int]:
        # the sum of minterms compiled once into a single bitwise expression
        args = [f"x{k}" for k in range(self.arity)]
        terms = [
            "(" + " & ".join(a if bit else f"~{a}" for bit, a in zip(term, args)) + ")"
            for term in self._minterms
        ]
        body = " | ".join(terms) if terms else "0"
        return eval(f"lambda {', '.join(args)}: {body}")  # noqa: S307 - built from our own table

    def apply_masks(self, masks: Sequence[int], n: int) -> int:
        """Coefficient-wise application on bit-packed boolean vectors (sum of minterms)."""
        return self._mask_kernel(*masks) & ((1 << n) - 1)

    def dual(self) -> "Operation":
        """The boolean dual ``not f(not x1, ..., not xt)``."""
        if self.d != 2:
            raise DomainError("duals are defined over the boolean domain only")
        return _dual(self)


@lru_cache(maxsize=None)
def _dual(f: Operation) -> Operation:
    return Operation(f"dual({f.name})", f.arity, 2, tuple(1 - x for x in reversed(f.table)))


def apply_op(f: Operation, *args: Sequence[int]) -> Vector:
    """Apply ``f`` coefficient-wise to ``arity`` vectors of equal length."""
    if len(args) != f.arity:
        raise DomainError(f"{f.name} takes {f.arity} arguments, got {len(args)}")
    n = len(args[0])
    for a in args:
        check_vector(a, n, f.d)
    return tuple(f(*col) for col in zip(*args))


def render_vector(vec: Sequence[int]) -> str:
    return "".join(str(x) for x in vec)


def parse_vector(text: str, d: int = 2) -> Vector:
    text = text.strip()
    if not text:
        raise DomainError("empty vector")
    if d > 10:
        raise DomainError("domains larger than 10 cannot be written as digit strings")
    out = []
    for ch in text:
        if not ch.isdigit() or int(ch) >= d:
            raise DomainError(f"character {ch!r} outside domain 0..{d - 1}")
        out.append(int(ch))
    return tuple(out)


def parse_family(text: str) -> Family:
    """Parse the instance format: optional ``domain d`` header, one digit string per line."""
    d = 2
    rows: list[Vector] = []
    seen_vector = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("domain"):
            if seen_vector:
                raise DomainError(f"line {lineno}: domain header after vectors")
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise DomainError(f"line {lineno}: malformed domain header {line!r}")
            d = int(parts[1])
            if not 2 <= d <= 10:
                raise DomainError(f"line {lineno}: domain size must be in 2..10")
            continue
        seen_vector = True
        try:
            vec = parse_vector(line, d)
        except DomainError as exc:
            raise DomainError(f"line {lineno}: {exc}") from None
        if rows and len(vec) != len(rows[0]):
            raise DomainError(f"line {lineno}: ragged line, length {len(vec)} != {len(rows[0])}")
        rows.append(vec)
    if not rows:
        raise DomainError("instance contains no vectors, vector length undefined")
    return Family(rows, d=d)


def render_family(family: Family) -> str:
    lines = [] if family.d == 2 else [f"domain {family.d}"]
    lines.extend(render_vector(v) for v in family.members)
    return "\n".join(lines) + "\n"
