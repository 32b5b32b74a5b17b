"""Polynomial-time membership tests ``v in Cl_F(S)`` for the boolean clones.

All deciders take a :class:`Family` and a vector given as a tuple and return a
bool. They work on the bit-packed member masks; coordinate ``i`` is bit ``i``.
"""

from __future__ import annotations

import itertools
from functools import reduce
from typing import Sequence

from .core import DomainError, Family, Operation, check_vector, full_mask, popcount, to_mask


def _mask(family: Family, v) -> int:
    if family.d != 2:
        raise DomainError("boolean decider called on a family over d != 2")
    return to_mask(check_vector(v, family.n, 2))


def _meet(masks, n: int) -> int:
    return reduce(lambda a, b: a & b, masks, full_mask(n))


def decide_i2(family: Family, v) -> bool:
    return family.check(v) in family


def decide_e2(family: Family, v) -> bool:
    """``v`` is an intersection of members iff it equals the meet of the members above it."""
    vm = _mask(family, v)
    above = [w for w in family.masks if w & vm == vm]
    return bool(above) and _meet(above, family.n) == vm


class GF2Span:
    """Row-echelon basis of the members, with the member combination behind each row.

    ``contains`` answers membership in the span (the ``L0`` clone, for a
    non-empty family); ``contains_odd`` answers whether ``v`` is a sum of an odd
    number of members (``L2``).
    """

    def __init__(self, family: Family):
        if family.d != 2:
            raise DomainError("GF(2) span needs a boolean family")
        self.family = family
        self.rows: list[tuple[int, int, int]] = []  # (pivot bit, row, combination of members)
        self.kernel: list[int] = []
        for idx, w in enumerate(family.masks):
            row, combo = self._reduce(w, 1 << idx)
            if row:
                self.rows.append((row & -row, row, combo))
            else:
                self.kernel.append(combo)

    def _reduce(self, row: int, combo: int) -> tuple[int, int]:
        # pivots are lowest set bits, ties resolved by insertion order
        for pivot, r, c in self.rows:
            if row & pivot:
                row ^= r
                combo ^= c
        return row, combo

    @property
    def rank(self) -> int:
        return len(self.rows)

    def solve(self, v) -> int | None:
        """A member combination summing to ``v``, or None."""
        row, combo = self._reduce(_mask(self.family, v), 0)
        return None if row else combo

    def contains(self, v) -> bool:
        return self.family.m > 0 and self.solve(v) is not None

    def contains_odd(self, v) -> bool:
        x0 = self.solve(v)
        if x0 is None:
            return False
        if popcount(x0) % 2 == 1:
            return True
        return any(popcount(k) % 2 == 1 for k in self.kernel)


def decide_l0(family: Family, v) -> bool:
    return GF2Span(family).contains(v)


def decide_l2(family: Family, v) -> bool:
    return GF2Span(family).contains_odd(v)


class M2Meets:
    """The meets ``x^i`` of all members having a 1 at coordinate ``i`` (None when there are none)."""

    def __init__(self, family: Family):
        if family.d != 2:
            raise DomainError("M2 needs a boolean family")
        self.family = family
        n = family.n
        self.meets: list[int | None] = []
        for i in range(n):
            above = [w for w in family.masks if (w >> i) & 1]
            self.meets.append(_meet(above, n) if above else None)
        self.bottom = _meet(family.masks, n) if family.m else None

    def contains(self, v) -> bool:
        vm = _mask(self.family, v)
        if self.family.m == 0:
            return False
        if vm == 0:
            # an empty join is not generated; 0 is in the closure only as a meet
            return self.bottom == 0
        join = 0
        i = 0
        rest = vm
        while rest:
            low = rest & -rest
            i = low.bit_length() - 1
            x = self.meets[i]
            if x is None or x & ~vm:
                return False
            join |= x
            rest ^= low
        return join == vm


def decide_m2(family: Family, v) -> bool:
    return M2Meets(family).contains(v)


def _column_masks(family: Family) -> list[int]:
    """Column ``i`` as a bitmask over member positions."""
    cols = [0] * family.n
    for k, w in enumerate(family.masks):
        bit = 1 << k
        rest = w
        while rest:
            low = rest & -rest
            cols[low.bit_length() - 1] |= bit
            rest ^= low
    return cols


class PairTable:
    """For every pair ``i < j`` the set of patterns ``(v_i, v_j)`` realised by members.

    Pattern ``(a, b)`` is bit ``2a + b`` of ``patterns(i, j)``. Single columns are
    kept too (bit ``a`` of ``values[i]``) for the ``n = 1`` case.
    """

    def __init__(self, family: Family):
        if family.d != 2:
            raise DomainError("pair tables are boolean")
        self.n = family.n
        allm = full_mask(family.m)
        cols = _column_masks(family)
        self.values = [(1 if allm & ~c else 0) | (2 if c else 0) for c in cols]
        self.table: list[list[int]] = [[0] * self.n for _ in range(self.n)]
        for i in range(self.n):
            ci = cols[i]
            ni = allm & ~ci
            for j in range(i + 1, self.n):
                cj = cols[j]
                nj = allm & ~cj
                pats = (1 if ni & nj else 0) | (2 if ni & cj else 0) | (4 if ci & nj else 0) | (8 if ci & cj else 0)
                self.table[i][j] = pats
                self.table[j][i] = ((pats & 1) | ((pats & 2) << 1) | ((pats & 4) >> 1) | (pats & 8))

    def patterns(self, i: int, j: int) -> int:
        """Patterns at 0-based coordinates ``(i, j)``, oriented as ``(v_i, v_j)``."""
        return self.table[i][j]

    def allowed(self, i: int, a: int, j: int) -> int:
        """Bitmask of values ``b`` such that ``(a, b)`` occurs at ``(i, j)``."""
        pats = self.table[i][j] >> (2 * a)
        return pats & 3

    def __len__(self) -> int:
        return self.n * (self.n - 1) // 2


def decide_d2(table: PairTable, v) -> bool:
    v = tuple(v)
    if len(v) != table.n:
        raise DomainError(f"vector has length {len(v)}, expected {table.n}")
    if table.n == 1:
        return bool(table.values[0] >> v[0] & 1)
    for i, j in itertools.combinations(range(table.n), 2):
        if not (table.table[i][j] >> (2 * v[i] + v[j])) & 1:
            return False
    return True


def _split_constant_columns(family: Family, vm: int) -> tuple[bool, int]:
    """Check ``v`` on constant columns; return (ok, mask of the non-constant columns)."""
    cols = _column_masks(family)
    allm = full_mask(family.m)
    free = 0
    for i, c in enumerate(cols):
        bit = (vm >> i) & 1
        if c == 0:
            if bit:
                return False, 0
        elif c == allm:
            if not bit:
                return False, 0
        else:
            free |= 1 << i
    return True, free


def _s1x_conditions(family: Family, vm: int, free: int, mixed: bool) -> bool:
    ones = vm & free
    zeros = free & ~vm
    masks = family.masks
    if not any(w & ones == ones for w in masks):
        return False
    for k in _bits(ones):
        for i in _bits(zeros):
            if mixed:
                ok = any(((w >> k) & 1) != ((w >> i) & 1) for w in masks)
            else:
                ok = any((w >> k) & 1 and not (w >> i) & 1 for w in masks)
            if not ok:
                return False
    return True


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def decide_s12(family: Family, v) -> bool:
    vm = _mask(family, v)
    if family.m == 0:
        return False
    ok, free = _split_constant_columns(family, vm)
    return ok and _s1x_conditions(family, vm, free, mixed=True)


def decide_s10(family: Family, v) -> bool:
    vm = _mask(family, v)
    if family.m == 0:
        return False
    ok, free = _split_constant_columns(family, vm)
    return ok and _s1x_conditions(family, vm, free, mixed=False)


class ColumnClasses:
    """Classes of identical columns, plus the all-0 and all-1 columns."""

    def __init__(self, family: Family):
        if family.d != 2:
            raise DomainError("column classes are boolean")
        self.n = family.n
        cols = _column_masks(family)
        allm = full_mask(family.m)
        self.zero_columns = 0
        self.one_columns = 0
        groups: dict[int, int] = {}
        for i, c in enumerate(cols):
            if c == 0:
                self.zero_columns |= 1 << i
            if family.m and c == allm:
                self.one_columns |= 1 << i
            groups[c] = groups.get(c, 0) | (1 << i)
        self.groups = groups
        self.classes = list(groups.values())

    def free_classes(self, fixed: int) -> list[int]:
        """Classes restricted to non-fixed columns, in order of their first column."""
        out = [c & ~fixed for c in self.classes]
        return sorted((c for c in out if c), key=lambda c: c & -c)


def _constant_per_class(vm: int, classes: Sequence[int]) -> bool:
    return all((vm & c) in (0, c) for c in classes)


def decide_r2(classes: ColumnClasses, family: Family, v) -> bool:
    vm = _mask(family, v)
    if family.m == 0:
        return False
    fixed = classes.zero_columns | classes.one_columns
    if vm & fixed != classes.one_columns:
        return False
    return _constant_per_class(vm, classes.free_classes(fixed))


def decide_r0(classes: ColumnClasses, family: Family, v) -> bool:
    vm = _mask(family, v)
    if family.m == 0:
        return False
    if vm & classes.zero_columns:
        return False
    return _constant_per_class(vm, classes.free_classes(classes.zero_columns))


class ProjectionCache:
    """Closures of all width-``w`` projections, for Baker-Pixley membership tests.

    Works over any domain. When ``width >= n`` the whole family is saturated
    instead.
    """

    def __init__(self, operations: Sequence[Operation], width: int, family: Family):
        from .oracle import saturate_set

        self.family = family
        self.operations = tuple(operations)
        self.width = min(width, family.n)
        self.closures: dict[tuple[int, ...], set] = {}
        n = family.n
        cache: dict = {}
        for idx in itertools.combinations(range(n), self.width):
            proj = Family((tuple(v[i] for i in idx) for v in family.members), n=len(idx), d=family.d)
            key = frozenset(proj.members)
            if key not in cache:
                cache[key] = saturate_set(self.operations, proj)
            self.closures[idx] = cache[key]

    def contains(self, v) -> bool:
        v = check_vector(v, self.family.n, self.family.d)
        for idx, closure in self.closures.items():
            if tuple(v[i] for i in idx) not in closure:
                return False
        return True


def decide_near_unanimity(operations: Sequence[Operation], width: int, family: Family, v) -> bool:
    """Baker-Pixley test: ``v`` is in the closure iff every width-``width`` projection is."""
    return ProjectionCache(operations, width, family).contains(v)
