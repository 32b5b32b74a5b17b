"""Closures over domains with more than two elements.

Three tractable cases: operation sets containing a near-unanimity operation
(projection test), a single commutative group operation (linear systems over
the cyclic prime-power factors), and a single associative operation
(depth-first traversal of the successor graph, which needs memory for the
visited set).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .core import DomainError, Family, Operation, check_vector
from .decide import ProjectionCache


def detect_near_unanimity(f: Operation) -> int | None:
    """Return the arity of ``f`` if ``f(x,..,y,..,x) = x`` for every single deviant position."""
    k = f.arity
    if k < 3:
        return None
    for x in range(f.d):
        for y in range(f.d):
            for pos in range(k):
                args = [x] * k
                args[pos] = y
                if f(*args) != x:
                    return None
    return k


def decide_nu(operations: Sequence[Operation], family: Family, v) -> bool:
    arities = [a for a in map(detect_near_unanimity, operations) if a is not None]
    if not arities:
        raise ValueError("no near-unanimity operation among the given operations")
    return ProjectionCache(operations, min(arities) - 1, family).contains(v)


def is_associative(f: Operation) -> bool:
    if f.arity != 2:
        return False
    r = range(f.d)
    return all(f(f(a, b), c) == f(a, f(b, c)) for a in r for b in r for c in r)


class GroupAxiomError(ValueError):
    pass


def group_axiom_violation(f: Operation) -> str | None:
    """Name of the first commutative-group axiom ``f`` breaks, or None."""
    if f.arity != 2:
        return "binary"
    r = range(f.d)
    if not is_associative(f):
        return "associativity"
    if any(f(a, b) != f(b, a) for a in r for b in r):
        return "commutativity"
    identity = next((e for e in r if all(f(e, a) == a for a in r)), None)
    if identity is None:
        return "identity"
    for a in r:
        if not any(f(a, b) == identity for b in r):
            return f"inverse (element {a} has none)"
    return None


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass
class CyclicFactor:
    prime: int
    exponent: int
    generator: int

    @property
    def order(self) -> int:
        return self.prime ** self.exponent


class GroupStructure:
    """A finite commutative group ``(D, f)`` written as a sum of cyclic prime-power groups.

    ``coords[x]`` gives the coefficient of ``x`` on every factor and
    ``element[coefficients]`` inverts it.
    """

    def __init__(self, f: Operation):
        problem = group_axiom_violation(f)
        if problem is not None:
            raise GroupAxiomError(f"{f.name} is not a commutative group operation: {problem} fails")
        self.op = f
        d = f.d
        self.identity = next(e for e in range(d) if all(f(e, a) == a for a in range(d)))
        self.inverse = [next(b for b in range(d) if f(a, b) == self.identity) for a in range(d)]
        self.factors: list[CyclicFactor] = []
        for p in sorted(_factorize(d)):
            self.factors.extend(self._sylow_basis(p))
        self.element: dict[tuple[int, ...], int] = {}
        for coeffs in itertools.product(*(range(c.order) for c in self.factors)):
            x = self.identity
            for c, a in zip(self.factors, coeffs):
                x = f(x, self.power(c.generator, a))
            self.element[coeffs] = x
        self.coords: list[tuple[int, ...]] = [()] * d
        for coeffs, x in self.element.items():
            self.coords[x] = coeffs
        if len(self.element) != d or len(set(self.element.values())) != d:
            raise GroupAxiomError("cyclic decomposition failed")  # unreachable for valid groups

    def power(self, x: int, k: int) -> int:
        out = self.identity
        for _ in range(k):
            out = self.op(out, x)
        return out

    def order_of(self, x: int) -> int:
        k, y = 1, x
        while y != self.identity:
            y = self.op(y, x)
            k += 1
        return k

    def _span(self, gens: Sequence[int]) -> set[int]:
        span = {self.identity}
        for g in gens:
            span = {self.op(s, self.power(g, a)) for s in span for a in range(self.order_of(g))}
        return span

    def _sylow_basis(self, p: int) -> list[CyclicFactor]:
        """Peel cyclic factors off the Sylow ``p``-subgroup, largest order first (brute force)."""
        d = self.op.d
        sylow = [x for x in range(d) if _is_power_of(self.order_of(x), p)]
        size = len(sylow)
        chosen: list[int] = []
        span = {self.identity}
        while len(span) < size:
            best = None
            for x in sorted(sylow, key=lambda y: (-self.order_of(y), y)):
                cyc = {self.power(x, a) for a in range(self.order_of(x))}
                if cyc & span == {self.identity}:
                    candidate = self._span(chosen + [x])
                    # the new factor must leave room for a complement of the right size
                    if len(candidate) == len(span) * self.order_of(x) and size % len(candidate) == 0:
                        best = x
                        break
            if best is None:
                raise GroupAxiomError("could not decompose Sylow subgroup")
            chosen.append(best)
            span = self._span(chosen)
        out = []
        for g in chosen:
            order = self.order_of(g)
            out.append(CyclicFactor(p, _log(order, p), g))
        return out

    def to_coords(self, vec) -> list[tuple[int, ...]]:
        return [self.coords[x] for x in vec]

    def from_coords(self, coords) -> tuple[int, ...]:
        return tuple(self.element[tuple(c)] for c in coords)

    def describe(self) -> str:
        return " x ".join(f"Z{c.order}" for c in self.factors) or "trivial"


def _is_power_of(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


def _log(k: int, p: int) -> int:
    e = 0
    while k > 1:
        k //= p
        e += 1
    return e


def build_group_structure(f: Operation) -> GroupStructure:
    return GroupStructure(f)


def _valuation(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    e = 0
    while x % p == 0:
        x //= p
        e += 1
    return e


def solvable_mod_prime_power(rows: list[list[int]], rhs: list[int], p: int, e: int) -> bool:
    """Does ``A x = b`` have a solution over ``Z/p^e``?

    Diagonalises ``A`` with full pivoting on the entry of least ``p``-adic
    valuation. Row operations are mirrored on ``b``; column operations only
    re-parametrise ``x``. The system is solvable iff every diagonal entry
    ``p^k * unit`` divides the transformed right-hand side and the zero rows
    have zero right-hand side.
    """
    q = p ** e
    a = [[x % q for x in row] for row in rows]
    b = [x % q for x in rhs]
    n_rows = len(a)
    n_cols = len(a[0]) if a else 0
    rank = 0
    while rank < min(n_rows, n_cols):
        best = None
        for r in range(rank, n_rows):
            for c in range(rank, n_cols):
                if a[r][c]:
                    val = _valuation(a[r][c], p, e)
                    if best is None or val < best[0]:
                        best = (val, r, c)
                        if val == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        val, r, c = best
        a[rank], a[r] = a[r], a[rank]
        b[rank], b[r] = b[r], b[rank]
        for row in a:
            row[rank], row[c] = row[c], row[rank]
        piv = a[rank][rank]
        scale = p ** val
        unit_inv = pow(piv // scale, -1, q)
        for r2 in range(n_rows):
            if r2 != rank and a[r2][rank]:
                factor = (a[r2][rank] // scale) * unit_inv % q
                a[r2] = [(x - factor * y) % q for x, y in zip(a[r2], a[rank])]
                b[r2] = (b[r2] - factor * b[rank]) % q
        for c2 in range(rank + 1, n_cols):
            if a[rank][c2]:
                factor = (a[rank][c2] // scale) * unit_inv % q
                for row in a:
                    row[c2] = (row[c2] - factor * row[rank]) % q
        if b[rank] % scale:
            return False
        rank += 1
    return all(x == 0 for x in b[rank:])


def decide_group(group: GroupStructure, family: Family, v) -> bool:
    """Membership in the subgroup of ``D^n`` generated by ``family``.

    Factors sharing a prime are solved together (scaled into the largest power
    of that prime) because their coefficient vectors must agree modulo the
    smaller power; distinct primes are independent by the Chinese remainder theorem.
    """
    v = check_vector(v, family.n, family.d)
    if family.m == 0:
        return False
    member_coords = [group.to_coords(w) for w in family.members]
    target = group.to_coords(v)
    by_prime: dict[int, list[int]] = {}
    for idx, c in enumerate(group.factors):
        by_prime.setdefault(c.prime, []).append(idx)
    for p, idxs in by_prime.items():
        top = max(group.factors[i].exponent for i in idxs)
        rows, rhs = [], []
        for i in idxs:
            scale = p ** (top - group.factors[i].exponent)
            for j in range(family.n):
                rows.append([scale * mc[j][i] for mc in member_coords])
                rhs.append(scale * target[j][i])
        if not solvable_mod_prime_power(rows, rhs, p, top):
            return False
    return True


class VisitedSet:
    """Emitted solutions; hashing gives ``O(n)`` work per probe."""

    def __init__(self):
        self._items: set = set()

    def add(self, vec) -> bool:
        """Insert ``vec``; False if it was already present."""
        if vec in self._items:
            return False
        self._items.add(vec)
        return True

    def __contains__(self, vec) -> bool:
        return vec in self._items

    def __len__(self) -> int:
        return len(self._items)


def enumerate_associative_dfs(f: Operation, family: Family, meter=None) -> Iterator[tuple[int, ...]]:
    """Depth-first traversal of ``v -> f(v, s)`` over the closure, one expansion per emission."""
    if not is_associative(f):
        raise ValueError(f"{f.name} is not associative")
    if f.d != family.d:
        raise DomainError("operation and family domains differ")
    members = family.members
    visited = VisitedSet()
    stack = []
    for s in reversed(members):
        if visited.add(s):
            stack.append(s)
    while stack:
        v = stack.pop()
        fresh = []
        for s in members:
            u = tuple(f(a, b) for a, b in zip(v, s))
            if meter is not None:
                meter.add("applications")
                meter.add("probes")
            if visited.add(u):
                fresh.append(u)
        stack.extend(reversed(fresh))
        yield v
        if meter is not None:
            meter.emit()


def decide_associative_small(f: Operation, family: Family, v, budget: int = 1 << 16) -> bool:
    """Membership by full saturation; test-scale only (the general problem is NP-complete)."""
    from .oracle import SaturationOverflow, saturate_set

    v = check_vector(v, family.n, family.d)
    if f.d ** family.n > budget:
        raise SaturationOverflow(budget, f.d ** family.n)
    return v in saturate_set([f], family, budget)
