"""Streaming enumerators for ``Cl_F(S)``.

Every enumerator is a generator of tuples. An optional :class:`DelayMeter`
collects abstract work counters between consecutive emissions so that delay
claims can be checked without relying on wall-clock time.
"""

from __future__ import annotations

import itertools
import time
from collections import Counter
from typing import Iterator

from .clones import ResolvedProblem, resolve
from .core import Family, from_mask, full_mask, popcount
from .decide import ColumnClasses, GF2Span, M2Meets, PairTable
from .multidomain import enumerate_associative_dfs
from .oracle import saturate_stream

WORD = 64


def words(n: int) -> int:
    return max(1, -(-n // WORD))


class DelayMeter:
    """Work counters and wall-clock ticks recorded per emission."""

    def __init__(self):
        self.current: Counter = Counter()
        self.samples: list[dict] = []
        self.ticks: list[int] = []
        self._last = time.perf_counter_ns()

    def add(self, key: str, amount: int = 1) -> None:
        self.current[key] += amount

    def emit(self, **extra) -> None:
        now = time.perf_counter_ns()
        sample = dict(self.current)
        sample.update(extra)
        self.samples.append(sample)
        self.ticks.append(now - self._last)
        self.current = Counter()
        self._last = now

    def max(self, key: str) -> int:
        return max((s.get(key, 0) for s in self.samples), default=0)

    def __len__(self) -> int:
        return len(self.samples)


class BacktrackStats:
    def __init__(self):
        self.internal_nodes = 0
        self.leaves = 0
        self.decider_calls = 0


def backtrack_enumerate(problem: ResolvedProblem, stats: BacktrackStats | None = None) -> Iterator[tuple]:
    """Flashlight search: expand a prefix only if some closure element extends it.

    The extension test for a prefix of length ``l`` is membership in the closure
    of the family projected onto its first ``l`` coordinates. Values are tried in
    ascending order of the emitted vector, so output is lexicographic.
    """
    fam = problem.family
    n, d = fam.n, fam.d
    if fam.m == 0:
        return
    stats = stats if stats is not None else BacktrackStats()
    deciders: dict[int, object] = {}

    def extendable(vec) -> bool:
        length = len(vec)
        if length not in deciders:
            proj = Family((v[:length] for v in fam.members), n=length, d=d)
            deciders[length] = problem.make_decider(proj)
        stats.decider_calls += 1
        return deciders[length](vec)

    values = [1 - x for x in range(d)] if problem.complement else list(range(d))
    # stack of (prefix, iterator over remaining child values)
    prefix: list[int] = []
    stack = [iter(values)]
    stats.internal_nodes += 1
    while stack:
        if len(prefix) == n:
            stats.leaves += 1
            yield problem.flip(prefix)
            stack.pop()
            if prefix:
                prefix.pop()
            continue
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            if prefix:
                prefix.pop()
            continue
        prefix.append(nxt)
        if extendable(tuple(prefix)):
            if len(prefix) < n:
                stats.internal_nodes += 1
            stack.append(iter(values))
        else:
            prefix.pop()


def enumerate_e2_fast(family: Family, complement: bool = False, meter: DelayMeter | None = None) -> Iterator[tuple]:
    """Intersection closure by backtracking with incrementally maintained per-member counters.

    ``comp`` marks members containing the ones of the current prefix and
    ``count[i]`` is the number of compatible members with a 0 at ``i``. A 0 is
    feasible iff ``count[i] > 0``. A 1 is first probed read-only on the bitset of
    compatible members, so the arrays are only touched by extensions that
    succeed; each member is then removed at most once per branch and every
    removal is journaled and undone on backtrack.
    """
    n, m = family.n, family.m
    if m == 0:
        return
    masks = family.masks
    zeros_of = [[i for i in range(n) if not (w >> i) & 1] for w in masks]
    zero_members = [[k for k in range(m) if not (masks[k] >> i) & 1] for i in range(n)]
    zero_cols = [sum(1 << k for k in zero_members[i]) for i in range(n)]
    comp = [True] * m
    comp_bits = full_mask(m)
    count = [len(zero_members[i]) for i in range(n)]
    p = [-1] * n
    zero_prefix: list[int] = []
    mwords = words(m)
    add = meter.add if meter is not None else (lambda key, amount=1: None)
    path_updates = 0

    def one_feasible(i: int) -> bool:
        rest = comp_bits & ~zero_cols[i]
        add("probes", mwords * (1 + len(zero_prefix)))
        if not rest:
            return False
        return all(rest & zero_cols[j] for j in zero_prefix)

    def set_one(i: int) -> list[int]:
        nonlocal comp_bits, path_updates
        p[i] = 1
        journal: list[int] = []
        for k in zero_members[i]:
            if not comp[k]:
                continue
            comp[k] = False
            comp_bits &= ~(1 << k)
            journal.append(k)
            for j in zeros_of[k]:
                count[j] -= 1
            add("updates", 1 + len(zeros_of[k]))
            path_updates += 1 + len(zeros_of[k])
        return journal

    def undo(journal: list[int]) -> None:
        nonlocal comp_bits, path_updates
        for k in reversed(journal):
            comp[k] = True
            comp_bits |= 1 << k
            for j in zeros_of[k]:
                count[j] += 1
            add("updates", 1 + len(zeros_of[k]))
            path_updates -= 1 + len(zeros_of[k])

    order = (1, 0) if complement else (0, 1)
    flip = full_mask(n) if complement else 0
    # frames: [coordinate, index of next value to try, journal of the value in use]
    frames: list[list] = [[0, 0, None]]
    while frames:
        frame = frames[-1]
        i = frame[0]
        if i == n:
            out = sum(1 << j for j in range(n) if p[j] == 1)
            yield from_mask(out ^ flip, n)
            if meter is not None:
                meter.emit(branch_updates=path_updates)
            frames.pop()
            continue
        if frame[2] is not None:
            if p[i] == 0:
                zero_prefix.pop()
            undo(frame[2])
            p[i] = -1
            frame[2] = None
        if frame[1] == 2:
            frames.pop()
            continue
        value = order[frame[1]]
        frame[1] += 1
        add("checks")
        if value == 0:
            if count[i] == 0:
                continue
            p[i] = 0
            zero_prefix.append(i)
            frame[2] = []
        else:
            if not one_feasible(i):
                continue
            frame[2] = set_one(i)
        frames.append([i + 1, 0, None])


def gf2_basis(family: Family) -> list[int]:
    """A maximal independent subset of the members (as masks), in member order."""
    span = GF2Span(Family(n=family.n, d=2))
    basis = []
    for w in family.masks:
        row, _ = span._reduce(w, 0)
        if row:
            span.rows.append((row & -row, row, 0))
            basis.append(w)
    return basis


def gray_flips(r: int) -> Iterator[int]:
    """Index of the basis element toggled at each step of the reflected Gray code."""
    for k in range(1, 1 << r):
        yield (k & -k).bit_length() - 1


def enumerate_l0_gray(family: Family, complement: bool = False, meter: DelayMeter | None = None) -> Iterator[tuple]:
    """All ``2^rank`` sums of basis members; each step adds a single basis vector."""
    if family.m == 0:
        return
    n = family.n
    basis = gf2_basis(family)
    flip = full_mask(n) if complement else 0
    cost = words(n) * (2 if complement else 1)
    yield from _gray_walk(0, basis, n, flip, cost, meter)


def enumerate_l2_gray(family: Family, complement: bool = False, meter: DelayMeter | None = None) -> Iterator[tuple]:
    """Odd sums of members: the coset ``s1 + span{s_i + s1}`` walked in Gray order."""
    if family.m == 0:
        return
    n = family.n
    first = family.masks[0]
    diffs = Family.from_masks((w ^ first for w in family.masks[1:]), n) if family.m > 1 else Family(n=n)
    basis = gf2_basis(diffs)
    flip = full_mask(n) if complement else 0
    cost = words(n) * (2 if complement else 1)
    yield from _gray_walk(first, basis, n, flip, cost, meter)


def _gray_walk(start: int, basis: list[int], n: int, flip: int, cost: int, meter) -> Iterator[tuple]:
    cur = start
    if meter is not None:
        meter.add("word_ops", cost)
    yield from_mask(cur ^ flip, n)
    if meter is not None:
        meter.emit()
    for idx in gray_flips(len(basis)):
        cur ^= basis[idx]
        if meter is not None:
            meter.add("word_ops", cost)
            meter.add("gray_index", 1)
        yield from_mask(cur ^ flip, n)
        if meter is not None:
            meter.emit()


def m2_climb_order(meets: M2Meets) -> list[int]:
    """One representative coordinate per distinct meet, larger meets first, ties by index."""
    reps: dict[int, int] = {}
    for i, x in enumerate(meets.meets):
        if x is not None and x not in reps:
            reps[x] = i
    return sorted(reps.values(), key=lambda i: (-popcount(meets.meets[i]), i))


def enumerate_m2_hill_climb(family: Family, complement: bool = False, meter: DelayMeter | None = None) -> Iterator[tuple]:
    """Closure under meet and join by climbing through joins of the meets ``x^i``.

    The list ``L`` of still-addable representatives is a doubly linked list in
    climb order. Including the head of ``L`` joins its meet into the current
    vector and drops every representative that became 1; after the subtree is
    done the head is excluded for the remaining siblings.
    """
    n = family.n
    if family.m == 0:
        return
    meets = M2Meets(family)
    flip = full_mask(n) if complement else 0
    add = meter.add if meter is not None else (lambda key, amount=1: None)

    def out(v):
        return from_mask(v ^ flip, n)

    if meets.bottom == 0:
        add("ops")
        yield out(0)
        if meter is not None:
            meter.emit()
    order = m2_climb_order(meets)
    if not order:
        return
    head = -1
    nxt = {head: order[0]}
    prv = {}
    for a, b in zip(order, order[1:] + [None]):
        nxt[a] = b
    prv[order[0]] = head
    for a, b in zip(order, order[1:]):
        prv[b] = a
    in_list = {i: True for i in order}

    def unlink(i):
        a, b = prv[i], nxt[i]
        nxt[a] = b
        if b is not None:
            prv[b] = a
        in_list[i] = False
        add("ops")

    def relink(i):
        a, b = prv[i], nxt[i]
        nxt[a] = i
        if b is not None:
            prv[b] = i
        in_list[i] = True
        add("ops")

    # frame: [current vector, excluded reps, (included rep, removed reps) or None]
    frames = [[0, [], None]]
    while frames:
        frame = frames[-1]
        v, excluded, pending = frame
        add("ops")
        if pending is not None:
            i, removed = pending
            for r in reversed(removed):
                relink(r)
            unlink(i)
            excluded.append(i)
            frame[2] = None
        first = nxt[head]
        if first is None:
            for r in reversed(excluded):
                relink(r)
            frames.pop()
            continue
        x = meets.meets[first]
        new = x & ~v
        removed = []
        rest = new
        while rest:
            low = rest & -rest
            j = low.bit_length() - 1
            rest ^= low
            add("ops")
            if in_list.get(j):
                unlink(j)
                removed.append(j)
        frame[2] = (first, removed)
        climbed = v | x
        yield out(climbed)
        if meter is not None:
            meter.emit()
        frames.append([climbed, [], None])


def enumerate_atoms_gray(family: Family, fixed_zero: bool, fixed_one: bool, complement: bool = False,
                         meter: DelayMeter | None = None) -> Iterator[tuple]:
    """Every vector constant on each class of identical columns, with constant columns pinned.

    ``fixed_zero``/``fixed_one`` choose whether all-0/all-1 columns are pinned.
    Serves ``M2`` with negation, ``R2`` and ``R0``.
    """
    if family.m == 0:
        return
    n = family.n
    classes = ColumnClasses(family)
    fixed = (classes.zero_columns if fixed_zero else 0) | (classes.one_columns if fixed_one else 0)
    base = classes.one_columns if fixed_one else 0
    free = classes.free_classes(fixed)
    flip = full_mask(n) if complement else 0
    cost = words(n) * (2 if complement else 1)
    yield from _gray_walk(base, free, n, flip, cost, meter)


def enumerate_d2_incremental(family: Family, complement: bool = False, meter: DelayMeter | None = None) -> Iterator[tuple]:
    """Majority closure by backtracking; coordinate ``l`` is checked only against pairs ``(i, l)``, ``i < l``."""
    n = family.n
    if family.m == 0:
        return
    table = PairTable(family)
    add = meter.add if meter is not None else (lambda key, amount=1: None)
    order = (1, 0) if complement else (0, 1)
    p = [0] * n
    branch = [0] * (n + 1)  # pair checks spent on the current root-to-node path

    def allowed(l: int) -> int:
        if l == 0:
            add("pair_checks")
            return table.values[0]
        mask = 3
        for i in range(l):
            mask &= table.allowed(i, p[i], l)
            add("pair_checks")
            if not mask:
                break
        return mask

    # frames: [coordinate, allowed-mask, position in value order]
    first = allowed(0)
    branch[1] = 1
    frames = [[0, first, 0]]
    while frames:
        frame = frames[-1]
        l, mask, pos = frame
        if pos == 2:
            frames.pop()
            continue
        frame[2] += 1
        value = order[pos]
        if not (mask >> value) & 1:
            continue
        p[l] = value
        if l + 1 == n:
            yield tuple(1 - x for x in p) if complement else tuple(p)
            if meter is not None:
                meter.emit(branch_pair_checks=branch[l + 1])
            continue
        child = allowed(l + 1)
        branch[l + 2] = branch[l + 1] + l + 1
        frames.append([l + 1, child, 0])


def enumerate_nu_incremental(problem: ResolvedProblem, meter: DelayMeter | None = None) -> Iterator[tuple]:
    """Backtracking for near-unanimity clones using cached closures of width-``w`` projections."""
    from .oracle import saturate_set

    fam = problem.family
    n, d = fam.n, fam.d
    if fam.m == 0:
        return
    width = problem.width
    ops = problem.operations
    if width >= n:
        for v in sorted(saturate_set(ops, fam)):
            yield problem.flip(v)
        return
    add = meter.add if meter is not None else (lambda key, amount=1: None)
    # extension of positions < width: prefixes of Cl(S restricted to the first width coordinates)
    head = saturate_set(ops, Family((v[:width] for v in fam.members), n=width, d=d))
    head_next: dict[tuple, int] = {}
    for u in head:
        for l in range(width):
            head_next[u[:l]] = head_next.get(u[:l], 0) | (1 << u[l])
    # for every index set ending at l: map from the first width-1 values to the allowed last values
    tails: dict[tuple, dict] = {}
    for idx in itertools.combinations(range(n), width):
        if idx[-1] < width:
            continue
        closure = saturate_set(ops, Family((tuple(v[i] for i in idx) for v in fam.members), n=width, d=d))
        table: dict[tuple, int] = {}
        for u in closure:
            table[u[:-1]] = table.get(u[:-1], 0) | (1 << u[-1])
        tails[idx] = table
    by_last: list[list[tuple]] = [[] for _ in range(n)]
    for idx in tails:
        by_last[idx[-1]].append(idx)

    p = [0] * n
    full = (1 << d) - 1

    def allowed(l: int) -> int:
        if l < width:
            add("projection_checks")
            return head_next.get(tuple(p[:l]), 0)
        mask = full
        for idx in by_last[l]:
            add("projection_checks")
            mask &= tails[idx].get(tuple(p[i] for i in idx[:-1]), 0)
            if not mask:
                break
        return mask

    values = [1 - x for x in range(d)] if problem.complement else list(range(d))
    frames = [[0, allowed(0), 0]]
    while frames:
        frame = frames[-1]
        l, mask, pos = frame
        if pos == d:
            frames.pop()
            continue
        frame[2] += 1
        value = values[pos]
        if not (mask >> value) & 1:
            continue
        p[l] = value
        if l + 1 == n:
            yield problem.flip(p)
            if meter is not None:
                meter.emit()
            continue
        frames.append([l + 1, allowed(l + 1), 0])


def enumerate_closure(problem, family: Family | None = None, *, fast: bool = True,
                      meter: DelayMeter | None = None, stats: BacktrackStats | None = None) -> Iterator[tuple]:
    """Stream the closure for a resolved problem (or a clone spec plus a family).

    ``fast`` selects the specialised enumerator for the algorithm; otherwise the
    generic backtrack search runs with the algorithm's decider as extension test.
    """
    if not isinstance(problem, ResolvedProblem):
        problem = resolve(problem, family)
    if not fast:
        return backtrack_enumerate(problem, stats)
    fam, comp, alg = problem.family, problem.complement, problem.algorithm
    spec = problem.spec
    if alg == "E2":
        return enumerate_e2_fast(fam, comp, meter)
    if alg == "L0":
        return enumerate_l0_gray(fam, comp, meter)
    if alg == "L2":
        return enumerate_l2_gray(fam, comp, meter)
    if alg == "M2":
        if spec.negation:
            return enumerate_atoms_gray(fam, True, True, comp, meter)
        return enumerate_m2_hill_climb(fam, comp, meter)
    if alg == "R2":
        return enumerate_atoms_gray(fam, True, True, comp, meter)
    if alg == "R0":
        return enumerate_atoms_gray(fam, True, False, comp, meter)
    if alg == "D2":
        return enumerate_d2_incremental(fam, comp, meter)
    if alg == "NU":
        return enumerate_nu_incremental(problem, meter)
    if alg == "ASSOC":
        return enumerate_associative_dfs(problem.operations[0], fam, meter)
    if alg == "SATURATE":
        return saturate_stream(problem.operations, fam)
    # I2, S10, S12, GROUP: the backtrack search is the specialised algorithm
    return backtrack_enumerate(problem, stats)


def count_closure(problem, family: Family | None = None, *, fast: bool = True) -> int:
    return sum(1 for _ in enumerate_closure(problem, family, fast=fast))
