"""Naive fixpoint saturation: the ground truth every specialised algorithm is checked against."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .core import DomainError, Family, Operation, Vector, render_vector

DEFAULT_BUDGET = 1 << 20


class SaturationOverflow(RuntimeError):
    """The accumulated closure grew past the configured budget."""

    def __init__(self, budget: int, produced: int):
        super().__init__(f"saturation exceeded budget of {budget} vectors ({produced} produced)")
        self.budget = budget
        self.produced = produced


@dataclass
class SaturationState:
    frontier: list
    accumulated: set
    applications: int = 0


def _check_ops(ops: Sequence[Operation], family: Family) -> None:
    for f in ops:
        if f.d != family.d:
            raise DomainError(f"operation {f.name} is over d={f.d}, family over d={family.d}")


def _argument_tuples(f: Operation, old: list, new: list) -> Iterator[tuple]:
    """All argument tuples drawn from ``old + new`` with at least one entry from ``new``."""
    t = f.arity
    if f.is_symmetric:
        # multisets are enough for a symmetric table
        for k in range(1, t + 1):
            for tail in itertools.combinations_with_replacement(new, k):
                for head in itertools.combinations_with_replacement(old, t - k):
                    yield head + tail
        return
    both = old + new
    for first in range(t):
        # position ``first`` is the leftmost argument taken from ``new``
        pools = [old] * first + [new] + [both] * (t - first - 1)
        yield from itertools.product(*pools)


def _make_apply(f: Operation, n: int, boolean: bool):
    if boolean:
        kernel, full = f._mask_kernel, (1 << n) - 1
        return lambda args: kernel(*args) & full
    return lambda args: tuple(f(*col) for col in zip(*args))


def saturate_stream(
    ops: Sequence[Operation], family: Family, budget: int = DEFAULT_BUDGET
) -> Iterator[Vector]:
    """Yield the members of ``family`` and then each newly derived vector once, in discovery order.

    Semi-naive evaluation: every round only applies the operations to argument
    tuples that involve at least one vector discovered in the previous round.
    This is incremental delay, not polynomial delay.
    """
    _check_ops(ops, family)
    boolean = family.d == 2
    n = family.n
    universe = family.d ** n
    if boolean:
        start = list(family.masks)
        emit = lambda x: tuple((x >> i) & 1 for i in range(n))  # noqa: E731
    else:
        start = list(family.members)
        emit = lambda x: x  # noqa: E731
    state = SaturationState(frontier=start, accumulated=set(start))
    if len(state.accumulated) > budget:
        raise SaturationOverflow(budget, len(state.accumulated))
    for x in start:
        yield emit(x)
    appliers = [(f, _make_apply(f, n, boolean)) for f in ops]
    old: list = []
    while state.frontier and len(state.accumulated) < universe:
        fresh: list = []
        for f, apply in appliers:
            for args in _argument_tuples(f, old, state.frontier):
                state.applications += 1
                y = apply(args)
                if y not in state.accumulated:
                    state.accumulated.add(y)
                    if len(state.accumulated) > budget:
                        raise SaturationOverflow(budget, len(state.accumulated))
                    fresh.append(y)
                    yield emit(y)
        old = old + state.frontier
        state.frontier = fresh


def saturate(ops: Sequence[Operation], family: Family, budget: int = DEFAULT_BUDGET) -> Family:
    """The least superset of ``family`` closed under every operation in ``ops``."""
    return Family(saturate_stream(ops, family, budget), n=family.n, d=family.d)


def saturate_set(ops: Sequence[Operation], family: Family, budget: int = DEFAULT_BUDGET) -> set:
    return set(saturate_stream(ops, family, budget))


@dataclass
class Mismatch:
    vector: Vector
    expected: bool
    got: bool
    source: str

    def __str__(self) -> str:
        return f"{self.source}: {render_vector(self.vector)} expected {self.expected} got {self.got}"


@dataclass
class HarnessReport:
    spec: str
    family: Family
    oracle_size: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def __str__(self) -> str:
        head = f"{self.spec} on {self.family!r}: |Cl|={self.oracle_size}, {len(self.mismatches)} mismatches"
        return "\n".join([head] + [f"  {m}" for m in self.mismatches])


def compare_enumeration(report: HarnessReport, expected: set, emitted: Iterable[Vector], source: str) -> None:
    emitted = list(emitted)
    seen = set()
    for v in emitted:
        if v in seen:
            report.mismatches.append(Mismatch(v, False, True, f"{source} (duplicate)"))
        seen.add(v)
        if v not in expected:
            report.mismatches.append(Mismatch(v, False, True, source))
    for v in sorted(expected - seen):
        report.mismatches.append(Mismatch(v, True, False, source))


def equivalence_harness(spec, family: Family, *, decider=None, budget: int = DEFAULT_BUDGET) -> HarnessReport:
    """Check a clone's decider and enumerators against saturation over all ``d^n`` candidates.

    ``spec`` is anything :func:`polyclosure.clones.resolve` accepts. ``decider``
    overrides the resolved decision procedure (used to test the harness itself).
    """
    from .clones import resolve, spec_generators
    from .enumeration import enumerate_closure

    problem = resolve(spec, family)
    expected = saturate_set(spec_generators(problem.spec, family.d), family, budget)
    report = HarnessReport(str(problem.spec), family, oracle_size=len(expected))
    decide = decider or problem.decide
    for v in itertools.product(range(family.d), repeat=family.n):
        got = bool(decide(v))
        want = v in expected
        if got != want:
            report.mismatches.append(Mismatch(v, want, got, "decide"))
    compare_enumeration(report, expected, enumerate_closure(problem, fast=True), "enumerate(fast)")
    compare_enumeration(report, expected, enumerate_closure(problem, fast=False), "enumerate(generic)")
    return report
