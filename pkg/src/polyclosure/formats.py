"""Truth-table files, monotone DNF conversion and instance generators."""

from __future__ import annotations

import itertools
import random
from typing import Iterable, Sequence

from .core import DomainError, Family, Operation, parse_vector, render_vector


def parse_truth_tables(text: str) -> list[Operation]:
    """Parse ``op <name> <d> <arity>`` blocks of ``<input-string> <output-digit>`` lines."""
    ops: list[Operation] = []
    current = None

    def finish():
        if current is None:
            return
        name, d, arity, rows = current
        missing = [a for a in itertools.product(range(d), repeat=arity) if a not in rows]
        if missing:
            raise DomainError(f"op {name}: input {render_vector(missing[0])} has no output")
        ops.append(Operation(name, arity, d, tuple(rows[a] for a in itertools.product(range(d), repeat=arity))))

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "op":
            finish()
            if len(parts) != 4 or not parts[2].isdigit() or not parts[3].isdigit():
                raise DomainError(f"line {lineno}: expected 'op <name> <d> <arity>'")
            d, arity = int(parts[2]), int(parts[3])
            if not 2 <= d <= 10 or arity < 1:
                raise DomainError(f"line {lineno}: need 2 <= d <= 10 and arity >= 1")
            current = (parts[1], d, arity, {})
            continue
        if current is None:
            raise DomainError(f"line {lineno}: table row before any 'op' header")
        name, d, arity, rows = current
        if len(parts) != 2:
            raise DomainError(f"line {lineno}: expected '<input-string> <output-digit>'")
        try:
            args = parse_vector(parts[0], d)
            (out,) = parse_vector(parts[1], d)
        except (DomainError, ValueError) as exc:
            raise DomainError(f"line {lineno}: {exc}") from None
        if len(args) != arity:
            raise DomainError(f"line {lineno}: input has {len(args)} digits, op {name} has arity {arity}")
        if args in rows:
            raise DomainError(f"line {lineno}: input {parts[0]} listed twice for op {name}")
        rows[args] = out
    finish()
    return ops


def render_truth_tables(ops: Iterable[Operation]) -> str:
    lines = []
    for f in ops:
        lines.append(f"op {f.name} {f.d} {f.arity}")
        for args in f.inputs():
            lines.append(f"{render_vector(args)} {f(*args)}")
    return "\n".join(lines) + "\n"


def parse_dnf(text: str) -> tuple[list[frozenset[int]], int]:
    """Monotone DNF: one clause per line as 1-based variable indices; optional ``vars N`` header."""
    clauses: list[frozenset[int]] = []
    n_vars = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if parts[0] == "vars":
            if len(parts) != 2 or not parts[1].isdigit():
                raise ValueError(f"line {lineno}: expected 'vars N'")
            n_vars = int(parts[1])
            continue
        clause = set()
        for tok in parts:
            tok = tok.lstrip("x")
            if not tok.isdigit():
                raise ValueError(f"line {lineno}: {raw.strip()!r} is not a monotone clause (negations are rejected)")
            clause.add(int(tok))
        if 0 in clause:
            raise ValueError(f"line {lineno}: variables are numbered from 1")
        clauses.append(frozenset(clause))
    used = max((max(c) for c in clauses if c), default=0)
    if n_vars and used > n_vars:
        raise ValueError(f"clause uses variable {used} but only {n_vars} declared")
    return clauses, max(n_vars, used)


def dnf_to_family(clauses: Sequence[frozenset[int]], n_vars: int) -> Family:
    """Hyperedges whose union closure is in bijection with the models of the monotone DNF."""
    if n_vars < 1:
        raise ValueError("need at least one variable")
    rows = []
    for clause in clauses:
        edge = [1 if i + 1 in clause else 0 for i in range(n_vars)]
        rows.append(tuple(edge))
        for j in range(n_vars):
            if not edge[j]:
                grown = list(edge)
                grown[j] = 1
                rows.append(tuple(grown))
    return Family(rows, n=n_vars)


def count_dnf_models(clauses: Sequence[frozenset[int]], n_vars: int) -> int:
    total = 0
    for bits in itertools.product((0, 1), repeat=n_vars):
        true = {i + 1 for i, b in enumerate(bits) if b}
        if any(c <= true for c in clauses):
            total += 1
    return total


def random_family(n: int, m: int, seed: int, density: float = 0.5, d: int = 2) -> Family:
    """``m`` random draws (duplicates dropped); a coordinate is non-zero with probability ``density``."""
    rng = random.Random(seed)
    rows = []
    for _ in range(m):
        row = []
        for _ in range(n):
            if rng.random() < density:
                row.append(1 if d == 2 else rng.randrange(1, d))
            else:
                row.append(0)
        rows.append(tuple(row))
    return Family(rows, n=n, d=d)


def random_hypergraph(vertices: int, edges: int, seed: int, density: float = 0.4) -> list[frozenset[int]]:
    rng = random.Random(seed)
    return [frozenset(v for v in range(1, vertices + 1) if rng.random() < density) for _ in range(edges)]


def parse_hypergraph(text: str) -> list[frozenset[int]]:
    edges = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            edges.append(frozenset(int(t) for t in line.replace(",", " ").split()))
    return edges


def hitting_set_family(edges: Sequence[frozenset[int]], vertices: int) -> Family:
    """Characteristic vectors of the complemented hyperedges.

    The all-ones vector lies in the closure under ``S10^k`` iff the hypergraph
    has no hitting set of size ``k``.
    """
    for e in edges:
        for v in e:
            if not 1 <= v <= vertices:
                raise ValueError(f"vertex {v} outside 1..{vertices}")
    return Family((tuple(0 if i + 1 in e else 1 for i in range(vertices)) for e in edges), n=vertices)


def has_hitting_set(edges: Sequence[frozenset[int]], vertices: int, k: int) -> bool:
    """Exhaustive search for a vertex set of size ``k`` meeting every edge."""
    if k > vertices:
        return False
    return any(all(e & set(c) for e in edges) for c in itertools.combinations(range(1, vertices + 1), k))
