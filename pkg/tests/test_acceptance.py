"""End-to-end acceptance checks, one test per criterion."""

from __future__ import annotations

import io
import itertools
import random
import time

import numpy as np

from polyclosure.bench import measure
from polyclosure.cli import main
from polyclosure.clones import legal_specs, resolve
from polyclosure.core import Family, Operation, to_mask
from polyclosure.enumeration import BacktrackStats, backtrack_enumerate, enumerate_closure, gf2_basis
from polyclosure.formats import (
    count_dnf_models,
    dnf_to_family,
    has_hitting_set,
    hitting_set_family,
    random_family,
    random_hypergraph,
)
from polyclosure.multidomain import build_group_structure, decide_group, enumerate_associative_dfs
from polyclosure.oracle import equivalence_harness, saturate_set

CAPPED = Operation.from_function("cappedSum", 2, 3, lambda x, y: min(x + y, 2))
DUAL_DISC = Operation.from_function("dualdisc", 3, 3, lambda x, y, z: y if y == z else x)


def _rand_family(rng, n, m, d=2):
    return Family([tuple(rng.randrange(d) for _ in range(n)) for _ in range(m)], n=n, d=d)


def _sweep_families():
    """Every family with n <= 4 and m <= 3, then 200 seeded random ones with n <= 6 and m <= 4."""
    for n in range(1, 5):
        vecs = list(itertools.product((0, 1), repeat=n))
        for m in range(4):
            for rows in itertools.combinations(vecs, m):
                yield Family(rows, n=n)
    for seed in range(200):
        rng = random.Random(seed)
        yield _rand_family(rng, rng.randint(1, 6), rng.randint(1, 4))


def test_ac01_worked_example(tmp_path, verdict):
    path = tmp_path / "s.txt"
    path.write_text("1101\n0110\n1010\n")
    out = io.StringIO()
    start = time.perf_counter()
    code = main(["enum", "--clone", "E2 dual", str(path)], out=out)
    elapsed = time.perf_counter() - start
    lines = out.getvalue().split()
    ok = code == 0 and len(lines) == 5 and set(lines) == {"1101", "1111", "0110", "1010", "1110"} and elapsed < 1
    verdict("AC1", ok, f"emitted {sorted(lines)} in {elapsed:.3f}s")


def test_ac02_oracle_equivalence_sweep(verdict):
    specs = legal_specs()
    start = time.perf_counter()
    runs = 0
    failures = []
    for family in _sweep_families():
        for spec in specs:
            if (spec.zero or spec.one) and family.m == 0:
                continue
            report = equivalence_harness(spec, family)
            runs += 1
            if not report.ok:
                failures.append(str(report))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 600
    detail = f"{runs} harness runs over {len(specs)} clone specs, {len(failures)} with mismatches, {elapsed:.0f}s"
    if failures:
        detail += "; first: " + failures[0]
    verdict("AC2", ok, detail)


def test_ac03_delay_counter_bounds(verdict):
    rows = []
    ok = True
    for clone in ("E2", "L0", "M2", "D2"):
        ratios = []
        for n in (32, 64, 128):
            for seed, density in ((1, 0.5), (2, 0.5), (3, 0.1)):
                family = random_family(n, n // 2, seed=1000 * n + seed, density=density)
                report = measure(clone, family, limit=1500)
                ratios.append(report.ratio)
                ok &= report.within_bound and report.emissions > 0
        spread = max(ratios) / min(ratios) if min(ratios) > 0 else float("inf")
        ok &= max(ratios) <= 4
        rows.append(f"{clone} max ratio {max(ratios):.3f} (spread {spread:.1f})")
    verdict("AC3", ok, "; ".join(rows))


def _rank_numpy(rows, n):
    """Rank over GF(2) by dense elimination on a numpy matrix."""
    a = np.array(rows, dtype=np.uint8).reshape(len(rows), n) % 2
    rank = 0
    for col in range(n):
        pivots = np.nonzero(a[rank:, col])[0]
        if len(pivots) == 0:
            continue
        p = rank + pivots[0]
        a[[rank, p]] = a[[p, rank]]
        below = np.nonzero(a[:, col])[0]
        for r in below:
            if r != rank:
                a[r] ^= a[rank]
        rank += 1
        if rank == len(rows):
            break
    return rank


def test_ac04_l0_structure(verdict):
    rng = random.Random(404)
    bad = []
    for trial in range(100):
        n, m = rng.randint(1, 14), rng.randint(1, 9)
        family = _rand_family(rng, n, m)
        out = list(enumerate_closure(resolve("L0", family)))
        rank = _rank_numpy(family.members, n)
        basis = gf2_basis(family)
        steps_ok = all(to_mask(a) ^ to_mask(b) in set(basis) for a, b in zip(out, out[1:]))
        if len(out) != 2 ** rank or len(set(out)) != len(out) or len(basis) != rank or not steps_ok:
            bad.append(trial)
    verdict("AC4", not bad, f"100 instances, {len(bad)} violations of |Cl| = 2^rank or single-step Gray order")


def test_ac05_baker_pixley_three_values(verdict):
    bad = 0
    for seed in range(200):
        rng = random.Random(seed)
        family = _rand_family(rng, rng.randint(1, 5), rng.randint(1, 4), d=3)
        problem = resolve([DUAL_DISC], family)
        closure = saturate_set([DUAL_DISC], family)
        assert problem.algorithm == "NU"
        for cand in itertools.product(range(3), repeat=family.n):
            bad += problem.decide(cand) != (cand in closure)
    verdict("AC5", bad == 0, f"200 seeds, {bad} disagreements with saturation")


def test_ac06_commutative_groups(verdict):
    bad = 0
    for k in (4, 6):
        op = Operation.from_function(f"add{k}", 2, k, lambda x, y, k=k: (x + y) % k)
        group = build_group_structure(op)
        for seed in range(200):
            rng = random.Random(seed)
            family = _rand_family(rng, rng.randint(1, 4), rng.randint(1, 3), d=k)
            closure = saturate_set([op], family)
            for cand in itertools.product(range(k), repeat=family.n):
                bad += decide_group(group, family, cand) != (cand in closure)
            emitted = set(enumerate_closure(resolve([op], family)))
            identity = (group.identity,) * family.n
            closed = all(tuple(op(a, b) for a, b in zip(x, y)) in emitted for x in emitted for y in emitted)
            bad += identity not in emitted or not closed or emitted != closure
    verdict("AC6", bad == 0, f"Z4 and Z6 over 200 seeds each, {bad} failures")


def test_ac07_associative_dfs(verdict):
    small = list(enumerate_associative_dfs(CAPPED, Family([(0, 1), (1, 0)], d=3)))
    bad = 0
    for seed in range(200):
        rng = random.Random(seed)
        family = _rand_family(rng, rng.randint(1, 5), rng.randint(1, 3), d=3)
        out = list(enumerate_associative_dfs(CAPPED, family))
        bad += len(out) != len(set(out)) or set(out) != saturate_set([CAPPED], family)
    units = Family([tuple(int(i == j) for j in range(9)) for i in range(9)], d=3)
    seen = set()
    dupes = 0
    for vec in itertools.islice(enumerate_associative_dfs(CAPPED, units), 10_000):
        dupes += vec in seen  # hash-set membership
        seen.add(vec)
    ok = len(small) == 8 and len(set(small)) == 8 and bad == 0 and dupes == 0 and len(seen) == 10_000
    verdict("AC7", ok, f"{{01,10}} -> {len(small)} vectors; {bad} random mismatches; {dupes} duplicates in 10^4")


def test_ac08_dnf_parsimony(verdict):
    bad = 0
    for seed in range(100):
        rng = random.Random(seed)
        n = rng.randint(1, 6)
        clauses = [frozenset(v for v in range(1, n + 1) if rng.random() < 0.4) or frozenset({rng.randint(1, n)})
                   for _ in range(rng.randint(1, 5))]
        family = dnf_to_family(clauses, n)
        count = sum(1 for _ in enumerate_closure(resolve("E2 dual", family)))
        bad += count != count_dnf_models(clauses, n)
    verdict("AC8", bad == 0, f"100 monotone DNFs, {bad} count mismatches")


def test_ac09_backtrack_soundness(verdict):
    specs = legal_specs()
    rng = random.Random(909)
    families = [Family(rows, n=3) for m in range(1, 4)
                for rows in itertools.combinations(itertools.product((0, 1), repeat=3), m)]
    families += [_rand_family(rng, rng.randint(1, 7), rng.randint(1, 4)) for _ in range(40)]
    worst = 0.0
    bad = 0
    checked = 0

    def check(problem):
        nonlocal worst, bad, checked
        stats = BacktrackStats()
        sols = sum(1 for _ in backtrack_enumerate(problem, stats))
        limit = problem.n * sols + 1
        worst = max(worst, stats.internal_nodes / limit)
        bad += stats.internal_nodes > limit
        checked += 1

    for family in families:
        for spec in specs:
            check(resolve(spec, family))
    for seed in range(30):
        r = random.Random(seed)
        fam3 = _rand_family(r, r.randint(1, 4), r.randint(1, 3), d=3)
        check(resolve([DUAL_DISC], fam3))
        check(resolve([CAPPED], fam3))
        fam6 = _rand_family(r, r.randint(1, 3), r.randint(1, 3), d=6)
        check(resolve([Operation.from_function("add6", 2, 6, lambda x, y: (x + y) % 6)], fam6))
    verdict("AC9", bad == 0, f"{checked} runs, max internal nodes / (n*#sol+1) = {worst:.3f}")


def test_ac10_hitting_set_generator(verdict):
    bad = 0
    runs = 0
    for seed in range(50):
        rng = random.Random(seed)
        vertices = rng.randint(2, 6)
        edges = random_hypergraph(vertices, rng.randint(1, 6), seed, density=0.4)
        family = hitting_set_family(edges, vertices)
        ones = (1,) * vertices
        for k in range(2, min(vertices, 4) + 1):
            problem = resolve(f"S10^{k}", family)
            assert problem.algorithm == "NU"
            bad += problem.decide(ones) == has_hitting_set(edges, vertices, k)
            runs += 1
    verdict("AC10", bad == 0, f"50 hypergraphs, {runs} (graph, k) pairs, {bad} disagreements")
