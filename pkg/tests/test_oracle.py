from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from polyclosure.clones import AND, MAJ, OR, XOR
from polyclosure.core import Family, parse_vector
from polyclosure.oracle import (
    SaturationOverflow,
    equivalence_harness,
    saturate,
    saturate_set,
    saturate_stream,
)


def fam(*rows, d=2):
    return Family([parse_vector(r, d) for r in rows], d=d)


WORKED_S = fam("1101", "0110", "1010")


def test_union_closure_of_worked_example():
    assert saturate([OR], WORKED_S) == fam("1101", "1111", "0110", "1010", "1110")


def test_no_operations_returns_input():
    assert saturate([], WORKED_S) == WORKED_S


def test_majority_fixpoint():
    assert saturate([MAJ], fam("110", "011", "101")) == fam("110", "011", "101", "111")


def test_stream_emits_members_first():
    out = list(saturate_stream([OR], WORKED_S))
    assert out[:3] == list(WORKED_S.members)
    assert set(out[3:]) == {(1, 1, 1, 1), (1, 1, 1, 0)}


def test_stream_xor_emits_zero_after_member():
    assert list(saturate_stream([XOR], fam("110"))) == [(1, 1, 0), (0, 0, 0)]


def test_empty_family_closes_to_empty():
    assert saturate([OR, AND], Family(n=3)).m == 0


def test_budget_overflow_after_partial_output():
    seen = []
    with pytest.raises(SaturationOverflow) as info:
        for v in saturate_stream([OR, XOR], fam("1000", "0100", "0010", "0001"), budget=6):
            seen.append(v)
    assert info.value.budget == 6
    assert len(seen) == 6


def test_domain_mismatch_rejected():
    with pytest.raises(ValueError):
        saturate([AND], fam("12", d=3))


def test_harness_clean_examples():
    rng = random.Random(5)
    rows = [tuple(rng.randint(0, 1) for _ in range(5)) for _ in range(4)]
    assert equivalence_harness("E2", Family(rows, n=5)).ok
    assert equivalence_harness("S12", fam("110", "011")).ok


def test_harness_reports_injected_fault():
    family = fam("110", "011")
    base = equivalence_harness("E2", family)

    def faulty(v):
        return True if v == (1, 1, 1) else (v in saturate_set([AND], family))

    report = equivalence_harness("E2", family, decider=faulty)
    assert base.ok
    assert not report.ok
    assert [m.vector for m in report.mismatches] == [(1, 1, 1)]
    assert "111" in str(report)


families = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.tuples(*[st.integers(0, 1)] * n), min_size=1, max_size=4).map(
        lambda rows: Family(rows, n=n)
    )
)
op_sets = st.lists(st.sampled_from([AND, OR, XOR, MAJ]), min_size=1, max_size=2)


@settings(max_examples=60)
@given(families, op_sets)
def test_saturation_is_idempotent_and_extensive(family, ops):
    closed = saturate(ops, family)
    assert set(family.members) <= set(closed.members)
    assert saturate(ops, closed) == closed


@settings(max_examples=60)
@given(families, op_sets, st.data())
def test_saturation_is_monotone(family, ops, data):
    extra = data.draw(st.lists(st.tuples(*[st.integers(0, 1)] * family.n), max_size=2))
    bigger = family.union(extra)
    assert saturate_set(ops, family) <= saturate_set(ops, bigger)


@settings(max_examples=40)
@given(families, op_sets)
def test_stream_matches_set(family, ops):
    out = list(saturate_stream(ops, family))
    assert len(out) == len(set(out))
    assert set(out) == set(saturate(ops, family).members)
