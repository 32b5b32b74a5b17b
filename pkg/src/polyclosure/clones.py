"""The reduced Post lattice, its three reductions, and dispatch to a decide/enumerate pair."""

from __future__ import annotations

import itertools
import re
import warnings
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Sequence

from . import decide as bdecide
from . import multidomain
from .core import DomainError, Family, Operation, check_vector

MAX_THRESHOLD_K = 12


def _bool(name: str, arity: int, fn) -> Operation:
    return Operation.from_function(name, arity, 2, fn)


@lru_cache(maxsize=None)
def threshold(k: int) -> Operation:
    """``Th_k^{k+1}``: (k+1)-ary, 1 iff at least k inputs are 1."""
    return _bool(f"th{k}", k + 1, lambda *a: int(sum(a) >= k))


AND = _bool("and", 2, lambda x, y: x & y)
OR = _bool("or", 2, lambda x, y: x | y)
XOR = _bool("xor", 2, lambda x, y: x ^ y)
XOR3 = _bool("xor3", 3, lambda x, y, z: x ^ y ^ z)
MAJ = _bool("maj", 3, lambda x, y, z: int(x + y + z >= 2))
AND_OR = _bool("x&(y|z)", 3, lambda x, y, z: x & (y | z))
AND_IMP = _bool("x&(y->z)", 3, lambda x, y, z: x & ((1 - y) | z))
MUX = _bool("x?y:z", 3, lambda x, y, z: y if x else z)
NOT = _bool("not", 1, lambda x: 1 - x)
ZERO = _bool("zero", 1, lambda x: 0)
ONE = _bool("one", 1, lambda x: 1)

BOOLEAN_OPS = {f.name: f for f in (AND, OR, XOR, XOR3, MAJ, AND_OR, AND_IMP, MUX, NOT, ZERO, ONE)}

# base name -> generator tables; threshold bases get Th_k^{k+1} prepended at resolve time
BASES: dict[str, tuple[Operation, ...]] = {
    "I2": (),
    "L2": (XOR3,),
    "L0": (XOR,),
    "E2": (AND,),
    "S10": (AND_OR,),
    "S12": (AND_IMP,),
    "D2": (MAJ,),
    "D1": (MAJ, XOR3),
    "M2": (OR, AND),
    "R2": (MUX,),
    "R0": (OR, XOR),
}
THRESHOLD_BASES = {"S10", "S12"}
# bases whose generated clone is closed under taking duals
SELF_DUAL = {"I2", "L2", "D2", "D1", "M2", "R2"}

_CLONE_RE = re.compile(r"^(?P<base>[A-Za-z][A-Za-z0-9]*)(?:\^(?P<k>\d+))?$")


@dataclass(frozen=True)
class CloneSpec:
    """A named base of the reduced lattice plus modifiers, or an explicit operation set."""

    base: str
    k: int | None = None
    zero: bool = False
    one: bool = False
    dual: bool = False
    negation: bool = False
    operations: tuple[Operation, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.base == "explicit":
            if not self.operations:
                raise ValueError("explicit clone specs need at least one operation")
            if len({f.d for f in self.operations}) != 1:
                raise DomainError("explicit operations must share one domain")
            if self.zero or self.one or self.dual or self.negation or self.k is not None:
                raise ValueError("modifiers are only defined for named bases")
            return
        if self.base not in BASES:
            raise ValueError(f"unknown clone base {self.base!r}")
        if self.k is not None:
            if self.base not in THRESHOLD_BASES:
                raise ValueError(f"{self.base} takes no threshold parameter")
            if not 2 <= self.k <= MAX_THRESHOLD_K:
                raise ValueError(f"threshold parameter must be in 2..{MAX_THRESHOLD_K}, got {self.k}")
        if self.negation and self.base not in SELF_DUAL:
            raise ValueError(f"+neg needs a self-dual base; {self} is not")

    @classmethod
    def explicit(cls, operations: Sequence[Operation]) -> "CloneSpec":
        return cls("explicit", operations=tuple(operations))

    @property
    def is_explicit(self) -> bool:
        return self.base == "explicit"

    @property
    def d(self) -> int:
        return self.operations[0].d if self.is_explicit else 2

    def __str__(self) -> str:
        if self.is_explicit:
            return "explicit(" + ", ".join(f.name for f in self.operations) + ")"
        parts = [self.base + (f"^{self.k}" if self.k is not None else "")]
        parts += [flag for flag, on in (("+0", self.zero), ("+1", self.one), ("dual", self.dual), ("+neg", self.negation)) if on]
        return " ".join(parts)


def parse_clone(text: str) -> CloneSpec:
    """Parse e.g. ``"E2 dual"``, ``"S10^4"``, ``"M2 +neg +0"``."""
    tokens = text.split()
    if not tokens:
        raise ValueError("empty clone name")
    match = _CLONE_RE.match(tokens[0])
    if not match:
        raise ValueError(f"malformed clone base {tokens[0]!r}")
    base = match["base"].upper()
    k = int(match["k"]) if match["k"] else None
    flags = {"zero": False, "one": False, "dual": False, "negation": False}
    names = {"+0": "zero", "+1": "one", "dual": "dual", "+neg": "negation"}
    for tok in tokens[1:]:
        key = names.get(tok.lower())
        if key is None:
            raise ValueError(f"unknown clone modifier {tok!r}")
        flags[key] = True
    return CloneSpec(base, k, **flags)


def base_generators(spec: CloneSpec) -> tuple[Operation, ...]:
    if spec.is_explicit:
        return spec.operations
    ops = BASES[spec.base]
    if spec.k is not None:
        ops = (threshold(spec.k),) + ops
    return ops


def spec_generators(spec: CloneSpec | str, d: int = 2) -> tuple[Operation, ...]:
    """Generator tables of the full clone (base, dualised if asked, plus modifiers)."""
    if isinstance(spec, str):
        spec = parse_clone(spec)
    ops = base_generators(spec)
    if spec.is_explicit:
        return ops
    if spec.dual:
        ops = tuple(f.dual() for f in ops)
    extra = [op for op, on in ((ZERO, spec.zero), (ONE, spec.one), (NOT, spec.negation)) if on]
    return tuple(ops) + tuple(extra)


def adjoin_constants(family: Family, zero: bool = False, one: bool = False) -> Family:
    if not (zero or one):
        return family
    if family.d != 2:
        raise DomainError("constants are adjoined to boolean families only")
    if family.m == 0:
        raise ValueError("cannot adjoin constants to an empty family")
    extra = []
    if zero:
        extra.append((0,) * family.n)
    if one:
        extra.append((1,) * family.n)
    return family.union(extra)


def dualize_family(family: Family) -> Family:
    """Complement every member coordinate-wise."""
    if family.d != 2:
        raise DomainError("complementation needs d = 2")
    return Family((tuple(1 - x for x in v) for v in family.members), n=family.n, d=2)


def close_under_negation(family: Family) -> Family:
    if family.d != 2:
        raise DomainError("complementation needs d = 2")
    return family.union(tuple(1 - x for x in v) for v in family.members)


@dataclass(frozen=True, eq=False)
class ResolvedProblem:
    """Which algorithm to run, on which preprocessed family, and whether to complement outputs.

    ``operations`` are the tables the near-unanimity and saturation paths need;
    ``width`` is the Baker-Pixley projection width.
    """

    spec: CloneSpec
    algorithm: str
    family: Family
    complement: bool = False
    operations: tuple[Operation, ...] = ()
    width: int | None = None
    original_n: int = 0

    @property
    def n(self) -> int:
        return self.family.n

    @property
    def d(self) -> int:
        return self.family.d

    @cached_property
    def group(self):
        return multidomain.build_group_structure(self.operations[0]) if self.algorithm == "GROUP" else None

    def flip(self, vec):
        return tuple(1 - x for x in vec) if self.complement else tuple(vec)

    def make_decider(self, family: Family) -> Callable[[tuple], bool]:
        """A membership test for ``Cl(family)`` under this problem's base algorithm."""
        return make_decider(self.algorithm, family, self.operations, self.width, self.group)

    @cached_property
    def _decider(self):
        return self.make_decider(self.family)

    def decide(self, vec) -> bool:
        vec = check_vector(vec, self.family.n, self.family.d)
        return self._decider(self.flip(vec))


def make_decider(algorithm: str, family: Family, operations=(), width=None, group=None):
    if algorithm == "I2":
        return lambda v: v in family
    if algorithm == "E2":
        return lambda v: bdecide.decide_e2(family, v)
    if algorithm == "L0":
        return bdecide.GF2Span(family).contains
    if algorithm == "L2":
        return bdecide.GF2Span(family).contains_odd
    if algorithm == "S10":
        return lambda v: bdecide.decide_s10(family, v)
    if algorithm == "S12":
        return lambda v: bdecide.decide_s12(family, v)
    if algorithm == "M2":
        meets = bdecide.M2Meets(family)
        return meets.contains
    if algorithm == "D2":
        table = bdecide.PairTable(family)
        return lambda v: bdecide.decide_d2(table, v)
    if algorithm in ("R2", "R0"):
        classes = bdecide.ColumnClasses(family)
        fn = bdecide.decide_r2 if algorithm == "R2" else bdecide.decide_r0
        return lambda v: fn(classes, family, v)
    if algorithm == "NU":
        return bdecide.ProjectionCache(operations, width, family).contains
    if algorithm == "GROUP":
        return lambda v: multidomain.decide_group(group, family, v)
    if algorithm in ("ASSOC", "SATURATE"):
        from .oracle import saturate_set

        closure = None

        def decide(v):
            nonlocal closure
            if closure is None:
                closure = saturate_set(operations, family)
            return tuple(v) in closure

        return decide
    raise ValueError(f"unknown algorithm {algorithm!r}")


def resolve(spec: CloneSpec | str | Sequence[Operation], family: Family) -> ResolvedProblem:
    """Apply the modifiers of ``spec`` to ``family`` and pick the algorithm to run."""
    if isinstance(spec, str):
        spec = parse_clone(spec)
    elif not isinstance(spec, CloneSpec):
        spec = CloneSpec.explicit(spec)
    if spec.is_explicit:
        return _resolve_explicit(spec, family)
    if family.d != 2:
        raise DomainError(f"named clone {spec} needs a boolean family, got d={family.d}")
    fam = adjoin_constants(family, spec.zero, spec.one)
    if spec.negation:
        fam = close_under_negation(fam)
    if spec.dual:
        fam = dualize_family(fam)
    ops = base_generators(spec)
    algorithm, width = spec.base, None
    if spec.k is not None:
        algorithm, width = "NU", spec.k
    elif spec.base == "D1":
        algorithm, width = "NU", 2
    return ResolvedProblem(spec, algorithm, fam, spec.dual, ops, width, family.n)


def _resolve_explicit(spec: CloneSpec, family: Family) -> ResolvedProblem:
    ops = spec.operations
    if spec.d != family.d:
        raise DomainError(f"operations are over d={spec.d}, family over d={family.d}")
    nu = [a for a in (multidomain.detect_near_unanimity(f) for f in ops) if a is not None]
    if nu:
        return ResolvedProblem(spec, "NU", family, False, ops, min(nu) - 1, family.n)
    if len(ops) == 1 and ops[0].arity == 2:
        f = ops[0]
        if multidomain.group_axiom_violation(f) is None:
            return ResolvedProblem(spec, "GROUP", family, False, ops, None, family.n)
        if multidomain.is_associative(f):
            return ResolvedProblem(spec, "ASSOC", family, False, ops, None, family.n)
    warnings.warn(
        f"{spec}: no near-unanimity, group or associative structure detected; "
        "falling back to saturation (incremental delay only)",
        stacklevel=2,
    )
    return ResolvedProblem(spec, "SATURATE", family, False, ops, None, family.n)


LATTICE_BASES = ("I2", "L2", "L0", "E2", "S10", "S10^2", "S10^3", "S12", "S12^2", "S12^3",
                 "D2", "D1", "M2", "R2", "R0")


def legal_specs(bases: Sequence[str] = LATTICE_BASES) -> list[CloneSpec]:
    """Every base combined with every legal subset of the modifiers ``+0 +1 dual +neg``."""
    out = []
    for name in bases:
        plain = parse_clone(name)
        for zero, one, dual, neg in itertools.product((False, True), repeat=4):
            if neg and plain.base not in SELF_DUAL:
                continue
            out.append(CloneSpec(plain.base, plain.k, zero, one, dual, neg))
    return out
