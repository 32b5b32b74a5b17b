"""Membership testing and polynomial-delay enumeration of closures of vector families."""

from .clones import CloneSpec, ResolvedProblem, parse_clone, resolve, spec_generators
from .core import DomainError, Family, Operation, apply_op, parse_family, project, render_family
from .estimator import ClosureEstimator
from .enumeration import DelayMeter, backtrack_enumerate, enumerate_closure
from .oracle import SaturationOverflow, equivalence_harness, saturate, saturate_stream

__all__ = [
    "ClosureEstimator",
    "CloneSpec",
    "DelayMeter",
    "DomainError",
    "Family",
    "Operation",
    "ResolvedProblem",
    "SaturationOverflow",
    "apply_op",
    "backtrack_enumerate",
    "enumerate_closure",
    "equivalence_harness",
    "parse_clone",
    "parse_family",
    "project",
    "render_family",
    "resolve",
    "saturate",
    "saturate_stream",
    "spec_generators",
]
