"""Delay measurement: run an enumerator with work counters and compare against its bound."""

from __future__ import annotations

import itertools
import statistics
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

from .clones import resolve
from .core import Family
from .enumeration import DelayMeter, enumerate_closure, words


# algorithm -> (counter name, bound as a function of (n, m))
BOUNDS: dict[str, tuple[str, Callable[[int, int], int]]] = {
    "E2": ("updates", lambda n, m: 2 * m * n + 8 * n),
    "L0": ("word_ops", lambda n, m: 2 * words(n) + 8),
    "L2": ("word_ops", lambda n, m: 2 * words(n) + 8),
    "M2": ("ops", lambda n, m: 8 * n),
    "D2": ("branch_pair_checks", lambda n, m: n * (n + 1) // 2 + 8 * n),
}


@dataclass
class DelayReport:
    clone: str
    n: int
    m: int
    emissions: int
    counter: str | None
    bound: int | None
    max_counter: int
    mean_counter: float
    histogram: dict[int, int] = field(default_factory=dict)
    max_ticks_ns: int = 0
    mean_ticks_ns: float = 0.0
    maxima: dict[str, int] = field(default_factory=dict)

    @property
    def ratio(self) -> float | None:
        if not self.bound:
            return None
        return self.max_counter / self.bound

    @property
    def within_bound(self) -> bool:
        return self.bound is None or self.max_counter <= self.bound

    def as_dict(self) -> dict:
        return {
            "clone": self.clone, "n": self.n, "m": self.m, "emissions": self.emissions,
            "counter": self.counter, "bound": self.bound, "max": self.max_counter,
            "mean": round(self.mean_counter, 3), "ratio": None if self.ratio is None else round(self.ratio, 4),
            "max_ticks_ns": self.max_ticks_ns, "mean_ticks_ns": round(self.mean_ticks_ns, 1),
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())}, "maxima": self.maxima,
        }

    def lines(self) -> list[str]:
        out = [
            f"clone {self.clone}  n={self.n} m={self.m}  emissions={self.emissions}",
            f"wall delay: max {self.max_ticks_ns} ns, mean {self.mean_ticks_ns:.0f} ns",
        ]
        if self.counter:
            verdict = "ok" if self.within_bound else "EXCEEDED"
            out.append(f"{self.counter}: max {self.max_counter}, mean {self.mean_counter:.1f}, "
                       f"bound {self.bound}, ratio {self.ratio:.3f} [{verdict}]")
        for key, value in sorted(self.maxima.items()):
            out.append(f"  max {key} = {value}")
        return out


def _bucket(x: int) -> int:
    # power-of-two buckets keep the histogram short
    return 0 if x <= 0 else 1 << (x.bit_length() - 1)


def measure(clone, family: Family, limit: int | None = None) -> DelayReport:
    problem = resolve(clone, family)
    meter = DelayMeter()
    emitted = sum(1 for _ in itertools.islice(enumerate_closure(problem, meter=meter), limit))
    counter, bound_fn = BOUNDS.get(problem.algorithm, (None, None))
    n, m = problem.family.n, problem.family.m
    values = [s.get(counter, 0) for s in meter.samples] if counter else []
    keys = sorted({k for s in meter.samples for k in s})
    return DelayReport(
        clone=str(problem.spec), n=n, m=m, emissions=emitted, counter=counter,
        bound=bound_fn(n, m) if bound_fn else None,
        max_counter=max(values, default=0),
        mean_counter=statistics.fmean(values) if values else 0.0,
        histogram=dict(Counter(_bucket(v) for v in values)),
        max_ticks_ns=max(meter.ticks, default=0),
        mean_ticks_ns=statistics.fmean(meter.ticks) if meter.ticks else 0.0,
        maxima={k: meter.max(k) for k in keys},
    )
