"""Signed configuration-sum verifier.

For parameters ``g >= 2`` and ``0 <= w <= g-2`` and a ground set of g
distinct values, every weighted configuration (ordered set partition with
per-block weights summing to w) is assigned the evaluation

    (-1)^r * (1/r) * prod_i P_{w_i}(t_i)

where ``r`` is the block count, ``t_i`` the block sum, and ``P`` the
offset-diagonal Stirling polynomial.  The conjecture under test is that the
sum of evaluations over all distinct weighted configurations is exactly zero.

Two independent summation routes are provided:

* :func:`sum_ordered` -- the literal definition, enumerating every ordered
  configuration and weight composition.  Retained as the oracle.
* :func:`sum_collapsed` -- the production path.  The evaluation does not
  depend on block order, so an unordered partition with r blocks stands for
  r! identical ordered terms and carries the factor ``(-1)^r (r-1)!``; the
  inner sum over weight compositions is the degree-w coefficient of the
  truncated product ``prod_i (sum_v P_v(t_i) y^v)``, an exact regrouping.

Any nonzero total is treated as a potential counterexample and re-verified
through the independent route (plus a fresh ground set in numeric mode)
before being reported.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Optional, Union

from .algebra import ConsistencyError, MultiPoly
from .partitions import (
    GroundSet,
    WeightedConfiguration,
    block_sums,
    count_weighted_configs,
    iter_ordered_partitions,
    iter_unordered_partitions,
    split_handles,
    unordered_partition_count,
    weight_compositions,
)
from .stirling import eval_P, eval_P_symbolic

__all__ = [
    "ConfigSumInstance",
    "ConfigSumResult",
    "NonzeroConfirmation",
    "SweepEntry",
    "evaluate",
    "sum_ordered",
    "sum_collapsed",
    "random_ground",
    "double_check_nonzero",
    "verify_range",
    "instance_rng",
    "BASELINE_RANGE",
]

SumValue = Union[Fraction, MultiPoly]

# (g, max asserted w) pairs this engine verifies by default in a sweep
BASELINE_RANGE = tuple([(g, g - 2) for g in range(2, 7)] + [(7, 3)])


@dataclass(frozen=True)
class ConfigSumInstance:
    g: int
    w: int
    ground: GroundSet
    mode: str

    def __post_init__(self):
        if self.g < 2:
            raise ValueError("need g >= 2")
        if not 0 <= self.w <= self.g - 2:
            raise ValueError(f"need 0 <= w <= g-2, got w={self.w} for g={self.g}")
        if self.ground.g != self.g:
            raise ValueError("ground set size does not match g")
        expected = "symbolic" if self.ground.is_symbolic else "numeric"
        if self.mode != expected:
            raise ValueError(f"mode {self.mode!r} does not match ground set")

    @classmethod
    def make(cls, g: int, w: int, ground: GroundSet) -> "ConfigSumInstance":
        return cls(g, w, ground, "symbolic" if ground.is_symbolic else "numeric")


@dataclass(frozen=True)
class ConfigSumResult:
    instance: ConfigSumInstance
    total: SumValue
    configurations_visited: int
    elapsed: float
    verdict: str

    @classmethod
    def build(cls, instance, total, visited, elapsed) -> "ConfigSumResult":
        verdict = "zero" if total == 0 else "nonzero"
        return cls(instance, total, visited, elapsed, verdict)

    @property
    def is_zero(self) -> bool:
        return self.verdict == "zero"


class _BlockValues:
    """Per-run cache of P_v(block sum) vectors keyed by block mask."""

    def __init__(self, ground: GroundSet, w_max: int):
        self.ground = ground
        self.w_max = w_max
        self._cache = {}
        self._eval = eval_P_symbolic if ground.is_symbolic else eval_P

    def vector(self, mask: int) -> tuple:
        vec = self._cache.get(mask)
        if vec is None:
            vals = self.ground.values
            m = mask
            t = None
            while m:
                low = m & -m
                v = vals[low.bit_length() - 1]
                t = v if t is None else t + v
                m ^= low
            vec = tuple(self._eval(v, t) for v in range(self.w_max + 1))
            self._cache[mask] = vec
        return vec


def evaluate(wc: WeightedConfiguration, ground: GroundSet) -> SumValue:
    """The evaluation attached to one weighted configuration, literally."""
    wc.check()
    r = wc.config.block_count
    sums = block_sums(wc.config, ground)
    factor = Fraction((-1) ** r, r)
    if ground.is_symbolic:
        prod = MultiPoly.constant(1)
        for weight, t in zip(wc.weights, sums):
            prod = prod * eval_P_symbolic(weight, t)
        return prod * factor
    prod = Fraction(1)
    for weight, t in zip(wc.weights, sums):
        prod *= eval_P(weight, t)
    return prod * factor


def _zero(ground: GroundSet) -> SumValue:
    return MultiPoly.zero() if ground.is_symbolic else Fraction(0)


def sum_ordered(inst: ConfigSumInstance) -> ConfigSumResult:
    """Literal sum over every (ordered configuration, weight composition) pair."""
    start = time.perf_counter()
    ground = inst.ground
    values = _BlockValues(ground, inst.w)
    total = _zero(ground)
    visited = 0
    for cfg in iter_ordered_partitions(inst.g):
        r = cfg.block_count
        factor = Fraction((-1) ** r, r)
        vectors = [values.vector(mask) for mask in cfg.blocks]
        for weights in weight_compositions(inst.w, r):
            prod = vectors[0][weights[0]]
            for i in range(1, r):
                prod = prod * vectors[i][weights[i]]
            total = total + prod * factor
            visited += 1
    expected = count_weighted_configs(inst.g, inst.w)
    if visited != expected:
        raise ConsistencyError(
            f"visited {visited} weighted configurations, expected {expected}")
    return ConfigSumResult.build(inst, total, visited, time.perf_counter() - start)


def _conv_truncated(acc: list, vec: tuple, w: int) -> list:
    out = [None] * (w + 1)
    for i, a in enumerate(acc):
        if a == 0:
            continue
        for j in range(w + 1 - i):
            b = vec[j]
            term = a * b
            out[i + j] = term if out[i + j] is None else out[i + j] + term
    return [Fraction(0) if v is None else v for v in out]


def _collapsed_partial(inst: ConfigSumInstance, handles: Optional[Iterable[int]]):
    """Sum of collapsed contributions over one slice of the partition stream."""
    ground = inst.ground
    values = _BlockValues(ground, inst.w)
    total = _zero(ground)
    visited = 0
    if handles is None:
        streams = [iter_unordered_partitions(inst.g)]
    else:
        streams = [iter_unordered_partitions(inst.g, first_block=h) for h in handles]
    one = MultiPoly.constant(1) if ground.is_symbolic else Fraction(1)
    for stream in streams:
        for cfg, r in stream:
            acc = [one] + [_zero(ground)] * inst.w
            for mask in cfg.blocks:
                acc = _conv_truncated(acc, values.vector(mask), inst.w)
            weight = Fraction((-1) ** r * factorial(r - 1))
            total = total + acc[inst.w] * weight
            visited += 1
    return total, visited


def sum_collapsed(inst: ConfigSumInstance, jobs: int = 1) -> ConfigSumResult:
    """Order-collapsed sum; exactly equals :func:`sum_ordered` by construction.

    With ``jobs > 1`` the unordered-partition stream is split by the block
    containing element 0 and slices run in worker processes; exact addition
    makes the merged total independent of scheduling.
    """
    start = time.perf_counter()
    if jobs <= 1:
        total, visited = _collapsed_partial(inst, None)
        return ConfigSumResult.build(inst, total, visited, time.perf_counter() - start)
    handles = split_handles(inst.g)
    chunks = [handles[i::jobs] for i in range(jobs)]
    chunks = [c for c in chunks if c]
    total = _zero(inst.ground)
    visited = 0
    with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
        futures = [pool.submit(_collapsed_partial, inst, chunk) for chunk in chunks]
        for fut in futures:  # merge in submission order: deterministic
            part, count = fut.result()
            total = total + part
            visited += count
    expected = unordered_partition_count(inst.g)
    if visited != expected:
        raise ConsistencyError(
            f"parallel slices visited {visited} partitions, expected {expected}")
    return ConfigSumResult.build(inst, total, visited, time.perf_counter() - start)


def random_ground(g: int, rng: random.Random) -> GroundSet:
    """g distinct seeded rationals: integers and proper fractions, signs mixed."""
    values = []
    seen = set()
    while len(values) < g:
        if rng.random() < 0.5:
            q = Fraction(rng.randint(-12, 12))
        else:
            q = Fraction(rng.randint(-12, 12), rng.randint(2, 9))
        if q not in seen:
            seen.add(q)
            values.append(q)
    return GroundSet.numeric(values)


@dataclass(frozen=True)
class NonzeroConfirmation:
    """Outcome of the double-verification protocol for a nonzero total."""

    ordered_total: SumValue
    ordered_agrees: bool
    second_ground: Optional[GroundSet]
    second_total: Optional[SumValue]

    @property
    def second_also_nonzero(self) -> Optional[bool]:
        if self.second_total is None:
            return None
        return self.second_total != 0


def double_check_nonzero(inst: ConfigSumInstance, total: SumValue,
                         rng: Optional[random.Random] = None) -> NonzeroConfirmation:
    """Re-verify a nonzero total before it is reported as a counterexample.

    The independent ordered route must reproduce the value exactly (a
    disagreement is an engine bug, raised as :class:`ConsistencyError`); in
    numeric mode the sum is additionally recomputed at a fresh ground set.
    """
    ordered = sum_ordered(inst)
    if ordered.total != total:
        raise ConsistencyError(
            "collapsed and ordered routes disagree on a nonzero total: "
            f"{total!r} vs {ordered.total!r}")
    second_ground = None
    second_total = None
    if not inst.ground.is_symbolic:
        rng = rng or random.Random(0)
        second_ground = random_ground(inst.g, rng)
        second = sum_collapsed(ConfigSumInstance.make(inst.g, inst.w, second_ground))
        second_total = second.total
    return NonzeroConfirmation(ordered.total, True, second_ground, second_total)


@dataclass(frozen=True)
class SweepEntry:
    """One planned instance of a verification sweep, with its outcome."""

    g: int
    w: int
    mode: str
    status: str  # asserted | exploratory | not_attempted
    sample_index: int
    seed: Optional[str]
    result: Optional[ConfigSumResult]
    confirmation: Optional[NonzeroConfirmation]


def instance_rng(seed: int, g: int, w: int, index: int) -> random.Random:
    return random.Random(f"{seed}/{g}/{w}/{index}")


def verify_range(g_max: int, *, symbolic_g_max: int = 5,
                 numeric_samples: Optional[dict] = None,
                 exploratory_samples: int = 1,
                 seed: int = 0, jobs: int = 1,
                 budget_seconds: Optional[float] = None,
                 include_exploratory: bool = True) -> list:
    """Run the default verification sweep up to ``g_max``.

    Ground-set policy: symbolic (proves the identity for every ground set)
    through ``symbolic_g_max``; seeded numeric sampling above that.  Within
    the baseline range the instances are asserted; beyond it (g = 7 with
    w > 3, or g >= 8) they are recorded as exploratory.  When the time budget
    runs out remaining instances are emitted as explicit ``not_attempted``
    entries, never silently dropped.
    """
    if g_max < 2:
        raise ValueError("need g_max >= 2")
    numeric_samples = dict(numeric_samples or {6: 10, 7: 5})
    asserted_w = dict(BASELINE_RANGE)
    deadline = None if budget_seconds is None else time.monotonic() + budget_seconds

    plan = []
    for g in range(2, g_max + 1):
        for w in range(0, g - 1):
            asserted = g in asserted_w and w <= asserted_w[g]
            if g <= symbolic_g_max:
                if asserted:
                    plan.append((g, w, "symbolic", "asserted", 0))
                else:
                    plan.append((g, w, "symbolic", "exploratory", 0))
            else:
                status = "asserted" if asserted else "exploratory"
                if status == "exploratory" and not include_exploratory:
                    continue
                count = numeric_samples.get(g, 3) if asserted else exploratory_samples
                for i in range(count):
                    plan.append((g, w, "numeric", status, i))

    entries = []
    for g, w, mode, status, index in plan:
        if deadline is not None and time.monotonic() > deadline:
            entries.append(SweepEntry(g, w, mode, "not_attempted", index,
                                      str(seed), None, None))
            continue
        if mode == "symbolic":
            ground = GroundSet.symbolic(g)
            entry_seed = None
        else:
            ground = random_ground(g, instance_rng(seed, g, w, index))
            entry_seed = f"{seed}/{g}/{w}/{index}"
        inst = ConfigSumInstance.make(g, w, ground)
        result = sum_collapsed(inst, jobs=jobs)
        confirmation = None
        if result.verdict == "nonzero":
            confirmation = double_check_nonzero(
                inst, result.total, instance_rng(seed + 1, g, w, index))
        entries.append(SweepEntry(g, w, mode, status, index, entry_seed,
                                  result, confirmation))
    return entries
