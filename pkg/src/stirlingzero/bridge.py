"""Bridge between the configuration-sum and log-expansion verifiers.

A configuration-sum instance with distinct integer ground values
``c_1..c_g >= 2`` and weight budget ``w`` maps to the log-expansion
component at

    k = sum(c_i) - w,    h = sum(c_i) - g,

so that ``k - h = g - w >= 2`` lands in the claimed vanishing regime.  With
every u_s zeroed except ``s in {c_i}``, the coefficient of the squarefree
monomial ``u_{c_1} u_{c_2} ... u_{c_g}`` in the ``[j^k n^{-h}]`` component is
the quantity tied to the configuration sum.  No proportionality constant
between the two is assumed: both are checked for vanishing independently,
and per-r-power ratios are merely observed (for deliberately perturbed
calibration runs) when both happen to be nonzero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .algebra import BudgetError, MultiPoly
from .config_sums import ConfigSumInstance, ConfigSumResult, sum_collapsed
from .partitions import GroundSet
from .series_vanishing import ExpansionConfig, J, log_expansion, u_name

__all__ = [
    "BridgeInstance",
    "BridgeReport",
    "bridge_params",
    "expansion_budget_for",
    "bridge_coefficient",
    "bridge_check",
]


@dataclass(frozen=True)
class BridgeInstance:
    c: tuple
    w: int
    k: int
    h: int

    @property
    def g(self) -> int:
        return len(self.c)


def bridge_params(c, w: int) -> BridgeInstance:
    """Validate (c, w) and derive the (k, h) target component."""
    values = tuple(int(x) for x in c)
    g = len(values)
    if g < 2:
        raise ValueError("need at least two ground values")
    if len(set(values)) != g:
        raise ValueError("ground values must be distinct")
    if any(x < 2 for x in values):
        raise ValueError("ground values must be integers >= 2")
    if not 0 <= w <= g - 2:
        raise ValueError(f"need 0 <= w <= g-2, got w={w} for g={g}")
    total = sum(values)
    k = total - w
    h = total - g
    assert k - h == g - w >= 2
    return BridgeInstance(values, w, k, h)


def expansion_budget_for(inst: BridgeInstance) -> ExpansionConfig:
    """Smallest expansion budget covering the instance's (k, h) extraction.

    The deepest interpolated order is h with j-degree at most 2h, so 2h+1
    nodes plus two surplus polynomiality witnesses are configured, starting
    at the smallest admissible sample j = h+1.
    """
    h = inst.h
    return ExpansionConfig(
        h_max=h,
        s_max=max(inst.c),
        j_samples=tuple(range(h + 1, h + 1 + (2 * h + 3))))


def bridge_coefficient(inst: BridgeInstance, cfg: ExpansionConfig) -> MultiPoly:
    """Coefficient of ``prod_i u_{c_i}`` in the [j^k n^{-h}] log component.

    All u_s with s outside the instance's value set are zeroed before
    expansion; the result is a Laurent polynomial in r, expected to vanish.
    """
    if cfg.h_max < inst.h:
        raise BudgetError(
            f"not attempted: order {inst.h} exceeds configured h_max={cfg.h_max}")
    if cfg.s_max < max(inst.c):
        raise BudgetError(
            f"not attempted: u index {max(inst.c)} exceeds configured s_max={cfg.s_max}")
    u_indices = tuple(sorted(inst.c))
    series = log_expansion(cfg, u_indices=u_indices)
    names = [u_name(s) for s in u_indices]
    component = (series.coefficient(inst.h)
                 .with_vars([J] + names)
                 .coefficient_in(J, inst.k))
    monomial = {name: 1 for name in names}  # squarefree: the c_i are distinct
    assert len(monomial) == inst.g
    coefficient = component.coefficient_of_monomial(monomial)
    stray = coefficient.used_vars() - {"r"}
    if stray:
        raise BudgetError(
            f"not attempted: extraction left unexpected variables {sorted(stray)}")
    return coefficient


@dataclass(frozen=True)
class BridgeReport:
    """Paired outcome of both verifiers on one bridge instance."""

    instance: BridgeInstance
    coefficient: MultiPoly
    config_sum: ConfigSumResult
    coefficient_zero: bool
    config_sum_zero: bool
    consistent: bool  # both vanish or both do not
    ratios: Optional[dict]  # r-power -> coefficient/config-sum, observed only


def bridge_check(inst: BridgeInstance, cfg: Optional[ExpansionConfig] = None,
                 jobs: int = 1) -> BridgeReport:
    """Run both verifiers on one instance and compare their verdicts."""
    cfg = cfg or expansion_budget_for(inst)
    coefficient = bridge_coefficient(inst, cfg)
    ground = GroundSet.numeric([Fraction(x) for x in inst.c])
    sum_result = sum_collapsed(ConfigSumInstance.make(inst.g, inst.w, ground),
                               jobs=jobs)
    coeff_zero = coefficient.is_zero()
    sum_zero = sum_result.total == 0
    ratios = None
    if not coeff_zero and not sum_zero:
        ratios = {
            degree: part.constant_value() / sum_result.total
            for degree, part in coefficient.extract_by_degree("r")
        }
    return BridgeReport(
        instance=inst,
        coefficient=coefficient,
        config_sum=sum_result,
        coefficient_zero=coeff_zero,
        config_sum_zero=sum_zero,
        consistent=coeff_zero == sum_zero,
        ratios=ratios,
    )
