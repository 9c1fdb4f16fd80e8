"""Fuzzy optimization by alpha-cut decomposition.

Each membership level turns the fuzzy problem into a box of crisp
problems; the optimal benefit over that box is bracketed by two corner
LPs (the value is monotone in every parameter: relaxing capacities or
raising profits never hurts). Solving both corners per level yields an
interval staircase that is reassembled into fuzzy benefit and shipment
estimates.

Shipment intervals are envelopes of the two corner optima, not exact
ranges: with alternate optima the corner argmax can jump around, so the
per-lane quantities are reported as indicative spans while the benefit
interval itself is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .fuzzy import AlphaGrid, TrapezoidalFuzzyNumber, prob_geq_fuzzy
from .intervals import Interval
from .model import CrispInstance, DistributionProblem, to_lp
from .simplex import solve

__all__ = [
    "AlphaLevelResult",
    "FuzzySolution",
    "RankingReport",
    "corner_instances",
    "repair_bounds",
    "solve_fuzzy",
    "enforce_nesting",
    "fit_trapezoid",
    "rank_fuzzy",
]


@dataclass(frozen=True)
class AlphaLevelResult:
    alpha: float
    feasible: bool
    repaired: bool
    benefit: Interval | None
    shipments: tuple | None  # M x N of Interval, None when infeasible


@dataclass(frozen=True)
class FuzzySolution:
    grid: AlphaGrid
    shape: tuple
    levels: tuple  # AlphaLevelResult per grid level, ascending alpha
    nesting_adjusted: bool = False

    def level_at(self, alpha: float) -> AlphaLevelResult:
        for lv in self.levels:
            if abs(lv.alpha - alpha) <= 1e-12:
                return lv
        raise KeyError(f"no result at alpha={alpha}")


def corner_instances(p: DistributionProblem, alpha: float):
    """(optimistic, pessimistic) crisp instances at one membership level.

    Optimistic: capacities at cut maxima, contract minimums at cut
    minima, prices arranged for maximal per-lane profit. Pessimistic is
    the mirror image. Contract base prices are metadata and stay at
    their cut midpoints.
    """

    def cut(t: TrapezoidalFuzzyNumber) -> Interval:
        return t.alpha_cut(alpha)

    def hi(seq):
        return tuple(cut(t).hi for t in seq)

    def lo(seq):
        return tuple(cut(t).lo for t in seq)

    def mid(seq):
        return None if seq is None else tuple(cut(t).midpoint for t in seq)

    optimistic = CrispInstance(
        supply_max=hi(p.supply_max),
        demand_max=hi(p.demand_max),
        purchase_min=lo(p.purchase_min),
        sale_min=lo(p.sale_min),
        purchase_price=lo(p.purchase_price),
        sale_price=hi(p.sale_price),
        transport_cost=tuple(lo(row) for row in p.transport_cost),
        contract_purchase_price=mid(p.contract_purchase_price),
        contract_sale_price=mid(p.contract_sale_price),
    )
    pessimistic = CrispInstance(
        supply_max=lo(p.supply_max),
        demand_max=lo(p.demand_max),
        purchase_min=hi(p.purchase_min),
        sale_min=hi(p.sale_min),
        purchase_price=hi(p.purchase_price),
        sale_price=lo(p.sale_price),
        transport_cost=tuple(hi(row) for row in p.transport_cost),
        contract_purchase_price=mid(p.contract_purchase_price),
        contract_sale_price=mid(p.contract_sale_price),
    )
    return optimistic, pessimistic


def repair_bounds(inst: CrispInstance):
    """Clip contract minimums to the capacities of the same scenario.

    A scenario whose minimum purchase exceeds the supplier's capacity
    (or minimum sale exceeds demand) cannot be met as written; the
    contract lines are lowered to the capacity and the change flagged.
    Returns (instance, repaired).
    """
    purchase = tuple(min(pm, am) for pm, am in zip(inst.purchase_min, inst.supply_max))
    sale = tuple(min(qm, bm) for qm, bm in zip(inst.sale_min, inst.demand_max))
    repaired = purchase != inst.purchase_min or sale != inst.sale_min
    if not repaired:
        return inst, False
    return replace(inst, purchase_min=purchase, sale_min=sale), True


def solve_fuzzy(p: DistributionProblem, grid: AlphaGrid | None = None) -> FuzzySolution:
    """Corner-solve every level, then enforce interval nesting."""
    if grid is None:
        grid = AlphaGrid.uniform(11)
    m, n = p.shape
    levels = []
    for alpha in grid:
        optimistic, pessimistic = corner_instances(p, alpha)
        optimistic, rep_opt = repair_bounds(optimistic)
        pessimistic, rep_pes = repair_bounds(pessimistic)
        repaired = rep_opt or rep_pes
        sol_opt = solve(to_lp(optimistic))
        sol_pes = solve(to_lp(pessimistic))
        if sol_opt.status != "optimal" or sol_pes.status != "optimal":
            levels.append(AlphaLevelResult(alpha, False, repaired, None, None))
            continue
        lo_v, hi_v = sorted((sol_pes.objective_value, sol_opt.objective_value))
        benefit = Interval(lo_v, hi_v)
        shipments = tuple(
            tuple(
                Interval(
                    min(sol_pes.x[i * n + j], sol_opt.x[i * n + j]),
                    max(sol_pes.x[i * n + j], sol_opt.x[i * n + j]),
                )
                for j in range(n)
            )
            for i in range(m)
        )
        levels.append(AlphaLevelResult(alpha, True, repaired, benefit, shipments))
    raw = FuzzySolution(grid, (m, n), tuple(levels))
    return enforce_nesting(raw)


def enforce_nesting(sol: FuzzySolution) -> FuzzySolution:
    """Widen lower levels to contain higher ones, sweeping alpha downward.

    Bound repair and LP tie-breaking can leave small inversions in the
    raw staircase; fuzzy-number semantics require cuts to nest, so each
    interval absorbs the hull of the level above. nesting_adjusted
    records whether anything actually moved.
    """
    m, n = sol.shape
    ordered = sorted(sol.levels, key=lambda lv: -lv.alpha)
    hull_benefit = None
    hull_ship = None
    adjusted = sol.nesting_adjusted
    widened = {}
    for lv in ordered:
        if not lv.feasible:
            continue
        if hull_benefit is None:
            hull_benefit = lv.benefit
            hull_ship = [list(row) for row in lv.shipments]
            widened[lv.alpha] = lv
            continue
        new_benefit = hull_benefit.hull(lv.benefit)
        new_ship = [
            [hull_ship[i][j].hull(lv.shipments[i][j]) for j in range(n)] for i in range(m)
        ]
        if new_benefit != lv.benefit or any(
            new_ship[i][j] != lv.shipments[i][j] for i in range(m) for j in range(n)
        ):
            adjusted = True
        hull_benefit = new_benefit
        hull_ship = new_ship
        widened[lv.alpha] = AlphaLevelResult(
            lv.alpha,
            True,
            lv.repaired,
            new_benefit,
            tuple(tuple(row) for row in new_ship),
        )
    levels = tuple(widened.get(lv.alpha, lv) for lv in sol.levels)
    return FuzzySolution(sol.grid, sol.shape, levels, adjusted)


def fit_trapezoid(sol: FuzzySolution, quantity="benefit") -> TrapezoidalFuzzyNumber:
    """Trapezoid for the total benefit or one lane's shipment.

    quantity is "benefit" or an (i, j) lane index. Uses the alpha=0 cut
    as support and the alpha=1 cut as core; both levels must be present
    and feasible.
    """
    try:
        lo_level = sol.level_at(0.0)
        hi_level = sol.level_at(1.0)
    except KeyError:
        raise ValueError("grid must include levels 0 and 1 to fit a trapezoid") from None
    if not (lo_level.feasible and hi_level.feasible):
        raise ValueError("levels 0 and 1 must both be feasible to fit a trapezoid")
    if quantity == "benefit":
        support, core = lo_level.benefit, hi_level.benefit
    else:
        i, j = quantity
        support, core = lo_level.shipments[i][j], hi_level.shipments[i][j]
    return TrapezoidalFuzzyNumber(support.lo, core.lo, core.hi, support.hi)


@dataclass(frozen=True)
class RankingReport:
    probability: float  # P(first >= second)
    preference: str  # "first" | "second" | "tie"


def rank_fuzzy(
    a: TrapezoidalFuzzyNumber,
    b: TrapezoidalFuzzyNumber,
    grid: AlphaGrid | None = None,
) -> RankingReport:
    """Probabilistic order of two fuzzy outcomes; 0.5 is a tie."""
    prob = prob_geq_fuzzy(a, b, grid)
    if abs(prob - 0.5) <= 1e-12:
        preference = "tie"
    elif prob > 0.5:
        preference = "first"
    else:
        preference = "second"
    return RankingReport(prob, preference)
