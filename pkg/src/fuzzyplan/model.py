"""Distributor-benefit planning model.

A distributor buys from M suppliers (capacity-bounded, with contracted
minimum purchases) and sells to N customers (demand-bounded, with
contracted minimum sales). Unit profit on a lane is the sale price minus
the purchase price minus the transport cost; the model maximizes total
profit. Parameters are trapezoidal fuzzy numbers; a crisp snapshot of
them instantiates an ordinary LP.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .fuzzy import TrapezoidalFuzzyNumber
from .simplex import LinearProgram

__all__ = [
    "DistributionProblem",
    "CrispInstance",
    "FeasibilityReport",
    "profit_coefficients",
    "crisp_profits",
    "to_lp",
    "feasibility_precheck",
    "midpoint_instance",
]


def _check_dims(name_lengths, m, n):
    for name, got, want in name_lengths:
        if got != want:
            raise ValueError(f"{name} has length {got}, expected {want}")


@dataclass(frozen=True)
class DistributionProblem:
    """Fuzzy model parameters; every entry is a TrapezoidalFuzzyNumber.

    contract_purchase_price and contract_sale_price are bookkeeping from
    the source data sheets: the objective never uses them, they are kept
    only so problem files round-trip losslessly.
    """

    supply_max: tuple        # per supplier, units
    demand_max: tuple        # per customer, units
    purchase_min: tuple      # contracted minimum purchase per supplier
    sale_min: tuple          # contracted minimum sale per customer
    purchase_price: tuple    # reduced purchase price per supplier
    sale_price: tuple        # reduced sale price per customer
    transport_cost: tuple    # per (supplier, customer) lane
    contract_purchase_price: tuple | None = None
    contract_sale_price: tuple | None = None

    def __post_init__(self):
        m, n = len(self.supply_max), len(self.demand_max)
        if m < 1 or n < 1:
            raise ValueError("need at least one supplier and one customer")
        _check_dims(
            [
                ("purchase_min", len(self.purchase_min), m),
                ("sale_min", len(self.sale_min), n),
                ("purchase_price", len(self.purchase_price), m),
                ("sale_price", len(self.sale_price), n),
                ("transport_cost", len(self.transport_cost), m),
            ],
            m,
            n,
        )
        for i, row in enumerate(self.transport_cost):
            if len(row) != n:
                raise ValueError(f"transport_cost[{i}] has length {len(row)}, expected {n}")
        if self.contract_purchase_price is not None and len(self.contract_purchase_price) != m:
            raise ValueError("contract_purchase_price length mismatch")
        if self.contract_sale_price is not None and len(self.contract_sale_price) != n:
            raise ValueError("contract_sale_price length mismatch")

    @property
    def shape(self) -> tuple:
        return len(self.supply_max), len(self.demand_max)

    def is_crisp(self, tol: float = 0.0) -> bool:
        return all(t.is_crisp(tol) for t in self._all_params())

    def _all_params(self):
        yield from self.supply_max
        yield from self.demand_max
        yield from self.purchase_min
        yield from self.sale_min
        yield from self.purchase_price
        yield from self.sale_price
        for row in self.transport_cost:
            yield from row
        for extra in (self.contract_purchase_price, self.contract_sale_price):
            if extra is not None:
                yield from extra


@dataclass(frozen=True)
class CrispInstance:
    """Real-valued snapshot of the model parameters."""

    supply_max: tuple
    demand_max: tuple
    purchase_min: tuple
    sale_min: tuple
    purchase_price: tuple
    sale_price: tuple
    transport_cost: tuple
    contract_purchase_price: tuple | None = None
    contract_sale_price: tuple | None = None

    def __post_init__(self):
        m, n = len(self.supply_max), len(self.demand_max)
        if m < 1 or n < 1:
            raise ValueError("need at least one supplier and one customer")
        _check_dims(
            [
                ("purchase_min", len(self.purchase_min), m),
                ("sale_min", len(self.sale_min), n),
                ("purchase_price", len(self.purchase_price), m),
                ("sale_price", len(self.sale_price), n),
                ("transport_cost", len(self.transport_cost), m),
            ],
            m,
            n,
        )
        for i, row in enumerate(self.transport_cost):
            if len(row) != n:
                raise ValueError(f"transport_cost[{i}] has length {len(row)}, expected {n}")
        if self.contract_purchase_price is not None and len(self.contract_purchase_price) != m:
            raise ValueError("contract_purchase_price length mismatch")
        if self.contract_sale_price is not None and len(self.contract_sale_price) != n:
            raise ValueError("contract_sale_price length mismatch")
        for v in self._all_values():
            if not math.isfinite(v):
                raise ValueError("crisp parameters must be finite")

    def _all_values(self):
        yield from self.supply_max
        yield from self.demand_max
        yield from self.purchase_min
        yield from self.sale_min
        yield from self.purchase_price
        yield from self.sale_price
        for row in self.transport_cost:
            yield from row
        for extra in (self.contract_purchase_price, self.contract_sale_price):
            if extra is not None:
                yield from extra

    @property
    def shape(self) -> tuple:
        return len(self.supply_max), len(self.demand_max)


def profit_coefficients(p: DistributionProblem) -> tuple:
    """Fuzzy per-lane profit: sale price minus purchase price minus haul cost."""
    m, n = p.shape
    return tuple(
        tuple(
            (p.sale_price[j] - p.purchase_price[i]) - p.transport_cost[i][j]
            for j in range(n)
        )
        for i in range(m)
    )


def crisp_profits(inst: CrispInstance) -> tuple:
    m, n = inst.shape
    return tuple(
        tuple(
            inst.sale_price[j] - inst.purchase_price[i] - inst.transport_cost[i][j]
            for j in range(n)
        )
        for i in range(m)
    )


def to_lp(inst: CrispInstance) -> LinearProgram:
    """Profit-maximizing LP: MN shipment variables, 2(M+N) constraints.

    Row sums are capped by supply and floored by the purchase contracts;
    column sums are capped by demand and floored by the sale contracts.
    """
    m, n = inst.shape
    z = crisp_profits(inst)
    objective = tuple(z[i][j] for i in range(m) for j in range(n))

    def row_vec(i):
        e = [0.0] * (m * n)
        for j in range(n):
            e[i * n + j] = 1.0
        return tuple(e)

    def col_vec(j):
        e = [0.0] * (m * n)
        for i in range(m):
            e[i * n + j] = 1.0
        return tuple(e)

    constraints = []
    for i in range(m):
        constraints.append((row_vec(i), "<=", float(inst.supply_max[i])))
    for j in range(n):
        constraints.append((col_vec(j), "<=", float(inst.demand_max[j])))
    for i in range(m):
        constraints.append((row_vec(i), ">=", float(inst.purchase_min[i])))
    for j in range(n):
        constraints.append((col_vec(j), ">=", float(inst.sale_min[j])))
    return LinearProgram(objective, "max", tuple(constraints))


@dataclass(frozen=True)
class FeasibilityReport:
    ok: bool
    violations: tuple

    def __bool__(self):
        return self.ok


def feasibility_precheck(inst: CrispInstance) -> FeasibilityReport:
    """Necessary-condition screen; passing does not guarantee feasibility.

    The full check is the phase-1 LP, which the solver runs anyway; this
    exists to give named diagnostics before any solve.
    """
    tol = 1e-9
    m, n = inst.shape
    violations = []
    for i in range(m):
        if inst.purchase_min[i] > inst.supply_max[i] + tol:
            violations.append(
                f"purchase_min[{i}]={inst.purchase_min[i]:g} exceeds "
                f"supply_max[{i}]={inst.supply_max[i]:g}"
            )
    for j in range(n):
        if inst.sale_min[j] > inst.demand_max[j] + tol:
            violations.append(
                f"sale_min[{j}]={inst.sale_min[j]:g} exceeds "
                f"demand_max[{j}]={inst.demand_max[j]:g}"
            )
    total_supply = sum(inst.supply_max)
    total_demand = sum(inst.demand_max)
    total_purchase = sum(inst.purchase_min)
    total_sale = sum(inst.sale_min)
    if total_sale > total_supply + tol:
        violations.append(
            f"total sale_min {total_sale:g} exceeds total supply_max {total_supply:g}"
        )
    if total_purchase > total_demand + tol:
        violations.append(
            f"total purchase_min {total_purchase:g} exceeds total demand_max {total_demand:g}"
        )
    return FeasibilityReport(not violations, tuple(violations))


def midpoint_instance(p: DistributionProblem) -> CrispInstance:
    """Crisp snapshot at the core midpoints (the means, for symmetric input)."""

    def mid(t: TrapezoidalFuzzyNumber) -> float:
        return 0.5 * (t.b + t.c)

    def mids(seq):
        return None if seq is None else tuple(mid(t) for t in seq)

    return CrispInstance(
        supply_max=mids(p.supply_max),
        demand_max=mids(p.demand_max),
        purchase_min=mids(p.purchase_min),
        sale_min=mids(p.sale_min),
        purchase_price=mids(p.purchase_price),
        sale_price=mids(p.sale_price),
        transport_cost=tuple(mids(row) for row in p.transport_cost),
        contract_purchase_price=mids(p.contract_purchase_price),
        contract_sale_price=mids(p.contract_sale_price),
    )
