"""Classical balanced transportation problem.

Provides the balance test, two initial-plan heuristics (north-west
corner and Vogel's approximation), the alternating-loop predicate, and
the potentials (MODI) optimizer. All plans carry an explicit basis so
degeneracy is visible instead of implicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "TransportInstance",
    "TransportPlan",
    "check_balance",
    "north_west_corner",
    "vogel_approximation",
    "detect_loop",
    "modi_optimize",
    "plan_cost",
]


@dataclass(frozen=True)
class TransportInstance:
    supplies: tuple
    demands: tuple
    costs: tuple  # row-major, len(supplies) rows of len(demands)

    def __post_init__(self):
        m, n = len(self.supplies), len(self.demands)
        if m < 1 or n < 1:
            raise ValueError("need at least one supply and one demand")
        if any(not math.isfinite(v) or v < 0 for v in self.supplies + self.demands):
            raise ValueError("supplies and demands must be finite and nonnegative")
        if len(self.costs) != m or any(len(row) != n for row in self.costs):
            raise ValueError(f"cost matrix must be {m}x{n}")
        for row in self.costs:
            if any(not math.isfinite(c) for c in row):
                raise ValueError("costs must be finite")

    @property
    def shape(self) -> tuple:
        return len(self.supplies), len(self.demands)


@dataclass(frozen=True)
class TransportPlan:
    shipments: tuple  # row-major matrix
    basis: frozenset  # of (i, j); superset of the positive cells

    def cell(self, i: int, j: int) -> float:
        return self.shipments[i][j]


def plan_cost(t: TransportInstance, plan: TransportPlan) -> float:
    return sum(
        t.costs[i][j] * plan.shipments[i][j]
        for i in range(len(t.supplies))
        for j in range(len(t.demands))
    )


def check_balance(t: TransportInstance) -> bool:
    sa, sb = sum(t.supplies), sum(t.demands)
    return abs(sa - sb) <= 1e-9 * max(1.0, abs(sa), abs(sb))


def _require_balanced(t: TransportInstance):
    if not check_balance(t):
        raise ValueError(
            f"unbalanced instance: total supply {sum(t.supplies)} != total demand {sum(t.demands)}"
        )


def north_west_corner(t: TransportInstance) -> TransportPlan:
    """Greedy top-left allocation walking a staircase path.

    Each step exhausts a column (move right) or a row (move down); a tie
    exhausts the column first, leaving a zero-shipment basic cell on the
    path. The path visits exactly M+N-1 cells.
    """
    _require_balanced(t)
    m, n = t.shape
    supply = list(t.supplies)
    demand = list(t.demands)
    x = [[0.0] * n for _ in range(m)]
    basis = []
    i = j = 0
    while True:
        q = min(supply[i], demand[j])
        x[i][j] = q
        basis.append((i, j))
        supply[i] -= q
        demand[j] -= q
        if i == m - 1 and j == n - 1:
            break
        if demand[j] <= 0 and j < n - 1:
            j += 1
        else:
            i += 1
    return TransportPlan(tuple(tuple(row) for row in x), frozenset(basis))


def _penalty(costs_line: list) -> float:
    if len(costs_line) == 1:
        return costs_line[0]
    lo1, lo2 = sorted(costs_line)[:2]
    return lo2 - lo1


def vogel_approximation(t: TransportInstance) -> TransportPlan:
    """Iterated max-penalty allocation.

    Per iteration the open row or column with the largest penalty (gap
    between its two cheapest open cells) receives an allocation at its
    cheapest cell. Ties prefer rows over columns, then the lowest index;
    cheapest-cell ties take the lexicographically first cell. Exactly one
    line closes per allocation (a simultaneous exhaustion closes the
    column and leaves the zero-supply row open).
    """
    _require_balanced(t)
    m, n = t.shape
    supply = list(t.supplies)
    demand = list(t.demands)
    open_rows = set(range(m))
    open_cols = set(range(n))
    x = [[0.0] * n for _ in range(m)]
    basis = []

    def allocate(i, j):
        q = min(supply[i], demand[j])
        x[i][j] += q
        basis.append((i, j))
        supply[i] -= q
        demand[j] -= q

    while open_rows and open_cols:
        if len(open_rows) == 1:
            i = next(iter(open_rows))
            for j in sorted(open_cols):
                allocate(i, j)
            break
        if len(open_cols) == 1:
            j = next(iter(open_cols))
            for i in sorted(open_rows):
                allocate(i, j)
            break
        candidates = []  # (-penalty, kind, index) so min() picks max penalty
        for i in sorted(open_rows):
            candidates.append((-_penalty([t.costs[i][j] for j in sorted(open_cols)]), 0, i))
        for j in sorted(open_cols):
            candidates.append((-_penalty([t.costs[i][j] for i in sorted(open_rows)]), 1, j))
        _, kind, idx = min(candidates)
        if kind == 0:
            i = idx
            j = min(sorted(open_cols), key=lambda jj: (t.costs[i][jj], jj))
        else:
            j = idx
            i = min(sorted(open_rows), key=lambda ii: (t.costs[ii][j], ii))
        allocate(i, j)
        if demand[j] <= 0:
            open_cols.discard(j)
        else:
            open_rows.discard(i)

    basis = _prune_loops(basis, x)
    return TransportPlan(tuple(tuple(row) for row in x), frozenset(basis))


def _prune_loops(basis: list, x: list) -> list:
    """Drop zero-shipment cells until the basis graph is a forest."""
    cells = list(dict.fromkeys(basis))
    while True:
        loop = _find_cycle(cells)
        if loop is None:
            return cells
        dead = [c for c in loop if x[c[0]][c[1]] == 0.0]
        if not dead:  # positive-shipment loop cannot come from a valid build
            raise AssertionError("allocation heuristics produced a positive loop")
        cells.remove(dead[0])


def _find_cycle(cells):
    """Any cycle in the bipartite row/column graph of the cells, else None.

    DFS keeps the current tree path explicit so a back edge always hits
    an ancestor, which makes the cell ring trivial to cut out.
    """
    cell_set = set(cells)
    adj = {}
    for (i, j) in cell_set:
        adj.setdefault(("r", i), []).append(("c", j))
        adj.setdefault(("c", j), []).append(("r", i))
    visited = set()
    for start in sorted(adj):
        if start in visited:
            continue
        visited.add(start)
        path = [start]
        on_path = {start: 0}
        stack = [(start, None, iter(adj[start]))]
        while stack:
            node, par, neighbours = stack[-1]
            pushed = False
            for nxt in neighbours:
                if nxt == par:
                    continue  # each neighbour pair shares exactly one cell, no multiedges
                if nxt in on_path:
                    ring = path[on_path[nxt]:]
                    out = []
                    for a, b in zip(ring, ring[1:] + ring[:1]):
                        ri = a[1] if a[0] == "r" else b[1]
                        cj = a[1] if a[0] == "c" else b[1]
                        out.append((ri, cj))
                    return out
                if nxt not in visited:
                    visited.add(nxt)
                    on_path[nxt] = len(path)
                    path.append(nxt)
                    stack.append((nxt, node, iter(adj[nxt])))
                    pushed = True
                    break
            if not pushed:
                stack.pop()
                path.pop()
                del on_path[node]
    return None


def detect_loop(cells) -> bool:
    """True iff the ordered cells trace a closed alternating loop.

    Needs at least four cells; consecutive cells (wrapping around) must
    share exactly a row or a column, and the shared dimension must
    alternate, which also rules out three collinear consecutive cells.
    """
    cells = list(cells)
    n = len(cells)
    if n < 4:
        return False
    if len(set(cells)) != n:
        return False
    dims = []
    for k in range(n):
        r1, c1 = cells[k]
        r2, c2 = cells[(k + 1) % n]
        if r1 == r2 and c1 != c2:
            dims.append(0)
        elif c1 == c2 and r1 != r2:
            dims.append(1)
        else:
            return False
    return all(dims[k] != dims[(k + 1) % n] for k in range(n))


def modi_optimize(t: TransportInstance, start: TransportPlan, sense: str = "min") -> TransportPlan:
    """Potentials-method optimization from a basic feasible start.

    Maximization negates the costs internally. Degenerate bases are
    completed with zero-shipment cells, lexicographically smallest
    loop-free cell first. Raises ValueError when the start basis carries
    a loop or misses a positive shipment.
    """
    if sense not in ("min", "max"):
        raise ValueError(f"sense must be 'min' or 'max', got {sense!r}")
    m, n = t.shape
    costs = [
        [(-t.costs[i][j] if sense == "max" else t.costs[i][j]) for j in range(n)]
        for i in range(m)
    ]
    x = [list(row) for row in start.shipments]
    basis = set(start.basis)
    for i in range(m):
        for j in range(n):
            if x[i][j] > 0 and (i, j) not in basis:
                raise ValueError(f"positive shipment at ({i},{j}) missing from basis")
    if _find_cycle(list(basis)) is not None:
        raise ValueError("start basis contains a loop")
    _complete_basis(basis, m, n)

    tol = 1e-9 * (1.0 + max(abs(c) for row in costs for c in row))
    stall = 0
    lex_rule = False
    for _ in range(10_000):
        u, v = _potentials(costs, basis, m, n)
        entering = None
        best = -tol
        for i in range(m):
            for j in range(n):
                if (i, j) in basis:
                    continue
                red = costs[i][j] - u[i] - v[j]
                if lex_rule:
                    if red < -tol:
                        entering = (i, j)
                        break
                elif red < best:
                    best = red
                    entering = (i, j)
            if lex_rule and entering:
                break
        if entering is None:
            return TransportPlan(tuple(tuple(row) for row in x), frozenset(basis))
        loop = _basis_loop(basis, entering, m, n)
        minus = loop[1::2]
        theta = min(x[i][j] for i, j in minus)
        leaving = min((c for c in minus if x[c[0]][c[1]] == theta))
        for k, (i, j) in enumerate(loop):
            x[i][j] += theta if k % 2 == 0 else -theta
        x[leaving[0]][leaving[1]] = 0.0
        basis.remove(leaving)
        basis.add(entering)
        if theta <= tol:
            stall += 1
            if stall >= 2 * (m + n):
                lex_rule = True
        else:
            stall = 0
    raise RuntimeError("potentials method failed to terminate")


def _complete_basis(basis: set, m: int, n: int):
    """Grow the basis to a spanning tree using lex-smallest loop-free cells."""
    parent = {}

    def find(a):
        while parent.get(a, a) != a:
            parent[a] = parent.get(parent[a], parent[a])
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
        return True

    for (i, j) in basis:
        union(("r", i), ("c", j))
    need = m + n - 1 - len(basis)
    if need < 0:
        raise ValueError(f"basis has {len(basis)} cells, more than {m + n - 1}")
    if need == 0:
        return
    for i in range(m):
        for j in range(n):
            if need == 0:
                return
            if (i, j) in basis:
                continue
            if union(("r", i), ("c", j)):
                basis.add((i, j))
                need -= 1


def _potentials(costs, basis, m, n):
    """Solve u_i + v_j = c_ij over the spanning-tree basis, u_0 = 0."""
    u = [None] * m
    v = [None] * n
    u[0] = 0.0
    remaining = set(basis)
    while remaining:
        progressed = False
        for (i, j) in list(remaining):
            if u[i] is not None and v[j] is None:
                v[j] = costs[i][j] - u[i]
            elif v[j] is not None and u[i] is None:
                u[i] = costs[i][j] - v[j]
            elif u[i] is None:
                continue
            remaining.discard((i, j))
            progressed = True
        if not progressed:
            raise ValueError("basis does not span all rows and columns")
    if any(w is None for w in u) or any(w is None for w in v):
        raise ValueError("basis does not span all rows and columns")
    return u, v


def _basis_loop(basis, entering, m, n):
    """Unique alternating cycle created by adding `entering` to the tree.

    Returned as an ordered cell list starting at `entering`; the odd
    positions are the cells whose shipments decrease.
    """
    # path in the bipartite tree from entering's row node to its col node
    adj = {}
    for (i, j) in basis:
        adj.setdefault(("r", i), []).append((("c", j), (i, j)))
        adj.setdefault(("c", j), []).append((("r", i), (i, j)))
    src = ("r", entering[0])
    dst = ("c", entering[1])
    prev = {src: (None, None)}
    stack = [src]
    while stack:
        node = stack.pop()
        if node == dst:
            break
        for nxt, cell in adj.get(node, ()):
            if nxt not in prev:
                prev[nxt] = (node, cell)
                stack.append(nxt)
    if dst not in prev:
        raise ValueError("entering cell not connected through the basis")
    cells = []
    cur = dst
    while cur != src:
        cur, cell = prev[cur]
        cells.append(cell)
    cells.reverse()
    return [entering] + cells
