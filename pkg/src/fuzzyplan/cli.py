"""Command line front end.

Five run modes over one JSON problem format: solve the crisp midpoint
problem, run the alpha-cut fuzzy solve, propagate Gaussian uncertainty
by Monte Carlo, compare the last two, or convert a raw sample or
histogram file into a trapezoid quadruple. Result files are plot-ready
CSV/JSON with numbers at 9 significant digits so repeated runs diff
cleanly; problem export keeps full precision so round-trips are exact.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from .fuzzy import AlphaGrid, TrapezoidalFuzzyNumber
from .fuzzy_solver import fit_trapezoid, solve_fuzzy
from .ingest import (
    DEFAULT_GAMMA_CORE,
    DEFAULT_GAMMA_SUPPORT,
    ecdf_from_histogram,
    ecdf_from_samples,
    gaussian_to_trapezoid,
    read_histogram_csv,
    read_samples,
    to_trapezoid,
)
from .model import DistributionProblem, midpoint_instance, to_lp
from .monte_carlo import ParameterSpecs, compare
from .monte_carlo import run as mc_run
from .simplex import solve
from .transport import (
    TransportInstance,
    check_balance,
    modi_optimize,
    plan_cost,
    vogel_approximation,
)

EXIT_OK = 0
EXIT_USAGE = 2  # parse/schema/IO failures; argparse uses 2 as well
EXIT_INFEASIBLE = 3

MODES = ("crisp", "fuzzy", "montecarlo", "compare", "ingest")

VECTOR_FIELDS = (
    ("supply_max", "rows"),
    ("demand_max", "cols"),
    ("purchase_min", "rows"),
    ("sale_min", "cols"),
    ("purchase_price", "rows"),
    ("sale_price", "cols"),
)
OPTIONAL_FIELDS = (
    ("contract_purchase_price", "rows"),
    ("contract_sale_price", "cols"),
)


class ProblemFormatError(ValueError):
    """Schema or value violation in a problem file, with field path."""


@dataclass(frozen=True)
class RunConfig:
    mode: str
    problem: Path
    alpha_levels: int = 11
    mc_steps: int = 10_000
    seed: int = 42
    gamma_core: float = DEFAULT_GAMMA_CORE
    gamma_support: float = DEFAULT_GAMMA_SUPPORT
    out_dir: Path = Path(".")
    export_problem: Path | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not 0.0 < self.gamma_core < self.gamma_support < 1.0:
            raise ValueError(
                "need 0 < gamma_core < gamma_support < 1, got "
                f"({self.gamma_core}, {self.gamma_support})"
            )
        if self.alpha_levels < 2:
            raise ValueError(f"need at least 2 alpha levels, got {self.alpha_levels}")
        if self.mc_steps < 1:
            raise ValueError(f"need at least one Monte Carlo step, got {self.mc_steps}")


def _fmt(v: float) -> str:
    return f"{v:.9g}"


def _jsonable(obj):
    """Floats rounded to 9 significant digits; non-finite ones to strings."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return float(_fmt(obj)) if math.isfinite(obj) else str(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(_jsonable(payload), indent=2) + "\n")


def _write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def _quad(t: TrapezoidalFuzzyNumber):
    return [t.a, t.b, t.c, t.d]


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _as_trapezoid(value, where, base_dir, gamma_core, gamma_support):
    if _is_number(value):
        return TrapezoidalFuzzyNumber.crisp(float(value))
    if isinstance(value, list):
        if len(value) != 4 or not all(_is_number(v) for v in value):
            raise ProblemFormatError(f"{where}: quadruple must be four numbers")
        try:
            return TrapezoidalFuzzyNumber(*map(float, value))
        except ValueError as exc:
            raise ProblemFormatError(f"{where}: {exc}") from None
    if isinstance(value, dict):
        keys = set(value)
        if keys == {"mean", "sigma"}:
            if not (_is_number(value["mean"]) and _is_number(value["sigma"])):
                raise ProblemFormatError(f"{where}: mean and sigma must be numbers")
            try:
                return gaussian_to_trapezoid(
                    float(value["mean"]), float(value["sigma"]), gamma_core, gamma_support
                )
            except ValueError as exc:
                raise ProblemFormatError(f"{where}: {exc}") from None
        if keys == {"histogram"} or keys == {"samples"}:
            (form,) = keys
            ref = value[form]
            if not isinstance(ref, str):
                raise ProblemFormatError(f"{where}: {form} reference must be a path string")
            path = base_dir / ref
            try:
                if form == "histogram":
                    ecdf = ecdf_from_histogram(read_histogram_csv(path))
                else:
                    ecdf = ecdf_from_samples(read_samples(path))
            except OSError as exc:
                raise ProblemFormatError(f"{where}: cannot read {path}: {exc}") from None
            except ValueError as exc:
                raise ProblemFormatError(f"{where}: {path}: {exc}") from None
            return to_trapezoid(ecdf, gamma_core, gamma_support)
    raise ProblemFormatError(
        f"{where}: expected a number, [a,b,c,d], {{mean,sigma}}, "
        "{histogram: path} or {samples: path}"
    )


def _field_vector(raw, field, count, where_len):
    value = raw[field]
    if not isinstance(value, list) or len(value) != count:
        raise ProblemFormatError(f"{field}: must be a list of {count} entries ({where_len})")
    return value


def _parse_distribution(raw, path, gamma_core, gamma_support) -> DistributionProblem:
    base_dir = path.parent
    known = {"schema_version", "kind"}
    known.update(f for f, _ in VECTOR_FIELDS)
    known.update(f for f, _ in OPTIONAL_FIELDS)
    known.add("transport_cost")
    unknown = set(raw) - known
    if unknown:
        raise ProblemFormatError(f"unknown fields: {sorted(unknown)}")
    for field, _ in VECTOR_FIELDS:
        if field not in raw:
            raise ProblemFormatError(f"{field}: missing required field")
    if "transport_cost" not in raw:
        raise ProblemFormatError("transport_cost: missing required field")
    if not isinstance(raw["supply_max"], list) or not isinstance(raw["demand_max"], list):
        raise ProblemFormatError("supply_max and demand_max must be lists")
    m, n = len(raw["supply_max"]), len(raw["demand_max"])
    if m == 0 or n == 0:
        raise ProblemFormatError("supply_max and demand_max must be nonempty")

    def convert(field, count, axis):
        vec = _field_vector(raw, field, count, f"one per {axis}")
        return tuple(
            _as_trapezoid(v, f"{field}[{i}]", base_dir, gamma_core, gamma_support)
            for i, v in enumerate(vec)
        )

    kwargs = {}
    for field, axis in VECTOR_FIELDS:
        count = m if axis == "rows" else n
        kwargs[field] = convert(field, count, "supply row" if axis == "rows" else "demand column")
    for field, axis in OPTIONAL_FIELDS:
        if field in raw:
            count = m if axis == "rows" else n
            kwargs[field] = convert(
                field, count, "supply row" if axis == "rows" else "demand column"
            )
    cost = raw["transport_cost"]
    if not isinstance(cost, list) or len(cost) != m:
        raise ProblemFormatError(f"transport_cost: must be a list of {m} rows")
    rows = []
    for i, row in enumerate(cost):
        if not isinstance(row, list) or len(row) != n:
            raise ProblemFormatError(f"transport_cost[{i}]: must be a list of {n} entries")
        rows.append(
            tuple(
                _as_trapezoid(v, f"transport_cost[{i}][{j}]", base_dir, gamma_core, gamma_support)
                for j, v in enumerate(row)
            )
        )
    kwargs["transport_cost"] = tuple(rows)
    try:
        return DistributionProblem(**kwargs)
    except ValueError as exc:
        raise ProblemFormatError(str(exc)) from None


def _parse_transport(raw, path) -> TransportInstance:
    unknown = set(raw) - {"schema_version", "kind", "supplies", "demands", "costs"}
    if unknown:
        raise ProblemFormatError(f"unknown fields: {sorted(unknown)}")
    for field in ("supplies", "demands", "costs"):
        if field not in raw:
            raise ProblemFormatError(f"{field}: missing required field")

    def crisp_vector(field):
        value = raw[field]
        if not isinstance(value, list) or not all(_is_number(v) for v in value):
            raise ProblemFormatError(f"{field}: must be a list of numbers")
        return tuple(float(v) for v in value)

    supplies = crisp_vector("supplies")
    demands = crisp_vector("demands")
    costs = raw["costs"]
    if not isinstance(costs, list) or len(costs) != len(supplies):
        raise ProblemFormatError(f"costs: must be a list of {len(supplies)} rows")
    matrix = []
    for i, row in enumerate(costs):
        if not isinstance(row, list) or not all(_is_number(v) for v in row):
            raise ProblemFormatError(f"costs[{i}]: must be a list of numbers")
        matrix.append(tuple(float(v) for v in row))
    try:
        return TransportInstance(supplies, demands, tuple(matrix))
    except ValueError as exc:
        raise ProblemFormatError(str(exc)) from None


def parse_problem(
    file,
    gamma_core: float = DEFAULT_GAMMA_CORE,
    gamma_support: float = DEFAULT_GAMMA_SUPPORT,
):
    """Read a problem JSON into a DistributionProblem or TransportInstance.

    Each distribution parameter may be a crisp number, a trapezoid
    quadruple [a,b,c,d], a gaussian {"mean","sigma"}, or a reference to
    a sidecar file ({"histogram": path} of bin CSV rows, {"samples":
    path} of one value per line, relative to the problem file). All
    forms are normalized to trapezoids at the given confidence levels.
    """
    path = Path(file)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ProblemFormatError(f"cannot read {path}: {exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(raw, dict):
        raise ProblemFormatError(f"{path}: top level must be a JSON object")
    version = raw.get("schema_version")
    if version != 1:
        raise ProblemFormatError(f"{path}: schema_version must be 1, got {version!r}")
    kind = raw.get("kind", "distribution")
    if kind == "transport":
        return _parse_transport(raw, path)
    if kind != "distribution":
        raise ProblemFormatError(f"{path}: kind must be 'distribution' or 'transport'")
    return _parse_distribution(raw, path, gamma_core, gamma_support)


def export_problem(problem, file) -> None:
    """Canonical JSON for a parsed problem; parse_problem reads it back equal.

    Every fuzzy parameter is written in quadruple form at full float
    precision (the 9-digit rule applies to analysis outputs, not to
    problem files, where rounding would break the round-trip).
    """
    path = Path(file)
    if isinstance(problem, TransportInstance):
        payload = {
            "schema_version": 1,
            "kind": "transport",
            "supplies": list(problem.supplies),
            "demands": list(problem.demands),
            "costs": [list(row) for row in problem.costs],
        }
    else:
        payload = {"schema_version": 1, "kind": "distribution"}
        for field, _ in VECTOR_FIELDS:
            payload[field] = [_quad(t) for t in getattr(problem, field)]
        payload["transport_cost"] = [
            [_quad(t) for t in row] for row in problem.transport_cost
        ]
        for field, _ in OPTIONAL_FIELDS:
            value = getattr(problem, field)
            if value is not None:
                payload[field] = [_quad(t) for t in value]
    path.write_text(json.dumps(payload, indent=2) + "\n")


def _lane_names(shape):
    m, n = shape
    return [f"x_{i + 1}{j + 1}" for i in range(m) for j in range(n)]


def _run_crisp(config: RunConfig, problem) -> int:
    out = config.out_dir / "crisp_solution.json"
    if isinstance(problem, TransportInstance):
        if not check_balance(problem):
            print("error: transport instance is unbalanced", file=sys.stderr)
            return EXIT_INFEASIBLE
        plan = modi_optimize(problem, vogel_approximation(problem))
        _write_json(
            out,
            {
                "status": "optimal",
                "total_cost": plan_cost(problem, plan),
                "shipments": [list(row) for row in plan.shipments],
            },
        )
        return EXIT_OK
    inst = midpoint_instance(problem)
    sol = solve(to_lp(inst))
    if sol.status != "optimal":
        _write_json(out, {"status": sol.status, "benefit": None, "shipments": None})
        print(f"error: crisp problem is {sol.status}", file=sys.stderr)
        return EXIT_INFEASIBLE
    m, n = problem.shape
    rows = [[sol.x[i * n + j] for j in range(n)] for i in range(m)]
    _write_json(out, {"status": "optimal", "benefit": sol.objective_value, "shipments": rows})
    return EXIT_OK


def _run_fuzzy(config: RunConfig, problem: DistributionProblem):
    fz = solve_fuzzy(problem, AlphaGrid.uniform(config.alpha_levels))
    m, n = fz.shape
    header = ["alpha", "D_lo", "D_hi"]
    for name in _lane_names(fz.shape):
        header.extend([f"{name}_lo", f"{name}_hi"])
    header.extend(["feasible", "repaired"])
    rows = []
    for level in fz.levels:
        row = [_fmt(level.alpha)]
        if level.feasible:
            row.extend([_fmt(level.benefit.lo), _fmt(level.benefit.hi)])
            for i in range(m):
                for j in range(n):
                    cut = level.shipments[i][j]
                    row.extend([_fmt(cut.lo), _fmt(cut.hi)])
        else:
            row.extend([""] * (2 + 2 * m * n))
        row.extend([str(level.feasible).lower(), str(level.repaired).lower()])
        rows.append(row)
    _write_csv(config.out_dir / "fuzzy_levels.csv", header, rows)
    try:
        quads = {"D": _quad(fit_trapezoid(fz, "benefit"))}
        for i in range(m):
            for j in range(n):
                quads[f"x_{i + 1}{j + 1}"] = _quad(fit_trapezoid(fz, (i, j)))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE, fz
    _write_json(config.out_dir / "fuzzy_quadruples.json", quads)
    return EXIT_OK, fz


def _hist_rows(hist):
    return [
        [_fmt(lo), _fmt(hi), _fmt(count)]
        for lo, hi, count in zip(hist.bin_edges, hist.bin_edges[1:], hist.counts)
    ]


def _run_montecarlo(config: RunConfig, problem: DistributionProblem):
    specs = ParameterSpecs.from_problem(problem, config.gamma_support)
    mc = mc_run(specs, config.mc_steps, config.seed)
    summary = {
        "steps": mc.steps,
        "seed": mc.seed,
        "feasible": mc.feasible_count,
        "infeasible": mc.infeasible_count,
        "benefit_mean": mc.benefit_mean,
        "benefit_std": mc.benefit_std,
        "shipment_means": mc.shipment_means,
        "shipment_stds": mc.shipment_stds,
    }
    _write_json(config.out_dir / "mc_summary.json", summary)
    if mc.feasible_count == 0:
        print("error: every Monte Carlo scenario was infeasible", file=sys.stderr)
        return EXIT_INFEASIBLE, mc
    header = ["bin_lo", "bin_hi", "count"]
    _write_csv(config.out_dir / "mc_hist_D.csv", header, _hist_rows(mc.benefit_histogram))
    m, n = mc.shape
    for i in range(m):
        for j in range(n):
            _write_csv(
                config.out_dir / f"mc_hist_x_{i + 1}{j + 1}.csv",
                header,
                _hist_rows(mc.shipment_histograms[i][j]),
            )
    return EXIT_OK, mc


def _report_payload(report):
    return {
        "gamma_core": report.gamma_core,
        "gamma_support": report.gamma_support,
        "entries": [
            {
                "name": e.name,
                "fuzzy": _quad(e.fuzzy),
                "mc": _quad(e.mc),
                "fuzzy_support_width": e.fuzzy_support_width,
                "mc_support_width": e.mc_support_width,
                "width_ratio": e.width_ratio,
                "mc_inside_fuzzy": e.mc_inside_fuzzy,
            }
            for e in report.entries
        ],
    }


def _run_ingest(config: RunConfig) -> int:
    path = config.problem
    if path.suffix.lower() == ".csv":
        ecdf = ecdf_from_histogram(read_histogram_csv(path))
    else:
        ecdf = ecdf_from_samples(read_samples(path))
    trap = to_trapezoid(ecdf, config.gamma_core, config.gamma_support)
    _write_json(
        config.out_dir / "ingest_quadruple.json",
        {
            "source": path.name,
            "gamma_core": config.gamma_core,
            "gamma_support": config.gamma_support,
            "quadruple": _quad(trap),
        },
    )
    return EXIT_OK


def run(config: RunConfig) -> int:
    """Execute one configured run; returns the process exit code."""
    config.out_dir.mkdir(parents=True, exist_ok=True)
    if config.mode == "ingest":
        return _run_ingest(config)
    problem = parse_problem(config.problem, config.gamma_core, config.gamma_support)
    if config.export_problem is not None:
        export_problem(problem, config.export_problem)
    if config.mode == "crisp":
        return _run_crisp(config, problem)
    if isinstance(problem, TransportInstance):
        raise ProblemFormatError(f"mode {config.mode} needs a distribution problem file")
    if config.mode == "fuzzy":
        code, _ = _run_fuzzy(config, problem)
        return code
    if config.mode == "montecarlo":
        code, _ = _run_montecarlo(config, problem)
        return code
    code, fz = _run_fuzzy(config, problem)
    if code != EXIT_OK:
        return code
    code, mc = _run_montecarlo(config, problem)
    if code != EXIT_OK:
        return code
    report = compare(fz, mc, config.gamma_core, config.gamma_support)
    _write_json(config.out_dir / "comparison.json", _report_payload(report))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzyplan",
        description="Distribution planning under uncertainty: crisp, fuzzy "
        "alpha-cut, and Monte Carlo solvers over one JSON problem format.",
    )
    parser.add_argument(
        "problem",
        help="problem JSON file; in ingest mode, a samples .txt or histogram .csv",
    )
    parser.add_argument("--mode", choices=MODES, default="crisp")
    parser.add_argument("--alpha-levels", type=int, default=11, metavar="K")
    parser.add_argument("--mc-steps", type=int, default=10_000, metavar="N")
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--gamma-core", type=float, default=DEFAULT_GAMMA_CORE)
    parser.add_argument("--gamma-support", type=float, default=DEFAULT_GAMMA_SUPPORT)
    parser.add_argument("--out-dir", type=Path, default=Path("."), metavar="DIR")
    parser.add_argument(
        "--export-problem",
        type=Path,
        default=None,
        metavar="FILE",
        help="also write the parsed problem back out in canonical quadruple form",
    )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = RunConfig(
            mode=args.mode,
            problem=Path(args.problem),
            alpha_levels=args.alpha_levels,
            mc_steps=args.mc_steps,
            seed=args.seed,
            gamma_core=args.gamma_core,
            gamma_support=args.gamma_support,
            out_dir=args.out_dir,
            export_problem=args.export_problem,
        )
        return run(config)
    except (ProblemFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
