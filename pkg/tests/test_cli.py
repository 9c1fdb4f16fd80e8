import json
from importlib.resources import files
from pathlib import Path

import pytest

from fuzzyplan.cli import (
    ProblemFormatError,
    export_problem,
    main,
    parse_problem,
)
from fuzzyplan.fuzzy import TrapezoidalFuzzyNumber
from fuzzyplan.ingest import (
    ecdf_from_histogram,
    ecdf_from_samples,
    gaussian_to_trapezoid,
    read_histogram_csv,
    read_samples,
    to_trapezoid,
)
from fuzzyplan.model import DistributionProblem
from fuzzyplan.transport import TransportInstance

TABLE1 = str(files("fuzzyplan").joinpath("data/table1.json"))
EXPECTED = json.loads(files("fuzzyplan").joinpath("data/table1_expected.json").read_text())

FUZZY_HEADER = (
    "alpha,D_lo,D_hi,"
    "x_11_lo,x_11_hi,x_12_lo,x_12_hi,x_13_lo,x_13_hi,"
    "x_21_lo,x_21_hi,x_22_lo,x_22_hi,x_23_lo,x_23_hi,"
    "x_31_lo,x_31_hi,x_32_lo,x_32_hi,x_33_lo,x_33_hi,"
    "feasible,repaired"
)


def write_problem(path: Path, **overrides) -> Path:
    doc = {
        "schema_version": 1,
        "kind": "distribution",
        "supply_max": [460],
        "demand_max": [460],
        "purchase_min": [0],
        "sale_min": [0],
        "purchase_price": [480],
        "sale_price": [1100],
        "transport_cost": [[30]],
    }
    doc.update(overrides)
    path.write_text(json.dumps(doc))
    return path


def test_parse_all_parameter_forms(tmp_path):
    (tmp_path / "s.txt").write_text("".join(f"{v}\n" for v in range(1, 101)))
    (tmp_path / "h.csv").write_text("bin_lo,bin_hi,count\n0,1,5\n1,2,15\n2,3,5\n")
    p = write_problem(
        tmp_path / "p.json",
        supply_max=[460],
        demand_max=[[78, 95, 105, 120]],
        purchase_min=[{"mean": 100, "sigma": 10}],
        sale_min=[{"samples": "s.txt"}],
        purchase_price=[{"histogram": "h.csv"}],
    )
    prob = parse_problem(p)
    assert isinstance(prob, DistributionProblem)
    assert prob.supply_max[0] == TrapezoidalFuzzyNumber.crisp(460.0)
    assert prob.demand_max[0] == TrapezoidalFuzzyNumber(78, 95, 105, 120)
    assert prob.purchase_min[0] == gaussian_to_trapezoid(100.0, 10.0)
    assert prob.sale_min[0] == to_trapezoid(ecdf_from_samples(read_samples(tmp_path / "s.txt")))
    assert prob.purchase_price[0] == to_trapezoid(
        ecdf_from_histogram(read_histogram_csv(tmp_path / "h.csv"))
    )


def test_parse_rejects_bad_quadruple(tmp_path):
    p = write_problem(tmp_path / "p.json", demand_max=[[5, 4, 3, 2]])
    with pytest.raises(ProblemFormatError, match=r"demand_max\[0\]"):
        parse_problem(p)


def test_parse_rejects_schema_violations(tmp_path):
    with pytest.raises(ProblemFormatError, match="cannot read"):
        parse_problem(tmp_path / "missing.json")

    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    with pytest.raises(ProblemFormatError, match="not valid JSON"):
        parse_problem(junk)

    arr = tmp_path / "arr.json"
    arr.write_text("[1, 2]")
    with pytest.raises(ProblemFormatError, match="top level"):
        parse_problem(arr)

    with pytest.raises(ProblemFormatError, match="schema_version"):
        parse_problem(write_problem(tmp_path / "v.json", schema_version=2))

    with pytest.raises(ProblemFormatError, match="unknown fields"):
        parse_problem(write_problem(tmp_path / "u.json", supply_cap=[1]))

    bad_len = write_problem(tmp_path / "l.json", sale_min=[0, 0])
    with pytest.raises(ProblemFormatError, match="sale_min"):
        parse_problem(bad_len)

    doc = json.loads((tmp_path / "l.json").read_text())
    del doc["purchase_price"]
    doc["sale_min"] = [0]
    short = tmp_path / "m.json"
    short.write_text(json.dumps(doc))
    with pytest.raises(ProblemFormatError, match="purchase_price"):
        parse_problem(short)

    with pytest.raises(ProblemFormatError, match=r"purchase_min\[0\]"):
        parse_problem(write_problem(tmp_path / "g.json", purchase_min=[{"mean": 5}]))


def test_parse_transport_kind(tmp_path):
    p = tmp_path / "t.json"
    p.write_text(
        json.dumps(
            {
                "schema_version": 1,
                "kind": "transport",
                "supplies": [5, 5],
                "demands": [5, 5],
                "costs": [[1, 2], [2, 1]],
            }
        )
    )
    inst = parse_problem(p)
    assert isinstance(inst, TransportInstance)
    assert inst.supplies == (5.0, 5.0)

    out = tmp_path / "out"
    assert main([str(p), "--mode", "crisp", "--out-dir", str(out)]) == 0
    payload = json.loads((out / "crisp_solution.json").read_text())
    assert payload["status"] == "optimal"
    assert payload["total_cost"] == pytest.approx(10.0)
    assert payload["shipments"] == [[5.0, 0.0], [0.0, 5.0]]


def test_export_round_trip(tmp_path):
    prob = parse_problem(TABLE1)
    out = tmp_path / "exported.json"
    export_problem(prob, out)
    assert parse_problem(out) == prob

    t = TransportInstance((3.0,), (3.0,), ((7.0,),))
    out2 = tmp_path / "t.json"
    export_problem(t, out2)
    assert parse_problem(out2) == t


def test_crisp_mode_matches_expected_fixture(tmp_path):
    out = tmp_path / "run"
    assert main([TABLE1, "--mode", "crisp", "--out-dir", str(out)]) == 0
    payload = json.loads((out / "crisp_solution.json").read_text())
    assert payload["status"] == EXPECTED["status"]
    assert payload["benefit"] == pytest.approx(EXPECTED["benefit"], abs=1e-3)
    total = sum(sum(row) for row in payload["shipments"])
    assert total == pytest.approx(1530.0, abs=1e-6)


def test_export_problem_flag(tmp_path):
    out = tmp_path / "run"
    exported = tmp_path / "copy.json"
    code = main(
        [TABLE1, "--mode", "crisp", "--out-dir", str(out), "--export-problem", str(exported)]
    )
    assert code == 0
    assert parse_problem(exported) == parse_problem(TABLE1)


def test_fuzzy_mode_outputs(tmp_path):
    out = tmp_path / "run"
    assert main([TABLE1, "--mode", "fuzzy", "--out-dir", str(out)]) == 0
    lines = (out / "fuzzy_levels.csv").read_text().splitlines()
    assert lines[0] == FUZZY_HEADER
    assert len(lines) == 1 + 11
    assert lines[1].startswith("0,")
    assert lines[-1].startswith("1,")
    assert all(line.endswith(",true") or line.endswith(",false") for line in lines[1:])

    quads = json.loads((out / "fuzzy_quadruples.json").read_text())
    assert set(quads) == {"D"} | {f"x_{i}{j}" for i in "123" for j in "123"}
    a, b, c, d = quads["D"]
    assert a <= b <= 781030.0 <= c <= d
    assert a < d


def test_montecarlo_mode_outputs(tmp_path):
    out = tmp_path / "run"
    code = main(
        [TABLE1, "--mode", "montecarlo", "--mc-steps", "120", "--out-dir", str(out)]
    )
    assert code == 0
    summary = json.loads((out / "mc_summary.json").read_text())
    assert summary["steps"] == 120
    assert summary["feasible"] + summary["infeasible"] == 120
    assert summary["benefit_mean"] == pytest.approx(781030.0, rel=0.05)

    hist = read_histogram_csv(out / "mc_hist_D.csv")
    assert sum(hist.counts) == summary["feasible"]
    for i in "123":
        for j in "123":
            assert (out / f"mc_hist_x_{i}{j}.csv").exists()


def test_ingest_mode(tmp_path):
    src = tmp_path / "samples.txt"
    src.write_text("".join(f"{v}\n" for v in range(1, 201)))
    out = tmp_path / "run"
    assert main([str(src), "--mode", "ingest", "--out-dir", str(out)]) == 0
    payload = json.loads((out / "ingest_quadruple.json").read_text())
    expect = to_trapezoid(ecdf_from_samples(read_samples(src)))
    assert payload["source"] == "samples.txt"
    assert payload["quadruple"] == pytest.approx([expect.a, expect.b, expect.c, expect.d], rel=1e-8)

    hist_src = tmp_path / "hist.csv"
    hist_src.write_text("0,1,5\n1,2,15\n2,3,5\n")
    out2 = tmp_path / "run2"
    assert main([str(hist_src), "--mode", "ingest", "--out-dir", str(out2)]) == 0
    payload2 = json.loads((out2 / "ingest_quadruple.json").read_text())
    expect2 = to_trapezoid(ecdf_from_histogram(read_histogram_csv(hist_src)))
    assert payload2["quadruple"] == pytest.approx(
        [expect2.a, expect2.b, expect2.c, expect2.d], rel=1e-8
    )


def test_compare_mode_deterministic(tmp_path):
    argv = [TABLE1, "--mode", "compare", "--mc-steps", "150", "--seed", "42"]
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(argv + ["--out-dir", str(out1)]) == 0
    assert main(argv + ["--out-dir", str(out2)]) == 0
    names1 = sorted(p.name for p in out1.iterdir())
    names2 = sorted(p.name for p in out2.iterdir())
    assert names1 == names2
    assert "comparison.json" in names1
    for name in names1:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    report = json.loads((out1 / "comparison.json").read_text())
    assert report["entries"][0]["name"] == "D"
    assert len(report["entries"]) == 10
    d = report["entries"][0]
    assert d["width_ratio"] > 1.0
    assert d["mc_inside_fuzzy"] is True


def test_exit_codes(tmp_path, capsys):
    assert main([str(tmp_path / "nope.json"), "--mode", "crisp"]) == 2
    assert "error:" in capsys.readouterr().err

    junk = tmp_path / "junk.json"
    junk.write_text("{oops")
    assert main([str(junk), "--mode", "fuzzy"]) == 2

    infeasible = write_problem(
        tmp_path / "inf.json", supply_max=[40], purchase_min=[50], demand_max=[100]
    )
    out = tmp_path / "run"
    assert main([str(infeasible), "--mode", "crisp", "--out-dir", str(out)]) == 3
    assert "infeasible" in capsys.readouterr().err
    assert json.loads((out / "crisp_solution.json").read_text())["status"] == "infeasible"

    transport = tmp_path / "t.json"
    transport.write_text(
        json.dumps(
            {
                "schema_version": 1,
                "kind": "transport",
                "supplies": [5],
                "demands": [5],
                "costs": [[1]],
            }
        )
    )
    assert main([str(transport), "--mode", "fuzzy", "--out-dir", str(out)]) == 2

    unbalanced = tmp_path / "u.json"
    unbalanced.write_text(
        json.dumps(
            {
                "schema_version": 1,
                "kind": "transport",
                "supplies": [5],
                "demands": [3],
                "costs": [[1]],
            }
        )
    )
    assert main([str(unbalanced), "--mode", "crisp", "--out-dir", str(out)]) == 3

    bad_gamma = main([TABLE1, "--mode", "crisp", "--gamma-core", "0.95"])
    assert bad_gamma == 2
