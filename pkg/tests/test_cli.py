import csv
import io
import json


from conftest import FIXTURES
from daqubo.cli import CSV_COLUMNS, EXIT_INFEASIBLE, main
from daqubo.formats import loads_native, read_bqp, write_file
from daqubo.problems import QcppInstance, encode_qcpp


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_solve_m1(capsys):
    code, out, _ = run(capsys, "solve", "--mode", "normal", "--iters", 100000, "--seed", 7, FIXTURES / "fixture_m1.json")
    doc = json.loads(out)
    assert code == 0 and doc["best_energy"] == -1 and doc["feasible"] is True
    assert run(capsys, "solve", "--mode", "normal", "--iters", 100000, "--seed", 7, "--no-timing", FIXTURES / "fixture_m1.json")[1] == run(
        capsys, "solve", "--mode", "normal", "--iters", 100000, "--seed", 7, "--no-timing", FIXTURES / "fixture_m1.json"
    )[1]


def test_oracle_two_squares(capsys):
    code, out, _ = run(capsys, "oracle", FIXTURES / "two_squares_selcol.json")
    doc = json.loads(out)
    assert code == 0 and doc["colors"] == 1
    assert sorted(doc["solution"]["selection"]) == [0, 2, 5, 7]


def test_encode_qcpp_defaults_to_1000(capsys, tmp_path):
    out_file = tmp_path / "q.bqp"
    code, _, _ = run(capsys, "encode", "--problem", "qcpp", "--format", "bqp", "--out", out_file, FIXTURES / "qcpp3.json")
    inst = loads_native((FIXTURES / "qcpp3.json").read_text())
    assert code == 0 and read_bqp(out_file.read_text()) == encode_qcpp(inst, 1000)


def test_encode_rejects_wrong_problem(capsys):
    code, _, err = run(capsys, "encode", "--problem", "qap", FIXTURES / "qcpp3.json")
    assert code == 1 and "does not match" in err


def test_generate_is_seeded(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run(capsys, "generate", "--family", "selcol", "--n", 9, "--density", 0.4, "--seed", 5, "--out", path)[0] == 0
    assert a.read_text() == b.read_text()
    assert loads_native(a.read_text()).n_vertices == 9


def test_reduce_reports_and_writes(capsys, tmp_path):
    dst = tmp_path / "reduced.json"
    code, out, _ = run(capsys, "reduce", "--out", dst, FIXTURES / "two_squares_selcol.json")
    doc = json.loads(out)
    assert code == 0 and doc["greedy_colors"] == 2 and doc["pct_reduction"] == 50.0
    assert loads_native(dst.read_text()).color_budget == 2


def test_bench_csv(capsys):
    code, out, _ = run(
        capsys, "bench", "--solvers", "normal,parallel,oracle", "--seeds", "1,2", "--iters", 3000, "--ref", "oracle",
        "--no-timing", FIXTURES / "qcpp3.json",
    )
    assert code == 0
    assert out.splitlines()[0] == (FIXTURES / "csv_header.txt").read_text().strip() == ",".join(CSV_COLUMNS)
    table = rows(out)
    assert [r["solver_id"] for r in table] == ["normal", "normal", "parallel", "parallel", "oracle"]
    assert all(r["ub"] == "3" and r["feasible"] == "true" and r["norm_diff"] == "0" and r["pct_gap"] == "0" for r in table)
    assert all(r["time_sec"] == "" for r in table)


def test_sweep_csv(capsys):
    code, out, _ = run(capsys, "sweep", "--lambdas", "0.01,1000", "--modes", "oracle,normal", "--iters", 2000, "--no-timing", FIXTURES / "qcpp3.json")
    table = rows(out)
    assert code == 0 and len(table) == 4
    assert [(r["mode"], r["lambda"], r["feasible"]) for r in table] == [
        ("exact", "0.01", "false"),
        ("exact", "1000", "true"),
        ("normal", "0.01", "false"),
        ("normal", "1000", "true"),
    ]


def test_ordering_csv(capsys):
    code, out, _ = run(capsys, "ordering", "--k", 4, "--iters", 2000, "--no-timing", FIXTURES / "fixture_m1.json")
    table = rows(out)
    assert code == 0 and len(table) == 4 and {r["ub"] for r in table} == {"-1"}


def test_missing_file_is_an_error(capsys):
    code, _, err = run(capsys, "solve", "nope.json")
    assert code == 1 and err.startswith("error:")


def test_infeasible_exit_code(capsys, tmp_path):
    path = tmp_path / "dead.json"
    write_file(path, QcppInstance(2, ((0, 1),)))
    code, out, _ = run(capsys, "oracle", "--require-feasible", path)
    assert code == EXIT_INFEASIBLE and json.loads(out)["feasible"] is False
    code, _, _ = run(capsys, "solve", "--require-feasible", "--iters", 100, path)
    assert code == EXIT_INFEASIBLE


def test_bqp_maximize_round_trip(capsys, tmp_path):
    path = tmp_path / "max.txt"
    path.write_text("2 3\n1 1 1\n2 2 1\n1 2 -2\n")
    doc = json.loads(run(capsys, "oracle", "--maximize", "--no-timing", path)[1])
    assert doc["objective"] == 1 and doc["best_energy"] == -1 and doc["sense"] == "maximize"
