import json

import pytest

from polydiam.bounds import comparison_bounds, kk_recurrence, quasipoly_bound
from polydiam.cli import main
from polydiam.generators import gen_cube, gen_polygon, gen_simplex
from polydiam.hrep import parse_hrep, write_hrep
from polydiam.report import full_report, vertex_pairs


@pytest.fixture
def cube3(tmp_path):
    path = tmp_path / "cube3.ine"
    write_hrep(gen_cube(3), path)
    return str(path)


def test_gen_writes_file(tmp_path, capsys):
    out = tmp_path / "km.ine"
    assert main(["gen", "klee-minty", "--d", "3", "--eps", "1/4", "-o", str(out)]) == 0
    P = parse_hrep(out.read_text())
    assert (P.dim, P.n) == (3, 6)


def test_gen_missing_parameter(capsys):
    assert main(["gen", "cube"]) == 1
    assert "--d" in capsys.readouterr().err


def test_gen_random_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.ine", tmp_path / "b.ine"
    for p in (a, b):
        assert main(["gen", "random-tangent", "--d", "3", "--m", "8", "--seed", "1", "-o", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_vertices_json(cube3, capsys):
    assert main(["vertices", cube3, "--json"]) == 0
    out = capsys.readouterr()
    data = json.loads(out.out)
    assert len(data) == 8
    assert data[7] == {"id": 7, "coords": ["1", "1", "1"], "active": [0, 2, 4]}
    assert out.err.strip().endswith("d=3, n=6")


def test_vertices_brute_matches_dd(cube3, capsys):
    main(["vertices", cube3, "--json"])
    dd = capsys.readouterr().out
    main(["vertices", cube3, "--json", "--method", "brute"])
    assert capsys.readouterr().out == dd


def test_diameter_json_schema(cube3, capsys):
    assert main(["diameter", cube3, "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) >= {"d", "n", "n_irredundant", "vertices", "edges", "diameter", "witness", "bounds", "checks"}
    assert doc["diameter"] == 3 and doc["edges"] == 12
    assert set(doc["bounds"]) >= {"hirsch", "klee_walkup_lower", "barnette", "larman", "kalai_subexp", "quasipoly"}
    assert set(doc["checks"]) == {"hirsch_holds", "quasipoly_holds"}
    # every reported bound is reproducible from the bounds module
    ref = comparison_bounds(doc["d"], doc["n_irredundant"]).to_dict()
    for key, value in ref.items():
        assert doc["bounds"][key] == value
    assert doc["bounds"]["quasipoly"] == quasipoly_bound(3, 6)


def test_diameter_csv(cube3, capsys):
    assert main(["diameter", cube3, "--csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2
    row = dict(zip(lines[0].split(","), lines[1].split(",")))
    assert row["diameter"] == "3" and row["hirsch_holds"] == "True"


def test_kk_path_summary(cube3, tmp_path, capsys):
    trace_path = tmp_path / "trace.json"
    assert main(["kk-path", cube3, "--from", "0", "--to", "7", "--trace", str(trace_path)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("path: 0 ")
    assert "<= f(3,6)=5" in lines[-1]
    trace = json.loads(trace_path.read_text())
    assert trace["path"][0] == 0 and trace["path"][-1] == 7
    assert trace["kind"] == "recursive" and trace["inner"]["d"] == 2


def test_kk_path_bad_vertex(cube3, capsys):
    assert main(["kk-path", cube3, "--from", "0", "--to", "99"]) == 1
    assert "out of range" in capsys.readouterr().err


def test_missing_file(capsys):
    assert main(["diameter", "does-not-exist.ine"]) == 1
    assert "does-not-exist.ine" in capsys.readouterr().err


def test_parse_error_names_line(tmp_path, capsys):
    bad = tmp_path / "bad.ine"
    bad.write_text("H-representation\nbegin\n 1 3 rational\n 1 0 0\nend\n")
    assert main(["vertices", str(bad)]) == 1
    err = capsys.readouterr().err
    assert "bad.ine" in err and "line 4" in err


def test_unknown_flag_rejected(cube3):
    with pytest.raises(SystemExit) as info:
        main(["diameter", cube3, "--frobnicate"])
    assert info.value.code == 2


def test_bounds_command(capsys):
    assert main(["bounds", "--d", "5", "--n", "10", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["klee_walkup_lower"] == 6 and doc["hirsch"] == 5
    assert doc["kk_recurrence"] == kk_recurrence(5, 10)


def test_verify_command_csv(capsys):
    assert main(["verify", "--dmax", "4", "--nmax", "20", "--csv"]) == 0
    out = capsys.readouterr()
    rows = out.out.strip().splitlines()
    assert rows[0] == "d,n,f,quasipoly,holds"
    assert len(rows) == 1 + (20 - 3) + (20 - 4)
    assert out.err.startswith("PASS")


def test_q_lemma_command(cube3, capsys):
    assert main(["q-lemma", cube3]) == 0
    assert capsys.readouterr().out.strip().splitlines()[-1] == "q-lemma pass=8"


def test_report_command(cube3, capsys):
    assert main(["report", cube3]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["diameter"]["diameter"] == 3
    assert doc["kk"]["max_length"] <= 5
    assert doc["q_lemma"]["counts"] == {"pass": 8}


def test_env_threads(cube3, capsys, monkeypatch):
    monkeypatch.setenv("POLYDIAM_THREADS", "2")
    assert main(["vertices", cube3, "--json", "--method", "brute"]) == 0
    assert len(json.loads(capsys.readouterr().out)) == 8


def test_full_report_octagon():
    doc = full_report(gen_polygon(8))
    assert doc["diameter"]["diameter"] == 4
    assert doc["kk"]["max_length"] == 4
    assert doc["kk"]["all_valid"]


def test_full_report_simplex():
    doc = full_report(gen_simplex(6))
    assert doc["diameter"]["diameter"] == 1
    assert doc["kk"]["max_length"] == 1
    assert doc["summary"].endswith("all stages ok")


def test_full_report_partial_on_bad_input(tmp_path):
    strip = tmp_path / "strip.ine"
    strip.write_text("H-representation\nbegin\n 2 3 rational\n 1 -1 0\n 0 1 0\nend\n")
    doc = full_report(str(strip))
    assert doc["stages"]["parse"]["status"] == "ok"
    assert doc["stages"]["enumerate"]["status"] == "failed"
    assert doc["stages"]["kk_paths"]["status"] == "skipped"


def test_full_report_deterministic():
    a = json.dumps(full_report(gen_cube(3)))
    b = json.dumps(full_report(gen_cube(3)))
    assert a == b


def test_vertex_pairs_sampling():
    pairs, sampled = vertex_pairs(300, seed=1)
    assert sampled and len(pairs) == 64 and len(set(pairs)) == 64
    assert vertex_pairs(300, seed=1) == (pairs, True)
    all_pairs, sampled = vertex_pairs(300, exhaustive=True)
    assert not sampled and len(all_pairs) == 300 * 299 // 2
