import json

import pytest

from indexmap.cli import main
from indexmap.diagram import LatticeDiagram, format_diagram, parse_diagram, pre_index
from indexmap.dvr import RingConfig
from indexmap.errors import UnknownSuite
from indexmap.suites import GENERATORS, SUITES, RunConfig, generate, run_suite


def strip_timing(report):
    out = report.to_json()
    out.pop("elapsed_ms")
    for part in out["parts"]:
        part.pop("elapsed_ms")
    return out


@pytest.mark.parametrize("name", ["cocycle", "additivity", "lemma327"])
def test_suite_is_deterministic(name):
    cfg = RunConfig(cases=5, seed=11)
    a, b = run_suite(name, cfg), run_suite(name, cfg)
    assert a.ok
    assert strip_timing(a) == strip_timing(b)


def test_all_with_zero_cases_is_green():
    report = run_suite("all", RunConfig(cases=0))
    assert report.ok
    assert {p["suite"] for p in report.parts} == set(SUITES)


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite("nope")


def test_report_json_fields():
    out = run_suite("oracle", RunConfig(cases=3)).to_json()
    for key in ("suite", "config", "cases", "failures", "unresolved", "elapsed_ms", "prng", "schema", "status"):
        assert key in out
    assert out["status"] == "ok"


def test_bad_config_rejected():
    with pytest.raises(ValueError):
        RunConfig(prec=0)
    with pytest.raises(ValueError):
        RunConfig(cases=-1)


@pytest.mark.parametrize("kind", GENERATORS)
def test_generate_stable_per_seed(kind):
    a = generate(kind, RunConfig(seed=4))
    assert a == generate(kind, RunConfig(seed=4))
    assert a.strip()


def test_generated_diagrams_differ_across_seeds():
    texts = {generate("diagram", RunConfig(seed=s)) for s in range(6)}
    assert len(texts) > 1


@pytest.mark.parametrize("seed", range(5))
def test_diagram_text_roundtrip(seed):
    ring = RingConfig(2, "series", 24)
    F = parse_diagram(generate("diagram", RunConfig(seed=seed)), ring)
    text = format_diagram(F)
    G = parse_diagram(text, ring)
    assert format_diagram(G) == text
    assert pre_index(F) == pre_index(G)


def test_lattice_diagram_roundtrip():
    ring = RingConfig(3, "series", 24)
    text = "3; 0<2, 1<2\nbase: 0,1\nlattice 0: t, 0; 0, 1\nlattice 1: 1, 0; 0, t\nlattice 2: 1, 0; 0, 1"
    F = parse_diagram(text, ring)
    assert isinstance(F, LatticeDiagram)
    assert parse_diagram(format_diagram(F), ring).lattices == F.lattices


# ---------------------------------------------------------------------------
# command line


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_cli_check_exit_zero(capsys):
    code, out = run(capsys, "check", "cocycle", "--cases", "3")
    assert code == 0
    assert out.out.startswith("cocycle: ok")


def test_cli_check_json_file(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, _ = run(capsys, "check", "simplicial", "--cases", "2", "--json", str(path))
    data = json.loads(path.read_text())
    assert code == 0 and data["suite"] == "simplicial" and data["cases"] >= 2


def test_cli_unknown_suite_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["check", "nope"])
    assert exc.value.code == 2


def test_cli_bad_matrix_exits_two(capsys):
    code, out = run(capsys, "lattice", "sup", "1, 0", "1")
    assert code == 2
    assert out.err.startswith("error:")


def test_cli_lattice_ops(capsys):
    code, out = run(capsys, "lattice", "relindex", "t, 0; 0, t", "1, 0; 0, 1")
    assert code == 0 and out.out.strip() == "2"
    code, out = run(capsys, "lattice", "leq", "t, 0; 0, 1", "1, 0; 0, 1", "--json", "-")
    assert json.loads(out.out)["relation"] == "leq"


def test_cli_index_group(capsys):
    code, out = run(capsys, "index", "group", "t, 0; 0, 1", "1, t; 0, 1", "--json", "-")
    data = json.loads(out.out)
    assert data["index"] == [1, 0]
    assert data["product_index"] == 1


def test_cli_diagram_commands(capsys, tmp_path):
    path = tmp_path / "d.txt"
    path.write_text(generate("diagram", RunConfig(seed=2)))
    for op in ("preindex", "split", "rigidity"):
        code, _ = run(capsys, "diagram", op, str(path))
        assert code == 0


def test_cli_lemma327_reports_condition(capsys, tmp_path):
    path = tmp_path / "s.txt"
    # basepoints 0 and 1 are incomparable
    path.write_text("3; 0<2, 1<2\nbase: 0,1")
    code, out = run(capsys, "diagram", "lemma327", str(path), "--json", "-")
    assert code == 1
    assert json.loads(out.out)["condition"] == "a"
    path.write_text("3; 0<1, 1<2\nbase: 0,1")
    code, out = run(capsys, "diagram", "lemma327", str(path), "--json", "-")
    assert code == 0 and json.loads(out.out)["ok"]


def test_cli_appendix(capsys):
    code, out = run(capsys, "appendix", "tpling-rezk", "--cat", "c2", "--degree", "3")
    assert code == 0 and "holds" in out.out


def test_cli_generate_deterministic(capsys):
    _, a = run(capsys, "generate", "chain", "--seed", "5")
    _, b = run(capsys, "generate", "chain", "--seed", "5")
    assert a.out == b.out
