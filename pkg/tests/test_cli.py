import json
import subprocess
import sys
from pathlib import Path

import pytest

from helpers import example_poset
from taumute import models
from taumute.cli import EXIT_INPUT, EXIT_OK, EXIT_TRUNCATED, main
from taumute.formats import FormatError, algebra_to_json, parse_algebra, poset_from_json, poset_to_json, posets_equal


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_algebra(tmp_path: Path, data) -> str:
    p = tmp_path / "alg.json"
    p.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(p)


A3_FILE = {
    "vertices": 3,
    "arrows": [{"name": "a", "from": 1, "to": 2}, {"name": "b", "from": 2, "to": 3}],
    "relations": [[{"coef": "1", "path": ["a", "b"]}]],
}


# alg info -------------------------------------------------------------------------------

@pytest.mark.parametrize("preset,dim", [("a3", 6), ("a3-mod-ba", 5), ("preproj:A2", 4), ("cyclic:3,3", 9)])
def test_alg_info_dimension(capsys, preset, dim):
    code, out, _ = run(capsys, "alg", "info", preset)
    assert code == EXIT_OK and f"dim {dim}\n" in out


def test_alg_info_reports_projectives(capsys):
    _, out, _ = run(capsys, "alg", "info", "a3-mod-ba")
    assert "P1 (1,1,0)  I1 (1,0,0)" in out
    assert "basis per degree 3 2" in out


def test_alg_info_from_file(capsys, tmp_path):
    code, out, _ = run(capsys, "alg", "info", write_algebra(tmp_path, A3_FILE))
    assert code == EXIT_OK and "dim 5" in out


def test_non_homogeneous_relation_is_an_input_error(capsys, tmp_path):
    data = {
        "vertices": 3,
        "arrows": [{"name": "a", "from": 1, "to": 2}, {"name": "b", "from": 2, "to": 3},
                   {"name": "c", "from": 1, "to": 3}],
        "relations": [[{"coef": "1", "path": ["a", "b"]}, {"coef": "-1", "path": ["c"]}]],
    }
    code, _, err = run(capsys, "alg", "info", write_algebra(tmp_path, data))
    assert code == EXIT_INPUT and "non-homogeneous relation" in err


@pytest.mark.parametrize("text,needle", [
    ('{"vertices": 2, "arrows": [], "relations": [], "extra": 1}', "unknown key(s) extra"),
    ('{"vertices": 2, "arrows": [{"name": "a", "from": 1, "to": 5}], "relations": []}', "$.arrows[0].to"),
    ('{"vertices": 2,\n "arrows": [}', "line 2 column"),
    ('{"vertices": 2, "arrows": [{"name": "a", "from": 1, "to": 2}], "relations": [[{"coef": "x", "path": ["a"]}]]}',
     "$.relations[0][0].coef"),
])
def test_malformed_files_carry_positions(capsys, tmp_path, text, needle):
    code, _, err = run(capsys, "alg", "info", write_algebra(tmp_path, text))
    assert code == EXIT_INPUT and needle in err


def test_unknown_preset_and_missing_file(capsys, tmp_path):
    assert run(capsys, "alg", "info", "no-such-preset")[0] == EXIT_INPUT
    assert run(capsys, "alg", "info", str(tmp_path / "missing.json"))[0] == EXIT_INPUT


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "enumerate")[0] == EXIT_INPUT
    assert run(capsys, "frobnicate")[0] == EXIT_INPUT
    assert run(capsys, "check", "a3", "--suite", "nope")[0] == EXIT_INPUT


def test_algebra_json_round_trip():
    for name in ("a3-mod-ba", "preproj:A3", "cyclic:3,3"):
        a = models.preset(name)
        b = parse_algebra(algebra_to_json(a))
        assert b.dim == a.dim and b.dims_by_degree() == a.dims_by_degree()
    with pytest.raises(FormatError):
        parse_algebra("[]")


# enumerate ------------------------------------------------------------------------------

@pytest.mark.parametrize("preset,count", [("a3-mod-ba", 12), ("preproj:A2", 6), ("cyclic:3,3", 20)])
def test_enumerate_counts(capsys, preset, count):
    code, out, _ = run(capsys, "enumerate", preset)
    assert code == EXIT_OK and out.startswith(f"{count} nodes")


def test_enumerate_truncation(capsys):
    code, out, err = run(capsys, "enumerate", "a3-mod-ba", "--cap", "5")
    assert code == EXIT_TRUNCATED and "truncated at cap 5" in err


def test_enumerate_cap_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("TAUMUTE_CAP", "4")
    assert run(capsys, "enumerate", "a3-mod-ba")[0] == EXIT_TRUNCATED
    monkeypatch.setenv("TAUMUTE_CAP", "many")
    code, _, err = run(capsys, "enumerate", "a3-mod-ba")
    assert code == EXIT_INPUT and "TAUMUTE_CAP" in err


def test_json_round_trip(capsys):
    code, out, _ = run(capsys, "enumerate", "a3-mod-ba", "--format", "json")
    assert code == EXIT_OK
    poset = example_poset("a3-mod-ba")
    again = poset_from_json(out, poset.algebra)
    assert posets_equal(again, poset)
    assert again.edges == poset.edges
    data = json.loads(out)
    assert len(data["nodes"]) == 12 and len(data["edges"]) == 18
    assert poset_to_json(again) == out.rstrip("\n")


def test_dot_output_is_byte_stable(capsys):
    _, first, _ = run(capsys, "enumerate", "a3-mod-ba", "--format", "dot")
    _, second, _ = run(capsys, "enumerate", "a3-mod-ba", "--format", "dot")
    assert first == second
    fresh = subprocess.run([sys.executable, "-m", "taumute.cli", "enumerate", "a3-mod-ba", "--format", "dot"],
                           capture_output=True, check=True)
    assert fresh.stdout == first.encode()
    assert first.startswith('digraph "A3/(ba)" {') and first.count(" -> ") == 18


# mutate ---------------------------------------------------------------------------------

def test_mutate_at_p2(capsys):
    code, out, _ = run(capsys, "mutate", "a3-mod-ba", "--pair", "Lambda", "--slot", "P2")
    assert code == EXIT_OK
    assert "(P1 + P2 + P3) -> (P1 + P3 + S1)  case A" in out
    assert "r = 1" in out


def test_mutate_at_p1_surjective(capsys):
    code, out, _ = run(capsys, "mutate", "a3-mod-ba", "--pair", "Lambda", "--slot", "P1")
    assert code == EXIT_OK
    assert "-> (P2 + P3; P1)  case A" in out and "(surjective)" in out


def test_mutate_support_vertex(capsys):
    code, out, _ = run(capsys, "mutate", "a3-mod-ba", "--pair", "P1+S1;3", "--slot", "3")
    assert code == EXIT_OK
    assert "(P1 + S1; P3) -> (P1 + P3 + S1)  case B" in out
    assert "via dagger: (P3 + S2; P1) -> (S2; P1,P3) over the opposite algebra" in out


def test_mutate_rejects_incomplete_pairs(capsys):
    code, _, err = run(capsys, "mutate", "a3-mod-ba", "--pair", "P1+S1", "--slot", "P1")
    assert code == EXIT_INPUT and "almost-complete" in err
    code, _, err = run(capsys, "mutate", "a3-mod-ba", "--pair", "Lambda", "--slot", "3")
    assert code == EXIT_INPUT
    code, _, err = run(capsys, "mutate", "a3-mod-ba", "--pair", "Lambda", "--slot", "X9")
    assert code == EXIT_INPUT


# check ----------------------------------------------------------------------------------

def test_check_all_passes(capsys):
    code, out, _ = run(capsys, "check", "a3-mod-ba", "--suite", "all")
    assert code == EXIT_OK and "FAIL" not in out
    assert "PASS exchange sequences" in out


def test_check_weyl_suite(capsys):
    code, out, _ = run(capsys, "check", "preproj:A3", "--suite", "mizuno")
    assert code == EXIT_OK and "nodes=24" in out


def test_check_tilting_reports_five(capsys):
    code, out, _ = run(capsys, "check", "a3", "--suite", "tilting")
    assert code == EXIT_OK and "tilting_modules=5" in out


def test_check_cyclic_counts_suite(capsys):
    code, out, _ = run(capsys, "check", "cyclic:3,3", "--suite", "adachi")
    assert code == EXIT_OK and "tau_tilting=10" in out and "strictly_support=10" in out


def test_check_suite_needs_the_right_family(capsys):
    assert run(capsys, "check", "a3", "--suite", "mizuno")[0] == EXIT_INPUT
    assert run(capsys, "check", "a3", "--suite", "adachi")[0] == EXIT_INPUT


def test_check_truncated(capsys):
    code, _, err = run(capsys, "check", "a3", "--cap", "3")
    assert code == EXIT_TRUNCATED and "truncated" in err


# cluster --------------------------------------------------------------------------------

@pytest.mark.parametrize("quiver,line", [("a3", "14 clusters, 9 variables"), ("a2", "5 clusters, 5 variables")])
def test_cluster_counts(capsys, quiver, line):
    code, out, _ = run(capsys, "cluster", quiver)
    assert code == EXIT_OK and out.startswith(line)
    assert "PASS cluster variables are Laurent polynomials" in out


def test_cluster_variables_listed(capsys):
    _, out, _ = run(capsys, "cluster", "a2", "--variables")
    assert "(x2 + 1)/x1" in out


def test_cluster_from_algebra_preset(capsys):
    code, out, _ = run(capsys, "cluster", "a3")
    code2, out2, _ = run(capsys, "cluster", "an:3")
    assert code == code2 == EXIT_OK and out.splitlines()[0] == out2.splitlines()[0]


def test_cluster_kronecker_truncates(capsys):
    code, out, _ = run(capsys, "cluster", "kronecker", "--cap", "50")
    assert code == EXIT_TRUNCATED and "truncated at cap" in out


def test_console_script():
    res = subprocess.run(["taumute", "alg", "info", "a3"], capture_output=True, text=True)
    assert res.returncode == 0 and "dim 6" in res.stdout
