import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kantian_solve import Game, GameFormatError, io
from kantian_solve.cli import main

from conftest import DATA, load_game

PD = {"players": 2, "actions": [["C", "D"], ["C", "D"]],
      "payoffs": [{"profile": ["C", "C"], "u": [2, 2]}, {"profile": ["C", "D"], "u": [0, 3]},
                  {"profile": ["D", "C"], "u": [3, 0]}, {"profile": ["D", "D"], "u": [1, 1]}]}


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), (json.loads(err) if err else None)


def test_parse_pd():
    g = io.parse_game(json.dumps(PD))
    assert g.utility(g.profile_from_names(["D", "C"])).tolist() == [3, 0]


@pytest.mark.parametrize("mutate,fragment", [
    (lambda d: d["payoffs"].pop(), "['D', 'D']"),
    (lambda d: d["payoffs"].append({"profile": ["C", "C"], "u": [1, 1]}), "duplicate"),
    (lambda d: d["payoffs"][0].update(profile=["C", "X"]), "unknown action 'X'"),
    (lambda d: d["payoffs"][1].update(u=[1]), "game.payoffs[1].u"),
    (lambda d: d["payoffs"][1].update(u=["1", 2]), "finite numbers"),
    (lambda d: d.pop("actions"), "missing key 'actions'"),
    (lambda d: d.update(players=0), "positive integer"),
    (lambda d: d["actions"][0].append("C"), "duplicate action"),
])
def test_parse_errors_name_the_problem(mutate, fragment):
    doc = json.loads(json.dumps(PD))
    mutate(doc)
    with pytest.raises(GameFormatError) as exc:
        io.parse_game(json.dumps(doc))
    assert fragment in str(exc.value)


def test_malformed_json_reports_location():
    with pytest.raises(GameFormatError, match="line 1 column"):
        io.parse_game('{"players": 2,')


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_round_trip_is_exact(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4))
    shape = tuple(int(k) for k in rng.integers(1, 4, n))
    payoffs = rng.normal(scale=10 ** rng.uniform(-5, 5), size=shape + (n,))
    g = Game(tuple(tuple(f"x{i}{k}" for k in range(m)) for i, m in enumerate(shape)), payoffs)
    h = io.parse_game(io.serialize_game(g))
    assert h.actions == g.actions
    assert np.array_equal(h.payoffs, g.payoffs)


def test_fixture_round_trip():
    for path in DATA.glob("*.json"):
        doc = json.loads(path.read_text())
        if isinstance(doc, dict) and "payoffs" in doc:
            g = load_game(path.name)
            assert np.array_equal(io.parse_game(io.serialize_game(g)).payoffs, g.payoffs)


def test_nonfinite_values_are_strings():
    assert json.loads(io.dumps({"a": float("inf"), "b": np.float64("nan"), "c": np.arange(2)})) == \
        {"a": "inf", "b": "nan", "c": [0, 1]}


def test_distribution_parse_errors():
    g = load_game("pd.json")
    with pytest.raises(GameFormatError):
        io.parse_distribution(g, '[{"profile": ["C", "C"], "p": 0.4}]')
    with pytest.raises(GameFormatError):
        io.parse_distribution(g, '[{"profile": ["C", "Z"], "p": 1}]')


# -- command line --------------------------------------------------------------

def test_cli_pareto(capsys):
    code, out, _ = run(capsys, "pareto", "-g", DATA / "pd.json")
    assert code == 0 and out["size"] == 3 and ["D", "D"] not in out["profiles"]


def test_cli_kantian_pure(capsys):
    code, out, _ = run(capsys, "kantian-pure", "-g", DATA / "pd.json")
    assert code == 0 and out["equilibria"] == [["C", "C"]] and out["payoffs"] == [[2, 2]]
    code, out, _ = run(capsys, "kantian-pure", "-g", DATA / "pd.json", "--family", DATA / "swap_family.json")
    assert code == 0 and out["family"] == "swap" and out["equilibria"] == [["C", "C"]]


def test_cli_kantian_mixed(capsys):
    code, out, _ = run(capsys, "kantian-mixed", "-g", DATA / "multiple_kantian.json")
    assert code == 0 and out["value"] == pytest.approx(5.0) and out["method"] == "support_enumeration"
    code, a, _ = run(capsys, "kantian-mixed", "-g", DATA / "multiple_kantian.json", "--method", "replicator",
                     "--seed", 4, "--restarts", 3, "--iters", 300)
    _, b, _ = run(capsys, "kantian-mixed", "-g", DATA / "multiple_kantian.json", "--method", "replicator",
                  "--seed", 4, "--restarts", 3, "--iters", 300)
    assert code == 0 and a == b
    code, _, err = run(capsys, "kantian-mixed", "-g", DATA / "roemer_bos.json")
    assert code == 3 and "error" in err


def test_cli_pom(capsys):
    code, out, _ = run(capsys, "pom", "-g", DATA / "multiple_kantian.json")
    assert code == 0 and out["price"] == pytest.approx(5.0) and out["kantian_actions"] == ["C", "E"]
    code, _, err = run(capsys, "pom", "-g", DATA / "percentile_bos.json")
    assert code == 3 and err["exit_code"] == 3


def test_cli_welfare(capsys):
    code, out, _ = run(capsys, "welfare", "-g", DATA / "music_lover_bos.json", "--kind", "rawlsian")
    assert code == 0 and out["concept"] == "rawlsian"
    assert out["support"] == [["S", "S"]] and out["expected_utilities"] == [3, 2]
    code, out, _ = run(capsys, "welfare", "-g", DATA / "percentile_bos.json", "--kind", "percentile")
    assert out["concept"] == "rawlsian_percentile" and out["percentiles"] == [[0, 100], [100, 0]]
    code, out, _ = run(capsys, "welfare", "-g", DATA / "aspiration_coordination.json", "--kind", "aspiration")
    assert out["natural_expectation_point"] == [8.5, 2.5] and out["stage1_value"] == pytest.approx(0.5)


def test_cli_greed_and_nash(capsys):
    code, out, _ = run(capsys, "greed", "-g", DATA / "pd.json", "--lambda", "1.25,2")
    assert code == 0 and out["pure_nash"] == [["D", "C"]] and out["greed_indices"] == [4.0, 1.0]
    code, out, _ = run(capsys, "greed", "-g", DATA / "pd.json", "--lambda", "inf,inf")
    assert out["greed_indices"] == [0.0, 0.0] and out["lambdas"] == ["inf", "inf"]
    code, _, _ = run(capsys, "greed", "-g", DATA / "pd.json", "--lambda", "2,abc")
    assert code == 2
    code, out, _ = run(capsys, "nash", "-g", DATA / "pd.json")
    assert code == 0 and out["equilibria"] == [["D", "D"]]


def test_cli_platonia(capsys):
    code, out, _ = run(capsys, "platonia", "--n", 20)
    assert code == 0 and out["p"] == 0.05 and out["expected_payoff"] == pytest.approx(0.0188677, abs=1e-7)
    code, _, _ = run(capsys, "platonia", "--n", 0)
    assert code == 3


def test_cli_protocols(capsys):
    code, out, _ = run(capsys, "protocol", "--name", "bos", "-g", DATA / "roemer_bos.json",
                       "--seed", 1, "--trials", 1000)
    assert code == 0 and out["exact_utilities"] == [2.5, 2.5] and out["trials"] == 1000
    code, out, _ = run(capsys, "protocol", "--name", "anticoord", "-g", DATA / "anticoordination.json")
    assert code == 0 and out["empirical_means"] is None
    code, out, _ = run(capsys, "protocol", "--name", "choose-winner", "--n", 5, "--trials", 2000)
    assert code == 0 and out["exactly_one_submitter"] is True
    code, _, _ = run(capsys, "protocol", "--name", "choose-winner")
    assert code == 2
    code, _, _ = run(capsys, "protocol", "--name", "bos")
    assert code == 2


def test_cli_verify(capsys):
    code, out, _ = run(capsys, "verify", "-g", DATA / "pd.json", "--dist", DATA / "pd_split.json")
    assert code == 0 and not out["undominated"] and out["witness"] == [{"profile": ["C", "C"], "p": 1.0}]
    code, out, _ = run(capsys, "verify", "-g", DATA / "pd.json", "--dist", DATA / "pd_dd.json")
    assert not out["supported_on_pareto"] and out["off_pareto_profiles"] == [["D", "D"]]
    code, out, _ = run(capsys, "verify", "-g", DATA / "pd.json", "--dist", DATA / "pd_cc.json")
    assert out["supported_on_pareto"] and out["undominated"] and out["common_program"] == "unchecked"


@pytest.mark.parametrize("graph,omega", [("c5.json", 2), ("k4.json", 4), ("petersen.json", 2)])
def test_cli_clique_demo(capsys, graph, omega):
    code, out, _ = run(capsys, "clique-demo", "--graph", DATA / graph)
    assert code == 0 and out["bruteforce_clique_size"] == omega and out["agree"]
    assert out["quadratic_optimum"] == pytest.approx(1 - 1 / omega, abs=1e-9)


def test_cli_errors(capsys, tmp_path):
    code, _, err = run(capsys, "pareto", "-g", tmp_path / "missing.json")
    assert code == 2 and "not found" in err["error"]
    bad = tmp_path / "bad.json"
    bad.write_text('{"players": 2}')
    code, _, err = run(capsys, "pareto", "-g", bad)
    assert code == 2 and "missing key" in err["error"]
    code, _, _ = run(capsys, "no-such-command")
    assert code == 2
    code, _, _ = run(capsys, "welfare", "-g", DATA / "pd.json", "--kind", "nonsense")
    assert code == 2


def test_cli_profile_cap(capsys, monkeypatch):
    monkeypatch.setenv("KANTIAN_SOLVE_MAX_PROFILES", "3")
    code, _, err = run(capsys, "pareto", "-g", DATA / "pd.json")
    assert code == 3 and "KANTIAN_SOLVE_MAX_PROFILES" in err["error"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kantian_solve", "nash", "-g", str(DATA / "pd.json")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["equilibria"] == [["D", "D"]]
