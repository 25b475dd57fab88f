import json
import subprocess
import sys

import pytest

from trustnet.cli import main
from trustnet.netfile import read_network
from trustnet._io import read_csv

NET = """# two recommenders, one object
END u v 0.9
REC v i 0.5
"""

CONFIG = """J = 200
alpha = 0.1
gamma_kind = constant
gamma_params = 1.0
steps = 20000
seed = 5
"""


@pytest.fixture
def files(tmp_path):
    (tmp_path / "in.net").write_text(NET)
    (tmp_path / "sim.cfg").write_text(CONFIG)
    return tmp_path


def test_complete_example(files):
    out = files / "out.net"
    assert main(["complete", "--eta", "0.4", "--epsilon", "0.5", str(files / "in.net"), str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# ")
    assert "REC u i 0.45" in lines
    assert "REC v i 0.5" in lines
    net = read_network(out)
    assert len(net.recommendations.certificates) == 2


def test_complete_path_mode(files):
    out = files / "out.net"
    assert main(["complete", "--mode", "path", "--eta", "0.4", "--epsilon", "0.5",
                 str(files / "in.net"), str(out)]) == 0
    assert "END u v 0.9" in out.read_text().splitlines()


def test_reduce(files):
    out = files / "A.csv"
    assert main(["reduce", "--eta", "0.4", "--epsilon", "0.5", str(files / "in.net"), str(out)]) == 0
    params, header, rows = read_csv(out)
    assert params["policy"] == "sum"
    assert header == ["recommender", "i"]
    assert sorted(rows) == [["u", "0.45"], ["v", "0.5"]]


def test_simulate_and_fit(files):
    prefix = str(files / "run")
    assert main(["simulate", str(files / "sim.cfg"), prefix]) == 0
    params, header, rows = read_csv(prefix + ".csv")
    assert header == ["snapshot_t", "rating", "count"]
    assert params["seed"] == 5 and params["J"] == 200
    final = [r for r in rows if int(r[0]) == 20000]
    assert sum(int(r[2]) for r in final) == 200
    summary = json.loads(open(prefix + ".json").read())
    assert summary["final_t"] == 20000
    assert main(["fit", prefix + ".csv", str(files / "fit.json")]) == 0
    fit = json.loads((files / "fit.json").read_text())
    assert fit["n_tail"] <= 200 and fit["model"] in ("power", "geometric")
    # a short run leaves too thin a tail to fit
    assert main(["simulate", str(files / "sim.cfg"), prefix, "--steps", "300"]) == 0
    assert main(["fit", prefix + ".csv", str(files / "fit.json")]) == 3


def test_simulate_overrides(files):
    prefix = str(files / "run")
    assert main(["simulate", str(files / "sim.cfg"), prefix, "--J", "50", "--steps", "100"]) == 0
    params, _, _ = read_csv(prefix + ".csv")
    assert params["J"] == 50 and params["steps"] == 100


def test_simulate_missing_key(files, capsys):
    (files / "bad.cfg").write_text(CONFIG.replace("gamma_params = 1.0\n", ""))
    assert main(["simulate", str(files / "bad.cfg"), str(files / "x")]) == 1
    assert "gamma_params" in capsys.readouterr().err


def test_simulate_unknown_key(files, capsys):
    (files / "bad.cfg").write_text(CONFIG + "colour = blue\n")
    assert main(["simulate", str(files / "bad.cfg"), str(files / "x")]) == 1
    assert "colour" in capsys.readouterr().err


def test_simulate_bad_value(files):
    (files / "bad.cfg").write_text(CONFIG.replace("alpha = 0.1", "alpha = 2"))
    assert main(["simulate", str(files / "bad.cfg"), str(files / "x")]) == 3
    (files / "bad.cfg").write_text(CONFIG.replace("J = 200", "J = lots"))
    assert main(["simulate", str(files / "bad.cfg"), str(files / "x")]) == 2


def test_simulate_from_sigma(files):
    assert main(["reduce", "--eta", "0.4", "--epsilon", "0.5", str(files / "in.net"),
                 str(files / "A.csv")]) == 0
    (files / "s.cfg").write_text(CONFIG.replace("J = 200", "J = 2") + "init = from-sigma\n")
    assert main(["simulate", str(files / "s.cfg"), str(files / "r")]) == 1
    # a single object cannot carry J = 2 shops
    assert main(["simulate", str(files / "s.cfg"), str(files / "r"), "--matrix", str(files / "A.csv")]) == 3
    (files / "A2.csv").write_text("recommender,i,j\nu,2,1\nv,1,0\n")
    assert main(["simulate", str(files / "s.cfg"), str(files / "r"), "--matrix", str(files / "A2.csv")]) == 0


def test_parse_error(files):
    (files / "bad.net").write_text("REC a b\n")
    assert main(["complete", "--eta", "0.1", "--epsilon", "0.5", str(files / "bad.net"),
                 str(files / "o.net")]) == 2
    assert main(["complete", "--eta", "0.1", "--epsilon", "0.5", str(files / "missing.net"),
                 str(files / "o.net")]) == 2


def test_usage_errors(files):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["complete", str(files / "in.net"), str(files / "o.net")])
    assert info.value.code == 1


def test_numeric_error(files):
    assert main(["complete", "--eta", "1.5", "--epsilon", "0.5", str(files / "in.net"),
                 str(files / "o.net")]) == 3


def test_steady(files):
    prefix = str(files / "st")
    assert main(["steady", prefix, "--alpha", "0.1", "--n-max", "2000"]) == 0
    params, header, rows = read_csv(prefix + ".csv")
    assert header == ["n", "upsilon_recurrence", "upsilon_closed", "asymptote"]
    assert len(rows) == 2000
    assert float(rows[0][1]) == pytest.approx(0.055)
    report = json.loads(open(prefix + ".json").read())
    assert report["exponent"] == pytest.approx(2.2222222, rel=1e-6)
    assert report["max_relative_gap_recurrence_closed"] < 1e-9
    assert report["power_law_applicable"]
    assert main(["steady", prefix, "--alpha", "0.1", "--gamma-kind", "sleeper",
                 "--gamma-params", "5", "--n-max", "20"]) == 0
    assert not json.loads(open(prefix + ".json").read())["power_law_applicable"]


def test_communities(files):
    (files / "A.csv").write_text("recommender,x,y\nu,2,0\nv,0,1\n")
    out = files / "c.json"
    assert main(["communities", str(files / "A.csv"), str(out), "--tau", "2,0",
                 "--personalized", str(files / "P.csv")]) == 0
    rep = json.loads(out.read_text())
    assert rep["eigenvalues"] == pytest.approx([4, 1])
    assert rep["communities"][0]["affinity"] == pytest.approx(4)
    _, header, rows = read_csv(files / "P.csv")
    assert [float(x) for r in rows for x in r[1:]] == pytest.approx([2, 0, 0, 0])
    assert main(["communities", str(files / "A.csv"), str(out), "--tau", "1,2,3"]) == 3


def test_attack(files):
    prefix = str(files / "atk")
    assert main(["attack", prefix, "--n", "2000", "--seeds", "3"]) == 0
    params, header, rows = read_csv(prefix + ".csv")
    assert header == ["strategy", "fraction", "seed", "giant_fraction"]
    assert len(rows) == 2 * 4 * 3
    s = json.loads(open(prefix + ".json").read())
    assert s["random_minus_hubs"][0] == 0


def test_verify_small(files, capsys):
    rc = main(["verify", str(files / "v"), "--J", "300", "--steps", "30000", "--seeds", "2"])
    assert rc in (0, 3)
    assert "verdict" in capsys.readouterr().out
    report = json.loads((files / "v" / "report.json").read_text())
    assert {"mean_exponent", "exponent_error", "verdict"} <= set(report)
    assert (files / "v" / "histograms.csv").exists()


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "trustnet", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip()
