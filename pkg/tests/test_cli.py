import json
import subprocess
import sys

import pytest

from narep.cli import main


def run(*args):
    return subprocess.run([sys.executable, "-m", "narep", *args], capture_output=True, text=True)


def test_bounds_json(capsys):
    assert main(["bounds", "--g", "12", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert 1.1e72 < data[0]["t_bound"] < 1.25e72


def test_bounds_markdown(capsys):
    assert main(["bounds"]) == 0
    assert "log^12 g" in capsys.readouterr().out


def test_search_markdown_g4(capsys):
    assert main(["search", "--g", "4", "--k-max", "20", "--format", "markdown"]) == 0
    rows = capsys.readouterr().out.splitlines()[2:]
    assert [r.split("|")[1].strip() for r in rows] == ["1,2,3", "4", "5", "6", "7", "8", "13", "16"]


def test_search_csv(capsys):
    assert main(["search", "--g", "6", "--k-max", "16", "--t-max", "6", "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("g,k,N,factors,rendered") and "[1,1,1,333]_6" in out


def test_oracle(capsys):
    assert main(["oracle", "--g", "3", "--k-max", "20", "--t-max", "5"]) == 0
    assert "agree" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["bounds", "--g", "13"],
        ["search", "--k-max", "0"],
        ["search", "--g", "2", "--g", "5"],
        ["reduce", "--all", "--g", "3"],
        ["reduce", "--caps", "5", "4", "3"],
        ["verify", "table9"],
        ["bounds", "--precision", "10"],
        [],
    ],
)
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as e:
        main(argv)
    assert e.value.code == 2


def test_inconclusive_exit_code():
    p = run("reduce", "--g", "2", "--window", "1", "--max-window", "1", "--policy", "first")
    assert p.returncode == 3
    assert "inconclusive" in p.stderr


def test_reduce_single_base_csv(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["reduce", "--g", "12", "--format", "csv", "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "step,variable,g,q_index,epsilon,bound,published_bound"
    assert len(lines) == 5
    assert all(int(l.split(",")[5]) <= int(l.split(",")[6]) + 5 for l in lines[1:])
