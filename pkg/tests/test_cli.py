import json
import subprocess
import sys

import pytest

from voapart.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_partition_csv(capsys):
    code, out, _ = run(capsys, "partition", "--model", "heisenberg:1", "--genus", "1", "--trunc", "2",
                       "--points", "builtin:g1a", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["n1,num,den", "0,1,1", "1,-1,4", "2,1,4"]


def test_partition_json_has_provenance(capsys):
    code, out, _ = run(capsys, "partition", "--model", "heisenberg:1", "--genus", "2", "--trunc", "2",
                       "--points", "13,7,3,1")
    obj = json.loads(out)
    prov = obj["provenance"]
    assert code == 0 and prov["model"] == "heisenberg:1" and prov["truncation"] == 2
    assert prov["points"] == ["13", "7", "3", "1"] and "version" in prov
    assert obj["series"]["terms"][0] == {"exp": [0, 0], "num": "1", "den": "1"}


def test_separating_variant(capsys):
    code, out, _ = run(capsys, "partition", "--model", "heisenberg:1", "--genus", "2", "--trunc", "2",
                       "--points", "builtin:g2a", "--variant", "sep:1,2,3/2,1", "--out", "csv")
    assert code == 0 and out.splitlines()[0] == "n1,n2,n3,num,den"


def test_theta(capsys):
    code, out, _ = run(capsys, "theta", "--lattice", "E8", "--trunc", "3")
    assert json.loads(out)["coefficients"] == ["1", "240", "2160", "6720"]


def test_compare(capsys):
    code, out, _ = run(capsys, "compare", "--a", "lattice:D16plus", "--b", "tensor:lattice:E8,lattice:E8",
                       "--genus", "1", "--trunc", "4")
    assert code == 0 and json.loads(out)["result"] == "equal"


def test_oracle_and_pv(capsys):
    code, out, _ = run(capsys, "oracle", "--model", "heisenberg:1", "--trunc", "2", "--format", "csv")
    assert out.splitlines()[1:] == ["0,1,1", "1,-1,4", "2,1,4"]
    code, out, _ = run(capsys, "pv", "--model", "heisenberg:1", "--cutoff", "3", "--format", "csv")
    assert out.splitlines() == ["weight,dim_PV,dim_V", "0,1,1", "1,0,1", "2,1,2", "3,1,3"]


def test_correlate(capsys):
    code, out, _ = run(capsys, "correlate", "--model", "heisenberg:1", "h[1,-1]@3", "h[1,-1]@1", "--check")
    obj = json.loads(out)
    assert code == 0 and obj["value"] == obj["oracle"] == "1/4"
    code, out, _ = run(capsys, "correlate", "--model", "lattice:A1", "e^[1]@3", "e^[-1]@1")
    assert json.loads(out)["value"] == "-1/4"


def test_schottky(capsys):
    code, out, _ = run(capsys, "schottky", "convert", '{"w": 4, "z": -2, "q": -8}')
    obj = json.loads(out)
    assert (obj["W"], obj["Z"], obj["mu"]) == ("2", "0", "1/2")
    code, out, _ = run(capsys, "schottky", "convert", '{"W": 2, "Z": 0, "mu": "1/2"}')
    assert (json.loads(out)["w"], json.loads(out)["q"]) == ("4", "-8")
    code, out, _ = run(capsys, "schottky", "check-ur", '{"handles": [[3, 1, "1/100"]], "r": "9/10"}')
    assert json.loads(out)["inside"] is True
    code, out, _ = run(capsys, "schottky", "plumb", '{"handles": [[4, -2, -8]], "samples": [0, "inf", "1+i"]}')
    assert json.loads(out)["plumbing"] is True


@pytest.mark.parametrize("argv, code", [
    (["nonsense"], 2),
    (["partition", "--model", "heisenberg:1", "--genus", "1", "--trunc", "2", "--points", "1,3"], 4),
    (["partition", "--model", "lattice:E8", "--genus", "1", "--trunc", "3", "--points", "builtin:g1a",
      "--budget", "10"], 3),
    (["partition", "--model", "heisenberg:1", "--genus", "2", "--trunc", "2", "--points", "builtin:g1a"], 2),
    (["schottky", "convert", '{"W": 2, "Z": 0, "mu": 1}'], 4),
    (["correlate", "--model", "heisenberg:1", "h[1,-1]"], 2),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_worker_count_does_not_change_output(capsys, tmp_path):
    outs = []
    for w in ("1", "4"):
        path = tmp_path / f"z{w}.json"
        main(["partition", "--model", "heisenberg:1", "--genus", "2", "--trunc", "3",
              "--points", "builtin:g2a", "--workers", w, "--out", str(path)])
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "voapart.cli", "theta", "--lattice", "A1", "--trunc", "2",
                          "--format", "csv"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.splitlines() == ["n,count", "0,1", "1,2", "2,0"]
