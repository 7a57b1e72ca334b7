import json

import pytest

from cantorlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_cycle(capsys):
    code, out, _ = run(capsys, "gen", "cycle", "16")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "16 2" and len(lines) == 17


def test_gen_ignores_seed_for_torus(capsys):
    a = run(capsys, "gen", "torus", "8", "--seed", "1")[1]
    b = run(capsys, "gen", "torus", "8", "--seed", "7")[1]
    assert a == b


def test_gen_odd_degree_sum(capsys):
    code, _, err = run(capsys, "gen", "random-regular", "3", "101")
    assert code == 2 and "odd" in err


def test_converge_cycles(capsys):
    sources = [f"cycle:{n}" for n in (8, 11, 16)]
    code, out, _ = run(capsys, "converge", *sources, "--k-max", "10")
    rep = json.loads(out)
    assert rep["d_gr"][0][1] == "1/8" and rep["d_gr"][0][2] == "1/8" and rep["d_gr"][1][2] == "1/16"
    assert rep["invocation"]["graphs"] == sources and "version" in rep


def test_converge_identical_and_bs(capsys, tmp_path):
    f = tmp_path / "g.txt"
    main(["gen", "grid", "3", "--out", str(f)])
    rep = json.loads(run(capsys, "converge", str(f), str(f), "--k-max", "3")[1])
    assert rep["d_gr"][0][1] == "0/1" and rep["bs"]["0,1"] == ["0/1"] * 3
    rep = json.loads(run(capsys, "converge", "cycle:4", "path:4", "--k-max", "1")[1])
    assert rep["bs"]["0,1"] == ["1/2"]


def test_converge_needs_two(capsys):
    assert run(capsys, "converge", "cycle:4")[0] == 2


def test_balls(capsys):
    rep = json.loads(run(capsys, "balls", "grid:3", "--radius", "1")[1])
    assert rep["total"] == "1/1" and sorted(rep["profile"]["atoms"].values()) == ["1/9", "4/9", "4/9"]


def test_color(capsys, tmp_path):
    code, _, _ = run(capsys, "color", "grid:8", "--out", str(tmp_path))
    rep = json.loads((tmp_path / "report.json").read_text())
    assert code == 0 and rep["verifier"] == {"accepted": True} and rep["colors_used"] <= 5
    assert len((tmp_path / "colors.txt").read_text().splitlines()) == 64


def test_partition_torus(capsys, tmp_path):
    code, _, _ = run(capsys, "partition", "torus:32", "--radius", "4", "--out", str(tmp_path))
    rep = json.loads((tmp_path / "report.json").read_text())
    assert code == 0 and rep["quality"]["K"] <= 16 and rep["K_bound"] == 16


def test_partition_single_ball(capsys, tmp_path):
    main(["gen", "tree-ball", "3", "2", "--out", str(tmp_path / "b.txt")])
    rep = json.loads(run(capsys, "partition", str(tmp_path / "b.txt"), "--radius", "2")[1])
    assert rep["tiles"] == 1 and rep["quality"]["eps_achieved"] == "0/1"


def test_partition_fractional_slab(capsys, tmp_path):
    code, _, _ = run(capsys, "partition", "path:64", "--radius", "2", "--q", "8", "--strategy", "slab",
                     "--out", str(tmp_path))
    rep = json.loads((tmp_path / "report.json").read_text())
    assert code == 0 and rep["Q"] == 8 and rep["p_achieved"] == "3/4"
    assert sorted(p.name for p in tmp_path.glob("partition_*.txt")) == [f"partition_{i}.txt" for i in range(8)]


def test_partition_tree_eps_fails(capsys):
    code, out, _ = run(capsys, "partition", "tree-ball:3,8", "--eps", "0.1")
    rep = json.loads(out)
    assert code == 3 and rep["failed"] and rep["search"]["success"] is False


def test_mis(capsys):
    rep = json.loads(run(capsys, "mis", "grid:6,6", "--radius", "2")[1])
    assert rep["exact"] == 18 and rep["verifier"]["accepted"]
    rep = json.loads(run(capsys, "mis", "edgeless:5", "--radius", "1")[1])
    assert rep["ratio"] == "1/1" and rep["size"] == 5


def test_spectrum_curves(capsys):
    out = run(capsys, "spectrum", "cycle", "--ns", "8,16,32", "--target", "line")[1]
    vals = [float(l.split(",")[1]) for l in out.splitlines()[1:]]
    assert vals == sorted(vals, reverse=True)
    out = run(capsys, "spectrum", "random-regular:4", "--ns", "64,128", "--target", "tree:4")[1]
    assert all(float(l.split(",")[1]) >= 0.4 for l in out.splitlines()[1:])
    assert run(capsys, "spectrum", "cycle", "--ns", "8")[0] == 2


@pytest.mark.parametrize("argv", [
    ["gen", "random-regular", "4", "64", "--seed", "5"],
    ["converge", "cycle:6", "cycle:7", "--k-max", "4"],
    ["color", "random-regular:4,64"],
    ["partition", "torus:16", "--radius", "2"],
    ["mis", "grid:5,6", "--radius", "1"],
    ["spectrum", "torus", "--ns", "4,8", "--target", "plane"],
])
def test_byte_identical_reruns(argv, tmp_path):
    out = tmp_path / "run"
    outs = []
    for _ in range(2):
        main(argv + ["--out", str(out)])
        outs.append(_snapshot(out))
    assert outs[0] == outs[1]


def _snapshot(path):
    if path.is_file():
        return path.read_bytes()
    return {p.name: p.read_bytes() for p in sorted(path.iterdir())}
