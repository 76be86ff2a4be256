import json

import pytest

from strata.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    out = json.loads(cap.out) if cap.out.strip() else None
    return code, out, cap.err


def test_bound_example(capsys):
    code, out, _ = run(capsys, "bound", "-g", "2", "-R", "1,7", "-s", "-")
    assert code == 0
    assert out["k"] == 2 and out["admissible"] and not out["exceptional"]


def test_bound_exceptional_is_reported(capsys):
    code, out, _ = run(capsys, "bound", "-g", "1", "-R", "1,3", "-s", "-")
    assert code == 0 and out["exceptional"]


def test_bound_closed_orientable_genus_three(capsys):
    # the count formula gives 3, but a closed genus-3 surface has residual 4
    code, out, _ = run(capsys, "bound", "-g", "3", "-R", "", "-s", "+")
    assert out["k"] == 3 and out["euler_residual"] == 4
    assert code == 3 and not out["admissible"]


@pytest.mark.parametrize("argv", [
    ["bound", "-g", "x"],
    ["bound", "-g", "1", "-R", "1,a"],
    ["bound", "-g", "1", "-s", "?"],
    ["nonsense"],
])
def test_parse_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_realize_verify_round_trip(capsys, tmp_path):
    path = tmp_path / "c.json"
    code, out, _ = run(capsys, "realize", "-g", "2", "-R", "3,3,4", "-s", "-", "-o", str(path))
    assert code == 0 and out["optimal"] and out["k"] == 2
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0 and out["ok"]


def test_realize_b3(capsys):
    code, out, _ = run(capsys, "realize", "-g", "0", "-R", "3,1,1,1,1,1")
    assert code == 0 and out["k"] == 2
    assert out["intersections"] == [[2, 0], [2, 2]]


def test_realize_maximal_case(capsys):
    code, out, _ = run(capsys, "realize", "-g", "4", "-R", ",".join(["3"] * 12), "-s", "-")
    assert code == 0 and out["k"] == 9 and out["optimal"]


def test_realize_exceptional_exit(capsys):
    code, out, _ = run(capsys, "realize", "-g", "1", "-R", "1,3", "-s", "-")
    assert code == 3 and out["error"] == "ExceptionalSignature"


def test_realize_writes_figures(capsys, tmp_path):
    svg, dot = tmp_path / "c.svg", tmp_path / "c.dot"
    code, out, _ = run(capsys, "realize", "-g", "0", "-R", "4,1,1,1,1,1,1",
                       "--svg", str(svg), "--dot", str(dot))
    assert code == 0
    assert svg.read_text().startswith("<svg") and "graph" in dot.read_text()


def test_verify_broken_map(capsys, tmp_path):
    path = tmp_path / "c.json"
    run(capsys, "realize", "-g", "0", "-R", "3,1,1,1,1,1", "-o", str(path))
    data = json.loads(path.read_text())
    data["rotation"][0], data["rotation"][1] = data["rotation"][1], data["rotation"][0]
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 4 and not out["ok"] and out["error"]


def test_verify_not_a_configuration(capsys, tmp_path):
    path = tmp_path / "x.json"
    path.write_text('{"hello": 1}')
    assert run(capsys, "verify", str(path))[0] == 2
    path.write_text("not json")
    assert run(capsys, "verify", str(path))[0] == 2


def test_verify_all(capsys, tmp_path):
    for name, R in (("a", "3,1,1,1,1,1"), ("b", "4,1,1,1,1,1,1")):
        run(capsys, "realize", "-g", "0", "-R", R, "-o", str(tmp_path / f"{name}.json"))
    code, out, _ = run(capsys, "verify", "--all", str(tmp_path))
    assert code == 0 and len(out["files"]) == 2


def test_track_of_asset(capsys):
    code, out, _ = run(capsys, "track", "--asset", "fig71")
    assert code == 0
    assert out["bound"] == out["expected_bound"] == 2
    assert out["superbranch_rank"] == 4


def test_track_report(capsys, tmp_path):
    code, out, _ = run(capsys, "track", "--block", "B3", "--report", str(tmp_path))
    assert code == 0 and out["n_odd"] == 6
    assert (tmp_path / "track_regions.csv").read_text().startswith("region,cusps")
    assert any(p.suffix == ".png" for p in tmp_path.iterdir())


def test_track_file_round_trip(capsys, tmp_path):
    path = tmp_path / "t.json"
    assert run(capsys, "export", "--asset", "fig114", "--track", "-o", str(path))[0] == 0
    code, out, _ = run(capsys, "track", str(path), "--dims")
    assert code == 0 and "dim_W" in out


def test_simulate_block_with_report(capsys, tmp_path):
    code, out, _ = run(capsys, "simulate", "--block", "B3", "--steps", "30",
                       "--report", str(tmp_path))
    assert code == 0 and all(out["checks"].values())
    rows = (tmp_path / "simulate_angles.csv").read_text().splitlines()
    assert rows[0] == "step,separation,diameter" and len(rows) == 31
    assert (tmp_path / "simulate_diameter.png").exists()


def test_simulate_experiment_file(capsys, tmp_path):
    exp = {"m": [[1]], "schedule": {"kind": "geometric", "ratio": "1/3"}, "steps": 5}
    path = tmp_path / "e.json"
    path.write_text(json.dumps(exp))
    code, out, _ = run(capsys, "simulate", str(path))
    assert code == 0 and out["k"] == 1 and out["steps"] == 5
    path.write_text(json.dumps({"m": [[1, 1], [0, 1]]}))
    assert run(capsys, "simulate", str(path))[0] == 2


def test_export_formats(capsys, tmp_path):
    for fmt in ("json", "svg", "dot"):
        path = tmp_path / f"b3.{fmt}"
        assert run(capsys, "export", "--block", "B3", "-f", fmt, "-o", str(path))[0] == 0
        assert path.stat().st_size > 0
    assert run(capsys, "export", "--block", "B3", "--track", "-f", "svg")[0] == 2


def test_asset_dir_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("STRATA_ASSET_DIR", str(tmp_path))
    code, out, _ = run(capsys, "assets")
    assert code == 0 and out["assets"] == []


def test_output_is_deterministic(capsys):
    a = run(capsys, "realize", "-g", "2", "-R", "1,3,4,4", "-s", "-")
    b = run(capsys, "realize", "-g", "2", "-R", "4,4,3,1", "-s", "-")
    assert a == b
