import json

import pytest

from tilingspectra import __version__
from tilingspectra.cli import main, parse_grid, parse_levels


def run(tmp_path, *args):
    return main([*args, "--out", str(tmp_path)])


def test_parse_levels():
    assert parse_levels("5") == [5]
    assert parse_levels("2-4") == [2, 3, 4]
    assert parse_levels("6,2,3-4") == [2, 3, 4, 6]


def test_parse_grid():
    assert parse_grid("0:8:4001") == (0.0, 8.0, 4001)


def test_generate_writes_patch_and_svg(tmp_path, capsys):
    assert run(tmp_path, "generate", "BoatStar", "2", "--svg") == 0
    doc = json.loads((tmp_path / "BoatStar_L2.json").read_text())
    assert len(doc["tiles"]) == 86
    assert (tmp_path / "BoatStar_L2.svg").read_text().startswith("<svg")
    assert "86 tiles" in capsys.readouterr().out


def test_generate_alias_and_flags(tmp_path):
    assert run(tmp_path, "generate", "--family", "AB", "--level", "0", "--svg") == 0
    svg = (tmp_path / "AmmannBeenker_L0.svg").read_text()
    assert svg.count("<polygon") == 8


def test_outputs_are_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["spectrum", "Triangle", "3", "--grid", "0:8:81", "--out", str(out)]) == 0
        assert main(["generate", "Triangle", "2", "--svg", "--out", str(out)]) == 0
    for name in ("Triangle_L3_eigenvalues.csv", "Triangle_L3_inertia.csv", "Triangle_L2.json", "Triangle_L2.svg"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_spectrum_csv(tmp_path):
    assert run(tmp_path, "spectrum", "Triangle", "5", "--grid", "0:8:4001") == 0
    lines = (tmp_path / "Triangle_L5_inertia.csv").read_text().splitlines()
    assert lines[0] == f"# family=Triangle level=5 tiles=1440 version={__version__}"
    assert lines[1] == "E,countBelow"
    counts = [int(x.split(",")[1]) for x in lines[2:]]
    assert counts == sorted(counts) and counts[-1] == 1440


def test_spectrum_above_dense_threshold_needs_grid(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run(tmp_path, "spectrum", "Triangle", "3", "--dense-threshold", "10")
    assert exc.value.code == 2


def test_ids_and_jumps(tmp_path, capsys):
    assert run(tmp_path, "ids", "Rhombus", "--levels", "3-4", "--energy", "6", "--grid=-1:13:141", "--workers", "2") == 0
    out = capsys.readouterr().out
    assert "5/290" in out
    csv = (tmp_path / "Rhombus_jumps_E6.csv").read_text().splitlines()
    assert csv[1] == "level,tiles,mult,jump,bound"
    ids = (tmp_path / "Rhombus_L4_ids.csv").read_text().splitlines()
    assert ids[2].startswith("-1,0")
    assert (tmp_path / "Rhombus_ids.svg").exists()


def test_modes(tmp_path, capsys):
    assert run(tmp_path, "modes", "Triangle", "5", "--energy", "E=2") == 0
    doc = json.loads((tmp_path / "Triangle_L5_E2_modes.json").read_text())
    assert (doc["totalDim"], doc["interiorCount"], doc["boundaryCount"]) == (15, 10, 5)
    assert doc["tiles"] == 1440
    assert run(tmp_path, "modes", "BoatStar", "1", "--energy", "4") == 0
    assert "0 modes" in capsys.readouterr().out


def test_census(tmp_path):
    assert run(tmp_path, "census", "Triangle", "--levels", "0-3") == 0
    lines = (tmp_path / "Triangle_census.csv").read_text().splitlines()
    assert lines[1] == "level,acute+,obtuse-,acute-,obtuse+,total,predicted"
    assert lines[-1].endswith(",210,210")


def test_occurrences(tmp_path, capsys):
    assert run(tmp_path, "occurrences", "BoatStar", "3") == 0
    assert capsys.readouterr().out.startswith("5 copies")
    assert run(tmp_path, "occurrences", "AB", "2", "--pattern", "star") == 0


def test_gaps(tmp_path):
    assert run(tmp_path, "gaps", "Triangle", "--levels", "3-4", "--grid", "0:8:401", "--min-width", "0.05") == 0
    rows = (tmp_path / "Triangle_gaps.csv").read_text().splitlines()
    assert rows[1] == "lo,hi,width" and len(rows) > 3


def test_verify_counts_suite(tmp_path, capsys):
    assert run(tmp_path, "verify", "--suite", "counts") == 0
    doc = json.loads((tmp_path / "verify_counts.json").read_text())
    assert [c["criterion"] for c in doc["checks"]] == [1, 2, 3]
    assert all(c["passed"] for c in doc["checks"])
    assert capsys.readouterr().out.count("PASS") == 3


@pytest.mark.parametrize(
    "args",
    [
        ["generate"],
        ["generate", "Hexagon", "1"],
        ["spectrum", "Triangle"],
        ["ids", "Triangle", "--levels", "x"],
        ["spectrum", "Triangle", "2", "--grid", "8:0:10"],
        ["modes", "Triangle", "2"],
        ["modes", "Triangle", "2", "--energy", "2+sqrt2+phi"],
        ["verify", "--suite", "nope"],
        ["frobnicate"],
        ["generate", "Triangle", "1", "--workers", "0"],
    ],
)
def test_usage_errors_exit_2(tmp_path, args):
    with pytest.raises(SystemExit) as exc:
        run(tmp_path, *args)
    assert exc.value.code == 2


def test_runtime_failure_exits_1(tmp_path):
    assert run(tmp_path, "modes", "Triangle", "5", "--energy", "2", "--exact-threshold", "100") == 1
