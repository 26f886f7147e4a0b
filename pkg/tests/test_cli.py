import io

import numpy as np
import pytest

from HistEqualizeTool.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, format_table, main
from HistEqualizeTool.core import GrayImage
from HistEqualizeTool.corpus import build_corpus
from HistEqualizeTool.equalize import he_map, mmbebhe
from utils.io_operations import read_map_file, read_pgm_file, write_pgm_file


def run(argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


@pytest.fixture
def e1_path(tmp_path, e1_image):
    path = tmp_path / "e1.pgm"
    write_pgm_file(e1_image, path)
    return path


def test_threshold_command(e1_path):
    assert run(["threshold", e1_path]) == (EXIT_OK, "threshold=50 smbe=-32\n")


def test_enhance_command(tmp_path, e1_path):
    output = tmp_path / "out.pgm"
    map_path = tmp_path / "out.map"
    hist_path = tmp_path / "hist.csv"
    code, _ = run(["enhance", e1_path, "-o", output, "--emit-map", map_path, "--emit-hist", hist_path])
    assert code == EXIT_OK
    assert read_pgm_file(output).pixels.tolist() == [30, 30, 30, 50, 50, 119, 255, 255]
    assert read_map_file(map_path) == mmbebhe(read_pgm_file(e1_path))
    assert hist_path.read_text().splitlines()[1] == "0,3"


def test_enhance_with_he(tmp_path, e1_path):
    output = tmp_path / "he.pgm"
    map_path = tmp_path / "he.map"
    assert run(["enhance", e1_path, "-o", output, "--method", "he", "--emit-map", map_path])[0] == EXIT_OK
    assert read_pgm_file(output).pixels.tolist() == [96, 96, 96, 159, 159, 191, 255, 255]
    assert read_map_file(map_path) == he_map(read_pgm_file(e1_path))


def test_enhance_constant_image_is_unchanged(tmp_path, constant_image):
    source = tmp_path / "constant.pgm"
    output = tmp_path / "out.pgm"
    write_pgm_file(constant_image, source)
    assert run(["enhance", source, "-o", output])[0] == EXIT_OK
    assert output.read_bytes() == source.read_bytes()


def test_enhance_is_deterministic(tmp_path):
    rng = np.random.default_rng(11)
    source = tmp_path / "noise.pgm"
    write_pgm_file(GrayImage.from_array(rng.integers(0, 256, (24, 32), dtype=np.uint8)), source, binary=False)
    first, second = tmp_path / "a.pgm", tmp_path / "b.pgm"
    run(["enhance", source, "-o", first])
    run(["enhance", source, "-o", second])
    assert first.read_bytes() == second.read_bytes()


def test_apply_reproduces_enhance(tmp_path, e1_path):
    map_path = tmp_path / "e1.map"
    enhanced, applied = tmp_path / "enhanced.pgm", tmp_path / "applied.pgm"
    run(["enhance", e1_path, "-o", enhanced, "--emit-map", map_path])
    assert run(["apply", e1_path, "--map", map_path, "-o", applied])[0] == EXIT_OK
    assert applied.read_bytes() == enhanced.read_bytes()


def test_compare_command(e1_path):
    code, text = run(["compare", e1_path])
    assert code == EXIT_OK
    rows = [line.split() for line in text.splitlines()]
    assert rows == [
        ["method", "output_mean", "ambe"],
        ["HE", "163.375", "88.375"],
        ["MMBEBHE", "102.375", "27.375"],
        ["MMBEBHE-float", "102.375", "27.375"],
        ["identity", "75", "0"],
    ]


def test_compare_emits_side_by_side_histograms(tmp_path, e1_path):
    csv_path = tmp_path / "hist.csv"
    code, _ = run(["compare", e1_path, "--emit-hist", csv_path])
    assert code == EXIT_OK
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "value,input,mmbebhe,mmbebhe_float"
    assert lines[1] == "0,3,0,0"
    assert lines[31] == "30,0,3,3"
    assert lines[256] == "255,0,2,2"
    assert len(lines) == 257


def test_simulate_float_timing_column(e1_path):
    code, text = run(["simulate", e1_path, "--float-timing"])
    assert code == EXIT_OK
    summary = text.split("\n\n")[-1].splitlines()
    assert summary[0].split()[-1] == "float_micros"
    for line in summary[1:]:
        assert float(line.split()[-1]) >= 0


def test_simulate_without_float_timing_is_deterministic(e1_path):
    first, second = run(["simulate", e1_path]), run(["simulate", e1_path])
    assert first == second
    assert "float_micros" not in first[1]


def test_apply_non_ascii_map_fails(tmp_path, e1_path, capsys):
    map_path = tmp_path / "bad.map"
    map_path.write_bytes("0\té\n".encode("utf-8"))
    code, _ = run(["apply", e1_path, "--map", map_path, "-o", tmp_path / "out.pgm"])
    assert code == EXIT_FAILURE
    assert "MalformedMapFile" in capsys.readouterr().err
    assert not (tmp_path / "out.pgm").exists()


def test_simulate_command(tmp_path, e1_path):
    csv_path = tmp_path / "timing.csv"
    code, text = run(["simulate", e1_path, "--csv", csv_path])
    assert code == EXIT_OK
    assert "threshold=50 total_cycles=3110" in text
    assert "reference_micros" in text
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "stage,iterations,cycles,micros"
    assert len(lines) == 8


def test_simulate_clock_option(e1_path):
    code, text = run(["simulate", e1_path, "--clock-mhz", "150"])
    assert code == EXIT_OK
    calc_line = next(line for line in text.splitlines() if line.startswith("CalculateSmbe"))
    assert calc_line.split()[-1] == "5.14"


def test_verify_command_on_corpus_images(tmp_path):
    for name, image in build_corpus():
        path = tmp_path / f"{name}.pgm"
        write_pgm_file(image, path)
        code, text = run(["verify", path])
        assert code == EXIT_OK, name
        assert text.startswith("ok threshold=")


def test_corpus_command(tmp_path):
    csv_path = tmp_path / "corpus.csv"
    code, text = run(["corpus", "--size", 10, "--seed", 2, "--csv", csv_path])
    assert code == EXIT_OK
    assert "images=10" in text
    assert text.splitlines()[1].split()[0] == "constant-7"
    assert len(csv_path.read_text().splitlines()) == 11


def test_unsupported_maxval_fails(tmp_path, capsys):
    path = tmp_path / "deep.pgm"
    path.write_bytes(b"P5\n1 1\n65535\n\x00\x00")
    assert run(["threshold", path])[0] == EXIT_FAILURE
    assert "UnsupportedMaxval" in capsys.readouterr().err


def test_missing_file_fails(tmp_path):
    assert run(["compare", tmp_path / "missing.pgm"])[0] == EXIT_FAILURE


@pytest.mark.parametrize("argv", [
    [],
    ["enhance"],
    ["frobnicate", "x.pgm"],
    ["enhance", "x.pgm", "-o", "y.pgm", "--method", "clahe"],
])
def test_usage_errors(argv, capsys):
    assert run(argv)[0] == EXIT_USAGE
    assert capsys.readouterr().err


def test_non_positive_clock_is_usage_error(e1_path, capsys):
    assert run(["simulate", e1_path, "--clock-mhz", "0"])[0] == EXIT_USAGE
    assert "--clock-mhz" in capsys.readouterr().err


def test_help_exits_ok(capsys):
    assert run(["--help"])[0] == EXIT_OK
    assert "histeq" in capsys.readouterr().out


def test_format_table():
    assert format_table(["a", "bb"], [["ccc", "d"]]) == "a    bb\nccc  d"
