import json

import numpy as np
import pytest
from PIL import Image

from psinterp.cli import main
from psinterp.fusion import FusionWeights
from psinterp.imageio import read_image
from psinterp.pipeline import generate_2x

FAST = ["--max-iters", "5"]


@pytest.fixture
def gray_png(tmp_path, camera):
    p = tmp_path / "in.png"
    Image.fromarray(np.round(camera[::8, ::8] * 255).astype(np.uint8)).save(p)
    return p


@pytest.fixture
def rgb_png(tmp_path, rng):
    p = tmp_path / "rgb.png"
    Image.fromarray(rng.integers(0, 256, (32, 32, 3)).astype(np.uint8)).save(p)
    return p


def test_interpolate_deterministic(tmp_path, gray_png, capsys):
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    assert main(["interpolate", str(gray_png), str(a), "--seed", "7", *FAST]) == 0
    assert main(["interpolate", str(gray_png), str(b), "--seed", "7", *FAST]) == 0
    assert a.read_bytes() == b.read_bytes()
    out = capsys.readouterr().out
    assert "channel 0: W = [" in out and "dB" in out and "iterations" in out


def test_interpolate_scale_three(tmp_path, gray_png):
    out = tmp_path / "x3.png"
    assert main(["interpolate", str(gray_png), str(out), "--scale", "3", *FAST]) == 0
    assert Image.open(out).size == (192, 192)


def test_weights_in_zero_is_baseline(tmp_path, gray_png):
    w = tmp_path / "w.json"
    w.write_text(json.dumps({"wavelet": "db2", "channels": [{"weights": [0] * 6}], "seed": 0}))
    out = tmp_path / "z.png"
    assert main(["interpolate", str(gray_png), str(out), "--weights-in", str(w)]) == 0
    expect = generate_2x(read_image(gray_png), FusionWeights.zeros(), "db2")
    np.testing.assert_array_equal(
        np.asarray(Image.open(out)), np.round(expect * 255).astype(np.uint8)
    )


def test_model_json_and_reuse(tmp_path, rgb_png, gray_png):
    w = tmp_path / "w.json"
    assert main(["model", str(rgb_png), "--weights-out", str(w), "--seed", "3", *FAST]) == 0
    doc = json.loads(w.read_text())
    assert doc["wavelet"] == "db2" and doc["seed"] == 3
    assert len(doc["channels"]) == 3
    assert set(doc["channels"][0]) == {"weights", "fitness_db", "iterations"}

    direct, reused = tmp_path / "d.png", tmp_path / "r.png"
    assert main(["interpolate", str(rgb_png), str(direct), "--seed", "3", *FAST]) == 0
    assert main(["interpolate", str(rgb_png), str(reused), "--weights-in", str(w)]) == 0
    assert direct.read_bytes() == reused.read_bytes()

    g = tmp_path / "g.json"
    assert main(["model", str(gray_png), "--weights-out", str(g), *FAST]) == 0
    assert len(json.loads(g.read_text())["channels"]) == 1


def test_benchmark_rows_and_summary(tmp_path, camera):
    d = tmp_path / "ds"
    d.mkdir()
    for name, img in (("a.png", camera[::8, ::8]), ("b.png", camera[::4, ::4][:64, :64])):
        Image.fromarray(np.round(img * 255).astype(np.uint8)).save(d / name)
    report = tmp_path / "rep.csv"
    argv = ["benchmark", str(d), "--report", str(report), "--schemes", "bicubic",
            "--repeats", "2", *FAST]
    assert main(argv) == 0
    lines = report.read_text().splitlines()
    assert len(lines) == 1 + 2 * 2
    psnrs = [float(line.split(",")[5]) for line in lines[1:]]
    summary = (tmp_path / "rep_summary.csv").read_text().splitlines()
    fields = dict(zip(summary[0].split(","), summary[1].split(",")))
    assert float(fields["psnr_mean"]) == pytest.approx(np.mean(psnrs), abs=1e-9)
    assert (tmp_path / "rep_psnr.png").exists() and (tmp_path / "rep_ssim.png").exists()


def test_benchmark_empty_dir(tmp_path, capsys):
    (tmp_path / "empty").mkdir()
    assert main(["benchmark", str(tmp_path / "empty"), "--report", str(tmp_path / "r.csv")]) == 1
    assert "no decodable images" in capsys.readouterr().err


def test_missing_input(tmp_path, capsys):
    assert main(["interpolate", str(tmp_path / "nope.png"), str(tmp_path / "o.png")]) == 1
    assert "error" in capsys.readouterr().err


def test_bad_scale_rejected(tmp_path, gray_png):
    with pytest.raises(SystemExit) as exc:
        main(["interpolate", str(gray_png), str(tmp_path / "o.png"), "--scale", "1"])
    assert exc.value.code != 0
