import xml.etree.ElementTree as ET

import numpy as np
import pytest

from poroflow.cli import main
from poroflow.gridio import read_grid, write_grid
from poroflow.phantom import PhantomConfig, generate_phantom


@pytest.fixture
def strain_grid(tmp_path, rng):
    path = tmp_path / "a.grid"
    write_grid(0.01 + 1e-3 * rng.normal(size=(24, 24)), path)
    return path


def test_filter_smoke(tmp_path, strain_grid):
    out = tmp_path / "b.grid"
    meta = tmp_path / "meta.txt"
    assert main(["filter", "--method", "proposed", "--in", str(strain_grid), "--out", str(out),
                 "--emit-meta", str(meta)]) == 0
    assert read_grid(out).shape == (24, 24)
    text = meta.read_text()
    assert "method=proposed" in text and "iterations=" in text


def test_filter_params_file(tmp_path, strain_grid):
    params = tmp_path / "p.cfg"
    params.write_text("max_iters = 2\nrel_change_tol = 0\n")
    meta = tmp_path / "meta.txt"
    assert main(["filter", "--method", "ncdf", "--in", str(strain_grid), "--out", str(tmp_path / "o.grid"),
                 "--params", str(params), "--emit-meta", str(meta)]) == 0
    assert "iterations=2" in meta.read_text()
    params.write_text("bogus = 1\n")
    assert main(["filter", "--method", "ncdf", "--in", str(strain_grid), "--out", str(tmp_path / "o.grid"),
                 "--params", str(params)]) == 1


def test_bad_method_is_usage_error(tmp_path, strain_grid, capsys):
    code = main(["filter", "--method", "bogus", "--in", str(strain_grid), "--out", str(tmp_path / "b.grid")])
    assert code == 2
    err = capsys.readouterr().err
    for m in ("median", "kalman", "ncdf", "proposed"):
        assert m in err


def test_unknown_flag_lists_valid_flags(capsys):
    assert main(["corrupt", "--colour", "red"]) == 2
    err = capsys.readouterr().err
    assert "valid flags" in err and "--snr-db" in err


def test_help_exits_zero(capsys):
    for cmd in ("phantom", "corrupt", "filter", "poro", "metrics", "bench", "plot"):
        assert main([cmd, "--help"]) == 0
    capsys.readouterr()


def test_missing_input_is_runtime_error(tmp_path):
    assert main(["filter", "--method", "median", "--in", str(tmp_path / "nope.grid"),
                 "--out", str(tmp_path / "x.grid")]) == 1


def test_phantom_corrupt_metrics_chain(tmp_path):
    d = tmp_path / "ph"
    cfg = tmp_path / "ph.cfg"
    cfg.write_text("rows=48\ncols=48\ninclusion_radius=9\n")
    assert main(["phantom", "--config", str(cfg), "--time", "36", "--out-dir", str(d), "--format", "text"]) == 0
    ref = generate_phantom(PhantomConfig(rows=48, cols=48, inclusion_radius=9.0), 36.0)
    assert np.array_equal(read_grid(d / "lateral.grid"), ref.lateral)
    assert main(["corrupt", "--in", str(d / "lateral.grid"), "--snr-db", "inf", "--am-sigma", "0",
                 "--out", str(tmp_path / "n.grid"), "--out-am", str(tmp_path / "am.grid")]) == 0
    assert np.array_equal(read_grid(tmp_path / "n.grid"), ref.lateral)
    out = tmp_path / "m.csv"
    assert main(["metrics", "--est", str(tmp_path / "n.grid"), "--truth", str(d / "lateral.grid"),
                 "--inc-mask", str(d / "mask.grid"), "--bg-mask", str(d / "background_mask.grid"),
                 "--out", str(out), "--quantity", "lateral_strain"]) == 0
    header, row = out.read_text().splitlines()
    assert header.startswith("filter,snr_db") and row.split(",")[5] == "0.0"


def test_poro_from_manifest(tmp_path):
    pc = PhantomConfig(rows=48, cols=48, inclusion_radius=9.0)
    lines = []
    for t in (36.0, pc.steady_time):
        st = generate_phantom(pc, t)
        write_grid(st.axial, tmp_path / f"ax{t:g}.grid")
        write_grid(st.lateral, tmp_path / f"lat{t:g}.grid")
        lines.append(f"{t:g}, ax{t:g}.grid, lat{t:g}.grid")
    (tmp_path / "frames.txt").write_text("\n".join(lines) + "\n")
    out = tmp_path / "poro"
    assert main(["poro", "--frames", str(tmp_path / "frames.txt"), "--k-pa", repr(pc.compression_modulus),
                 "--center", "24,24", "--out-dir", str(out)]) == 0
    p = read_grid(out / "pressure_36.grid")
    assert np.allclose(p, generate_phantom(pc, 36.0).pressure_truth, rtol=1e-6, atol=1e-9)
    assert np.all(read_grid(out / f"pressure_{pc.steady_time:g}.grid") == 0.0)
    (tmp_path / "one.txt").write_text(lines[0] + "\n")
    assert main(["poro", "--frames", str(tmp_path / "one.txt"), "--k-pa", "1", "--center", "24,24",
                 "--out-dir", str(out)]) == 1


def test_bench_then_plot(tmp_path, capsys):
    cfg = tmp_path / "bench.cfg"
    cfg.write_text("rows=48\ncols=48\ninclusion_radius=9\ntimes=36\nsnr_db=30,60\nseeds=1..2\n"
                   "methods=median,proposed\n")
    d = tmp_path / "d"
    assert main(["bench", "--config", str(cfg), "--out-dir", str(d), "--quiet"]) == 0
    assert (d / "rows.csv").exists() and (d / "summary.csv").exists() and (d / "run_meta.txt").exists()
    svg = tmp_path / "p.svg"
    assert main(["plot", str(d / "rows.csv"), "--quantity", "pressure", "--metric", "cnre", "--out", str(svg)]) == 0
    root = ET.parse(svg).getroot()
    assert root.tag.endswith("svg")
    assert main(["plot", str(d / "rows.csv"), "--quantity", "pressure", "--metric", "cnre", "--out", str(svg),
                 "--t", "5"]) == 1
    capsys.readouterr()


def test_bench_without_out_dir_is_usage_error(tmp_path, capsys):
    cfg = tmp_path / "bench.cfg"
    cfg.write_text("seeds=1\n")
    assert main(["bench", "--config", str(cfg)]) == 2
