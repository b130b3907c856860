import json

import pytest

from arcwave.cli import main


def write_config(path, cfg):
    path.write_text(json.dumps(cfg))
    return str(path)


def solve_config(outdir, **overrides):
    cfg = {
        "geometry": {"name": "circle", "params": {"r": 1.0}},
        "material": {"lambda": 2, "mu": 1, "rho": 1},
        "omega": 5,
        "N": 40,
        "formulation": "DirS",
        "incident": {"kind": "point", "z0": [0.0, 0.3]},
        "gmres": {"tol": 1e-10},
        "output": {"dir": str(outdir)},
    }
    cfg.update(overrides)
    return cfg


def test_solve_writes_contract_files(tmp_path):
    cfg = write_config(tmp_path / "c.json", solve_config(tmp_path / "out"))
    assert main(["solve", "--config", cfg]) == 0
    density = (tmp_path / "out" / "density.csv").read_text().splitlines()
    assert density[0] == "j,theta,t,x1,x2,re_a1,im_a1,re_a2,im_a2"
    assert len(density) == 41
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert set(report) == {
        "formulation",
        "omega",
        "N",
        "iterations",
        "converged",
        "final_residual",
        "wall_seconds",
    }
    assert report["converged"] is True


def test_solve_field_grid(tmp_path):
    cfg = solve_config(tmp_path / "out")
    cfg["field_grid"] = {
        "xmin": 2.0,
        "xmax": 3.0,
        "ymin": 2.0,
        "ymax": 3.0,
        "nx": 3,
        "ny": 3,
    }
    path = write_config(tmp_path / "c.json", cfg)
    assert main(["solve", "--config", path]) == 0
    field = (tmp_path / "out" / "field.csv").read_text().splitlines()
    assert field[0] == "x1,x2,re_u1,im_u1,re_u2,im_u2"
    assert len(field) == 10


def test_solve_deterministic_output(tmp_path):
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    p1 = write_config(tmp_path / "c1.json", solve_config(out1))
    p2 = write_config(tmp_path / "c2.json", solve_config(out2))
    assert main(["solve", "--config", p1]) == 0
    assert main(["solve", "--config", p2]) == 0
    assert (out1 / "density.csv").read_bytes() == (out2 / "density.csv").read_bytes()


def test_invalid_material_exits_3(tmp_path, capsys):
    cfg = solve_config(tmp_path / "out", material={"mu": -1})
    path = write_config(tmp_path / "c.json", cfg)
    assert main(["solve", "--config", path]) == 3
    assert "material.mu" in capsys.readouterr().err


def test_invalid_formulation_exits_3(tmp_path, capsys):
    cfg = solve_config(tmp_path / "out", formulation="DirSw")
    path = write_config(tmp_path / "c.json", cfg)
    assert main(["solve", "--config", path]) == 3
    assert "formulation" in capsys.readouterr().err


def test_unparseable_config_exits_3(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["solve", "--config", str(bad)]) == 3
    assert main(["solve", "--config", str(tmp_path / "missing.json")]) == 3


def test_nonconvergence_exits_2_but_writes_report(tmp_path):
    cfg = solve_config(tmp_path / "out", gmres={"tol": 1e-13, "maxiter": 2})
    path = write_config(tmp_path / "c.json", cfg)
    assert main(["solve", "--config", path]) == 2
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["converged"] is False


def test_iterations_table(tmp_path):
    cfg = {
        "geometry": {"name": "flat_strip"},
        "omega": [3, 5],
        "N": {"per_omega": 8},
        "formulations": ["NeuNw", "NeuNwSw"],
        "incident": {"kind": "plane", "angle": 0.0},
        "gmres": {"tol": 1e-5},
        "output": {"dir": str(tmp_path / "out")},
    }
    path = write_config(tmp_path / "c.json", cfg)
    assert main(["iterations-table", "--config", path]) == 0
    lines = (tmp_path / "out" / "iterations.csv").read_text().splitlines()
    assert lines[0] == "omega,N,formulation,iterations,seconds"
    assert len(lines) == 5


def test_spectrum_identity_preset(tmp_path):
    cfg = {
        "geometry": {"name": "circle", "params": {"r": 1.0}},
        "omega": 5,
        "N": 16,
        "operator": "identity",
        "output": {"dir": str(tmp_path / "out")},
    }
    path = write_config(tmp_path / "c.json", cfg)
    assert main(["spectrum", "--config", path]) == 0
    rows = (tmp_path / "out" / "spectrum.csv").read_text().splitlines()
    assert rows[0] == "index,re,im"
    for row in rows[1:]:
        _, re, im = row.split(",")
        assert abs(float(re) - 1.0) < 1e-13
        assert abs(float(im)) < 1e-13
    meta = json.loads((tmp_path / "out" / "spectrum_meta.json").read_text())
    assert meta["min_abs"] == pytest.approx(1.0, abs=1e-13)


def test_convergence_table_columns(tmp_path):
    cfg = {
        "geometry": {"name": "flat_strip"},
        "omega": 3,
        "N": [16, 24],
        "formulations": ["DirSw"],
        "incident": {"kind": "plane", "angle": 0.0},
        "gmres": {"tol": 1e-10},
        "output": {"dir": str(tmp_path / "out")},
    }
    path = write_config(tmp_path / "c.json", cfg)
    assert main(["convergence-table", "--config", path]) == 0
    lines = (tmp_path / "out" / "convergence.csv").read_text().splitlines()
    assert lines[0] == "omega,N,formulation,error"
    assert len(lines) == 3
    errs = [float(l.split(",")[-1]) for l in lines[1:]]
    assert errs[1] < max(errs[0], 1e-12)
