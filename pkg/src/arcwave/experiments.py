"""Experiment drivers: validated configs in, plot-ready CSV files out.

Each driver mirrors one CLI subcommand. Configuration is a single JSON
document; physical defaults are rho = 1, mu = 1, lambda = 2. Runs are
fully deterministic: identical configs produce byte-identical CSVs
(wall-clock timing columns excepted).
"""

import csv
import json
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import operators as ops
from . import scattering as sc
from .geometry import ChebyshevGrid, ClosedGrid, preset_geometry
from .material import make_material
from .solvers import direct_solve

DEFAULT_MATERIAL = {"lambda": 2.0, "mu": 1.0, "rho": 1.0}


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"config field '{field}': {message}")


def thread_count() -> int:
    """Parallel width for sweep entries, capped by ARCWAVE_THREADS."""
    raw = os.environ.get("ARCWAVE_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def _map_sweep(fn, items):
    workers = thread_count()
    if workers == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# Config handling
# ---------------------------------------------------------------------------

def load_config(path: str) -> dict:
    with open(path) as f:
        return json.load(f)


def _material_of(cfg: dict, omega: float):
    mat = dict(DEFAULT_MATERIAL)
    mat.update(cfg.get("material", {}))
    for key in ("lambda", "mu", "rho"):
        v = mat.get(key)
        if not isinstance(v, (int, float)):
            raise ConfigError(f"material.{key}", f"must be a number, got {v!r}")
    if mat["mu"] <= 0:
        raise ConfigError("material.mu", f"must be positive, got {mat['mu']}")
    if mat["lambda"] + mat["mu"] <= 0:
        raise ConfigError(
            "material.lambda", f"lambda + mu must be positive, got {mat['lambda'] + mat['mu']}"
        )
    if mat["rho"] <= 0:
        raise ConfigError("material.rho", f"must be positive, got {mat['rho']}")
    if not isinstance(omega, (int, float)) or omega <= 0:
        raise ConfigError("omega", f"must be a positive number, got {omega!r}")
    return make_material(lam=mat["lambda"], mu=mat["mu"], rho=mat["rho"], omega=float(omega))


def _geometry_of(cfg: dict):
    geo = cfg.get("geometry", {"name": "flat_strip"})
    name = geo.get("name")
    if not isinstance(name, str):
        raise ConfigError("geometry.name", f"must be a string, got {name!r}")
    try:
        return preset_geometry(name, **geo.get("params", {}))
    except (ValueError, TypeError) as exc:
        raise ConfigError("geometry", str(exc)) from exc


def _omegas_of(cfg: dict):
    omega = cfg.get("omega", 10.0)
    return list(omega) if isinstance(omega, (list, tuple)) else [omega]


def _ns_of(cfg: dict, omegas):
    n = cfg.get("N", 200)
    if isinstance(n, dict):
        per = n.get("per_omega")
        if not isinstance(per, (int, float)) or per <= 0:
            raise ConfigError("N.per_omega", f"must be positive, got {per!r}")
        return [int(round(per * w)) for w in omegas]
    if isinstance(n, (list, tuple)):
        vals = list(n)
    else:
        vals = [n] * len(omegas)
    for v in vals:
        if not isinstance(v, int) or v < 4:
            raise ConfigError("N", f"entries must be integers >= 4, got {v!r}")
    return vals


def _incident_of(cfg: dict, m):
    inc = cfg.get("incident", {"kind": "plane", "angle": 0.0})
    kind = inc.get("kind")
    if kind == "plane":
        angle = inc.get("angle", 0.0)
        if not isinstance(angle, (int, float)):
            raise ConfigError("incident.angle", f"must be a number, got {angle!r}")
        return sc.PlanePWave(m, theta_inc=float(angle))
    if kind == "point":
        z0 = inc.get("z0")
        if not (isinstance(z0, (list, tuple)) and len(z0) == 2):
            raise ConfigError("incident.z0", f"must be a pair [x, y], got {z0!r}")
        return sc.PointSource(m, z0=z0)
    raise ConfigError("incident.kind", f"must be 'plane' or 'point', got {kind!r}")


def _grid_of(geom, n: int):
    if geom.closed:
        return ClosedGrid.build(geom, n if n % 2 == 0 else n + 1)
    return ChebyshevGrid.build(geom, n)


def _formulations_of(cfg: dict, geom):
    default = sc.CLOSED_FORMULATIONS if geom.closed else sc.OPEN_FORMULATIONS
    forms = cfg.get("formulations", cfg.get("formulation", list(default)))
    if isinstance(forms, str):
        forms = [forms]
    for f in forms:
        if f not in default:
            raise ConfigError(
                "formulation", f"{f!r} is not valid for this geometry; choose from {default}"
            )
    return list(forms)


def _gmres_of(cfg: dict):
    g = cfg.get("gmres", {})
    tol = g.get("tol", 1e-8)
    maxiter = g.get("maxiter")
    if not isinstance(tol, (int, float)) or tol <= 0:
        raise ConfigError("gmres.tol", f"must be positive, got {tol!r}")
    if maxiter is not None and (not isinstance(maxiter, int) or maxiter < 1):
        raise ConfigError("gmres.maxiter", f"must be a positive integer or null, got {maxiter!r}")
    return float(tol), maxiter


def _outdir_of(cfg: dict) -> str:
    out = cfg.get("output", {})
    d = out.get("dir", ".")
    os.makedirs(d, exist_ok=True)
    return d


def _write_csv(path: str, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)


def _fmt(x: float) -> str:
    return f"{x:.16e}"


# ---------------------------------------------------------------------------
# Field evaluation helpers
# ---------------------------------------------------------------------------

def _reference_ring(geom, count: int = 64):
    """Deterministic near-field probe: a ring at twice the geometry radius."""
    t = np.linspace(0.0, 2.0 * np.pi, 720) if geom.closed else np.linspace(-1.0, 1.0, 720)
    radius = 2.0 * float(np.max(np.linalg.norm(geom.point(t), axis=-1))) + 1.0
    ang = 2.0 * np.pi * np.arange(count) / count
    return radius * np.stack([np.cos(ang), np.sin(ang)], axis=-1)


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

def run_solve(cfg: dict) -> dict:
    """Single solve: density.csv + report.json, optional field.csv.

    Returns the report dict; ``converged`` False signals exit code 2.
    """
    geom = _geometry_of(cfg)
    omega = _omegas_of(cfg)[0]
    m = _material_of(cfg, omega)
    n = _ns_of(cfg, [omega])[0]
    forms = _formulations_of(cfg, geom)
    if len(forms) != 1:
        raise ConfigError("formulation", "the solve command takes exactly one formulation")
    tol, maxiter = _gmres_of(cfg)
    grid = _grid_of(geom, n)
    incident = _incident_of(cfg, m)
    sol = sc.solve(forms[0], m, grid, incident, tol=tol, maxiter=maxiter)

    outdir = _outdir_of(cfg)
    out = cfg.get("output", {})
    theta = grid.theta if isinstance(grid, ChebyshevGrid) else grid.t
    tparam = grid.t if isinstance(grid, ChebyshevGrid) else np.cos(grid.t)
    rows = [
        (
            j,
            _fmt(theta[j]),
            _fmt(tparam[j]),
            _fmt(grid.points[j, 0]),
            _fmt(grid.points[j, 1]),
            _fmt(sol.density[j, 0].real),
            _fmt(sol.density[j, 0].imag),
            _fmt(sol.density[j, 1].real),
            _fmt(sol.density[j, 1].imag),
        )
        for j in range(grid.n)
    ]
    _write_csv(
        os.path.join(outdir, out.get("density", "density.csv")),
        ["j", "theta", "t", "x1", "x2", "re_a1", "im_a1", "re_a2", "im_a2"],
        rows,
    )

    fg = cfg.get("field_grid")
    if fg is not None:
        xs = np.linspace(fg["xmin"], fg["xmax"], int(fg["nx"]))
        ys = np.linspace(fg["ymin"], fg["ymax"], int(fg["ny"]))
        pts = np.stack(np.meshgrid(xs, ys, indexing="ij"), axis=-1).reshape(-1, 2)
        dmin = 5.0 * sc.arc_length(grid) / grid.n
        dist = np.min(
            np.linalg.norm(pts[:, None, :] - grid.points[None, :, :], axis=-1), axis=1
        )
        pts = pts[dist >= dmin]
        u = sc.near_field_of(sol, pts)
        _write_csv(
            os.path.join(outdir, out.get("field", "field.csv")),
            ["x1", "x2", "re_u1", "im_u1", "re_u2", "im_u2"],
            [
                (
                    _fmt(p[0]),
                    _fmt(p[1]),
                    _fmt(v[0].real),
                    _fmt(v[0].imag),
                    _fmt(v[1].real),
                    _fmt(v[1].imag),
                )
                for p, v in zip(pts, u)
            ],
        )

    report = {
        "formulation": sol.formulation,
        "omega": float(omega),
        "N": int(grid.n),
        "iterations": sol.report.iterations,
        "converged": bool(sol.report.converged),
        "final_residual": float(sol.report.final_residual),
        "wall_seconds": float(sol.report.wall_seconds),
    }
    with open(os.path.join(outdir, out.get("report", "report.json")), "w") as f:
        json.dump(report, f, indent=2)
    return report


# ---------------------------------------------------------------------------
# convergence-table
# ---------------------------------------------------------------------------

def run_convergence_table(cfg: dict) -> list:
    """Near-field self-convergence against a reference at 2 x max(N)."""
    geom = _geometry_of(cfg)
    omegas = _omegas_of(cfg)
    tol, maxiter = _gmres_of(cfg)
    forms = _formulations_of(cfg, geom)
    sweep = cfg.get("N", [100, 150, 200])
    if not isinstance(sweep, (list, tuple)):
        sweep = [sweep]
    for v in sweep:
        if not isinstance(v, int) or v < 4:
            raise ConfigError("N", f"entries must be integers >= 4, got {v!r}")
    probes = _reference_ring(geom)

    rows = []
    for omega in omegas:
        m = _material_of(cfg, omega)
        incident = _incident_of(cfg, m)
        nref = 2 * max(sweep)
        ref_grid = _grid_of(geom, nref)
        refs = {}
        for kind, key in (("dirichlet", "S"), ("neumann", "N")):
            if geom.closed:
                a = ops.assemble_closed(m, ref_grid, key)
            elif kind == "dirichlet":
                a = ops.assemble_Sw(m, ref_grid)
            else:
                a = ops.assemble_Nw_weighted(m, ref_grid, modified=False)
            f = sc.boundary_data(incident, ref_grid, kind).reshape(-1)
            x = direct_solve(a.materialize(), f)
            rep = "single_layer" if kind == "dirichlet" else "double_layer"
            refs[kind] = sc.near_field(ref_grid, x.reshape(-1, 2), rep, probes, m)

        def one(job):
            form, n = job
            grid = _grid_of(geom, n)
            sol = sc.solve(form, m, grid, incident, tol=tol, maxiter=maxiter)
            u = sc.near_field_of(sol, probes)
            ref = refs["dirichlet" if form.startswith("Dir") else "neumann"]
            return float(np.max(np.abs(u - ref)) / np.max(np.abs(ref)))

        jobs = [(form, n) for form in forms for n in sweep]
        errs = _map_sweep(one, jobs)
        rows += [
            (_fmt(omega), n, form, _fmt(err))
            for (form, n), err in zip(jobs, errs)
        ]

    outdir = _outdir_of(cfg)
    path = os.path.join(outdir, cfg.get("output", {}).get("table", "convergence.csv"))
    _write_csv(path, ["omega", "N", "formulation", "error"], rows)
    return rows


# ---------------------------------------------------------------------------
# iterations-table
# ---------------------------------------------------------------------------

def run_iterations_table(cfg: dict) -> list:
    geom = _geometry_of(cfg)
    omegas = _omegas_of(cfg)
    ns = _ns_of(cfg, omegas)
    forms = _formulations_of(cfg, geom)
    tol, maxiter = _gmres_of(cfg)

    rows = []
    for omega, n in zip(omegas, ns):
        m = _material_of(cfg, omega)
        incident = _incident_of(cfg, m)
        grid = _grid_of(geom, n)
        # assemble each distinct operator once per (omega, N); the
        # reported seconds then cover the iteration loop only
        cache = {}

        def op_of(key):
            if key not in cache:
                if geom.closed:
                    which = {"S": "S", "N": "N", "Nt": "Ntilde"}[key]
                    cache[key] = ops.assemble_closed(m, grid, which)
                elif key == "Sw":
                    cache[key] = ops.assemble_Sw(m, grid)
                else:
                    cache[key] = ops.assemble_Nw_weighted(
                        m, grid, modified=key == "Ntw"
                    )
            return cache[key]

        needs = {
            "DirSw": ("Sw",),
            "DirNwSw": ("Nw", "Sw"),
            "DirNtwSw": ("Ntw", "Sw"),
            "NeuNw": ("Nw",),
            "NeuNwSw": ("Nw", "Sw"),
            "DirS": ("S",),
            "DirNS": ("N", "S"),
            "DirNtS": ("Nt", "S"),
            "NeuN": ("N",),
            "NeuNS": ("N", "S"),
        }
        for form in forms:
            sol = sc.solve(
                form, m, grid, incident, tol=tol, maxiter=maxiter,
                operators={k: op_of(k) for k in needs[form]},
            )
            rows.append(
                (
                    _fmt(omega),
                    grid.n,
                    form,
                    sol.report.iterations,
                    _fmt(sol.report.wall_seconds),
                )
            )

    outdir = _outdir_of(cfg)
    path = os.path.join(outdir, cfg.get("output", {}).get("table", "iterations.csv"))
    _write_csv(path, ["omega", "N", "formulation", "iterations", "seconds"], rows)
    return rows


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------

_OPEN_OPS = ("Sw", "Nw", "Ntw", "NwSw", "NtwSw", "S_unweighted", "identity")
_CLOSED_OPS = ("S", "N", "Nt", "NS", "NtS", "identity")


def _spectrum_matrix(cfg: dict, geom, m, grid, name: str) -> np.ndarray:
    if name == "identity":
        return np.eye(2 * grid.n, dtype=complex)
    if geom.closed:
        if name in ("S", "N", "Nt"):
            return ops.assemble_closed(m, grid, "Ntilde" if name == "Nt" else name).materialize()
        if name in ("NS", "NtS"):
            left = ops.assemble_closed(m, grid, "Ntilde" if name == "NtS" else "N")
            right = ops.assemble_closed(m, grid, "S")
            return left.materialize() @ right.materialize()
    else:
        if name == "Sw":
            return ops.assemble_Sw(m, grid).materialize()
        if name == "S_unweighted":
            return ops.assemble_unweighted_single_layer(m, grid).materialize()
        if name in ("Nw", "Ntw"):
            return ops.assemble_Nw_weighted(m, grid, modified=name == "Ntw").materialize()
        if name in ("NwSw", "NtwSw"):
            left = ops.assemble_Nw_weighted(m, grid, modified=name == "NtwSw")
            right = ops.assemble_Sw(m, grid)
            return left.materialize() @ right.materialize()
    valid = _CLOSED_OPS if geom.closed else _OPEN_OPS
    raise ConfigError("operator", f"{name!r} is not valid here; choose from {valid}")


def run_spectrum(cfg: dict) -> dict:
    geom = _geometry_of(cfg)
    omega = _omegas_of(cfg)[0]
    m = _material_of(cfg, omega)
    n = _ns_of(cfg, [omega])[0]
    grid = _grid_of(geom, n)
    name = cfg.get("operator", "NS" if geom.closed else "NwSw")
    mat = _spectrum_matrix(cfg, geom, m, grid, name)
    eig = ops.spectrum(ops.DiscreteOperator(matrix=mat, label=name))

    outdir = _outdir_of(cfg)
    out = cfg.get("output", {})
    _write_csv(
        os.path.join(outdir, out.get("table", "spectrum.csv")),
        ["index", "re", "im"],
        [(i, _fmt(v.real), _fmt(v.imag)) for i, v in enumerate(eig)],
    )
    shift_ns = -0.25 + m.c_lm**2
    shift_nts = -0.25
    meta = {
        "operator": name,
        "omega": float(omega),
        "N": int(grid.n),
        "c_lm": m.c_lm,
        "accumulation_ns": shift_ns,
        "accumulation_nts": shift_nts,
        "share_within_0.05_of_ns": float(np.mean(np.abs(eig - shift_ns) < 0.05)),
        "share_within_0.05_of_nts": float(np.mean(np.abs(eig - shift_nts) < 0.05)),
        "min_abs": float(np.min(np.abs(eig))),
        "max_abs": float(np.max(np.abs(eig))),
    }
    with open(os.path.join(outdir, out.get("report", "spectrum_meta.json")), "w") as f:
        json.dump(meta, f, indent=2)
    return meta


# ---------------------------------------------------------------------------
# strip-limit
# ---------------------------------------------------------------------------

def run_strip_limit(cfg: dict) -> list:
    """Far fields of thin ellipses against the flat strip (a = 0 rows)."""
    a_list = cfg.get("a", [0.2, 0.05, 0.01])
    if not isinstance(a_list, (list, tuple)) or not a_list:
        raise ConfigError("a", f"must be a non-empty list of half-heights, got {a_list!r}")
    for a in a_list:
        if not isinstance(a, (int, float)) or a <= 0:
            raise ConfigError("a", f"half-heights must be positive, got {a!r}")
    omega = _omegas_of(cfg)[0]
    m = _material_of(cfg, omega)
    incident = _incident_of(cfg, m)
    if not isinstance(incident, sc.PlanePWave):
        raise ConfigError("incident.kind", "the strip-limit experiment uses a plane wave")
    tol, maxiter = _gmres_of(cfg)
    n_strip = cfg.get("N", 300)
    n_closed = cfg.get("n_closed", 800)
    if not isinstance(n_closed, int) or n_closed < 8:
        raise ConfigError("n_closed", f"must be an integer >= 8, got {n_closed!r}")

    angles = 2.0 * np.pi * np.arange(360) / 360.0
    directions = np.stack([np.cos(angles), np.sin(angles)], axis=-1)

    def far_rows(a, grid, density):
        ff = sc.far_field(grid, density, m, directions)
        return [
            (_fmt(a), _fmt(np.degrees(ang)), _fmt(abs(up)), _fmt(abs(us)))
            for ang, up, us in zip(angles, ff.up, ff.us)
        ]

    rows = []
    for a in a_list:
        geom = preset_geometry("ellipse", a=float(a))
        grid = ClosedGrid.build(geom, n_closed)
        sol = sc.solve("DirS", m, grid, incident, tol=tol, maxiter=maxiter)
        rows += far_rows(float(a), grid, sol.density)

    geom0 = preset_geometry("flat_strip")
    grid0 = ChebyshevGrid.build(geom0, n_strip if isinstance(n_strip, int) else 300)
    sol0 = sc.solve("DirSw", m, grid0, incident, tol=tol, maxiter=maxiter)
    rows += far_rows(0.0, grid0, sol0.density)

    outdir = _outdir_of(cfg)
    path = os.path.join(outdir, cfg.get("output", {}).get("table", "strip_limit.csv"))
    _write_csv(path, ["a", "angle", "abs_up", "abs_us"], rows)
    return rows
