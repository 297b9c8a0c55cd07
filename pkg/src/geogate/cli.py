"""Command-line harness: gate reports, robustness scans, series fits,
trajectory export, and transmon simulations.

Configuration comes from an optional JSON file with sections ``gate``,
``errors``, ``device``, and ``scan``; command-line flags override file
values. All CSV output uses 12 significant digits and '\\n' line endings so
identical configs produce byte-identical files, and every file output gets
a ``<output>.meta.json`` sidecar carrying the config echo, a hash over the
physics-relevant fields, the package version, and a timestamp.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 series-fit deviation
above 5%, 5 resonance-condition failure.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .qcore import gate_fidelity
from .pulses import (
    GateSpec,
    PulseShape,
    Scheme,
    ShapeKind,
    bloch_trajectory,
    build_schedule,
    infidelity_series_coefficient,
    propagate,
    target_unitary,
)
from .noise import ErrorModel, gate_fidelity_open
from .dfs import run_logical_gate
from . import transmon

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_FIT = 4
EXIT_RESONANCE = 5

# named gates: (gamma, theta, phi)
GATES = {
    "H": (math.pi / 2, math.pi / 4, 0.0),
    "S": (math.pi / 4, 0.0, 0.0),
    "T": (math.pi / 8, 0.0, 0.0),
    "CZ": (math.pi, 0.0, 0.0),
}

SCHEMES = {"single-loop": Scheme.SINGLE_LOOP, "corrected": Scheme.CORRECTED}
SHAPES = {"square": ShapeKind.SQUARE, "raised-cosine": ShapeKind.RAISED_COSINE}
AXES = ("eps", "delta", "gamma_ratio")

# closed-form leading infidelity coefficients 1 - F ~ c * eps^order
SERIES_REFERENCE = {
    ("H", "single-loop"): (2, 5 * math.pi**2 / 32),
    ("S", "single-loop"): (2, math.pi**2 / 4),
    ("T", "single-loop"): (2, (math.sqrt(2) + 1) * math.pi**2 / (4 * math.sqrt(2))),
    ("H", "corrected"): (2, math.pi**2 / 32),
    ("S", "corrected"): (4, math.pi**4 / 16),
    ("T", "corrected"): (4, (math.sqrt(2) + 1) * math.pi**4 / (16 * math.sqrt(2))),
}


class UsageError(Exception):
    pass


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def _now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


def _config_hash(physics: dict) -> str:
    blob = json.dumps(physics, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError("config root must be a JSON object")
    return cfg


def _pick(flag, cfg: dict, section: str, key: str, default=None):
    """Flag value if given, else config[section][key], else default."""
    if flag is not None:
        return flag
    return cfg.get(section, {}).get(key, default)


def _gate_spec(name: str, scheme_name: str) -> GateSpec:
    if name not in GATES:
        raise UsageError(f"unknown gate {name!r}; choose from {sorted(GATES)}")
    if scheme_name not in SCHEMES:
        raise UsageError(f"unknown scheme {scheme_name!r}; choose from {sorted(SCHEMES)}")
    gamma, theta, phi = GATES[name]
    return GateSpec(gamma, theta, phi, SCHEMES[scheme_name])


def _shape(shape_name: str, omega_max: float = 1.0) -> PulseShape:
    if shape_name not in SHAPES:
        raise UsageError(f"unknown shape {shape_name!r}; choose from {sorted(SHAPES)}")
    return PulseShape(SHAPES[shape_name], omega_max)


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _write_meta(output_path: str, physics: dict, extra: dict | None = None) -> None:
    meta = {
        "config": physics,
        "config_hash": _config_hash(physics),
        "version": __version__,
        "timestamp": _now(),
    }
    if extra:
        meta.update(extra)
    _write_text(output_path + ".meta.json", json.dumps(meta, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------- gate


def cmd_gate(args, cfg: dict) -> int:
    name = _pick(args.name, cfg, "gate", "name")
    if name is None:
        raise UsageError("gate name required (--name or config gate.name)")
    scheme = _pick(args.scheme, cfg, "gate", "scheme", "corrected")
    shape_name = _pick(args.shape, cfg, "gate", "shape", "square")
    eps = float(_pick(args.eps, cfg, "errors", "eps", 0.0))
    delta = float(_pick(args.delta, cfg, "errors", "delta", 0.0))

    spec = _gate_spec(name, scheme)
    shape = _shape(shape_name)
    sched = build_schedule(spec, shape)
    target = target_unitary(spec)
    U = propagate(sched, eps=eps, delta=delta)
    fid = gate_fidelity(target, U)

    report = {
        "gate": name,
        "scheme": scheme,
        "shape": shape_name,
        "eps": eps,
        "delta": delta,
        "fidelity": fid,
        "target": [[_fmt(z.real), _fmt(z.imag)] for row in target for z in row],
        "schedule": [
            {"area": _fmt(s.area), "phase": _fmt(s.phase), "duration": _fmt(s.duration)}
            for s in sched.segments
        ],
    }
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        _write_text(args.out, text)
        _write_meta(args.out, {"gate": name, "scheme": scheme, "shape": shape_name, "eps": eps, "delta": delta})
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------- scan


def _parse_axis(text: str | None, cfg: dict, key: str):
    """Axis from 'name:min:max:points' or the config scan section."""
    if text is None:
        ax = cfg.get("scan", {}).get(key)
        if ax is None:
            raise UsageError(f"scan axis {key} required (--{key[0]} or config scan.{key})")
        name, lo, hi, pts = ax["name"], ax["min"], ax["max"], ax["points"]
    else:
        parts = text.split(":")
        if len(parts) != 4:
            raise UsageError(f"axis must be name:min:max:points, got {text!r}")
        name, lo, hi, pts = parts[0], float(parts[1]), float(parts[2]), int(parts[3])
    if name not in AXES:
        raise UsageError(f"axis name must be one of {AXES}, got {name!r}")
    lo, hi, pts = float(lo), float(hi), int(pts)
    if pts < 2:
        raise UsageError("axis needs points >= 2")
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise UsageError("axis range must be finite")
    return name, lo, hi, pts


def _scan_point(task) -> tuple[float, float, float]:
    """Fidelity at one grid point; module-level so worker pools can pickle it."""
    (gate, scheme, encoding, shape_name, x_name, x, y_name, y) = task
    spec = _gate_spec(gate, scheme)
    shape = _shape(shape_name)
    vals = {"eps": 0.0, "delta": 0.0, "gamma_ratio": 0.0}
    vals[x_name] = x
    vals[y_name] = y
    gamma = vals["gamma_ratio"] * shape.omega_max
    if encoding == "bare":
        if gamma > 0.0:
            fid = gate_fidelity_open(spec, shape, ErrorModel(vals["eps"], vals["delta"], gamma))
        else:
            sched = build_schedule(spec, shape)
            fid = gate_fidelity(target_unitary(spec), propagate(sched, vals["eps"], vals["delta"]))
    elif encoding == "dfs":
        if gamma > 0.0:
            raise UsageError("dfs encoding supports eps/delta axes only")
        fid = run_logical_gate(spec, ErrorModel(vals["eps"], vals["delta"], 0.0), shape)
    elif encoding == "transmon":
        if vals["delta"] != 0.0:
            raise UsageError("transmon encoding supports eps/gamma_ratio axes only")
        pair = transmon.paper_single_qubit_pair()
        g_eff, _ = transmon.effective_single_logical_coupling(pair)
        err = ErrorModel(vals["eps"], 0.0, vals["gamma_ratio"] * 2.0 * g_eff)
        fid, _series = transmon.run_physical_single_logical_gate(spec, pair, err)
    else:
        raise UsageError(f"unknown encoding {encoding!r}")
    return x, y, fid


def cmd_scan(args, cfg: dict) -> int:
    gate = _pick(args.gate, cfg, "scan", "gate")
    if gate is None:
        raise UsageError("scan gate required")
    scheme = _pick(args.scheme, cfg, "scan", "scheme", "corrected")
    encoding = _pick(args.encoding, cfg, "scan", "encoding", "bare")
    shape_name = _pick(args.shape, cfg, "scan", "shape", "square")
    out = _pick(args.out, cfg, "scan", "output_path")
    if out is None:
        raise UsageError("scan output path required (--out)")
    x_name, x_lo, x_hi, x_pts = _parse_axis(args.x, cfg, "x_axis")
    y_name, y_lo, y_hi, y_pts = _parse_axis(args.y, cfg, "y_axis")
    if x_name == y_name:
        raise UsageError("x and y axes must differ")
    _gate_spec(gate, scheme)  # validate early

    xs = np.linspace(x_lo, x_hi, x_pts)
    ys = np.linspace(y_lo, y_hi, y_pts)
    tasks = [
        (gate, scheme, encoding, shape_name, x_name, float(x), y_name, float(y))
        for x in xs
        for y in ys
    ]
    if args.workers and args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_scan_point, tasks, chunksize=8))
    else:
        rows = [_scan_point(t) for t in tasks]
    rows.sort(key=lambda r: (r[0], r[1]))

    lines = ["x,y,fidelity"]
    lines += [f"{_fmt(x)},{_fmt(y)},{_fmt(f)}" for x, y, f in rows]
    _write_text(out, "\n".join(lines) + "\n")
    physics = {
        "gate": gate, "scheme": scheme, "encoding": encoding, "shape": shape_name,
        "x_axis": {"name": x_name, "min": x_lo, "max": x_hi, "points": x_pts},
        "y_axis": {"name": y_name, "min": y_lo, "max": y_hi, "points": y_pts},
    }
    _write_meta(out, physics, extra={"rows": len(rows)})
    return EXIT_OK


# ---------------------------------------------------------------- series


def cmd_series(args, cfg: dict) -> int:
    gate = _pick(args.gate, cfg, "gate", "name")
    if gate is None:
        raise UsageError("series gate required")
    if gate == "CZ":
        raise UsageError("series fits apply to single-qubit gates H, S, T")
    scheme = _pick(args.scheme, cfg, "gate", "scheme", "corrected")
    shape_name = _pick(args.shape, cfg, "gate", "shape", "square")
    spec = _gate_spec(gate, scheme)
    shape = _shape(shape_name)
    order, reference = SERIES_REFERENCE[(gate, scheme)]

    # the corrected H gate has a genuine cubic correction; fit it at smaller
    # eps so the quadratic coefficient is clean
    kwargs = {}
    if order == 2 and scheme == "corrected":
        kwargs = {"eps_min": 3e-5, "eps_max": 3e-4}
    try:
        coeff, exponent = infidelity_series_coefficient(spec, shape, order, **kwargs)
    except ValueError as exc:
        sys.stderr.write(f"series fit failed: {exc}\n")
        return EXIT_FIT
    deviation = abs(coeff - reference) / reference
    print(f"gate {gate} scheme {scheme}: order {order}")
    print(f"  fitted exponent    {exponent:.4f}")
    print(f"  fitted coefficient {_fmt(coeff)}")
    print(f"  reference value    {_fmt(reference)}")
    print(f"  relative deviation {deviation:.3%}")
    if deviation > 0.05:
        sys.stderr.write("series fit deviates from the reference by more than 5%\n")
        return EXIT_FIT
    return EXIT_OK


# ---------------------------------------------------------------- trajectory


def cmd_trajectory(args, cfg: dict) -> int:
    gate = _pick(args.gate, cfg, "gate", "name")
    if gate is None:
        raise UsageError("trajectory gate required")
    scheme = _pick(args.scheme, cfg, "gate", "scheme", "corrected")
    shape_name = _pick(args.shape, cfg, "gate", "shape", "square")
    eps = float(_pick(args.eps, cfg, "errors", "eps", 0.0))
    if args.out is None:
        raise UsageError("trajectory output path required (--out)")
    spec = _gate_spec(gate, scheme)
    sched = build_schedule(spec, _shape(shape_name))
    # the cyclic state of the loop: +1 eigenstate of n.sigma, whose Bloch
    # path closes exactly when eps = 0
    psi0 = np.array([math.cos(spec.theta / 2), math.sin(spec.theta / 2) * np.exp(1j * spec.phi)])
    traj = bloch_trajectory(sched, psi0, samples=args.samples, eps=eps)
    lines = ["t,x,y,z"]
    lines += [f"{_fmt(t)},{_fmt(x)},{_fmt(y)},{_fmt(z)}" for t, x, y, z in traj]
    _write_text(args.out, "\n".join(lines) + "\n")
    r0 = np.array(traj[0][1:])
    rT = np.array(traj[-1][1:])
    defect = float(np.linalg.norm(rT - r0))
    physics = {"gate": gate, "scheme": scheme, "shape": shape_name, "eps": eps, "samples": args.samples}
    _write_meta(args.out, physics, extra={"closure_defect": defect})
    print(f"closure defect {_fmt(defect)}")
    return EXIT_OK


# ---------------------------------------------------------------- transmon


def _device_pair(dev: dict, kind: str) -> transmon.CoupledPair:
    mhz = 2 * math.pi * 1e6
    base = 2 * math.pi * 5.0e9
    try:
        delta = dev["delta_mhz"] * mhz
        pair = transmon.CoupledPair(
            qubit_a=transmon.TransmonParams(omega=base + delta, alpha=dev["alpha_a_mhz"] * mhz),
            qubit_b=transmon.TransmonParams(omega=base, alpha=dev["alpha_b_mhz"] * mhz),
            g_fixed=dev["g_mhz"] * mhz,
            drive=transmon.ParametricDrive(
                eps_d=dev["beta"] * dev["omega_d_mhz"] * mhz,
                omega_d=dev["omega_d_mhz"] * mhz,
            ),
        )
    except KeyError as exc:
        raise UsageError(f"device config missing field {exc}") from exc
    subspace = transmon.Subspace.SINGLE_EXC if kind == "single" else transmon.Subspace.TWO_EXC_B
    transmon.check_resonance(pair, subspace)  # ResonanceError propagates to main
    return pair


def cmd_transmon(args, cfg: dict) -> int:
    dev = cfg.get("device")
    if dev is None:
        raise UsageError("transmon commands need a config with a device section")
    gamma = dev.get("gamma_khz", 0.0) * 2 * math.pi * 1e3
    err = ErrorModel(0.0, 0.0, gamma)
    pair = _device_pair(dev, args.mode)

    if args.mode == "single":
        name = _pick(args.gate, cfg, "gate", "name", "H")
        if name not in ("H", "S", "T"):
            raise UsageError("transmon single supports gates H, S, T")
        spec = _gate_spec(name, "corrected")
        s2 = 1 / math.sqrt(2)
        psi0 = np.array([1.0, 0.0], dtype=complex) if name == "H" else np.array([s2, s2], dtype=complex)
        fid, series = transmon.run_physical_single_logical_gate(spec, pair, err, psi0)
        label = name
    else:
        fid, series = transmon.run_physical_cz(pair, err)
        label = "CZ"

    report = {"gate": label, "mode": args.mode, "fidelity": fid, "gamma": gamma}
    print(json.dumps(report, indent=2))
    if args.out:
        lines = ["t,F"] + [f"{_fmt(t)},{_fmt(F)}" for t, F in series]
        _write_text(args.out, "\n".join(lines) + "\n")
        _write_meta(args.out, {"mode": args.mode, "gate": label, "device": dev}, extra={"fidelity": fid})
    return EXIT_OK


# ---------------------------------------------------------------- entry


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="geogate", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"geogate {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gate", help="single gate report")
    g.add_argument("--name")
    g.add_argument("--scheme")
    g.add_argument("--shape")
    g.add_argument("--eps", type=float)
    g.add_argument("--delta", type=float)
    g.add_argument("--out")
    g.add_argument("--config")
    g.set_defaults(func=cmd_gate)

    s = sub.add_parser("scan", help="2D robustness scan to CSV")
    s.add_argument("--gate")
    s.add_argument("--scheme")
    s.add_argument("--encoding", choices=["bare", "dfs", "transmon"], default=None)
    s.add_argument("--shape")
    s.add_argument("--x", help="axis as name:min:max:points")
    s.add_argument("--y", help="axis as name:min:max:points")
    s.add_argument("--out")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--config")
    s.set_defaults(func=cmd_scan)

    f = sub.add_parser("series", help="fit the leading infidelity term in eps")
    f.add_argument("--gate")
    f.add_argument("--scheme")
    f.add_argument("--shape")
    f.add_argument("--config")
    f.set_defaults(func=cmd_series)

    t = sub.add_parser("trajectory", help="Bloch trajectory CSV")
    t.add_argument("--gate")
    t.add_argument("--scheme")
    t.add_argument("--shape")
    t.add_argument("--eps", type=float)
    t.add_argument("--samples", type=int, default=600)
    t.add_argument("--out")
    t.add_argument("--config")
    t.set_defaults(func=cmd_trajectory)

    m = sub.add_parser("transmon", help="physical-level transmon simulation")
    m.add_argument("mode", choices=["single", "cz"])
    m.add_argument("--gate")
    m.add_argument("--out")
    m.add_argument("--config", required=True)
    m.set_defaults(func=cmd_transmon)
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(getattr(args, "config", None))
        return args.func(args, cfg)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except transmon.ResonanceError as exc:
        sys.stderr.write(f"resonance error: {exc}\n")
        return EXIT_RESONANCE
    except OSError as exc:
        sys.stderr.write(f"i/o error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
