"""Batch front end: flat key=value configs in, CSV data products out.

Four run modes share one config format. spectrum and dos tabulate
transmission and the two LDOS columns on a frequency grid, heatmap tabulates
the segment LDOS over (omega, L), and evolve integrates one trajectory.
Grid cells are keyed by index so parallel execution cannot reorder output,
and every numeric value is written with 17 significant digits so repeated
runs are byte identical.
"""

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import __version__
from .errors import BandEdgeError, ParseError, ValidationError, WgrsimError
from .model import Breaking, LatticeLayout, SystemParams, build_hamiltonian
from .stationary import between_ldos, refined_omega_grid, resonator_ldos, \
    transmission_probability
from .dynamics import RecordSpec, antisym_w1, antisym_w1w2, gaussian_packet, propagate

MODES = ("spectrum", "dos", "heatmap", "evolve")
INITIALS = ("packet", "antisym_w1", "antisym_w1w2")

_FLOAT_KEYS = {
    "omega_c", "xi0", "xi1", "omega_a1", "omega_b1", "omega_a2", "omega_b2",
    "delta", "eta", "omega_min", "omega_max", "sigma", "x0", "k0", "t_final",
}
_INT_KEYS = {"L", "omega_count", "n_side", "samples"}
_BOOL_KEYS = {"adaptive"}
_STR_KEYS = {"mode", "breaking", "initial"}
_LIST_INT_KEYS = {"L_list"}
_LIST_FLOAT_KEYS = {"snapshot_times"}
CONFIG_KEYS = _FLOAT_KEYS | _INT_KEYS | _BOOL_KEYS | _STR_KEYS | _LIST_INT_KEYS | _LIST_FLOAT_KEYS


@dataclass
class RunConfig:
    mode: str
    params: SystemParams
    omega_min: float = None
    omega_max: float = None
    omega_count: int = None
    adaptive: bool = False
    L_list: tuple = ()
    n_side: int = None
    initial: str = None
    sigma: float = None
    x0: float = None
    k0: float = None
    t_final: float = None
    samples: int = 500
    snapshot_times: tuple = ()
    out_prefix: str = "run"
    workers: int = 1


def _convert(key: str, raw: str, lineno: int):
    try:
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _INT_KEYS:
            return int(raw)
        if key in _BOOL_KEYS:
            low = raw.lower()
            if low in ("true", "1", "yes"):
                return True
            if low in ("false", "0", "no"):
                return False
            raise ValueError(raw)
        if key in _LIST_INT_KEYS:
            return tuple(int(p) for p in raw.split(",") if p.strip())
        if key in _LIST_FLOAT_KEYS:
            return tuple(float(p) for p in raw.split(",") if p.strip())
        return raw
    except ValueError as exc:
        raise ParseError(f"line {lineno}: cannot parse value for '{key}': {raw!r}") from exc


def parse_config(text: str) -> RunConfig:
    """Parse and validate one flat key=value document."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ParseError(f"line {lineno}: expected key=value, got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in CONFIG_KEYS:
            raise ParseError(f"line {lineno}: unknown key '{key}'")
        if key in values:
            raise ParseError(f"line {lineno}: duplicate key '{key}'")
        values[key] = _convert(key, raw, lineno)

    mode = values.get("mode")
    if mode is None:
        raise ValidationError("mode is required")
    if mode not in MODES:
        raise ValidationError(f"mode must be one of {MODES}, got '{mode}'")

    missing = [k for k in ("xi1", "omega_a1", "omega_b1", "omega_a2", "omega_b2", "L")
               if k not in values]
    if missing:
        raise ValidationError(f"missing required keys: {', '.join(missing)}")

    breaking_raw = values.get("breaking", "none")
    try:
        breaking = Breaking(breaking_raw)
    except ValueError:
        raise ValidationError(f"breaking must be none, intra or inter, got '{breaking_raw}'")

    params = SystemParams(
        omega_c=values.get("omega_c", 0.0),
        xi0=values.get("xi0", 1.0),
        xi1=values["xi1"],
        omega_a1=values["omega_a1"],
        omega_b1=values["omega_b1"],
        omega_a2=values["omega_a2"],
        omega_b2=values["omega_b2"],
        L=values["L"],
        delta=values.get("delta", 0.0),
        breaking=breaking,
        eta=values.get("eta", 1e-6),
    )

    cfg = RunConfig(
        mode=mode,
        params=params,
        omega_min=values.get("omega_min"),
        omega_max=values.get("omega_max"),
        omega_count=values.get("omega_count"),
        adaptive=values.get("adaptive", False),
        L_list=values.get("L_list", ()),
        n_side=values.get("n_side"),
        initial=values.get("initial"),
        sigma=values.get("sigma"),
        x0=values.get("x0"),
        k0=values.get("k0"),
        t_final=values.get("t_final"),
        samples=values.get("samples", 500),
        snapshot_times=values.get("snapshot_times", ()),
    )
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig):
    p = cfg.params
    if cfg.mode in ("spectrum", "dos", "heatmap"):
        for k in ("omega_min", "omega_max", "omega_count"):
            if getattr(cfg, k) is None:
                raise ValidationError(f"{k} is required for mode {cfg.mode}")
        if cfg.omega_count < 2:
            raise ValidationError(f"omega_count must be at least 2, got {cfg.omega_count}")
        if cfg.omega_min >= cfg.omega_max:
            raise ValidationError("omega_min must be below omega_max")
        half_band = 2.0 * p.xi0 - 1e-9
        for om in (cfg.omega_min, cfg.omega_max):
            if abs(om - p.omega_c) > half_band:
                raise ValidationError(f"grid bound omega={om} is not strictly inside the band")
    if cfg.mode == "heatmap":
        if not cfg.L_list:
            raise ValidationError("L_list is required for mode heatmap")
        if any(L < 0 for L in cfg.L_list):
            raise ValidationError("L_list entries must be non-negative")
    if cfg.mode == "evolve":
        for k in ("n_side", "initial", "t_final"):
            if getattr(cfg, k) is None:
                raise ValidationError(f"{k} is required for mode evolve")
        if cfg.initial not in INITIALS:
            raise ValidationError(f"initial must be one of {INITIALS}, got '{cfg.initial}'")
        if cfg.t_final <= 0:
            raise ValidationError(f"t_final must be positive, got {cfg.t_final}")
        if cfg.samples < 2:
            raise ValidationError(f"samples must be at least 2, got {cfg.samples}")
        if cfg.initial == "packet":
            for k in ("sigma", "x0", "k0"):
                if getattr(cfg, k) is None:
                    raise ValidationError(f"{k} is required for initial 'packet'")
        for t in cfg.snapshot_times:
            if not 0.0 <= t <= cfg.t_final:
                raise ValidationError(f"snapshot time {t} outside [0, {cfg.t_final}]")


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _spectrum_chunk(params: SystemParams, omegas):
    out = []
    for om in omegas:
        out.append((transmission_probability(params, om),
                    resonator_ldos(params, om),
                    between_ldos(params, om)))
    return out


def _heatmap_chunk(params: SystemParams, L_values, omegas):
    # omegas comes last: _parallel_map appends each chunk after the static args
    rows = []
    for om in omegas:
        row = []
        for L in L_values:
            try:
                row.append(between_ldos(replace(params, L=L), om))
            except BandEdgeError:
                row.append(float("nan"))
        rows.append(row)
    return rows


def _parallel_map(fn, static_args, omegas, workers: int):
    """Apply a chunk worker over omega, keyed by chunk index."""
    omegas = np.asarray(omegas, dtype=float)
    if workers <= 1:
        return fn(*static_args, omegas)
    chunks = [c for c in np.array_split(omegas, workers * 4) if c.size]
    results = {}
    with ProcessPoolExecutor(max_workers=workers) as ex:
        futures = {ex.submit(fn, *static_args, chunk): i for i, chunk in enumerate(chunks)}
        for fut, idx in futures.items():
            results[idx] = fut.result()
    merged = []
    for i in range(len(chunks)):
        merged.extend(results[i])
    return merged


def _write_meta(path: str, cfg: RunConfig, written: list):
    p = cfg.params
    lines = [
        f"wgrsim_version = {__version__}",
        f"mode = {cfg.mode}",
        f"omega_c = {_fmt(p.omega_c)}",
        f"xi0 = {_fmt(p.xi0)}",
        f"xi1 = {_fmt(p.xi1)}",
        f"omega_a1 = {_fmt(p.omega_a1)}",
        f"omega_b1 = {_fmt(p.omega_b1)}",
        f"omega_a2 = {_fmt(p.omega_a2)}",
        f"omega_b2 = {_fmt(p.omega_b2)}",
        f"L = {p.L}",
        f"delta = {_fmt(p.delta)}",
        f"breaking = {p.breaking.value}",
        f"eta = {_fmt(p.eta)}",
    ]
    if cfg.mode in ("spectrum", "dos", "heatmap"):
        lines += [
            f"omega_min = {_fmt(cfg.omega_min)}",
            f"omega_max = {_fmt(cfg.omega_max)}",
            f"omega_count = {cfg.omega_count}",
            f"adaptive = {str(cfg.adaptive).lower()}",
        ]
    if cfg.mode == "heatmap":
        lines.append("L_list = " + ",".join(str(L) for L in cfg.L_list))
    if cfg.mode == "evolve":
        lines += [
            f"n_side = {cfg.n_side}",
            f"initial = {cfg.initial}",
            f"t_final = {_fmt(cfg.t_final)}",
            f"samples = {cfg.samples}",
        ]
        if cfg.initial == "packet":
            lines += [f"sigma = {_fmt(cfg.sigma)}", f"x0 = {_fmt(cfg.x0)}", f"k0 = {_fmt(cfg.k0)}"]
        if cfg.snapshot_times:
            lines.append("snapshot_times = " + ",".join(_fmt(t) for t in cfg.snapshot_times))
    _write_text(path, "\n".join(lines) + "\n", written)


def _write_text(path: str, content: str, written: list):
    with open(path, "w", newline="\n") as fh:
        fh.write(content)
    written.append(path)


def _run_spectrum(cfg: RunConfig, written: list):
    if cfg.adaptive:
        grid = refined_omega_grid(cfg.params, cfg.omega_min, cfg.omega_max, cfg.omega_count)
    else:
        grid = np.linspace(cfg.omega_min, cfg.omega_max, cfg.omega_count)
    cells = _parallel_map(_spectrum_chunk, (cfg.params,), grid, cfg.workers)
    rows = ["omega,T,rho_w,rho_between"]
    for om, (T, rw, rb) in zip(grid, cells):
        rows.append(",".join((_fmt(om), _fmt(T), _fmt(rw), _fmt(rb))))
    _write_text(cfg.out_prefix + "_spectrum.csv", "\n".join(rows) + "\n", written)


def _run_heatmap(cfg: RunConfig, written: list):
    if cfg.adaptive:
        grid = refined_omega_grid(cfg.params, cfg.omega_min, cfg.omega_max,
                                  cfg.omega_count, L_values=cfg.L_list)
    else:
        grid = np.linspace(cfg.omega_min, cfg.omega_max, cfg.omega_count)
    rows_data = _parallel_map(_heatmap_chunk, (cfg.params, tuple(cfg.L_list)), grid, cfg.workers)
    header = "omega," + ",".join(str(L) for L in cfg.L_list)
    rows = [header]
    for om, row in zip(grid, rows_data):
        rows.append(",".join([_fmt(om)] + [_fmt(v) for v in row]))
    _write_text(cfg.out_prefix + "_heatmap.csv", "\n".join(rows) + "\n", written)


def _run_evolve(cfg: RunConfig, written: list):
    layout = LatticeLayout(n_side=cfg.n_side, L=cfg.params.L)
    if cfg.initial == "packet":
        state = gaussian_packet(layout, cfg.sigma, cfg.x0, cfg.k0)
    elif cfg.initial == "antisym_w1":
        state = antisym_w1(layout)
    else:
        state = antisym_w1w2(layout)
    H = build_hamiltonian(cfg.params, layout)
    traj = propagate(state, H, cfg.t_final,
                     RecordSpec(samples=cfg.samples, snapshot_times=tuple(cfg.snapshot_times)))

    # the transfer target depends on where the excitation starts
    if cfg.initial == "antisym_w1":
        fid = traj.mode_occ[:, 2] + traj.mode_occ[:, 3]
    else:
        fid = traj.mode_occ.sum(axis=1)

    rows = ["t,left,right,between,occ_a1,occ_b1,occ_a2,occ_b2,fidelity_occ,fidelity_eq35"]
    for i, t in enumerate(traj.times):
        occ = traj.mode_occ[i]
        rows.append(",".join((
            _fmt(t), _fmt(traj.left_prob[i]), _fmt(traj.right_prob[i]),
            _fmt(traj.between_prob[i]),
            _fmt(occ[0]), _fmt(occ[1]), _fmt(occ[2]), _fmt(occ[3]),
            _fmt(fid[i]), _fmt(fid[i] / 4.0),
        )))
    _write_text(cfg.out_prefix + "_traj.csv", "\n".join(rows) + "\n", written)

    for snap in traj.snapshots:
        rows = ["site,re,im"]
        for i, amp in enumerate(snap.amplitudes):
            rows.append(f"{i},{_fmt(amp.real)},{_fmt(amp.imag)}")
        _write_text(f"{cfg.out_prefix}_snapshot_{snap.time:g}.csv", "\n".join(rows) + "\n", written)


def run(cfg: RunConfig) -> int:
    """Execute one validated run; on failure remove partial outputs."""
    written = []
    try:
        if cfg.mode in ("spectrum", "dos"):
            _run_spectrum(cfg, written)
        elif cfg.mode == "heatmap":
            _run_heatmap(cfg, written)
        else:
            _run_evolve(cfg, written)
        _write_meta(cfg.out_prefix + "_meta.txt", cfg, written)
    except Exception as exc:
        for path in written:
            try:
                os.remove(path)
            except OSError:
                pass
        if isinstance(exc, WgrsimError):
            print(f"wgr: error: {exc}", file=sys.stderr)
            return 1
        raise
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="wgr", description="resonator transport batch runner")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in MODES:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out", default=None)
        p.add_argument("--workers", type=int, default=1)
    args = parser.parse_args(argv)

    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"wgr: error: cannot read config: {exc}", file=sys.stderr)
        return 1

    try:
        cfg = parse_config(text)
    except WgrsimError as exc:
        print(f"wgr: error: {exc}", file=sys.stderr)
        return 1

    if cfg.mode != args.command:
        print(f"wgr: error: config mode '{cfg.mode}' does not match "
              f"subcommand '{args.command}'", file=sys.stderr)
        return 1

    if args.workers < 1:
        print("wgr: error: --workers must be at least 1", file=sys.stderr)
        return 1

    out_prefix = args.out
    if out_prefix is None:
        base, _ = os.path.splitext(args.config)
        out_prefix = base
    cfg.out_prefix = out_prefix
    cfg.workers = args.workers
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
