"""Command-line pipeline: signal generation, splitting, bounded solutions,
simulation, detection, and one-command reproduction of the showcase systems.

Exit codes: 0 success, 2 invalid configuration (the message names the
violated module precondition), 3 numerical failure (non-hyperbolic matrix,
stability guard), 4 signal/detection domain shortfall.

Forcing mini-language: components separated by ';', terms within a component
separated by '+' or ','.  Terms: `c`, `c*theta`, `c*sin(w*t)`, `c*cos(w*t)`,
`file:<csv>:<column>`.  Example (showcase system 1):

    "259*theta + -1*sin(10*t) ; -150*theta + cos(10*t)"
"""

import argparse
import json
import math
import os
import re
import sys

import numpy as np

from . import csvio, repro, svgfig
from .bounded import (DEFAULT_HORIZON_CAP, bounded_solution, residual_certificate,
                      residual_series, truncation_horizon)
from .detect import DetectConfig, verify_unpredictable
from .errors import DomainError, NumericalError, PreconditionError
from .linalg import parse_matrix, spectral_split
from .signals import (Constant, LogisticOrbit, SampledScalar, Scaled, ScalarSum,
                      Sinusoid, VectorSignal, logistic_iterate, sample_grid,
                      signal_from_csv, theta_build)
from .sim import STABILITY_LIMIT, rk4_integrate, spectral_abscissa

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_DOMAIN = 4


# ---------------------------------------------------------------------------
# config files: a TOML-compatible key = value subset with [section] headers

def parse_config_file(path):
    values = {}
    section = ""
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("[") and line.endswith("]"):
                section = line[1:-1].strip()
                continue
            if "=" not in line:
                raise PreconditionError(
                    f"cli.config: line {lineno} of {path} is not 'key = value'"
                )
            key, val = (s.strip() for s in line.split("=", 1))
            full = f"{section}.{key}" if section else key
            values[full] = _parse_config_value(val)
    return values


def _parse_config_value(text):
    if text.startswith("[") and text.endswith("]"):
        inner = text[1:-1].strip()
        return [] if not inner else [_parse_config_value(s.strip()) for s in inner.split(",")]
    if text.lower() in ("true", "false"):
        return text.lower() == "true"
    if text.startswith('"') and text.endswith('"'):
        return text[1:-1]
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


_DETECT_KEYS = {f.name for f in DetectConfig.__dataclass_fields__.values()}


def detect_config_from(values, overrides):
    merged = {}
    for k, v in values.items():
        key = k.split(".")[-1]
        if key not in _DETECT_KEYS:
            raise PreconditionError(f"cli.config: unknown detection key {k!r}")
        merged[key] = v
    merged.update(overrides)
    if "delta_grid" in merged:
        merged["delta_grid"] = tuple(float(x) for x in merged["delta_grid"])
    return DetectConfig(**merged)


# ---------------------------------------------------------------------------
# forcing mini-language

_TERM_RE = re.compile(
    r"""^\s*(?:
        (?P<const>[-+]?\d+(?:\.\d*)?(?:[eE][-+]?\d+)?)\s*$ |
        (?P<ct>[-+]?\d*(?:\.\d*)?(?:[eE][-+]?\d+)?)\s*\*?\s*theta\s*$ |
        (?P<cs>[-+]?\d*(?:\.\d*)?(?:[eE][-+]?\d+)?)\s*\*?\s*
            (?P<fn>sin|cos)\s*\(\s*(?P<w>[-+]?\d+(?:\.\d*)?(?:[eE][-+]?\d+)?)\s*\*\s*t\s*\)\s*$
    )""",
    re.VERBOSE,
)


def _coef(text):
    if text in ("", "+"):
        return 1.0
    if text == "-":
        return -1.0
    return float(text)


def parse_forcing_spec(spec, theta=None, file_cache=None):
    """Build a VectorSignal from the forcing mini-language."""
    if file_cache is None:
        file_cache = {}
    components = []
    for comp_text in spec.split(";"):
        terms = []
        # split on '+' that are not inside parentheses, keep ',' as synonym
        pieces = re.split(r",|\+(?![^(]*\))", comp_text.replace("- ", "+ -"))
        pieces = [p for p in (s.strip() for s in pieces) if p]
        if not pieces:
            raise PreconditionError(f"cli.forcing-spec: empty component in {spec!r}")
        for piece in pieces:
            if piece.startswith("file:"):
                parts = piece.split(":")
                path = parts[1]
                col = int(parts[2]) if len(parts) > 2 else 1
                if path not in file_cache:
                    file_cache[path] = csvio.read_columns(path)
                header, cols = file_cache[path]
                if col < 1 or col >= len(cols):
                    raise PreconditionError(
                        f"cli.forcing-spec: column {col} not in {path} ({len(cols) - 1} data columns)"
                    )
                terms.append(SampledScalar(cols[0], cols[col]))
                continue
            m = _TERM_RE.match(piece)
            if not m:
                raise PreconditionError(
                    f"cli.forcing-spec: cannot parse term {piece!r}; grammar is "
                    "c | c*theta | c*sin(w*t) | c*cos(w*t) | file:<csv>:<col>"
                )
            if m.group("const") is not None:
                terms.append(Constant(float(m.group("const"))))
            elif m.group("fn") is not None:
                terms.append(Sinusoid(_coef(m.group("cs")), float(m.group("w")), m.group("fn")))
            else:
                if theta is None:
                    raise PreconditionError(
                        "cli.forcing-spec: spec references theta but no theta signal is configured "
                        "(set --seed/--mu/--gamma)"
                    )
                terms.append(Scaled(theta, _coef(m.group("ct"))))
        components.append(terms[0] if len(terms) == 1 else ScalarSum(terms))
    return VectorSignal(components)


def spec_needs_theta(spec):
    return "theta" in spec


def spec_static_bound(spec, gamma):
    """Sup-bound of a forcing spec without building signals (theta <= 1/gamma)."""
    total = 0.0
    for comp_text in spec.split(";"):
        comp = 0.0
        for piece in re.split(r",|\+(?![^(]*\))", comp_text.replace("- ", "+ -")):
            piece = piece.strip()
            if not piece:
                continue
            if piece.startswith("file:"):
                return None  # unknown until loaded
            m = _TERM_RE.match(piece)
            if not m:
                return None
            if m.group("const") is not None:
                comp += abs(float(m.group("const")))
            elif m.group("fn") is not None:
                comp += abs(_coef(m.group("cs")))
            else:
                comp += abs(_coef(m.group("ct"))) / gamma
        total += comp ** 2
    return math.sqrt(total)


# ---------------------------------------------------------------------------
# subcommands

def cmd_gen_theta(args):
    os.makedirs(args.out, exist_ok=True)
    orbit_path = os.path.join(args.out, "orbit.csv")
    theta_path = os.path.join(args.out, "theta.csv")
    if args.t_max <= 0:
        csvio.write_columns(orbit_path, ["i", "psi"], [np.zeros(0), np.zeros(0)])
        csvio.write_columns(theta_path, ["t", "theta"], [np.zeros(0), np.zeros(0)])
        return EXIT_OK
    count = int(math.ceil(args.t_max))
    orbit = logistic_iterate(args.seed, args.mu, count)
    theta = theta_build(orbit, decay=args.gamma, theta0=args.theta0)
    orbit.to_csv(orbit_path)
    ts = sample_grid(0.0, args.t_max, args.step)
    csvio.write_columns(theta_path, ["t", "theta"], [ts, theta.eval_many(ts)])
    return EXIT_OK


def cmd_split(args):
    split = spectral_split(parse_matrix(args.matrix), gap_tol=args.gap_tol)
    doc = csvio.jsonable(split.to_dict())
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        csvio.write_json(os.path.join(args.out, "split.json"), doc)
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def _theta_for(args, needed_hi):
    count = int(math.ceil(max(needed_hi, 1.0)))
    orbit = logistic_iterate(args.seed, args.mu, count)
    return theta_build(orbit, decay=args.gamma), orbit


def cmd_solve_bounded(args):
    A = parse_matrix(args.matrix)
    split = spectral_split(A)
    t_lo, t_hi = args.window
    theta = None
    if spec_needs_theta(args.forcing_spec):
        M_est = spec_static_bound(args.forcing_spec, args.gamma) or 1.0
        # rough horizon estimate to size the theta domain before building it
        T_est = truncation_horizon(split.K, 0.5 * split.alpha, M_est, args.tol)
        theta, _ = _theta_for(args, t_hi + min(T_est, DEFAULT_HORIZON_CAP) + 2.0)
    g = parse_forcing_spec(args.forcing_spec, theta=theta)
    sol = bounded_solution(split, g, (t_lo, t_hi), tol=args.tol, h=args.h)
    residual_certificate(sol)
    os.makedirs(args.out, exist_ok=True)
    sol.to_csv(os.path.join(args.out, "solution.csv"), residuals=residual_series(sol))
    sol.certificate.to_json(os.path.join(args.out, "certificate.json"))
    return EXIT_OK


def cmd_simulate(args):
    A = parse_matrix(args.matrix)
    x0 = np.array([float(s) for s in args.x0.split(",")])
    rho = spectral_abscissa(A)
    h = args.h
    if h * rho > STABILITY_LIMIT:
        sys.stderr.write(
            f"warning: h={h} violates the stiffness guard (max|Re lambda|={rho:.4g}); "
            f"refining to h={STABILITY_LIMIT / rho:.3e}; estimated "
            f"{args.steps * math.ceil(h * rho / STABILITY_LIMIT):.3g} internal steps\n"
        )
        refine = math.ceil(h * rho / STABILITY_LIMIT)
        args.steps *= refine
        args.record_every *= refine
        h = h / refine
    g = None
    if args.forcing_spec is not None:
        theta = None
        if spec_needs_theta(args.forcing_spec):
            theta, _ = _theta_for(args, args.t0 + args.steps * h + 2.0)
        g = parse_forcing_spec(args.forcing_spec, theta=theta)
    traj = rk4_integrate(A, g, args.t0, x0, h, args.steps, record_every=args.record_every)
    os.makedirs(args.out, exist_ok=True)
    traj.to_csv(os.path.join(args.out, "trajectory.csv"))
    if args.svg:
        svgfig.line_plot(os.path.join(args.out, "timeseries.svg"), traj.times,
                         [traj.states[:, j] for j in range(traj.dim)],
                         title="simulated trajectory")
    if args.phase and traj.dim >= 2:
        svgfig.phase_plot(os.path.join(args.out, "phase_portrait.svg"),
                          traj.states[:, 0], traj.states[:, 1],
                          title="phase portrait")
    return EXIT_OK


def cmd_detect(args):
    file_values = parse_config_file(args.config) if args.config else {}
    overrides = {}
    for name in ("burn_in", "window_len", "return_tol", "shift_count", "pass_tol",
                 "epsilon_min", "sample_step", "analysis_span", "phase_lock_tol"):
        v = getattr(args, name)
        if v is not None:
            overrides[name] = v
    if args.shift_span is not None:
        overrides["shift_span"] = args.shift_span
    cfg = detect_config_from(file_values, overrides)

    if args.input:
        if not args.orbit:
            raise PreconditionError("cli.detect: --input requires --orbit for the shift scan")
        signal = signal_from_csv(args.input)
        orbit = LogisticOrbit.from_csv(args.orbit)
    elif args.pipeline:
        needed = cfg.burn_in + cfg.analysis_span
        span = cfg.shift_span if cfg.shift_span else 10 ** 4
        theta = None
        if spec_needs_theta(args.pipeline):
            theta, orbit = _theta_for(args, needed + span + 50.0)
        else:
            _, orbit = _theta_for(args, needed + span + 50.0)
        signal = parse_forcing_spec(args.pipeline, theta=theta)
    else:
        raise PreconditionError("cli.detect: provide --input <csv> or --pipeline <spec>")

    report = verify_unpredictable(signal, orbit, cfg)
    os.makedirs(args.out, exist_ok=True)
    report.to_json(os.path.join(args.out, "detection_report.json"))
    sys.stdout.write(
        f"poisson_pass={report.poisson_pass} separation_pass={report.separation_pass} "
        f"epsilon0={report.epsilon0:.6g} delta={report.delta}\n"
    )
    return EXIT_OK


def cmd_reproduce(args):
    if args.which == "example1":
        result = repro.run_example1(args.out, window=args.window,
                                    detect_span=args.detect_span,
                                    analysis_span=args.analysis_span,
                                    skip_detect=args.skip_detect)
    else:
        result = repro.run_example2(args.out, window=args.window)
    for f in result.files:
        sys.stdout.write(f"wrote {f}\n")
    det = result.reports.get("detection")
    if det is not None:
        sys.stdout.write(
            f"detection: poisson_pass={det.poisson_pass} "
            f"separation_pass={det.separation_pass} epsilon0={det.epsilon0:.6g}\n"
        )
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(
        prog="unpredictable",
        description=("Chaotic driving signals, bounded solutions of hyperbolic "
                     "linear systems, and numerical unpredictability detection."),
    )
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-theta", help="generate a logistic orbit and its smoothed signal")
    g.add_argument("--seed", type=float, default=0.5)
    g.add_argument("--mu", type=float, default=3.91)
    g.add_argument("--gamma", type=float, default=2.0)
    g.add_argument("--theta0", type=float, default=None)
    g.add_argument("--t-max", dest="t_max", type=float, default=100.0)
    g.add_argument("--step", type=float, default=0.01)
    g.add_argument("--out", default=".")
    g.set_defaults(func=cmd_gen_theta)

    s = sub.add_parser("split", help="stable/unstable spectral splitting of a matrix")
    s.add_argument("--matrix", required=True, help='inline syntax "[[a,b],[c,d]]"')
    s.add_argument("--gap-tol", dest="gap_tol", type=float, default=1e-8)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_split)

    b = sub.add_parser("solve-bounded", help="bounded solution of x' = Ax + g on a window")
    b.add_argument("--matrix", required=True)
    b.add_argument("--forcing-spec", dest="forcing_spec", required=True)
    b.add_argument("--window", type=float, nargs=2, required=True, metavar=("LO", "HI"))
    b.add_argument("--tol", type=float, default=1e-6)
    b.add_argument("--h", type=float, default=None)
    b.add_argument("--seed", type=float, default=0.5)
    b.add_argument("--mu", type=float, default=3.91)
    b.add_argument("--gamma", type=float, default=2.0)
    b.add_argument("--out", default=".")
    b.set_defaults(func=cmd_solve_bounded)

    m = sub.add_parser("simulate", help="fixed-step RK4 simulation of x' = Ax + g")
    m.add_argument("--matrix", required=True)
    m.add_argument("--forcing-spec", dest="forcing_spec", default=None)
    m.add_argument("--x0", required=True, help='initial state, e.g. "0.18,0.01"')
    m.add_argument("--t0", type=float, default=0.0)
    m.add_argument("--h", type=float, default=0.01)
    m.add_argument("--steps", type=int, required=True)
    m.add_argument("--record-every", dest="record_every", type=int, default=1)
    m.add_argument("--svg", action="store_true")
    m.add_argument("--phase", action="store_true")
    m.add_argument("--seed", type=float, default=0.5)
    m.add_argument("--mu", type=float, default=3.91)
    m.add_argument("--gamma", type=float, default=2.0)
    m.add_argument("--out", default=".")
    m.set_defaults(func=cmd_simulate)

    d = sub.add_parser("detect", help="verify unpredictability of a signal")
    d.add_argument("--input", default=None, help="sampled signal CSV (t, v1, ...)")
    d.add_argument("--orbit", default=None, help="orbit CSV (i, psi) for the shift scan")
    d.add_argument("--pipeline", default=None, help="forcing-spec built in process")
    d.add_argument("--config", default=None, help="TOML-style key=value config file")
    d.add_argument("--seed", type=float, default=0.5)
    d.add_argument("--mu", type=float, default=3.91)
    d.add_argument("--gamma", type=float, default=2.0)
    d.add_argument("--burn-in", dest="burn_in", type=float, default=None)
    d.add_argument("--window-len", dest="window_len", type=int, default=None)
    d.add_argument("--return-tol", dest="return_tol", type=float, default=None)
    d.add_argument("--shift-count", dest="shift_count", type=int, default=None)
    d.add_argument("--shift-span", dest="shift_span", type=int, default=None)
    d.add_argument("--analysis-span", dest="analysis_span", type=float, default=None)
    d.add_argument("--sample-step", dest="sample_step", type=float, default=None)
    d.add_argument("--pass-tol", dest="pass_tol", type=float, default=None)
    d.add_argument("--epsilon-min", dest="epsilon_min", type=float, default=None)
    d.add_argument("--phase-lock-tol", dest="phase_lock_tol", type=float, default=None)
    d.add_argument("--out", default=".")
    d.set_defaults(func=cmd_detect)

    r = sub.add_parser("reproduce", help="run a full showcase pipeline")
    r.add_argument("which", choices=("example1", "example2"))
    r.add_argument("--window", type=float, default=200.0)
    r.add_argument("--detect-span", dest="detect_span", type=int,
                   default=repro.DEFAULT_DETECT_SPAN)
    r.add_argument("--analysis-span", dest="analysis_span", type=float, default=1e4)
    r.add_argument("--skip-detect", dest="skip_detect", action="store_true")
    r.add_argument("--out", default="repro_out")
    r.set_defaults(func=cmd_reproduce)

    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except PreconditionError as exc:
        sys.stderr.write(f"error (config): {exc}\n")
        return EXIT_CONFIG
    except NumericalError as exc:
        sys.stderr.write(f"error (numerical): {exc}\n")
        return EXIT_NUMERICAL
    except DomainError as exc:
        sys.stderr.write(f"error (domain): {exc}\n")
        return EXIT_DOMAIN
    except (ValueError, OSError) as exc:
        # malformed input files and the like are configuration problems
        sys.stderr.write(f"error (config): {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
