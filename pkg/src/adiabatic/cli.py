"""Command-line front end.

    adiabatic modes     --flow 3/4 --modes 4 --t 0.1
    adiabatic sweep     --flow 3/4 --modes 8 --tmin 1e-6
    adiabatic carriere  --coverage -50 50 0.01 --bound 200
    adiabatic perturb   --trials 200 --dim 12 --seed 7
    adiabatic fdstudy   --flow 3/4 --mode 1,0 --N 16 32 64 128
    adiabatic verify-all --output report.json

Exit codes: 0 success, 1 usage error, 2 verification failure.  Output goes to
stdout unless ``--output`` is given, in which case the file is written only
after the computation finished (temp file + rename, so no partial files).
"""
import argparse
import json
import os
import re
import sys
import tempfile
from dataclasses import asdict, dataclass, fields
from math import isfinite

import numpy as np

from . import carriere, verify
from ._backend import thread_cap
from .collapse import CollapseGrid, Convergent, classify, sweep, verify_theorem
from .errors import AdiabaticError, Ambiguous, ParseError, ZeroVector
from .grid_fd import GridSpec, convergence_study, fd_symbol_spectrum, spectrum_match
from .perturb import lemma_suite
from .torus import FlowSpec, enumerate_modes, is_basic_mode, mode_q, mode_spectrum

SCHEMA = 1
COMMANDS = ("modes", "sweep", "carriere", "perturb", "fdstudy", "verify-all")
DEFAULT_FORMAT = {
    "modes": "csv", "sweep": "csv", "fdstudy": "csv",
    "carriere": "json", "perturb": "json", "verify-all": "json",
}
NUMERIC_UNIT_TOL = 1e-12

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2


class UsageError(Exception):
    def __init__(self, flag, message):
        super().__init__(f"argument {flag}: {message}")
        self.flag = flag


# --- flow parsing ---------------------------------------------------------

_INT = re.compile(r"[+-]?\d+")


def parse_flow(text):
    """'p/q', 'p1/p2/p3' (rational) or 'num:a,b[,c]' (numeric, normalized)."""
    if not isinstance(text, str):
        raise ParseError("flow must be a string", 0)
    if text.startswith("num:"):
        return _parse_numeric(text)
    parts = text.split("/")
    if len(parts) not in (2, 3):
        raise ParseError(f"expected p/q or p1/p2/p3, got {text!r}", 0)
    ints = []
    pos = 0
    for part in parts:
        if not _INT.fullmatch(part):
            raise ParseError(f"not an integer: {part!r}", pos)
        ints.append(int(part))
        pos += len(part) + 1
    if not any(ints):
        raise ZeroVector(f"flow {text!r} is the zero vector")
    return FlowSpec.rational(*ints)


def _parse_numeric(text):
    body = text[4:]
    pos = 4
    vals = []
    for part in body.split(","):
        try:
            x = float(part)
        except ValueError:
            raise ParseError(f"not a number: {part!r}", pos) from None
        if not isfinite(x):
            raise ParseError(f"not finite: {part!r}", pos)
        vals.append(x)
        pos += len(part) + 1
    if len(vals) not in (2, 3):
        raise ParseError(f"numeric flow needs 2 or 3 components, got {len(vals)}", 4)
    v = np.array(vals)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ZeroVector(f"flow {text!r} is the zero vector")
    if abs(norm - 1.0) > NUMERIC_UNIT_TOL:
        raise ParseError(f"numeric direction has norm {norm!r}, not 1 within {NUMERIC_UNIT_TOL:g}", 4)
    return FlowSpec.numeric(*(v / norm))


# --- config ---------------------------------------------------------------

@dataclass
class RunConfig:
    command: str
    flow: FlowSpec = None
    modes: int = 8
    t: float = 1.0
    tmin: float = 1e-6
    tmax: float = 1.0
    mode: tuple = (1, 0)
    N: tuple = (16, 32, 64, 128)
    spectrum_N: int = None
    trials: int = 200
    dim: int = 16
    seed: int = 7
    coverage: tuple = None
    mu: float = None
    bound: int = 200
    output: str = None
    format: str = None

    def __post_init__(self):
        if self.format is None:
            self.format = DEFAULT_FORMAT.get(self.command, "json")

    def to_dict(self):
        d = asdict(self)
        d["flow"] = None if self.flow is None else str(self.flow)
        for k in ("mode", "N", "coverage"):
            if d[k] is not None:
                d[k] = list(d[k])
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        if d.get("flow") is not None:
            d["flow"] = parse_flow(d["flow"])
        for k in ("mode", "N", "coverage"):
            if d.get(k) is not None:
                d[k] = tuple(d[k])
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in known})

    def echo(self):
        """The config fields that matter for the command, in a stable order."""
        keep = {
            "modes": ("flow", "modes", "t"),
            "sweep": ("flow", "modes", "tmin", "tmax"),
            "carriere": ("coverage", "mu", "bound"),
            "perturb": ("trials", "dim", "seed"),
            "fdstudy": ("flow", "t", "mode", "N", "spectrum_N"),
            "verify-all": (),
        }[self.command]
        d = self.to_dict()
        out = {"command": self.command, "schema": SCHEMA}
        out.update((k, d[k]) for k in keep)
        return out


def validate(cfg):
    """Reject invalid combinations before any computation."""
    if cfg.command not in COMMANDS:
        raise UsageError("command", f"unknown command {cfg.command!r}")
    if cfg.format not in ("csv", "json"):
        raise UsageError("--format", f"must be csv or json, got {cfg.format!r}")
    if cfg.command in ("modes", "sweep", "fdstudy") and cfg.flow is None:
        raise UsageError("--flow", "required for " + cfg.command)
    if cfg.command in ("modes", "sweep") and cfg.modes < 1:
        raise UsageError("--modes", "must be at least 1")
    if cfg.command in ("modes", "fdstudy") and not cfg.t > 0:
        raise UsageError("--t", "must be positive")
    if cfg.command == "sweep":
        try:
            CollapseGrid.decades(cfg.tmin, cfg.tmax)
        except AdiabaticError as exc:
            raise UsageError("--tmin", str(exc)) from None
    if cfg.command == "carriere":
        if (cfg.coverage is None) == (cfg.mu is None):
            raise UsageError("--coverage", "give exactly one of --coverage LO HI STEP or --mu X")
        if cfg.coverage is not None:
            lo, hi, step = cfg.coverage
            if not (lo <= hi and step > 0):
                raise UsageError("--coverage", "need LO <= HI and STEP > 0")
        if cfg.bound < 1:
            raise UsageError("--bound", "must be at least 1")
    if cfg.command == "perturb":
        if cfg.trials < 1:
            raise UsageError("--trials", "must be at least 1")
        if not 2 <= cfg.dim <= 64:
            raise UsageError("--dim", "must lie in 2..64")
    if cfg.command == "fdstudy":
        if cfg.flow.dimension != 2:
            raise UsageError("--flow", "finite differences are T^2 only")
        if len(cfg.mode) != 2:
            raise UsageError("--mode", "expected m,n")
        for n in cfg.N:
            if n < 8 or n & (n - 1):
                raise UsageError("--N", f"grid sizes must be powers of two >= 8, got {n}")
            if max(abs(x) for x in cfg.mode) > n // 2:
                raise UsageError("--mode", f"mode {cfg.mode} does not fit on N={n}")
        if cfg.spectrum_N is not None and cfg.spectrum_N not in (8, 16, 32):
            raise UsageError("--spectrum-N", "dense checks need N in {8, 16, 32}")
    if cfg.output is not None:
        parent = os.path.dirname(os.path.abspath(cfg.output))
        if not os.path.isdir(parent):
            raise UsageError("--output", f"directory {parent} does not exist")


# --- output ---------------------------------------------------------------

def fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x) + 0.0, ".17g")  # no "-0"
    return str(x)


def render_csv(header, rows):
    lines = [f"# schema={SCHEMA}", ",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if isfinite(x) else repr(x)
    return obj


def render_json(payload):
    return json.dumps(_plain(payload), indent=2, ensure_ascii=False) + "\n"


def write_output(text, path):
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    parent = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=parent, prefix=".adiabatic-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --- commands -------------------------------------------------------------
# Each returns (text, exit_code).

def _mode_cols(dim):
    return ["mode_m", "mode_n", "mode_k"][:dim]


def _label(branch):
    try:
        cls = classify(branch)
    except Ambiguous:
        return "ambiguous"
    return "convergent" if isinstance(cls, Convergent) else "divergent"


def cmd_modes(cfg):
    flow = cfg.flow
    rows = []
    for mode in enumerate_modes(flow.dimension, cfg.modes):
        lo, hi = mode_spectrum(flow, mode, cfg.t)
        rows.append((*mode, cfg.t, mode_q(flow, mode, cfg.t), lo, hi, is_basic_mode(flow, mode)))
    header = _mode_cols(flow.dimension) + ["t", "q", "lambda_minus", "lambda_plus", "basic"]
    if cfg.format == "csv":
        return render_csv(header, rows), EXIT_OK
    return render_json({"config": cfg.echo(), "columns": header, "rows": rows}), EXIT_OK


def cmd_sweep(cfg):
    flow = cfg.flow
    grid = CollapseGrid.decades(cfg.tmin, cfg.tmax)
    branches = sweep(flow, cfg.modes, grid)
    rows = []
    for br in branches:
        label = _label(br)
        rows.extend((*br.mode, br.sign, t, v, label) for t, v in zip(br.t_values, br.values))
    code = EXIT_OK
    check = None
    if flow.is_rational:
        try:
            rep = verify_theorem(flow, cfg.modes, grid)
        except Ambiguous as exc:
            check = {"ambiguous": str(exc)}
            code = EXIT_VERIFY
        else:
            check = rep.as_dict()
            if not (rep.part1 and rep.part2):
                code = EXIT_VERIFY
    header = _mode_cols(flow.dimension) + ["sign", "t", "eigenvalue", "class"]
    if cfg.format == "csv":
        return render_csv(header, rows), code
    payload = {"config": cfg.echo(), "verification": check, "columns": header, "rows": rows}
    return render_json(payload), code


def cmd_carriere(cfg):
    c = carriere.CONSTANTS
    out = {"config": cfg.echo()}
    if cfg.coverage is not None:
        lo, hi, step = cfg.coverage
        frac = carriere.coverage_report((lo, hi), step, cfg.bound)
        out.update(coverage=frac, points=int(carriere.mu_grid(lo, hi, step).size))
    else:
        res = carriere.spectrum_contains(cfg.mu, cfg.bound)
        out.update(mu=res.mu, status=res.status,
                   witness=None if res.witness is None else list(res.witness))
        if res.witness is not None and res.witness != (0, 0):
            iv = carriere.df_interval(*res.witness)
            out["interval"] = [iv.lo, iv.hi]
    out["constants"] = {"lambda": c.lam, "G": c.G, "K": c.K}
    if cfg.format == "json":
        return render_json(out), EXIT_OK
    if cfg.coverage is not None:
        return render_csv(["lo", "hi", "step", "bound", "points", "coverage"],
                          [(lo, hi, step, cfg.bound, out["points"], out["coverage"])]), EXIT_OK
    w = out["witness"] or ("", "")
    return render_csv(["mu", "status", "b", "c"], [(out["mu"], out["status"], *w)]), EXIT_OK


def cmd_perturb(cfg):
    suite = lemma_suite(cfg.trials, range(2, cfg.dim + 1), cfg.seed)
    trials = [
        {
            "index": t.index, "n": t.n, "scale": t.scale,
            "epsilon": t.report.epsilon, "max_distance": t.report.max_distance,
            "holds": t.report.holds,
            "nonneg_gap": t.nonneg_gap, "nonneg_holds": t.nonneg_bound_holds and t.nonneg_pairing_holds,
        }
        for t in suite.trials
    ]
    ok = suite.lemma_holds and suite.nonneg_holds
    code = EXIT_OK if ok else EXIT_VERIFY
    if cfg.format == "csv":
        header = list(trials[0])
        return render_csv(header, [tuple(t.values()) for t in trials]), code
    summary = {
        "lemma_holds": suite.lemma_holds, "nonneg_holds": suite.nonneg_holds,
        "worst_lemma_margin": suite.worst_lemma_margin,
        "worst_nonneg_ratio": suite.worst_nonneg_ratio,
    }
    return render_json({"config": cfg.echo(), "summary": summary, "trials": trials}), code


def cmd_fdstudy(cfg):
    flow = cfg.flow
    study = convergence_study(flow, cfg.t, cfg.mode, cfg.N)
    exact = mode_spectrum(flow, cfg.mode, cfg.t)[1]
    rows = []
    for n, err in study.rows:
        spec = GridSpec(n, flow, cfg.t)
        rows.append((n, spec.h, fd_symbol_spectrum(spec, cfg.mode)[1], exact, err))
    header = ["N", "h", "fd_eigenvalue", "exact_eigenvalue", "error"]
    if cfg.format == "csv":
        return render_csv(header, rows), EXIT_OK
    out = {"config": cfg.echo(), "order": study.order, "columns": header, "rows": rows}
    if cfg.spectrum_N is not None:
        out["spectrum_defect"] = spectrum_match(GridSpec(cfg.spectrum_N, flow, cfg.t))
    return render_json(out), EXIT_OK


def cmd_verify_all(cfg):
    results = verify.run_all()
    passed = all(r["passed"] for r in results)
    code = EXIT_OK if passed else EXIT_VERIFY
    if cfg.format == "csv":
        return render_csv(["id", "name", "passed"], [(r["id"], r["name"], r["passed"]) for r in results]), code
    report = {"config": cfg.echo(), "passed": passed, "criteria": results}
    return render_json(report), code


HANDLERS = {
    "modes": cmd_modes, "sweep": cmd_sweep, "carriere": cmd_carriere,
    "perturb": cmd_perturb, "fdstudy": cmd_fdstudy, "verify-all": cmd_verify_all,
}


def run(cfg):
    """Validate, compute, then write.  Returns the exit code."""
    validate(cfg)
    text, code = HANDLERS[cfg.command](cfg)
    write_output(text, cfg.output)
    return code


# --- argparse -------------------------------------------------------------

class Parser(argparse.ArgumentParser):
    """argparse with exit code 1 for usage errors (2 is reserved for failed checks)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _flow_arg(text):
    try:
        return parse_flow(text)
    except (ParseError, ZeroVector, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_tuple(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser():
    p = Parser(prog="adiabatic", description="Collapse spectra of Dirac operators on flat tori.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    def common(sp):
        sp.add_argument("--output", "-o", default=None, help="output file (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default=None)

    sp = sub.add_parser("modes", help="per-mode spectra at a fixed t")
    sp.add_argument("--flow", type=_flow_arg, required=True)
    sp.add_argument("--modes", type=int, default=8, help="mode cutoff max|k_i|")
    sp.add_argument("--t", type=float, default=1.0)
    common(sp)

    sp = sub.add_parser("sweep", help="eigenvalue branches over a decade grid in t")
    sp.add_argument("--flow", type=_flow_arg, required=True)
    sp.add_argument("--modes", type=int, default=8)
    sp.add_argument("--tmin", type=float, default=1e-6)
    sp.add_argument("--tmax", type=float, default=1.0)
    common(sp)

    sp = sub.add_parser("carriere", help="spectrum of the tangential operator on the Carriere flow")
    sp.add_argument("--coverage", type=float, nargs=3, metavar=("LO", "HI", "STEP"))
    sp.add_argument("--mu", type=float)
    sp.add_argument("--bound", type=int, default=200)
    common(sp)

    sp = sub.add_parser("perturb", help="random Hermitian perturbation suite")
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--dim", type=int, default=16, help="largest matrix size (sizes cycle 2..dim)")
    sp.add_argument("--seed", type=int, default=7)
    common(sp)

    sp = sub.add_parser("fdstudy", help="finite-difference convergence for one mode")
    sp.add_argument("--flow", type=_flow_arg, required=True)
    sp.add_argument("--t", type=float, default=1.0)
    sp.add_argument("--mode", type=_int_tuple, default=(1, 0))
    sp.add_argument("--N", type=int, nargs="+", default=[16, 32, 64, 128])
    sp.add_argument("--spectrum-N", dest="spectrum_N", type=int, default=None,
                    help="also compare the dense spectrum at this N (json only)")
    common(sp)

    sp = sub.add_parser("verify-all", help="run every reproduction check")
    common(sp)
    return p


def config_from_args(args):
    d = {k: v for k, v in vars(args).items() if v is not None}
    for k in ("N", "coverage", "mode"):
        if k in d:
            d[k] = tuple(d[k])
    return RunConfig(**d)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        thread_cap()
    except ValueError as exc:
        parser.error(str(exc))
    cfg = config_from_args(args)
    try:
        return run(cfg)
    except UsageError as exc:
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
