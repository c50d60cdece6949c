"""Batch command-line front end.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage or
configuration errors.  JSON output is byte-deterministic for a fixed
configuration and seed.
"""
import argparse
import configparser
import csv
import io
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

from . import pseudo_susy, romanovski, susy_angular
from .exceptions import DegeneracyError, DomainError
from .geometry import metric_at
from .verification import SUITES, SuiteResult, default_seed, run_suite

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MIN_GRID = 16


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    out: str = None
    fmt: str = "json"
    tol: float = None
    jobs: int = 1

    def validate(self):
        if self.tol is not None and not self.tol > 0:
            raise ConfigError(f"tol must be > 0, got {self.tol}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")
        for key in ("grid_N", "points"):
            if key in self.params and self.params[key] < MIN_GRID:
                raise ConfigError(f"{key} must be >= {MIN_GRID}, got {self.params[key]}")
        for key in ("ell", "ellM"):
            if key in self.params and not self.params[key] > 0:
                raise ConfigError(f"{key} must be > 0, got {self.params[key]}")
        if self.params.get("n_max", 0) < 0 or self.params.get("nubar_max", 0) < 0:
            raise ConfigError("n_max and nubar_max must be >= 0")
        return self


@dataclass
class Report:
    command: str
    params: dict
    rows: list = field(default_factory=list)
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c["passed"] for c in self.checks)

    def summary(self):
        worst, where = None, None
        for c in self.checks:
            # passing checks with value above tol are lower bounds, not residuals
            lower_bound = c["passed"] and c["value"] >= c["tol"]
            if c["tol"] and c["tol"] > 0 and math.isfinite(c["value"]) and not lower_bound:
                ratio = c["value"] / c["tol"]
                if worst is None or ratio > worst:
                    worst, where = ratio, c
        return {
            "passed": self.passed,
            "n_checks": len(self.checks),
            "n_failed": sum(1 for c in self.checks if not c["passed"]),
            "max_residual": None if where is None else where["value"],
            "max_residual_location": None if where is None else where["name"],
        }

    def as_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "parameters": self.params,
            "rows": self.rows,
            "checks": self.checks,
            "summary": self.summary(),
        }


# -- deterministic serialization ------------------------------------------


def _scalar(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if x is None:
        return "null"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, Fraction):
        return dumps(str(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return "null"
        return format(x, ".17g")
    if isinstance(x, (complex, np.complexfloating)):
        return dumps([complex(x).real, complex(x).imag])
    if isinstance(x, str):
        return _json_string(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _json_string(s):
    out = ['"']
    for ch in s:
        if ch in '"\\':
            out.append("\\" + ch)
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def dumps(obj, indent=0):
    """JSON text with insertion-ordered keys and 17-significant-digit floats."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_json_string(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent + 1) for v in obj) + "\n" + end + "]"
    return _scalar(obj)


def to_csv(report):
    """Rows and checks as one RFC 4180 table with a leading ``kind`` column."""
    records = [{"kind": "row", **r} for r in report.rows] + [{"kind": "check", **c} for c in report.checks]
    cols = []
    for r in records:
        for k in r:
            if k not in cols:
                cols.append(k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(cols)
    for r in records:
        w.writerow(["" if r.get(k) is None else _csv_cell(r.get(k)) for k in cols])
    return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, (list, tuple, dict, complex, np.complexfloating)):
        return dumps(v).replace("\n", " ")
    if isinstance(v, str):
        return v
    s = _scalar(v)
    return "" if s == "null" else s


def emit(report, cfg):
    text = dumps(report.as_dict()) + "\n" if cfg.fmt == "json" else to_csv(report)
    if cfg.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# -- commands ----------------------------------------------------------------


def _checks_from_suite(res: SuiteResult):
    checks = [{"suite": res.suite, **c.as_dict()} for c in res.checks]
    rows = [{"suite": res.suite, **r} for r in res.rows]
    return rows, checks


def cmd_spectrum(cfg):
    m, n_max, N = cfg.params["m"], cfg.params["n_max"], cfg.params["grid_N"]
    tol = 5e-4 if cfg.tol is None else cfg.tol
    fac = susy_angular.susy_factorization(m)
    ev = susy_angular.oracle_spectrum(fac.V_plus, n_max + 1, N)
    A = fac.A_const
    rep = Report("spectrum", cfg.params)
    worst = 0.0
    for n in range(n_max + 1):
        gap = gap_law = gap_err = None
        if n > 0:
            gap = float(ev[n] - ev[n - 1])
            gap_law = 2 * A + 2 * (n - 1) + 1
            gap_err = abs(gap - gap_law)
            worst = max(worst, gap_err)
        rep.rows.append({
            "tag": "angular-spectrum",
            "n": n,
            "omega2_shifted": susy_angular.analytic_spectrum(m, n, "shifted"),
            "omega2_dirac": susy_angular.analytic_spectrum(m, n, "dirac"),
            "oracle": float(ev[n]),
            "gap": gap,
            "gap_law": gap_law,
            "gap_error": gap_err,
        })
    if n_max > 0:
        rep.checks.append(_check("spectrum gap law", "angular-spectrum-gap", worst, tol))
    rep.checks.append(_check("ground level", "angular-ground-level", abs(float(ev[0])), tol))
    return rep


def _check(name, tag, value, tol, passed=None):
    value = float(value)
    return {
        "name": name,
        "tag": tag,
        "criterion": None,
        "value": value,
        "tol": float(tol),
        "passed": bool(value < tol) if passed is None else bool(passed),
        "detail": "",
    }


def _run_one(args):
    name, seed, tol = args
    return run_suite(name, seed=seed, tol=tol)


def cmd_verify(cfg):
    suite = cfg.params["suite"]
    names = list(SUITES) if suite == "all" else [suite]
    seed = cfg.params["seed"]
    jobs = [(n, seed, cfg.tol) for n in names]
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(cfg.jobs, len(jobs))) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    rep = Report("verify", cfg.params)
    for res in results:
        rows, checks = _checks_from_suite(res)
        rep.rows.extend(rows)
        rep.checks.extend(checks)
    return rep


def cmd_romanovski_table(cfg):
    nmax, a, b = cfg.params["nubar_max"], cfg.params["a"], cfg.params["b"]
    tol = 1e-8 if cfg.tol is None else cfg.tol
    rep = Report("romanovski-table", cfg.params)
    polys = []
    for nu in range(nmax + 1):
        try:
            p = romanovski.romanovski_poly(nu, a, b)
        except DegeneracyError as exc:
            raise ConfigError(f"degree {nu} with (a, b) = ({a}, {b}): {exc}") from exc
        polys.append(p)
        res = p.ode_residual_coeffs()
        res_max = max(abs(float(c)) for c in res)
        rep.rows.append({
            "tag": "romanovski-polynomial",
            "nubar": nu,
            "coefficients": [str(c) if isinstance(c, Rational) and not isinstance(c, int) else c for c in p.coeffs],
            "exact": p.exact,
            "ode_residual": res_max,
        })
        exact_tol = 0.0 if p.exact else 1e-9
        rep.checks.append(_check(f"ODE residual degree {nu}", "romanovski-ode", res_max, exact_tol,
                                 passed=(res_max == 0.0) if p.exact else res_max < exact_tol))
    fa, fb = float(a), float(b)
    for i in range(nmax + 1):
        for j in range(i + 1, nmax + 1):
            if romanovski.orthogonality_converges(i, j, fb):
                val = romanovski.orthogonality_integral(i, j, fa, fb)
                rep.rows.append({"tag": "romanovski-orthogonality", "nu1": i, "nu2": j, "integral": val})
                rep.checks.append(_check(f"orthogonality ({i}, {j})", "romanovski-orthogonality", abs(val), tol))
            else:
                rep.rows.append({"tag": "romanovski-orthogonality", "nu1": i, "nu2": j, "integral": "divergent"})
    return rep


def cmd_time_part(cfg):
    p = cfg.params
    tol = 1e-8 if cfg.tol is None else cfg.tol
    k = p["k"]
    c = romanovski.model_constants(p["ellM"], romanovski.eps_for_component(k))
    sol = romanovski.time_solution(k, p["nubar"], c)
    z = np.linspace(p["z_min"], p["z_max"], p["points"])
    rep = Report("time-part", p)
    rep.rows.append({
        "tag": "model-constants",
        "A": c.A_big, "B": c.B_big, "a1": c.a1, "a": c.a, "b": c.b, "nu": c.nu, "omega2": sol.omega2,
    })
    Y = sol.ybar(z)
    for zi, yi in zip(z, Y):
        rep.rows.append({"tag": "time-part-solution", "z": float(zi), "ybar": complex(yi)})
    r_red = romanovski.reduced_equation_residual(sol, z)
    rep.checks.append(_check("reduced temporal equation", "time-part-chain", r_red, tol))
    rep.checks.append(_check("polynomial equation", "time-part-polynomial", romanovski.polynomial_equation_residual(sol, z), tol))
    r1, r2 = c.chain_conditions()
    rep.checks.append(_check("ansatz conditions", "model-constants-chain", max(abs(r1), abs(r2)), tol))
    rep.rows.append({"tag": "time-part-unreduced", "residual": romanovski.unreduced_equation_residual(sol, z)})
    return rep


def cmd_partner_metric(cfg):
    p = cfg.params
    ell, tau, th, ph = p["ell"], p["tau"], p["theta"], p["phi"]
    if not tau > 0 or not (0 < th < np.pi) or not (0 < ph < np.pi):
        raise ConfigError("partner-metric needs tau > 0 and theta, phi in (0, pi)")
    g = pseudo_susy.partner_metric(ell, tau, th, ph)
    e1 = pseudo_susy.eta1(ell, p["a1"], p["a2"], p["a3"])
    rep = Report("partner-metric", p)
    rep.rows.append({"tag": "partner-metric", **g.line_element(), "signature": list(g.signature),
                     "determinant": g.determinant})
    ratio = pseudo_susy.eta_metric_ratio(e1, g.diagonal, tau, th, ph)
    power = pseudo_susy.ell_power(
        lambda L: pseudo_susy.eta_metric_ratio(pseudo_susy.eta1(L, p["a1"], p["a2"], p["a3"]),
                                               pseudo_susy.partner_metric(L, tau, th, ph).diagonal, tau, th, ph))
    rep.rows.append({"tag": "eta1-metric-ratio", "ratio": ratio, "ell_power": power})
    e2 = pseudo_susy.eta2(ell)
    rep.rows.append({"tag": "eta2-metric-ratio",
                     "ratio": pseudo_susy.eta_metric_ratio(e2, metric_at(ell, tau, th).matrix.diagonal(), tau, th)})
    want = -(ell**8) * np.sinh(tau) ** 6 * np.sin(th) ** 2 * np.sin(ph) ** 2
    rep.checks.append(_check("determinant", "partner-metric-determinant", abs(g.determinant - want) / abs(want), 1e-12))
    rep.checks.append(_check("signature (-,+,+,+)", "partner-metric-signature", 0.0, 1.0,
                             passed=g.signature == (-1, 1, 1, 1)))
    return rep


COMMANDS = {
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "romanovski-table": cmd_romanovski_table,
    "time-part": cmd_time_part,
    "partner-metric": cmd_partner_metric,
}


# -- argument handling -------------------------------------------------------


def _rational(text):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _add_global_flags(p, default):
    p.add_argument("--out", default=default, help="output file (default: stdout)")
    p.add_argument("--format", dest="fmt", choices=("json", "csv"), default=default,
                   help="output format (default: json)")
    p.add_argument("--tol", type=float, default=default, help="override check tolerances")
    p.add_argument("--jobs", type=int, default=default, help="worker processes for independent suites (default: 1)")
    p.add_argument("--config", default=default, help="key = value file; command-line flags win")


def build_parser():
    # global flags are accepted before or after the subcommand; the copies on
    # the subparsers are suppressed so they never overwrite earlier values
    common = argparse.ArgumentParser(add_help=False)
    _add_global_flags(common, argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="desitter-dirac",
                                     description="Verification tool for the Dirac problem on a (2+1)D de Sitter background.")
    _add_global_flags(parser, None)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", parents=[common], help="angular spectrum vs. finite-difference oracle")
    sp.add_argument("--m", type=float, default=1.0)
    sp.add_argument("--n-max", dest="n_max", type=int, default=3)
    sp.add_argument("--grid-N", dest="grid_N", type=int, default=4000)

    sv = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    sv.add_argument("suite", choices=sorted(SUITES) + ["all"])

    sr = sub.add_parser("romanovski-table", parents=[common], help="Romanovski polynomials, residuals, orthogonality")
    sr.add_argument("--nubar-max", dest="nubar_max", type=int, default=4)
    sr.add_argument("--a", type=_rational, default=Fraction(-2))
    sr.add_argument("--b", type=_rational, default=Fraction(-4))

    st = sub.add_parser("time-part", parents=[common], help="time-part solution on the real z line")
    st.add_argument("--ellM", type=float, default=1.0)
    st.add_argument("--k", type=int, choices=(1, 2), default=2)
    st.add_argument("--nubar", type=int, default=1)
    st.add_argument("--z-min", dest="z_min", type=float, default=-10.0)
    st.add_argument("--z-max", dest="z_max", type=float, default=10.0)
    st.add_argument("--points", type=int, default=201)

    sm = sub.add_parser("partner-metric", parents=[common], help="partner metric and metric-operator ratios")
    sm.add_argument("--ell", type=float, default=1.0)
    sm.add_argument("--tau", type=float, default=1.0)
    sm.add_argument("--theta", type=float, default=1.0)
    sm.add_argument("--phi", type=float, default=1.0)
    sm.add_argument("--a1", type=float, default=1.5)
    sm.add_argument("--a2", type=float, default=1.0)
    sm.add_argument("--a3", type=float, default=1.0)

    return parser, {"spectrum": sp, "verify": sv, "romanovski-table": sr, "time-part": st, "partner-metric": sm}


GLOBAL_KEYS = ("out", "fmt", "tol", "jobs")


def read_config(path):
    """Parse a ``key = value`` file (no section header needed)."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_string("[run]\n" + fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path!r}: {exc}") from exc
    out = {}
    for k, v in cp["run"].items():
        key = k.replace("-", "_")
        out["fmt" if key == "format" else key] = v
    return out


def _apply_config(ns, cfg_values, subparser, argv):
    """Fill values not given on the command line from the config file."""
    known = {a.dest: a for a in subparser._actions}
    for key, raw in cfg_values.items():
        if key not in known or key in ("help", "config"):
            raise ConfigError(f"unknown config key {key!r}")
        action = known[key]
        flags = action.option_strings
        if any(arg == f or arg.startswith(f + "=") for f in flags for arg in argv):
            continue
        if not flags:
            raise ConfigError(f"config key {key!r} is positional; pass it on the command line")
        try:
            value = action.type(raw) if action.type else raw
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise ConfigError(f"config key {key!r}: invalid value {raw!r}") from exc
        if action.choices is not None and value not in action.choices:
            raise ConfigError(f"config key {key!r}: {raw!r} not in {list(action.choices)}")
        setattr(ns, key, value)


def parse(argv):
    parser, subs = build_parser()
    ns = parser.parse_args(argv)
    if ns.config:
        _apply_config(ns, read_config(ns.config), subs[ns.command], argv)
    params = {k: v for k, v in vars(ns).items() if k not in GLOBAL_KEYS + ("command", "config")}
    if ns.command == "verify":
        params["seed"] = default_seed()
    cfg = RunConfig(
        command=ns.command,
        params=params,
        out=ns.out,
        fmt=ns.fmt or "json",
        tol=ns.tol,
        jobs=1 if ns.jobs is None else ns.jobs,
    )
    return cfg.validate()


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse(argv)
        report = COMMANDS[cfg.command](cfg)
    except SystemExit as exc:  # argparse usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (ConfigError, DomainError, ValueError) as exc:
        print(f"desitter-dirac: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    emit(report, cfg)
    return EXIT_OK if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
