"""Command-line front end: gram-schmidt, spectrum, mfunction and verify.

Exit codes: 0 success, 1 invalid input, 2 degenerate Gram-Schmidt
denominator, 3 pattern or suite failure, 4 unmatched pole, 5 skipped
on-spectrum grid points.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .asymptotics import Parameters, numeric_limit_oracle, sesquilinear_form
from .errors import DegenerateDenominator, JacobiPowersError
from .triple import gamma0, gamma0_from_recursion, green_identity_residual, interaction_matrix, regularized_basis
from .weyl import (
    KernelGamma0,
    KernelGamma1,
    Periodic,
    Separated,
    closed_form_spectrum,
    connection_constants,
    herglotz_check,
    herglotz_from_matrices,
    pole_scan,
    spectral_decompose,
    weyl_m,
)

EXIT_OK, EXIT_INPUT, EXIT_DEGENERATE, EXIT_PATTERN, EXIT_UNMATCHED, EXIT_SKIPPED = range(6)

EXTENSIONS = ("friedrichs", "gamma1", "separated", "periodic")
HERGLOTZ_SAMPLES = (1j, 1 + 2j, -3 + 0.5j, 10 + 0.1j)


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# configuration


@dataclass
class RunConfig:
    alpha: float = 0.3
    beta: float = 0.7
    n: int = 2
    extension: str = "friedrichs"
    theta: tuple[float, ...] | None = None
    lambda_grid: tuple[complex, ...] = ()
    window: tuple[float, float] = (-1.5, 100.0)
    output_format: str = "json"
    tolerance: float | None = None
    params: Parameters = field(init=False, repr=False)

    def __post_init__(self):
        try:
            self.params = Parameters(self.alpha, self.beta, self.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if self.extension not in EXTENSIONS:
            raise UsageError(f"unknown extension {self.extension!r}")
        if self.extension == "separated":
            if self.theta is None or len(self.theta) != 2 * self.n:
                got = 0 if self.theta is None else len(self.theta)
                raise UsageError(f"separated extension needs --theta with {2 * self.n} entries, got {got}")
        if self.output_format not in ("json", "csv"):
            raise UsageError(f"unknown format {self.output_format!r}")
        if not self.window[0] < self.window[1]:
            raise UsageError("window must satisfy lo < hi")
        if self.tolerance is not None and not self.tolerance > 0:
            raise UsageError("tolerance must be positive")

    def spec(self):
        return {
            "friedrichs": KernelGamma0,
            "gamma1": KernelGamma1,
            "periodic": Periodic,
        }.get(self.extension, lambda: Separated(self.theta))()

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "n": self.n,
            "extension": self.extension,
            "theta": list(self.theta) if self.theta is not None else None,
            "lambda_grid": [{"re": z.real, "im": z.imag} for z in self.lambda_grid],
            "window": list(self.window),
            "output_format": self.output_format,
            "tolerance": self.tolerance,
        }


def parse_theta(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(","))
    except ValueError as exc:
        raise UsageError(f"cannot parse theta {text!r}") from exc


def parse_grid(text: str) -> tuple[complex, ...]:
    """'start:stop:count' (complex literals, inclusive) or a comma separated list."""
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            count = int(count)
            if count < 1:
                raise UsageError("grid count must be >= 1")
            a, b = complex(start), complex(stop)
            if count == 1:
                return (a,)
            return tuple(a + (b - a) * k / (count - 1) for k in range(count))
        pts = tuple(complex(t) for t in text.split(","))
    except ValueError as exc:
        raise UsageError(f"cannot parse lambda grid {text!r}") from exc
    if not pts:
        raise UsageError("empty lambda grid")
    return pts


def parse_window(text: str) -> tuple[float, float]:
    try:
        lo, hi = text.split(":")
        return float(lo), float(hi)
    except ValueError as exc:
        raise UsageError(f"cannot parse window {text!r}; expected lo:hi") from exc


def _load_toml(path: str) -> dict:
    import tomli

    try:
        with open(path, "rb") as fh:
            return tomli.load(fh)
    except (OSError, tomli.TOMLDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc


def build_config(ns: argparse.Namespace) -> RunConfig:
    raw = {
        "alpha": ns.alpha,
        "beta": ns.beta,
        "n": ns.power,
        "extension": ns.extension,
        "theta": ns.theta,
        "lambda_grid": ns.lambda_grid,
        "window": ns.window,
        "output_format": ns.format,
        "tolerance": ns.tolerance,
    }
    if ns.config:
        # the config file takes precedence over flags
        doc = _load_toml(ns.config)
        aliases = {"power": "n", "format": "output_format"}
        for key, val in doc.items():
            key = aliases.get(key, key)
            if key not in raw:
                raise UsageError(f"unknown config key {key!r}")
            raw[key] = val
    cfg = {}
    for key, val in raw.items():
        if val is None:
            continue
        if key == "theta" and isinstance(val, str):
            val = parse_theta(val)
        elif key == "theta":
            val = tuple(float(v) for v in val)
        elif key == "lambda_grid" and isinstance(val, str):
            val = parse_grid(val)
        elif key == "lambda_grid":
            val = tuple(complex(v) for v in val)
        elif key == "window" and isinstance(val, str):
            val = parse_window(val)
        elif key == "window":
            val = tuple(float(v) for v in val)
        cfg[key] = val
    try:
        return RunConfig(**cfg)
    except TypeError as exc:
        raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------------------
# serialization


def _num(x: float) -> str:
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return "null"
    text = format(x, ".17g")
    return "0" if text == "-0" else text


def dump_json(obj, indent: int = 0) -> str:
    """Deterministic JSON with 17 significant digits for every float."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _num(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dump_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dump_json(v, indent + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dump_json(v, indent + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _cplx(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def mfunction_records(lams: Sequence[complex], matrices: Sequence[np.ndarray]) -> list[dict]:
    return [{"lambda": _cplx(l), "matrix": [[_cplx(v) for v in row] for row in m]} for l, m in zip(lams, matrices)]


def mfunction_csv(lams: Sequence[complex], matrices: Sequence[np.ndarray]) -> str:
    size = matrices[0].shape[0] if matrices else 0
    header = ["lambda_re", "lambda_im"]
    for r in range(size):
        for c in range(size):
            header += [f"m_{r}{c}_re", f"m_{r}{c}_im"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for lam, m in zip(lams, matrices):
        row = [_num(lam.real), _num(lam.imag)]
        for v in np.asarray(m).ravel():
            row += [_num(v.real), _num(v.imag)]
        w.writerow(row)
    return buf.getvalue()


def read_mfunction(text: str) -> tuple[dict | None, list[tuple[complex, np.ndarray]]]:
    """Parse JSON or CSV output of the mfunction command."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(text)
        recs = []
        for r in doc["records"]:
            lam = complex(r["lambda"]["re"], r["lambda"]["im"])
            m = np.array([[complex(v["re"], v["im"]) for v in row] for row in r["matrix"]])
            recs.append((lam, m))
        return doc.get("config"), recs
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0][:2] != ["lambda_re", "lambda_im"]:
        raise UsageError("input is neither mfunction JSON nor CSV")
    size = int(round(math.sqrt((len(rows[0]) - 2) / 2)))
    recs = []
    for row in rows[1:]:
        vals = [float(v) for v in row]
        lam = complex(vals[0], vals[1])
        flat = [complex(vals[2 + 2 * k], vals[3 + 2 * k]) for k in range(size * size)]
        recs.append((lam, np.array(flat).reshape(size, size)))
    return None, recs


# ---------------------------------------------------------------------------
# commands


def _emit(text: str, out) -> None:
    out.write(text if text.endswith("\n") else text + "\n")


def cmd_gram_schmidt(cfg: RunConfig, out=sys.stdout) -> int:
    tol = cfg.tolerance if cfg.tolerance is not None else 1e-9
    try:
        basis = regularized_basis(cfg.params)
    except DegenerateDenominator as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    inter = interaction_matrix(basis)
    n = cfg.params.n
    coeffs = {
        "plus": [list(map(complex, row)) for row in basis.u_coeffs_plus],
        "minus": [list(map(complex, row)) for row in basis.u_coeffs_minus],
    }
    ok = inter.max_deviation <= tol
    if cfg.output_format == "json":
        doc = {
            "config": cfg.to_dict(),
            "u_coefficients": {
                side: [{"k": k + 1, "v_weights": [_cplx(c) for c in row]} for k, row in enumerate(rows)]
                for side, rows in coeffs.items()
            },
            "interaction_matrix": [[v.real for v in row] for row in inter.matrix],
            "max_deviation": inter.max_deviation,
            "pattern_holds": ok,
        }
        _emit(dump_json(doc), out)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["endpoint", "k"] + [f"v_{i + 1}" for i in range(n)])
        for side, sign in (("plus", "+1"), ("minus", "-1")):
            for k, row in enumerate(coeffs[side]):
                w.writerow([sign, k + 1] + [_num(c.real) for c in row])
        w.writerow([])
        w.writerow([f"col_{c}" for c in range(4 * n)])
        for row in inter.matrix:
            w.writerow([_num(v.real) for v in row])
        _emit(buf.getvalue(), out)
    if not ok:
        print(f"interaction pattern violated: max deviation {inter.max_deviation:.3e} > {tol:.1e}", file=sys.stderr)
        return EXIT_PATTERN
    return EXIT_OK


def _closed_forms(cfg: RunConfig) -> list[tuple[int, float]] | None:
    if cfg.extension == "friedrichs":
        family = "sigma0"
    elif cfg.extension == "gamma1" or (cfg.extension == "separated" and all(t == 0 for t in cfg.theta)):
        family = "sigma1"
    else:
        return None
    lo, hi = cfg.window
    s = cfg.alpha + cfg.beta + 1.0
    m_max = 1
    while (m_max * (m_max - s + 1.0)) ** cfg.n <= hi or m_max < 2:
        m_max += 1
    res = closed_form_spectrum(family, m_max, cfg.params)
    return [(ev.index, ev.lam) for ev in res.eigenvalues if lo <= ev.lam <= hi]


def spectrum_rows(cfg: RunConfig) -> tuple[list[dict], bool, list[str]]:
    tol = cfg.tolerance if cfg.tolerance is not None else 1e-6
    scan = pole_scan(cfg.spec(), cfg.window, cfg.params)
    closed = _closed_forms(cfg)
    rows: list[dict] = []
    if closed is None:
        for k, ev in enumerate(scan.eigenvalues):
            rows.append({"m_or_index": k, "lambda_closed_form": None, "lambda_scanned": ev.lam, "residual": ev.residual})
        return rows, True, scan.failures
    unused = list(scan.eigenvalues)
    ok = True
    for m, lam in closed:
        match = min(unused, key=lambda ev: abs(ev.lam - lam), default=None)
        if match is not None and abs(match.lam - lam) <= tol * max(1.0, abs(lam)):
            unused.remove(match)
            rows.append({"m_or_index": m, "lambda_closed_form": lam, "lambda_scanned": match.lam, "residual": match.residual})
        else:
            ok = False
            rows.append({"m_or_index": m, "lambda_closed_form": lam, "lambda_scanned": None, "residual": None})
    for ev in unused:
        ok = False
        rows.append({"m_or_index": None, "lambda_closed_form": None, "lambda_scanned": ev.lam, "residual": ev.residual})
    return rows, ok, scan.failures


def cmd_spectrum(cfg: RunConfig, out=sys.stdout) -> int:
    rows, ok, failures = spectrum_rows(cfg)
    if cfg.output_format == "json":
        _emit(dump_json({"config": cfg.to_dict(), "rows": rows, "scan_failures": failures}), out)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        keys = ["m_or_index", "lambda_closed_form", "lambda_scanned", "residual"]
        w.writerow(keys)
        for r in rows:
            w.writerow(["" if r[k] is None else (_num(r[k]) if isinstance(r[k], float) else r[k]) for k in keys])
        _emit(buf.getvalue(), out)
    for f in failures:
        print(f"warning: {f}", file=sys.stderr)
    if not ok:
        print("error: scanned poles and closed-form spectrum do not match", file=sys.stderr)
        return EXIT_UNMATCHED
    return EXIT_OK


def evaluate_grid(cfg: RunConfig) -> tuple[list[complex], list[np.ndarray], list[tuple[complex, str]]]:
    ext = cfg.spec()
    lams, mats, skipped = [], [], []
    for lam in cfg.lambda_grid:
        try:
            mats.append(weyl_m(lam, ext, cfg.params).m)
            lams.append(lam)
        except JacobiPowersError as exc:
            skipped.append((lam, f"{type(exc).__name__}: {exc}"))
    return lams, mats, skipped


def cmd_mfunction(cfg: RunConfig, out=sys.stdout) -> int:
    if not cfg.lambda_grid:
        cfg.lambda_grid = parse_grid(DEFAULT_GRID)
    lams, mats, skipped = evaluate_grid(cfg)
    if cfg.output_format == "json":
        _emit(dump_json({"config": cfg.to_dict(), "records": mfunction_records(lams, mats)}), out)
    else:
        _emit(mfunction_csv(lams, mats), out)
    if skipped:
        for lam, why in skipped:
            print(f"skipped lambda={lam}: {why}", file=sys.stderr)
        return EXIT_SKIPPED
    return EXIT_OK


DEFAULT_GRID = "1j:10+1j:5"


# ---------------------------------------------------------------------------
# verification suites


@dataclass
class SuiteResult:
    name: str
    passed: bool
    worst: float
    tolerance: float
    seconds: float
    detail: str = ""


def _suite(name: str, tol: float, fn: Callable[[], tuple[float, str]]) -> SuiteResult:
    t0 = time.perf_counter()
    try:
        worst, detail = fn()
        ok = worst <= tol
    except JacobiPowersError as exc:
        worst, detail, ok = math.inf, f"{type(exc).__name__}: {exc}", False
    return SuiteResult(name, ok, worst, tol, time.perf_counter() - t0, detail)


def run_suites(cfg: RunConfig, records: list[tuple[complex, np.ndarray]] | None = None, record_params: Parameters | None = None, record_ext=None) -> list[SuiteResult]:
    p = cfg.params
    t = cfg.tolerance
    basis = regularized_basis(p)
    funcs = basis.ordered()
    n = p.n
    results = []

    def gs():
        worst = 0.0
        for e in (-1, 1):
            phi, u = basis.phi(e), basis.u(e)
            for j in range(n):
                for k in range(n):
                    worst = max(worst, abs(sesquilinear_form(phi[j], u[k], p, e) - (j == k)))
                    worst = max(worst, abs(sesquilinear_form(u[j], u[k], p, e)))
        return worst, "max |[phi_j,u_k] - delta_jk|, |[u_j,u_k]|"

    def green():
        return max(green_identity_residual(f, g, basis) for f in funcs for g in funcs), f"{len(funcs) ** 2} pairs"

    def quasi():
        return max(float(np.max(np.abs(gamma0(f, basis) - gamma0_from_recursion(f, basis)))) for f in funcs), "recursion vs phi pairings"

    def normalization():
        worst = 0.0
        pts = list(HERGLOTZ_SAMPLES) + [z.conjugate() for z in HERGLOTZ_SAMPLES]
        pts += [z for z in cfg.lambda_grid if z != 0]
        for lam in pts:
            cc = connection_constants(spectral_decompose(lam, p), p)
            worst = max(worst, float(np.max(cc.normalization_residual())))
        return worst, f"{len(pts)} spectral points"

    def oracle():
        rng = random.Random(20240611)
        pairs = [(rng.randrange(len(funcs)), rng.randrange(len(funcs)), rng.choice((-1, 1))) for _ in range(12)]
        worst = 0.0
        for a, b, e in pairs:
            sym = sesquilinear_form(funcs[a], funcs[b], p, e)
            num = numeric_limit_oracle(funcs[a], funcs[b], p, e)
            worst = max(worst, abs(sym - num) / max(1.0, abs(sym)))
        return worst, f"{len(pairs)} random pairs, relative"

    def herglotz():
        if records is not None:
            verdicts = herglotz_from_matrices(records)
            bad = [v for v in verdicts if not v.ok]
            if not verdicts:
                return math.inf, "no upper half-plane records in input"
            if record_params is not None and record_ext is not None:
                fresh = herglotz_check(record_ext, [v.lam for v in verdicts], record_params)
                if [v.ok for v in fresh] != [v.ok for v in verdicts]:
                    return math.inf, "file verdicts differ from recomputed verdicts"
            worst = max([max(0.0, -v.min_imag_eig) for v in verdicts] + [v.symmetry_error for v in verdicts] + [0.0])
            return worst, f"{len(verdicts)} file records, {len(bad)} failing"
        worst, bad = 0.0, []
        exts = [KernelGamma0(), KernelGamma1(), Separated((0.0,) * 2 * n), Periodic()]
        for ext in exts:
            for v in herglotz_check(ext, HERGLOTZ_SAMPLES, p):
                worst = max(worst, max(0.0, -v.min_imag_eig), v.symmetry_error)
                if not v.ok:
                    bad.append(f"{ext.name}@{v.lam}")
        return worst, ("failing: " + ", ".join(bad[:4])) if bad else "4 families x 4 samples"

    def poles():
        worst = 0.0
        s = p.alpha + p.beta + 1.0
        for ext, family in ((KernelGamma0(), "sigma0"), (KernelGamma1(), "sigma1")):
            closed = [ev.lam for ev in closed_form_spectrum(family, 3, p).eigenvalues]
            hi = max(closed) + 1.0
            scanned = pole_scan(ext, (-(s**n) - 0.5, hi), p).values
            if len(scanned) != len(set(closed)):
                return math.inf, f"{ext.name}: {len(scanned)} scanned vs {len(set(closed))} closed form"
            for lam in closed:
                worst = max(worst, min(abs(lam - x) for x in scanned) / max(1.0, abs(lam)))
        return worst, "kernel families, m <= 3"

    herg_tol = t if t is not None else 1e-9
    results.append(_suite("gram-schmidt", t if t is not None else 1e-9, gs))
    results.append(_suite("green-identity", t if t is not None else 1e-9, green))
    results.append(_suite("quasi-derivative", t if t is not None else 1e-9, quasi))
    results.append(_suite("normalization", t if t is not None else 1e-10, normalization))
    results.append(_suite("oracle", t if t is not None else 1e-6, oracle))
    results.append(_suite("herglotz", herg_tol, herglotz))
    results.append(_suite("poles", t if t is not None else 1e-8, poles))
    return results


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def cmd_verify(cfg: RunConfig, input_path: str | None = None, out=sys.stdout) -> int:
    records = rec_params = rec_ext = None
    if input_path is not None:
        try:
            file_cfg, records = read_mfunction(_read_input(input_path))
        except (ValueError, KeyError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot parse mfunction input: {exc}") from exc
        if file_cfg is not None:
            theta = file_cfg.get("theta")
            rc = RunConfig(file_cfg["alpha"], file_cfg["beta"], file_cfg["n"], file_cfg["extension"], tuple(theta) if theta else None)
            rec_params, rec_ext = rc.params, rc.spec()
    results = run_suites(cfg, records, rec_params, rec_ext)
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        out.write(f"{mark} {r.name:<17} worst={r.worst:.3e} tol={r.tolerance:.1e} ({r.seconds:.2f}s) {r.detail}\n")
    failing = [r for r in results if not r.passed]
    if failing:
        print(f"first failing suite: {failing[0].name}", file=sys.stderr)
        return EXIT_PATTERN
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=float, default=None, help="weight exponent at +1, in (0, 1) (default 0.3)")
    common.add_argument("--beta", type=float, default=None, help="weight exponent at -1, in (0, 1) (default 0.7)")
    common.add_argument("--power", type=int, default=None, help="power n of the operator (default 2)")
    common.add_argument("--extension", choices=EXTENSIONS, default=None, help="self-adjoint extension family")
    common.add_argument("--theta", default=None, help="c1,...,c2n for the separated family")
    common.add_argument("--lambda-grid", default=None, help="start:stop:count with complex literals, or a comma list")
    common.add_argument("--window", default=None, help="real interval lo:hi for pole scans")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--config", default=None, help="TOML file; its values override flags")
    common.add_argument("--tolerance", type=float, default=None, help="override suite tolerances")
    common.add_argument("--output", default=None, help="write results here instead of stdout")

    parser = _Parser(prog="jacobi-powers", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("gram-schmidt", parents=[common], help="u_k coefficients and the interaction matrix")
    sub.add_parser("spectrum", parents=[common], help="scanned poles against closed-form spectra")
    sub.add_parser("mfunction", parents=[common], help="Weyl function on a lambda grid")
    v = sub.add_parser("verify", parents=[common], help="run all verification suites")
    v.add_argument("--input", default=None, help="mfunction output to check (JSON or CSV, '-' for stdin)")
    return parser


_VALUE_FLAGS = ("--window", "--lambda-grid", "--theta")


def _glue_negative_values(argv: Sequence[str]) -> list[str]:
    # argparse reads "-0.5:20" as an option; rewrite "--window -0.5:20" to "--window=-0.5:20"
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and not nxt.startswith("--"):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(_glue_negative_values(sys.argv[1:] if argv is None else list(argv)))
    try:
        cfg = build_config(ns)
        out = open(ns.output, "w", encoding="utf-8", newline="") if ns.output else sys.stdout
        try:
            if ns.command == "gram-schmidt":
                return cmd_gram_schmidt(cfg, out)
            if ns.command == "spectrum":
                return cmd_spectrum(cfg, out)
            if ns.command == "mfunction":
                return cmd_mfunction(cfg, out)
            return cmd_verify(cfg, ns.input, out)
        finally:
            if out is not sys.stdout:
                out.close()
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
