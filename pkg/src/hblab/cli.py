"""``hb-lab``: batch runner for the numerical experiments.

Usage::

    hb-lab <experiment> [--key value]... [--config path] [--out dir]

Each run writes ``report.json`` (and possibly CSV traces) into the output
directory.  Exit status is 0 when the experiment's verdict comes out as
expected, 2 when it does not, and 1 on any error.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import logging
import os
import re
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import counterexamples as cx
from . import norms, rational, toeplitz
from .exceptions import HBLabError, ParseError
from .hardy import pair_from_smirnov
from .series import TaylorSeries, h2_norm, neg_log_series

log = logging.getLogger("hblab")

SCHEMA = 1
EXPERIMENTS = ("pair", "norm_compare", "rational_demo", "gap_divergence",
               "blaschke_counterexample", "limit_sweep", "kernel_search", "sobolev_check")
EXIT_OK, EXIT_ERROR, EXIT_VERDICT = 0, 1, 2
PRESETS = ("corollary_6_2", "corollary_6_3", "golden_pair", "neg_log")


class ConfigError(HBLabError):
    """Bad experiment configuration."""


# ---------------------------------------------------------------------------
# series text
# ---------------------------------------------------------------------------

_NUM = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_UNSIGNED = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


def _parse_literal(text: str, pos: int) -> tuple[complex, int]:
    """Parse ``re``, ``re+imi``, ``re-imi`` or ``imi`` starting at ``pos``."""
    m = _NUM.match(text, pos)
    if not m:
        raise ParseError(f"expected a number, found {text[pos:pos + 1]!r}", pos)
    end = m.end()
    if end < len(text) and text[end] == "i":
        return complex(0.0, float(m.group())), end + 1
    value = complex(float(m.group()))
    if end < len(text) and text[end] in "+-":
        sign_at = end
        im = _UNSIGNED.match(text, end + 1)
        if not im or im.end() >= len(text) or text[im.end()] != "i":
            raise ParseError("malformed imaginary part", sign_at)
        sign = -1.0 if text[sign_at] == "-" else 1.0
        value += complex(0.0, sign * float(im.group()))
        end = im.end() + 1
    return value, end


def _parse_list(text: str, start: int, stop: int) -> np.ndarray:
    vals = []
    pos = start
    while True:
        v, pos = _parse_literal(text[:stop], pos)
        vals.append(v)
        if pos == stop:
            return np.array(vals)
        if text[pos] != ",":
            raise ParseError(f"unexpected {text[pos]!r}", pos)
        pos += 1


def parse_series(text: str, N: int = 4096):
    """``poly:...``, ``rational:p;q`` or ``preset:name`` to a series or rational function."""
    head, sep, body = text.partition(":")
    if not sep:
        raise ParseError("missing kind prefix (poly:, rational:, preset:)", 0)
    start = len(head) + 1
    if head == "poly":
        return TaylorSeries(_parse_list(text, start, len(text)))
    if head == "rational":
        semi = text.find(";", start)
        if semi < 0:
            raise ParseError("rational needs 'p;q'", len(text))
        p = _parse_list(text, start, semi)
        q = _parse_list(text, semi + 1, len(text))
        try:
            return rational.RationalFn(p, q)
        except ValueError as exc:
            raise ParseError(str(exc), start) from None
    if head == "preset":
        return _preset(body, N, start)
    raise ParseError(f"unknown kind {head!r}", 0)


def _preset(name: str, N: int, offset: int):
    if name == "golden_pair":
        return rational.RationalFn([1.0], [1.0, -1.0])
    if name == "neg_log":
        return TaylorSeries(neg_log_series(N))
    if name in ("corollary_6_2", "corollary_6_3"):
        cfg = getattr(cx.CounterexampleConfig, name)(N=N)
        return cx.build_counterexample(cfg)[0]
    raise ParseError(f"unknown preset {name!r}", offset)


def parse_poles(text: str) -> rational.CirclePoles:
    """``lambda:m,lambda:m`` with complex literals, e.g. ``1:2,-1:1``."""
    out = []
    pos = 0
    while True:
        lam, pos = _parse_literal(text, pos)
        if pos >= len(text) or text[pos] != ":":
            raise ParseError("expected ':multiplicity'", pos)
        m = re.compile(r"\d+").match(text, pos + 1)
        if not m:
            raise ParseError("expected an integer multiplicity", pos + 1)
        out.append((lam, int(m.group())))
        pos = m.end()
        if pos == len(text):
            return rational.CirclePoles(tuple(out))
        if text[pos] != ",":
            raise ParseError(f"unexpected {text[pos]!r}", pos)
        pos += 1


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def read_config_file(path: str) -> dict:
    params = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        if not eq:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        params[key.strip()] = value.strip()
    return params


def _pairs(extra: list) -> dict:
    params = {}
    it = iter(extra)
    for tok in it:
        if not tok.startswith("--") or len(tok) <= 2:
            raise ConfigError(f"unexpected argument {tok!r}")
        key = tok[2:]
        if "=" in key:
            key, value = key.split("=", 1)
        else:
            try:
                value = next(it)
            except StopIteration:
                raise ConfigError(f"--{key} needs a value") from None
        params[key.replace("-", "_")] = value
    return params


class Params:
    """Typed access to string parameters, recording what was used."""

    def __init__(self, raw: dict):
        self.raw = dict(raw)
        self.used = {}

    def get(self, key, default=None):
        value = self.raw.get(key, default)
        self.used[key] = value
        return value

    def int(self, key, default):
        v = self.get(key, default)
        try:
            return int(v)
        except (TypeError, ValueError):
            raise ConfigError(f"--{key} must be an integer, got {v!r}") from None

    def float(self, key, default):
        v = self.get(key, default)
        try:
            return float(v)
        except (TypeError, ValueError):
            raise ConfigError(f"--{key} must be a number, got {v!r}") from None

    def pow2(self, key, default):
        v = self.int(key, default)
        if v < 1 or v & (v - 1):
            raise ConfigError(f"--{key} must be a power of two, got {v}")
        return v

    def tol(self, key, default):
        v = self.float(key, default)
        if not v > 0:
            raise ConfigError(f"--{key} must be positive, got {v}")
        return v

    def series(self, key, default, N=4096):
        text = self.get(key, default)
        if text is None:
            raise ConfigError(f"--{key} is required")
        return parse_series(text, N)


def validate(params: dict):
    for key, value in params.items():
        if key in ("N", "M"):
            Params(params).pow2(key, value)
        if key.endswith("tol"):
            Params(params).tol(key, value)


def _threads() -> int:
    raw = os.environ.get("HB_LAB_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return max(1, min(8, os.cpu_count() or 1))


def _pmap(fn, items):
    items = list(items)
    n = _threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, TaylorSeries):
        return _jsonable(x.coeffs)
    if isinstance(x, (complex, np.complexfloating)):
        return [_jsonable(float(x.real)), _jsonable(float(x.imag))]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if np.isfinite(x) else repr(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: Path, index, values, bound=None):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["index", "value_re", "value_im"] + (["bound"] if bound is not None else [])
    w.writerow(header)
    values = np.asarray(values, dtype=complex)
    for k, i in enumerate(index):
        row = [int(i), repr(float(values[k].real)), repr(float(values[k].imag))]
        if bound is not None:
            row.append(repr(float(bound[k])))
        w.writerow(row)
    _atomic_write(path, buf.getvalue())


def criteria_constants() -> dict:
    return {
        "member_tol": toeplitz.MEMBER_TOL,
        "condition_limit": toeplitz.COND_LIMIT,
        "g_tail": {"fraction": toeplitz.TAIL_FRACTION, "energy": toeplitz.TAIL_ENERGY},
        "non_member_growth": toeplitz.GROWTH_FACTOR,
        "trust_tail_ratio": norms.TRUST_TAIL_RATIO,
        "trace_divergence_ratio": norms.DIVERGENCE_RATIO,
        "trace_roundoff_factor": norms.ROUNDOFF_FACTOR,
        "trace_converged_tol": norms.CONVERGED_TOL,
        "sweep_tol": norms.SWEEP_TOL,
        "sweep_growth": norms.SWEEP_GROWTH,
        "certificate_growth": cx.GROWTH_RATIO,
        "certificate_steps": cx.GROWTH_STEPS,
        "fejer_riesz_circle_tol": rational.CIRCLE_TOL,
        "fejer_riesz_pairing_tol": rational.PAIRING_TOL,
    }


# ---------------------------------------------------------------------------
# experiments; each returns (results dict, success flag)
# ---------------------------------------------------------------------------

def _pair_for(phi, N: int, M: int):
    if isinstance(phi, rational.RationalFn):
        return rational.rational_pair(phi, N), phi.series(N)
    return pair_from_smirnov(phi, M, N), phi


def exp_pair(P: Params, out: Path):
    N = P.pow2("N", 1024)
    M = P.pow2("M", 4 * N)
    show = P.int("show", 16)
    pair, _ = _pair_for(P.series("phi", None, N), N, M)
    write_csv(out / "b.csv", range(pair.b.coeffs.size), pair.b.coeffs)
    write_csv(out / "a.csv", range(pair.a.coeffs.size), pair.a.coeffs)
    res = {"b": pair.b.coeffs[:show], "a": pair.a.coeffs[:show],
           "unimodularity_residual": pair.unimodularity_residual, "grid_size": pair.grid_size}
    return res, True


def exp_norm_compare(P: Params, out: Path):
    N = P.pow2("N", 4096)
    M = P.pow2("M", 2 * N)
    tol = P.tol("tol", 1e-6)
    phi = P.series("phi", "rational:1,1;1,-1", N)
    f = P.series("f", "poly:1", N)
    pair, phi_series = _pair_for(phi, N, M)
    est = norms.coefficient_norm(phi_series, f)
    sol = toeplitz.membership_solve(pair, f)
    gap = abs(est.norm_sq - sol.hb_norm_sq) / max(sol.hb_norm_sq, 1e-300)
    res = {"coefficient_norm": est.norm_sq, "membership_solve": sol.hb_norm_sq,
           "relative_gap": gap, "residual": sol.residual, "verdict": sol.verdict,
           "tail_ratio": est.tail_ratio}
    return res, gap <= tol


def exp_rational_demo(P: Params, out: Path):
    N = P.pow2("N", 4096)
    phi = P.series("phi", "rational:1,1;1,-1", N)
    f = P.series("f", "poly:1,2,3", N)
    rows = P.int("rows", min(8, f.degree + 1))
    if not isinstance(phi, rational.RationalFn):
        raise ConfigError("--phi must be rational:p;q")
    poles = rational.circle_poles(phi.q)
    dec = rational.rational_membership(f, poles)
    sup_abs, growth = rational.coefficient_growth_probe(phi, N)
    series = phi.series(N)
    traces = _pmap(lambda m: norms.series_rows_trace(series, f, m), range(rows))
    res = {"poles": [[lam, m] for lam, m in poles], "interp": dec.interp,
           "tail_verdict": dec.tail_verdict, "sup_abs": sup_abs, "growth_exponent": growth,
           "row_verdicts": [t.verdict for t in traces]}
    return res, dec.tail_verdict != rational.INCONCLUSIVE


def _log_checkpoints(J_max: int, count: int = 2000) -> np.ndarray:
    pts = np.unique(np.round(np.geomspace(1, J_max, count)).astype(int))
    return np.concatenate([[0], pts])


def exp_gap_divergence(P: Params, out: Path):
    N = P.pow2("N", 1 << 20)
    poles = parse_poles(P.get("poles", "1:2"))
    K = P.int("K", 3)
    alpha = P.float("alpha", 0.75)
    f = rational.gap_counterexample(poles, K, alpha, N)
    q = np.array([1.0 + 0j])
    for lam in poles.nodes():
        q = np.convolve(q, [1.0, -np.conj(lam)])
    phi = TaylorSeries(rational.series_of_ratio([1.0], q, N))
    trace = norms.series_rows_trace(phi, f, 0, _log_checkpoints(N))
    dec = rational.rational_membership(f, poles)
    write_csv(out / "partial_sums.csv", trace.checkpoints, trace.values)
    write_csv(out / "block_amplitudes.csv", range(trace.block_amplitudes.size),
              trace.block_amplitudes)
    res = {"trace_verdict": trace.verdict, "growth_exponent": trace.growth_exponent,
           "block_amplitudes": trace.block_amplitudes, "tail_verdict": dec.tail_verdict,
           "h2_norm_f": h2_norm(f)}
    ok = trace.verdict == norms.DIVERGENT and dec.tail_verdict == rational.SQUARE_SUMMABLE
    return res, ok


def exp_blaschke_counterexample(P: Params, out: Path):
    preset = P.get("preset", "default")
    kw = {"N": P.pow2("N", 1 << 20), "n_zeros": P.int("n_zeros", 7)}
    if "c_rate" in P.raw:
        kw["c_rate"] = P.float("c_rate", None)
    if preset == "default":
        cfg = cx.CounterexampleConfig(**kw)
    elif preset in ("corollary_6_2", "corollary_6_3"):
        cfg = getattr(cx.CounterexampleConfig, preset)(**kw)
    else:
        raise ConfigError(f"unknown preset {preset!r}")
    cert = cx.divergence_certificate(cfg)
    rows = cert.rows
    write_csv(out / "certificate.csv", [r.n for r in rows], [r.abel_value for r in rows],
              [r.lower_bound for r in rows])
    res = {"config": cfg.to_dict(), "verdict": cert.verdict,
           "growth_ratios": cert.growth_ratios, "lower_bounds_hold": cert.lower_bounds_hold,
           "rows": [{"n": r.n, "t": r.t, "S": r.abel_value, "lower_bound": r.lower_bound,
                     "slack": r.slack, "closed_form": r.closed_form} for r in rows],
           "blaschke_inf": rows[0].blaschke_inf if rows else 1.0}
    return res, cert.verdict and cert.lower_bounds_hold


def exp_limit_sweep(P: Params, out: Path):
    N = P.pow2("N", 4096)
    M = P.pow2("M", 1 << 16)
    phi = P.series("phi", "rational:1,1;1,-1", N)
    f = P.series("f", "poly:1", N)
    base = P.float("eps_base", 2.0)
    steps = P.int("eps_steps", 12)
    expect = P.get("expect", "any")
    pair, _ = _pair_for(phi, N, M)
    eps = base ** -np.arange(1, steps + 1, dtype=float)
    sweep = norms.limit_norm_sweep(pair, f, eps, N=N, M=M)
    write_csv(out / "sweep.csv", range(eps.size), sweep.G, eps)
    res = {"epsilons": eps, "G": sweep.G, "verdict": sweep.verdict, "limit": sweep.limit,
           "norm_sq": sweep.norm_sq}
    if expect == "member":
        sol = toeplitz.membership_solve(pair, f)
        res["membership_solve"] = sol.hb_norm_sq
        ok = sweep.verdict == norms.CONVERGED and \
            abs(sweep.norm_sq - sol.hb_norm_sq) <= norms.SWEEP_TOL * sol.hb_norm_sq
    elif expect == "non_member":
        ok = sweep.verdict == norms.DIVERGENT
    else:
        ok = sweep.verdict != norms.INCONCLUSIVE
    return res, ok


def exp_kernel_search(P: Params, out: Path):
    Nf = P.int("Nf", 32)
    rows = P.int("rows", Nf + 1)
    phi = P.series("phi", "poly:1,1")
    if isinstance(phi, rational.RationalFn):
        phi = phi.series(max(4096, rows))
    sigma, f = toeplitz.kernel_search(phi, Nf, rows)
    write_csv(out / "kernel_vector.csv", range(f.coeffs.size), f.coeffs)
    return {"sigma_min": sigma, "f": f.coeffs}, True


def exp_sobolev_check(P: Params, out: Path, seed: int):
    trials = P.int("trials", 1000)
    degree = P.int("degree", 64)
    s_values = [float(x) for x in str(P.get("s", "0,0.5,1.5")).split(",")]
    rng = np.random.default_rng(seed)
    cases = []
    for _ in range(trials):
        u = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
        v = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
        cases.append((u, v, float(rng.choice(s_values)), int(rng.integers(0, degree + 1))))

    def check(case):
        u, v, s, m = case
        return norms.convolution_bound_check(TaylorSeries(u), TaylorSeries(v), s, m)

    results = _pmap(check, cases)
    violations = sum(lhs > rhs + 1e-12 for lhs, rhs in results)
    worst = max(lhs / rhs for lhs, rhs in results) if results else 0.0
    return {"trials": trials, "violations": violations, "max_ratio": worst}, violations == 0


def run(experiment: str, params: dict, out_dir: str = ".", seed: int = 0) -> int:
    """Run one experiment, write its report and return the exit status."""
    out = Path(out_dir)
    P = Params(params)
    validate(params)
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {experiment!r}; choose from {', '.join(EXPERIMENTS)}")
    fn = globals()[f"exp_{experiment}"]
    results, ok = fn(P, out, seed) if experiment == "sobolev_check" else fn(P, out)
    unused = sorted(set(params) - set(P.used))
    if unused:
        raise ConfigError(f"unknown parameter(s): {', '.join(unused)}")
    report = {
        "schema": SCHEMA,
        "experiment": experiment,
        "parameters": {k: v for k, v in sorted(P.used.items())},
        "seed": seed,
        "criteria": criteria_constants(),
        "results": results,
        "success": bool(ok),
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    text = json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n"
    _atomic_write(out / "report.json", text)
    return EXIT_OK if ok else EXIT_VERDICT


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hb-lab", description=__doc__.splitlines()[0])
    ap.add_argument("experiment", help=", ".join(EXPERIMENTS))
    ap.add_argument("--config", help="file of 'key = value' lines; flags take precedence")
    ap.add_argument("--out", default=".", help="output directory (default: current)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args, extra = ap.parse_known_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        params = read_config_file(args.config) if args.config else {}
        params.update(_pairs(extra))
        return run(args.experiment, params, args.out, args.seed)
    except (HBLabError, ValueError, OSError) as exc:
        print(f"hb-lab: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
