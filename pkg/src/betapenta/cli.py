"""Command-line entry point ``betapenta``.

Subcommands::

    betapenta qdilog eval --hbar 0.5 --x 0.3+0.1j [--method auto|integral|product]
    betapenta verify pentagon --solution phi-plus|phi-minus|quasiperiodic|beta|const|char
                              --group r|zn:<N> --hbar H --samples N --seed S --tol T
    betapenta verify faddeev --tuple phi|reflected|gaussian|const ...
    betapenta verify automorphic --policy strip|regulator ...
    betapenta verify simplicial --group zn:<N>|r --solution const|phi-plus --trials N ...
    betapenta selftest [--only 1,6,10] [--tol T] [--out FILE]

Every verify command prints a one-line summary and optionally writes the JSON
report (``--out``) and a CSV flattening (``--csv``).  ``--config FILE`` reads
``key = value`` lines; command-line flags win.  ``BETAPENTA_THREADS`` caps the
worker threads used for sample fan-out.  Exit codes: 0 pass, 1 fail, 2 bad
configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from typing import Callable, Sequence

import numpy as np

from . import battery
from . import faddeev as fd
from . import pentagon as pt
from .automorphic import (REGULATOR, STRIP, lift_theorem1, make_data, quotient_samples,
                          verify_eq11, verify_quasiperiodicity)
from .errors import BetaPentaError, ConfigError
from .lca import CYCLIC, REALS, parse_group
from .qdilog import Dilog, EvalMethod, make_context, phi_eval, psi_eval
from .report import SCHEMA_VERSION, PointRecord, VerificationReport
from .simplicial import random_labeling, verify_23move

SOLUTIONS = ("phi-plus", "phi-minus", "quasiperiodic", "beta", "const", "char")
TUPLES = ("phi", "reflected-phi", "reflected", "gaussian", "const")


@dataclass
class SuiteConfig:
    suite: str
    solution: str = "const"
    group: str = "zn:4"
    hbar: float = 0.5
    samples: int = 5
    seed: int = 0
    tol: float = 1e-6
    policy: str = STRIP
    tuple: str = "phi"
    eps: float = 0.05
    out: str | None = None
    csv: str | None = None

    def validate(self) -> None:
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.samples < 1:
            raise ConfigError("sample count must be at least 1")
        if not self.hbar > 0:
            raise ConfigError("hbar must be positive")
        parse_group(self.group)
        if self.solution not in SOLUTIONS:
            raise ConfigError(f"unknown solution {self.solution!r}")
        if self.policy not in (STRIP, REGULATOR):
            raise ConfigError(f"unknown policy {self.policy!r}")
        if self.tuple not in TUPLES:
            raise ConfigError(f"unknown tuple {self.tuple!r}")


def read_config(path: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key = value")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


def _coerce(cfg_fields, values: dict[str, str]) -> dict:
    types = {f.name: f.type for f in cfg_fields}
    out = {}
    for k, v in values.items():
        if k not in types:
            raise ConfigError(f"unknown config key {k!r}")
        t = types[k]
        try:
            if "int" in t and "float" not in t:
                out[k] = int(v)
            elif "float" in t:
                out[k] = float(v)
            else:
                out[k] = v
        except ValueError as exc:
            raise ConfigError(f"bad value for {k}: {v!r}") from exc
    return out


def threads() -> int:
    raw = os.environ.get("BETAPENTA_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"BETAPENTA_THREADS must be an integer, got {raw!r}") from exc
    return max(1, n)


def fan_out(fn: Callable, items: Sequence) -> list:
    """Map ``fn`` over ``items`` in order, on up to BETAPENTA_THREADS threads."""
    n = threads()
    if n == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _merge(suite: str, params: dict, tol: float, parts: list[VerificationReport]):
    rep = VerificationReport(suite, params, tol)
    for p in parts:
        rep.extend(p)
    return rep


# ---------------------------------------------------------------------------
# suites

def _pentagon_family(cfg: SuiteConfig):
    g = parse_group(cfg.group)
    if g.kind == CYCLIC:
        if cfg.solution == "const":
            return pt.constant_solution(g)
        if cfg.solution == "char":
            rng = np.random.default_rng(cfg.seed)
            return pt.character_solution(g, *(int(k) for k in rng.integers(0, g.n, 5)))
        raise ConfigError(f"solution {cfg.solution!r} is not defined over {cfg.group}")
    if g.kind != REALS:
        raise ConfigError(f"verify pentagon supports r and zn:<N>, not {cfg.group}")
    ctx = make_context(cfg.hbar)
    D = Dilog(ctx)
    if cfg.solution == "phi-plus":
        return pt.phi_plus_family(ctx, D)
    if cfg.solution == "phi-minus":
        return pt.phi_minus_family(ctx, D)
    if cfg.solution == "quasiperiodic":
        return pt.imp_family(ctx, D)
    if cfg.solution == "beta":
        return pt.beta_family(cfg.eps)
    raise ConfigError(f"solution {cfg.solution!r} is not defined over the reals")


def suite_pentagon(cfg: SuiteConfig) -> VerificationReport:
    fam = _pentagon_family(cfg)
    rng = np.random.default_rng(cfg.seed)
    if fam.group.kind == CYCLIC:
        samples = pt.finite_samples(fam.group, rng, cfg.samples)
    else:
        samples = pt.complexified_samples(rng, cfg.samples, cfg.hbar)
    parts = fan_out(lambda s: pt.verify_pentagon(fam, [s], cfg.tol), samples)
    return _merge("pentagon", {"solution": cfg.solution, "group": cfg.group, "hbar": cfg.hbar,
                               "seed": cfg.seed}, cfg.tol, parts)


def suite_faddeev(cfg: SuiteConfig) -> VerificationReport:
    ctx = make_context(cfg.hbar)
    if cfg.tuple in ("phi", "reflected-phi", "reflected"):
        t = fd.make_phi(ctx)
        if cfg.tuple != "phi":
            t = fd.make_reflected(t)
    elif cfg.tuple == "gaussian":
        t = fd.make_gaussian(*fd.gaussian_solution())
    else:
        t = fd.make_constant()
    rng = np.random.default_rng(cfg.seed)
    singular = (0.0,) if t.tilde_singular[0] else ()
    samples = fd.sample_pairs(rng, cfg.samples, singular)
    parts = fan_out(lambda s: fd.verify_eq50(t, [s], cfg.tol), samples)
    parts += fan_out(lambda s: fd.verify_conjugate_identity(t, [s], cfg.tol), samples)
    return _merge("faddeev", {"tuple": cfg.tuple, "hbar": cfg.hbar, "seed": cfg.seed},
                  cfg.tol, parts)


def suite_automorphic(cfg: SuiteConfig) -> VerificationReport:
    ctx = make_context(cfg.hbar)
    q = lift_theorem1(pt.imp_family(ctx), make_data(), cfg.policy)
    rng = np.random.default_rng(cfg.seed)
    cb = ctx.cb
    # inside the strip of absolute convergence, where both policies apply
    pts = [(complex(a, 0.3 * cb), complex(b, -0.1 * cb))
           for a, b in rng.uniform(-0.5, 0.5, (cfg.samples, 2))]
    parts = fan_out(lambda p: verify_quasiperiodicity(q, [p], cfg.tol), pts)
    samples = quotient_samples(rng, cfg.samples, cfg.hbar)
    # the quotient pentagon nests these sums in a contour integral; use the strip policy
    qs = lift_theorem1(pt.imp_family(ctx), make_data(), STRIP)
    parts += fan_out(lambda s: verify_eq11(qs, [s], cfg.tol), samples)
    return _merge("automorphic", {"hbar": cfg.hbar, "policy": cfg.policy, "seed": cfg.seed},
                  cfg.tol, parts)


def suite_simplicial(cfg: SuiteConfig) -> VerificationReport:
    fam = _pentagon_family(cfg)
    rng = np.random.default_rng(cfg.seed)
    labels = [random_labeling(rng, fam, hbar=cfg.hbar) for _ in range(cfg.samples)]
    parts = fan_out(lambda x: verify_23move(fam, x, cfg.tol), labels)
    return _merge("simplicial", {"solution": cfg.solution, "group": cfg.group,
                                 "hbar": cfg.hbar, "seed": cfg.seed}, cfg.tol, parts)


def suite_qdilog_selftest(cfg: SuiteConfig) -> VerificationReport:
    """Representation cross-check and functional equations at one hbar."""
    ctx = make_context(cfg.hbar)
    rep = VerificationReport("qdilog-selftest", {"hbar": cfg.hbar}, cfg.tol)
    if ctx.product_available:
        xs = np.array([complex(a, b * ctx.cb) for a in np.linspace(-2, 2, 5)
                       for b in np.linspace(-0.8, 0.8, 5)])
        for x, p, i in zip(xs, phi_eval(ctx, xs, "product"), phi_eval(ctx, xs, "integral")):
            rep.points.append(PointRecord.compare({"x": x}, i, p))
    rep.extend(battery.functional_equation_report(cfg.hbar, cfg.samples,
                                                  np.random.default_rng(cfg.seed), cfg.tol))
    return rep


SUITES = {"pentagon": suite_pentagon, "faddeev": suite_faddeev,
          "automorphic": suite_automorphic, "simplicial": suite_simplicial,
          "qdilog-selftest": suite_qdilog_selftest}


def run_suite(cfg: SuiteConfig) -> VerificationReport:
    """Run one suite; per-point failures are recorded, configuration errors raise."""
    cfg.validate()
    if cfg.suite not in SUITES:
        raise ConfigError(f"unknown suite {cfg.suite!r}")
    t0 = time.perf_counter()
    rep = SUITES[cfg.suite](cfg)
    rep.wall_time = time.perf_counter() - t0
    write_outputs(rep, cfg.out, cfg.csv)
    return rep


def write_outputs(rep: VerificationReport, out: str | None, csv_path: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(rep.to_json())
    if csv_path:
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(rep.to_csv())


def selftest(only: Sequence[int] | None = None, tol: float | None = None,
             out: str | None = None) -> tuple[bool, list[battery.CriterionResult]]:
    """Run the acceptance battery; the gating criteria decide the outcome.

    ``tol`` overrides every criterion tolerance (0 forces a failure).
    """
    results = battery.run(only, tol)
    ok = all(r.passed for r in results if r.gating)
    if out:
        doc = {"schema": SCHEMA_VERSION, "suite": "selftest", "pass": bool(ok),
               "criteria": [{"number": r.number, "title": r.title, "pass": bool(r.passed),
                             "gating": bool(r.gating), "detail": r.detail, "wall_time": r.wall_time,
                             "reports": [rep.to_dict() for rep in r.reports]}
                            for r in results]}
        with open(out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
    return ok, results


# ---------------------------------------------------------------------------
# argument parsing

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--hbar", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--out")
    p.add_argument("--csv")
    p.add_argument("--config")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="betapenta", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    q = sub.add_parser("qdilog", help="evaluate the quantum dilogarithm")
    qs = q.add_subparsers(dest="action", required=True)
    ev = qs.add_parser("eval")
    ev.add_argument("--hbar", type=float, required=True)
    ev.add_argument("--x", action="append", required=True,
                    help="complex argument, e.g. 0.3+0.1j (repeatable)")
    ev.add_argument("--method", default="auto", choices=[m.value for m in EvalMethod])
    ev.add_argument("--psi", action="store_true", help="evaluate Psi instead of Phi")
    ev.add_argument("--out")

    v = sub.add_parser("verify", help="run a verification suite")
    vs = v.add_subparsers(dest="suite", required=True)
    p = vs.add_parser("pentagon")
    p.add_argument("--solution", choices=SOLUTIONS)
    p.add_argument("--group")
    p.add_argument("--eps", type=float)
    _common(p)
    f = vs.add_parser("faddeev")
    f.add_argument("--tuple", choices=TUPLES)
    _common(f)
    a = vs.add_parser("automorphic")
    a.add_argument("--policy", choices=(STRIP, REGULATOR))
    _common(a)
    s = vs.add_parser("simplicial")
    s.add_argument("--solution", choices=("const", "char", "phi-plus"))
    s.add_argument("--group")
    s.add_argument("--trials", type=int, dest="samples")
    _common(s)
    d = vs.add_parser("qdilog-selftest")
    _common(d)

    t = sub.add_parser("selftest", help="run the acceptance battery")
    t.add_argument("--only", help="comma-separated criterion numbers")
    t.add_argument("--tol", type=float, help="override every criterion tolerance")
    t.add_argument("--out")
    return ap


def config_from_args(ns: argparse.Namespace) -> SuiteConfig:
    values: dict = {}
    if getattr(ns, "config", None):
        values.update(_coerce(fields(SuiteConfig), read_config(ns.config)))
    for f in fields(SuiteConfig):
        if f.name == "suite":
            continue
        v = getattr(ns, f.name, None)
        if v is not None:
            values[f.name] = v
    values.pop("suite", None)
    return SuiteConfig(suite=ns.suite, **values)


def eval_point(ctx, x: complex, method: str, psi: bool = False) -> dict:
    """Value at ``x`` plus the integral/product residual when both representations apply."""
    fn = psi_eval if psi else phi_eval
    row: dict = {"x": {"re": x.real, "im": x.imag}}
    try:
        val = complex(fn(ctx, x, method))
        row["value"] = {"re": val.real, "im": val.imag}
    except BetaPentaError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
        return row
    if ctx.product_available and abs(x.imag) < ctx.cb:
        try:
            a = complex(fn(ctx, x, EvalMethod.INTEGRAL))
            p = complex(fn(ctx, x, EvalMethod.PRODUCT))
            row["cross_residual"] = abs(a - p) / max(abs(a), abs(p), 1e-300)
        except BetaPentaError:
            pass
    return row


def _format_row(r: dict) -> str:
    x = complex(r["x"]["re"], r["x"]["im"])
    if "error" in r:
        return f"{x}\t{r['error']}"
    out = f"{x}\t{r['value']['re']:.16g}{r['value']['im']:+.16g}j"
    if "cross_residual" in r:
        out += f"\tcross-representation residual {r['cross_residual']:.2e}"
    return out


def _parse_complex(s: str) -> complex:
    try:
        return complex(s.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise ConfigError(f"bad complex number {s!r}") from exc


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        if ns.command == "qdilog":
            if not ns.hbar > 0:
                raise ConfigError("hbar must be positive")
            ctx = make_context(ns.hbar)
            rows = [eval_point(ctx, _parse_complex(raw), ns.method, ns.psi) for raw in ns.x]
            for r in rows:
                print(_format_row(r))
            if ns.out:
                with open(ns.out, "w", encoding="utf-8") as fh:
                    json.dump({"schema": SCHEMA_VERSION, "hbar": ns.hbar, "method": ns.method,
                               "function": "psi" if ns.psi else "phi", "values": rows},
                              fh, indent=2)
            return 1 if any("error" in r for r in rows) else 0
        if ns.command == "verify":
            cfg = config_from_args(ns)
            rep = run_suite(cfg)
            print(rep.summary_line())
            for e in rep.errors[:10]:
                print("  " + e)
            return 0 if rep.passed else 1
        only = None
        if ns.only:
            try:
                only = [int(k) for k in ns.only.split(",")]
            except ValueError as exc:
                raise ConfigError(f"bad --only list {ns.only!r}") from exc
            if any(k not in battery.CRITERIA for k in only):
                raise ConfigError(f"criteria are numbered 1..{len(battery.CRITERIA)}")
        if ns.tol is not None and ns.tol < 0:
            raise ConfigError("--tol must be non-negative")
        ok, results = selftest(only, ns.tol, ns.out)
        for r in results:
            print(r.line())
        print("selftest:", "PASS" if ok else "FAIL")
        return 0 if ok else 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
