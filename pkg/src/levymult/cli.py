"""Command-line entry point: config-driven runs emitting CSV/JSON artifacts.

Subcommands
    symbol    -- tabulate a multiplier symbol on a frequency grid (CSV)
    apply     -- apply a symbol to a stored grid function (binary in/out)
    normratio -- norm-ratio sweep of symbols over a generated corpus (CSV)
    kernel    -- tabulate the singular kernel, optionally truncated (CSV)
    verify    -- run the stochastic verification battery (JSON report)

Every run is a pure function of its config and seed; outputs are byte
stable.  Wall-clock metadata goes to a separate ``run_meta.json`` sidecar.
Exit codes: 0 success, 1 verification failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import _accel
from .corpus import CorpusConfig, build_corpus
from .exceptions import InvalidInputError
from .grid import read_grid, write_grid
from .kernel import kernel_closed_form, kernel_truncated
from .multiplier import apply_multiplier, norm_ratio_sweep
from .scenarios import scenario_by_name, scenario_from_dict, shipped_scenarios
from .stochastic import (
    burkholder_bound_check,
    l1_mass_check,
    levy_system_check,
    martingale_property_check,
    projection_identity_check,
    subordination_check,
)
from .symbols import symbol_from_dict

USAGE_ERROR = 2
VERIFY_ERROR = 1


def _load_config(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InvalidInputError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"config is not valid JSON: {exc}")


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_meta(out: Path, args, extra=None):
    meta = {"command": args.command, "config": str(args.config),
            "seed": args.seed, "workers": args.workers,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S")}
    if extra:
        meta.update(extra)
    (out / "run_meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True))


def _json_default(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not serialisable: {type(obj)!r}")


# ---------------------------------------------------------------------------

def cmd_symbol(args) -> int:
    cfg = _load_config(args.config)
    sym = symbol_from_dict(cfg["symbol"])
    gspec = cfg.get("grid", {})
    d = int(gspec.get("d", getattr(sym, "dimension", 2)))
    n = int(gspec.get("n", 64))
    xi_max = float(gspec.get("xi_max", 3.0))
    axes = [np.linspace(-xi_max, xi_max, n) for _ in range(d)]
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.stack(grids, axis=-1)
    values = sym.evaluate(pts)
    out = _out_dir(args)
    table = out / "symbol.csv"
    with open(table, "w") as fh:
        cols = ",".join(f"xi_{a + 1}" for a in range(d))
        fh.write(f"{cols},re,im\n")
        flatpts = pts.reshape(-1, d)
        flatval = np.asarray(values).reshape(-1)
        for row, v in zip(flatpts, flatval):
            coords = ",".join(repr(float(c)) for c in row)
            fh.write(f"{coords},{float(v.real)!r},{float(v.imag)!r}\n")
    _write_meta(out, args, {"rows": int(flatval.size)})
    print(f"wrote {table} ({flatval.size} rows)")
    return 0


def cmd_apply(args) -> int:
    cfg = _load_config(args.config)
    try:
        f = read_grid(cfg["input"])
    except FileNotFoundError:
        raise InvalidInputError(f"input grid not found: {cfg.get('input')}")
    sym = symbol_from_dict(cfg["symbol"])
    g = apply_multiplier(f, sym)
    out = _out_dir(args)
    dest = out / cfg.get("output", "applied.lmgf")
    write_grid(dest, g)
    _write_meta(out, args)
    print(f"wrote {dest}")
    return 0


def cmd_normratio(args) -> int:
    cfg = _load_config(args.config)
    symbol_specs = cfg["symbols"] if "symbols" in cfg else [cfg["symbol"]]
    ccfg = cfg.get("corpus", {})
    d = int(ccfg.get("d", 2))
    corpus_config = CorpusConfig(
        d=d, n=int(ccfg.get("n", 256 if d == 2 else 4096)),
        period=float(ccfg.get("period", 2 * np.pi)),
        count=int(ccfg.get("count", 20)),
        seed=int(ccfg.get("seed", args.seed)),
        mean_zero=bool(ccfg.get("mean_zero", False)))
    if corpus_config.count < 1:
        raise InvalidInputError("corpus count must be positive")
    p_list = [float(p) for p in cfg.get("p_list", [4 / 3, 1.5, 2.0, 3.0, 4.0])]
    corpus, ids = build_corpus(corpus_config)
    out = _out_dir(args)
    any_violation = False
    with open(out / "normratio.csv", "w") as fh:
        fh.write("symbol_id,p,p_star_minus_1,max_ratio,argmax_corpus_id\n")
        for i, spec in enumerate(symbol_specs):
            sym = symbol_from_dict(spec)
            sid = spec.get("id", f"{spec['kind']}#{i}")
            rows = norm_ratio_sweep(sym, corpus, p_list, ids)
            for r in rows:
                fh.write(f"{sid},{r.p!r},{r.bound!r},{r.max_ratio!r},"
                         f"{r.argmax_id}\n")
                any_violation |= r.violation
    _write_meta(out, args, {"violation": any_violation})
    print(f"wrote {out / 'normratio.csv'}"
          + ("  [BOUND VIOLATION]" if any_violation else "  [all within bound]"))
    return VERIFY_ERROR if any_violation else 0


def cmd_kernel(args) -> int:
    cfg = _load_config(args.config)
    if "pv" in cfg:
        spec = cfg["pv"]
        try:
            f = read_grid(spec["input"])
        except FileNotFoundError:
            raise InvalidInputError(f"input grid not found: {spec.get('input')}")
        out = _out_dir(args)
        from .kernel import pv_convolve

        g = pv_convolve(f, rho=float(spec["rho"]),
                        orientation=int(spec.get("orientation", 1)),
                        images=spec.get("images"))
        dest = out / spec.get("output", "pv.lmgf")
        write_grid(dest, g)
        _write_meta(out, args)
        print(f"wrote {dest}")
        return 0
    if "points" in cfg:
        xs = [float(x) for x in cfg["points"]["x"]]
        ys = [float(y) for y in cfg["points"]["y"]]
        if len(xs) != len(ys):
            raise InvalidInputError("points.x and points.y lengths differ")
        pairs = list(zip(xs, ys))
    else:
        g = cfg.get("log_grid", {})
        lo, hi, n = float(g.get("lo", 0.1)), float(g.get("hi", 10.0)), int(g.get("n", 20))
        vals = np.geomspace(lo, hi, n)
        pairs = [(float(x), float(y)) for x in vals for y in vals]
    eps = cfg.get("eps")
    big_t = cfg.get("T")
    tol = float(cfg.get("tol", 1e-10))
    out = _out_dir(args)
    with open(out / "kernel.csv", "w") as fh:
        if eps is None:
            fh.write("x,y,K\n")
            for x, y in pairs:
                fh.write(f"{x!r},{y!r},{kernel_closed_form(x, y)!r}\n")
        else:
            fh.write("x,y,K,K_truncated\n")
            for x, y in pairs:
                kt = kernel_truncated(float(eps), float(big_t), x, y, tol=tol)
                fh.write(f"{x!r},{y!r},{kernel_closed_form(x, y)!r},{kt!r}\n")
    _write_meta(out, args, {"rows": len(pairs)})
    print(f"wrote {out / 'kernel.csv'} ({len(pairs)} rows)")
    return 0


def cmd_verify(args) -> int:
    cfg = _load_config(args.config)
    names = cfg.get("scenarios", [s.name for s in shipped_scenarios()])
    n_paths = int(cfg.get("n_paths", 20000))
    seed = int(cfg.get("seed", args.seed))
    p_list = [float(p) for p in cfg.get("p_list", [1.5, 2.0, 3.0])]
    report = {"seed": seed, "n_paths": n_paths, "scenarios": {}}
    failed = False
    for name in names:
        if isinstance(name, dict):  # inline scenario document
            scn = scenario_from_dict(name)
            name = scn.name
        else:
            try:
                scn = scenario_by_name(name)
            except KeyError:
                raise InvalidInputError(f"unknown scenario {name!r}")
        entry = {}
        drift, tower = martingale_property_check(scn, n_paths, seed)
        entry["drift"] = [
            {"process": r.process, "t1": r.t1, "t2": r.t2,
             "drift": r.drift, "stderr": r.stderr, "sigmas": r.sigmas,
             "pass": bool(r.sigmas <= 3.0 or abs(r.drift) < 1e-12)}
            for r in drift]
        entry["tower"] = [
            {"t": t, "mean": m, "stderr": se, "target": pf,
             "pass": bool(abs(m - pf) <= 3 * se or abs(m - pf) < 1e-12)}
            for t, m, se, pf in tower]
        moments = burkholder_bound_check(scn, p_list, n_paths, seed + 1)
        entry["moment_bound"] = [
            {"p": r.p, "lhs": r.lhs, "lhs_se": r.lhs_se, "rhs": r.rhs,
             "rhs_se": r.rhs_se, "pass": r.passed} for r in moments]
        viol, lemma, qvfail = subordination_check(scn, n_paths, seed + 2)
        entry["subordination"] = {"violations": viol, "qv_failures": qvfail,
                                  "pass": viol == 0 and qvfail == 0}
        levy = levy_system_check(scn.lattice, scn.window, n_paths, seed + 3)
        entry["levy_system"] = [
            {"functional": r.name, "lhs": r.lhs, "stderr": r.stderr,
             "rhs": r.rhs, "pass": r.passed} for r in levy]
        mc, se, closed = l1_mass_check(scn.lattice, scn.f, scn.window,
                                       n_paths, seed + 4)
        entry["l1_mass"] = {"mc": mc, "stderr": se, "closed_form": closed,
                            "pass": bool(abs(mc - closed) <= 3 * se)}
        proj = projection_identity_check(scn.lattice, scn.f,
                                         -(scn.window[1] - scn.window[0]),
                                         n_paths, seed + 5)
        entry["projection"] = {
            "l2_error": proj.l2_error, "stderr_norm": proj.stderr_norm,
            "spec_norm": proj.spec_norm,
            "pass": bool(proj.l2_error <= 5 * proj.stderr_norm)}
        report["scenarios"][name] = entry
        for section in entry.values():
            rowlist = section if isinstance(section, list) else [section]
            failed |= any(not row["pass"] for row in rowlist)
    out = _out_dir(args)
    (out / "verify.json").write_text(
        json.dumps(report, indent=2, sort_keys=True, default=_json_default))
    _write_meta(out, args, {"failed": failed})
    print(f"wrote {out / 'verify.json'}"
          + ("  [3-SIGMA FAILURE]" if failed else "  [all checks passed]"))
    return VERIFY_ERROR if failed else 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="levymult",
        description="Jump-measure Fourier multipliers: tables, transforms, "
                    "kernel evaluation and stochastic verification.")
    ap.add_argument("--config", required=True, help="JSON config path")
    ap.add_argument("--out", default="out", help="output directory")
    ap.add_argument("--seed", type=int, default=2024, help="master seed")
    ap.add_argument("--workers", type=int, default=0,
                    help="worker threads for the Monte Carlo kernels "
                         "(0 = library default; results are independent)")
    ap.add_argument("command", choices=["symbol", "apply", "normratio",
                                        "kernel", "verify"])
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    if args.workers > 0:
        _accel.set_num_threads(args.workers)
    handler = {"symbol": cmd_symbol, "apply": cmd_apply,
               "normratio": cmd_normratio, "kernel": cmd_kernel,
               "verify": cmd_verify}[args.command]
    try:
        return handler(args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (KeyError, TypeError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
