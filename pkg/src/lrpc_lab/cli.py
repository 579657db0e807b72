"""Command-line front end.

Subcommands: ``validate``, ``bounds``, ``simulate``, ``decode-demo``,
``sweep``, ``report``.  Parameters come from a JSON config file
(``--config``) and/or flags; flags override the file.  All randomness flows
from the configured seed.

Exit codes: 0 on success, 1 on usage or config errors, 2 when the checked
object fails (parameter validation rejects, or the demo decode fails).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import bounds as bnd
from . import report as report_mod
from .field import make_field
from .lrpc import (
    LrpcParams,
    decode,
    recover_support,
    sample_instance,
    validate_params,
)
from .linalg import intersect, scale_subspace, support
from .rng import trial_rng
from .sim import append_csv_row, run_simulation

DEFAULT_PARALLELISM = int(os.environ.get("LRPC_LAB_THREADS", "1"))


@dataclass
class ExperimentConfig:
    q: int = 2
    m: int = 20
    modulus: Optional[list[int]] = None
    seed: int = 1
    n: int = 12
    k: int = 6
    w: int = 2
    t: int = 2
    error_mode: str = "exact_rank_t"
    trials: int = 10000
    alpha: float = 0.01
    parallelism: int = DEFAULT_PARALLELISM
    csv: Optional[str] = None
    figures: Optional[str] = None
    randomize_basis: bool = False

    def to_json(self) -> dict:
        return {
            "field": {"q": self.q, "m": self.m, "modulus": self.modulus, "seed": self.seed},
            "code": {"n": self.n, "k": self.k, "w": self.w, "t": self.t},
            "error_mode": self.error_mode,
            "trials": self.trials,
            "alpha": self.alpha,
            "parallelism": self.parallelism,
            "csv": self.csv,
            "figures": self.figures,
            "randomize_basis": self.randomize_basis,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ExperimentConfig":
        cfg = cls()
        fld = obj.get("field", {})
        for src, names in ((fld, ("q", "m", "modulus", "seed")),
                           (obj.get("code", {}), ("n", "k", "w", "t"))):
            for name in names:
                if name in src and src[name] is not None or name == "modulus" and name in src:
                    setattr(cfg, name, src[name])
        for name in ("error_mode", "trials", "alpha", "parallelism", "csv", "figures",
                     "randomize_basis"):
            if name in obj:
                setattr(cfg, name, obj[name])
        return cfg

    def params(self) -> LrpcParams:
        ctx = make_field(self.q, self.m, self.modulus, self.seed)
        return LrpcParams(ctx, self.n, self.k, self.w, self.t)


class _Parser(argparse.ArgumentParser):
    # usage errors must exit 1 (argparse defaults to 2, which we reserve
    # for "checked object failed")
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _add_common_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", help="JSON config file; flags override it")
    sp.add_argument("--json", action="store_true", help="emit JSON on stdout")
    sp.add_argument("--seed", type=int, help="master seed (field search and trials)")
    sp.add_argument("--q", type=int, help="base field prime")
    sp.add_argument("--m", type=int, help="extension degree")
    sp.add_argument("--modulus", help="comma-separated modulus coefficients, low degree first")
    sp.add_argument("--n", type=int, help="code length")
    sp.add_argument("--k", type=int, help="code dimension")
    sp.add_argument("--w", type=int, help="parity-check support weight")
    sp.add_argument("--t", type=int, help="error rank")
    sp.add_argument("--error-mode", choices=("exact_rank_t", "uniform_in_En"))
    sp.add_argument("--trials", type=int)
    sp.add_argument("--alpha", type=float, help="confidence level for intervals")
    sp.add_argument("--parallelism", type=int,
                    help="worker processes (default LRPC_LAB_THREADS or 1)")
    sp.add_argument("--csv", help="CSV output path (append; header added when new)")
    sp.add_argument("--figures", help="directory for rendered figures")
    sp.add_argument("--randomize-basis", action="store_true",
                    help="use a random ordered basis of W instead of its RREF rows")


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    if args.config:
        with open(args.config) as fh:
            cfg = ExperimentConfig.from_json(json.load(fh))
    else:
        cfg = ExperimentConfig()
    overrides = {
        "q": args.q, "m": args.m, "seed": args.seed, "n": args.n, "k": args.k,
        "w": args.w, "t": args.t, "error_mode": args.error_mode, "trials": args.trials,
        "alpha": args.alpha, "parallelism": args.parallelism, "csv": args.csv,
        "figures": args.figures,
    }
    for name, val in overrides.items():
        if val is not None:
            setattr(cfg, name, val)
    if args.modulus:
        cfg.modulus = [int(c) for c in args.modulus.split(",")]
    if getattr(args, "randomize_basis", False):
        cfg.randomize_basis = True
    return cfg


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_validate(args) -> int:
    cfg = build_config(args)
    rep = validate_params(cfg.params())
    if args.json:
        print(json.dumps({
            "ok": rep.ok,
            "violations": list(rep.violations),
            "bound_preconditions": list(rep.bound_preconditions),
        }, indent=2))
    else:
        print("parameters ok" if rep.ok else "parameter violations:")
        for v in rep.violations:
            print(f"  - {v}")
        if rep.bound_preconditions:
            print("bound preconditions not met (bounds may be vacuous):")
            for v in rep.bound_preconditions:
                print(f"  - {v}")
    return 0 if rep.ok else 2


def cmd_bounds(args) -> int:
    cfg = build_config(args)
    values = bnd.all_bounds(cfg.q, cfg.m, cfg.n, cfg.k, cfg.t, cfg.w)
    if args.json:
        print(json.dumps({name: v.to_json() for name, v in values.items()}, indent=2))
        return 0
    print(f"bounds for q={cfg.q} m={cfg.m} n={cfg.n} k={cfg.k} w={cfg.w} t={cfg.t}")
    hdr = f"{'bound':<24} {'exact rational':<28} {'decimal':<14} {'log2':>9} {'log10':>9}  preconditions"
    print(hdr)
    print("-" * len(hdr))
    for name, v in values.items():
        frac = f"{v.raw.numerator}/{v.raw.denominator}"
        if len(frac) > 27:
            frac = frac[:24] + "..."
        status = "ok" if v.preconditions_met else "VIOLATED: " + "; ".join(v.violated)
        if v.clamped:
            status += " (clamped to [0,1])"
        print(f"{name:<24} {frac:<28} {float(v.exact):<14.6g} {v.log2:>9.3f} {v.log10:>9.3f}  {status}")
    return 0


def cmd_simulate(args) -> int:
    cfg = build_config(args)
    if cfg.trials < 1:
        print("error: --trials must be >= 1", file=sys.stderr)
        return 1
    params = cfg.params()
    rep = validate_params(params)
    if not rep.ok:
        print("error: invalid parameters: " + "; ".join(rep.violations), file=sys.stderr)
        return 1
    report = run_simulation(
        params, cfg.error_mode, cfg.trials, cfg.seed, cfg.parallelism, cfg.alpha,
        cfg.randomize_basis,
    )
    if cfg.csv:
        append_csv_row(cfg.csv, report)
    if args.json:
        print(json.dumps(report.to_json(), indent=2))
    else:
        _print_summary(report)
    if cfg.figures and cfg.csv:
        for path in report_mod.render_figures(cfg.csv, cfg.figures):
            print(f"figure written: {path}")
    return 0


def _print_summary(report) -> None:
    p = report.params
    print(f"simulation: q={p.ctx.q} m={p.ctx.m} n={p.n} k={p.k} w={p.w} t={p.t} "
          f"mode={report.error_mode} trials={report.trials} seed={report.master_seed}")
    print(f"  elapsed {report.elapsed_s:.2f}s ({report.trials_per_sec:.0f} trials/s)")
    lo, hi = report.dfr_interval()
    checks = [
        ("syndrome span deficient", "event_a", "span"),
        ("intersection too large", "event_b", "intersection"),
        ("product dim deficient", "event_c", "product_dim"),
    ]
    for label, count_key, bound_key in checks:
        rate = report.rate(count_key)
        b = report.bounds[bound_key]
        verdict = "<= bound" if rate <= float(b.exact) else "ABOVE bound"
        print(f"  {label:<26} {report.counts[count_key]:>8} ({rate:.3e})  "
              f"bound {float(b.exact):.3e}  {verdict}")
    print(f"  rank(N) deficient          {report.counts['rank_n_deficient']:>8} "
          f"({report.rate('rank_n_deficient'):.3e})  (no bound claimed)")
    b = report.bounds["total"]
    verdict = "<= bound" if lo <= float(b.exact) else "CI ABOVE bound"
    print(f"  DFR                        {report.counts['dfr']:>8} ({report.dfr_rate:.3e})  "
          f"CI [{lo:.3e}, {hi:.3e}]  total bound {float(b.exact):.3e}  {verdict}")


def cmd_decode_demo(args) -> int:
    cfg = build_config(args)
    params = cfg.params()
    rep = validate_params(params)
    if not rep.ok:
        print("error: invalid parameters: " + "; ".join(rep.violations), file=sys.stderr)
        return 1
    ctx = params.ctx
    rng = trial_rng(cfg.seed, 0)
    inst = sample_instance(params, rng, cfg.error_mode, cfg.randomize_basis)
    outcome = decode(inst.decoder_input())
    verbose = args.verbosity >= 1
    if verbose:
        print(f"instance: q={cfg.q} m={cfg.m} n={cfg.n} k={cfg.k} w={cfg.w} t={cfg.t} seed={cfg.seed}")
        synd_sup = support(ctx, inst.s)
        print(f"Supp(s): dim {synd_sup.dim} (true product space has dim "
              f"{support(ctx, [ctx.mul(a, b) for a in inst.e_space.basis for b in inst.w_space.basis]).dim})")
        inter = None
        for i, fi in enumerate(inst.f, start=1):
            scaled = scale_subspace(ctx.inv(fi), synd_sup)
            inter = scaled if inter is None else intersect(inter, scaled)
            print(f"f_{i}^-1 . Supp(s): dim {scaled.dim}; running intersection dim {inter.dim}")
        rec = recover_support(ctx, inst.f, inst.s, params.t)
        print(f"Step I: {'recovered dim ' + str(rec.dim) if rec else 'FAILED (dimension != t)'}")
        nk, w, t, n = cfg.n - cfg.k, cfg.w, cfg.t, cfg.n
        print(f"Step II system: N is {(nk) * w} x {n} over F_{cfg.q} with {t} right-hand sides")
    if outcome.success:
        print(f"outcome: success (recovered error of rank {support(ctx, outcome.error).dim})")
        return 0
    print(f"outcome: failure ({outcome.reason.value})")
    return 2


def cmd_sweep(args) -> int:
    if not args.config:
        print("error: sweep requires --config with a 'sweep' list", file=sys.stderr)
        return 1
    with open(args.config) as fh:
        raw = json.load(fh)
    points = raw.get("sweep")
    if not isinstance(points, list) or not points:
        print("error: config must contain a non-empty 'sweep' list", file=sys.stderr)
        return 1
    base = dict(raw)
    base.pop("sweep", None)
    rows = 0
    for point in points:
        merged = _merge_config(base, point)
        cfg = ExperimentConfig.from_json(merged)
        cfg = _apply_flag_overrides(cfg, args)
        params = cfg.params()
        rep = validate_params(params)
        if not rep.ok:
            print(f"skipping invalid point {point}: " + "; ".join(rep.violations), file=sys.stderr)
            continue
        report = run_simulation(
            params, cfg.error_mode, cfg.trials, cfg.seed, cfg.parallelism, cfg.alpha,
            cfg.randomize_basis,
        )
        if cfg.csv:
            append_csv_row(cfg.csv, report)
            rows += 1
        _print_summary(report)
    print(f"sweep complete: {rows} CSV row(s) written")
    cfg = ExperimentConfig.from_json(base)
    cfg = _apply_flag_overrides(cfg, args)
    if cfg.figures and cfg.csv and rows:
        for path in report_mod.render_figures(cfg.csv, cfg.figures):
            print(f"figure written: {path}")
    return 0


def _merge_config(base: dict, point: dict) -> dict:
    merged = json.loads(json.dumps(base))
    for key, val in point.items():
        if key in ("field", "code") and isinstance(val, dict):
            merged.setdefault(key, {}).update(val)
        else:
            merged[key] = val
    return merged


def _apply_flag_overrides(cfg: ExperimentConfig, args) -> ExperimentConfig:
    for name in ("seed", "trials", "alpha", "parallelism", "csv", "figures", "error_mode"):
        val = getattr(args, name, None)
        if val is not None:
            setattr(cfg, name, val)
    return cfg


def cmd_report(args) -> int:
    if not args.csv:
        print("error: report requires --csv", file=sys.stderr)
        return 1
    out_dir = args.figures or os.path.join(os.path.dirname(args.csv) or ".", "figures")
    for path in report_mod.render_figures(args.csv, out_dir):
        print(f"figure written: {path}")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lrpc-lab",
                     description="LRPC decoding-failure bounds and Monte Carlo validation")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, extra in (
        ("validate", cmd_validate, None),
        ("bounds", cmd_bounds, None),
        ("simulate", cmd_simulate, None),
        ("decode-demo", cmd_decode_demo, "verbosity"),
        ("sweep", cmd_sweep, None),
        ("report", cmd_report, None),
    ):
        sp = sub.add_parser(name)
        sp.error = parser.error  # type: ignore[method-assign]
        _add_common_flags(sp)
        if extra == "verbosity":
            sp.add_argument("--verbosity", type=int, default=1)
        sp.set_defaults(func=fn)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
