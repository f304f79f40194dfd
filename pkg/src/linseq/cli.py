"""Command-line interface: ``linseq {constants,simulate,analyze,figure,verify}``."""
import argparse
import json
import math
import os
import sys

from . import cadlag, verify
from .coeffs import AlternatingPower, OneSidedPower, ScalingSpec, coefficient_limits
from .errors import DomainError, PreconditionNotMet
from .experiment import PRESETS, parse_config_text, preset, run_example
from .innovations import InnovationModel, norm_constant_a, stable_sigma
from .limits import c_H
from .output import emit_csv, emit_svg


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def cmd_constants(args):
    model = InnovationModel(args.alpha)
    rows = [("alpha", args.alpha), ("n", args.n), ("a_n", norm_constant_a(model, args.n))]
    if args.alpha < 2.0:
        rows.append(("sigma", stable_sigma(args.alpha)))
    if args.gamma is not None:
        spec = ScalingSpec(args.alpha, args.gamma)
        if args.k1 is not None or args.k2 is not None:
            scheme = AlternatingPower(args.k1 if args.k1 is not None else 1.0,
                                      args.k2 if args.k2 is not None else 1.0, args.gamma)
        else:
            scheme = OneSidedPower(args.gamma)
        lim = coefficient_limits(scheme, spec)
        rows += [("H", spec.H), ("mode", spec.mode), ("d_n", spec.d_n(args.n)),
                 ("a", lim.a), ("a_pos", lim.a_pos), ("a_neg", lim.a_neg), ("b", lim.b)]
        if lim.A is not None:
            rows.append(("A", lim.A))
        if spec.mode == "lfsm" and args.alpha == 2.0:
            ch = c_H(spec.H)
            rows += [("C_H", ch), ("a/C_H", lim.a / ch)]
    for k, v in rows:
        print(f"{k} = {_fmt(v)}")
    return 0


def _report_run(res):
    lo, hi = res.range
    print(f"calibrated range = [{lo:.6g}, {hi:.6g}]")
    if res.config.range_mode == "auto":
        dlo, dhi = res.display_range
        print(f"display range (auto) = [{dlo:.6g}, {dhi:.6g}]")
    for k, v in res.constants.items():
        print(f"{k} = {_fmt(v)}")


def _emit(res, out_csv, out_svg, title):
    if out_csv:
        emit_csv(res.path, out_csv)
    if out_svg:
        emit_svg([res.path], res.display_range, out_svg, title=title)


def cmd_simulate(args):
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read config {args.config!r}: {exc.strerror or exc}") from exc
    overrides = {"alpha": args.alpha, "seed": args.seed, "n": args.n, "M": args.M,
                 "N_trunc": args.N_trunc}
    config = parse_config_text(text, overrides)
    res = run_example(config)
    _report_run(res)
    _emit(res, args.out_csv, args.out_svg, title=os.path.basename(args.config))
    return 0


def cmd_figure(args):
    config = preset(args.example, args.alpha, args.seed)
    res = run_example(config)
    _report_run(res)
    stem = os.path.join(args.out_dir, f"figure_{args.example}_alpha{args.alpha:g}_seed{args.seed}")
    os.makedirs(args.out_dir, exist_ok=True)
    title = f"example {args.example}, alpha={args.alpha:g}, seed={args.seed}"
    _emit(res, stem + ".csv", stem + ".svg", title)
    print(f"wrote {stem}.csv")
    print(f"wrote {stem}.svg")
    return 0


def _floats(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _bands(text):
    out = []
    for part in text.split(","):
        if part.strip():
            a, b = part.split(":")
            out.append((float(a), float(b)))
    return out


def cmd_analyze(args):
    try:
        with open(args.in_csv, encoding="utf-8") as fh:
            x = cadlag.from_csv_text(fh.read())
    except OSError as exc:
        raise OSError(f"cannot read {args.in_csv!r}: {exc.strerror or exc}") from exc
    report = {"breakpoints": len(x), "sup_norm": cadlag.sup_norm(x),
              "beta": cadlag.local_beta(x)}
    if args.delta is not None:
        report["w(x, delta)"] = {str(args.delta): cadlag.oscillation(x, args.delta)}
    etas = _floats(args.eta) if args.eta else []
    report["N_eta"] = {str(e): cadlag.count_oscillations(x, e) for e in etas}
    report["N_ab"] = {f"{a}:{b}": cadlag.count_upcrossings(x, a, b)
                      for a, b in (_bands(args.bands) if args.bands else [])}
    lemma = {}
    for e in etas:
        try:
            rec = cadlag.lemma_a2_bound(x, e)
            lemma[str(e)] = {"count": rec.count, "bound": rec.bound,
                             "beta_local": rec.beta_local, "holds": rec.holds}
        except PreconditionNotMet as exc:
            lemma[str(e)] = {"precondition_not_met": str(exc)}
    report["lemma_A2"] = lemma
    json.dump(report, sys.stdout, indent=2, default=lambda v: None if not math.isfinite(v) else v)
    print()
    return 0


def cmd_verify(args):
    failures = 0
    for name, checks, elapsed in verify.run(args.suite):
        print(f"== {name} ({elapsed:.1f} s)")
        for c in checks:
            print(c.line())
            failures += not c.passed
    print(f"{failures} failure(s)")
    return 1 if failures else 0


def build_parser():
    p = argparse.ArgumentParser(prog="linseq", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constants", help="normalizing and limit constants")
    c.add_argument("--alpha", type=float, required=True)
    c.add_argument("--gamma", type=float)
    c.add_argument("--k1", type=float)
    c.add_argument("--k2", type=float)
    c.add_argument("--n", type=int, default=1000)
    c.set_defaults(func=cmd_constants)

    s = sub.add_parser("simulate", help="run an experiment from a key=value config file")
    s.add_argument("--config", required=True)
    s.add_argument("--out-csv")
    s.add_argument("--out-svg")
    s.add_argument("--alpha", type=float)
    s.add_argument("--seed", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--M", type=int)
    s.add_argument("--N-trunc", dest="N_trunc", type=int)
    s.set_defaults(func=cmd_simulate)

    a = sub.add_parser("analyze", help="oscillation diagnostics for a path CSV")
    a.add_argument("--in-csv", required=True)
    a.add_argument("--eta", default="")
    a.add_argument("--bands", default="")
    a.add_argument("--delta", type=float)
    a.set_defaults(func=cmd_analyze)

    f = sub.add_parser("figure", help="preset figure configurations")
    f.add_argument("--example", required=True, choices=sorted(PRESETS))
    f.add_argument("--alpha", type=float, required=True)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--out-dir", default=".")
    f.set_defaults(func=cmd_figure)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", default="all", choices=verify.SUITES + ("all",))
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
