"""Command-line front end: ``madic <command> ...``.

Exit codes: 0 success, 1 a checked property failed (a ``FAIL <reason>`` line is
printed), 2 usage or parse error, 3 I/O or measure validation error.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from pathlib import Path

from .core import AlphaParam, Prefix
from .density import f_profile, oscillation_report
from .exact import as_fraction, render
from .measure import (BranchingSpec, MeasureValidationError, SPLIT_LAWS, block_lift, build_greedy,
                      build_random, build_uniform, is_uniform, sample_path)
from .serialization import MeasureFormatError, load, serialize
from .theory import (DEFAULT_I_MAX, LemmaViolation, adversarial_tuples, avoidance_decay_check,
                     build_marked_sets, cross_check_bounds, dirichlet_select, dirichlet_tau,
                     random_tuple, target_set, upper_bound)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


def _rational(flag: str, text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _alpha(m: int, text: str) -> AlphaParam:
    if "/" not in text:
        raise UsageError(f"--alpha: expected p/q, got {text!r} (decimal alpha is not accepted; write e.g. 1/2)")
    try:
        return AlphaParam.parse(m, text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--alpha: {exc}") from None


def _load(path: str):
    try:
        return load(path)
    except OSError as exc:
        raise InputError(f"--in {path}: {exc.strerror or exc}") from None
    except MeasureFormatError as exc:
        raise InputError(f"--in {path}: {exc}") from None
    except MeasureValidationError as exc:
        raise InputError(f"--in {path}: {exc}") from None


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None


def _alpha_for(mu, text):
    if text is not None:
        return _alpha(mu.m, text)
    if mu.alpha is None:
        raise UsageError("--alpha is required (the measure file has no alpha line)")
    return AlphaParam(mu.m, mu.alpha.numerator, mu.alpha.denominator)


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_construct(args, out) -> int:
    if args.m < 2:
        raise UsageError("--m: base must be >= 2")
    if args.depth < 0:
        raise UsageError("--depth: must be >= 0")
    x0 = _rational("--x0", args.x0)
    if x0 <= 0:
        raise UsageError("--x0: must be positive")
    alpha = _alpha(args.m, args.alpha) if args.alpha else None
    status = EXIT_OK
    if args.type == "greedy":
        if alpha is None:
            raise UsageError("--alpha is required for --type greedy")
        res = build_greedy(alpha, x0, args.depth)
        mu = res.measure
        hi = upper_bound(alpha) * x0
        inside = all(x0 <= e.f <= hi for e in res.profile.entries)
        print(f"s=[{','.join(str(s) for s in res.spec.s_seq)}]", file=out)
        if res.degenerate:
            print(f"degenerate: w={alpha.floor_w} is an integer", file=out)
        if inside:
            print(f"f in [{_frac(x0)}, {_frac(hi)}]: OK", file=out)
        else:
            print(f"FAIL greedy-containment: some f_n outside [{_frac(x0)}, {_frac(hi)}]", file=out)
            status = EXIT_FAIL
    elif args.type == "uniform":
        if not args.s_seq:
            raise UsageError("--s-seq is required for --type uniform")
        try:
            s_seq = tuple(int(s) for s in args.s_seq.split(","))
            mu = build_uniform(args.m, BranchingSpec(x0, s_seq), args.depth,
                               alpha.alpha if alpha else None)
        except ValueError as exc:
            raise UsageError(f"--s-seq: {exc}") from None
    else:
        try:
            mu = build_random(args.m, args.depth, args.seed, args.min_children,
                              args.max_children, args.split, x0)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if alpha is not None:
            mu.alpha = alpha.alpha
        print(f"seed={args.seed}", file=out)
    _write(args.output, serialize(mu))
    print(f"wrote {args.output}: m={mu.m} depth={mu.depth} nodes={len(mu)}", file=out)
    return status


def cmd_analyze_profile(args, out) -> int:
    mu = _load(args.input)
    alpha = _alpha_for(mu, args.alpha)
    try:
        path = Prefix.parse(args.path, mu.m)
        profile = f_profile(mu, alpha, path)
    except ValueError as exc:
        raise UsageError(f"--path: {exc}") from None
    text = profile.to_csv()
    if args.csv:
        _write(args.csv, text)
        print(f"wrote {args.csv}: {len(profile)} levels", file=out)
    else:
        out.write(text)
    return EXIT_OK


def cmd_analyze_oscillation(args, out) -> int:
    mu = _load(args.input)
    alpha = _alpha_for(mu, args.alpha)
    try:
        rep = oscillation_report(mu, alpha, args.n0)
    except ValueError as exc:
        raise UsageError(f"--n0: {exc}") from None
    out.write(rep.to_text())
    up = upper_bound(alpha)
    rel = "≤" if rep.c_hat <= up else ">"
    print(f"c_loc_hat≈{rep.c_loc_hat.approx(7)} c_hat≈{rep.c_hat.approx(7)} {rel} upper={_frac(up)}", file=out)
    if not (rep.c_hat >= rep.c_loc_hat >= 1):
        print("FAIL ratio-order: expected c_hat >= c_loc_hat >= 1", file=out)
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify_bounds(args, out) -> int:
    if args.m < 2:
        raise UsageError("--m: base must be >= 2")
    if args.I_max < 1:
        raise UsageError("--I-max: must be >= 1")
    alpha = _alpha(args.m, args.alpha)
    rep = cross_check_bounds(alpha, args.I_max)
    out.write(rep.to_text())
    idx = "trivial" if rep.lower.kind == "trivial" else f"{rep.lower.kind[0]}={rep.lower.index}"
    status = "OK" if rep.consistent else "FAIL"
    print(f"lower≈{rep.lower.approx(7)} ({idx}) upper={_frac(rep.upper)} {status}", file=out)
    if not rep.consistent:
        print("FAIL bound-consistency: lower bound exceeds upper bound", file=out)
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify_dirichlet(args, out) -> int:
    w = _rational("--w", args.w)
    u = _rational("--u", args.u)
    delta = _rational("--delta", args.delta)
    if args.trials < 0:
        raise UsageError("--trials: must be >= 0")
    try:
        proof_tau = dirichlet_tau(w, u, delta)
        tau = proof_tau if args.tau is None else _rational("--tau", args.tau)
        ts = target_set(w, u, delta, tau)
        adversarial = adversarial_tuples(w, u, delta)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"seed={args.seed} w={_frac(w)} u={_frac(u)} delta={_frac(delta)} tau={_frac(tau)}", file=out)
    rng = random.Random(args.seed)
    tuples = [random_tuple(rng, w, u) for _ in range(args.trials)] + adversarial
    failures = 0
    first = None
    for t in tuples:
        if args.tau is None:
            try:
                pos = dirichlet_select(t, w, u, delta)
                ok = t[pos - 1] in ts
            except LemmaViolation:
                ok = False
        else:
            ok = any(z in ts for z in t)
        if not ok:
            failures += 1
            first = first or t
    print(f"trials={args.trials} adversarial={len(adversarial)} failures={failures}", file=out)
    if failures:
        print(f"FAIL dirichlet-selection: no element in target set for ({', '.join(_frac(z) for z in first)})",
              file=out)
        return EXIT_FAIL
    print("OK", file=out)
    return EXIT_OK


def cmd_verify_marked(args, out) -> int:
    mu = _load(args.input)
    alpha = _alpha_for(mu, args.alpha)
    delta = _rational("--delta", args.delta) if args.delta else None
    tau = _rational("--tau", args.tau) if args.tau else None
    if args.d_consec < 1:
        raise UsageError("--d-consec: must be >= 1")
    try:
        table = build_marked_sets(mu, alpha, tau=tau, delta=delta)
        rep = avoidance_decay_check(mu, table, args.d_consec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    t = rep.table
    print(f"delta={_frac(t.delta)} tau={_frac(t.tau)} u={t.u} K_lo={_frac(t.K_lo)} d_consec={args.d_consec}",
          file=out)
    for n, (a, b) in enumerate(zip(rep.avoid_mass, rep.bounds)):
        print(f"avoid n'={n} mass={_frac(a)} bound≈{render(b, 7)}", file=out)
    status = EXIT_OK
    for tab in {id(table): table, id(t): t}.values():
        for v in tab.violations:
            print(f"FAIL marked-hypothesis: {v}", file=out)
            status = EXIT_FAIL
    for n in rep.failures():
        print(f"FAIL avoidance-decay: level {n} avoidance mass exceeds (1-K_lo)^{n} x0", file=out)
        status = EXIT_FAIL
    if status == EXIT_OK:
        print("OK", file=out)
    return status


def cmd_verify_uniform(args, out) -> int:
    mu = _load(args.input)
    res = is_uniform(mu)
    if res:
        print(f"uniform x0={_frac(res.x0)} s=[{','.join(str(s) for s in res.s_seq)}]", file=out)
        return EXIT_OK
    a, b = res.witness
    print(f"FAIL not-uniform: {res.reason} at level {res.level}: {a} vs {b}", file=out)
    return EXIT_FAIL


def cmd_lift(args, out) -> int:
    if args.d < 1:
        raise UsageError("--d: must be >= 1")
    mu = _load(args.input)
    lifted = block_lift(mu, args.d)
    _write(args.output, serialize(lifted))
    print(f"wrote {args.output}: m={lifted.m} depth={lifted.depth} nodes={len(lifted)}", file=out)
    return EXIT_OK


def cmd_sample(args, out) -> int:
    if args.count < 0:
        raise UsageError("--count: must be >= 0")
    mu = _load(args.input)
    print(f"seed={args.seed} count={args.count}", file=out)
    rng = random.Random(args.seed)
    for _ in range(args.count):
        print(sample_path(mu, rng.getrandbits(64)), file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="madic", description="Finite-depth measures on m-adic sequence space.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a measure and write it to a file")
    c.add_argument("--type", choices=("uniform", "greedy", "random"), required=True)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--alpha", help="p/q")
    c.add_argument("--depth", type=int, required=True)
    c.add_argument("--x0", default="1")
    c.add_argument("--s-seq", help="comma-separated branching counts (uniform)")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--min-children", type=int, default=1)
    c.add_argument("--max-children", type=int)
    c.add_argument("--split", choices=SPLIT_LAWS, default="integer")
    c.add_argument("-o", "--output", required=True)
    c.set_defaults(func=cmd_construct)

    a = sub.add_parser("analyze", help="density profiles and oscillation")
    asub = a.add_subparsers(dest="what", required=True)
    ap = asub.add_parser("profile")
    ap.add_argument("--in", dest="input", required=True)
    ap.add_argument("--alpha")
    ap.add_argument("--path", required=True)
    ap.add_argument("--csv")
    ap.set_defaults(func=cmd_analyze_profile)
    ao = asub.add_parser("oscillation")
    ao.add_argument("--in", dest="input", required=True)
    ao.add_argument("--alpha")
    ao.add_argument("--n0", type=int, default=0)
    ao.set_defaults(func=cmd_analyze_oscillation)

    v = sub.add_parser("verify", help="check the bounds and lemmas")
    vsub = v.add_subparsers(dest="what", required=True)
    vb = vsub.add_parser("bounds")
    vb.add_argument("--m", type=int, required=True)
    vb.add_argument("--alpha", required=True)
    vb.add_argument("--I-max", dest="I_max", type=int, default=DEFAULT_I_MAX)
    vb.set_defaults(func=cmd_verify_bounds)
    vd = vsub.add_parser("dirichlet")
    vd.add_argument("--w", required=True)
    vd.add_argument("--u", required=True)
    vd.add_argument("--delta", required=True)
    vd.add_argument("--tau", help="override the threshold (default: floor(w)*delta/u)")
    vd.add_argument("--trials", type=int, default=1000)
    vd.add_argument("--seed", type=int, default=0)
    vd.set_defaults(func=cmd_verify_dirichlet)
    vm = vsub.add_parser("marked")
    vm.add_argument("--in", dest="input", required=True)
    vm.add_argument("--alpha")
    vm.add_argument("--delta")
    vm.add_argument("--tau")
    vm.add_argument("--d-consec", type=int, default=1)
    vm.set_defaults(func=cmd_verify_marked)
    vu = vsub.add_parser("uniform")
    vu.add_argument("--in", dest="input", required=True)
    vu.set_defaults(func=cmd_verify_uniform)

    lf = sub.add_parser("lift", help="regroup d digit levels into one")
    lf.add_argument("--in", dest="input", required=True)
    lf.add_argument("--d", type=int, required=True)
    lf.add_argument("-o", "--output", required=True)
    lf.set_defaults(func=cmd_lift)

    sp = sub.add_parser("sample", help="draw mass-distributed support paths")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_sample)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except InputError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_IO


def main() -> None:
    sys.exit(run())
