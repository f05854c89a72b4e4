"""Command-line front end.

Exit status: 0 when the requested check holds, 1 when a verification fails,
2 on usage errors.  ``--out`` paths that are relative are resolved against
``$SOMOSLAB_OUT`` when that variable is set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from . import analysis, confinement, diophantine, geometry, linearize, repro
from .engine import BudgetExceeded, iterate_exact, plot_points
from .recdsl import ParseError, RecurrenceSpec, catalog, catalog_names, parse_recurrence

OUT_ENV = "SOMOSLAB_OUT"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not an exact rational: {text!r}") from None


def parse_params(text: Optional[str]) -> Dict[str, Fraction]:
    out: Dict[str, Fraction] = {}
    if not text:
        return out
    for item in text.split(","):
        if "=" not in item:
            raise UsageError(f"parameter binding {item!r} should look like name=value")
        k, v = item.split("=", 1)
        out[k.strip()] = parse_rational(v)
    return out


def parse_list(text: Optional[str]) -> List[Fraction]:
    if not text:
        return []
    return [parse_rational(v) for v in text.split(",")]


def _fmt(q) -> str:
    if q is None:
        return "pole"
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def load_spec(args) -> RecurrenceSpec:
    rec, path = getattr(args, "rec", None), getattr(args, "rec_file", None)
    if (rec is None) == (path is None):
        raise UsageError("give exactly one of --rec or --rec-file")
    try:
        if path is not None:
            with open(path) as fh:
                return parse_recurrence(fh.read(), name=os.path.splitext(os.path.basename(path))[0])
        return catalog(rec)
    except KeyError:
        raise UsageError(f"unknown recurrence {rec!r}; catalog: {', '.join(catalog_names())}") from None
    except ParseError as exc:
        raise UsageError(str(exc)) from None


def _bind(spec: RecurrenceSpec, params: Dict[str, Fraction]) -> Dict[str, Fraction]:
    try:
        return spec.bind(params)
    except KeyError as exc:
        raise UsageError(f"{exc.args[0]} (use --params)") from None


def _seed(args, spec: RecurrenceSpec) -> List[Fraction]:
    seed = parse_list(args.seed) if args.seed else [Fraction(1)] * spec.order
    if len(seed) != spec.order:
        raise UsageError(f"{spec.name} needs {spec.order} seed values, got {len(seed)}")
    return seed


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def emit(args, text: str) -> None:
    path = getattr(args, "out", None)
    if not path:
        sys.stdout.write(text)
        return
    base = os.environ.get(OUT_ENV)
    if base and not os.path.isabs(path):
        os.makedirs(base, exist_ok=True)
        path = os.path.join(base, path)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _add_rec(p, seed: bool = True, n: Optional[int] = None) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--rec", help="catalog name, e.g. somos4 or family(3)")
    g.add_argument("--rec-file", help="file with a recurrence definition")
    p.add_argument("--params", help="bindings like alpha=1,beta=3/2")
    if seed:
        p.add_argument("--seed", help="comma-separated initial values (default all 1)")
    if n is not None:
        p.add_argument("--n", type=int, default=n, help="number of steps")


def _nonneg(n: int) -> int:
    if n < 0:
        raise UsageError("--n must be non-negative")
    return n


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_iterate(args) -> int:
    spec = load_spec(args)
    params = _bind(spec, parse_params(args.params))
    orb = iterate_exact(spec, _seed(args, spec), params, _nonneg(args.n))
    if args.format == "json":
        emit(args, dumps(orb.to_json()))
    elif args.format == "jsonl":
        emit(args, orb.to_jsonl())
    else:
        vals = orb.values if args.all else orb.values[spec.order:]
        emit(args, ",".join(_fmt(v) for v in vals) + "\n")
    return 0 if orb.pole_index is None else 1


def cmd_check_laurent(args) -> int:
    spec = load_spec(args)
    rep = analysis.check_laurent(spec, _nonneg(args.n), parse_params(args.params) or None, args.budget)
    emit(args, dumps(rep.to_json()))
    return 0 if rep.certified else 1


def cmd_degrees(args) -> int:
    n = _nonneg(args.n)
    spec = catalog(f"family({args.c})")
    init = parse_list(args.init) or None
    trop = analysis.tropical_degrees(args.c, n + 1)
    try:
        meas = analysis.measured_beta_degrees(spec, n, init=init, budget=args.budget).values
        partial = None
    except BudgetExceeded as exc:
        meas = analysis.beta_degrees(exc.partial).values
        partial = str(exc)
    if args.format == "json":
        emit(args, dumps({"c": args.c, "init": None if init is None else [_fmt(v) for v in init],
                          "measured": meas, "tropical": list(trop), "exhausted": partial,
                          "agree": meas == list(trop)}))
    else:
        emit(args, analysis.degree_table_tsv(meas, list(trop)))
    if partial:
        print(partial, file=sys.stderr)
    return 0 if meas == list(trop) else 1


def cmd_entropy(args) -> int:
    d = analysis.tropical_degrees(args.c, args.n)
    est = analysis.entropy_estimate(d)
    exact = analysis.entropy_closed_form(args.c)
    rel = abs(est - exact) / exact if exact else None
    ok = rel is None or rel <= args.tol
    emit(args, dumps({"c": args.c, "n": args.n, "estimate": est, "closed_form": exact,
                      "relative_error": rel, "tolerance": args.tol, "ok": ok}))
    return 0 if ok else 1


def cmd_heights(args) -> int:
    spec = load_spec(args)
    params = _bind(spec, parse_params(args.params))
    orb = iterate_exact(spec, _seed(args, spec), params, _nonneg(args.n))
    rep = analysis.height_growth(orb)
    emit(args, analysis.growth_json(rep) + "\n")
    return 0


def cmd_invariant(args) -> int:
    try:
        K = geometry.quantity(args.name)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    spec = load_spec(args) if (args.rec or args.rec_file) else catalog(K.spec)
    v = geometry.verify_conserved(spec, K)
    emit(args, v.dumps() + "\n")
    return 0 if v else 1


def _structure(args) -> geometry.PoissonStructure:
    if args.structure == "s4":
        return geometry.PoissonStructure.s4()
    if args.structure == "planar":
        return geometry.PoissonStructure.planar()
    if args.c is None:
        raise UsageError("--structure family needs --c")
    return geometry.PoissonStructure.family(args.c)


def cmd_poisson(args) -> int:
    P = _structure(args)
    check = args.check
    if check == "map":
        spec = load_spec(args) if (args.rec or args.rec_file) else catalog(f"family({args.c})")
        v = geometry.verify_poisson_map(spec, P)
    elif check == "casimir":
        if not args.f:
            raise UsageError("casimir needs --f")
        v = geometry.verify_casimir(P, geometry.quantity(args.f))
    elif check == "involution":
        if not (args.a and args.b):
            raise UsageError("involution needs --a and --b")
        v = geometry.verify_involution(P, geometry.quantity(args.a), geometry.quantity(args.b))
    elif check == "jacobi":
        v = geometry.verify_jacobi(P)
    else:
        if args.c is None:
            raise UsageError("det needs --c")
        det = P.determinant()
        want = (args.c - 2) ** 2 * (args.c + 1) ** 2
        v = geometry.Verdict("determinant", {"c": args.c}, det == want, None if det == want else str(det),
                             {"determinant": det, "expected": want})
    emit(args, v.dumps() + "\n")
    return 0 if v else 1


def cmd_lax(args) -> int:
    v = geometry.verify_lax(printed=args.printed)
    emit(args, v.dumps() + "\n")
    return 0 if v else 1


def cmd_reduce(args) -> int:
    v = geometry.verify_reduction(args.kind)
    emit(args, v.dumps() + "\n")
    return 0 if v else 1


def cmd_linearize(args) -> int:
    seed = parse_list(args.seed) or [Fraction(1)] * 4
    beta = parse_rational(args.beta)
    report = linearize.linearize_report(args.case, seed, beta, args.upto)
    emit(args, dumps(report))
    if report["A"] is None:
        return 1
    return 0 if report["verified_up_to"] == args.upto else 1


def cmd_reconstruct(args) -> int:
    seed = parse_list(args.seed) or [Fraction(1)] * 4
    val = linearize.reconstruct(args.case, seed, parse_rational(args.beta), _nonneg(args.n), args.j)
    emit(args, _fmt(val) + "\n")
    return 0


def cmd_dioph(args) -> int:
    if args.verify:
        with open(args.verify) as fh:
            doc = json.load(fh)
        failures = diophantine.verify_batch(doc)
        emit(args, dumps({"checked": len(doc["solutions"]), "failures": failures}))
        return 0 if not failures else 1
    if args.c is None or args.beta is None:
        raise UsageError("dioph needs --c and --beta (or --verify FILE)")
    lam = [int(v) for v in args.lam.split(",")] if args.lam else [1, 0, 0]
    if len(lam) != 3:
        raise UsageError("--lambda takes three integers")
    if args.pencil:
        quad = parse_list(args.pencil)
        res = diophantine.pencil_check(args.c, quad, args.beta, lam)
        emit(args, dumps({"c": args.c, "beta": args.beta, "lambda": lam, "window": [_fmt(q) for q in quad],
                          "lhs": _fmt(res.lhs), "rhs": _fmt(res.rhs), "ok": res.ok}))
        return 0 if res.ok else 1
    seed = [int(v) for v in parse_list(args.seed)] if args.seed else (1, 1, 1, 1)
    batch = diophantine.harvest(args.c, args.beta, args.harvest, seed=seed, lam=lam)
    emit(args, dumps(batch.to_json()))
    return 0


def cmd_eds(args) -> int:
    orb = diophantine.eds_generate(args.x2, args.x3, args.x4, args.n)
    rep = diophantine.divisibility_check(orb)
    emit(args, dumps({"x2": args.x2, "x3": args.x3, "x4": args.x4, "N": args.n,
                      "values": [_fmt(v) for v in orb.values], "divisibility": rep.ok,
                      "checked_pairs": rep.checked, "upto": rep.upto,
                      "failure": list(rep.failure) if rep.failure else None}))
    return 0 if rep.ok else 1


def cmd_fib(args) -> int:
    if args.start < 4:
        raise UsageError("--start must be at least 4")
    rows = [{"n": n, "holds": diophantine.fibonacci_identity(n)} for n in range(args.start, args.n + 1)]
    ok = all(r["holds"] for r in rows)
    emit(args, dumps({"identity": rows, "ok": ok}))
    return 0 if ok else 1


def cmd_confine(args) -> int:
    if args.subst:
        try:
            ok = confinement.verify_substitution(args.subst)
            doc = {"substitution": args.subst, "verified": ok}
        except confinement.ReductionFailure as exc:
            ok, doc = False, {"substitution": args.subst, "verified": False, "remainder": exc.remainder}
        emit(args, dumps(doc))
        return 0 if ok else 1
    reports = confinement.probe(args.kind, args.count, args.probe_seed)
    patterns = {r.pattern for r in reports}
    ok = len(patterns) == 1 and all(r.confined for r in reports)
    emit(args, dumps({"kind": args.kind, "agree": len(patterns) == 1, "confined": ok,
                      "reports": [r.to_json() for r in reports]}))
    return 0 if ok else 1


def cmd_plot_data(args) -> int:
    spec = load_spec(args)
    params = _bind(spec, parse_params(args.params))
    seed = [float(v) for v in _seed(args, spec)]
    pts = plot_points(spec, seed, params, _nonneg(args.n))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["u_n", "u_{n+1}"])
    for a, b in pts:
        w.writerow([repr(a), repr(b)])
    emit(args, buf.getvalue())
    return 0


def cmd_repro(args) -> int:
    nums = [int(v) for v in args.only.split(",")] if args.only else None
    if nums and any(n not in repro.CRITERIA for n in nums):
        raise UsageError(f"criteria are numbered 1..{len(repro.CRITERIA)}")
    results = repro.run_all(nums)
    if args.format == "json":
        emit(args, dumps([r.to_json() for r in results]))
    else:
        emit(args, repro.summary_table(results))
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="somoslab", description="Exact experiments with Somos-type recurrences.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, fmt=None):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        p.add_argument("--out", help=f"output file (relative paths go under ${OUT_ENV} when set)")
        if fmt:
            p.add_argument("--format", choices=fmt, default=fmt[0])
        return p

    p = add("iterate", cmd_iterate, "exact rational iteration", ["text", "json", "jsonl"])
    _add_rec(p, n=10)
    p.add_argument("--all", action="store_true", help="include the seed in text output")

    p = add("check-laurent", cmd_check_laurent, "symbolic Laurent certification")
    _add_rec(p, seed=False, n=10)
    p.add_argument("--budget", type=float, help="seconds before giving up")

    p = add("degrees", cmd_degrees, "measured beta-degrees beside the tropical prediction", ["tsv", "json"])
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--init", help="specialise the initial data, e.g. 1,1,1,1")
    p.add_argument("--budget", type=float)

    p = add("entropy", cmd_entropy, "entropy estimate from tropical degrees")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--n", type=int, default=60)
    p.add_argument("--tol", type=float, default=0.02)

    p = add("heights", cmd_heights, "height growth classification")
    _add_rec(p, n=14)

    p = add("invariant", cmd_invariant, "verify a conserved quantity")
    p.add_argument("--name", required=True, choices=geometry.quantity_names())
    g = p.add_mutually_exclusive_group()
    g.add_argument("--rec")
    g.add_argument("--rec-file")

    p = add("poisson", cmd_poisson, "Poisson map, Casimir, involution, Jacobi and determinant checks")
    p.add_argument("--check", choices=["map", "casimir", "involution", "jacobi", "det"], required=True)
    p.add_argument("--structure", choices=["family", "s4", "planar"], default="family")
    p.add_argument("--c", type=int)
    p.add_argument("--f")
    p.add_argument("--a")
    p.add_argument("--b")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--rec")
    g.add_argument("--rec-file")

    p = add("lax", cmd_lax, "Lax compatibility and spectral curve")
    p.add_argument("--printed", action="store_true", help="use the alternative M entry alpha/u_n")

    p = add("reduce", cmd_reduce, "reduction identities")
    p.add_argument("--kind", required=True,
                   choices=["u_sub", "hirota_embed", "gauge_algebra", "ham_field", "two_form_pullback"])

    for name, fn, help_ in (("linearize", cmd_linearize, "invariants and Chebyshev data"),
                            ("reconstruct", cmd_reconstruct, "closed-form x_{3n+j}")):
        p = add(name, fn, help_)
        p.add_argument("--case", choices=["c1", "c0"], required=True)
        p.add_argument("--seed", help="p,q,r,s (default 1,1,1,1)")
        p.add_argument("--beta", required=True)
    p_lin = sub.choices["linearize"]
    p_lin.add_argument("--upto", type=int, default=30)
    p_rec = sub.choices["reconstruct"]
    p_rec.add_argument("--n", type=int, required=True)
    p_rec.add_argument("--j", type=int, default=0, choices=[0, 1, 2])

    p = add("dioph", cmd_dioph, "pencil checks and integer-solution harvests")
    p.add_argument("--c", type=int, choices=[0, 1])
    p.add_argument("--beta", type=int)
    p.add_argument("--lambda", dest="lam", help="pencil weights, e.g. 1,0,0")
    p.add_argument("--seed", help="integer seed window for harvesting")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--harvest", type=int, default=10)
    mode.add_argument("--pencil", help="check one window p,q,r,s")
    mode.add_argument("--verify", help="re-check a batch JSON file")

    p = add("eds", cmd_eds, "elliptic divisibility sequence and divisibility check")
    p.add_argument("--x2", type=int, required=True)
    p.add_argument("--x3", type=int, required=True)
    p.add_argument("--x4", type=int, required=True)
    p.add_argument("--n", type=int, default=40)

    p = add("fib", cmd_fib, "even-index Fibonacci Somos-4 identity")
    p.add_argument("--start", type=int, default=4)
    p.add_argument("--n", type=int, default=12)

    p = add("confine", cmd_confine, "singularity patterns and tau substitutions")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--kind", help="viallet, hv or family(c)")
    grp.add_argument("--subst", choices=["viallet_tau", "hv_tau", "s4_to_u"])
    p.add_argument("--count", type=int, default=3)
    p.add_argument("--probe-seed", type=int, default=0)

    p = add("plot-data", cmd_plot_data, "(u_n, u_{n+1}) CSV for phase portraits")
    _add_rec(p, n=1000)

    p = add("repro", cmd_repro, "run the acceptance suite", ["table", "json"])
    p.add_argument("--only", help="comma-separated criterion numbers")
    return ap


# errors that mean the inputs were outside an operation's domain
_DOMAIN_ERRORS = (
    UsageError,
    diophantine.DegenerateParameter,
    diophantine.PreconditionViolated,
    diophantine.ZeroEntry,
    linearize.ZeroCoordinate,
    linearize.DegenerateMultiplier,
    linearize.InsufficientLength,
    analysis.InsufficientData,
)


def run(argv: Optional[Sequence[str]] = None) -> int:
    # orbit values of non-integrable maps quickly pass the default digit limit
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _DOMAIN_ERRORS as exc:
        print(f"somoslab {args.command}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"somoslab {args.command}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"somoslab {args.command}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
