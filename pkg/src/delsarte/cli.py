"""Command-line front end.

Every subcommand writes a JSON report (to ``--report`` or stdout).  Exit
status is 0 on success, 1 for bad input and 2 when an internal consistency
check fails (a theorem, bound or reproduction mismatch).
"""
from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .codes import read_code_file
from .distributions import analyze_subset
from .errors import DelsarteError, ImplementationFault, InputError, NotAScheme, ParameterOutOfRange
from .induced import DEFAULT_TRIPLES, induce_scheme
from .named import build_named
from .polynomials import annihilator_from_poly, annihilator_from_roots, verify_pcar, verify_qcar
from .regularity import (
    check_int_condition,
    check_mainth_hypothesis,
    is_completely_regular,
    outer_distribution,
    rank_certificate,
)
from .report import dumps, make_report
from .reproduce import ALIASES, EXAMPLE_KEYS, reproduce
from .scheme import verify_scheme
from .spherical import read_points, spherical_analysis


# -- inputs -----------------------------------------------------------------

def load_scheme_spec(text: str) -> dict:
    """A JSON object given inline or as a path to a file containing one."""
    path = Path(text)
    if not text.lstrip().startswith("{") and path.exists():
        base = path.parent
        text = path.read_text(encoding="utf-8")
    else:
        base = Path.cwd()
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"scheme spec is not valid JSON: {exc}") from None
    if not isinstance(spec, dict):
        raise InputError("scheme spec must be a JSON object")
    explicit = spec.get("explicit")
    if isinstance(explicit, dict) and "relations_file" in explicit:
        rel = base / explicit["relations_file"]
        rows = [line.split() for line in rel.read_text(encoding="utf-8").splitlines()
                if line.strip() and not line.lstrip().startswith("#")]
        spec = {"explicit": {"relations": [[int(x) for x in r] for r in rows]}}
    return spec


def build_scheme(spec: dict):
    if "explicit" in spec:
        rel = spec["explicit"].get("relations") if isinstance(spec["explicit"], dict) else None
        if rel is None:
            raise ParameterOutOfRange("explicit scheme needs a 'relations' matrix")
        try:
            R = np.array(rel, dtype=np.int64)
        except (ValueError, TypeError):
            raise InputError("relations must be a rectangular integer matrix") from None
        return verify_scheme(R, name=spec.get("name", "explicit"))
    return build_named(spec)


def describe(spec: dict) -> dict:
    if "explicit" in spec:
        return {"family": "explicit", "vertices": len(spec["explicit"]["relations"])}
    return spec


# -- subcommands ------------------------------------------------------------

def analysis_payload(an) -> dict:
    return {"size": an.subset_size, "a": an.inner, "b": an.dual,
            "degree_set": list(an.degree_set), "dual_degree_set": list(an.dual_degree_set),
            "s": an.degree, "s_star": an.dual_degree,
            "zero_intervals": an.zero_intervals, "dual_zero_intervals": an.dual_zero_intervals,
            "bounds": an.bound_verdicts}


def scheme_payload(S) -> dict:
    p_ord, q_ord = S.polynomial_orderings
    out = {"vertices": S.num_vertices, "classes": S.d, "valencies": list(S.valencies),
           "multiplicities": list(S.multiplicities), "P": S.P, "Q": S.Q,
           "p_ordering": list(p_ord) if p_ord else None,
           "q_ordering": list(q_ord) if q_ord else None}
    if S.d <= 12:
        out["intersection_numbers"] = S.intersection_numbers
        out["krein"] = S.krein
    return out


def cmd_scheme_info(args, S, spec):
    return make_report("scheme-info", {"scheme": scheme_payload(S)},
                       number_mode=S.number_mode, source={"scheme": describe(spec)})


def _subset(args, S):
    if not args.code:
        raise InputError("--code is required")
    return read_code_file(args.code, S)


def _source(args, spec) -> dict:
    return {"scheme": describe(spec), "code": Path(args.code).name if args.code else None}


def cmd_analyze(args, S, spec):
    an = analyze_subset(S, _subset(args, S))
    payload = {"family": spec.get("family", "explicit"), **analysis_payload(an)}
    for key in ("n", "q", "v", "k"):
        if key in spec:
            payload[key] = spec[key]
    return make_report("analyze", payload, number_mode=S.number_mode, source=_source(args, spec))


def cmd_cr_check(args, S, spec):
    C = _subset(args, S)
    an = analyze_subset(S, C)
    B = outer_distribution(S, C)
    verdict = is_completely_regular(B)
    if args.w is not None:
        ws = [args.w]
    else:
        ws = [w for w in range(S.d - an.dual_degree + 1) if an.inner[w] > 0]
    payload = verdict.as_dict()
    payload.update({
        "s_star": an.dual_degree, "rank_B": B.rank, "zero_intervals": an.zero_intervals,
        "hypothesis_checks": [check_mainth_hypothesis(S, B, an, w) for w in ws],
        "int_predictions": check_int_condition(S, B, an),
    })
    if args.certify_rank:
        x = args.base_point if args.base_point is not None else int(min(C))
        payload["rank_certificate"] = rank_certificate(S, C, B, an, x)
    return make_report("cr-check", payload, number_mode=S.number_mode, source=_source(args, spec))


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"expected integers, got {text!r}") from None


def cmd_annihilate(args, S, spec):
    an = analyze_subset(S, _subset(args, S))
    if args.poly:
        from fractions import Fraction

        coeffs = [Fraction(t) for t in args.poly.replace(",", " ").split()]
        F = annihilator_from_poly(S, coeffs, dual=args.dual)
    else:
        default = an.degree_set if args.dual else an.dual_degree_set
        roots = _int_list(args.roots) if args.roots else list(default)
        F = annihilator_from_roots(S, roots, dual=args.dual)
    residual = verify_qcar(S, an, F) if args.dual else verify_pcar(S, an, F)
    payload = {"dual": args.dual, "roots": list(F.roots), "coefficients": F.coeffs,
               "expansion": F.expansion, "residual": residual,
               "identity": "Q" if args.dual else "P"}
    return make_report("annihilate", payload, number_mode=S.number_mode, source=_source(args, spec))


def cmd_induce(args, S, spec):
    C = _subset(args, S)
    an = analyze_subset(S, C)
    payload = {"degree_set": list(an.degree_set), "s": an.degree,
               "dual_zero_intervals": an.dual_zero_intervals}
    try:
        ind = induce_scheme(S, C, analysis=an, w_star=args.w_star, full_verify=args.full_verify,
                            triples=args.triples, seed=args.seed)
    except NotAScheme as exc:
        payload["hypothesis"] = None
        payload["induced"] = {"scheme_ok": False, "reason": str(exc)}
    else:
        payload["hypothesis"] = ind.hypothesis
        payload["induced"] = ind
    return make_report("induce", payload, number_mode=S.number_mode, source=_source(args, spec))


def cmd_spherical(args):
    X = read_points(args.points)
    rep = spherical_analysis(X, args.kmax, designs=[tuple(d) for d in args.design or ()])
    payload = {
        "size": rep.size, "d": rep.d, "moments": rep.moments, "degree_set": rep.degree_set,
        "s": rep.s, "intervals": rep.intervals,
        "bound_checks": [{"interval": iv, "satisfied": ok} for iv, ok in rep.bound_checks],
        "designs": [{"w": w, "t": t, "holds": ok} for (w, t), ok in rep.designs.items()],
        "scheme_candidates": [{"interval": iv, "hypothesis": hyp, "scheme": sch}
                              for iv, hyp, sch in rep.int_candidates],
    }
    return make_report("spherical", payload, number_mode=rep.number_mode,
                       source={"points": Path(args.points).name})


def cmd_reproduce(args):
    results = reproduce(args.which, m=args.m, n=args.n,
                        full_verify=True if args.full_verify else None,
                        triples=args.triples, seed=args.seed)
    return make_report("reproduce-examples", {"examples": results, "all_passed": True},
                       number_mode="EXACT")


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="delsarte",
                                description="Zero intervals, complete regularity and induced schemes.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", help="write the JSON report here instead of stdout")
    common.add_argument("--threads", type=int, help="cap BLAS threads (also DELSARTE_THREADS)")
    scheme = argparse.ArgumentParser(add_help=False)
    scheme.add_argument("--scheme", required=True,
                        help='JSON descriptor or file, e.g. \'{"family":"hamming","n":7,"q":2}\'')
    code = argparse.ArgumentParser(add_help=False, parents=[scheme])
    code.add_argument("--code", required=True, help="subset file (words, k-sets or vertex indices)")

    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")
    sub.add_parser("scheme-info", parents=[common, scheme], help="eigenmatrices and orderings")
    sub.add_parser("analyze", parents=[common, code], help="inner/dual distributions and intervals")

    cr = sub.add_parser("cr-check", parents=[common, code], help="complete regularity checks")
    cr.add_argument("--w", type=int, help="check the hypothesis at this w only")
    cr.add_argument("--certify-rank", action="store_true", help="emit rank certificates")
    cr.add_argument("--base-point", type=int, help="vertex of C for the certificate")

    an = sub.add_parser("annihilate", parents=[common, code], help="annihilator polynomial residuals")
    an.add_argument("--dual", action="store_true", help="Q-side: roots among dual eigenvalues")
    g = an.add_mutually_exclusive_group()
    g.add_argument("--roots", help="eigenvalue indices, comma separated")
    g.add_argument("--poly", help="monomial coefficients c0,c1,... (rationals allowed)")

    ind = sub.add_parser("induce", parents=[common, code], help="induced Q-polynomial scheme")
    ind.add_argument("--w-star", type=int)
    ind.add_argument("--full-verify", action="store_true", help="check every triple")
    ind.add_argument("--triples", type=int, default=DEFAULT_TRIPLES)
    ind.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("spherical", parents=[common], help="spherical point-set analysis")
    sp.add_argument("--points", required=True)
    sp.add_argument("--kmax", type=int, default=None)
    sp.add_argument("--design", type=int, nargs=2, action="append", metavar=("W", "T"))

    rp = sub.add_parser("reproduce-examples", parents=[common], help="check the worked code examples")
    rp.add_argument("--which", nargs="+", default=["all"],
                    choices=sorted(set(EXAMPLE_KEYS) | set(ALIASES)), metavar="KEY",
                    help="example keys, or all / P / Q / golay23 / golay24")
    rp.add_argument("--m", type=int, default=3, help="Hamming parameter")
    rp.add_argument("--n", type=int, default=3, help="pair-code parameter")
    rp.add_argument("--full-verify", action="store_true")
    rp.add_argument("--triples", type=int, default=DEFAULT_TRIPLES)
    rp.add_argument("--seed", type=int, default=0)
    return p


def _thread_limit(args):
    n = args.threads
    if n is None and os.environ.get("DELSARTE_THREADS"):
        n = int(os.environ["DELSARTE_THREADS"])
    if n is None:
        return contextlib.nullcontext()
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=max(1, n))


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with _thread_limit(args):
            if args.command == "spherical":
                report = cmd_spherical(args)
            elif args.command == "reproduce-examples":
                report = cmd_reproduce(args)
            else:
                spec = load_scheme_spec(args.scheme)
                S = build_scheme(spec)
                handler = {"scheme-info": cmd_scheme_info, "analyze": cmd_analyze,
                           "cr-check": cmd_cr_check, "annihilate": cmd_annihilate,
                           "induce": cmd_induce}[args.command]
                report = handler(args, S, spec)
    except ImplementationFault as exc:
        print(f"delsarte: internal check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (InputError, OSError) as exc:
        print(f"delsarte: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except DelsarteError as exc:  # pragma: no cover - every error has a side
        print(f"delsarte: {exc}", file=sys.stderr)
        return 1
    text = dumps(report)
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())
