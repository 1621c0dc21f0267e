"""Command-line interface: ``skolemlab <command> ...`` printing JSON on stdout.

Exit codes: 0 when every check passes, 1 when one fails, 2 for usage, scene
or parse errors, 3 when --strict is set and an UNKNOWN outcome is present.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import __version__
from .domains import IdealGens
from .errors import SkolemLabError
from .expr import parse_element, parse_expr, parse_function, parse_list
from .newton import nv_exactness, nv_local_poly, nv_minval_poly, nv_minval_rf
from .ratfunc import POLE, Poly, RatFunc, rf_eval
from .report import Report
from .scenes import load_scene
from .skolem import (
    SampleSet,
    certify_int_valued,
    construct_lemz,
    construct_rho,
    construct_theta,
    lemz_verify,
    sample_set,
    sk_member,
    theta_check,
)
from .spectra import PointedIndex, sp_ultraskolem_probe
from .suites import SUITES
from .valued_field import kv_sample


def _compact(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _seed(args, scene) -> int:
    env = os.environ.get("SKOLEMLAB_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise SkolemLabError(f"SKOLEMLAB_SEED must be an integer, got {env!r}") from None
    if args.seed is not None:
        return args.seed
    return scene.seed if scene.seed is not None else 0


def _as_poly(src: str, scene) -> Poly:
    phi = parse_function(src, scene)
    if phi.den.degree != 0:
        raise SkolemLabError(f"{src!r} is not a polynomial in x")
    return phi.num.scale(phi.den.coeffs[0].inverse())


def _value_json(val) -> dict:
    if val is POLE:
        return {"value": "POLE", "valuation": None}
    return {"value": val.to_expr(), "valuation": str(val.valuation())}


# -- commands ----------------------------------------------------------------------


def cmd_eval(args, scene):
    phi = parse_function(args.phi, scene)
    a = parse_element(args.at, scene)
    details = {"phi": phi.to_expr(), "at": a.to_expr()}
    details.update(_value_json(rf_eval(phi, a)))
    report = Report("eval", scene.to_json(), seed=None)
    report.add("eval", "pass", details)
    return report


def cmd_minval(args, scene):
    src = args.poly or args.phi
    phi = parse_function(src, scene)
    if phi.den.degree == 0:
        pl = nv_minval_poly(phi.num.scale(phi.den.coeffs[0].inverse()))
    else:
        pl = nv_minval_rf(phi)
    return pl.to_json()


def cmd_locpoly(args, scene):
    f = _as_poly(args.poly, scene)
    t = parse_element(args.t, scene)
    res = nv_local_poly(f, t)
    F = scene.K.base
    return {
        "d_index": res.d_index,
        "residue_poly": [F.to_str(c) for c in res.residue_poly],
        "minval_at": str(res.minval_at),
    }


def cmd_exactness(args, scene):
    f = _as_poly(args.poly, scene)
    a = parse_element(args.at, scene)
    out = nv_exactness(f, a).to_json()
    out["unit_residue"] = scene.K.base.to_str(nv_exactness(f, a).unit_residue)
    return out


def cmd_sk_check(args, scene):
    seed = _seed(args, scene)
    psi = parse_function(args.psi, scene)
    gens = IdealGens(parse_list(args.ideal, scene))
    if args.points:
        E = SampleSet(parse_list(args.points, scene, element=True), "points", "FiniteExact")
    else:
        rng = random.Random(seed)
        E = sample_set(rng, scene.D, args.samples or scene.sample_count, valuation_range=scene.valuation_range)
    rep = sk_member(psi, gens, E, scene.D)
    details = rep.summary()
    details["psi"] = psi.to_expr()
    details["ideal"] = [g.to_expr() for g in gens]
    fails = [p for p in rep.per_point if p.verdict != "pass"]
    if fails:
        details["failures"] = [{"a": p.a.to_expr(), "verdict": p.verdict} for p in fails[:10]]
    report = Report("sk-check", scene.to_json(), seed=None if args.points else seed)
    report.add("sk_member", rep.status, details)
    return report


def cmd_certify(args, scene):
    seed = _seed(args, scene)
    phi = parse_function(args.phi, scene)
    cert = certify_int_valued(phi, scene.D, args.depth, exhaustive=args.exhaustive, rng=random.Random(seed))
    details = cert.to_json()
    if not args.tree:
        details.pop("branch_tree", None)
    details["phi"] = phi.to_expr()
    status = {"CERTIFIED": "pass", "COUNTEREXAMPLE": "fail", "UNKNOWN": "evidence"}[cert.outcome]
    report = Report("certify", scene.to_json(), seed=seed)
    report.add("certify_int_valued", status, details)
    return report


def cmd_construct(args, scene):
    seed = _seed(args, scene)
    rng = random.Random(seed)
    D = scene.D
    report = Report(f"construct {args.what}", scene.to_json(), seed=seed)
    if args.what == "theta":
        theta = construct_theta(D)
        pts = [kv_sample(rng, scene.K, valuation_range=(-3, 3)) for _ in range(args.samples)]
        ok = sum(theta_check(theta, a) for a in pts)
        report.add("theta", "pass" if ok == len(pts) else "fail", {"phi": theta.to_expr(), "self_check": f"{ok}/{len(pts)}"})
    elif args.what == "rho":
        if not (args.phi1 and args.phi2):
            raise SkolemLabError("construct rho needs --phi1 and --phi2")
        p1, p2 = parse_function(args.phi1, scene), parse_function(args.phi2, scene)
        rho = construct_rho(p1, p2, D)
        good = total = 0
        for _ in range(args.samples):
            a = kv_sample(rng, scene.K, valuation_range=(-3, 3))
            v1, v2, r = rf_eval(p1, a), rf_eval(p2, a), rf_eval(rho, a)
            if POLE in (v1, v2) or not v2:
                continue
            total += 1
            good += r is not POLE and r.valuation() == min(v1.valuation(), v2.valuation())
        report.add("rho", "pass" if good == total else "fail", {"phi": rho.to_expr(), "self_check": f"{good}/{total}"})
    else:
        eps, delta = Fraction(args.eps), Fraction(args.delta)
        c = parse_element(args.c, scene)
        res = construct_lemz(eps, delta, c, D)
        chk = lemz_verify(res, delta, D, rng)
        details = res.to_json()
        details.update({
            "bounded_by_epsilon": chk.bounded,
            "positive_iff_close": chk.positivity,
            "value_at_center": chk.at_center,
            "gamma_above_delta": chk.gamma_above_delta,
            "grid": [[str(w), str(v)] for w, v in chk.grid],
        })
        report.add("lemz", "pass" if chk.ok else "fail", details)
    return report


def cmd_verify(args, scene):
    seed = _seed(args, scene)
    suite = SUITES[args.suite]
    kw = {"samples": args.samples or scene.sample_count, "seed": seed}
    if args.suite == "pvd-x2m":
        kw["negatives"] = args.negatives
    return suite(scene, **kw)


def cmd_spectra(args, scene):
    gens = parse_list(args.ideal, scene)
    pts = parse_list(args.points, scene, element=True)
    E = SampleSet(pts, "points", "FiniteExact")
    probe = sp_ultraskolem_probe(gens, E, scene.D)
    Pi = PointedIndex.from_points(scene.D, pts)
    details = probe.to_json(Pi)
    details["ideal"] = [g.to_expr() for g in gens]
    report = Report("spectra fip", scene.to_json(), seed=None)
    report.add("fip", "pass" if probe.ok else "fail", details)
    return report


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scene", default="a", help="scene JSON file or preset name (a, b, c, d, q)")
    common.add_argument("--seed", type=int, default=None, help="random seed (SKOLEMLAB_SEED overrides)")
    common.add_argument("--strict", action="store_true", help="exit 3 when an UNKNOWN outcome is present")
    common.add_argument("--pretty", action="store_true", help="human summary on stderr")

    p = argparse.ArgumentParser(prog="skolemlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"skolemlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="evaluate a rational function at a point")
    s.add_argument("--phi", required=True)
    s.add_argument("--at", required=True)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("minval", parents=[common], help="minimum-valuation envelope")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--poly")
    g.add_argument("--phi")
    s.set_defaults(func=cmd_minval)

    s = sub.add_parser("locpoly", parents=[common], help="local polynomial of f at t")
    s.add_argument("--poly", required=True)
    s.add_argument("--t", required=True)
    s.set_defaults(func=cmd_locpoly)

    s = sub.add_parser("exactness", parents=[common], help="compare v(f(a)) with the envelope")
    s.add_argument("--poly", required=True)
    s.add_argument("--at", required=True)
    s.set_defaults(func=cmd_exactness)

    s = sub.add_parser("sk-check", parents=[common], help="Skolem-closure membership on points or samples")
    s.add_argument("--psi", required=True)
    s.add_argument("--ideal", required=True, help="comma-separated generators")
    s.add_argument("--points", help="comma-separated points (an exact finite set)")
    s.add_argument("--samples", type=int, default=None)
    s.set_defaults(func=cmd_sk_check)

    s = sub.add_parser("certify", parents=[common], help="certify integer-valuedness on V")
    s.add_argument("--phi", required=True)
    s.add_argument("--depth", type=int, default=8)
    s.add_argument("--exhaustive", action="store_true", help="refuse to fall back to sampling")
    s.add_argument("--tree", action="store_true", help="include the branch tree")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("construct", parents=[common], help="build theta, rho or the Lemma-Z function")
    s.add_argument("what", choices=["lemz", "theta", "rho"])
    s.add_argument("--eps", default="1")
    s.add_argument("--delta", default="1")
    s.add_argument("--c", default="0")
    s.add_argument("--phi1")
    s.add_argument("--phi2")
    s.add_argument("--samples", type=int, default=100)
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("suite", choices=sorted(SUITES))
    s.add_argument("--samples", type=int, default=None)
    s.add_argument("--negatives", type=int, default=50)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("spectra", parents=[common], help="characteristic sets and FIP")
    s.add_argument("action", choices=["fip"])
    s.add_argument("--ideal", required=True)
    s.add_argument("--points", required=True)
    s.set_defaults(func=cmd_spectra)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        scene = load_scene(args.scene)
        result = args.func(args, scene)
    except (SkolemLabError, ArithmeticError) as e:
        print(f"skolemlab: error: {e}", file=sys.stderr)
        return 2
    if isinstance(result, Report):
        print(result.dumps())
        if args.pretty:
            print(result.summary(), file=sys.stderr)
        return result.exit_code(args.strict)
    print(_compact(result))
    if args.pretty:
        print(json.dumps(result, indent=2), file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
