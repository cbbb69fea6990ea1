"""Command-line interface.

One subcommand per operation; JSON on stdout.  Exit codes: 0 the checked
property holds (or plain output succeeded), 1 it fails / is refuted, 2 a
precondition makes the check inapplicable, 3 malformed input or an
internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bounds, network, polytope, su, volume

EXIT_ERROR = 3


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_polytope(path: str) -> polytope.LatticePolytope:
    return polytope.polytope_from_json_dict(_load_json(path))


def _load_expr(path: str) -> su.SUExpression:
    return su.su_from_json_dict(_load_json(path))


def _load_network(path: str) -> network.ReluNetwork:
    return network.network_from_json_dict(_load_json(path))


def _parse_vector(text: str) -> tuple[Fraction, ...]:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if not parts:
        raise ValueError(f"empty vector {text!r}")
    return tuple(Fraction(p) for p in parts)


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


# -- command handlers -----------------------------------------------------


def _cmd_vol(args) -> int:
    p = _load_polytope(args.polytope)
    d = args.d if args.d is not None else p.dim()
    value = volume.normalized_volume(p, d)
    _emit({"d": d, "value": str(value), "method": "triangulation"})
    return 0


def _cmd_count(args) -> int:
    p = _load_polytope(args.polytope)
    d = p.dim()
    t_max = args.tmax if args.tmax is not None else d + 2
    value = volume.normalized_volume_counting_oracle(p, d, t_max)
    counts = [polytope.lattice_points_count(polytope.dilate(p, t)) for t in range(t_max + 1)]
    _emit({
        "d": d,
        "t_max": t_max,
        "dilate_counts": [str(c) for c in counts],
        "value": str(value),
        "method": "counting",
    })
    return 0


def _cmd_mixedvol(args) -> int:
    polys = [_load_polytope(path) for path in args.polytopes]
    value = volume.mixed_volume(polys)
    _emit({"d": len(polys), "value": str(value)})
    return 0


def _cmd_mink(args) -> int:
    p = _load_polytope(args.first)
    q = _load_polytope(args.second)
    _emit(polytope.minkowski_sum(p, q).to_json_dict())
    return 0


def _cmd_hull(args) -> int:
    obj = _load_json(args.points)
    _emit(polytope.polytope_from_json_dict(obj).to_json_dict())
    return 0


def _cmd_face(args) -> int:
    p = _load_polytope(args.polytope)
    u = _parse_vector(args.u)
    _emit(p.face(u).to_json_dict())
    return 0


def _cmd_binomial(args) -> int:
    a = _load_polytope(args.first)
    b = _load_polytope(args.second)
    result = volume.binomial_expansion_check(a, b, args.d)
    _emit(result.to_json_dict())
    return 0 if result.ok else 1


def _cmd_check_modular(args) -> int:
    parts = [_load_polytope(path) for path in args.parts]
    cert = volume.modular_additivity_check(parts, args.p, args.t)
    _emit(cert.to_json_dict())
    return cert.exit_code


def _cmd_check_join(args) -> int:
    a = _load_polytope(args.first)
    b = _load_polytope(args.second)
    cert = volume.join_divisibility_check(a, b)
    _emit(cert.to_json_dict())
    return cert.exit_code


def _cmd_check_su_invariant(args) -> int:
    expr = _load_expr(args.expression)
    report = su.p_invariant_check(expr, args.p)
    _emit(report.to_json_dict())
    return report.exit_code


def _cmd_su_eval(args) -> int:
    expr = _load_expr(args.expression)
    _emit(su.evaluate(expr).to_json_dict())
    return 0


def _cmd_su_face(args) -> int:
    expr = _load_expr(args.expression)
    u = _parse_vector(args.u)
    _emit(su.su_to_json_dict(su.face_expr(expr, u)))
    return 0


def _cmd_su_random(args) -> int:
    expr = su.random_su(
        args.k, args.n, budget=args.budget,
        coord_range=(-args.range, args.range), seed=args.seed,
    )
    _emit(su.su_to_json_dict(expr))
    return 0


def _cmd_net_eval(args) -> int:
    net = _load_network(args.network)
    x = _parse_vector(args.x)
    _emit({"value": str(network.evaluate_network(net, x))})
    return 0


def _cmd_net_clear(args) -> int:
    net = _load_network(args.network)
    _emit(network.network_to_json_dict(network.clear_denominators(net, args.M)))
    return 0


def _cmd_net_compile(args) -> int:
    net = _load_network(args.network)
    _emit(network.compile_to_polytopes(net).to_json_dict())
    return 0


def _cmd_net_equal(args) -> int:
    net1 = _load_network(args.first)
    net2 = _load_network(args.second)
    cert = network.functions_equal(net1, net2)
    _emit(cert.to_json_dict())
    return cert.exit_code


def _cmd_net_verify_max(args) -> int:
    net = _load_network(args.network)
    cert = network.represents_scaled_simplex(net, args.lam)
    _emit(cert.to_json_dict())
    return cert.exit_code


def _cmd_net_refute(args) -> int:
    net = _load_network(args.network)
    lam = "auto" if args.lam == "auto" else int(args.lam)
    report = bounds.refute_network_claim(net, args.n, lam)
    _emit(report.to_json_dict())
    return report.exit_code


def _cmd_bound(args) -> int:
    base = "Z" if args.base == "Z" else int(args.base)
    report = bounds.lower_bound_nary(args.n, base)
    _emit(report.to_json_dict())
    return 0


def _cmd_growth(args) -> int:
    rows = bounds.gradual_growth_table(args.n, args.base)
    _emit({
        "n": args.n,
        "base": args.base,
        "rows": [row.to_json_dict() for row in rows],
    })
    return 0


# -- parser ----------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reluvol",
        description="Exact lattice-polytope volumes, sum-union closures, and ReLU depth bounds",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("vol", help="normalized volume by triangulation")
    s.add_argument("polytope")
    s.add_argument("-d", type=int, default=None)
    s.set_defaults(handler=_cmd_vol)

    s = sub.add_parser("count", help="normalized volume by the counting oracle")
    s.add_argument("polytope")
    s.add_argument("--tmax", type=int, default=None)
    s.set_defaults(handler=_cmd_count)

    s = sub.add_parser("mixedvol", help="mixed volume of d polytopes")
    s.add_argument("polytopes", nargs="+")
    s.set_defaults(handler=_cmd_mixedvol)

    s = sub.add_parser("mink", help="Minkowski sum of two polytopes")
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(handler=_cmd_mink)

    s = sub.add_parser("hull", help="convex hull of a lattice point set")
    s.add_argument("points")
    s.set_defaults(handler=_cmd_hull)

    s = sub.add_parser("face", help="face of a polytope in a direction")
    s.add_argument("polytope")
    s.add_argument("--u", required=True, help='direction, e.g. "1,0,-2"')
    s.set_defaults(handler=_cmd_face)

    s = sub.add_parser("binomial", help="binomial mixed-volume expansion check")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("-d", type=int, default=None)
    s.set_defaults(handler=_cmd_binomial)

    s = sub.add_parser("check", help="divisibility and invariant checks")
    check_sub = s.add_subparsers(dest="check_command", required=True)

    c = check_sub.add_parser("modular", help="modular additivity of volumes")
    c.add_argument("parts", nargs="+")
    c.add_argument("-p", type=int, required=True)
    c.add_argument("-t", type=int, default=None)
    c.set_defaults(handler=_cmd_check_modular)

    c = check_sub.add_parser("join", help="join volume divisibility")
    c.add_argument("first")
    c.add_argument("second")
    c.set_defaults(handler=_cmd_check_join)

    c = check_sub.add_parser("su-invariant", help="mod-p face volume invariant")
    c.add_argument("expression")
    c.add_argument("-p", type=int, required=True)
    c.set_defaults(handler=_cmd_check_su_invariant)

    s = sub.add_parser("su", help="sum-union expressions")
    su_sub = s.add_subparsers(dest="su_command", required=True)

    c = su_sub.add_parser("eval", help="evaluate an expression to a polytope")
    c.add_argument("expression")
    c.set_defaults(handler=_cmd_su_eval)

    c = su_sub.add_parser("face", help="face expression in a direction")
    c.add_argument("expression")
    c.add_argument("--u", required=True)
    c.set_defaults(handler=_cmd_su_face)

    c = su_sub.add_parser("random", help="seeded random expression")
    c.add_argument("-k", type=int, required=True)
    c.add_argument("-n", type=int, required=True)
    c.add_argument("--budget", type=int, default=3)
    c.add_argument("--range", type=int, default=3)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(handler=_cmd_su_random)

    s = sub.add_parser("net", help="ReLU networks")
    net_sub = s.add_subparsers(dest="net_command", required=True)

    c = net_sub.add_parser("eval", help="exact forward pass")
    c.add_argument("network")
    c.add_argument("--x", required=True, help='input, e.g. "1,-2,1/2"')
    c.set_defaults(handler=_cmd_net_eval)

    c = net_sub.add_parser("clear", help="clear denominators with a factor M")
    c.add_argument("network")
    c.add_argument("-M", type=int, required=True)
    c.set_defaults(handler=_cmd_net_clear)

    c = net_sub.add_parser("compile", help="compile to a polytope pair")
    c.add_argument("network")
    c.set_defaults(handler=_cmd_net_compile)

    c = net_sub.add_parser("equal", help="certificate of function equality")
    c.add_argument("first")
    c.add_argument("second")
    c.set_defaults(handler=_cmd_net_equal)

    c = net_sub.add_parser("verify-max", help="does the net compute lam * max(0, x..)?")
    c.add_argument("network")
    c.add_argument("--lam", type=int, default=1)
    c.set_defaults(handler=_cmd_net_verify_max)

    c = net_sub.add_parser("refute", help="check a shipped claim about computing max")
    c.add_argument("network")
    c.add_argument("-n", type=int, required=True)
    c.add_argument("--lam", default="auto")
    c.set_defaults(handler=_cmd_net_refute)

    s = sub.add_parser("bound", help="hidden-layer bounds for exact max")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("-N", dest="base", default="Z", help='weight base N, or "Z"')
    s.set_defaults(handler=_cmd_bound)

    s = sub.add_parser("growth", help="gradual growth table of max witnesses")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("-N", dest="base", type=int, default=10)
    s.set_defaults(handler=_cmd_growth)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError, ArithmeticError) as exc:
        _emit({"error": str(exc)})
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
