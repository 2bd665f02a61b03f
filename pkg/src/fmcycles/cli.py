"""Command-line front end.

Exit status: 0 on success, 1 on a domain error, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import acceptance
from .curves import ChainCurve, CycleCurve
from .errors import DomainError, FMCyclesError, MalformedInput
from .invariants import (
    ChainLineBundle,
    CycleLineBundle,
    HilbertClass,
    KClass,
    hilbert_of_kclass,
    line_bundle_cohomology,
    slope,
)
from .moduli import component_dimension, moduli_point, phi_bar, stable_locus
from .reduction import compress_trace, orbit, orbit_dot, reduce
from .serialize import (
    curve_to_json,
    descriptor_from_json,
    descriptor_to_json,
    dumps,
    load_json,
    moduli_point_from_json,
    moduli_point_to_json,
    parse_int_list,
    parse_rational,
    rational_to_json,
    summand_to_json,
)
from .sheaves import (
    StableLineBundle,
    degree0_stable,
    descriptor_stability,
    enumerate_indecomposables,
    format_factors,
    graded_degree0,
    invariants_of,
    is_locally_free,
    locally_free_defect,
)
from .transforms import Twist, apply_kclass, apply_total, parse_transforms, wit_index


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage already; keep the message on stderr."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise MalformedInput(message)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(dumps(payload))
    else:
        print(text)


def _cycle(n: int, polarization: str | None) -> CycleCurve:
    return CycleCurve(n, parse_int_list(polarization) if polarization else ())


# -- subcommands -------------------------------------------------------------------


def cmd_reduce(args) -> int:
    res = reduce(HilbertClass(args.r, args.d), args.h, args.cap)
    term = res.terminal
    payload = {
        "source": [args.r, args.d],
        "h": args.h,
        "cap": res.cap,
        "terminal": [term.r, term.d],
        "visited": res.visited,
        "capped": res.capped,
    }
    lines = [f"terminal ({term.r}, {term.d})", f"visited {res.visited}, cap {res.cap}, capped {str(res.capped).lower()}"]
    if args.trace:
        payload["trace"] = [str(t) for t in res.trace]
        lines.append("trace " + (compress_trace(res.trace) or "(empty)"))
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_transform(args) -> int:
    seq = parse_transforms(args.seq)
    if args.multirank is not None:
        pol = parse_int_list(args.polarization) if args.polarization else (1,) * len(parse_int_list(args.multirank))
        kc = KClass(parse_int_list(args.multirank), args.chi)
        steps = [kc]
        for t in seq:
            kc = apply_kclass(t, kc, pol)
            steps.append(kc)
        payload = {"steps": [{"multirank": list(k.multirank), "chi": k.chi} for k in steps]}
        text = " -> ".join(f"({','.join(map(str, k.multirank))}; {k.chi})" for k in steps)
        _emit(args, payload, text)
        return 0
    if args.r is None or args.d is None or args.h is None:
        raise MalformedInput("transform needs --r, --d and --h, or --multirank and --chi")
    hc = HilbertClass(args.r, args.d)
    steps, wit = [hc], []
    for t in seq:
        if isinstance(t, Twist):
            raise DomainError("twists need a K-class; use --multirank and --chi")
        wit.append(wit_index(t, slope(hc), args.h) if hc.is_sheaf_class else None)
        hc = apply_total(t, hc, args.h)
        steps.append(hc)
    payload = {"steps": [[c.r, c.d] for c in steps], "wit": wit}
    text = " -> ".join(str(c) for c in steps)
    if any(w is not None for w in wit):
        text += "\nWIT indices " + ", ".join("-" if w is None else str(w) for w in wit)
    _emit(args, payload, text)
    return 0


def _describe(d) -> tuple[dict, list[str]]:
    kc, md = invariants_of(d)
    hc = hilbert_of_kclass(kc, d.host)
    payload = {
        "descriptor": descriptor_to_json(d),
        "multirank": list(kc.multirank),
        "chi": kc.chi,
        "multidegree": list(md),
        "hilbert": [hc.r, hc.d],
        "locally_free": is_locally_free(d),
        "defect": locally_free_defect(d),
    }
    lines = [
        f"multirank ({', '.join(map(str, kc.multirank))}), chi {kc.chi}, multidegree ({', '.join(map(str, md))})",
        f"Hilbert polynomial {hc.r}s + {hc.d}",
        f"locally free: {'yes' if payload['locally_free'] else 'no'} (defect {payload['defect']})",
    ]
    return payload, lines


def cmd_classify(args) -> int:
    d = descriptor_from_json(load_json(args.descriptor))
    payload, lines = _describe(d)
    try:
        verdict = descriptor_stability(d)
    except DomainError as exc:
        verdict = None
        lines.append(f"stability: not decided ({exc})")
    payload["verdict"] = None if verdict is None else verdict.value
    summary = [] if verdict is None else [str(verdict)]
    kc = invariants_of(d)[0]
    if kc.chi == 0:
        payload["component_dimension"] = component_dimension(kc.multirank, d.host)
        lines.append(f"component of M(multirank, 0) has dimension {payload['component_dimension']}")
    if verdict is not None and verdict.is_semistable and kc.chi == 0:
        factors = graded_degree0(d)
        payload["graded"] = [str(f) for f in factors]
        summary.append("graded = " + format_factors(factors))
        if kc.is_balanced and d.host.n_components >= 2:
            p = moduli_point(d)
            payload["moduli_point"] = moduli_point_to_json(p)
            summary.append("moduli point = " + ("node" if str(p) == "{node}" else str(p)))
    if summary:
        lines.append("; ".join(summary))
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_graded(args) -> int:
    d = descriptor_from_json(load_json(args.descriptor))
    factors = graded_degree0(d)
    payload = {
        "factors": [
            {"type": "line_bundle", "gluing": rational_to_json(f.gluing)}
            if isinstance(f, StableLineBundle)
            else {"type": "minus_one", "component": f.component}
            for f in factors
        ]
    }
    _emit(args, payload, format_factors(factors))
    return 0


def cmd_moduli_point(args) -> int:
    if args.inverse:
        p = moduli_point_from_json(load_json(args.file))
        curve = _cycle(args.n, args.polarization)
        d = phi_bar(p, curve)
        print(dumps(descriptor_to_json(d)))
        return 0
    d = descriptor_from_json(load_json(args.file))
    p = moduli_point(d)
    _emit(args, moduli_point_to_json(p), str(p))
    return 0


def cmd_cohomology(args) -> int:
    md = parse_int_list(args.multidegree)
    if args.chain:
        bundle = ChainLineBundle(md)
        curve = ChainCurve(len(md))
    else:
        n = args.n if args.n is not None else len(md)
        bundle = CycleLineBundle(md, parse_rational(args.lam))
        curve = CycleCurve(n)
    h0, h1 = line_bundle_cohomology(bundle, curve)
    _emit(args, {"h0": h0, "h1": h1, "chi": h0 - h1}, f"h0={h0} h1={h1}")
    return 0


def cmd_orbit(args) -> int:
    hc = HilbertClass(args.r, args.d)
    if args.dot:
        sys.stdout.write(orbit_dot(hc, args.h, args.cap))
        return 0
    states = orbit(hc, args.h, args.cap)
    _emit(
        args,
        {"states": [[s.r, s.d] for s in states]},
        f"{len(states)} states, minimum {states[0]}\n" + " ".join(str(s) for s in states),
    )
    return 0


def cmd_enumerate_stable(args) -> int:
    curve = _cycle(args.n, args.polarization)
    if curve.n_components < 2:
        raise DomainError("the stable classification needs N >= 2")
    stables = [
        x
        for x in enumerate_indecomposables(
            curve, args.max_cover, args.max_m, args.max_length, args.max_degree, chi=0
        )
        if degree0_stable(x)
    ]
    ranks = sorted({hilbert_of_kclass(invariants_of(x)[0], curve).r for x in stables} | {curve.total_degree})
    loci = {r: str(stable_locus(r, curve)) for r in ranks}
    payload = {
        "curve": curve_to_json(curve),
        "stable": [summand_to_json(x) for x in stables],
        "stable_locus": {str(r): v for r, v in loci.items()},
    }
    lines = [f"{len(stables)} stable indecomposables with chi = 0:"]
    lines += ["  " + json.dumps(summand_to_json(x), sort_keys=True) for x in stables]
    lines += [f"r = {r}: {v}" for r, v in loci.items()]
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_selftest(args) -> int:
    only = set(parse_int_list(args.only)) if args.only else None
    outcomes = acceptance.run_all(only=only)
    failed = [o for o in outcomes if not o.passed]
    print(f"{len(outcomes) - len(failed)}/{len(outcomes)} criteria passed")
    return 1 if failed else 0


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fmcycles", description="Invariants, transforms and stability on cycles of projective lines.")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("reduce", parents=[common], help="reduce (r, d) to its minimal form")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--h", type=int, required=True, help="total polarization degree")
    p.add_argument("--cap", type=int, default=None, help="bound on explored leading coefficients")
    p.add_argument("--trace", action="store_true", help="print the transform sequence")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("transform", parents=[common], help="apply a sequence such as phi,psi,phihat")
    p.add_argument("--seq", required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--h", type=int)
    p.add_argument("--multirank", help="comma-separated; switches to K-classes")
    p.add_argument("--chi", type=int, default=0)
    p.add_argument("--polarization", help="comma-separated h_i (K-classes only)")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("classify", parents=[common], help="invariants, stability, graded object and moduli point")
    p.add_argument("descriptor")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("graded", parents=[common], help="Jordan-Hölder factors of a degree-zero semistable sheaf")
    p.add_argument("descriptor")
    p.set_defaults(func=cmd_graded)

    p = sub.add_parser("moduli-point", parents=[common], help="point of Sym^r E_1 (or the inverse with --inverse)")
    p.add_argument("file", help="descriptor JSON, or moduli point JSON with --inverse")
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--n", type=int, default=2, help="components of the host (with --inverse)")
    p.add_argument("--polarization")
    p.set_defaults(func=cmd_moduli_point)

    p = sub.add_parser("cohomology", parents=[common], help="h0 and h1 of a line bundle")
    p.add_argument("--n", type=int)
    p.add_argument("--multidegree", required=True)
    p.add_argument("--lambda", dest="lam", default="1", help="gluing scalar p/q")
    p.add_argument("--chain", action="store_true", help="line bundle on a chain")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("orbit", parents=[common], help="all states reachable below the cap")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--cap", type=int, required=True)
    p.add_argument("--dot", action="store_true", help="emit the move graph in DOT format")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("enumerate-stable", parents=[common], help="stable degree-zero indecomposables and stable loci")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--polarization")
    p.add_argument("--max-cover", type=int, default=2)
    p.add_argument("--max-m", type=int, default=2)
    p.add_argument("--max-length", type=int, default=None)
    p.add_argument("--max-degree", type=int, default=2)
    p.set_defaults(func=cmd_enumerate_stable)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.set_defaults(func=cmd_selftest)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except MalformedInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FMCyclesError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
