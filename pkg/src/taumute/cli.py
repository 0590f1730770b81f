"""Command-line interface: ``taumute alg|enumerate|mutate|check|cluster``.

Exit codes: 0 all checks pass, 1 a violation was found, 2 input error, 3 node budget exhausted.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
from pathlib import Path

from . import cluster as cl
from . import models, silt2, taut
from .bqa import AlgebraError, BoundQuiverAlgebra
from .formats import FormatError, parse_algebra, poset_to_dot, poset_to_json
from .repcat import injective, projective

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_TRUNCATED = 0, 1, 2, 3

SUITES = ("all", "order", "gvec", "silt", "torsion", "mizuno", "adachi", "tilting", "exchange")

class InputError(Exception):
    pass


def load_algebra(source: str) -> BoundQuiverAlgebra:
    path = Path(source)
    if path.suffix == ".json" or path.is_file():
        try:
            text = path.read_text()
        except OSError as e:
            raise InputError(f"cannot read {source}: {e.strerror}") from None
        try:
            return parse_algebra(text, name=path.stem)
        except FormatError as e:
            raise InputError(f"{source}: {e}") from None
    try:
        return models.preset(source)
    except AlgebraError as e:
        raise InputError(str(e)) from None


def _vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def cmd_alg_info(args) -> int:
    a = load_algebra(args.algebra)
    print(f"algebra {a.name}")
    print(f"vertices {a.n}, arrows {len(a.quiver.arrows)}, relations {len(a.relations)}")
    print(f"dim {a.dim}")
    print("basis per degree " + " ".join(str(d) for d in a.dims_by_degree()))
    for v in a.quiver.vertices:
        print(f"P{v} {_vec(projective(a, v).dims)}  I{v} {_vec(injective(a, v).dims)}")
    return EXIT_OK


def _cap(args) -> int:
    if args.cap is not None:
        if args.cap < 1:
            raise InputError("--cap must be positive")
        return args.cap
    try:
        return taut.default_cap()
    except ValueError as e:
        raise InputError(str(e)) from None


def cmd_enumerate(args) -> int:
    a = load_algebra(args.algebra)
    poset = taut.enumerate_poset(a, _cap(args))
    if args.format == "json":
        sys.stdout.write(poset_to_json(poset) + "\n")
    elif args.format == "dot":
        sys.stdout.write(poset_to_dot(poset))
    else:
        print(f"{len(poset.nodes)} nodes, {len(poset.edges)} edges" + ("" if poset.complete else f", truncated at cap {poset.cap}"))
        for i, p in enumerate(poset.nodes):
            print(f"{i:4d} {p.label()}")
    if not poset.complete:
        print(f"truncated at cap {poset.cap}", file=sys.stderr)
        return EXIT_TRUNCATED
    return EXIT_OK


def cmd_mutate(args) -> int:
    a = load_algebra(args.algebra)
    try:
        pair = taut.parse_pair(a, args.pair)
        slot = taut.parse_slot(a, args.slot)
    except ValueError as e:
        raise InputError(str(e)) from None
    kind = taut.classify(pair)
    if kind != "support-tau-tilting":
        raise InputError(f"{pair.label()} is {kind}, not support tau-tilting")
    try:
        res = taut.mutate(pair, slot)
    except taut.MutationError as e:
        raise InputError(str(e)) from None
    print(f"{pair.label()} -> {res.pair.label()}  case {res.case}")
    if res.via:
        print(f"via dagger: {res.via[0].label()} -> {res.via[1].label()} over the opposite algebra")
    r = res.report
    if r is not None:
        side = a.opposite() if res.via else a
        where = " over the opposite algebra" if res.via else ""
        x = taut.summand_name(side, r.x)
        u = " + ".join(taut.summand_name(side, i) for i in r.u_prime) or "0"
        if r.surjective:
            print(f"exchange sequence{where} {x} -> {u} -> 0 (surjective)")
        else:
            print(f"exchange sequence{where} {x} -> {u} -> {taut.summand_name(side, r.y)}^{r.r} -> 0, r = {r.r}")
        print(f"verified exact={r.exact} left-approximation={r.left_approximation} "
              f"minimal={r.left_minimal} right-approximation={r.right_approximation}")
        if not r.verified:
            return EXIT_VIOLATION
    return EXIT_OK


def _family(a: BoundQuiverAlgebra):
    m = re.fullmatch(r"Pi\(([A-Z])(\d+)\)", a.name)
    if m:
        return "preproj", f"{m.group(1)}{m.group(2)}"
    m = re.fullmatch(r"cyclic\((\d+),(\d+)\)", a.name)
    if m:
        return "cyclic", (int(m.group(1)), int(m.group(2)))
    return None, None


def run_suites(a: BoundQuiverAlgebra, suite: str, cap: int) -> list[taut.CheckReport]:
    poset = taut.enumerate_poset(a, cap)
    poset.require_complete()
    want = set(SUITES[1:]) if suite == "all" else {suite}
    family, param = _family(a)
    reports: list[taut.CheckReport] = []
    probes = taut.probe_ids(poset)
    if "order" in want:
        reports += [taut.check_two_complements(poset), taut.check_regular_and_involutive(poset),
                    taut.check_partial_order(poset), taut.check_hasse_equals_exchange(poset),
                    taut.check_edge_comparability(poset), taut.check_dagger(poset),
                    taut.check_three_conditions(poset, probes), taut.check_idempotent_quotient(poset, probes),
                    taut.check_bongartz(poset)]
    if "tilting" in want:
        reports += [taut.check_sincere_and_faithful(poset), taut.check_tilting_complements(poset),
                    taut.check_support_tilting_complements(poset)]
    if "gvec" in want:
        reports += [taut.check_g_determinants(poset), taut.check_g_injectivity(poset),
                    taut.check_summand_disjoint(poset)]
    if "silt" in want:
        reports += [silt2.check_silting_bijection(poset), silt2.check_dual_matches_dagger(poset)]
    if "torsion" in want:
        torsion = taut.CheckReport("torsion pairs", details={"nodes": len(poset.nodes), "probes": len(probes)})
        for p in poset.nodes:
            torsion.violations += taut.check_torsion_pair(p, probes).violations
        reports += [torsion, taut.check_ar_duality(a, probes), taut.check_tau_bijection(a, probes)]
    if "exchange" in want:
        reports.append(taut.exchange_sequence_log(poset))
    if "mizuno" in want:
        if family == "preproj" and param.startswith("A"):
            reports.append(models.check_mizuno(param, poset))
        elif suite == "mizuno":
            raise InputError("the mizuno suite needs a preset preproj:A<n>")
    if "adachi" in want:
        if family == "cyclic" and param[1] >= param[0]:
            reports.append(models.check_adachi(*param, poset))
        elif suite == "adachi":
            raise InputError("the adachi suite needs a preset cyclic:n,m with m >= n")
    return reports


def cmd_check(args) -> int:
    a = load_algebra(args.algebra)
    try:
        reports = run_suites(a, args.suite, _cap(args))
    except taut.TruncatedPoset as e:
        print(str(e), file=sys.stderr)
        return EXIT_TRUNCATED
    failed = False
    for r in reports:
        print(r.line())
        for v in r.violations[:20]:
            print(f"  - {v}")
        failed |= not r.passed
    return EXIT_VIOLATION if failed else EXIT_OK


def load_quiver(source: str) -> cl.ExchangeQuiverFZ:
    key = source.strip().lower()
    if key in cl.QUIVER_PRESETS:
        return cl.QUIVER_PRESETS[key]()
    try:
        return cl.ExchangeQuiverFZ.from_algebra(load_algebra(source))
    except AlgebraError as e:
        raise InputError(str(e)) from None


def cmd_cluster(args) -> int:
    q = load_quiver(args.quiver)
    cap = _cap(args)
    graph = cl.enumerate_seeds(q, cap)
    if not graph.complete:
        print(f"truncated at cap {cap} ({len(graph.seeds)} seeds, {len(graph.cluster_variables)} variables so far)")
        return EXIT_TRUNCATED
    print(f"{len(graph.seeds)} clusters, {len(graph.cluster_variables)} variables")
    rep = cl.check_laurent(graph)
    print(rep.line())
    if args.variables:
        for v in sorted(graph.cluster_variables, key=lambda f: (len(str(f)), str(f))):
            print(f"  {v}")
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="taumute", description="Support tau-tilting workbench over exact rationals.")
    p.add_argument("--log-level", default="WARNING", help="logging level (default WARNING)")
    sub = p.add_subparsers(dest="command", required=True)

    alg = sub.add_parser("alg", help="algebra utilities")
    alg_sub = alg.add_subparsers(dest="alg_command", required=True)
    info = alg_sub.add_parser("info", help="dimension, graded basis and projective/injective dimension vectors")
    info.add_argument("algebra", help="JSON file or preset (a3, a3-mod-ba, cyclic:n,m, preproj:A2, ...)")
    info.set_defaults(func=cmd_alg_info)

    en = sub.add_parser("enumerate", help="enumerate all support tau-tilting pairs")
    en.add_argument("algebra")
    en.add_argument("--cap", type=int, default=None, help="node budget (default $TAUMUTE_CAP or 10000)")
    en.add_argument("--format", choices=("text", "json", "dot"), default="text")
    en.set_defaults(func=cmd_enumerate)

    mu = sub.add_parser("mutate", help="mutate one pair at one slot and print the exchange sequence")
    mu.add_argument("algebra")
    mu.add_argument("--pair", required=True, help="Lambda, 0, or e.g. 'P1+S1;3'")
    mu.add_argument("--slot", required=True, help="a summand such as P2 or S1, or a support vertex number")
    mu.set_defaults(func=cmd_mutate)

    ch = sub.add_parser("check", help="run theorem suites on the full poset")
    ch.add_argument("algebra")
    ch.add_argument("--suite", choices=SUITES, default="all",
                    help="mizuno: Weyl group ideals of preproj:A<n>; adachi: pair counts of cyclic:n,m")
    ch.add_argument("--cap", type=int, default=None)
    ch.set_defaults(func=cmd_check)

    cu = sub.add_parser("cluster", help="enumerate seeds and check the Laurent property")
    cu.add_argument("quiver", help="a1..a4, d4, kronecker, or an algebra preset/file")
    cu.add_argument("--cap", type=int, default=None)
    cu.add_argument("--variables", action="store_true", help="print every cluster variable")
    cu.set_defaults(func=cmd_cluster)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
