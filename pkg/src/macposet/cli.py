"""Command-line surface.

Exit codes: 0 = ok / all agree, 1 = violation or disagreement found
(scientifically meaningful), 2 = usage or input error, 3 = node budget
exceeded (inconclusive).
"""

from __future__ import annotations

import argparse
import sys

from . import __version__, classify
from .construct import (adjoin_extreme, box, cartesian_product, diamond,
                        disjoint_union, path, spider, wedge)
from .core import LevelSubset, PosetError, lower_shadow, upper_shadow
from .expr import ParseError, evaluate, parse_expression, parse_order, print_expression, resolve_order
from .ideals import (ideal_from_generators, ideal_intersection, parse_monomial,
                     pure_power_ideal, standard_monomial_poset)
from .macaulay import (DEFAULT_BUDGET, DEFAULT_LEVEL_CAP, LevelCapExceeded,
                       check_macaulay, find_macaulay_order, is_additive)
from .orders import union_simplicial_order
from .serialize import (FormatError, build_report, fibermap_from_text,
                        order_lists_from_text, poset_from_text, poset_to_text,
                        write_report)


def _read_fibermap(path_):
    with open(path_) as fh:
        return fibermap_from_text(fh.read())


def _read_order_lists(path_):
    with open(path_) as fh:
        return order_lists_from_text(fh.read())


def _build(text):
    ast = parse_expression(text)
    return evaluate(ast, read_fibermap=_read_fibermap)


def _resolve_order(order_text, ev):
    return resolve_order(parse_order(order_text), ev,
                         read_order_lists=_read_order_lists)


def _parse_set(text, poset):
    ids = []
    for item in text.split(","):
        item = item.strip()
        if item.startswith("#"):
            ids.append(int(item[1:]))
            continue
        if poset.labels is None:
            raise PosetError(f"poset is unlabeled; name elements as #id, not {item!r}")
        exps, _ = parse_monomial(item, poset.var_names)
        vec = tuple(exps.get(v, 0) for v in poset.var_names)
        try:
            ids.append(poset.labels.index(vec))
        except ValueError:
            raise PosetError(f"monomial {item!r} is not an element of this poset")
    return ids


def _out(args, line):
    print(line, file=args.stdout if hasattr(args, "stdout") else sys.stdout)


# ------------------------------------------------------------------- commands

def cmd_build(args):
    ev = _build(args.expr)
    text = poset_to_text(ev.poset, ev.result)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        print(text, end="")
    report = build_report("build", args.expr,
                          verdict="ok",
                          timings={"search_nodes": 0, "subsets_enumerated": 0})
    return 0, report


def cmd_show(args):
    ev = _build(args.expr)
    p = ev.poset
    print(f"{p.name or 'poset'}: {p.n} elements, ranks 0..{p.max_rank}")
    print("level sizes: " + " ".join(str(s) for s in p.level_sizes()))
    for d in range(p.max_rank + 1):
        names = ", ".join(p.element_name(i) for i in p.level(d))
        print(f"  level {d}: {names}")
    print("covers:")
    for a in range(p.n):
        for b in p.up[a]:
            print(f"  {p.element_name(a)} < {p.element_name(b)}")
    report = build_report("show", args.expr, verdict="ok",
                          grid={"level_sizes": list(p.level_sizes())},
                          timings={"search_nodes": 0, "subsets_enumerated": 0})
    return 0, report


def cmd_shadow(args):
    ev = _build(args.expr)
    p = ev.poset
    ids = _parse_set(args.set, p)
    sub = LevelSubset.of(p, ids) if ids else None
    if sub is None:
        raise PosetError("--set must name at least one element")
    shade = lower_shadow(p, sub) if args.lower else upper_shadow(p, sub)
    names = [p.element_name(i) for i in shade.ids()]
    print(("lower" if args.lower else "upper") + " shadow: "
          + (", ".join(names) if names else "(empty)"))
    report = build_report("shadow", f"{args.expr} --set {args.set}",
                          verdict="ok",
                          grid={"shadow": names, "size": len(names)},
                          timings={"search_nodes": 0, "subsets_enumerated": 0})
    return 0, report


def cmd_check(args):
    from .macaulay import min_shadow_table
    ev = _build(args.expr)
    fam = _resolve_order(args.order, ev)
    table = min_shadow_table(ev.poset, level_cap=args.level_cap,
                             threads=args.threads)
    verdict = check_macaulay(ev.poset, fam, table=table)
    if verdict.ok:
        print("ok: the order certifies the poset Macaulay")
    else:
        print(f"violation: {verdict.witness.detail}")
    report = build_report("check", f"{args.expr} --order {args.order}",
                          verdict=verdict.status,
                          witness=verdict.witness.to_json() if verdict.witness else None,
                          timings={"search_nodes": 0,
                                   "subsets_enumerated": table.subsets_enumerated})
    return (0 if verdict.ok else 1), report


def cmd_search_order(args):
    ev = _build(args.expr)
    sr = find_macaulay_order(ev.poset, budget=args.budget,
                             level_cap=args.level_cap, threads=args.threads)
    timings = sr.stats.to_json()
    if sr.status == "found":
        print("found a Macaulay order:")
        for d, lst in enumerate(sr.order.per_level):
            names = " > ".join(ev.poset.element_name(i) for i in lst)
            print(f"  level {d}: {names}")
        return 0, build_report("search-order", args.expr, verdict="found",
                               grid={"order": sr.order.to_lists()}, timings=timings)
    if sr.status == "none":
        print("no Macaulay order exists (search space exhausted)")
        return 1, build_report("search-order", args.expr, verdict="none",
                               timings=timings)
    print("inconclusive: node budget exceeded")
    return 3, build_report("search-order", args.expr, verdict="budget-exceeded",
                           timings=timings)


def cmd_additive(args):
    from .macaulay import min_shadow_table
    ev = _build(args.expr)
    fam = _resolve_order(args.order, ev)
    table = min_shadow_table(ev.poset, level_cap=args.level_cap,
                             threads=args.threads)
    verdict = is_additive(ev.poset, fam, table=table)
    if verdict.ok:
        print("ok: the poset is additive for this order")
    else:
        print(f"violation: {verdict.witness.detail}")
    report = build_report("additive", f"{args.expr} --order {args.order}",
                          verdict=verdict.status,
                          witness=verdict.witness.to_json() if verdict.witness else None,
                          timings={"search_nodes": 0,
                                   "subsets_enumerated": table.subsets_enumerated})
    return (0 if verdict.ok else 1), report


def _parse_bounds(pairs):
    bounds = {}
    for item in pairs or []:
        key, _, rng = item.partition("=")
        lo, _, hi = rng.partition(":")
        bounds[key] = (int(lo), int(hi))
    return bounds


def _grid_exit(rep):
    if rep.disagreements:
        return 1
    if rep.inconclusive:
        return 3
    return 0


def cmd_verify_family(args):
    spec = classify.FamilySpec(args.family, _parse_bounds(args.bound),
                               budget=args.budget, level_cap=args.level_cap)
    rep = classify.verify_family(spec, threads=args.threads)
    print(f"{rep.family}: {len(rep.rows)} rows, "
          f"{len(rep.disagreements)} disagreements, "
          f"{len(rep.inconclusive)} inconclusive")
    for d in rep.disagreements:
        print(f"  DISAGREEMENT: {d}")
    report = build_report("verify-family", args.family,
                          verdict="agree" if rep.all_agree else "disagree",
                          grid=rep.to_json(), timings=rep.counters)
    return _grid_exit(rep), report


def cmd_conjecture67(args):
    rep = classify.conjecture_6_7_search(
        max_exp=args.max_exp, extra_steps=args.steps,
        include_special=not args.skip_special,
        budget=args.budget, level_cap=args.level_cap, threads=args.threads)
    hits = [r for r in rep.rows if r.get("counterexample")]
    print(f"conjecture 6.7 scan: {len(rep.rows)} rows, "
          f"{len(hits)} counterexamples, {len(rep.inconclusive)} inconclusive")
    for h in hits:
        print(f"  COUNTEREXAMPLE: {h}")
    report = build_report("conjecture67",
                          f"max_exp={args.max_exp} steps={args.steps}",
                          verdict="counterexample" if hits else "no-counterexample",
                          grid=rep.to_json(), timings=rep.counters)
    if hits:
        return 1, report
    return (3 if rep.inconclusive else 0), report


# ------------------------------------------------------------------ reproduce

def _reproduce_heart_example(args):
    i1 = pure_power_ideal((4, 1), ("x", "y"))
    i2 = pure_power_ideal((3, 3), ("x", "y"))
    inter = ideal_intersection(i1, i2)
    p = standard_monomial_poset(inter)
    sr = find_macaulay_order(p, budget=args.budget)
    gens = [str(inter)[1:-1]]
    print(f"(x^4, y) n (x^3, y^3) = {inter}")
    print(f"quotient poset: {p.n} elements, level sizes "
          + " ".join(str(s) for s in p.level_sizes()))
    print(f"search verdict: {sr.status}")
    grid = {"intersection_generators": gens, "elements": p.n,
            "level_sizes": list(p.level_sizes()), "search": sr.status}
    code = 1 if sr.status == "none" else (3 if sr.status == "budget-exceeded" else 0)
    return code, grid, sr.stats.to_json()


def _reproduce_twist_figure(args):
    ev = _build("heart(5, 2, 2, 5)")
    twist = _resolve_order("twist", ev)
    lex = _resolve_order("lex(y,x)", ev)
    v_twist = check_macaulay(ev.poset, twist)
    v_lex = check_macaulay(ev.poset, lex)
    print(f"heart(5,2,2,5) with twist order: {v_twist.status}")
    print(f"heart(5,2,2,5) with lex order (recorded, not asserted): {v_lex.status}")
    grid = {"twist": v_twist.status, "lex": v_lex.status,
            "lex_witness": v_lex.witness.to_json() if v_lex.witness else None}
    return (0 if v_twist.ok else 1), grid, {"search_nodes": 0, "subsets_enumerated": 0}


def _search_target(poset, args, label):
    sr = find_macaulay_order(poset, budget=args.budget)
    print(f"{label}: {poset.n} elements, search verdict: {sr.status}")
    grid = {"elements": poset.n, "search": sr.status}
    code = 1 if sr.status == "none" else (3 if sr.status == "budget-exceeded" else 0)
    return code, grid, sr.stats.to_json()


def _reproduce_prop61_product(args):
    prod = cartesian_product(path(1), classify.y_poset()).poset
    return _search_target(prod, args, "path(1) x Y")


def _reproduce_prop61_ring_product(args):
    prod = cartesian_product(classify.ring_product_factor(), path(1)).poset
    return _search_target(prod, args, "ring-factor x path(1)")


def _reproduce_conj66(args):
    p = standard_monomial_poset(classify.conj66_quotient_ideal())
    prod = cartesian_product(p, path(1)).poset
    return _search_target(prod, args, "poset(y^3,y^2z,yz^2,z^3) x path(1)")


def _reproduce_diamond_not_wedge(args):
    b = box(2, 2)
    hat = adjoin_extreme(b, "top")
    uhat = adjoin_extreme(b, "bottom")
    rows = {}
    # the union simplicial order depends on the factor listing; the
    # example's claim is that one listing certifies the diamond
    ok_any = False
    for tag, factors in (("hat,uhat", [hat, uhat]), ("uhat,hat", [uhat, hat])):
        res = diamond(factors)
        fams = [_trivial_factor_order(f) for f in factors]
        us = union_simplicial_order(res, fams)
        v = check_macaulay(res.poset, us)
        rows[f"diamond[{tag}]"] = v.status
        ok_any = ok_any or v.ok
    wr = find_macaulay_order(wedge([hat, uhat]).poset, budget=args.budget)
    rows["wedge-search"] = wr.status
    rows["expected_pattern"] = ok_any and wr.status == "none"
    for k, v in rows.items():
        print(f"{k}: {v}")
    code = 3 if wr.status == "budget-exceeded" else (1 if wr.status == "none" else 0)
    return code, rows, wr.stats.to_json()


def _trivial_factor_order(p):
    from .orders import order_from_lists
    return order_from_lists(p, [list(p.level(d)) for d in range(p.max_rank + 1)])


def _reproduce_spider_union_fails(args):
    sp = spider(1, 2).poset
    wr = find_macaulay_order(wedge([sp, sp]).poset, budget=args.budget)
    ur = find_macaulay_order(disjoint_union([sp, sp]).poset, budget=args.budget)
    print(f"spider(1,2) wedge spider(1,2): {wr.status}")
    print(f"spider(1,2) disjoint-union spider(1,2): {ur.status}")
    grid = {"wedge": wr.status, "union": ur.status,
            "expected_pattern": wr.status == "found" and ur.status == "none"}
    nodes = wr.stats.nodes + ur.stats.nodes
    code = 3 if "budget-exceeded" in (wr.status, ur.status) else (
        1 if ur.status == "none" else 0)
    return code, grid, {"search_nodes": nodes,
                        "subsets_enumerated": wr.stats.subsets_enumerated
                        + ur.stats.subsets_enumerated}


def _grid_target(rep):
    print(f"{rep.family}: {len(rep.rows)} rows, {len(rep.disagreements)} disagreements, "
          f"{len(rep.inconclusive)} inconclusive")
    return _grid_exit(rep), rep.to_json(), rep.counters


def _reproduce_thmA(args):
    return _grid_target(classify.equivalence_suite(budget=args.budget))


def _reproduce_thmB_wedge(args):
    return _grid_target(classify.verify_wedge_grid(
        classify.FamilySpec("wedge-box", budget=args.budget,
                            level_cap=args.level_cap), threads=args.threads))


def _reproduce_thmB_diamond(args):
    return _grid_target(classify.verify_diamond_grid(
        classify.FamilySpec("diamond-box", budget=args.budget,
                            level_cap=args.level_cap), threads=args.threads))


def _reproduce_thmC(args):
    return _grid_target(classify.verify_heart_grid(
        classify.FamilySpec("heart", budget=args.budget,
                            level_cap=args.level_cap), threads=args.threads))


def _reproduce_conj67(args):
    rep = classify.conjecture_6_7_search(budget=args.budget,
                                         level_cap=args.level_cap,
                                         threads=args.threads)
    hits = [r for r in rep.rows if r.get("counterexample")]
    print(f"conjecture 6.7 scan: {len(rep.rows)} rows, {len(hits)} counterexamples")
    for h in hits:
        print(f"  COUNTEREXAMPLE: {h}")
    code = 1 if hits else (3 if rep.inconclusive else 0)
    return code, rep.to_json(), rep.counters


REPRODUCE = {
    "heart-example": _reproduce_heart_example,
    "twist-figure": _reproduce_twist_figure,
    "prop61-product": _reproduce_prop61_product,
    "prop61-ring-product": _reproduce_prop61_ring_product,
    "conj66-counterexample": _reproduce_conj66,
    "diamond-not-wedge": _reproduce_diamond_not_wedge,
    "spider-union-fails": _reproduce_spider_union_fails,
    "thmA-grid": _reproduce_thmA,
    "thmB-wedge-grid": _reproduce_thmB_wedge,
    "thmB-diamond-grid": _reproduce_thmB_diamond,
    "thmC-grid": _reproduce_thmC,
    "conj67-scan": _reproduce_conj67,
}


def cmd_reproduce(args):
    if args.name not in REPRODUCE:
        raise PosetError(f"unknown reproduce target {args.name!r}; known: "
                         + ", ".join(sorted(REPRODUCE)))
    code, grid, timings = REPRODUCE[args.name](args)
    verdict = {0: "ok", 1: "violation", 2: "error", 3: "budget-exceeded"}[code]
    report = build_report("reproduce", args.name, verdict=verdict,
                          grid=grid, timings=timings)
    return code, report


# ----------------------------------------------------------------- entrypoint

def _add_common(sp):
    sp.add_argument("--report", help="write a JSON report to this file")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                    help="search node budget")
    sp.add_argument("--level-cap", type=int, default=DEFAULT_LEVEL_CAP,
                    help="largest level size enumerable")
    sp.add_argument("--threads", type=int, default=1)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="macposet",
        description="Ranked-poset algebra with Macaulay decision procedures")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("build", help="build a poset and write its file form")
    sp.add_argument("expr")
    sp.add_argument("--out")
    _add_common(sp)
    sp.set_defaults(fn=cmd_build)

    sp = sub.add_parser("show", help="print levels, covers, level sizes")
    sp.add_argument("expr")
    _add_common(sp)
    sp.set_defaults(fn=cmd_show)

    sp = sub.add_parser("shadow", help="upper or lower shadow of a set")
    sp.add_argument("expr")
    sp.add_argument("--set", required=True,
                    help="comma-separated monomials or #ids, one level")
    sp.add_argument("--lower", action="store_true")
    _add_common(sp)
    sp.set_defaults(fn=cmd_shadow)

    sp = sub.add_parser("check", help="check Macaulayness for a given order")
    sp.add_argument("expr")
    sp.add_argument("--order", required=True)
    _add_common(sp)
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("search-order", help="search for a certifying order")
    sp.add_argument("expr")
    _add_common(sp)
    sp.set_defaults(fn=cmd_search_order)

    sp = sub.add_parser("additive", help="check additivity for a given order")
    sp.add_argument("expr")
    sp.add_argument("--order", required=True)
    _add_common(sp)
    sp.set_defaults(fn=cmd_additive)

    sp = sub.add_parser("verify-family", help="predicate vs search over a grid")
    sp.add_argument("family", choices=["heart", "diamond-box", "wedge-box",
                                       "wedge-2d-box", "wedge-path-box",
                                       "union-wedge-diamond-equiv",
                                       "cartesian-counterexamples"])
    sp.add_argument("--bound", action="append", metavar="key=lo:hi")
    _add_common(sp)
    sp.set_defaults(fn=cmd_verify_family)

    sp = sub.add_parser("conjecture67", help="scan quotient x path products")
    sp.add_argument("--max-exp", type=int, default=4)
    sp.add_argument("--steps", type=int, default=3)
    sp.add_argument("--skip-special", action="store_true")
    _add_common(sp)
    sp.set_defaults(fn=cmd_conjecture67)

    sp = sub.add_parser("reproduce", help="run a named paper artifact")
    sp.add_argument("name")
    _add_common(sp)
    sp.set_defaults(fn=cmd_reproduce)
    return ap


def run_command(argv) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        code, report = args.fn(args)
    except (ParseError, PosetError, FormatError, LevelCapExceeded,
            FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if args.report:
        write_report(report, args.report)
    return code


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
