"""Command-line entry point: evaluate programs, apply substitutions, run suites.

Commands: ``run`` (parse, typecheck, and print a program's denotation table),
``subst`` (apply a substitution file and verify the substitution lemma when a
model is supplied), ``check`` (the law suites, with machine-readable reports),
and ``fragments`` (the 128-row customisation menu).  Reports are deterministic
given the seed; ``SUBSTKIT_REPORT_DIR`` sets the default report directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .cbv.ops import CbvOperatorTable, DisabledConstruct
from .cbv.surface import SurfaceSyntaxError, parse, parse_value, pretty
from .cbv.typecheck import (ArityMismatch, SortMismatch, UnknownVariable,
                            synthesize, typecheck)
from .cbv.types import (EXTENSIONS, DepthExceeded, FragmentConfig, Fulfillment,
                        NeedUnfulfilled, all_fragment_configs, config,
                        config_from_dict, parse_type, type_to_str)
from .report import Report
from .semantics.checks import (check_compatibility, check_elgot_against_unrolling,
                               check_kleene_properties, check_letrec_references,
                               check_sem_action_axioms,
                               check_substitution_lemma_exhaustive,
                               check_substitution_lemma_random)
from .semantics.denote import denote
from .semantics.model import model, subst_denotation
from .semantics.monads import (BUNDLED, UnsupportedCapability, check_monad_laws,
                               monad_by_name)
from .sorts import Context, first, second
from .suites import (check_meta_laws, check_term_laws,
                     run_meta_laws_all_fragments, run_term_laws_all_fragments)
from .terms import SubstEnv, substitute

MODEL_NEEDS = {
    "base": "strong monad over a Cartesian category",
    "sequential": "",
    "functions": "Kleisli exponentials",
    "records": "",
    "variants": "distributive category",
    "naturals": "distributed binary coproducts and a natural numbers object",
    "while": "complete Elgot structure for the monad",
    "recursion": "uniform parameterised monadic fixed-points, Kleisli exponentials",
}


def parse_fragment(text: str, nat_bound: int, base_types=("b",),
                   type_depth: int = 3) -> FragmentConfig:
    text = text.strip()
    if text in ("base", ""):
        exts = ()
    elif text == "full":
        exts = EXTENSIONS
    else:
        exts = tuple(p.strip() for p in text.replace("+", ",").split(",") if p.strip())
    return config(exts, base_types, nat_bound, type_depth)


def parse_context(text: str):
    names, types = [], []
    text = text.strip()
    if text:
        for part in _split_commas_top(text):
            name, _, ty = part.partition(":")
            names.append(name.strip())
            types.append(parse_type(ty.strip()))
    return names, Context(tuple(types))


def _split_commas_top(text: str):
    parts, depth, cur = [], 0, []
    i = 0
    while i < len(text):
        ch = text[i]
        if text.startswith("->", i):
            cur.append("->")
            i += 2
            continue
        if ch in "({<":
            depth += 1
        elif ch in ")}>":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
        i += 1
    parts.append("".join(cur))
    return [p for p in parts if p.strip()]


def build_model(args):
    monad_name = args.monad
    sizes = {}
    params = {}
    if getattr(args, "model", None):
        spec = json.load(open(args.model))
        monad_name = spec.get("monad", monad_name)
        sizes.update(spec.get("base_sizes", {}))
        params.update(spec.get("monad_params", {}))
    for item in (args.base_size or []):
        name, _, n = item.partition("=")
        sizes[name.strip()] = int(n)
    sizes = sizes or {"b": 2}
    kwargs = {}
    if monad_name == "exception":
        kwargs["exceptions"] = tuple(
            f"e{i}" for i in range(params.get("exceptions", args.exceptions)))
    if monad_name == "state":
        kwargs["states"] = tuple(
            f"s{i}" for i in range(params.get("states", args.states)))
    return model(monad_by_name(monad_name, **kwargs), sizes)


def _elaborate(args, text):
    if getattr(args, "fragment_config", None):
        cfg = config_from_dict(json.load(open(args.fragment_config)))
    else:
        cfg = parse_fragment(args.fragment, args.nat_bound,
                             tuple((args.base_types or "b").split(",")),
                             args.type_depth)
    table = CbvOperatorTable(cfg)
    names, ctx = parse_context(args.context or "")
    if args.expect:
        is_comp = args.expect.startswith("C ")
        expected = parse_type(args.expect[2:] if is_comp else args.expect)
        sort = second(expected) if is_comp else first(expected)
        surface = parse(text) if is_comp else parse_value(text)
        term = typecheck(surface, ctx, sort, cfg, table, names or None)
    else:
        try:
            surface = parse(text)
            term, sort = synthesize(surface, ctx, cfg, table, names or None)
        except SurfaceSyntaxError:
            surface = parse_value(text)
            term, sort = synthesize(surface, ctx, cfg, table, names or None,
                                    value=True)
    return cfg, table, ctx, term, sort


def _print_table(d, args):
    if args.at is not None:
        point = tuple(_parse_value(v) for v in _split_commas_top(args.at))
        print(f"{point!r} -> {d.at(point)!r}")
        return
    for p in d.space:
        print(f"{p!r} -> {d.at(p)!r}")


def _parse_value(text: str):
    text = text.strip()
    return int(text) if text.lstrip("-").isdigit() else text


def cmd_run(args) -> int:
    try:
        text = open(args.program).read() if args.program != "-" else sys.stdin.read()
        cfg, table, ctx, term, sort = _elaborate(args, text)
    except (SurfaceSyntaxError, UnknownVariable, SortMismatch, ArityMismatch,
            NeedUnfulfilled, DisabledConstruct, DepthExceeded, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(f"sort: {'C ' if not sort.is_first else ''}{type_to_str(sort.ident)}")
    try:
        d = denote(term, build_model(args), cfg, table)
        _print_table(d, args)
    except UnsupportedCapability as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


def cmd_subst(args) -> int:
    try:
        cfg, table, ctx, term, sort = _elaborate(args, open(args.term).read())
        lines = [l for l in open(args.subst).read().splitlines()
                 if l.strip() and not l.strip().startswith("--")]
        if not lines or not lines[0].startswith("target"):
            print("error: substitution file must start with a 'target' line",
                  file=sys.stderr)
            return 1
        tnames, tctx = parse_context(lines[0][len("target"):])
        names, _ = parse_context(args.context or "")
        assignment = {}
        for line in lines[1:]:
            name, _, body = line.partition("=")
            value = parse(f"val ({body.strip()})").value
            assignment[name.strip()] = value
        entries = []
        for name, ty in zip(names, ctx.entries):
            if name not in assignment:
                print(f"error: no entry for variable {name!r}", file=sys.stderr)
                return 1
            entries.append(typecheck(assignment[name], tctx, first(ty), cfg,
                                     table, tnames or None))
        env = SubstEnv(ctx, tctx, entries)
    except (SurfaceSyntaxError, UnknownVariable, SortMismatch, ArityMismatch,
            NeedUnfulfilled, DisabledConstruct, DepthExceeded, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    out = substitute(term, env)
    print(pretty(out, table))
    if args.monad:
        try:
            m = build_model(args)
            lhs = denote(out, m, cfg, table)
            sem = [denote(e, m, cfg, table) for e in env.entries]
            rhs = subst_denotation(denote(term, m, cfg, table), sem, m,
                                   cfg.nat_bound, target=env.target)
            diff = lhs.difference_witness(rhs)
        except UnsupportedCapability as e:
            print(f"error: {e}", file=sys.stderr)
            return 2
        print("substitution lemma: " + ("PASS" if diff is None else f"FAIL {diff!r}"))
        if diff is not None:
            return 3
    return 0


def cmd_fragments(args) -> int:
    if args.ops:
        cfg = parse_fragment(args.ops, 4)
        table = CbvOperatorTable(cfg)
        for op in table.operators():
            args_s = ", ".join(
                f"[{';'.join(type_to_str(e) for e in a.binder.entries)}]"
                f"{'C ' if not a.sort.is_first else ''}{type_to_str(a.sort.ident)}"
                for a in op.args)
            result = (f"{'C ' if not op.result_sort.is_first else ''}"
                      f"{type_to_str(op.result_sort.ident)}")
            print(f"{op.label}: ({args_s}) -> {result}")
        return 0
    rows = all_fragment_configs()
    print(f"{len(rows)} fragment configurations")
    for cfg in rows:
        f = Fulfillment(cfg)
        needs = f.describe() or ["none"]
        models = [MODEL_NEEDS[e] for e in ("base",) + tuple(
            x for x in EXTENSIONS if cfg.has(x)) if MODEL_NEEDS[e]]
        print(f"- {cfg.name()}")
        print(f"    typing needs/fulfillments: {'; '.join(needs)}")
        print(f"    model needs: {'; '.join(models)}")
    return 0


SUITES = ("term-laws", "meta-laws", "presheaf-laws", "skew", "pointed",
          "monad-laws", "compatibility", "subst-lemma", "all")


def _suite_presheaf(args, rep: Report):
    import random
    from .finpresheaf import (check_action_axioms, free_structure, tensor)
    from .finpresheaf.laws import check_shift_strength, pointed_free
    from .finpresheaf.structures import enumerate_renamings, enumerate_envs, reindex_env
    from .termstruct import cbv_term_structure, motivating_identifications
    for i in range(args.structures):
        rng = random.Random(args.seed + i)
        p = free_structure(rng, (second("k"),), ("a",), 2,
                           ensure=[(second("k"), Context(()))])
        q = free_structure(rng, (first("a"),), ("a",), 2,
                           ensure=[(first("a"), Context(("a",)))])
        l = free_structure(rng, (first("a"),), ("a",), 2,
                           ensure=[(first("a"), Context(("a",)))])
        check_action_axioms(p, q, l, report=rep, suite=f"presheaf[{i}]")
        check_shift_strength(p, Context(("a",)), pointed_free(rng, ("a",), 2),
                             pointed_free(rng, ("a",), 2), report=rep,
                             suite=f"strength[{i}]")
    # the coend quotient on the term structure
    P, Q, table = cbv_term_structure()
    t = tensor(P, Q)
    ok = all(t.class_of(s, amb, left) == t.class_of(s, amb, right)
             for s, amb, left, right in motivating_identifications(table))
    rep.record("coend", "the three motivating identifications merge", ok, None)
    rng = random.Random(args.seed)
    ctxs = P.contexts()
    confirmed = 0
    while confirmed < 100:
        g1, g2, amb = (rng.choice(ctxs) for _ in range(3))
        rhos = enumerate_renamings(g1, g2)
        s = rng.choice(P.sorts)
        if not rhos or not P.cell(s, g2):
            continue
        envs = list(enumerate_envs(Q, g1, amb))
        if not envs:
            continue
        rho, elem, env = rng.choice(rhos), rng.choice(P.cell(s, g2)), rng.choice(envs)
        left = (g1.entries, P.act(s, rho, elem), env)
        right = (g2.entries, elem, reindex_env(env, rho))
        if t.class_of(s, amb, left) != t.class_of(s, amb, right):
            rep.record("coend", "random generator pairs symmetric", False,
                       f"{rho!r} on {elem!r}")
            return
        confirmed += 1
    rep.record("coend", f"random generator pairs symmetric ({confirmed})", True, None)


def _suite_skew(args, rep: Report):
    import random
    from .finpresheaf import PairObject, check_skew, free_structure
    for i in range(args.structures):
        rng = random.Random(args.seed + i)

        def pair():
            return PairObject(
                free_structure(rng, (first("a"),), ("a",), 2,
                               ensure=[(first("a"), Context(("a",)))]),
                free_structure(rng, (second("k"),), ("a",), 2,
                               ensure=[(second("k"), Context(()))]))

        check_skew(("a",), ("k",), 2, [pair() for _ in range(4)], report=rep,
                   suite=f"skew[{i}]")


def _suite_pointed(args, rep: Report):
    import random
    from .finpresheaf import check_pointed_tensor
    from .finpresheaf.laws import pointed_free, pointed_variables
    for i in range(args.structures):
        rng = random.Random(args.seed + i)
        check_pointed_tensor(pointed_free(rng, ("a",), 2),
                             pointed_free(rng, ("a",), 2), report=rep,
                             suite=f"pointed[{i}]")
    check_pointed_tensor(pointed_variables(("a",), 2),
                         pointed_free(random.Random(args.seed), ("a",), 2),
                         report=rep, suite="pointed[variables]")


def _suite_monads(args, rep: Report):
    names = [args.monad] if args.monad else list(BUNDLED)
    for name in names:
        check_monad_laws(monad_by_name(name), report=rep, seed=args.seed)


def _suite_compat(args, rep: Report):
    from .semantics.monads import IdentityMonad, OptionMonad
    for fragment, exts in (("base", ()), ("sequential", ("sequential",)),
                           ("functions", ("functions",))):
        for mon in (IdentityMonad(), OptionMonad()):
            cfg = config(exts, ("b",))
            check_compatibility(fragment, model(mon, {"b": 2}), cfg,
                                seed=args.seed, report=rep)
    check_sem_action_axioms(model(monad_by_name("option"), {"b": 2}),
                            config(("sequential",), ("b",)), seed=args.seed,
                            report=rep)


def _suite_subst_lemma(args, rep: Report):
    from .semantics.monads import IdentityMonad, OptionMonad
    exhaustive = [((), 3), (("sequential",), 3), (("functions",), 2),
                  (("sequential", "functions"), 2)]
    small = {frozenset(e) for e, _ in exhaustive}
    for exts, size in exhaustive:
        for mon in (IdentityMonad(), OptionMonad()):
            check_substitution_lemma_exhaustive(
                config(exts, ("b",)), model(mon, {"b": size}), report=rep)
    mdl = model(monad_by_name("option"), {"b": 2})
    for i, cfg in enumerate(all_fragment_configs(("b",), nat_bound=4)):
        if cfg.extensions in small:
            continue
        check_substitution_lemma_random(cfg, mdl, seed=args.seed + i,
                                        count=args.count, report=rep)
    check_elgot_against_unrolling(mdl, seed=args.seed, report=rep)
    check_letrec_references(report=rep)
    check_kleene_properties(args.seed, report=rep)


def cmd_check(args) -> int:
    rep = Report()
    suite = args.suite
    if suite in ("term-laws", "all"):
        if args.all_fragments or suite == "all":
            rep.extend(run_term_laws_all_fragments(args.seed, args.count,
                                                   args.depth, args.ctx_bound,
                                                   nat_bound=args.nat_bound))
        else:
            cfg = parse_fragment(args.fragment, args.nat_bound)
            check_term_laws(cfg, args.seed, args.count, args.depth,
                            args.ctx_bound, report=rep)
    if suite in ("meta-laws", "all"):
        if args.all_fragments or suite == "all":
            rep.extend(run_meta_laws_all_fragments(args.seed, args.count,
                                                   nat_bound=args.nat_bound))
        else:
            cfg = parse_fragment(args.fragment, args.nat_bound)
            check_meta_laws(cfg, args.seed, args.count, report=rep)
    if suite in ("presheaf-laws", "all"):
        _suite_presheaf(args, rep)
    if suite in ("skew", "all"):
        _suite_skew(args, rep)
    if suite in ("pointed", "all"):
        _suite_pointed(args, rep)
    if suite in ("monad-laws", "all"):
        _suite_monads(args, rep)
    if suite in ("compatibility", "all"):
        _suite_compat(args, rep)
    if suite in ("subst-lemma", "all"):
        _suite_subst_lemma(args, rep)

    text = rep.to_text()
    print(text)
    report_path = args.report
    if report_path is None and os.environ.get("SUBSTKIT_REPORT_DIR"):
        report_path = os.path.join(os.environ["SUBSTKIT_REPORT_DIR"],
                                   f"{suite}.jsonl")
    if report_path:
        os.makedirs(os.path.dirname(report_path) or ".", exist_ok=True)
        with open(report_path, "w") as fh:
            fh.write(rep.to_json_lines() + "\n")
        print(f"report written to {report_path}")
    return 0 if rep.ok else 3


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="substkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--fragment", default="base",
                       help="extension list, e.g. 'sequential,functions', or 'full'")
        p.add_argument("--base-types", default="b")
        p.add_argument("--context", default="", help="e.g. 'x: b, f: b -> b'")
        p.add_argument("--expect", default=None,
                       help="expected sort, e.g. 'b -> b' or 'C b'")
        p.add_argument("--monad", default="option", choices=list(BUNDLED))
        p.add_argument("--fragment-config", default=None,
                       help="JSON fragment configuration file")
        p.add_argument("--model", default=None,
                       help="JSON model configuration file")
        p.add_argument("--base-size", action="append",
                       help="interpretation size, e.g. 'b=2'")
        p.add_argument("--exceptions", type=int, default=2)
        p.add_argument("--states", type=int, default=2)
        p.add_argument("--nat-bound", type=int, default=8)
        p.add_argument("--type-depth", type=int, default=3)

    p = sub.add_parser("run", help="evaluate a program file ('-' for stdin)")
    p.add_argument("program")
    common(p)
    p.add_argument("--at", default=None, help="evaluate at one context point")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("subst", help="apply a substitution file to a term file")
    p.add_argument("term")
    p.add_argument("subst")
    common(p)
    p.set_defaults(fn=cmd_subst)

    p = sub.add_parser("check", help="run a law suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--fragment", default="base")
    p.add_argument("--all-fragments", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--ctx-bound", type=int, default=3)
    p.add_argument("--nat-bound", type=int, default=4)
    p.add_argument("--structures", type=int, default=20)
    p.add_argument("--monad", default=None, choices=list(BUNDLED))
    p.add_argument("--report", default=None)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("fragments", help="list the 128 fragment configurations")
    p.add_argument("--ops", default=None, metavar="FRAGMENT",
                   help="print the bounded operator table of one fragment")
    p.set_defaults(fn=cmd_fragments)

    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except BrokenPipeError:
        import os as _os
        _os.close(sys.stdout.fileno())
        return 0


if __name__ == "__main__":
    sys.exit(main())
