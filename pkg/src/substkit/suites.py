"""Seeded law suites over the fragment configurations.

These drive the term-level and metavariable law checks across fragment
configurations (all 128 by default), plus the aggregate dispatch the
command-line ``check`` command uses.  Everything is deterministic given the
seed; reports carry one record per (config, law).
"""

from __future__ import annotations

import random

from .cbv.gen import TermGen
from .cbv.ops import CbvOperatorTable
from .cbv.types import FragmentConfig, all_fragment_configs
from .report import Report
from .terms import (MetaSubst, Var, compose_meta_subst, compose_subst,
                    identity_env, identity_meta_subst, meta_substitute,
                    substitute, substitute_direct)


def _corpus_item(gen: TermGen, ctx_bound: int, depth: int, holes=None,
                 hole_prob=0.0):
    ctx = gen.random_context(ctx_bound)
    target = gen.random_target(ctx)
    if target.is_first:
        term = gen.random_value(ctx, target.ident, depth, holes, hole_prob)
    else:
        term = gen.random_term(ctx, target.ident, depth, holes, hole_prob)
    return ctx, term


def check_term_laws(cfg: FragmentConfig, seed: int, count: int = 200,
                    depth: int = 4, ctx_bound: int = 3,
                    report: Report | None = None) -> Report:
    """Left/right unit, associativity, renaming factorization, and agreement
    with the independent index-shifting substitution, on a seeded corpus."""
    rep = report if report is not None else Report()
    suite = f"term-laws[{cfg.name()}]"
    rng = random.Random(seed)
    table = CbvOperatorTable(cfg)
    gen = TermGen(cfg, table, rng)
    fails = {}
    for i in range(count):
        ctx, term = _corpus_item(gen, ctx_bound, depth)
        s1 = gen.random_subst(ctx)
        s2 = gen.random_subst(s1.target)
        if len(ctx) and "left unit" not in fails:
            pos = rng.randrange(len(ctx))
            if substitute(Var(ctx, pos), s1) != s1.entries[pos]:
                fails["left unit"] = f"item {i}"
        if substitute(term, identity_env(ctx)) != term:
            fails.setdefault("right unit", f"item {i}")
        lhs = substitute(substitute(term, s1), s2)
        if lhs != substitute(term, compose_subst(s1, s2)):
            fails.setdefault("associativity", f"item {i}")
        if substitute(term, s1) != substitute_direct(term, s1):
            fails.setdefault("oracle agreement", f"item {i}")
    for law in ("left unit", "right unit", "associativity", "oracle agreement"):
        rep.record(suite, f"{law} ({count} terms, seed {seed})",
                   law not in fails, fails.get(law))
    return rep


def check_meta_laws(cfg: FragmentConfig, seed: int, count: int = 200,
                    depth: int = 3, ctx_bound: int = 3,
                    report: Report | None = None) -> Report:
    """Kleisli unit and associativity of metavariable substitution, and its
    commutation with simultaneous substitution, on a holed corpus."""
    rep = report if report is not None else Report()
    suite = f"meta-laws[{cfg.name()}]"
    rng = random.Random(seed)
    table = CbvOperatorTable(cfg)
    gen = TermGen(cfg, table, rng)
    fails = {}
    for i in range(count):
        holes: dict = {}
        ctx, term = _corpus_item(gen, ctx_bound, depth, holes, hole_prob=0.35)
        if meta_substitute(term, identity_meta_subst(holes.values())) != term:
            fails.setdefault("Kleisli unit", f"item {i}")
        mid_holes: dict = {}
        ms1 = MetaSubst({ident: (h, gen.random_term(h.ctx, h.sort.ident, 2,
                                                    mid_holes, 0.3)
                                 if not h.sort.is_first else
                                 gen.random_value(h.ctx, h.sort.ident, 2,
                                                  mid_holes, 0.3))
                         for ident, h in holes.items()})
        ms2 = MetaSubst({ident: (h, gen.random_term(h.ctx, h.sort.ident, 2)
                                 if not h.sort.is_first else
                                 gen.random_value(h.ctx, h.sort.ident, 2))
                         for ident, h in mid_holes.items()})
        lhs = meta_substitute(meta_substitute(term, ms1), ms2)
        if lhs != meta_substitute(term, compose_meta_subst(ms1, ms2)):
            fails.setdefault("Kleisli associativity", f"item {i}")
        ms_closed = MetaSubst({ident: (h, gen.random_term(h.ctx, h.sort.ident, 2)
                                       if not h.sort.is_first else
                                       gen.random_value(h.ctx, h.sort.ident, 2))
                               for ident, h in holes.items()})
        sigma = gen.random_subst(ctx)
        if substitute(meta_substitute(term, ms_closed), sigma) != \
                meta_substitute(substitute(term, sigma), ms_closed):
            fails.setdefault("commutation with substitution", f"item {i}")
    for law in ("Kleisli unit", "Kleisli associativity",
                "commutation with substitution"):
        rep.record(suite, f"{law} ({count} terms, seed {seed})",
                   law not in fails, fails.get(law))
    return rep


def run_term_laws_all_fragments(seed: int, count: int = 200, depth: int = 4,
                                ctx_bound: int = 3, base_types=("b", "c"),
                                nat_bound: int = 4) -> Report:
    rep = Report()
    for i, cfg in enumerate(all_fragment_configs(base_types, nat_bound)):
        check_term_laws(cfg, seed + i, count, depth, ctx_bound, report=rep)
    return rep


def run_meta_laws_all_fragments(seed: int, count: int = 200, depth: int = 3,
                                ctx_bound: int = 3, base_types=("b", "c"),
                                nat_bound: int = 4) -> Report:
    rep = Report()
    for i, cfg in enumerate(all_fragment_configs(base_types, nat_bound)):
        check_meta_laws(cfg, seed + i, count, depth, ctx_bound, report=rep)
    return rep
