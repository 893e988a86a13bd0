"""Semantic law suites: action axioms, compatibility squares, substitution lemma.

Compatibility quantifies over arbitrary sub-denotation tables, not just
denotations of terms, so the squares genuinely test each algebra clause's
naturality in the context.  The substitution lemma suite compares the table of
a substituted term with the composite of tables, exhaustively on enumerated
corpora for the small fragments and on seeded random corpora elsewhere.
"""

from __future__ import annotations

import itertools
import random

from ..cbv.gen import TermGen, enumerate_terms, enumerate_values
from ..cbv.ops import CbvOperatorTable
from ..cbv.types import Base, FragmentConfig, Fun, fun, valid_type
from ..report import Report
from ..finpresheaf.structures import enumerate_renamings
from ..signatures import route_environment
from ..sorts import Context, first, second
from ..terms import SubstEnv, Term, substitute
from .denote import DenotationCarrier, Interpreter, denote
from .finset import FinSet
from .monads import NONE
from .model import (Denotation, Model, context_space, identity_sem_env,
                    interp_size, interpret_type, precompose, projection,
                    subst_denotation)


def _all_tables(space: FinSet, outs: FinSet, cap: int, rng) -> list:
    """Every output tuple over the space, or a seeded sample past the cap."""
    total = outs.size ** space.size
    if total <= cap:
        return [dict(zip(space, combo))
                for combo in itertools.product(outs.elements, repeat=space.size)]
    out = []
    for _ in range(cap):
        out.append({p: rng.choice(outs.elements) for p in space})
    return out


def _table_denotation(sort, ctx, space, mapping) -> Denotation:
    return Denotation(sort, ctx, space, lambda p: mapping[p])


def _sem_envs(src: Context, tgt: Context, m: Model, nat_bound: int,
              cap: int, rng) -> list:
    """Semantic substitutions: tuples of tables, one per source position."""
    tgt_space = context_space(tgt, m, nat_bound)
    pools = []
    for t in src.entries:
        outs = interpret_type(t, m, nat_bound)
        pools.append(_all_tables(tgt_space, FinSet(outs), cap, rng))
    total = 1
    for p in pools:
        total *= len(p)
    combos = (itertools.product(*pools) if total <= cap
              else (tuple(rng.choice(p) for p in pools) for _ in range(cap)))
    out = []
    for combo in combos:
        out.append([_table_denotation(first(t), tgt, tgt_space, mapping)
                    for t, mapping in zip(src.entries, combo)])
    return out


# --- semantic substitution structure axioms -------------------------------------

def check_sem_action_axioms(m: Model, cfg: FragmentConfig, ctx_len: int = 2,
                            cap: int = 300, seed: int = 0,
                            report: Report | None = None,
                            suite: str = "sem-action") -> Report:
    rep = report if report is not None else Report()
    rng = random.Random(seed)
    nb = cfg.nat_bound
    b = Base(cfg.base_types[0])
    ctxs = [Context(c) for k in range(ctx_len + 1)
            for c in itertools.product((b,), repeat=k)]

    left_ok = right_ok = assoc_ok = coend_ok = True
    witness = {}
    for src in ctxs:
        src_space = context_space(src, m, nb)
        for tgt in ctxs:
            envs = _sem_envs(src, tgt, m, nb, cap, rng)
            for env in envs:
                # left unit: a variable's table after substitution is the entry
                for pos in range(len(src)):
                    lhs = subst_denotation(projection(src, pos, m, nb), env, m, nb,
                                           target=tgt)
                    if lhs.table() != env[pos].table():
                        left_ok, witness["left"] = False, f"{src!r} pos {pos}"
                # pick representative tables over src to substitute into
                outs = FinSet(m.monad.apply(interpret_type(b, m, nb)))
                for mapping in _all_tables(src_space, outs, 12, rng):
                    d = _table_denotation(second(b), src, src_space, mapping)
                    ident = identity_sem_env(src, m, nb)
                    if subst_denotation(d, ident, m, nb).table() != d.table():
                        right_ok, witness["right"] = False, f"{src!r}"
                    for tgt2 in ctxs[:2]:
                        for env2 in _sem_envs(tgt, tgt2, m, nb, 4, rng):
                            one = subst_denotation(
                                subst_denotation(d, env, m, nb, target=tgt),
                                env2, m, nb, target=tgt2)
                            composed = [subst_denotation(e, env2, m, nb,
                                                          target=tgt2)
                                        for e in env]
                            two = subst_denotation(d, composed, m, nb,
                                                   target=tgt2)
                            if one.table() != two.table():
                                assoc_ok, witness["assoc"] = False, f"{src!r}"
                    # coend well-definedness: renaming then substituting equals
                    # substituting the reindexed environment
                    for src0 in ctxs:
                        for rho in enumerate_renamings(src0, src):
                            for env0 in _sem_envs(src0, tgt, m, nb, 2, rng):
                                lhs = subst_denotation(
                                    precompose(d, rho, m, nb), env0, m, nb,
                                    target=tgt)
                                reindexed = [env0[rho.mapping[y]]
                                             for y in range(len(src))]
                                rhs = subst_denotation(d, reindexed, m, nb,
                                                        target=tgt)
                                if lhs.table() != rhs.table():
                                    coend_ok, witness["coend"] = False, f"{rho!r}"

    rep.record(suite, "left unit (x[s] = s_x)", left_ok, witness.get("left"))
    rep.record(suite, "right unit (d[id] = d)", right_ok, witness.get("right"))
    rep.record(suite, "associativity (d[s1][s2] = d[s1[s2]])", assoc_ok,
               witness.get("assoc"))
    rep.record(suite, "coend well-definedness (renaming vs reindexing)",
               coend_ok, witness.get("coend"))

    # pointed/plain agreement: the carrier's variable images are the unit
    carrier = DenotationCarrier(m, nb)
    agree = True
    for ctx in ctxs:
        for pos in range(len(ctx)):
            if carrier.var(ctx.sort_at(pos), ctx, pos).table() != \
                    projection(ctx, pos, m, nb).table():
                agree = False
    rep.record(suite, "point equals the unit projections", agree, None)
    return rep


# --- compatibility ---------------------------------------------------------------

FRAGMENT_FAMILIES = {
    "base": ("val",),
    "sequential": ("let",),
    "functions": ("lam", "app"),
    # the cotupled algebra of several fragments at once: compatibility of the
    # coproduct equals per-summand compatibility, checked jointly here
    "joint": ("val", "let", "lam", "app"),
}


def _op_instances(family: str, table: CbvOperatorTable, universe):
    cfg = table.cfg
    if family == "val":
        return [table.val(t) for t in universe]
    if family == "let":
        out = []
        for n in (1, 2):
            for bound in itertools.product(universe, repeat=n):
                for res in universe:
                    out.append(table.let(bound, res))
        return out
    if family == "lam":
        return [table.lam(t.dom, t.cod) for t in universe if isinstance(t, Fun)]
    if family == "app":
        return [table.app(t.dom, t.cod) for t in universe if isinstance(t, Fun)]
    raise ValueError(family)


def check_compatibility(fragment: str, m: Model, cfg: FragmentConfig,
                        ctx_len: int = 1, type_depth: int = 2,
                        table_cap: int = 12, env_cap: int = 6, seed: int = 0,
                        type_size_cap: int = 12, corrupt: str | None = None,
                        report: Report | None = None) -> Report:
    """The compatibility square for every operator of the fragment: substituting
    after interpreting equals interpreting the strength-routed substitution."""
    from ..cbv.types import TypeUniverse
    rep = report if report is not None else Report()
    suite = f"compatibility[{fragment},{m.monad.name}]"
    rng = random.Random(seed)
    nb = cfg.nat_bound
    table = CbvOperatorTable(cfg)
    universe = [t for t in TypeUniverse(cfg).types(type_depth)
                if interp_size(t, m, nb) <= type_size_cap]
    b = Base(cfg.base_types[0])
    ctxs = [Context(c) for k in range(ctx_len + 1)
            for c in itertools.product((b,), repeat=k)]
    interp = Interpreter(m, cfg, table, corrupt=corrupt)
    carrier = DenotationCarrier(m, nb)

    checked = 0
    for family in FRAGMENT_FAMILIES[fragment]:
        for op in _op_instances(family, table, universe):
            for src in ctxs:
                # candidate argument tables, one pool per argument
                pools = []
                for arg in op.args:
                    arg_ctx = Context(src.entries + arg.binder.entries)
                    space = context_space(arg_ctx, m, nb)
                    if arg.sort.is_first:
                        outs = FinSet(interpret_type(arg.sort.ident, m, nb))
                    else:
                        outs = FinSet(m.monad.apply(
                            interpret_type(arg.sort.ident, m, nb)))
                    pool = _all_tables(space, outs, table_cap, rng)
                    pools.append([_table_denotation(arg.sort, arg_ctx, space, t)
                                  for t in pool])
                total = 1
                for p in pools:
                    total *= len(p)
                tuples = (itertools.product(*pools) if total <= table_cap ** 2
                          else [tuple(rng.choice(p) for p in pools)
                                for _ in range(table_cap)])
                for values in tuples:
                    lhs_base = interp.alg(op, list(values), src)
                    for tgt in ctxs:
                        for env in _sem_envs(src, tgt, m, nb, env_cap, rng):
                            lhs = subst_denotation(lhs_base, env, m, nb,
                                                   target=tgt)
                            routed_values = []
                            for arg, d in zip(op.args, values):
                                new_ctx, routed = route_environment(
                                    arg.binder, tgt, env, carrier)
                                routed_values.append(
                                    subst_denotation(d, routed, m, nb,
                                                     target=new_ctx))
                            rhs = interp.alg(op, routed_values, tgt)
                            checked += 1
                            diff = lhs.difference_witness(rhs)
                            if diff is not None:
                                rep.record(
                                    suite, f"{op.label} over {src.entries}",
                                    False,
                                    f"point {diff[0]!r}: {diff[1]!r} vs "
                                    f"{diff[2]!r} under a substitution into "
                                    f"{tgt.entries}")
                                return rep
    rep.record(suite, f"{fragment}: {checked} squares", True, None)
    return rep


# --- the substitution lemma ---------------------------------------------------------

class _DenoteCache:
    def __init__(self, m, cfg, table):
        self.m, self.cfg, self.table = m, cfg, table
        self.cache: dict = {}

    def get(self, t: Term) -> Denotation:
        got = self.cache.get(t)
        if got is None:
            got = denote(t, self.m, self.cfg, self.table)
            self.cache[t] = got
        return got


def _lemma_holds(t: Term, env: SubstEnv, dc: _DenoteCache) -> tuple:
    m, cfg = dc.m, dc.cfg
    # the substituted term is one-shot: interpret it without caching
    lhs = denote(substitute(t, env), m, cfg, dc.table)
    sem_env = [dc.get(e) for e in env.entries]
    rhs = subst_denotation(dc.get(t), sem_env, m, cfg.nat_bound,
                           target=env.target)
    diff = lhs.difference_witness(rhs)
    return (diff is None), diff


def check_substitution_lemma_exhaustive(cfg: FragmentConfig, m: Model,
                                        term_depth: int = 3, ctx_len: int = 2,
                                        binder_headroom: int = 1,
                                        subst_value_depth: int = 2,
                                        subst_ctx_len: int = 2,
                                        report: Report | None = None) -> Report:
    """All terms within the bounds (source contexts up to the context bound,
    binder extensions one past it), against the variable-entry substitutions
    plus a deterministic rotation through the value-entry substitution pool."""
    rep = report if report is not None else Report()
    suite = f"subst-lemma[{cfg.name()},{m.monad.name}]"
    table = CbvOperatorTable(cfg)
    dc = _DenoteCache(m, cfg, table)
    b = Base(cfg.base_types[0])
    universe = tuple(t for t in (b, fun(b, b)) if valid_type(t, cfg))
    max_ctx = ctx_len + binder_headroom
    ctxs = [Context(c) for k in range(ctx_len + 1)
            for c in itertools.product(universe, repeat=k)]
    sub_ctxs = [Context(c) for k in range(subst_ctx_len + 1)
                for c in itertools.product(universe, repeat=k)]
    memo: dict = {}
    checked = 0
    for src in ctxs:
        # the substitution pool for this source context
        pool = []
        for tgt in sub_ctxs:
            entry_pools = []
            for t in src.entries:
                vals = enumerate_values(table, tgt, t, subst_value_depth,
                                        universe, memo)
                entry_pools.append(vals)
            if any(not p for p in entry_pools):
                continue
            for combo in itertools.product(*entry_pools):
                pool.append(SubstEnv(src, tgt, combo))
        if not pool:
            continue
        rotate = 0
        for t in universe:
            for term in enumerate_terms(table, src, t, term_depth, universe,
                                        memo, max_ctx=max_ctx):
                for env in _select_substs(pool, src, rotate):
                    ok, diff = _lemma_holds(term, env, dc)
                    checked += 1
                    if not ok:
                        rep.record(suite, "exhaustive corpus", False,
                                   f"term {term!r} env {env!r} at {diff!r}")
                        return rep
                rotate += 1
    rep.record(suite, f"exhaustive corpus ({checked} checks)", True, None)
    return rep


def _select_substs(pool, src: Context, rotate: int) -> list:
    """Every variable-entry substitution, plus one rotating value entry."""
    from ..terms import Var
    var_only = [env for env in pool
                if all(isinstance(e, Var) for e in env.entries)]
    out = list(var_only) if var_only else []
    rest = [env for env in pool if env not in var_only]
    if rest:
        out.append(rest[rotate % len(rest)])
    if not out:
        out = pool[:1]
    return out


def check_substitution_lemma_random(cfg: FragmentConfig, m: Model, seed: int,
                                    count: int = 100, depth: int = 3,
                                    ctx_len: int = 2, interp_cap: int = 40,
                                    report: Report | None = None) -> Report:
    rep = report if report is not None else Report()
    suite = f"subst-lemma[{cfg.name()},{m.monad.name}]"
    rng = random.Random(seed)
    table = CbvOperatorTable(cfg)
    dc = _DenoteCache(m, cfg, table)
    gen = TermGen(cfg, table, rng, interp_cap=interp_cap, model=m)
    checked = 0
    while checked < count:
        ctx = gen.random_context(ctx_len)
        target = gen.random_target(ctx)
        if target.is_first:
            term = gen.random_value(ctx, target.ident, depth)
        else:
            term = gen.random_term(ctx, target.ident, depth)
        env = gen.random_subst(ctx)
        if context_space(env.target, m, cfg.nat_bound).size > 256:
            continue
        ok, diff = _lemma_holds(term, env, dc)
        checked += 1
        if not ok:
            rep.record(suite, f"random corpus (seed {seed})", False,
                       f"term {term!r} env {env!r} at {diff!r}")
            return rep
    rep.record(suite, f"random corpus ({checked} cases, seed {seed})", True, None)
    return rep


# --- iteration and fixpoints -----------------------------------------------------

class _UnrollingInterpreter(Interpreter):
    """Replaces Elgot iteration by a bounded unrolling: the reference route."""

    def _alg_for(self, op, params, values, ctx):
        from .denote import elgot_unrolling_oracle
        state, result = params
        self._require("elgot", "unbounded iteration")
        monad = self.m.monad
        init, body = values
        state_size = interp_size(state, self.m, self.cfg.nat_bound)
        conv = lambda tv: ("inl", tv[1]) if tv[0] == "Done" else ("inr", tv[1])

        def fn(point):
            step = lambda v: monad.tmap(conv, body.at(point + (v,)))
            return monad.bind(
                lambda g, v0: elgot_unrolling_oracle(step, v0, state_size + 1),
                point, init.at(point))

        return self._den(result, ctx, fn)


def denote_with_unrolling(t, m, cfg, table):
    from ..terms import fold
    from .model import identity_sem_env
    interp = _UnrollingInterpreter(m, cfg, table)
    env = identity_sem_env(t.ctx, m, cfg.nat_bound)
    return fold(t, interp.alg, interp._alg_hole, env, t.ctx, interp.carrier)


def check_elgot_against_unrolling(m: Model, seed: int, count: int = 50,
                                  report: Report | None = None) -> Report:
    """Random while-programs: the cycle-detecting iteration must agree with the
    (|state|+1)-step unrolling on every context point."""
    rep = report if report is not None else Report()
    suite = "elgot"
    cfg = FragmentConfig(frozenset({"while", "naturals", "sequential"}), ("b",),
                         nat_bound=3, type_depth=3)
    table = CbvOperatorTable(cfg)
    rng = random.Random(seed)
    gen = TermGen(cfg, table, rng, interp_cap=12, model=m)
    from ..cbv.types import NAT, done_cont_shape
    checked = 0
    while checked < count:
        ctx = gen.random_context(2)
        w = sorted(gen.inhabited(frozenset(ctx.entries)), key=repr)
        state = rng.choice(w)
        result = rng.choice(w)
        if interp_size(state, m, cfg.nat_bound) > 8:
            continue
        init = gen.random_term(ctx, state, 2)
        inner = Context(ctx.entries + (state,))
        body = gen.random_term(inner, done_cont_shape(result, state), 3)
        from ..terms import Op
        term = Op(table.forloop(state, result), ctx, [init, body])
        lhs = denote(term, m, cfg, table)
        rhs = denote_with_unrolling(term, m, cfg, table)
        diff = lhs.difference_witness(rhs)
        checked += 1
        if diff is not None:
            rep.record(suite, f"unrolling agreement (seed {seed})", False,
                       f"term {term!r} at {diff!r}")
            return rep
    rep.record(suite, f"unrolling agreement ({checked} programs, seed {seed})",
               True, None)

    # a self-loop diverges: its value is the absent element everywhere
    from ..cbv.types import NAT as _NAT
    cfg2 = cfg
    t2 = CbvOperatorTable(cfg2)
    self_loop = "for i = val 0 do val (<Done: Nat, Cont: Nat>.Cont i)"
    from ..cbv.surface import parse
    from ..cbv.typecheck import typecheck
    from ..sorts import second
    term = typecheck(parse(self_loop), Context(()), second(_NAT), cfg2, t2)
    d = denote(term, m, cfg2, t2)
    ok = d.at(()) == NONE
    rep.record(suite, "self-loop yields the divergence value", ok,
               None if ok else repr(d.at(())))
    return rep


FACTORIAL = """
letrec fact[m: Nat]: Nat =
  case (unroll (val m)) of {
    0 z -> val 1
  | 1+ p -> let r = (val fact) (val {0 = p}) in
            fold (val r) acc .
              case (val acc) of {
                0 z2 -> val 0
              | 1+ prev -> fold (val m) acc2 .
                  case (val acc2) of {
                    0 z3 -> val prev
                  | 1+ q -> roll (<0: {}, 1+: Nat>.1+ (val q)) } } }
in (val fact) (val {0 = x0})
"""

EVEN_ODD = """
letrec even[m: Nat]: Nat =
  case (unroll (val m)) of {0 z -> val 1 | 1+ p -> (val odd) (val {0 = p})};
       odd[m: Nat]: Nat =
  case (unroll (val m)) of {0 z -> val 0 | 1+ p -> (val even) (val {0 = p})}
in (val even) (val {0 = x0})
"""


def _ref_factorial(n: int, bound: int):
    out = 1
    for k in range(2, n + 1):
        out *= k
        if out >= bound:
            return NONE
    return ("some", out) if out < bound else NONE


def check_letrec_references(report: Report | None = None) -> Report:
    """Factorial and mutual even/odd against direct reference evaluators."""
    from ..cbv.surface import parse
    from ..cbv.typecheck import typecheck
    from ..cbv.types import NAT
    from ..sorts import second
    rep = report if report is not None else Report()
    suite = "fixpoints"
    m = model_option()

    cfg = FragmentConfig(
        frozenset({"recursion", "naturals", "sequential", "functions"}),
        ("b",), nat_bound=25, type_depth=4)
    table = CbvOperatorTable(cfg)
    ctx = Context((NAT,))
    term = typecheck(parse(FACTORIAL), ctx, second(NAT), cfg, table)
    d = denote(term, m, cfg, table)
    ok, witness = True, None
    for n in range(6):
        got = d.at((n,))
        want = _ref_factorial(n, 25)
        if got != want:
            ok, witness = False, f"factorial({n}) = {got!r}, expected {want!r}"
    rep.record(suite, "letrec factorial at nat_bound 25 (inputs 0..5)", ok, witness)

    cfg2 = FragmentConfig(
        frozenset({"recursion", "naturals", "sequential", "functions"}),
        ("b",), nat_bound=4, type_depth=4)
    table2 = CbvOperatorTable(cfg2)
    term2 = typecheck(parse(EVEN_ODD), ctx, second(NAT), cfg2, table2)
    d2 = denote(term2, m, cfg2, table2)
    ok, witness = True, None
    for n in range(4):
        want = ("some", 1 if n % 2 == 0 else 0)
        if d2.at((n,)) != want:
            ok, witness = False, f"even({n}) = {d2.at((n,))!r}"
    rep.record(suite, "mutual even/odd at nat_bound 4", ok, witness)
    return rep


def model_option(sizes=None):
    from .model import model as _model
    from .monads import OptionMonad
    return _model(OptionMonad(), sizes or {"b": 2})


def check_kleene_properties(seed: int, report: Report | None = None) -> Report:
    """Fixed-point equations and leastness on tiny random monotone maps, and
    the non-convergence guard on a non-monotone one."""
    from .denote import NonConvergence, kleene_fixpoint
    rep = report if report is not None else Report()
    suite = "fixpoints"
    rng = random.Random(seed)
    values = [NONE, ("some", 0), ("some", 1)]

    def leq(a, b):
        return a == NONE or a == b

    ok, witness = True, None
    for trial in range(30):
        n = rng.randrange(1, 4)
        # random monotone map: entry i upgrades to its target once its
        # dependency is set; self-dependent entries seed the iteration
        targets = [rng.choice(values) for _ in range(n)]
        deps = [rng.randrange(n) for _ in range(n)]

        def phi2(tab):
            return tuple(targets[i] if (deps[i] == i or tab[deps[i]] != NONE)
                         else tab[i] for i in range(n))

        bottom = tuple(NONE for _ in range(n))
        fix = kleene_fixpoint(phi2, bottom, n + 2)
        if phi2(fix) != fix:
            ok, witness = False, f"phi(fix) != fix on trial {trial}"
        # leastness: any other fixed point dominates ours pointwise
        import itertools as _it
        for cand in _it.product(values, repeat=n):
            if phi2(cand) == cand and not all(leq(a, b)
                                              for a, b in zip(fix, cand)):
                ok, witness = False, f"not least on trial {trial}"
    rep.record(suite, "Kleene: phi(fix) = fix and leastness (30 random maps)",
               ok, witness)

    flip = {NONE: ("some", 0), ("some", 0): NONE, ("some", 1): ("some", 1)}
    try:
        kleene_fixpoint(lambda tab: (flip[tab[0]],), (NONE,), 8)
        rep.record(suite, "non-monotone map raises NonConvergence", False,
                   "no exception")
    except NonConvergence:
        rep.record(suite, "non-monotone map raises NonConvergence", True, None)
    return rep
