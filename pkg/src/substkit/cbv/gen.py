"""Seeded random well-typed terms, substitutions, and holed corpora.

Generation is type-directed: a value-inhabitation fixpoint over the bounded
type universe decides which targets are constructible in a given context, a
minimal-value fallback guarantees termination when the depth budget runs out,
and every production mints its operator through the fragment table, so every
generated tree is well-sorted by construction.
"""

from __future__ import annotations

import itertools
import random

from ..sorts import Context, Sort, first, second
from ..terms import HoleDecl, Meta, Op, SubstEnv, Term, Var
from .ops import CbvOperatorTable, record_allowed, variant_allowed, vmatch_allowed
from .types import (Base, FragmentConfig, Fun, NAT, NatType, Record, TypeExpr,
                    TypeUniverse, Variant, done_cont_shape, fun, maybe_shape,
                    record, type_depth, type_to_label, valid_type)


def _subtypes(t: TypeExpr):
    yield t
    if isinstance(t, Fun):
        yield from _subtypes(t.dom)
        yield from _subtypes(t.cod)
    elif isinstance(t, (Record, Variant)):
        for _, v in t.row:
            yield from _subtypes(v)


class TermGen:
    def __init__(self, cfg: FragmentConfig, table: CbvOperatorTable,
                 rng: random.Random, type_depth: int = 2,
                 interp_cap: int | None = None, model=None):
        self.cfg = cfg
        self.table = table
        self.rng = rng
        self.universe = list(TypeUniverse(cfg).types(min(type_depth, cfg.type_depth)))
        if interp_cap is not None and model is not None:
            from ..semantics.model import interp_size
            self.universe = [t for t in self.universe
                             if interp_size(t, model, cfg.nat_bound) <= interp_cap]
        self._w_memo: dict = {}
        self._sorted_memo: dict = {}

    # -- inhabitation -------------------------------------------------------

    def inhabited(self, avail: frozenset) -> frozenset:
        """Types with a constructible value given variables of ``avail`` types."""
        got = self._w_memo.get(avail)
        if got is not None:
            return got
        pool = set(self.universe) | set(avail)
        for t in list(pool):
            pool.update(_subtypes(t))
        pool = {t for t in pool if valid_type(t, self.cfg)}
        current = set(avail) & pool
        self._w_memo[avail] = frozenset()  # cut off re-entrant cycles
        changed = True
        while changed:
            changed = False
            for t in pool:
                if t in current:
                    continue
                if self._inhabited_step(t, current, avail):
                    current.add(t)
                    changed = True
        result = frozenset(current)
        self._w_memo[avail] = result
        return result

    def _inhabited_step(self, t, current, avail) -> bool:
        cfg = self.cfg
        if isinstance(t, NatType):
            return cfg.has("naturals")
        if isinstance(t, Fun):
            if not cfg.has("functions"):
                return False
            if t.dom in avail or t.dom in current:
                return t.cod in current
            if len(avail) >= 5:
                return False
            return t.cod in self.inhabited(avail | {t.dom})
        if isinstance(t, Record):
            return (record_allowed(self.cfg, t.row)
                    and all(v in current for _, v in t.row))
        if isinstance(t, Variant):
            return (variant_allowed(self.cfg, t)
                    and any(v in current for _, v in t.row))
        return False  # base types only via variables

    def _w(self, ctx: Context) -> frozenset:
        return self.inhabited(frozenset(ctx.entries))

    def _w_sorted(self, arg) -> list:
        w = arg if isinstance(arg, frozenset) else self._w(arg)
        got = self._sorted_memo.get(w)
        if got is None:
            got = sorted(w, key=type_to_label)
            self._sorted_memo[w] = got
        return got

    # -- contexts -------------------------------------------------------------

    def random_context(self, max_len: int) -> Context:
        k = self.rng.randrange(max_len + 1)
        entries = [self.rng.choice(self.universe) for _ in range(k)]
        if not self.inhabited(frozenset(entries)):
            entries.append(Base(self.cfg.base_types[0]))
        return Context(tuple(entries))

    def random_target(self, ctx: Context) -> Sort:
        w = self._w_sorted(ctx)
        t = self.rng.choice(w)
        return first(t) if self.rng.random() < 0.3 else second(t)

    # -- minimal fallbacks ----------------------------------------------------

    def min_value(self, ctx: Context, t: TypeExpr) -> Term:
        positions = [i for i, e in enumerate(ctx.entries) if e == t]
        if positions:
            return Var(ctx, positions[0])
        if isinstance(t, NatType):
            return Op(self.table.lit(0), ctx, [])
        if isinstance(t, Fun):
            inner = Context(ctx.entries + (t.dom,))
            return Op(self.table.lam(t.dom, t.cod), ctx,
                      [self.min_term(inner, t.cod)])
        if isinstance(t, Record):
            return Op(self.table.vrec(t.row), ctx,
                      [self.min_value(ctx, v) for _, v in t.row])
        if isinstance(t, Variant):
            w = self._w(ctx)
            for tag, v in t.row:
                if v in w:
                    return Op(self.table.vinj(t.row, tag), ctx,
                              [self.min_value(ctx, v)])
        raise ValueError(f"no value of type {t!r} in {ctx!r}")

    def min_term(self, ctx: Context, t: TypeExpr) -> Term:
        v = self.min_value(ctx, t)
        return Op(self.table.val(t), ctx, [v])

    # -- random terms ------------------------------------------------------------

    def can_intro(self, ctx: Context, t: TypeExpr) -> bool:
        """Can a value of this type be built here by an introduction rule
        (rather than by a variable)?"""
        cfg = self.cfg
        if isinstance(t, NatType):
            return cfg.has("naturals")
        if isinstance(t, Fun):
            return (cfg.has("functions")
                    and t.cod in self.inhabited(frozenset(ctx.entries) | {t.dom}))
        w = self._w(ctx)
        if isinstance(t, Record):
            return self._can_vrec(t) and all(v in w for _, v in t.row)
        if isinstance(t, Variant):
            return self._can_inj(t, w)
        return False

    def _can_vrec(self, t: Record) -> bool:
        return record_allowed(self.cfg, t.row)

    def random_value(self, ctx: Context, t: TypeExpr, depth: int,
                     holes=None, hole_prob=0.0) -> Term:
        rng = self.rng
        if holes is not None and depth > 0 and rng.random() < hole_prob:
            return self._hole(ctx, first(t), holes, depth)
        positions = [i for i, e in enumerate(ctx.entries) if e == t]
        if depth <= 0:
            if positions:
                return Var(ctx, rng.choice(positions))
            return self.min_value(ctx, t)
        intro_ok = self.can_intro(ctx, t)
        if positions and (not intro_ok or rng.random() < 0.5):
            return Var(ctx, rng.choice(positions))
        if not intro_ok:
            return self.min_value(ctx, t)
        if isinstance(t, NatType):
            return Op(self.table.lit(rng.randrange(self.cfg.nat_bound)), ctx, [])
        if isinstance(t, Fun):
            inner = Context(ctx.entries + (t.dom,))
            body = self.random_term(inner, t.cod, depth - 1, holes, hole_prob)
            return Op(self.table.lam(t.dom, t.cod), ctx, [body])
        if isinstance(t, Record):
            return Op(self.table.vrec(t.row), ctx,
                      [self.random_value(ctx, v, depth - 1, holes, hole_prob)
                       for _, v in t.row])
        w = self._w(ctx)
        tags = [tag for tag, v in t.row if v in w]
        tag = rng.choice(tags)
        payload = dict(t.row)[tag]
        return Op(self.table.vinj(t.row, tag), ctx,
                  [self.random_value(ctx, payload, depth - 1, holes, hole_prob)])

    def _hole(self, ctx: Context, sort: Sort, holes: dict, depth: int) -> Term:
        rng = self.rng
        w = self._w_sorted(ctx)
        compatible = [h for h in holes.values() if h.sort == sort
                      and all(e in w for e in h.ctx.entries)]
        if compatible and rng.random() < 0.4:
            hole = rng.choice(compatible)
        else:
            # the hole's context always carries the hole's own value type, so
            # bodies over it are constructible for any metavariable assignment
            arity = rng.randrange(min(2, len(w)) + 1) if w else 0
            hctx = Context((sort.ident,)
                           + tuple(rng.choice(w) for _ in range(arity)))
            hole = HoleDecl(f"h{len(holes)}", sort, hctx)
            holes[hole.ident] = hole
        env = [self.random_value(ctx, e, max(depth - 1, 0))
               for e in hole.ctx.entries]
        return Meta(hole, ctx, env)

    def random_term(self, ctx: Context, t: TypeExpr, depth: int,
                    holes=None, hole_prob=0.0) -> Term:
        rng = self.rng
        cfg = self.cfg
        if holes is not None and depth > 0 and rng.random() < hole_prob:
            return self._hole(ctx, second(t), holes, depth)
        if depth <= 0:
            return self.min_term(ctx, t)
        w = self._w(ctx)
        choices = ["val", "val"]
        if cfg.has("sequential"):
            choices.append("let")
        if cfg.has("functions") and depth >= 2:
            choices.append("app")
        if isinstance(t, Record) and self._can_rec(t) and all(v in w for _, v in t.row):
            choices.append("rec")
        if cfg.has("records") and depth >= 2:
            choices.append("recmatch")
        if isinstance(t, Variant) and self._can_inj(t, w):
            choices.append("inj")
        if self._vmatchable(w) and depth >= 2:
            choices.append("vmatch")
        if cfg.has("naturals"):
            if t == maybe_shape(NAT):
                choices.append("unroll")
            if isinstance(t, NatType):
                choices.append("roll")
            if self._fits(maybe_shape(t)):
                choices.append("natfold")
        if cfg.has("while") and any(self._fits(done_cont_shape(t, s))
                                    for s in w):
            choices.append("for")
        if cfg.has("recursion") and depth >= 2:
            choices.append("letrec")
        pick = rng.choice(choices)
        d = depth - 1
        if pick == "let":
            n = rng.randrange(1, 3)
            inner = ctx
            bound_types, bound_terms = [], []
            for _ in range(n):
                bt = rng.choice(self._w_sorted(self.inhabited(frozenset(inner.entries))))
                bound_terms.append(self.random_term(inner, bt, d, holes, hole_prob))
                bound_types.append(bt)
                inner = Context(inner.entries + (bt,))
            body = self.random_term(inner, t, d, holes, hole_prob)
            op = self.table.let(tuple(bound_types), t)
            return Op(op, ctx, bound_terms + [body])
        if pick == "app":
            doms = [a for a in self._w_sorted(w)
                    if fun(a, t) in w and self._fits(fun(a, t))]
            if doms:
                a = rng.choice(doms)
                f = self.random_term(ctx, fun(a, t), d, holes, hole_prob)
                x = self.random_term(ctx, a, d, holes, hole_prob)
                return Op(self.table.app(a, t), ctx, [f, x])
        if pick == "rec":
            return Op(self.table.rec(t.row), ctx,
                      [self.random_term(ctx, v, d, holes, hole_prob)
                       for _, v in t.row])
        if pick == "recmatch":
            row = self._random_row(w, record_like=True)
            if row is not None:
                scrut = self.random_term(ctx, Record(row), d, holes, hole_prob)
                inner = Context(ctx.entries + tuple(v for _, v in row))
                body = self.random_term(inner, t, d, holes, hole_prob)
                return Op(self.table.recmatch(row, t), ctx, [scrut, body])
        if pick == "inj":
            tags = [tag for tag, v in t.row if v in w]
            tag = rng.choice(tags)
            arg = self.random_term(ctx, dict(t.row)[tag], d, holes, hole_prob)
            return Op(self.table.inj(t.row, tag), ctx, [arg])
        if pick == "vmatch":
            vt = self._random_variant(w)
            if vt is not None:
                scrut = self.random_term(ctx, vt, d, holes, hole_prob)
                bodies = []
                for _, payload in vt.row:
                    inner = Context(ctx.entries + (payload,))
                    bodies.append(self.random_term(inner, t, d, holes, hole_prob))
                return Op(self.table.vmatch(vt.row, t), ctx, [scrut] + bodies)
        if pick == "unroll":
            scrut = self.random_term(ctx, NAT, d, holes, hole_prob)
            return Op(self.table.unroll(), ctx, [scrut])
        if pick == "roll":
            arg = self.random_term(ctx, maybe_shape(NAT), d, holes, hole_prob)
            return Op(self.table.roll(), ctx, [arg])
        if pick == "natfold":
            scrut = self.random_term(ctx, NAT, d, holes, hole_prob)
            inner = Context(ctx.entries + (maybe_shape(t),))
            body = self.random_term(inner, t, d, holes, hole_prob)
            return Op(self.table.natfold(t), ctx, [scrut, body])
        if pick == "for":
            states = [s for s in self._w_sorted(w)
                      if self._fits(done_cont_shape(t, s))]
            state = rng.choice(states)
            init = self.random_term(ctx, state, d, holes, hole_prob)
            inner = Context(ctx.entries + (state,))
            body = self.random_term(inner, done_cont_shape(t, state), d,
                                    holes, hole_prob)
            return Op(self.table.forloop(state, t), ctx, [init, body])
        if pick == "letrec":
            arity = rng.randrange(0, 2)
            params = tuple(rng.choice(self._w_sorted(w)) for _ in range(arity))
            ret = rng.choice(self._w_sorted(w))
            try:
                op = self.table.letrec(((params, ret),), t)
            except Exception:
                op = None
            if op is not None:
                ft = fun(record(tuple((str(i), p) for i, p in enumerate(params))),
                         ret)
                defctx = Context(ctx.entries + (ft,) + params)
                defbody = self.random_term(defctx, ret, d, holes, hole_prob)
                mainctx = Context(ctx.entries + (ft,))
                main = self.random_term(mainctx, t, d, holes, hole_prob)
                return Op(op, ctx, [defbody, main])
        value = self.random_value(ctx, t, d, holes, hole_prob)
        return Op(self.table.val(t), ctx, [value])

    def _fits(self, t: TypeExpr) -> bool:
        return type_depth(t) <= self.cfg.type_depth

    def _can_rec(self, t: Record) -> bool:
        return record_allowed(self.cfg, t.row)

    def _can_inj(self, t: Variant, w) -> bool:
        return variant_allowed(self.cfg, t) and any(v in w for _, v in t.row)

    def _vmatchable(self, w) -> bool:
        return self._random_variant(w) is not None

    def _random_variant(self, w):
        cands = [t for t in self._w_sorted(w) if isinstance(t, Variant)]
        cands = [t for t in cands if self._matchable(t)]
        return self.rng.choice(cands) if cands else None

    def _matchable(self, t: Variant) -> bool:
        return vmatch_allowed(self.cfg, t)

    def _random_row(self, w, record_like=False):
        if not self.cfg.has("records"):
            return None
        pool = [t for t in self._w_sorted(w)
                if type_depth(t) < self.cfg.type_depth]
        if not pool:
            return None
        k = self.rng.randrange(0, 3)
        labels = ("A", "B")
        return tuple((labels[i], self.rng.choice(pool)) for i in range(k))

    # -- substitutions ------------------------------------------------------------

    def random_subst(self, src: Context, depth: int = 2,
                     extend: bool = True) -> SubstEnv:
        """A substitution from ``src`` into a shuffled/extended target context.

        The target always contains a variable of every source type, so value
        entries exist for any source context."""
        rng = self.rng
        entries = list(src.entries)
        rng.shuffle(entries)
        if extend and entries and rng.random() < 0.5:
            entries.append(rng.choice(entries))
        if extend and rng.random() < 0.3:
            entries.append(rng.choice(self.universe))
        tgt = Context(tuple(entries))
        out = []
        for t in src.entries:
            out.append(self.random_value(tgt, t, depth))
        return SubstEnv(src, tgt, out)


# --- systematic enumeration (for the exhaustive semantic corpora) --------------

def enumerate_values(table: CbvOperatorTable, ctx: Context, t: TypeExpr,
                     depth: int, universe, memo=None, max_ctx: int = 2) -> list:
    """Every value of the type over the context within the depth bound, all
    contexts (including under binders) within the length bound; covers the
    base/sequential/functional constructs."""
    memo = memo if memo is not None else {}
    key = ("v", ctx.entries, t, depth)
    got = memo.get(key)
    if got is not None:
        return got
    out = [Var(ctx, i) for i, e in enumerate(ctx.entries) if e == t]
    if (depth >= 2 and isinstance(t, Fun) and table.cfg.has("functions")
            and len(ctx) < max_ctx):
        inner = Context(ctx.entries + (t.dom,))
        for body in enumerate_terms(table, inner, t.cod, depth - 1, universe,
                                    memo, max_ctx=max_ctx):
            out.append(Op(table.lam(t.dom, t.cod), ctx, [body]))
    memo[key] = out
    return out


def enumerate_terms(table: CbvOperatorTable, ctx: Context, t: TypeExpr,
                    depth: int, universe, memo=None, max_bindings: int = 2,
                    max_ctx: int = 2) -> list:
    """Every term of the type over the context within the depth bound, all
    contexts (including under binders) within the length bound."""
    memo = memo if memo is not None else {}
    key = ("t", ctx.entries, t, depth)
    got = memo.get(key)
    if got is not None:
        return got
    cfg = table.cfg
    out = []
    if depth >= 1:
        for v in enumerate_values(table, ctx, t, depth - 1, universe, memo,
                                  max_ctx=max_ctx):
            out.append(Op(table.val(t), ctx, [v]))
    if depth >= 2 and cfg.has("sequential"):
        for n in range(1, min(max_bindings, max_ctx - len(ctx)) + 1):
            for bound in itertools.product(universe, repeat=n):
                inner = ctx
                pools = []
                ok = True
                for bt in bound:
                    pool = enumerate_terms(table, inner, bt, depth - 1, memo=memo,
                                           universe=universe,
                                           max_bindings=max_bindings,
                                           max_ctx=max_ctx)
                    if not pool:
                        ok = False
                        break
                    pools.append(pool)
                    inner = Context(inner.entries + (bt,))
                if not ok:
                    continue
                bodies = enumerate_terms(table, inner, t, depth - 1, memo=memo,
                                         universe=universe,
                                         max_bindings=max_bindings,
                                         max_ctx=max_ctx)
                op = table.let(tuple(bound), t)
                for choice in itertools.product(*pools):
                    for body in bodies:
                        out.append(Op(op, ctx, list(choice) + [body]))
    if depth >= 2 and cfg.has("functions"):
        for a in universe:
            if type_depth(fun(a, t)) > cfg.type_depth:
                continue
            fs = enumerate_terms(table, ctx, fun(a, t), depth - 1, memo=memo,
                                 universe=universe, max_bindings=max_bindings,
                                 max_ctx=max_ctx)
            if not fs:
                continue
            xs = enumerate_terms(table, ctx, a, depth - 1, memo=memo,
                                 universe=universe, max_bindings=max_bindings,
                                 max_ctx=max_ctx)
            op = table.app(a, t)
            for f in fs:
                for x in xs:
                    out.append(Op(op, ctx, [f, x]))
    memo[key] = out
    return out
