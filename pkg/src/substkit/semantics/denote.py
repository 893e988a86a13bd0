"""The denotation fold: interpreting generic terms in a strong-monad model.

Each fragment contributes one algebra clause; the environment routing of the
generic fold supplies weakening (pre-composition with the projection) and the
variable interpretation (projections), so the substitution lemma is a theorem
for whatever the clauses do -- provided each clause is compatible, which the
check suites verify.  Unbounded iteration uses Elgot iteration with cycle
detection; recursive definitions take a least fixed point in the flat
pointwise order, both only under the option monad.
"""

from __future__ import annotations

from ..cbv.ops import CbvOperatorTable
from ..cbv.types import FragmentConfig, record
from ..sorts import Context, Renaming, second
from ..terms import fold
from .finset import FinSet
from .model import (Denotation, Model, context_space, identity_sem_env,
                    interpret_type, precompose, projection)
from .monads import NONE, UnsupportedCapability


class NonConvergence(Exception):
    pass


def elgot_iterate(f, x0, monad=None):
    """Iterate ``f : X -> T(Y + X)`` from ``x0`` under the option monad.

    Sum values are ('inl', y) or ('inr', x).  An absent step or a revisited
    state yields the absent value; reaching Y yields its image.  Terminates
    within |X|+1 steps by finiteness.
    """
    seen = set()
    x = x0
    while True:
        if x in seen:
            return NONE
        seen.add(x)
        m = f(x)
        if m == NONE:
            return NONE
        tag, v = m[1]
        if tag == "inl":
            return ("some", v)
        x = v


def elgot_unrolling_oracle(f, x0, unrollings: int):
    """Reference: finitely unroll the loop; absence if the budget runs out."""
    x = x0
    for _ in range(unrollings):
        m = f(x)
        if m == NONE:
            return NONE
        tag, v = m[1]
        if tag == "inl":
            return ("some", v)
        x = v
    return NONE


def kleene_fixpoint(phi, bottom, max_steps: int):
    """Least fixed point by iteration from the bottom of the flat lattice."""
    cur = bottom
    for _ in range(max_steps):
        nxt = phi(cur)
        if nxt == cur:
            return cur
        cur = nxt
    raise NonConvergence(f"no fixed point within {max_steps} steps "
                         f"(non-monotone update?)")


class DenotationCarrier:
    """The pointed-carrier hooks the generic fold needs."""

    def __init__(self, m: Model, nat_bound: int):
        self.m = m
        self.nat_bound = nat_bound

    def weaken(self, d: Denotation, ctx: Context, binder: Context) -> Denotation:
        extended = Context(ctx.entries + binder.entries)
        pi1 = Renaming(extended, ctx, range(len(ctx)))
        return precompose(d, pi1, self.m, self.nat_bound)

    def var(self, sort_ident, ctx: Context, position: int) -> Denotation:
        return projection(ctx, position, self.m, self.nat_bound)


class Interpreter:
    def __init__(self, m: Model, cfg: FragmentConfig, table: CbvOperatorTable,
                 corrupt: str | None = None):
        self.m = m
        self.cfg = cfg
        self.table = table
        self.corrupt = corrupt
        self.carrier = DenotationCarrier(m, cfg.nat_bound)

    # -- small helpers ------------------------------------------------------

    def _space(self, ctx: Context) -> FinSet:
        return context_space(ctx, self.m, self.cfg.nat_bound)

    def _interp(self, t):
        return interpret_type(t, self.m, self.cfg.nat_bound)

    def _den(self, t, ctx, fn) -> Denotation:
        return Denotation(second(t), ctx, self._space(ctx), fn)

    def _require(self, capability: str, feature: str):
        if not self.m.capabilities[capability]:
            raise UnsupportedCapability(feature, self.m.monad)

    # -- the algebra --------------------------------------------------------

    def alg(self, op, values, ctx):
        family, params = self.table.family(op)
        out = getattr(self, f"_alg_{family}")(op, params, values, ctx)
        if self.corrupt == family:
            # deliberately wrong clause: answer as if at a fixed context point
            fixed = self._space(ctx).first()
            broken = Denotation(out.sort, out.ctx, out.space,
                                lambda point: out.at(fixed))
            return broken
        return out

    def _alg_val(self, op, params, values, ctx):
        (t,) = params
        unit = self.m.monad.unit
        d = values[0]
        return self._den(t, ctx, lambda p: unit(d.at(p)))

    def _alg_let(self, op, params, values, ctx):
        bound, result = params
        monad = self.m.monad
        *ds, body = values

        def fn(point):
            m = monad.tmap(lambda v: (v,), ds[0].at(point))
            for d in ds[1:]:
                m = monad.bind(
                    lambda g, delta, d=d: monad.tmap(lambda y: delta + (y,),
                                                     d.at(g + delta)),
                    point, m)
            return monad.bind(lambda g, delta: body.at(g + delta), point, m)

        return self._den(result, ctx, fn)

    def _alg_lam(self, op, params, values, ctx):
        dom, cod = params
        d = values[0]
        dom_set = self._interp(dom)
        fn = lambda p: tuple(d.at(p + (v,)) for v in dom_set)
        return Denotation(op.result_sort, ctx, self._space(ctx), fn)

    def _alg_app(self, op, params, values, ctx):
        dom, cod = params
        monad = self.m.monad
        f, a = values
        dom_set = self._interp(dom)

        def fn(point):
            return monad.bind(
                lambda g, phi: monad.bind(
                    lambda phi2, v: phi2[dom_set.index(v)], phi, a.at(g)),
                point, f.at(point))

        return self._den(cod, ctx, fn)

    def _alg_vrec(self, op, params, values, ctx):
        fn = lambda p: tuple(d.at(p) for d in values)
        return Denotation(op.result_sort, ctx, self._space(ctx), fn)

    def _alg_rec(self, op, params, values, ctx):
        (t,) = params
        monad = self.m.monad

        def fn(point):
            m = monad.unit(())
            for d in values:
                m = monad.bind(
                    lambda g, acc, d=d: monad.tmap(lambda y: acc + (y,),
                                                   d.at(g)),
                    point, m)
            return m

        return self._den(t, ctx, fn)

    def _alg_recmatch(self, op, params, values, ctx):
        t, result = params
        monad = self.m.monad
        scrut, body = values
        fn = lambda p: monad.bind(lambda g, rec: body.at(g + rec), p,
                                  scrut.at(p))
        return self._den(result, ctx, fn)

    def _alg_vinj(self, op, params, values, ctx):
        t, tag = params
        d = values[0]
        return Denotation(op.result_sort, ctx, self._space(ctx),
                          lambda p: (tag, d.at(p)))

    def _alg_inj(self, op, params, values, ctx):
        t, tag = params
        monad = self.m.monad
        d = values[0]
        return self._den(t, ctx,
                         lambda p: monad.tmap(lambda v: (tag, v), d.at(p)))

    def _alg_vmatch(self, op, params, values, ctx):
        t, result = params
        monad = self.m.monad
        scrut, *bodies = values
        by_tag = {tag: body for (tag, _), body in zip(t.row, bodies)}

        def fn(point):
            return monad.bind(
                lambda g, tv: by_tag[tv[0]].at(g + (tv[1],)), point,
                scrut.at(point))

        return self._den(result, ctx, fn)

    def _alg_lit(self, op, params, values, ctx):
        (n,) = params
        return Denotation(op.result_sort, ctx, self._space(ctx), lambda p: n)

    def _alg_unroll(self, op, params, values, ctx):
        monad = self.m.monad
        d = values[0]
        conv = lambda n: ("0", ()) if n == 0 else ("1+", n - 1)
        return Denotation(op.result_sort, ctx, self._space(ctx),
                          lambda p: monad.tmap(conv, d.at(p)))

    def _alg_roll(self, op, params, values, ctx):
        monad = self.m.monad
        bound = self.cfg.nat_bound
        d = values[0]

        def step(g, tv):
            tag, v = tv
            if tag == "0":
                return monad.unit(0)
            if v + 1 < bound:
                return monad.unit(v + 1)
            return monad.failure()

        return Denotation(op.result_sort, ctx, self._space(ctx),
                          lambda p: monad.bind(step, None, d.at(p)))

    def _alg_natfold(self, op, params, values, ctx):
        (result,) = params
        monad = self.m.monad
        scrut, body = values

        def fn(point):
            acc = body.at(point + (("0", ()),))
            results = [acc]
            for _ in range(self.cfg.nat_bound - 1):
                acc = monad.bind(
                    lambda g, prev: body.at(g + (("1+", prev),)), point, acc)
                results.append(acc)
            return monad.bind(lambda g, n: results[n], point, scrut.at(point))

        return self._den(result, ctx, fn)

    def _alg_for(self, op, params, values, ctx):
        state, result = params
        self._require("elgot", "unbounded iteration")
        monad = self.m.monad
        init, body = values
        conv = lambda tv: ("inl", tv[1]) if tv[0] == "Done" else ("inr", tv[1])

        def fn(point):
            step = lambda v: monad.tmap(conv, body.at(point + (v,)))
            return monad.bind(lambda g, v0: elgot_iterate(step, v0), point,
                              init.at(point))

        return self._den(result, ctx, fn)

    def _alg_letrec(self, op, params, values, ctx):
        defs, result = params
        self._require("fixpoints", "recursive definitions")
        monad = self.m.monad
        *bodies, main = values
        dom_sets = []
        perms = []
        for ps, ret in defs:
            row = record(tuple((str(i), p) for i, p in enumerate(ps))).row
            labels = [l for l, _ in row]
            perms.append([labels.index(str(j)) for j in range(len(ps))])
            dom_sets.append(self._interp(record(row)))

        def fn(point):
            bottoms = tuple(tuple(NONE for _ in range(ds.size))
                            for ds in dom_sets)

            def phi(phis):
                out = []
                for i, (body, ds, perm) in enumerate(zip(bodies, dom_sets, perms)):
                    rowvals = []
                    for args in ds:
                        pvals = tuple(args[k] for k in perm)
                        rowvals.append(body.at(point + phis + pvals))
                    out.append(tuple(rowvals))
                return tuple(out)

            height = sum(ds.size for ds in dom_sets) + 2
            fix = kleene_fixpoint(phi, bottoms, height * 4 + 4)
            return main.at(point + fix)

        return self._den(result, ctx, fn)

    def _alg_hole(self, hole, values, ctx):
        raise ValueError("terms with holes have no denotation")


def denote(t, m: Model, cfg: FragmentConfig, table: CbvOperatorTable,
           corrupt: str | None = None) -> Denotation:
    """Interpret a well-sorted term over its ambient context."""
    interp = Interpreter(m, cfg, table, corrupt)
    env = identity_sem_env(t.ctx, m, cfg.nat_bound)
    return fold(t, interp.alg, interp._alg_hole, env, t.ctx, interp.carrier)
