"""Term construction, renaming/substitution laws, metavariables, fold, text form."""

import random

import pytest

from conftest import (TOY, all_renamings, random_toy_context, random_toy_env,
                      random_toy_term)
from substkit.sorts import Context, Renaming, compose_renamings, first, identity_renaming, second
from substkit.terms import (HoleDecl, IllSorted, Meta, MetaSubst, Op, SubstEnv,
                            UnknownHole, Var, collect_holes, compose_meta_subst,
                            compose_subst, deserialize, env_of_renaming, fold,
                            identity_env, identity_meta_subst, meta_substitute,
                            rename, serialize, substitute, substitute_direct,
                            MissingAlgebraCase, TermCarrier)


def lam(ctx, body):
    return Op(TOY.op("lam"), ctx, [body])


def val(ctx, v, s="v"):
    return Op(TOY.op(f"val.{s}"), ctx, [v])


def app(ctx, f, a):
    return Op(TOY.op("app"), ctx, [f, a])


def test_smart_constructors_enforce_sorting():
    ctx = Context(["v"])
    with pytest.raises(IllSorted):
        Var(ctx, 1)
    with pytest.raises(IllSorted):
        Op(TOY.op("val.v"), ctx, [Var(ctx, 0), Var(ctx, 0)])
    with pytest.raises(IllSorted):
        Op(TOY.op("val.arrow"), ctx, [Var(ctx, 0)])
    # binder context must be extended on the right
    with pytest.raises(IllSorted):
        Op(TOY.op("lam"), ctx, [val(ctx, Var(ctx, 0))])


def test_rename_identity_law(rng):
    for _ in range(60):
        ctx = random_toy_context(rng)
        t = random_toy_term(rng, ctx, second("v"), 3)
        assert rename(t, identity_renaming(ctx)) == t


def test_permutation_renaming_swaps_positions():
    ctx = Context(["b1", "fn", "fn", "b1"])
    # the toy signature does not know these sorts; the law only needs Var
    rho = Renaming(ctx, ctx, (0, 2, 1, 0))
    assert rename(Var(ctx, 2), rho) == Var(ctx, 1)


def test_rename_composition_law(rng):
    for _ in range(60):
        g1 = random_toy_context(rng)
        g2 = random_toy_context(rng)
        g3 = random_toy_context(rng)
        r1s = list(all_renamings(g1, g2))
        r2s = list(all_renamings(g2, g3))
        if not r1s or not r2s:
            continue
        r1, r2 = rng.choice(r1s), rng.choice(r2s)
        t = random_toy_term(rng, g3, second("v"), 3)
        assert rename(rename(t, r2), r1) == rename(t, compose_renamings(r1, r2))


def test_substitute_var_is_lookup(rng):
    for _ in range(40):
        src = random_toy_context(rng)
        if not len(src):
            continue
        tgt = random_toy_context(rng)
        sigma = random_toy_env(rng, src, tgt)
        i = rng.randrange(len(src))
        assert substitute(Var(src, i), sigma) == sigma.entries[i]


def test_substitute_identity_env(rng):
    for _ in range(60):
        ctx = random_toy_context(rng)
        t = random_toy_term(rng, ctx, second(rng.choice(("v", "arrow"))), 3)
        assert substitute(t, identity_env(ctx)) == t


def test_substitute_under_binder_example():
    # (lam x. f (g x))[f -> h, g -> h] over [h] is lam x. h (h x)
    src = Context(["arrow", "arrow"])
    tgt = Context(["arrow"])

    def body(ctx):
        inner = Context(ctx.entries + ("v",))
        fpos = [i for i, e in enumerate(ctx.entries) if e == "arrow"]
        f = val(inner, Var(inner, fpos[0]), "arrow")
        g = val(inner, Var(inner, fpos[-1]), "arrow")
        x = val(inner, Var(inner, len(ctx)))
        return lam(ctx, app(inner, f, app(inner, g, x)))

    sigma = SubstEnv(src, tgt, (Var(tgt, 0), Var(tgt, 0)))
    assert substitute(body(src), sigma) == body(tgt)


def test_substitution_associativity(rng):
    for _ in range(80):
        g1 = random_toy_context(rng)
        g2 = random_toy_context(rng)
        g3 = random_toy_context(rng)
        t = random_toy_term(rng, g1, second("v"), 3)
        s1 = random_toy_env(rng, g1, g2)
        s2 = random_toy_env(rng, g2, g3)
        assert substitute(substitute(t, s1), s2) == substitute(t, compose_subst(s1, s2))


def test_renaming_factors_through_substitution(rng):
    for _ in range(60):
        g1 = random_toy_context(rng)
        g2 = random_toy_context(rng)
        rhos = list(all_renamings(g1, g2))
        if not rhos:
            continue
        rho = rng.choice(rhos)
        t = random_toy_term(rng, g2, second("v"), 3)
        assert rename(t, rho) == substitute(t, env_of_renaming(rho))


def test_oracle_agreement(rng):
    for _ in range(150):
        g1 = random_toy_context(rng)
        g2 = random_toy_context(rng)
        holes = {}
        t = random_toy_term(rng, g1, second("v"), 4, holes, 0.2)
        sigma = random_toy_env(rng, g1, g2)
        assert substitute(t, sigma) == substitute_direct(t, sigma)


# --- metavariables -----------------------------------------------------------

def holed_corpus(rng, n=60):
    out = []
    for _ in range(n):
        ctx = random_toy_context(rng)
        holes = {}
        t = random_toy_term(rng, ctx, second("v"), 3, holes, 0.4)
        out.append((t, holes))
    return out


def random_meta_subst(rng, holes, hole_prob=0.3):
    new_holes = {}
    mapping = {}
    for ident, h in holes.items():
        body = random_toy_term(rng, h.ctx, h.sort, 2, new_holes, hole_prob)
        mapping[ident] = (h, body)
    return MetaSubst(mapping), new_holes


def test_meta_unit_is_identity(rng):
    for t, holes in holed_corpus(rng):
        assert meta_substitute(t, identity_meta_subst(holes.values())) == t


def test_meta_on_closed_terms(rng):
    for _ in range(20):
        ctx = random_toy_context(rng)
        t = random_toy_term(rng, ctx, second("v"), 3)
        assert meta_substitute(t, MetaSubst({})) == t


def test_meta_kleisli_associativity(rng):
    for t, holes in holed_corpus(rng):
        ms1, mid_holes = random_meta_subst(rng, holes)
        ms2, _ = random_meta_subst(rng, mid_holes, hole_prob=0.0)
        lhs = meta_substitute(meta_substitute(t, ms1), ms2)
        rhs = meta_substitute(t, compose_meta_subst(ms1, ms2))
        assert lhs == rhs


def test_meta_commutes_with_substitution(rng):
    for t, holes in holed_corpus(rng):
        ms, _ = random_meta_subst(rng, holes, hole_prob=0.0)
        tgt = random_toy_context(rng)
        sigma = random_toy_env(rng, t.ctx, tgt)
        assert substitute(meta_substitute(t, ms), sigma) == \
            meta_substitute(substitute(t, sigma), ms)


def test_unknown_hole():
    h = HoleDecl("h", second("v"), Context(()))
    t = Meta(h, Context(()), ())
    with pytest.raises(UnknownHole):
        meta_substitute(t, MetaSubst({}))


def test_collect_holes(rng):
    for t, holes in holed_corpus(rng, 20):
        assert collect_holes(t) == {i: h for i, h in holes.items()
                                    if i in collect_holes(t)}
        assert set(collect_holes(t)) <= set(holes)


# --- fold ---------------------------------------------------------------------

def test_fold_identity_algebra(rng):
    for _ in range(40):
        ctx = random_toy_context(rng)
        holes = {}
        t = random_toy_term(rng, ctx, second("v"), 3, holes, 0.3)
        rebuilt = fold(t, lambda op, vs, c: Op(op, c, vs),
                       lambda h, vs, c: Meta(h, c, vs),
                       identity_env(ctx).entries, ctx, TermCarrier)
        assert rebuilt == t


class _CountCarrier:
    @staticmethod
    def weaken(v, ctx, binder):
        return v

    @staticmethod
    def var(s, ctx, pos):
        return 1


def node_count(t):
    if isinstance(t, Var):
        return 1
    if isinstance(t, Op):
        return 1 + sum(node_count(a) for a in t.args)
    return 1 + sum(node_count(e) for e in t.env)


def test_fold_size_algebra_matches_direct_recursion(rng):
    for _ in range(40):
        ctx = random_toy_context(rng)
        holes = {}
        t = random_toy_term(rng, ctx, second("v"), 3, holes, 0.3)
        size = fold(t, lambda op, vs, c: 1 + sum(vs),
                    lambda h, vs, c: 1 + sum(vs),
                    [1] * len(ctx), ctx, _CountCarrier)
        assert size == node_count(t)


def test_fold_missing_algebra_case():
    ctx = Context(["v"])
    t = val(ctx, Var(ctx, 0))
    with pytest.raises(MissingAlgebraCase):
        fold(t, {"app": lambda op, vs, c: None}, {}, identity_env(ctx).entries,
             ctx, TermCarrier)


# --- canonical text form --------------------------------------------------------

def test_serialize_round_trip(rng):
    for _ in range(80):
        ctx = random_toy_context(rng)
        holes = {}
        t = random_toy_term(rng, ctx, second("v"), 4, holes, 0.25)
        text = serialize(t)
        back = deserialize(text, TOY, t.sort, ctx, holes)
        assert back == t
        assert serialize(back) == text


def test_serialize_shapes():
    ctx = Context(["v"])
    t = val(ctx, Var(ctx, 0))
    assert serialize(t) == "val.v[#0]"
    h = HoleDecl("h0", second("v"), Context(["v"]))
    m = Meta(h, ctx, (Var(ctx, 0),))
    assert serialize(m) == "?h0{#0}"
