"""Bidirectional elaboration: rule examples, diagnostics, determinism."""

import pytest

from substkit.cbv import (ArityMismatch, Base, CbvOperatorTable, DisabledConstruct,
                          NAT, SortMismatch, UnknownVariable, config, fun,
                          maybe_shape, parse, parse_value, synthesize, typecheck)
from substkit.cbv.gen import TermGen
from substkit.sorts import Context, first, second
from substkit.terms import Op, Var, serialize

B = Base("b")


def test_variable_rule():
    cfg = config(())
    t = typecheck(parse_value("x0"), Context((B,)), first(B), cfg)
    assert t == Var(Context((B,)), 0)


def test_val_rule():
    cfg = config(())
    t = typecheck(parse("val x0"), Context((B,)), second(B), cfg)
    assert serialize(t) == "val<b>[#0]"


def test_abstraction_rule():
    cfg = config(("functions",))
    t = typecheck(parse_value("fn x: b . val x"), Context((B,)),
                  first(fun(B, B)), cfg)
    assert serialize(t) == "lam<b;b>[val<b>[#1]]"


def test_unknown_variable():
    with pytest.raises(UnknownVariable):
        typecheck(parse("val nope"), Context(()), second(B), config(()))


def test_sort_mismatch_reports_both_sides():
    cfg = config(("functions",))
    with pytest.raises(SortMismatch) as info:
        typecheck(parse("val x0"), Context((fun(B, B),)), second(B), cfg)
    assert "expected" in str(info.value) and "position" in str(info.value)


def test_disabled_construct():
    with pytest.raises(DisabledConstruct):
        typecheck(parse("let y = val x0 in val y"), Context((B,)), second(B),
                  config(()))


def test_arity_mismatch_on_patterns():
    cfg = config(("records",))
    src = "case (val {A = x0}) of {A = u, B = w} in val u"
    with pytest.raises(ArityMismatch):
        typecheck(parse(src), Context((B,)), second(B), cfg)


def test_fold_requires_checking_context():
    cfg = config(("naturals",), nat_bound=4)
    with pytest.raises(SortMismatch):
        synthesize(parse("fold (val 1) a . val 0"), Context(()), cfg)
    t = typecheck(parse("fold (val 1) a . val 0"), Context(()), second(NAT), cfg)
    assert t.op.label == "natfold<Nat>"


def test_shadowing_resolves_to_nearest():
    cfg = config(("sequential",))
    src = "let x0 = val x0 in val x0"
    t = typecheck(parse(src), Context((B,)), second(B), cfg)
    # the body's x0 is the let-bound one at position 1
    assert serialize(t) == "let<b;b>[val<b>[#0],val<b>[#1]]"


def test_typechecking_deterministic():
    cfg = config(("sequential", "functions"))
    src = "let f = val (fn y: b . val y) in (val f) (val x0)"
    ctx = Context((B,))
    a = typecheck(parse(src), ctx, second(B), cfg)
    b = typecheck(parse(src), ctx, second(B), cfg)
    assert a == b


def test_fragment_monotonicity():
    """A term typable in a config stays typable when extensions are added."""
    import random
    from substkit.cbv import all_fragment_configs, EXTENSIONS, pretty
    rng = random.Random(4)
    for cfg in all_fragment_configs(("b",), nat_bound=4)[::12]:
        table = CbvOperatorTable(cfg)
        gen = TermGen(cfg, table, rng)
        ctx = gen.random_context(2)
        target = gen.random_target(ctx)
        term = (gen.random_value(ctx, target.ident, 3) if target.is_first
                else gen.random_term(ctx, target.ident, 3))
        missing = [e for e in EXTENSIONS if not cfg.has(e)]
        if not missing:
            continue
        bigger = config(tuple(cfg.extensions) + (rng.choice(missing),),
                        cfg.base_types, cfg.nat_bound, cfg.type_depth)
        text = pretty(term, table)
        from substkit.cbv import parse as p, parse_value as pv
        surface = pv(text) if target.is_first else p(text)
        again = typecheck(surface, ctx, target, bigger)
        assert serialize(again) == serialize(term)
