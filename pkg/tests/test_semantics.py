"""Type interpretation, denotation clauses, compatibility, substitution lemma."""

import pytest

from substkit.cbv import (Base, CbvOperatorTable, NAT, config, fun, maybe_shape,
                          parse, parse_value, record, typecheck, variant)
from substkit.semantics import (IdentityMonad, OptionMonad, UnsupportedCapability,
                                check_compatibility, check_sem_action_axioms,
                                check_substitution_lemma_exhaustive,
                                check_substitution_lemma_random, denote,
                                interp_size, interpret_type, model)
from substkit.sorts import Context, second
from substkit.terms import Var

B = Base("b")


def test_interpret_type_spec_examples():
    m = model(OptionMonad(), {"b": 2})
    # empty record: a singleton
    assert interpret_type(record(()), m, 8).size == 1
    # function space: (option over 2)^2 = 9
    assert interpret_type(fun(B, B), m, 8).size == 9
    assert interp_size(fun(B, B), m, 8) == 9
    # the zero/successor variant at bound 3: 1 + 3 = 4
    assert interpret_type(maybe_shape(NAT), m, 3).size == 4
    # labelled product
    assert interpret_type(record((("A", B), ("Z", B))), m, 8).size == 4


def test_variable_denotes_projection():
    cfg = config(())
    m = model(IdentityMonad(), {"b": 2})
    table = CbvOperatorTable(cfg)
    d = denote(Var(Context((B,)), 0), m, cfg, table)
    assert d.table() == ("b0", "b1")


def test_val_under_identity_is_identity():
    cfg = config(())
    m = model(IdentityMonad(), {"b": 3})
    table = CbvOperatorTable(cfg)
    t = typecheck(parse("val x0"), Context((B,)), second(B), cfg, table)
    d = denote(t, m, cfg, table)
    assert d.table() == tuple(p[0] for p in d.space)


@pytest.mark.parametrize("monad_name", ["identity", "option", "exception",
                                        "writer", "state", "powerset"])
def test_let_of_val_collapses(monad_name):
    from substkit.semantics import monad_by_name
    cfg = config(("sequential",))
    m = model(monad_by_name(monad_name), {"b": 2})
    table = CbvOperatorTable(cfg)
    ctx = Context((B,))
    t1 = typecheck(parse("let y = val x0 in val y"), ctx, second(B), cfg, table)
    t2 = typecheck(parse("val x0"), ctx, second(B), cfg, table)
    assert denote(t1, m, cfg, table).same_table(denote(t2, m, cfg, table))


def test_app_beta_on_identity_function():
    cfg = config(("functions",))
    m = model(OptionMonad(), {"b": 2})
    table = CbvOperatorTable(cfg)
    ctx = Context((B,))
    t = typecheck(parse("(val fn y: b . val y) (val x0)"), ctx, second(B),
                  cfg, table)
    d = denote(t, m, cfg, table)
    assert d.table() == tuple(("some", p[0]) for p in d.space)


def test_records_and_variants_evaluate():
    cfg = config(("records", "variants"), ("b",))
    m = model(OptionMonad(), {"b": 2})
    table = CbvOperatorTable(cfg)
    src = ("case (val <A: b, Z: b>.A x0) of "
           "{A u -> val {L = u, R = x0} | Z w -> val {L = w, R = w}}")
    t = typecheck(parse(src), Context((B,)),
                  second(record((("L", B), ("R", B)))), cfg, table)
    d = denote(t, m, cfg, table)
    assert d.at(("b1",)) == ("some", ("b1", "b1"))


def test_roll_overflow_is_absence_under_option():
    cfg = config(("naturals",), nat_bound=2)
    m = model(OptionMonad(), {"b": 2})
    table = CbvOperatorTable(cfg)
    t = typecheck(parse("roll (val <0: {}, 1+: Nat>.1+ 1)"), Context(()),
                  second(NAT), cfg, table)
    assert denote(t, m, cfg, table).at(()) == ("none",)


def test_roll_overflow_errors_without_partiality():
    cfg = config(("naturals",), nat_bound=2)
    m = model(IdentityMonad(), {"b": 2})
    table = CbvOperatorTable(cfg)
    t = typecheck(parse("roll (val <0: {}, 1+: Nat>.1+ 1)"), Context(()),
                  second(NAT), cfg, table)
    with pytest.raises(UnsupportedCapability):
        denote(t, m, cfg, table).at(())


def test_while_requires_elgot_capability():
    cfg = config(("while",))
    m = model(IdentityMonad(), {"b": 2})
    table = CbvOperatorTable(cfg)
    src = "for i = val x0 do val (<Done: b, Cont: b>.Done i)"
    t = typecheck(parse(src), Context((B,)), second(B), cfg, table)
    with pytest.raises(UnsupportedCapability):
        denote(t, m, cfg, table)


def test_sem_action_axioms_both_monads():
    for mon in (IdentityMonad(), OptionMonad()):
        rep = check_sem_action_axioms(model(mon, {"b": 2}),
                                      config(("sequential",)), cap=60)
        assert rep.ok, rep.to_text()


@pytest.mark.parametrize("fragment,exts", [("base", ()),
                                           ("sequential", ("sequential",)),
                                           ("functions", ("functions",))])
def test_compatibility(fragment, exts):
    for mon in (IdentityMonad(), OptionMonad()):
        rep = check_compatibility(fragment, model(mon, {"b": 2}), config(exts))
        assert rep.ok, rep.to_text()


@pytest.mark.parametrize("fragment,exts,fam", [("base", (), "val"),
                                               ("sequential", ("sequential",), "let"),
                                               ("functions", ("functions",), "lam"),
                                               ("functions", ("functions",), "app")])
def test_compatibility_mutations_fail(fragment, exts, fam):
    rep = check_compatibility(fragment, model(OptionMonad(), {"b": 2}),
                              config(exts), corrupt=fam)
    failure = rep.first_failure()
    assert failure is not None and failure.witness


def test_substitution_lemma_exhaustive_small():
    rep = check_substitution_lemma_exhaustive(
        config(("sequential",)), model(OptionMonad(), {"b": 2}))
    assert rep.ok, rep.to_text()


def test_substitution_lemma_random_heavy_fragments():
    m = model(OptionMonad(), {"b": 2})
    for exts in (("naturals", "while"), ("recursion", "records"),
                 ("variants", "naturals", "while", "recursion")):
        cfg = config(exts, ("b",), nat_bound=4)
        rep = check_substitution_lemma_random(cfg, m, seed=11, count=25)
        assert rep.ok, rep.to_text()


def test_lemma_var_and_identity_cases():
    # M = Var x: both sides are the entry's table; identity env: both sides M
    cfg = config(())
    m = model(OptionMonad(), {"b": 2})
    table = CbvOperatorTable(cfg)
    from substkit.semantics.checks import _DenoteCache, _lemma_holds
    from substkit.terms import SubstEnv, identity_env
    ctx = Context((B, B))
    dc = _DenoteCache(m, cfg, table)
    term = typecheck(parse("val x1"), ctx, second(B), cfg, table)
    ok, _ = _lemma_holds(term, identity_env(ctx), dc)
    assert ok
    swap = SubstEnv(ctx, ctx, (Var(ctx, 1), Var(ctx, 0)))
    ok, _ = _lemma_holds(term, swap, dc)
    assert ok


def test_joint_cotupled_compatibility():
    """Compatibility of the cotupled algebra over a multi-fragment config
    agrees with the per-fragment checks: every clause's square passes in the
    joint interpreter too."""
    cfg = config(("sequential", "functions"))
    for mon in (IdentityMonad(), OptionMonad()):
        rep = check_compatibility("joint", model(mon, {"b": 2}), cfg)
        assert rep.ok, rep.to_text()
