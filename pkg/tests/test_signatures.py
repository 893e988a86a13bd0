"""Operator tables, flattening, and the environment-routing strength."""

import pytest

from substkit.signatures import (Argument, At, Coproduct, Hole, NotFlattenable,
                                 OnlyAt, Operator, OperatorTable, Product,
                                 Restrict, Shift, flatten, strength_route)
from substkit.sorts import Context, SortingSystem, first, second
from substkit.terms import TermCarrier, Var, identity_env

SYS = SortingSystem(("v", "arrow"), ("v", "arrow"))

ABS_SIG = Coproduct(((
    "lam",
    OnlyAt(first("arrow"), At(second("v"), Shift(Context(["v"]), Hole()))),
),))

VAL_SIG = Coproduct((("val", OnlyAt(second("v"), At(first("v"), Hole()))),))

APP_SIG = Coproduct(((
    "app",
    OnlyAt(second("v"), Product((At(second("arrow"), Hole()),
                                 At(second("v"), Hole())))),
),))


def test_flatten_abstraction():
    table = flatten(ABS_SIG, SYS)
    op = table.op("lam")
    assert op.result_sort == first("arrow")
    assert op.args == (Argument(Context(["v"]), second("v")),)


def test_flatten_value_inclusion():
    op = flatten(VAL_SIG, SYS).op("val")
    assert op.result_sort == second("v")
    assert op.args == (Argument(Context(()), first("v")),)


def test_flatten_coproduct_union():
    table = flatten(Coproduct((ABS_SIG, VAL_SIG)), SYS)
    assert {op.label for op in table} == {"lam", "val"}


def test_flatten_reassociation_stable():
    left = flatten(Coproduct((Coproduct((ABS_SIG, VAL_SIG)), APP_SIG)), SYS)
    right = flatten(Coproduct((ABS_SIG, Coproduct((VAL_SIG, APP_SIG)))), SYS)
    key = lambda t: sorted((op.label, op.result_sort, op.args) for op in t)
    assert key(left) == key(right)


def test_flatten_rejects_restrict():
    bad = Coproduct((("r", OnlyAt(second("v"), Restrict("tag", Hole()))),))
    with pytest.raises(NotFlattenable) as info:
        flatten(bad, SYS)
    assert "Restrict" in str(info.value)


def test_flatten_rejects_bad_summand():
    with pytest.raises(NotFlattenable):
        flatten(Coproduct((("x", Product((Hole(),))),)), SYS)


def test_duplicate_labels_rejected():
    with pytest.raises(ValueError):
        flatten(Coproduct((VAL_SIG, VAL_SIG)), SYS)


def test_strength_empty_binder_is_identity():
    table = flatten(APP_SIG, SYS)
    ctx = Context(["v", "v"])
    env = list(identity_env(ctx).entries)
    new_ctx, routed = strength_route(table.op("app"), 0, ctx, env, TermCarrier)
    assert new_ctx == ctx and routed == env


def test_strength_routes_binder():
    table = flatten(ABS_SIG, SYS)
    ctx = Context(["v"])
    env = [Var(ctx, 0)]
    new_ctx, routed = strength_route(table.op("lam"), 0, ctx, env, TermCarrier)
    assert new_ctx.entries == ("v", "v")
    assert routed == [Var(new_ctx, 0), Var(new_ctx, 1)]


def test_identity_environment_routes_to_identity():
    # For the term carrier, routing the variable environment under any binder
    # yields the variable environment of the extended context.
    table = flatten(ABS_SIG, SYS)
    for entries in ((), ("v",), ("v", "arrow"), ("arrow", "v")):
        ctx = Context(entries)
        env = list(identity_env(ctx).entries)
        new_ctx, routed = strength_route(table.op("lam"), 0, ctx, env, TermCarrier)
        assert routed == list(identity_env(new_ctx).entries)


def test_table_resolver():
    def resolve(label):
        if label.startswith("val@"):
            return Operator(label, second(label[4:]), (Argument(Context(()), first(label[4:])),))
        return None

    table = OperatorTable(SYS, resolver=resolve)
    assert table.op("val@v").result_sort == second("v")
    with pytest.raises(KeyError):
        table.op("nope")
