"""Operator families: shapes from the typing rules, labels, rule coverage."""

import pytest

from substkit.cbv.ops import CbvOperatorTable, DisabledConstruct, build_operator_table
from substkit.cbv.types import (Base, DepthExceeded, NAT, UNIT, config, fun,
                                maybe_shape, record, variant)
from substkit.sorts import first, second

B = Base("b")


def test_base_fragment_has_only_val():
    table = build_operator_table(config(()))
    ops = table.operators()
    assert {table.family(op)[0] for op in ops} == {"val"}
    val = table.val(B)
    assert val.result_sort == second(B)
    assert val.args[0].sort == first(B) and len(val.args[0].binder) == 0


def test_functions_fragment_shapes():
    table = build_operator_table(config(("functions",)))
    lam = table.lam(B, B)
    assert lam.result_sort == first(fun(B, B))
    assert lam.args[0].binder.entries == (B,)
    assert lam.args[0].sort == second(B)
    app = table.app(B, B)
    assert app.result_sort == second(B)
    assert [a.sort for a in app.args] == [second(fun(B, B)), second(B)]
    assert all(len(a.binder) == 0 for a in app.args)


def test_sequential_staircase_binders():
    table = build_operator_table(config(("sequential",)))
    op = table.let((B, B, B), B)
    assert op.arity == 4
    binders = [a.binder.entries for a in op.args]
    assert binders == [(), (B,), (B, B), (B, B, B)]


def test_record_match_binds_all_fields():
    table = build_operator_table(config(("records",)))
    row = (("A", B), ("B", fun(B, B) if False else B))
    op = table.recmatch(row, B)
    assert op.args[1].binder.entries == (B, B)


def test_variant_match_binds_clause_payloads():
    table = build_operator_table(config(("naturals",), nat_bound=4))
    op = table.vmatch(maybe_shape(NAT).row, NAT)
    assert [a.binder.entries for a in op.args] == [(), (UNIT,), (NAT,)]


def test_natfold_binds_option_of_result():
    table = build_operator_table(config(("naturals",), nat_bound=4))
    op = table.natfold(B if False else NAT)
    assert op.args[1].binder.entries == (maybe_shape(NAT),)


def test_for_binds_state():
    table = build_operator_table(config(("while",)))
    op = table.forloop(B, B)
    assert op.args[1].binder.entries == (B,)


def test_letrec_binders():
    table = build_operator_table(config(("recursion",)))
    op = table.letrec((((B,), B), ((), B)), B)
    f0 = fun(record((("0", B),)), B)
    f1 = fun(record(()), B)
    assert [a.binder.entries for a in op.args] == \
        [(f0, f1, B), (f0, f1), (f0, f1)]
    assert [a.sort for a in op.args] == [second(B), second(B), second(B)]


def test_disabled_constructs():
    table = build_operator_table(config(()))
    for call in (lambda: table.lam(B, B), lambda: table.let((B,), B),
                 lambda: table.rec((("A", B),)), lambda: table.lit(0),
                 lambda: table.forloop(B, B),
                 lambda: table.letrec((((), B),), B)):
        with pytest.raises(DisabledConstruct):
            call()


def test_depth_exceeded():
    table = build_operator_table(config(("functions",), type_depth=2))
    with pytest.raises(DepthExceeded):
        table.lam(fun(B, B), fun(B, B))


def test_label_round_trip_every_family():
    cfg = config(("sequential", "functions", "records", "variants", "naturals",
                  "while", "recursion"), nat_bound=4, type_depth=4)
    table = build_operator_table(cfg)
    ops = [table.val(B), table.let((B,), B), table.lam(B, B), table.app(B, B),
           table.vrec((("A", B),)), table.rec(()), table.recmatch((("A", B),), B),
           table.vinj((("A", B), ("Z", NAT)), "Z"),
           table.inj(maybe_shape(NAT).row, "1+"),
           table.vmatch(maybe_shape(B).row, B), table.lit(3), table.unroll(),
           table.roll(), table.natfold(NAT), table.forloop(NAT, B),
           table.letrec((((B, NAT), B),), NAT)]
    fresh = build_operator_table(cfg)
    for op in ops:
        back = fresh.op(op.label)
        assert back.label == op.label
        assert back.result_sort == op.result_sort
        assert back.args == op.args


EXPECTED_FAMILIES = {
    (): {"val"},
    ("sequential",): {"val", "let"},
    ("functions",): {"val", "lam", "app"},
    ("records",): {"val", "vrec", "rec", "recmatch"},
    ("variants",): {"val", "vinj", "inj", "vmatch"},
    ("naturals",): {"val", "lit", "unroll", "roll", "natfold",
                    "vrec", "rec", "vinj", "inj", "vmatch"},
    ("while",): {"val", "for", "vinj", "inj"},
    ("recursion",): {"val", "letrec", "vrec", "rec", "app"},
}


@pytest.mark.parametrize("exts", sorted(EXPECTED_FAMILIES))
def test_rule_coverage(exts):
    """Operators emitted per fragment cover exactly the typing rules the
    fragment enables (fused donors included), and vice versa."""
    table = build_operator_table(config(exts, nat_bound=4))
    families = {table.family(op)[0] for op in table.operators()}
    assert families == EXPECTED_FAMILIES[exts]
