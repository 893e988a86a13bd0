"""Elgot iteration, bounded unrolling, Kleene fixed points, letrec references."""

import pytest

from substkit.semantics.checks import (check_elgot_against_unrolling,
                                       check_kleene_properties,
                                       check_letrec_references, model_option)
from substkit.semantics.denote import (NonConvergence, elgot_iterate,
                                       elgot_unrolling_oracle, kleene_fixpoint)
from substkit.semantics.monads import NONE


def some(v):
    return ("some", v)


def test_elgot_immediate_exit():
    f = lambda x: some(("inl", "done"))
    assert elgot_iterate(f, 0) == some("done")


def test_elgot_self_loop_detected():
    f = lambda x: some(("inr", x))
    assert elgot_iterate(f, 0) == NONE


def test_elgot_absent_step():
    assert elgot_iterate(lambda x: NONE, 0) == NONE


def test_elgot_countdown_matches_oracle():
    # three-state countdown reaching the answer at state 0
    def f(x):
        return some(("inl", "hit")) if x == 0 else some(("inr", x - 1))

    for start in range(3):
        assert elgot_iterate(f, start) == \
            elgot_unrolling_oracle(f, start, 4) == some("hit")


def test_elgot_random_programs_against_unrolling():
    rep = check_elgot_against_unrolling(model_option(), seed=17, count=60)
    assert rep.ok, rep.to_text()


def test_kleene_identity_map_stays_at_bottom():
    assert kleene_fixpoint(lambda t: t, (NONE, NONE), 4) == (NONE, NONE)


def test_kleene_nonconvergence():
    flip = {NONE: some(0), some(0): NONE}
    with pytest.raises(NonConvergence):
        kleene_fixpoint(lambda t: (flip[t[0]],), (NONE,), 6)


def test_kleene_properties_suite():
    rep = check_kleene_properties(23)
    assert rep.ok, rep.to_text()


def test_letrec_reference_evaluators():
    rep = check_letrec_references()
    assert rep.ok, rep.to_text()
