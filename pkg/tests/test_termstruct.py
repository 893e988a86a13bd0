"""The term structure as a finite presheaf and its coend identifications."""

import random

from substkit.finpresheaf import tensor
from substkit.finpresheaf.structures import (enumerate_envs, enumerate_renamings,
                                             reindex_env)
from substkit.termstruct import cbv_term_structure, motivating_identifications


def test_term_structure_is_functorial():
    P, Q, _ = cbv_term_structure()
    P.validate()
    Q.validate()


def test_three_identifications_merge():
    P, Q, table = cbv_term_structure()
    t = tensor(P, Q)
    for s, amb, left, right in motivating_identifications(table):
        assert t.class_of(s, amb, left) == t.class_of(s, amb, right)


def test_random_generator_pairs_on_term_structure():
    P, Q, _ = cbv_term_structure()
    t = tensor(P, Q)
    rng = random.Random(12)
    ctxs = P.contexts()
    confirmed = 0
    while confirmed < 120:
        g1, g2, amb = (rng.choice(ctxs) for _ in range(3))
        rhos = enumerate_renamings(g1, g2)
        s = rng.choice(P.sorts)
        if not rhos or not P.cell(s, g2):
            continue
        envs = list(enumerate_envs(Q, g1, amb))
        if not envs:
            continue
        rho = rng.choice(rhos)
        elem = rng.choice(P.cell(s, g2))
        env = rng.choice(envs)
        left = (g1.entries, P.act(s, rho, elem), env)
        right = (g2.entries, elem, reindex_env(env, rho))
        assert t.class_of(s, amb, left) == t.class_of(s, amb, right)
        confirmed += 1


def test_quotient_agrees_with_substitution():
    """Triples in one class substitute to the same term: the tensor's classes
    realize exactly the pairing that substitution consumes."""
    from substkit.sorts import Context
    from substkit.terms import SubstEnv, substitute

    _, _, table = cbv_term_structure()
    for s, amb, left, right in motivating_identifications(table):
        results = []
        for gp_entries, term, env in (left, right):
            gp = Context(gp_entries)
            results.append(substitute(term, SubstEnv(gp, amb, env)))
        assert results[0] == results[1]


def test_seed_contexts_must_fit_the_bound():
    import pytest

    with pytest.raises(ValueError):
        cbv_term_structure(bound=1)
