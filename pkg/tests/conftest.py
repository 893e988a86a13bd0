"""Shared toy signature and random-term helpers for the core test suites."""

import itertools
import random

import pytest

from substkit.signatures import Argument, Operator, OperatorTable
from substkit.sorts import Context, Renaming, SortingSystem, first, second
from substkit.terms import HoleDecl, Meta, Op, SubstEnv, Var

# A miniature two-sort calculus: values and computations at sorts v (base)
# and arrow (functions), enough to exercise binders, permutation, weakening.
TOY_SYS = SortingSystem(("v", "arrow"), ("v", "arrow"))


def toy_table() -> OperatorTable:
    t = OperatorTable(TOY_SYS)
    for s in ("v", "arrow"):
        t.add(Operator(f"val.{s}", second(s), (Argument(Context(()), first(s)),)))
    t.add(Operator("lam", first("arrow"), (Argument(Context(["v"]), second("v")),)))
    t.add(Operator("app", second("v"),
                   (Argument(Context(()), second("arrow")),
                    Argument(Context(()), second("v")))))
    t.add(Operator("let", second("v"),
                   (Argument(Context(()), second("v")),
                    Argument(Context(["v"]), second("v")))))
    return t


TOY = toy_table()


def all_renamings(src: Context, tgt: Context):
    pools = [[i for i, e in enumerate(src.entries) if e == s] for s in tgt.entries]
    for mapping in itertools.product(*pools):
        yield Renaming(src, tgt, mapping)


def contexts_upto(sorts, n):
    out = []
    for k in range(n + 1):
        out.extend(Context(c) for c in itertools.product(sorts, repeat=k))
    return out


def random_toy_term(rng: random.Random, ctx: Context, sort, depth: int,
                    holes=None, hole_prob=0.0):
    """A random well-sorted toy term; ``holes`` is a mutable ident->HoleDecl map."""
    if holes is not None and rng.random() < hole_prob and depth > 0:
        # hole contexts keep a base-sorted entry so bodies are always buildable
        pool = ["v", *ctx.entries]
        hctx = Context(["v"] + [rng.choice(pool) for _ in range(rng.randrange(2))])
        ident = f"h{len(holes)}_{rng.randrange(1000)}"
        hole = HoleDecl(ident, sort, hctx)
        holes[ident] = hole
        env = [random_toy_term(rng, ctx, first(s), max(depth - 1, 0), holes, hole_prob / 2)
               for s in hctx.entries]
        return Meta(hole, ctx, env)
    if sort.is_first:
        positions = [i for i, e in enumerate(ctx.entries) if e == sort.ident]
        if sort.ident == "arrow" and (not positions or (depth > 0 and rng.random() < 0.6)):
            inner = Context(ctx.entries + ("v",))
            body = random_toy_term(rng, inner, second("v"), max(depth - 1, 0),
                                   holes, hole_prob)
            return Op(TOY.op("lam"), ctx, [body])
        if not positions:
            raise RuntimeError(f"no value of sort {sort.ident!r} in {ctx!r}")
        return Var(ctx, rng.choice(positions))
    # second-class sorts
    choices = ["val"]
    if depth > 0 and sort.ident == "v":
        choices += ["app", "let"]
    pick = rng.choice(choices)
    if pick == "app":
        f = random_toy_term(rng, ctx, second("arrow"), depth - 1, holes, hole_prob)
        a = random_toy_term(rng, ctx, second("v"), depth - 1, holes, hole_prob)
        return Op(TOY.op("app"), ctx, [f, a])
    if pick == "let":
        bound = random_toy_term(rng, ctx, second("v"), depth - 1, holes, hole_prob)
        inner = Context(ctx.entries + ("v",))
        body = random_toy_term(rng, inner, second("v"), depth - 1, holes, hole_prob)
        return Op(TOY.op("let"), ctx, [bound, body])
    v = random_toy_term(rng, ctx, first(sort.ident), max(depth - 1, 0), holes, hole_prob)
    return Op(TOY.op(f"val.{sort.ident}"), ctx, [v])


def random_toy_env(rng: random.Random, source: Context, target: Context,
                   depth=2) -> SubstEnv:
    entries = [random_toy_term(rng, target, first(s), depth) for s in source.entries]
    return SubstEnv(source, target, entries)


def random_toy_context(rng: random.Random, max_len=3) -> Context:
    # always keep one base-sorted variable in scope so every toy sort is inhabited
    extra = [rng.choice(("v", "arrow")) for _ in range(rng.randrange(max_len))]
    entries = ["v"] + extra
    rng.shuffle(entries)
    return Context(entries)


@pytest.fixture
def rng():
    return random.Random(20240811)
