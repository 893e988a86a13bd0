"""Finite-set strong-monad models: type interpretation and denotation tables.

Types denote finite sets (functions as Kleisli exponentials), contexts denote
products, and a term of a first-class sort denotes a function from the context
product, a term of a second-class sort a Kleisli map into the monad.
Denotations are memoized query functions; comparisons materialize them over
the full enumeration of their (small) context space.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..sorts import Context, Renaming, Sort
from ..cbv.types import Base, Fun, NatType, Record, TypeExpr, Variant
from .finset import FinSet, FunSpace, product_space
from .monads import StrongMonad


@dataclass(frozen=True)
class Model:
    base_interp: dict
    monad: StrongMonad

    @property
    def capabilities(self) -> dict:
        return {"kleisli_exponentials": True,
                "elgot": self.monad.elgot_capable,
                "fixpoints": self.monad.fixpoint_capable}

    def __hash__(self):
        return hash((id(self.monad), tuple(sorted(self.base_interp))))


def model(monad: StrongMonad, sizes: dict | None = None) -> Model:
    sizes = sizes if sizes is not None else {"b": 2}
    interp = {name: FinSet([f"{name}{i}" for i in range(n)])
              for name, n in sizes.items()}
    return Model(interp, monad)


@lru_cache(maxsize=None)
def _interp(t: TypeExpr, m: Model, nat_bound: int):
    if isinstance(t, Base):
        return m.base_interp[t.name]
    if isinstance(t, NatType):
        return FinSet(range(nat_bound))
    if isinstance(t, Fun):
        dom = _interp(t.dom, m, nat_bound)
        cod = m.monad.apply(_interp(t.cod, m, nat_bound))
        return FunSpace(dom, cod)
    if isinstance(t, Record):
        return FinSet(
            tuple(vs)
            for vs in _product([_interp(v, m, nat_bound) for _, v in t.row]))
    if isinstance(t, Variant):
        return FinSet((l, v) for l, vt in t.row
                      for v in _interp(vt, m, nat_bound))
    raise ValueError(f"uninterpretable type {t!r}")


def _product(sets):
    import itertools
    return itertools.product(*[tuple(s) for s in sets])


def interpret_type(t: TypeExpr, m: Model, nat_bound: int):
    return _interp(t, m, nat_bound)


def interp_size(t: TypeExpr, m: Model, nat_bound: int) -> int:
    """Cardinality of the interpretation, computed without materializing."""
    if isinstance(t, Base):
        return m.base_interp[t.name].size
    if isinstance(t, NatType):
        return nat_bound
    if isinstance(t, Fun):
        return m.monad.apply_size(interp_size(t.cod, m, nat_bound)) \
            ** interp_size(t.dom, m, nat_bound)
    if isinstance(t, Record):
        out = 1
        for _, v in t.row:
            out *= interp_size(v, m, nat_bound)
        return out
    if isinstance(t, Variant):
        return sum(interp_size(v, m, nat_bound) for _, v in t.row)
    raise ValueError(f"uninterpretable type {t!r}")


def context_space(ctx: Context, m: Model, nat_bound: int) -> FinSet:
    return product_space([interpret_type(t, m, nat_bound) for t in ctx.entries])


class Denotation:
    """A context-indexed table, stored as a memoized query function."""

    __slots__ = ("sort", "ctx", "space", "_fn", "_memo")

    def __init__(self, sort: Sort, ctx: Context, space: FinSet, fn):
        self.sort = sort
        self.ctx = ctx
        self.space = space
        self._fn = fn
        self._memo = {}

    def at(self, point: tuple):
        try:
            return self._memo[point]
        except KeyError:
            got = self._fn(point)
            self._memo[point] = got
            return got

    def table(self) -> tuple:
        return tuple(self.at(p) for p in self.space)

    def same_table(self, other: "Denotation") -> bool:
        return (self.ctx == other.ctx and self.sort == other.sort
                and self.table() == other.table())

    def difference_witness(self, other: "Denotation"):
        for p in self.space:
            if self.at(p) != other.at(p):
                return p, self.at(p), other.at(p)
        return None

    def __repr__(self):
        return f"Denotation({self.sort!r} over {self.ctx!r})"


def projection(ctx: Context, pos: int, m: Model, nat_bound: int) -> Denotation:
    """The unit of the semantic substitution structure: project a component."""
    from ..sorts import first
    return Denotation(first(ctx.sort_at(pos)), ctx,
                      context_space(ctx, m, nat_bound),
                      lambda point: point[pos])


def precompose(d: Denotation, rho: Renaming, m: Model, nat_bound: int) -> Denotation:
    """The renaming action: reindex the input point along the renaming."""
    if d.ctx != rho.target:
        raise ValueError("renaming does not match the denotation's context")
    space = context_space(rho.source, m, nat_bound)
    return Denotation(d.sort, rho.source, space,
                      lambda point: d.at(tuple(point[rho.mapping[y]]
                                               for y in range(len(rho.target)))))


def subst_denotation(d: Denotation, env: list, m: Model, nat_bound: int,
                     target: Context | None = None) -> Denotation:
    """Semantic substitution is pre-composition with the tupled environment."""
    if len(env) != len(d.ctx):
        raise ValueError("environment does not cover the context")
    if target is None:
        target = env[0].ctx if env else Context(())
    for e in env:
        if e.ctx != target:
            raise ValueError("environment entries over different contexts")
    space = context_space(target, m, nat_bound)
    return Denotation(d.sort, target, space,
                      lambda point: d.at(tuple(e.at(point) for e in env)))


def identity_sem_env(ctx: Context, m: Model, nat_bound: int) -> list:
    return [projection(ctx, i, m, nat_bound) for i in range(len(ctx))]
