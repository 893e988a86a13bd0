"""Binding signatures and the environment-routing strength.

An operator table is the flattened form of a signature: each operator has a
result sort and a list of binder-annotated argument sorts.  The table carries
the one piece of structure every traversal needs, the pointed strength: how to
push an environment under an operator's binders.  Per-combinator strengths are
not separate artifacts; after flattening they all collapse into the single
routing rule implemented by :func:`strength_route` (weaken the environment
into the extended context, then append the fresh variables' images).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Protocol, Sequence

from .sorts import Context, Sort, SortingSystem, concat_contexts


class NotFlattenable(Exception):
    """A signature expression outside the coproduct-of-operators normal form."""


class UnknownOperator(KeyError):
    pass


@dataclass(frozen=True)
class Argument:
    binder: Context
    sort: Sort


@dataclass(frozen=True)
class Operator:
    label: str
    result_sort: Sort
    args: tuple[Argument, ...]

    @property
    def arity(self) -> int:
        return len(self.args)

    def __repr__(self):
        return f"Operator({self.label!r})"


class OperatorTable:
    """A label-indexed set of operators over one sorting system.

    Tables may describe infinite operator families (one operator per type
    instance): a ``resolver`` callback materializes such operators on demand
    from their label.  Union of tables requires disjoint labels.
    """

    def __init__(self, system: SortingSystem, ops: Iterable[Operator] = (),
                 resolver: Callable[[str], Operator] | None = None):
        self.system = system
        self._by_label: dict[str, Operator] = {}
        self._resolver = resolver
        for op in ops:
            self.add(op)

    def add(self, op: Operator) -> None:
        if op.label in self._by_label:
            raise ValueError(f"duplicate operator label {op.label!r}")
        if op.result_sort not in self.system:
            raise ValueError(f"result sort {op.result_sort!r} not in system")
        for arg in op.args:
            if arg.sort not in self.system:
                raise ValueError(f"argument sort {arg.sort!r} not in system")
            arg.binder.validate(self.system)
        self._by_label[op.label] = op

    def op(self, label: str) -> Operator:
        got = self._by_label.get(label)
        if got is None and self._resolver is not None:
            got = self._resolver(label)
            if got is not None:
                self._by_label[label] = got
        if got is None:
            raise UnknownOperator(label)
        return got

    def __iter__(self):
        return iter(self._by_label.values())

    def __len__(self):
        return len(self._by_label)

    def __contains__(self, label: str) -> bool:
        return label in self._by_label

    def union(self, other: "OperatorTable") -> "OperatorTable":
        merged = OperatorTable(self.system, self)
        for op in other:
            merged.add(op)
        return merged

    def to_records(self) -> list[dict]:
        return [{"label": op.label,
                 "result": repr(op.result_sort),
                 "args": [{"binder": [repr(e) for e in a.binder.entries],
                           "sort": repr(a.sort)} for a in op.args]}
                for op in self]


# --- signature combinator expressions -------------------------------------
#
# Only the normal form used by binding signatures flattens: a coproduct of
# OnlyAt-wrapped products of (possibly shifted) projections of the recursion
# variable.  Restrict and non-normal nestings are representable but rejected
# by flatten with a pointer at the offending subterm.

@dataclass(frozen=True)
class Hole:
    pass


@dataclass(frozen=True)
class At:
    sort: Sort
    inner: object


@dataclass(frozen=True)
class OnlyAt:
    sort: Sort
    inner: object


@dataclass(frozen=True)
class Shift:
    binder: Context
    inner: object


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class Coproduct:
    summands: tuple  # of (label, expr) pairs


@dataclass(frozen=True)
class Restrict:
    along: object
    inner: object


def _flatten_atom(expr) -> Argument:
    if isinstance(expr, At):
        body = expr.inner
        if isinstance(body, Hole):
            return Argument(Context(()), expr.sort)
        if isinstance(body, Shift) and isinstance(body.inner, Hole):
            return Argument(body.binder, expr.sort)
    raise NotFlattenable(f"argument not of the form (shift? hole) at a sort: {expr!r}")


def _flatten_summand(label, expr, table: OperatorTable) -> None:
    if not isinstance(expr, OnlyAt):
        raise NotFlattenable(f"summand {label!r} is not OnlyAt-wrapped: {expr!r}")
    body = expr.inner
    factors = body.factors if isinstance(body, Product) else (body,)
    args = tuple(_flatten_atom(f) for f in factors)
    table.add(Operator(label, expr.sort, args))


def flatten(expr, system: SortingSystem) -> OperatorTable:
    """Flatten a normal-form signature expression into an operator table."""
    table = OperatorTable(system)
    stack = [expr]
    while stack:
        e = stack.pop()
        if isinstance(e, Coproduct):
            stack.extend(reversed(e.summands))
        elif isinstance(e, tuple) and len(e) == 2:
            _flatten_summand(e[0], e[1], table)
        elif isinstance(e, Restrict):
            raise NotFlattenable(f"restriction is not flattenable: {e!r}")
        else:
            raise NotFlattenable(f"not a labelled summand: {e!r}")
    return table


# --- the generic pointed strength ------------------------------------------

class PointedHooks(Protocol):
    """What a carrier must provide for environments to be routed under binders.

    ``weaken`` moves a carrier element from ``ctx`` to ``ctx ++ binder`` (the
    action along the first projection renaming); ``var`` is the carrier's
    interpretation of the variable at ``position`` in ``ctx``.
    """

    def weaken(self, value, ctx: Context, binder: Context): ...

    def var(self, sort_ident: Hashable, ctx: Context, position: int): ...


def route_environment(binder: Context, ctx: Context, env: Sequence,
                      hooks: PointedHooks) -> tuple[Context, list]:
    """Push an environment over ``ctx`` under a binder.

    Every existing entry is weakened into ``ctx ++ binder`` and the fresh
    positions are bound to their own variable images.  An empty binder leaves
    the environment untouched.
    """
    if not len(binder):
        return ctx, list(env)
    extended, _, _ = concat_contexts(ctx, binder)
    routed = [hooks.weaken(v, ctx, binder) for v in env]
    base = len(ctx)
    for j, s in enumerate(binder.entries):
        routed.append(hooks.var(s, extended, base + j))
    return extended, routed


def strength_route(op: Operator, arg_index: int, ctx: Context, env: Sequence,
                   hooks: PointedHooks) -> tuple[Context, list]:
    """The composite strength at one argument of an operator."""
    return route_environment(op.args[arg_index].binder, ctx, env, hooks)
