"""Sorting systems, sorted contexts, and renamings.

Sorts come in two classes.  First-class sorts may appear in contexts and be
substituted for; second-class sorts have terms but no variables.  Contexts are
nameless: a variable is its 0-based position, leftmost first.

A renaming ``rho : g1 -> g2`` acts on variables *of g2*, producing variables
of ``g1`` (the mnemonic is the judgement ``g1 |- rho : g2``).  Consequently
renamings compose like functions in the opposite order, and structures indexed
by contexts are contravariant in renamings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

FIRST = "first"
SECOND = "second"


class ContextMismatch(Exception):
    """Raised when composing renamings whose contexts do not line up."""


@dataclass(frozen=True)
class Sort:
    tag: str
    ident: Hashable

    def __post_init__(self):
        if self.tag not in (FIRST, SECOND):
            raise ValueError(f"bad sort tag {self.tag!r}")

    @property
    def is_first(self) -> bool:
        return self.tag == FIRST

    def __repr__(self):
        return f"{'Fst' if self.is_first else 'Snd'}({self.ident!r})"


def first(ident: Hashable) -> Sort:
    return Sort(FIRST, ident)


def second(ident: Hashable) -> Sort:
    return Sort(SECOND, ident)


@dataclass(frozen=True)
class SortingSystem:
    """A pair of finite sort sets; the total sort set is their tagged union.

    Tags are part of the ``Sort`` values, so the two components may reuse
    identifiers.  A homogeneous system is one with no second-class sorts.
    """

    fst_sorts: tuple
    snd_sorts: tuple = ()

    def __post_init__(self):
        for name, comp in (("fst_sorts", self.fst_sorts), ("snd_sorts", self.snd_sorts)):
            if len(set(comp)) != len(comp):
                raise ValueError(f"{name} contains duplicates: {comp!r}")

    @property
    def is_homogeneous(self) -> bool:
        return not self.snd_sorts

    def sorts(self) -> tuple[Sort, ...]:
        return tuple(first(i) for i in self.fst_sorts) + tuple(second(i) for i in self.snd_sorts)

    def restrict_first(self) -> "SortingSystem":
        """The homogeneous restriction: same first-class sorts, no second-class."""
        return SortingSystem(self.fst_sorts, ())

    def __contains__(self, sort: Sort) -> bool:
        pool = self.fst_sorts if sort.is_first else self.snd_sorts
        return sort.ident in pool


class Context:
    """An ordered, possibly empty list of first-class sort identifiers."""

    __slots__ = ("entries", "_hash")

    def __init__(self, entries: Iterable[Hashable] = ()):
        object.__setattr__(self, "entries", tuple(entries))
        object.__setattr__(self, "_hash", hash(self.entries))

    def __setattr__(self, *a):
        raise AttributeError("Context is immutable")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, pos):
        return self.entries[pos]

    def sort_at(self, pos: int) -> Hashable:
        return self.entries[pos]

    def __eq__(self, other):
        return isinstance(other, Context) and self.entries == other.entries

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Context{list(self.entries)!r}"

    def validate(self, system: SortingSystem) -> None:
        for e in self.entries:
            if e not in system.fst_sorts:
                raise ValueError(f"context entry {e!r} is not a first-class sort")


EMPTY = Context(())


class Renaming:
    """A sort-preserving map from positions of ``target`` to positions of ``source``."""

    __slots__ = ("source", "target", "mapping")

    def __init__(self, source: Context, target: Context, mapping: Sequence[int]):
        mapping = tuple(mapping)
        if len(mapping) != len(target):
            raise ValueError("renaming map must cover every target position")
        for y, x in enumerate(mapping):
            if not 0 <= x < len(source):
                raise ValueError(f"position {x} out of range for {source!r}")
            if source.entries[x] != target.entries[y]:
                raise ValueError(
                    f"sort mismatch: target position {y} has sort {target.entries[y]!r} "
                    f"but is sent to source position {x} of sort {source.entries[x]!r}")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "mapping", mapping)

    def __setattr__(self, *a):
        raise AttributeError("Renaming is immutable")

    def __call__(self, pos: int) -> int:
        return self.mapping[pos]

    def __eq__(self, other):
        return (isinstance(other, Renaming) and self.source == other.source
                and self.target == other.target and self.mapping == other.mapping)

    def __hash__(self):
        return hash((self.source, self.target, self.mapping))

    def __repr__(self):
        return f"Renaming({self.source!r} -> {self.target!r}, {self.mapping!r})"

    def key(self):
        return (self.source.entries, self.target.entries, self.mapping)

    def extend(self, binder: Context) -> "Renaming":
        """Extend identically on a binder appended to the right of both contexts."""
        n = len(self.source)
        src = Context(self.source.entries + binder.entries)
        tgt = Context(self.target.entries + binder.entries)
        return Renaming(src, tgt, self.mapping + tuple(range(n, n + len(binder))))


def identity_renaming(ctx: Context) -> Renaming:
    return Renaming(ctx, ctx, range(len(ctx)))


def compose_renamings(rho: Renaming, rho2: Renaming) -> Renaming:
    """The composite ``g1 -> g3`` of ``rho : g1 -> g2`` and ``rho2 : g2 -> g3``.

    Position maps compose the other way round: a g3-position goes through
    rho2's map into g2, then through rho's map into g1.
    """
    if rho.target != rho2.source:
        raise ContextMismatch(f"cannot compose: {rho.target!r} != {rho2.source!r}")
    return Renaming(rho.source, rho2.target, tuple(rho.mapping[y] for y in rho2.mapping))


def concat_contexts(g1: Context, g2: Context) -> tuple[Context, Renaming, Renaming]:
    """Concatenation with its two projection renamings (the chosen product)."""
    ctx = Context(g1.entries + g2.entries)
    pi1 = Renaming(ctx, g1, range(len(g1)))
    pi2 = Renaming(ctx, g2, range(len(g1), len(g1) + len(g2)))
    return ctx, pi1, pi2


def pair_renamings(f: Renaming, g: Renaming) -> Renaming:
    """The unique renaming into the concatenation with the given projections."""
    if f.source != g.source:
        raise ContextMismatch("pairing requires a common source context")
    tgt = Context(f.target.entries + g.target.entries)
    return Renaming(f.source, tgt, f.mapping + g.mapping)


def vars_of_sort(ctx: Context, sort_ident: Hashable) -> list[int]:
    """The positions of ``ctx`` carrying the given first-class sort, ascending."""
    return [i for i, e in enumerate(ctx.entries) if e == sort_ident]


def system_to_dict(system: SortingSystem) -> dict:
    return {"fst_sorts": [str(s) for s in system.fst_sorts],
            "snd_sorts": [str(s) for s in system.snd_sorts]}


def context_to_list(ctx: Context) -> list:
    return [str(e) for e in ctx.entries]
