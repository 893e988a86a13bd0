"""Dense finite presheaves, the substitution tensor, and its mediators.

A :class:`FinStructure` stores one finite set of element labels per
(sort, context) cell, for every context up to a length bound, together with a
complete table of the contravariant renaming action.  The substitution tensor
is computed literally: raw (context, element, environment) triples quotiented
by a union-find closure over all generator pairs, one per enumerated renaming.
"""

from __future__ import annotations

import itertools
from typing import Hashable, Iterable, Sequence

from ..sorts import (Context, Renaming, Sort, compose_renamings, first,
                     identity_renaming)


class BoundExceeded(Exception):
    pass


def enumerate_contexts(sort_ids: Sequence[Hashable], max_len: int) -> list[Context]:
    """All contexts over the given alphabet up to the length bound, shortest
    first, entries in alphabet order."""
    if max_len < 0:
        raise ValueError("max_len must be nonnegative")
    out = []
    for k in range(max_len + 1):
        out.extend(Context(c) for c in itertools.product(sort_ids, repeat=k))
    return out


def enumerate_renamings(g1: Context, g2: Context) -> list[Renaming]:
    """All sort-preserving position maps from ``g2`` into ``g1``."""
    pools = [[i for i, e in enumerate(g1.entries) if e == s] for s in g2.entries]
    return [Renaming(g1, g2, m) for m in itertools.product(*pools)]


class FinStructure:
    """An explicit presheaf: finite cells plus a total renaming-action table."""

    def __init__(self, sorts: Sequence[Sort], ctx_sorts: Sequence[Hashable],
                 bound: int, cells: dict, action: dict):
        self.sorts = tuple(sorts)
        self.ctx_sorts = tuple(ctx_sorts)
        self.bound = bound
        self._contexts = enumerate_contexts(self.ctx_sorts, bound)
        self.cells = cells
        self.action = action

    def contexts(self) -> list[Context]:
        return self._contexts

    def cell(self, sort: Sort, ctx: Context) -> tuple:
        return self.cells.get((sort, ctx), ())

    def act(self, sort: Sort, rho: Renaming, elem):
        return self.action[(rho.key(), sort, elem)]

    def renamings(self):
        for g1 in self._contexts:
            for g2 in self._contexts:
                yield from enumerate_renamings(g1, g2)

    def validate(self) -> None:
        """Check the functor laws and that the action lands in the right cells."""
        for rho in self.renamings():
            for s in self.sorts:
                for x in self.cell(s, rho.target):
                    y = self.act(s, rho, x)
                    if y not in self.cell(s, rho.source):
                        raise ValueError(f"action escapes its cell at {rho!r}, {s!r}")
        for ctx in self._contexts:
            ident = identity_renaming(ctx)
            for s in self.sorts:
                for x in self.cell(s, ctx):
                    if self.act(s, ident, x) != x:
                        raise ValueError(f"identity law fails at {s!r}, {ctx!r}, {x!r}")
        for g1 in self._contexts:
            for g2 in self._contexts:
                for r1 in enumerate_renamings(g1, g2):
                    for g3 in self._contexts:
                        for r2 in enumerate_renamings(g2, g3):
                            comp = compose_renamings(r1, r2)
                            for s in self.sorts:
                                for q in self.cell(s, g3):
                                    if self.act(s, comp, q) != self.act(s, r1, self.act(s, r2, q)):
                                        raise ValueError(
                                            f"composition law fails at {s!r}, {q!r}")


def build_structure(sorts, ctx_sorts, bound, cells, act_fn) -> FinStructure:
    """Materialize the dense action table from an action function."""
    skeleton = FinStructure(sorts, ctx_sorts, bound, cells, {})
    action = {}
    for rho in skeleton.renamings():
        for s in skeleton.sorts:
            for x in cells.get((s, rho.target), ()):
                action[(rho.key(), s, x)] = act_fn(s, rho, x)
    return FinStructure(sorts, ctx_sorts, bound, cells, action)


def variables_structure(ctx_sorts: Sequence[Hashable], bound: int) -> FinStructure:
    """The presheaf of variables: positions of each sort, acted on by the map."""
    sorts = tuple(first(s) for s in ctx_sorts)
    cells = {}
    for ctx in enumerate_contexts(ctx_sorts, bound):
        for s in ctx_sorts:
            cells[(first(s), ctx)] = tuple(i for i, e in enumerate(ctx.entries) if e == s)
    return build_structure(sorts, ctx_sorts, bound, cells,
                           lambda s, rho, x: rho.mapping[x])


def kneut_structure(fst_ids: Sequence, snd_ids: Sequence, bound: int) -> FinStructure:
    """Variables on the first-class sorts; empty cells at second-class sorts."""
    nu = variables_structure(fst_ids, bound)
    sorts = nu.sorts + tuple(Sort("second", i) for i in snd_ids)
    return FinStructure(sorts, nu.ctx_sorts, bound, nu.cells, nu.action)


def terminal_structure(sorts: Sequence[Sort], ctx_sorts, bound: int) -> FinStructure:
    cells = {(s, ctx): ("*",) for s in sorts
             for ctx in enumerate_contexts(ctx_sorts, bound)}
    return build_structure(sorts, ctx_sorts, bound, cells, lambda s, rho, x: "*")


def empty_structure(sorts: Sequence[Sort], ctx_sorts, bound: int) -> FinStructure:
    cells = {(s, ctx): () for s in sorts
             for ctx in enumerate_contexts(ctx_sorts, bound)}
    return FinStructure(sorts, ctx_sorts, bound, cells, {})


def free_structure(rng, sorts: Sequence[Sort], ctx_sorts, bound: int,
                   homes: Sequence[Context] | None = None,
                   ensure: Iterable = ()) -> FinStructure:
    """A random free presheaf: elements are (generator, renaming into its home).

    The action is composition, so the functor laws hold by construction and
    the elements exhibit genuine merging/permutation behaviour.  Generators
    live at contexts from ``homes`` (default: length <= 1, which keeps every
    cell at 3 elements or fewer at bound 2); ``ensure`` lists (sort, context)
    cells that must carry a generator.
    """
    contexts = enumerate_contexts(ctx_sorts, bound)
    if homes is None:
        homes = [c for c in contexts if len(c) <= 1]
    gens: dict = {}
    for s in sorts:
        for home in homes:
            if rng.random() < 0.6:
                gens.setdefault((s, home), []).append(f"g{home.entries}")
    for s, ctx in ensure:
        if not gens.get((s, ctx)):
            gens[(s, ctx)] = [f"g{ctx.entries}"]
    cells = {}
    for s in sorts:
        for ctx in contexts:
            elems = []
            for (gs, home), labels in gens.items():
                if gs != s:
                    continue
                for g in labels:
                    for rho in enumerate_renamings(ctx, home):
                        elems.append((g, home.entries, rho.mapping))
            cells[(s, ctx)] = tuple(sorted(elems, key=repr))

    def act(s, tau, elem):
        g, home_entries, mapping = elem
        rho = Renaming(tau.target, Context(home_entries), mapping)
        return (g, home_entries, compose_renamings(tau, rho).mapping)

    return build_structure(sorts, ctx_sorts, bound, cells, act)


def enumerate_envs(q: FinStructure, index_ctx: Context, over_ctx: Context):
    """All Q-valued environments indexed by ``index_ctx`` over ``over_ctx``."""
    pools = [q.cell(first(s), over_ctx) for s in index_ctx.entries]
    return itertools.product(*pools)


def reindex_env(env: tuple, rho: Renaming) -> tuple:
    """Covariant reindexing of an environment along a renaming of its index."""
    return tuple(env[rho.mapping[y]] for y in range(len(rho.target)))


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[rj] = ri


class TensorResult:
    """The substitution tensor of two structures with its quotient map.

    Cells of ``structure`` hold canonical representative triples
    ``(ctx_entries, element, environment)``; ``class_of`` resolves any raw
    triple to its representative.
    """

    def __init__(self, p: FinStructure, q: FinStructure, structure: FinStructure,
                 reps: dict, members: dict):
        self.p = p
        self.q = q
        self.structure = structure
        self._reps = reps
        self._members = members

    def class_of(self, sort: Sort, ctx: Context, triple):
        return self._reps[(sort, ctx, triple)]

    def members(self, sort: Sort, ctx: Context, rep) -> tuple:
        return self._members[(sort, ctx, rep)]


def tensor(p: FinStructure, q: FinStructure, validate: bool = True) -> TensorResult:
    """The coend of ``P_s G' x Env Q G' G`` over the enumerated contexts."""
    if p.bound != q.bound:
        raise BoundExceeded("tensor factors must share the bound")
    want = {first(s) for s in p.ctx_sorts}
    if set(q.sorts) != want:
        raise ValueError("right tensor factor must be homogeneous over the left "
                         "factor's context alphabet")
    bound = p.bound
    out_ctxs = enumerate_contexts(q.ctx_sorts, bound)
    p_ctxs = p.contexts()

    reps: dict = {}
    members: dict = {}
    cells: dict = {}
    for s in p.sorts:
        for ctx in out_ctxs:
            triples = []
            for gp in p_ctxs:
                for t in p.cell(s, gp):
                    for env in enumerate_envs(q, gp, ctx):
                        triples.append((gp.entries, t, env))
            index = {t: i for i, t in enumerate(triples)}
            uf = _UnionFind(len(triples))
            for g1 in p_ctxs:
                for g2 in p_ctxs:
                    for rho in enumerate_renamings(g1, g2):
                        for t in p.cell(s, g2):
                            tr = p.act(s, rho, t)
                            for env in enumerate_envs(q, g1, ctx):
                                left = (g1.entries, tr, env)
                                right = (g2.entries, t, reindex_env(env, rho))
                                uf.union(index[left], index[right])
            groups: dict = {}
            for t, i in index.items():
                groups.setdefault(uf.find(i), []).append(t)
            cell = []
            for grp in groups.values():
                rep = min(grp, key=repr)
                cell.append(rep)
                for t in grp:
                    reps[(s, ctx, t)] = rep
                members[(s, ctx, rep)] = tuple(sorted(grp, key=repr))
            cells[(s, ctx)] = tuple(sorted(cell, key=repr))

    def act(s, tau, rep):
        gp_entries, t, env = rep
        moved = tuple(q.act(first(Context(gp_entries).sort_at(i)), tau, e)
                      for i, e in enumerate(env))
        return reps[(s, tau.source, (gp_entries, t, moved))]

    structure = build_structure(p.sorts, q.ctx_sorts, bound, cells, act)
    result = TensorResult(p, q, structure, reps, members)
    if validate:
        _check_action_well_defined(result)
    return result


def _check_action_well_defined(tr: TensorResult) -> None:
    """The quotient action must be independent of the chosen representative."""
    st = tr.structure
    for rho in st.renamings():
        for s in st.sorts:
            for rep in st.cell(s, rho.target):
                image = st.act(s, rho, rep)
                for member in tr.members(s, rho.target, rep):
                    gp_entries, t, env = member
                    moved = tuple(
                        tr.q.act(first(Context(gp_entries).sort_at(i)), rho, e)
                        for i, e in enumerate(env))
                    got = tr.class_of(s, rho.source, (gp_entries, t, moved))
                    if got != image:
                        raise ValueError(
                            f"tensor action not well-defined at {s!r} {rho!r}: "
                            f"{member!r} -> {got!r} != {image!r}")


def truncate_structure(p: FinStructure, bound: int) -> FinStructure:
    """Restrict a structure to contexts within a smaller bound."""
    if bound > p.bound:
        raise BoundExceeded("cannot truncate upwards")
    keep = set(enumerate_contexts(p.ctx_sorts, bound))
    cells = {(s, c): e for (s, c), e in p.cells.items() if c in keep}
    action = {k: v for k, v in p.action.items()
              if Context(k[0][0]) in keep and Context(k[0][1]) in keep}
    return FinStructure(p.sorts, p.ctx_sorts, bound, cells, action)


def shift_structure(p: FinStructure, binder: Context) -> FinStructure:
    """Scope shift: the cell at G is P's cell at G ++ binder."""
    if len(binder) > p.bound:
        raise BoundExceeded("binder longer than the bound")
    bound = p.bound - len(binder)
    cells = {}
    for ctx in enumerate_contexts(p.ctx_sorts, bound):
        ext = Context(ctx.entries + binder.entries)
        for s in p.sorts:
            cells[(s, ctx)] = p.cell(s, ext)
    return build_structure(p.sorts, p.ctx_sorts, bound, cells,
                           lambda s, rho, x: p.act(s, rho.extend(binder), x))


def product_structure(ps: Sequence[FinStructure]) -> FinStructure:
    """Cellwise product; elements are tuples."""
    head = ps[0]
    cells = {}
    for s in head.sorts:
        for ctx in head.contexts():
            cells[(s, ctx)] = tuple(itertools.product(*(p.cell(s, ctx) for p in ps)))
    return build_structure(head.sorts, head.ctx_sorts, head.bound, cells,
                           lambda s, rho, xs: tuple(p.act(s, rho, x)
                                                    for p, x in zip(ps, xs)))


def coproduct_structure(ps: Sequence[tuple[str, FinStructure]]) -> FinStructure:
    """Cellwise tagged union; elements are (tag, element)."""
    head = ps[0][1]
    cells = {}
    for s in head.sorts:
        for ctx in head.contexts():
            cells[(s, ctx)] = tuple((tag, x) for tag, p in ps for x in p.cell(s, ctx))
    by_tag = dict(ps)
    return build_structure(head.sorts, head.ctx_sorts, head.bound, cells,
                           lambda s, rho, tx: (tx[0], by_tag[tx[0]].act(s, rho, tx[1])))


# --- the right exponential -----------------------------------------------------

def _wedge_ok(p, q, amb, assigned, envs_by_ctx):
    """Check the end condition between every assigned pair of contexts."""
    for (s, g2), f2 in assigned.items():
        for (s1, g1), f1 in assigned.items():
            if s1 != s:
                continue
            for rho in enumerate_renamings(g1, g2):
                for env in envs_by_ctx[g2]:
                    moved = tuple(q.act(first(amb.sort_at(i)), rho, e)
                                  for i, e in enumerate(env))
                    if p.act(s, rho, f2[env]) != f1[moved]:
                        return False
    return True


def exponential(p: FinStructure, q: FinStructure, cap: int = 200_000):
    """The right exponential ``P <= Q``: elements at ambient context G are
    families of maps ``Env Q G G'' -> P_s G''`` natural in G''.

    Families are encoded as tuples of graphs in context-enumeration order, so
    elements are hashable and deterministic.  Raises :class:`BoundExceeded`
    when the search space at some cell exceeds ``cap``.
    """
    want = {first(s) for s in p.ctx_sorts}
    if set(q.sorts) != want or p.bound != q.bound:
        raise ValueError("exponential needs a homogeneous Q over P's alphabet "
                         "with the same bound")
    contexts = p.contexts()
    cells = {}
    for s in p.sorts:
        for amb in contexts:
            envs_by_ctx = {g: list(enumerate_envs(q, amb, g)) for g in contexts}
            total = 1
            for g in contexts:
                total *= len(p.cell(s, g)) ** len(envs_by_ctx[g])
                if total > cap:
                    raise BoundExceeded(f"exponential cell at {s!r} {amb!r} too large")
            families = [{}]
            for g in contexts:
                envs = envs_by_ctx[g]
                options = list(itertools.product(p.cell(s, g), repeat=len(envs)))
                nxt = []
                for fam in families:
                    for outs in options:
                        cand = dict(fam)
                        cand[(s, g)] = dict(zip(envs, outs))
                        if _wedge_ok(p, q, amb, cand, envs_by_ctx):
                            nxt.append(cand)
                families = nxt
                if len(families) > cap:
                    raise BoundExceeded(f"exponential cell at {s!r} {amb!r} too large")
            encoded = []
            for fam in families:
                encoded.append(tuple(tuple(fam[(s, g)][e] for e in envs_by_ctx[g])
                                     for g in contexts))
            cells[(s, amb)] = tuple(sorted(encoded, key=repr))

    ctx_index = {g: i for i, g in enumerate(contexts)}

    def family_lookup(s, amb, elem, g, env):
        envs = list(enumerate_envs(q, amb, g))
        return elem[ctx_index[g]][envs.index(env)]

    def act(s, tau, elem):
        # contravariant in the ambient context: precompose with reindexing
        out = []
        for g in contexts:
            envs_src = list(enumerate_envs(q, tau.source, g))
            row = []
            for env in envs_src:
                moved = reindex_env(env, tau)
                row.append(family_lookup(s, tau.target, elem, g, moved))
            out.append(tuple(row))
        return tuple(out)

    structure = build_structure(p.sorts, p.ctx_sorts, p.bound, cells, act)

    def eval_map(s, ctx, rep_triple):
        """Evaluation on tensor((P<=Q), Q) classes: apply the family at ctx."""
        gp_entries, elem, env = rep_triple
        return family_lookup(s, Context(gp_entries), elem, ctx, env)

    def curry(b: FinStructure, f, tens: TensorResult):
        """Factor an elementwise map ``f(s, ctx, class) -> P`` through eval."""
        table = {}
        for s in p.sorts:
            for amb in contexts:
                inner = {}
                for x in b.cell(s, amb):
                    fam = []
                    for g in contexts:
                        row = []
                        for env in enumerate_envs(q, amb, g):
                            cls = tens.class_of(s, g, (amb.entries, x, env))
                            row.append(f(s, g, cls))
                        fam.append(tuple(row))
                    inner[x] = tuple(fam)
                table[(s, amb)] = inner
        return table

    return structure, eval_map, curry


# --- structured text form ---------------------------------------------------------

def structure_to_dict(p: FinStructure) -> dict:
    """JSON-ready form: sorts, bound, element lists, and the action table.
    Sort identifiers and elements are rendered with repr and parsed back with
    a caller-supplied decoder."""
    cells = []
    for (s, ctx), elems in sorted(p.cells.items(), key=repr):
        cells.append({"tag": s.tag, "sort": repr(s.ident),
                      "context": [repr(e) for e in ctx.entries],
                      "elements": [repr(e) for e in elems]})
    action = []
    for (key, s, elem), out in sorted(p.action.items(), key=repr):
        src, tgt, mapping = key
        action.append({"source": [repr(e) for e in src],
                       "target": [repr(e) for e in tgt],
                       "mapping": list(mapping), "tag": s.tag,
                       "sort": repr(s.ident), "element": repr(elem),
                       "image": repr(out)})
    return {"ctx_sorts": [repr(s) for s in p.ctx_sorts], "bound": p.bound,
            "sorts": [{"tag": s.tag, "ident": repr(s.ident)} for s in p.sorts],
            "cells": cells, "action": action}


def structure_from_dict(data: dict, decode=None) -> FinStructure:
    """Load a structure from its dict form and validate the functor laws."""
    decode = decode if decode is not None else _default_decode
    ctx_sorts = tuple(decode(s) for s in data["ctx_sorts"])
    sorts = tuple(Sort(s["tag"], decode(s["ident"])) for s in data["sorts"])
    cells = {}
    for cell in data["cells"]:
        s = Sort(cell["tag"], decode(cell["sort"]))
        ctx = Context(tuple(decode(e) for e in cell["context"]))
        cells[(s, ctx)] = tuple(decode(e) for e in cell["elements"])
    action = {}
    for row in data["action"]:
        src = tuple(decode(e) for e in row["source"])
        tgt = tuple(decode(e) for e in row["target"])
        key = (src, tgt, tuple(row["mapping"]))
        s = Sort(row["tag"], decode(row["sort"]))
        action[(key, s, decode(row["element"]))] = decode(row["image"])
    out = FinStructure(sorts, ctx_sorts, data["bound"], cells, action)
    out.validate()
    return out


def _default_decode(text: str):
    import ast
    return ast.literal_eval(text)
