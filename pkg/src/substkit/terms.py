"""Scope-indexed terms: renaming, substitution, metavariables, and the fold.

Every term carries its ambient sort and context, checked at construction, so
ill-sorted trees cannot be built.  Binders extend the ambient context on the
right; as a consequence weakening never renumbers variables and alpha
equivalence is plain structural equality.

Substitution is the environment-carrying fold instantiated at the term carrier
itself.  A second, independently written substitution (classical index
arithmetic with explicit shifting, operating on indices counted from the
right) is kept alongside as a cross-check; the two must agree everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .signatures import Operator, OperatorTable, route_environment
from .sorts import Context, Renaming, Sort, first


class IllSorted(Exception):
    pass


class UnknownHole(KeyError):
    pass


class MissingAlgebraCase(KeyError):
    pass


@dataclass(frozen=True)
class HoleDecl:
    """A metavariable: a placeholder of a given sort with its own context."""
    ident: str
    sort: Sort
    ctx: Context


class Term:
    __slots__ = ("sort", "ctx", "_hash")

    sort: Sort
    ctx: Context

    def __setattr__(self, *a):
        raise AttributeError("terms are immutable")

    def __hash__(self):
        return self._hash


class Var(Term):
    __slots__ = ("index",)

    def __init__(self, ctx: Context, index: int):
        if not 0 <= index < len(ctx):
            raise IllSorted(f"variable {index} out of range for {ctx!r}")
        object.__setattr__(self, "sort", first(ctx.sort_at(index)))
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "_hash", hash(("v", index, ctx)))

    def __eq__(self, other):
        return (type(other) is Var and self.index == other.index
                and self.ctx == other.ctx)

    __hash__ = Term.__hash__

    def __repr__(self):
        return f"Var(#{self.index})"


class Op(Term):
    __slots__ = ("op", "args")

    def __init__(self, op: Operator, ctx: Context, args: Sequence[Term]):
        args = tuple(args)
        if len(args) != op.arity:
            raise IllSorted(f"{op.label}: expected {op.arity} arguments, got {len(args)}")
        for i, (arg, decl) in enumerate(zip(args, op.args)):
            want_ctx = Context(ctx.entries + decl.binder.entries)
            if arg.sort != decl.sort:
                raise IllSorted(
                    f"{op.label} argument {i}: sort {arg.sort!r}, expected {decl.sort!r}")
            if arg.ctx != want_ctx:
                raise IllSorted(
                    f"{op.label} argument {i}: context {arg.ctx!r}, expected {want_ctx!r}")
        object.__setattr__(self, "sort", op.result_sort)
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "args", args)
        object.__setattr__(self, "_hash", hash(("o", op.label, args, ctx)))

    def __eq__(self, other):
        return (type(other) is Op and self.op.label == other.op.label
                and self.args == other.args and self.ctx == other.ctx)

    __hash__ = Term.__hash__

    def __repr__(self):
        return f"Op({self.op.label}, {list(self.args)!r})"


class Meta(Term):
    __slots__ = ("hole", "env")

    def __init__(self, hole: HoleDecl, ctx: Context, env: Sequence[Term]):
        env = tuple(env)
        if len(env) != len(hole.ctx):
            raise IllSorted(f"hole {hole.ident}: environment arity {len(env)}, "
                            f"expected {len(hole.ctx)}")
        for i, entry in enumerate(env):
            if entry.sort != first(hole.ctx.sort_at(i)):
                raise IllSorted(f"hole {hole.ident}: entry {i} has sort {entry.sort!r}")
            if entry.ctx != ctx:
                raise IllSorted(f"hole {hole.ident}: entry {i} over {entry.ctx!r}, "
                                f"expected {ctx!r}")
        object.__setattr__(self, "sort", hole.sort)
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "hole", hole)
        object.__setattr__(self, "env", env)
        object.__setattr__(self, "_hash", hash(("m", hole.ident, env, ctx)))

    def __eq__(self, other):
        return (type(other) is Meta and self.hole == other.hole
                and self.env == other.env and self.ctx == other.ctx)

    __hash__ = Term.__hash__

    def __repr__(self):
        return f"Meta(?{self.hole.ident}, {list(self.env)!r})"


class SubstEnv:
    """A simultaneous substitution: one first-class term over ``target`` per
    position of ``source``."""

    __slots__ = ("source", "target", "entries")

    def __init__(self, source: Context, target: Context, entries: Sequence[Term]):
        entries = tuple(entries)
        if len(entries) != len(source):
            raise IllSorted("substitution must cover every source position")
        for i, t in enumerate(entries):
            if t.sort != first(source.sort_at(i)):
                raise IllSorted(f"entry {i}: sort {t.sort!r}, "
                                f"expected {first(source.sort_at(i))!r}")
            if t.ctx != target:
                raise IllSorted(f"entry {i} over {t.ctx!r}, expected {target!r}")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, *a):
        raise AttributeError("SubstEnv is immutable")

    def __eq__(self, other):
        return (isinstance(other, SubstEnv) and self.source == other.source
                and self.target == other.target and self.entries == other.entries)

    def __repr__(self):
        return f"SubstEnv({list(self.entries)!r})"


def identity_env(ctx: Context) -> SubstEnv:
    return SubstEnv(ctx, ctx, tuple(Var(ctx, i) for i in range(len(ctx))))


def env_of_renaming(rho: Renaming) -> SubstEnv:
    """Renaming as a substitution: each target-indexed position becomes a variable."""
    return SubstEnv(rho.target, rho.source,
                    tuple(Var(rho.source, rho.mapping[y]) for y in range(len(rho.target))))


# --- renaming ---------------------------------------------------------------

def rename(t: Term, rho: Renaming) -> Term:
    """Functorial action: a term over rho.target becomes a term over rho.source."""
    if t.ctx != rho.target:
        raise IllSorted(f"term over {t.ctx!r} cannot be renamed along {rho!r}")
    if type(t) is Var:
        return Var(rho.source, rho.mapping[t.index])
    if type(t) is Op:
        args = []
        for arg, decl in zip(t.args, t.op.args):
            args.append(rename(arg, rho.extend(decl.binder)) if len(decl.binder)
                        else rename(arg, rho))
        return Op(t.op, rho.source, args)
    return Meta(t.hole, rho.source, tuple(rename(e, rho) for e in t.env))


# --- the parameterised fold -------------------------------------------------

class TermCarrier:
    """The term structure as a pointed carrier: weakening is renaming along the
    first projection, the point is the variable constructor."""

    @staticmethod
    def weaken(value: Term, ctx: Context, binder: Context) -> Term:
        extended = Context(ctx.entries + binder.entries)
        pi1 = Renaming(extended, ctx, range(len(ctx)))
        return rename(value, pi1)

    @staticmethod
    def var(sort_ident, ctx: Context, position: int) -> Term:
        return Var(ctx, position)


def _dispatch(alg, key):
    if callable(alg):
        return alg
    try:
        return alg[key]
    except KeyError:
        raise MissingAlgebraCase(key) from None


def fold(t: Term, alg_ops, alg_hole, env: Sequence, out_ctx: Context, hooks) -> object:
    """The unique environment-carrying traversal out of the syntax.

    Variables look up the environment; operator nodes route the environment
    into each argument (weakened under binders, extended with fresh variable
    images) and hand the folded children to ``alg_ops``; metavariable nodes
    fold their environments and hand them to ``alg_hole``.

    ``alg_ops`` is either a callable ``(op, values, ctx) -> value`` or a
    mapping from operator labels to such callables (missing labels raise
    :class:`MissingAlgebraCase`); ``alg_hole`` likewise keyed by hole ident.
    """
    if type(t) is Var:
        return env[t.index]
    if type(t) is Op:
        values = []
        for arg, decl in zip(t.args, t.op.args):
            child_ctx, child_env = route_environment(decl.binder, out_ctx, env, hooks)
            values.append(fold(arg, alg_ops, alg_hole, child_env, child_ctx, hooks))
        return _dispatch(alg_ops, t.op.label)(t.op, values, out_ctx)
    values = [fold(e, alg_ops, alg_hole, env, out_ctx, hooks) for e in t.env]
    return _dispatch(alg_hole, t.hole.ident)(t.hole, values, out_ctx)


def _rebuild_ops(op, values, ctx):
    return Op(op, ctx, values)


def _rebuild_hole(hole, values, ctx):
    return Meta(hole, ctx, values)


def substitute(t: Term, env: SubstEnv) -> Term:
    """Capture-avoiding simultaneous substitution, as the fold at the term carrier."""
    if t.ctx != env.source:
        raise IllSorted(f"term over {t.ctx!r} cannot take a substitution from "
                        f"{env.source!r}")
    return fold(t, _rebuild_ops, _rebuild_hole, env.entries, env.target, TermCarrier)


def compose_subst(s1: SubstEnv, s2: SubstEnv) -> SubstEnv:
    """Componentwise substitution ``s1[s2]``."""
    if s1.target != s2.source:
        raise IllSorted("substitutions do not compose")
    return SubstEnv(s1.source, s2.target, tuple(substitute(e, s2) for e in s1.entries))


# --- metavariable substitution ----------------------------------------------

class MetaSubst:
    """An assignment of a body over ``ctx(hole)`` to every hole of a hole set."""

    def __init__(self, mapping: Mapping[str, tuple[HoleDecl, Term]]):
        self.mapping = dict(mapping)
        for ident, (hole, body) in self.mapping.items():
            if body.sort != hole.sort or body.ctx != hole.ctx:
                raise IllSorted(f"body for hole {ident} has the wrong sort or context")

    def body(self, hole: HoleDecl) -> Term:
        try:
            return self.mapping[hole.ident][1]
        except KeyError:
            raise UnknownHole(hole.ident) from None


def identity_meta_subst(holes: Iterable[HoleDecl]) -> MetaSubst:
    return MetaSubst({h.ident: (h, Meta(h, h.ctx, identity_env(h.ctx).entries))
                      for h in holes})


def meta_substitute(t: Term, ms: MetaSubst) -> Term:
    """Kleisli extension: replace each hole by its body, instantiated at the
    hole's (already meta-substituted) environment."""
    if type(t) is Var:
        return t
    if type(t) is Op:
        return Op(t.op, t.ctx, tuple(meta_substitute(a, ms) for a in t.args))
    entries = tuple(meta_substitute(e, ms) for e in t.env)
    body = ms.body(t.hole)
    return substitute(body, SubstEnv(t.hole.ctx, t.ctx, entries))


def compose_meta_subst(ms1: MetaSubst, ms2: MetaSubst) -> MetaSubst:
    return MetaSubst({ident: (hole, meta_substitute(body, ms2))
                      for ident, (hole, body) in ms1.mapping.items()})


def collect_holes(t: Term) -> dict[str, HoleDecl]:
    out: dict[str, HoleDecl] = {}
    stack = [t]
    while stack:
        s = stack.pop()
        if type(s) is Op:
            stack.extend(s.args)
        elif type(s) is Meta:
            prev = out.setdefault(s.hole.ident, s.hole)
            if prev != s.hole:
                raise IllSorted(f"conflicting declarations for hole {s.hole.ident}")
            stack.extend(s.env)
    return out


# --- independent reference substitution --------------------------------------
#
# Classical de Bruijn arithmetic: indices counted from the right, binders
# prepend index 0 and shift everything free.  Deliberately shares no code with
# the fold-based route; the two implementations are asserted to agree.

def _to_indexed(t: Term):
    n = len(t.ctx)
    if type(t) is Var:
        return ("v", n - 1 - t.index)
    if type(t) is Op:
        return ("o", t.op, tuple(_to_indexed(a) for a in t.args))
    return ("m", t.hole, tuple(_to_indexed(e) for e in t.env))


def _shift(t, d, cutoff):
    tag = t[0]
    if tag == "v":
        i = t[1]
        return ("v", i + d) if i >= cutoff else t
    if tag == "o":
        op = t[1]
        return ("o", op, tuple(_shift(a, d, cutoff + len(decl.binder))
                               for a, decl in zip(t[2], op.args)))
    return ("m", t[1], tuple(_shift(e, d, cutoff) for e in t[2]))


def _subst_indexed(t, sub):
    tag = t[0]
    if tag == "v":
        return sub[t[1]]
    if tag == "o":
        op = t[1]
        out = []
        for a, decl in zip(t[2], op.args):
            k = len(decl.binder)
            if k:
                inner = [("v", j) for j in range(k)]
                inner += [_shift(e, k, 0) for e in sub]
                out.append(_subst_indexed(a, inner))
            else:
                out.append(_subst_indexed(a, sub))
        return ("o", op, tuple(out))
    return ("m", t[1], tuple(_subst_indexed(e, sub) for e in t[2]))


def _from_indexed(t, ctx: Context):
    tag = t[0]
    if tag == "v":
        return Var(ctx, len(ctx) - 1 - t[1])
    if tag == "o":
        op = t[1]
        args = []
        for a, decl in zip(t[2], op.args):
            args.append(_from_indexed(a, Context(ctx.entries + decl.binder.entries)))
        return Op(op, ctx, args)
    return Meta(t[1], ctx, tuple(_from_indexed(e, ctx) for e in t[2]))


def substitute_direct(t: Term, env: SubstEnv) -> Term:
    if t.ctx != env.source:
        raise IllSorted("substitution does not match the term's context")
    n = len(env.source)
    sub = [_to_indexed(env.entries[n - 1 - j]) for j in range(n)]
    return _from_indexed(_subst_indexed(_to_indexed(t), sub), env.target)


# --- canonical text form ------------------------------------------------------

def serialize(t: Term) -> str:
    """Canonical text: variables as ``#n``, operator nodes as ``label[...]``,
    holes as ``?id{...}``."""
    if type(t) is Var:
        return f"#{t.index}"
    if type(t) is Op:
        return f"{t.op.label}[{','.join(serialize(a) for a in t.args)}]"
    return f"?{t.hole.ident}{{{','.join(serialize(e) for e in t.env)}}}"


_OPENERS = {"(": ")", "{": "}", "<": ">", "[": "]"}
_CLOSERS = set(_OPENERS.values())


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in _OPENERS:
            depth += 1
        elif ch in _CLOSERS:
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if cur or parts:
        parts.append("".join(cur))
    return parts


def deserialize(text: str, table: OperatorTable, sort: Sort, ctx: Context,
                holes: Mapping[str, HoleDecl] | None = None) -> Term:
    """Parse the canonical text form back into a term over ``(sort, ctx)``."""
    text = text.strip()
    if text.startswith("#"):
        t = Var(ctx, int(text[1:]))
    elif text.startswith("?"):
        body = text[1:]
        brace = body.index("{")
        ident = body[:brace]
        if not body.endswith("}"):
            raise ValueError(f"malformed hole node: {text!r}")
        if holes is None or ident not in holes:
            raise UnknownHole(ident)
        hole = holes[ident]
        inner = _split_top(body[brace + 1:-1])
        if inner == [""]:
            inner = []
        env = [deserialize(s, table, first(hole.ctx.sort_at(i)), ctx, holes)
               for i, s in enumerate(inner)]
        t = Meta(hole, ctx, env)
    else:
        depth = 0
        for pos, ch in enumerate(text):
            if ch == "[" and depth == 0:
                break
            if ch in _OPENERS:
                depth += 1
            elif ch in _CLOSERS:
                depth -= 1
        else:
            raise ValueError(f"malformed operator node: {text!r}")
        op = table.op(text[:pos])
        if not text.endswith("]"):
            raise ValueError(f"malformed operator node: {text!r}")
        inner = _split_top(text[pos + 1:-1])
        if inner == [""]:
            inner = []
        args = [deserialize(s, table, decl.sort,
                            Context(ctx.entries + decl.binder.entries), holes)
                for s, decl in zip(inner, op.args)]
        t = Op(op, ctx, args)
    if t.sort != sort:
        raise IllSorted(f"deserialized term has sort {t.sort!r}, expected {sort!r}")
    return t
