"""Operators of the call-by-value fragments, minted on demand per type instance.

Most fragments contribute an infinite operator family (one instance per type
or per context of types); the table materializes instances lazily, checking
on every mint that the requested types are formable in the fragment and within
the configured type depth.  Labels are canonical strings, so a label uniquely
determines its operator and the table doubles as a resolver for the term
deserializer.
"""

from __future__ import annotations

import itertools

from ..signatures import Argument, Operator
from ..sorts import Context, first, second
from .types import (DepthExceeded, Fun, FragmentConfig, NAT, Record, TypeExpr,
                    Variant, fun, is_context_row, is_done_cont_shape,
                    is_maybe_shape, maybe_shape, done_cont_shape, parse_type,
                    record, type_depth, type_to_label, valid_type)


class DisabledConstruct(Exception):
    def __init__(self, family, cfg):
        super().__init__(f"construct {family!r} is not enabled in {cfg.name()}")
        self.family = family


def _split_params(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "({<":
            depth += 1
        elif ch in ")}>":
            depth -= 1
        if ch == ";" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _split_commas(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "({<":
            depth += 1
        elif ch in ")}>":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p for p in parts if p]


def record_allowed(cfg: FragmentConfig, row: tuple) -> bool:
    if cfg.has("records"):
        return True
    if row == () and cfg.has("naturals"):
        return True
    return cfg.has("recursion") and is_context_row(Record(row))


def variant_allowed(cfg: FragmentConfig, t: Variant) -> bool:
    if cfg.has("variants"):
        return True
    if cfg.has("naturals") and is_maybe_shape(t):
        return True
    return cfg.has("while") and is_done_cont_shape(t)


def vmatch_allowed(cfg: FragmentConfig, t: Variant) -> bool:
    return cfg.has("variants") or (cfg.has("naturals") and is_maybe_shape(t))


class CbvOperatorTable:
    """Lazy operator table for one fragment configuration."""

    def __init__(self, cfg: FragmentConfig):
        self.cfg = cfg
        self._ops: dict[str, Operator] = {}
        self._meta: dict[str, tuple] = {}

    # -- helpers ---------------------------------------------------------

    def _check_type(self, t: TypeExpr):
        if not valid_type(t, self.cfg):
            raise DisabledConstruct(f"type {type_to_label(t)}", self.cfg)
        if type_depth(t) > self.cfg.type_depth:
            raise DepthExceeded(
                f"type {type_to_label(t)} exceeds depth {self.cfg.type_depth}")
        return t

    def _intern(self, label, family, params, result, args) -> Operator:
        got = self._ops.get(label)
        if got is None:
            got = Operator(label, result, tuple(args))
            self._ops[label] = got
            self._meta[label] = (family, params)
        return got

    def family(self, op: Operator) -> tuple:
        return self._meta[op.label]

    # -- operator families -------------------------------------------------

    def val(self, t: TypeExpr) -> Operator:
        self._check_type(t)
        return self._intern(f"val<{type_to_label(t)}>", "val", (t,),
                            second(t), [Argument(Context(()), first(t))])

    def let(self, bound: tuple, result: TypeExpr) -> Operator:
        if not self.cfg.has("sequential"):
            raise DisabledConstruct("let", self.cfg)
        if not bound:
            raise ValueError("sequencing needs at least one binding")
        for t in bound:
            self._check_type(t)
        self._check_type(result)
        label = (f"let<{','.join(type_to_label(t) for t in bound)};"
                 f"{type_to_label(result)}>")
        args = [Argument(Context(bound[:i]), second(t)) for i, t in enumerate(bound)]
        args.append(Argument(Context(bound), second(result)))
        return self._intern(label, "let", (bound, result), second(result), args)

    def lam(self, dom: TypeExpr, cod: TypeExpr) -> Operator:
        if not self.cfg.has("functions"):
            raise DisabledConstruct("lam", self.cfg)
        self._check_type(fun(dom, cod))
        label = f"lam<{type_to_label(dom)};{type_to_label(cod)}>"
        return self._intern(label, "lam", (dom, cod), first(fun(dom, cod)),
                            [Argument(Context((dom,)), second(cod))])

    def app(self, dom: TypeExpr, cod: TypeExpr) -> Operator:
        fused = (self.cfg.has("recursion") and isinstance(dom, Record)
                 and is_context_row(dom))
        if not (self.cfg.has("functions") or fused):
            raise DisabledConstruct("app", self.cfg)
        self._check_type(fun(dom, cod))
        label = f"app<{type_to_label(dom)};{type_to_label(cod)}>"
        return self._intern(label, "app", (dom, cod), second(cod),
                            [Argument(Context(()), second(fun(dom, cod))),
                             Argument(Context(()), second(dom))])

    def _record_allowed(self, row: tuple) -> bool:
        return record_allowed(self.cfg, row)

    def vrec(self, row: tuple) -> Operator:
        t = record(row)
        if not self._record_allowed(t.row):
            raise DisabledConstruct("record value", self.cfg)
        self._check_type(t)
        label = f"vrec<{type_to_label(t)}>"
        args = [Argument(Context(()), first(v)) for _, v in t.row]
        return self._intern(label, "vrec", (t,), first(t), args)

    def rec(self, row: tuple) -> Operator:
        t = record(row)
        if not self._record_allowed(t.row):
            raise DisabledConstruct("record term", self.cfg)
        self._check_type(t)
        label = f"rec<{type_to_label(t)}>"
        args = [Argument(Context(()), second(v)) for _, v in t.row]
        return self._intern(label, "rec", (t,), second(t), args)

    def recmatch(self, row: tuple, result: TypeExpr) -> Operator:
        t = record(row)
        if not self.cfg.has("records"):
            raise DisabledConstruct("record match", self.cfg)
        self._check_type(t)
        self._check_type(result)
        label = f"recmatch<{type_to_label(t)};{type_to_label(result)}>"
        binder = Context(tuple(v for _, v in t.row))
        return self._intern(label, "recmatch", (t, result), second(result),
                            [Argument(Context(()), second(t)),
                             Argument(binder, second(result))])

    def _variant_allowed(self, t: Variant) -> bool:
        return variant_allowed(self.cfg, t)

    def vinj(self, row: tuple, tag: str) -> Operator:
        t = variant_of(row)
        if not self._variant_allowed(t):
            raise DisabledConstruct("variant value", self.cfg)
        self._check_type(t)
        label = f"vinj<{type_to_label(t)};{tag}>"
        payload = dict(t.row)[tag]
        return self._intern(label, "vinj", (t, tag), first(t),
                            [Argument(Context(()), first(payload))])

    def inj(self, row: tuple, tag: str) -> Operator:
        t = variant_of(row)
        if not self._variant_allowed(t):
            raise DisabledConstruct("variant term", self.cfg)
        self._check_type(t)
        label = f"inj<{type_to_label(t)};{tag}>"
        payload = dict(t.row)[tag]
        return self._intern(label, "inj", (t, tag), second(t),
                            [Argument(Context(()), second(payload))])

    def vmatch(self, row: tuple, result: TypeExpr) -> Operator:
        t = variant_of(row)
        if not vmatch_allowed(self.cfg, t):
            raise DisabledConstruct("variant match", self.cfg)
        self._check_type(t)
        self._check_type(result)
        label = f"vmatch<{type_to_label(t)};{type_to_label(result)}>"
        args = [Argument(Context(()), second(t))]
        args += [Argument(Context((v,)), second(result)) for _, v in t.row]
        return self._intern(label, "vmatch", (t, result), second(result), args)

    def lit(self, n: int) -> Operator:
        if not self.cfg.has("naturals"):
            raise DisabledConstruct("literal", self.cfg)
        if not 0 <= n < self.cfg.nat_bound:
            raise ValueError(f"literal {n} outside the modelled range "
                             f"0..{self.cfg.nat_bound - 1}")
        return self._intern(f"lit<{n}>", "lit", (n,), first(NAT), [])

    def unroll(self) -> Operator:
        if not self.cfg.has("naturals"):
            raise DisabledConstruct("unroll", self.cfg)
        return self._intern("unroll", "unroll", (), second(maybe_shape(NAT)),
                            [Argument(Context(()), second(NAT))])

    def roll(self) -> Operator:
        if not self.cfg.has("naturals"):
            raise DisabledConstruct("roll", self.cfg)
        return self._intern("roll", "roll", (), second(NAT),
                            [Argument(Context(()), second(maybe_shape(NAT)))])

    def natfold(self, result: TypeExpr) -> Operator:
        if not self.cfg.has("naturals"):
            raise DisabledConstruct("fold", self.cfg)
        self._check_type(result)
        label = f"natfold<{type_to_label(result)}>"
        return self._intern(label, "natfold", (result,), second(result),
                            [Argument(Context(()), second(NAT)),
                             Argument(Context((maybe_shape(result),)), second(result))])

    def forloop(self, state: TypeExpr, result: TypeExpr) -> Operator:
        if not self.cfg.has("while"):
            raise DisabledConstruct("for", self.cfg)
        self._check_type(state)
        self._check_type(result)
        body = done_cont_shape(result, state)
        self._check_type(body)
        label = f"for<{type_to_label(state)};{type_to_label(result)}>"
        return self._intern(label, "for", (state, result), second(result),
                            [Argument(Context(()), second(state)),
                             Argument(Context((state,)), second(body))])

    def letrec(self, defs: tuple, result: TypeExpr) -> Operator:
        """``defs`` is a tuple of (parameter types, return type) pairs."""
        if not self.cfg.has("recursion"):
            raise DisabledConstruct("letrec", self.cfg)
        if not defs:
            raise ValueError("letrec needs at least one definition")
        ftypes = []
        for params, ret in defs:
            dom = record(tuple((str(i), p) for i, p in enumerate(params)))
            ftypes.append(fun(dom, ret))
            for p in params:
                self._check_type(p)
            self._check_type(ftypes[-1])
        self._check_type(result)
        defs_label = ",".join(
            f"({','.join(type_to_label(p) for p in params)};{type_to_label(ret)})"
            for params, ret in defs)
        label = f"letrec<{defs_label};{type_to_label(result)}>"
        fctx = tuple(ftypes)
        args = []
        for (params, ret), _ft in zip(defs, ftypes):
            args.append(Argument(Context(fctx + tuple(params)), second(ret)))
        args.append(Argument(Context(fctx), second(result)))
        return self._intern(label, "letrec", (defs, result), second(result), args)

    # -- resolver for deserialization -------------------------------------

    def op(self, label: str) -> Operator:
        got = self._ops.get(label)
        if got is not None:
            return got
        return self._resolve(label)

    def _resolve(self, label: str) -> Operator:
        if label == "unroll":
            return self.unroll()
        if label == "roll":
            return self.roll()
        if "<" not in label or not label.endswith(">"):
            raise KeyError(label)
        name, body = label.split("<", 1)
        body = body[:-1]
        if name == "val":
            return self.val(parse_type(body))
        if name == "let":
            bound_text, res = _split_params(body)
            return self.let(tuple(parse_type(t) for t in _split_commas(bound_text)),
                            parse_type(res))
        if name == "lam":
            d, c = _split_params(body)
            return self.lam(parse_type(d), parse_type(c))
        if name == "app":
            d, c = _split_params(body)
            return self.app(parse_type(d), parse_type(c))
        if name == "vrec":
            return self.vrec(parse_type(body).row)
        if name == "rec":
            return self.rec(parse_type(body).row)
        if name == "recmatch":
            t, res = _split_params(body)
            return self.recmatch(parse_type(t).row, parse_type(res))
        if name == "vinj":
            t, tag = _split_params(body)
            return self.vinj(parse_type(t).row, tag)
        if name == "inj":
            t, tag = _split_params(body)
            return self.inj(parse_type(t).row, tag)
        if name == "vmatch":
            t, res = _split_params(body)
            return self.vmatch(parse_type(t).row, parse_type(res))
        if name == "lit":
            return self.lit(int(body))
        if name == "natfold":
            return self.natfold(parse_type(body))
        if name == "for":
            s, r = _split_params(body)
            return self.forloop(parse_type(s), parse_type(r))
        if name == "letrec":
            *defs_text, res = _split_params(body)
            defs_text = ";".join(defs_text)
            defs = []
            for part in _split_commas(defs_text):
                assert part.startswith("(") and part.endswith(")")
                params_text, ret = _split_params(part[1:-1])
                params = tuple(parse_type(t) for t in _split_commas(params_text))
                defs.append((params, parse_type(ret)))
            return self.letrec(tuple(defs), parse_type(res))
        raise KeyError(label)

    # -- bounded materialization -------------------------------------------

    def operators(self, depth: int = 2, max_bindings: int = 2,
                  max_lit: int = 2) -> list[Operator]:
        """Every operator instance over the depth-bounded type universe, with
        binder lists capped; used for reports and rule-coverage tests."""
        from .types import TypeUniverse
        cfg = self.cfg
        universe = TypeUniverse(cfg).types(depth)
        out = [self.val(t) for t in universe]
        if cfg.has("sequential"):
            for n in range(1, max_bindings + 1):
                for bound in itertools.product(universe, repeat=n):
                    for res in universe:
                        out.append(self.let(bound, res))
        funs = [t for t in universe if isinstance(t, Fun)]
        for t in funs:
            if cfg.has("functions"):
                out.append(self.lam(t.dom, t.cod))
            try:
                out.append(self.app(t.dom, t.cod))
            except DisabledConstruct:
                pass
        records = [t for t in universe if isinstance(t, Record)]
        for t in records:
            try:
                out.append(self.vrec(t.row))
                out.append(self.rec(t.row))
            except DisabledConstruct:
                pass
            if cfg.has("records"):
                for res in universe:
                    out.append(self.recmatch(t.row, res))
        variants = [t for t in universe if isinstance(t, Variant)]
        for t in variants:
            for tag, _ in t.row:
                out.append(self.vinj(t.row, tag))
                out.append(self.inj(t.row, tag))
            if cfg.has("variants") or (cfg.has("naturals") and is_maybe_shape(t)):
                for res in universe:
                    out.append(self.vmatch(t.row, res))
        if cfg.has("naturals"):
            out += [self.lit(n) for n in range(min(max_lit + 1, cfg.nat_bound))]
            out += [self.unroll(), self.roll()]
            out += [self.natfold(t) for t in universe]
        if cfg.has("while"):
            for s in universe:
                for r in universe:
                    if valid_type(done_cont_shape(r, s), cfg):
                        out.append(self.forloop(s, r))
        if cfg.has("recursion"):
            for params in [(), *((t,) for t in universe)]:
                for ret in universe:
                    for res in universe:
                        try:
                            out.append(self.letrec(((params, ret),), res))
                        except DepthExceeded:
                            pass
        seen, uniq = set(), []
        for op in out:
            if op.label not in seen:
                seen.add(op.label)
                uniq.append(op)
        return uniq


def variant_of(row) -> Variant:
    from .types import variant
    return row if isinstance(row, Variant) else variant(row)


def build_operator_table(cfg: FragmentConfig) -> CbvOperatorTable:
    return CbvOperatorTable(cfg)
