"""Call-by-value types assembled a la carte, with fragment-gated formation.

A fragment configuration picks a subset of seven extensions over the base
calculus.  Each extension contributes type formers; extensions whose typing
needs mention types of an absent donor fragment get fused single constructors
instead (the empty record standing for the unit, the zero/successor option
variant, the Done/Cont variant, and the n-ary function type used by
recursion).  All of those fused shapes are expressed with the ordinary record,
variant, and function constructors, restricted to the exact shapes the need
demands.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

EXTENSIONS = ("sequential", "functions", "records", "variants", "naturals",
              "while", "recursion")


class NeedUnfulfilled(Exception):
    pass


class DepthExceeded(Exception):
    pass


class TypeExpr:
    __slots__ = ()


@dataclass(frozen=True)
class Base(TypeExpr):
    name: str

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("B", self.name)))

    def __hash__(self):
        return self._h


@dataclass(frozen=True)
class Fun(TypeExpr):
    dom: TypeExpr
    cod: TypeExpr

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("F", self.dom, self.cod)))

    def __hash__(self):
        return self._h


@dataclass(frozen=True)
class Record(TypeExpr):
    row: tuple  # of (label, TypeExpr), label-sorted

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("R", self.row)))

    def __hash__(self):
        return self._h


@dataclass(frozen=True)
class Variant(TypeExpr):
    row: tuple

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("V", self.row)))

    def __hash__(self):
        return self._h


@dataclass(frozen=True)
class NatType(TypeExpr):

    def __post_init__(self):
        object.__setattr__(self, "_h", hash("NatType"))

    def __hash__(self):
        return self._h


NAT = NatType()
UNIT = Record(())


def _mk_row(pairs) -> tuple:
    pairs = tuple(sorted(pairs, key=lambda kv: kv[0]))
    labels = [k for k, _ in pairs]
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate row labels in {labels!r}")
    return pairs


def record(pairs) -> Record:
    return Record(_mk_row(pairs))


def variant(pairs) -> Variant:
    return Variant(_mk_row(pairs))


def fun(dom: TypeExpr, cod: TypeExpr) -> Fun:
    return Fun(dom, cod)


def maybe_shape(t: TypeExpr) -> Variant:
    return Variant((("0", UNIT), ("1+", t)))


def done_cont_shape(done: TypeExpr, cont: TypeExpr) -> Variant:
    return Variant((("Cont", cont), ("Done", done)))


def is_maybe_shape(t: TypeExpr) -> bool:
    return (isinstance(t, Variant) and len(t.row) == 2
            and t.row[0][0] == "0" and t.row[0][1] == UNIT
            and t.row[1][0] == "1+")


def is_done_cont_shape(t: TypeExpr) -> bool:
    return (isinstance(t, Variant) and len(t.row) == 2
            and t.row[0][0] == "Cont" and t.row[1][0] == "Done")


def is_context_row(t: TypeExpr) -> bool:
    """Rows minted from binder contexts label positions with numerals."""
    return (isinstance(t, Record)
            and sorted(l for l, _ in t.row) == sorted(str(i) for i in range(len(t.row))))


def type_depth(t: TypeExpr) -> int:
    if isinstance(t, (Base, NatType)):
        return 1
    if isinstance(t, Fun):
        return 1 + max(type_depth(t.dom), type_depth(t.cod))
    row = t.row
    return 1 + max((type_depth(v) for _, v in row), default=0)


@dataclass(frozen=True)
class FragmentConfig:
    extensions: frozenset
    base_types: tuple
    nat_bound: int = 8
    type_depth: int = 3

    def __post_init__(self):
        bad = self.extensions - set(EXTENSIONS)
        if bad:
            raise ValueError(f"unknown extensions {sorted(bad)!r}")
        if not self.base_types:
            raise ValueError("at least one base type is required")
        if self.nat_bound < 1 or self.type_depth < 1:
            raise ValueError("bounds must be positive")

    def has(self, ext: str) -> bool:
        return ext in self.extensions

    def name(self) -> str:
        enabled = [e for e in EXTENSIONS if e in self.extensions]
        return "base" + ("" if not enabled else "+" + "+".join(enabled))


def config(extensions=(), base_types=("b",), nat_bound=8, type_depth=3) -> FragmentConfig:
    return FragmentConfig(frozenset(extensions), tuple(base_types), nat_bound,
                          type_depth)


def all_fragment_configs(base_types=("b",), nat_bound=8, type_depth=3):
    """All 128 extension subsets, in menu order."""
    out = []
    for k in range(len(EXTENSIONS) + 1):
        for combo in itertools.combinations(EXTENSIONS, k):
            out.append(config(combo, base_types, nat_bound, type_depth))
    return out


@functools.lru_cache(maxsize=None)
def valid_type(t: TypeExpr, cfg: FragmentConfig) -> bool:
    """Is the type derivable from the formation rules the fragment enables?"""
    if isinstance(t, Base):
        return t.name in cfg.base_types
    if isinstance(t, NatType):
        return cfg.has("naturals")
    if isinstance(t, Fun):
        if not valid_type(t.cod, cfg):
            return False
        if cfg.has("functions") and valid_type(t.dom, cfg):
            return True
        # the fused n-ary function type of the recursion fragment
        return (cfg.has("recursion") and is_context_row(t.dom)
                and all(valid_type(v, cfg) for _, v in t.dom.row))
    if isinstance(t, Record):
        if cfg.has("records") and all(valid_type(v, cfg) for _, v in t.row):
            return True
        if t == UNIT and cfg.has("naturals"):
            return True
        return (cfg.has("recursion") and is_context_row(t)
                and all(valid_type(v, cfg) for _, v in t.row))
    if isinstance(t, Variant):
        if cfg.has("variants") and all(valid_type(v, cfg) for _, v in t.row):
            return True
        if cfg.has("naturals") and is_maybe_shape(t) and valid_type(t.row[1][1], cfg):
            return True
        return (cfg.has("while") and is_done_cont_shape(t)
                and all(valid_type(v, cfg) for _, v in t.row))
    return False


class Fulfillment:
    """Deterministic fulfillment functions for the four typing needs."""

    def __init__(self, cfg: FragmentConfig):
        self.cfg = cfg

    def unit_type(self) -> TypeExpr:
        if not (self.cfg.has("records") or self.cfg.has("naturals")):
            raise NeedUnfulfilled("no fragment provides the unit type")
        return UNIT

    def nat_type(self) -> TypeExpr:
        if not self.cfg.has("naturals"):
            raise NeedUnfulfilled("naturals not enabled")
        return NAT

    def maybe_type(self, t: TypeExpr) -> TypeExpr:
        if not (self.cfg.has("naturals") or self.cfg.has("variants")):
            raise NeedUnfulfilled("no fragment provides the option variant")
        return maybe_shape(t)

    def done_cont_type(self, done: TypeExpr, cont: TypeExpr) -> TypeExpr:
        if not (self.cfg.has("while") or self.cfg.has("variants")):
            raise NeedUnfulfilled("no fragment provides the Done/Cont variant")
        return done_cont_shape(done, cont)

    def rec_fun_type(self, params, ret: TypeExpr) -> TypeExpr:
        if not (self.cfg.has("recursion")
                or (self.cfg.has("functions") and self.cfg.has("records"))):
            raise NeedUnfulfilled("no fragment provides recursive function types")
        row = record(tuple((str(i), p) for i, p in enumerate(params)))
        return fun(row, ret)

    def describe(self) -> list[str]:
        out = []
        if self.cfg.has("functions"):
            out.append("function types (- -> -)")
        if self.cfg.has("records"):
            out.append("record types {Ci: -}")
        if self.cfg.has("variants"):
            out.append("variant types <Ci: ->")
        if self.cfg.has("naturals"):
            fused = "" if self.cfg.has("records") else " (fused unit)"
            fusedv = "" if self.cfg.has("variants") else " (fused)"
            out.append(f"Nat, unit {{}}{fused}, option <0: {{}}, 1+: ->{fusedv}")
        if self.cfg.has("while"):
            fused = "" if self.cfg.has("variants") else " (fused)"
            out.append(f"<Done: -, Cont: ->{fused}")
        if self.cfg.has("recursion"):
            if self.cfg.has("functions") and self.cfg.has("records"):
                out.append("({xi: -} -> -) from functions+records")
            else:
                out.append("({xi: -} -> -) fused n-ary functions")
        return out


def build_type_universe(cfg: FragmentConfig):
    """The recognizer/enumerator for the fragment's types and its fulfillment."""
    return TypeUniverse(cfg), Fulfillment(cfg)


class TypeUniverse:
    ROW_LABELS = ("A", "B")

    def __init__(self, cfg: FragmentConfig):
        self.cfg = cfg

    def valid(self, t: TypeExpr) -> bool:
        return valid_type(t, self.cfg)

    @functools.lru_cache(maxsize=None)
    def _types_upto(self, depth: int) -> tuple:
        cfg = self.cfg
        pool = [Base(b) for b in cfg.base_types]
        if cfg.has("naturals"):
            pool.append(NAT)
        if cfg.has("records") or cfg.has("naturals"):
            pool.append(UNIT)
        seen = set(pool)
        for _ in range(depth - 1):
            layer = []
            smaller = list(seen)
            smaller.sort(key=type_to_str)
            if cfg.has("functions"):
                layer += [fun(a, b) for a in smaller for b in smaller]
            if cfg.has("records"):
                for k in (1, 2):
                    for combo in itertools.product(smaller, repeat=k):
                        layer.append(record(tuple(zip(self.ROW_LABELS, combo))))
            if cfg.has("variants"):
                for k in (1, 2):
                    for combo in itertools.product(smaller, repeat=k):
                        layer.append(variant(tuple(zip(self.ROW_LABELS, combo))))
            if cfg.has("naturals"):
                layer += [maybe_shape(a) for a in smaller]
            if cfg.has("while"):
                layer += [done_cont_shape(a, b) for a in smaller for b in smaller]
            if cfg.has("recursion"):
                for a in smaller:
                    layer.append(record((("0", a),)))
                    layer.append(fun(record((("0", a),)), a))
                    layer += [fun(record(()), b) for b in smaller]
                layer.append(record(()))
            for t in layer:
                if type_depth(t) <= depth and valid_type(t, cfg):
                    seen.add(t)
        return tuple(sorted(seen, key=lambda t: (type_depth(t), type_to_str(t))))

    def types(self, depth: int | None = None) -> tuple:
        d = self.cfg.type_depth if depth is None else depth
        return self._types_upto(d)


# --- concrete type syntax -----------------------------------------------------

def type_to_str(t: TypeExpr) -> str:
    """Surface rendering; function arrows associate to the right."""
    if isinstance(t, Base):
        return t.name
    if isinstance(t, NatType):
        return "Nat"
    if isinstance(t, Fun):
        dom = type_to_str(t.dom)
        if isinstance(t.dom, Fun):
            dom = f"({dom})"
        return f"{dom} -> {type_to_str(t.cod)}"
    if isinstance(t, Record):
        inner = ", ".join(f"{l}: {type_to_str(v)}" for l, v in t.row)
        return "{" + inner + "}"
    inner = ", ".join(f"{l}: {type_to_str(v)}" for l, v in t.row)
    return "<" + inner + ">"


def type_to_label(t: TypeExpr) -> str:
    """Canonical rendering for operator labels: fully parenthesized arrows
    written with a non-bracket glyph so labels scan by bracket balance."""
    if isinstance(t, Base):
        return t.name
    if isinstance(t, NatType):
        return "Nat"
    if isinstance(t, Fun):
        return f"({type_to_label(t.dom)}→{type_to_label(t.cod)})"
    open_, close = ("{", "}") if isinstance(t, Record) else ("<", ">")
    inner = ",".join(f"{l}:{type_to_label(v)}" for l, v in t.row)
    return open_ + inner + close


class TypeSyntaxError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class _TypeParser:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def skip(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self):
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            raise TypeSyntaxError(f"expected {ch!r}", self.i)
        self.i += 1

    def label(self) -> str:
        self.skip()
        j = self.i
        while j < len(self.text) and (self.text[j].isalnum() or self.text[j] in "_+"):
            j += 1
        if j == self.i:
            raise TypeSyntaxError("expected a row label", self.i)
        out = self.text[self.i:j]
        self.i = j
        return out

    def row(self, close: str) -> tuple:
        pairs = []
        if self.peek() == close:
            self.i += 1
            return tuple(pairs)
        while True:
            l = self.label()
            self.expect(":")
            pairs.append((l, self.type_()))
            ch = self.peek()
            if ch == ",":
                self.i += 1
                continue
            self.expect(close)
            return tuple(pairs)

    def atom(self) -> TypeExpr:
        ch = self.peek()
        if ch == "(":
            self.i += 1
            t = self.type_()
            self.expect(")")
            return t
        if ch == "{":
            self.i += 1
            return record(self.row("}"))
        if ch == "<":
            self.i += 1
            return variant(self.row(">"))
        self.skip()
        j = self.i
        while j < len(self.text) and (self.text[j].isalnum() or self.text[j] == "_"):
            j += 1
        if j == self.i:
            raise TypeSyntaxError("expected a type", self.i)
        name = self.text[self.i:j]
        self.i = j
        return NAT if name == "Nat" else Base(name)

    def type_(self) -> TypeExpr:
        left = self.atom()
        self.skip()
        if self.text.startswith("->", self.i):
            self.i += 2
            return fun(left, self.type_())
        if self.text.startswith("→", self.i):
            self.i += 1
            return fun(left, self.type_())
        return left


def parse_type(text: str) -> TypeExpr:
    p = _TypeParser(text)
    t = p.type_()
    p.skip()
    if p.i != len(text):
        raise TypeSyntaxError("trailing input after type", p.i)
    return t


def config_to_dict(cfg: FragmentConfig) -> dict:
    return {"extensions": sorted(cfg.extensions),
            "base_types": list(cfg.base_types),
            "nat_bound": cfg.nat_bound, "type_depth": cfg.type_depth}


def config_from_dict(data: dict) -> FragmentConfig:
    return FragmentConfig(frozenset(data.get("extensions", ())),
                          tuple(data.get("base_types", ("b",))),
                          int(data.get("nat_bound", 8)),
                          int(data.get("type_depth", 3)))
