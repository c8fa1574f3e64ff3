"""The axiom catalogue, instantiation and redex matching.

Each schema is stored as a pair of templates in the concrete syntax (see
:mod:`relcalc.syntax`, template mode).  Metavariables come in three kinds:
``term`` (bare lower-case names), ``nat`` (names inside sugar brackets) and
``symbol`` (a tagged name such as ``R+`` standing for any generator).
Some nats are determined by the type of a term or the shape of a symbol;
those are listed in ``derived`` and filled in automatically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Mapping, Union

from .errors import IllTyped, MissingBinding, RelcalcError, TypeMismatch, UnknownSymbol
from .syntax import parse_template
from .terms import (
    Constant, Gen, GenMeta, Meta, NatExpr, Seq, Signature, SugarNode, Tensor, Term,
    positions, sugar, typecheck,
)

Binding = Union[Term, int, str]


@dataclass(frozen=True)
class AxiomSchema:
    id: str
    label: str
    side: str  # "leq" or "eq"
    lhs: Term
    rhs: Term
    metavariables: tuple[tuple[str, str], ...]
    derived: Mapping[str, tuple[str, str]] = field(default_factory=dict)
    group: str = ""

    @property
    def free_metavariables(self) -> tuple[tuple[str, str], ...]:
        return tuple(mv for mv in self.metavariables if mv[0] not in self.derived)

    def kind_of(self, name: str) -> str:
        for n, k in self.metavariables:
            if n == name:
                return k
        raise KeyError(name)

    def swapped(self) -> "AxiomSchema":
        """Sides exchanged; only used to build deliberately broken schemas."""
        return AxiomSchema(self.id + "_swapped", self.label + " (swapped)", self.side,
                           self.rhs, self.lhs, self.metavariables, self.derived, self.group)


@dataclass(frozen=True)
class AxiomInstance:
    schema: str
    bindings: Mapping[str, Binding]
    lhs: Term
    rhs: Term
    side: str


# ------------------------------------------------------------------ catalogue


def _mvars(*templates: Term) -> tuple[tuple[str, str], ...]:
    seen: dict[str, str] = {}
    for tpl in templates:
        for _, node in positions(tpl):
            if isinstance(node, Meta):
                seen.setdefault(node.name, "term")
            elif isinstance(node, GenMeta):
                seen.setdefault(node.name, "symbol")
            elif isinstance(node, SugarNode):
                for e in node.nats:
                    for p in e:
                        if isinstance(p, str):
                            seen.setdefault(p, "nat")
    return tuple(seen.items())


_RAW: list[tuple] = []


def _ax(id_, label, lhs, side, rhs, group, **derived):
    _RAW.append((id_, label, lhs, side, rhs, group, derived))


def _flip(s: str) -> str:
    return s.translate(str.maketrans("+-", "-+"))


# white cartesian bicategory; the equational part is mirrored into black below
_CART_EQ = [
    ("copier_{c}_as", "(copier{s}-as)", "cp+[n] ;+ (id+[n] *+ cp+[n])", "cp+[n] ;+ (cp+[n] *+ id+[n])"),
    ("cocopier_{c}_as", "(cocopier{s}-as)", "(id+[n] *+ cc+[n]) ;+ cc+[n]", "(cc+[n] *+ id+[n]) ;+ cc+[n]"),
    ("copier_{c}_un", "(copier{s}-un)", "cp+[n] ;+ (id+[n] *+ dc+[n])", "id+[n]"),
    ("cocopier_{c}_un", "(cocopier{s}-un)", "(id+[n] *+ cd+[n]) ;+ cc+[n]", "id+[n]"),
    ("copier_{c}_co", "(copier{s}-co)", "cp+[n] ;+ sw+[n,n]", "cp+[n]"),
    ("cocopier_{c}_co", "(cocopier{s}-co)", "sw+[n,n] ;+ cc+[n]", "cc+[n]"),
    ("F_{c}", "(F{s})", "(cp+[n] *+ id+[n]) ;+ (id+[n] *+ cc+[n])", "(id+[n] *+ cp+[n]) ;+ (cc+[n] *+ id+[n])"),
    ("S_{c}", "(S{s})", "cp+[n] ;+ cc+[n]", "id+[n]"),
]
for _id, _lab, _l, _r in _CART_EQ:
    _ax(_id.format(c="plus"), _lab.format(s="⁺"), _l, "eq", _r, "cartesian")
for _id, _lab, _l, _r in _CART_EQ:
    _ax(_id.format(c="minus"), _lab.format(s="⁻"), _flip(_l), "eq", _flip(_r), "cocartesian")

_ax("eps_discard_plus", "(ε-discard⁺)", "cd+[n] ;+ dc+[n]", "leq", "id0+", "cartesian")
_ax("eps_copier_plus", "(ε-copier⁺)", "cc+[n] ;+ cp+[n]", "leq", "id+[n] *+ id+[n]", "cartesian")
_ax("eta_discard_plus", "(η-discard⁺)", "id+[n]", "leq", "dc+[n] ;+ cd+[n]", "cartesian")
_ax("eta_copier_plus", "(η-copier⁺)", "id+[n]", "leq", "cp+[n] ;+ cc+[n]", "cartesian")
_ax("copier_plus_nat", "(copier⁺-nat)", "c ;+ cp+[m]", "leq", "cp+[n] ;+ (c *+ c)", "cartesian",
    n=("c", "in"), m=("c", "out"))
_ax("discard_plus_nat", "(discard⁺-nat)", "c ;+ dc+[m]", "leq", "dc+[n]", "cartesian",
    n=("c", "in"), m=("c", "out"))

_ax("eta_discard_minus", "(η-discard⁻)", "dc-[n] ;- cd-[n]", "leq", "id-[n]", "cocartesian")
_ax("eta_copier_minus", "(η-copier⁻)", "cp-[n] ;- cc-[n]", "leq", "id-[n]", "cocartesian")
_ax("eps_discard_minus", "(ε-discard⁻)", "id0-", "leq", "cd-[n] ;- dc-[n]", "cocartesian")
_ax("eps_copier_minus", "(ε-copier⁻)", "id-[n] *- id-[n]", "leq", "cc-[n] ;- cp-[n]", "cocartesian")
_ax("copier_minus_nat", "(copier⁻-nat)", "cp-[n] ;- (c *- c)", "leq", "c ;- cp-[m]", "cocartesian",
    n=("c", "in"), m=("c", "out"))
_ax("discard_minus_nat", "(discard⁻-nat)", "dc-[n]", "leq", "c ;- dc-[m]", "cocartesian",
    n=("c", "in"), m=("c", "out"))

# closed symmetric monoidal linear bicategory
_ax("delta_l", "(δ_l)", "a ;+ (b ;- c)", "leq", "(a ;+ b) ;- c", "linear")
_ax("delta_r", "(δ_r)", "(a ;- b) ;+ c", "leq", "a ;- (b ;+ c)", "linear")
_ax("tau_sym_plus", "(τσ⁺)", "id+[n+m]", "leq", "sw+[n,m] ;- sw-[m,n]", "linear")
_ax("gamma_sym_plus", "(γσ⁺)", "sw-[n,m] ;+ sw+[m,n]", "leq", "id-[n+m]", "linear")
_ax("tau_sym_minus", "(τσ⁻)", "id+[n+m]", "leq", "sw-[n,m] ;- sw+[m,n]", "linear")
_ax("gamma_sym_minus", "(γσ⁻)", "sw+[n,m] ;+ sw-[m,n]", "leq", "id-[n+m]", "linear")
_ax("tau_R_plus", "(τR⁺)", "id+[n]", "leq", "R+ ;- R-", "linear", n=("R", "ar"))
_ax("gamma_R_plus", "(γR⁺)", "R- ;+ R+", "leq", "id-[m]", "linear", m=("R", "coar"))
_ax("tau_R_minus", "(τR⁻)", "id+[m]", "leq", "R- ;- R+", "linear", m=("R", "coar"))
_ax("gamma_R_minus", "(γR⁻)", "R+ ;+ R-", "leq", "id-[n]", "linear", n=("R", "ar"))
_ax("tensor_minus_id_plus", "(⊗⁻-id⁺)", "id+[n+m]", "leq", "id+[n] *- id+[m]", "linear")
_ax("tensor_plus_id_minus", "(⊗⁺-id⁻)", "id-[n] *+ id-[m]", "leq", "id-[n+m]", "linear")
_ax("nu_plus_l", "(ν⁺_l)", "(a ;- b) *+ (c ;- d)", "leq", "(a *+ c) ;- (b *- d)", "linear")
_ax("nu_plus_r", "(ν⁺_r)", "(a ;- b) *+ (c ;- d)", "leq", "(a *- c) ;- (b *+ d)", "linear")
_ax("nu_minus_l", "(ν⁻_l)", "(a *- c) ;+ (b *+ d)", "leq", "(a ;+ b) *- (c ;+ d)", "linear")
_ax("nu_minus_r", "(ν⁻_r)", "(a *+ c) ;+ (b *- d)", "leq", "(a ;+ b) *- (c ;+ d)", "linear")

# first-order bicategory: linear adjointness of the (co)monoids
_ax("tau_copier_plus", "(τcopier⁺)", "id+[n]", "leq", "cp+[n] ;- cc-[n]", "fo")
_ax("gamma_copier_plus", "(γcopier⁺)", "cc-[n] ;+ cp+[n]", "leq", "id-[n+n]", "fo")
_ax("tau_discard_plus", "(τdiscard⁺)", "id+[n]", "leq", "dc+[n] ;- cd-[n]", "fo")
_ax("gamma_discard_plus", "(γdiscard⁺)", "cd-[n] ;+ dc+[n]", "leq", "id0-", "fo")
_ax("tau_copier_minus", "(τcopier⁻)", "id+[n]", "leq", "cp-[n] ;- cc+[n]", "fo")
_ax("gamma_copier_minus", "(γcopier⁻)", "cc+[n] ;+ cp-[n]", "leq", "id-[n+n]", "fo")
_ax("tau_discard_minus", "(τdiscard⁻)", "id+[n]", "leq", "dc-[n] ;- cd+[n]", "fo")
_ax("gamma_discard_minus", "(γdiscard⁻)", "cd+[n] ;+ dc-[n]", "leq", "id0-", "fo")
_ax("tau_cocopier_plus", "(τcocopier⁺)", "id+[n+n]", "leq", "cc+[n] ;- cp-[n]", "fo")
_ax("gamma_cocopier_plus", "(γcocopier⁺)", "cp-[n] ;+ cc+[n]", "leq", "id-[n]", "fo")
_ax("tau_codiscard_plus", "(τcodiscard⁺)", "id0+", "leq", "cd+[n] ;- dc-[n]", "fo")
_ax("gamma_codiscard_plus", "(γcodiscard⁺)", "dc-[n] ;+ cd+[n]", "leq", "id-[n]", "fo")
_ax("tau_cocopier_minus", "(τcocopier⁻)", "id+[n+n]", "leq", "cc-[n] ;- cp+[n]", "fo")
_ax("gamma_cocopier_minus", "(γcocopier⁻)", "cp+[n] ;+ cc-[n]", "leq", "id-[n]", "fo")
_ax("tau_codiscard_minus", "(τcodiscard⁻)", "id0+", "leq", "cd-[n] ;- dc+[n]", "fo")
_ax("gamma_codiscard_minus", "(γcodiscard⁻)", "dc+[n] ;+ cd-[n]", "leq", "id-[n]", "fo")

# linear Frobenius laws
_ax("bw_frob", "(bw-Frob)", "(cp-[n] *+ id+[n]) ;+ (id+[n] *+ cc+[n])", "eq",
    "(id+[n] *+ cp+[n]) ;+ (cc-[n] *+ id+[n])", "fo")
_ax("bw_frob2", "(bw-Frob')", "(cp+[n] *+ id+[n]) ;+ (id+[n] *+ cc-[n])", "eq",
    "(id+[n] *+ cp-[n]) ;+ (cc+[n] *+ id+[n])", "fo")
_ax("wb_frob", "(wb-Frob)", "(cp+[n] *- id-[n]) ;- (id-[n] *- cc-[n])", "eq",
    "(id-[n] *- cp-[n]) ;- (cc+[n] *- id-[n])", "fo")
_ax("wb_frob2", "(wb-Frob')", "(cp-[n] *- id-[n]) ;- (id-[n] *- cc+[n])", "eq",
    "(id-[n] *- cp+[n]) ;- (cc-[n] *- id-[n])", "fo")

# symmetric monoidal structure, one copy per colour
for _c, _s, _g in (("w", "+", "∘"), ("b", "-", "•")):
    def _t(text: str, s=_s) -> str:
        return text.replace("~", s)
    _ax(f"seq_assoc_{_c}", f"(;{_g}-assoc)", _t("a ;~ (b ;~ c)"), "eq", _t("(a ;~ b) ;~ c"), "smc")
    _ax(f"tensor_assoc_{_c}", f"(⊗{_g}-assoc)", _t("a *~ (b *~ c)"), "eq", _t("(a *~ b) *~ c"), "smc")
    _ax(f"seq_unit_left_{_c}", f"(;{_g}-unit-l)", _t("id~[n] ;~ a"), "eq", "a", "smc", n=("a", "in"))
    _ax(f"seq_unit_right_{_c}", f"(;{_g}-unit-r)", _t("a ;~ id~[m]"), "eq", "a", "smc", m=("a", "out"))
    _ax(f"tensor_unit_left_{_c}", f"(⊗{_g}-unit-l)", _t("id0~ *~ a"), "eq", "a", "smc")
    _ax(f"tensor_unit_right_{_c}", f"(⊗{_g}-unit-r)", _t("a *~ id0~"), "eq", "a", "smc")
    _ax(f"interchange_{_c}", f"(interchange{_g})", _t("(a *~ b) ;~ (c *~ d)"), "eq",
        _t("(a ;~ c) *~ (b ;~ d)"), "smc")
    _ax(f"sym_natural_{_c}", f"(σ{_g}-nat)", _t("(a *~ id~[o]) ;~ sw~[m,o]"), "eq",
        _t("sw~[n,o] ;~ (id~[o] *~ a)"), "smc", n=("a", "in"), m=("a", "out"))
    _ax(f"sym_inverse_{_c}", f"(σ{_g}-inv)", _t("sw~[n,m] ;~ sw~[m,n]"), "eq", _t("id~[n+m]"), "smc")


@lru_cache(maxsize=None)
def _catalogue() -> tuple[AxiomSchema, ...]:
    out = []
    for id_, label, lhs, side, rhs, group, derived in _RAW:
        l, r = parse_template(lhs), parse_template(rhs)
        out.append(AxiomSchema(id_, label, side, l, r, _mvars(l, r), dict(derived), group))
    ids = [s.id for s in out]
    assert len(ids) == len(set(ids)), "duplicate schema ids"
    return tuple(out)


def axiom_schemas() -> list[AxiomSchema]:
    """The full catalogue, in a fixed order."""
    return list(_catalogue())


@lru_cache(maxsize=None)
def _by_id() -> dict[str, AxiomSchema]:
    return {s.id: s for s in _catalogue()}


def get_schema(name: str) -> AxiomSchema:
    try:
        return _by_id()[name]
    except KeyError:
        raise RelcalcError(f"unknown axiom {name!r}") from None


# -------------------------------------------------------------- instantiation


def _nat_value(e: NatExpr, b: Mapping[str, Binding]) -> int:
    total = 0
    for p in e:
        if isinstance(p, int):
            total += p
        else:
            v = b[p]
            if not isinstance(v, int):
                raise IllTyped(f"{p} must be bound to a natural number")
            total += v
    return total


def substitute(tpl: Term, b: Mapping[str, Binding]) -> Term:
    if isinstance(tpl, Meta):
        v = b[tpl.name]
        if not isinstance(v, Term):
            raise IllTyped(f"{tpl.name} must be bound to a term")
        return v
    if isinstance(tpl, GenMeta):
        v = b[tpl.name]
        if not isinstance(v, str):
            raise IllTyped(f"{tpl.name} must be bound to a symbol name")
        return Gen(v, tpl.color)
    if isinstance(tpl, SugarNode):
        return sugar(tpl.kind, tpl.color, *(_nat_value(e, b) for e in tpl.nats))
    if isinstance(tpl, Seq):
        return Seq(tpl.color, substitute(tpl.left, b), substitute(tpl.right, b))
    if isinstance(tpl, Tensor):
        return Tensor(tpl.color, substitute(tpl.left, b), substitute(tpl.right, b))
    return tpl


def _derived_value(schema: AxiomSchema, nat: str, b: Mapping[str, Binding],
                   sig: Signature) -> int | None:
    var, attr = schema.derived[nat]
    if var not in b:
        return None
    v = b[var]
    if attr in ("in", "out"):
        if not isinstance(v, Term):
            raise IllTyped(f"{var} must be bound to a term")
        n, m = typecheck(v, sig)
        return n if attr == "in" else m
    if not isinstance(v, str):
        raise IllTyped(f"{var} must be bound to a symbol name")
    ar, coar = sig.shape(v)
    return ar if attr == "ar" else coar


def complete_bindings(schema: AxiomSchema, b: Mapping[str, Binding],
                      sig: Signature) -> dict[str, Binding]:
    """Check kinds, fill derived nats and report what is missing."""
    out = dict(b)
    for name in list(out):
        try:
            kind = schema.kind_of(name)
        except KeyError:
            raise IllTyped(f"{schema.id} has no metavariable {name!r}") from None
        v = out[name]
        if kind == "term" and not isinstance(v, Term):
            raise IllTyped(f"{name} must be bound to a term")
        if kind == "nat" and (not isinstance(v, int) or isinstance(v, bool) or v < 0):
            raise IllTyped(f"{name} must be bound to a natural number")
        if kind == "symbol":
            if not isinstance(v, str):
                raise IllTyped(f"{name} must be bound to a symbol name")
            if v not in sig:
                raise UnknownSymbol(v)
    for nat in schema.derived:
        try:
            val = _derived_value(schema, nat, out, sig)
        except TypeMismatch as e:
            raise IllTyped(f"binding of {schema.derived[nat][0]} is ill-typed: {e}") from None
        if val is None:
            continue
        if nat in out and out[nat] != val:
            raise IllTyped(f"{nat} must equal {val} for these bindings")
        out[nat] = val
    missing = [n for n, _ in schema.metavariables if n not in out]
    if missing:
        raise MissingBinding(f"{schema.id}: no binding for {', '.join(missing)}")
    return out


def instantiate(schema: AxiomSchema | str, bindings: Mapping[str, Binding],
                sig: Signature | None = None) -> AxiomInstance:
    """Closed lhs and rhs for the given bindings; both must share a type."""
    if isinstance(schema, str):
        schema = get_schema(schema)
    sig = sig or Signature()
    b = complete_bindings(schema, bindings, sig)
    lhs, rhs = substitute(schema.lhs, b), substitute(schema.rhs, b)
    try:
        tl, tr = typecheck(lhs, sig), typecheck(rhs, sig)
    except TypeMismatch as e:
        raise IllTyped(f"{schema.id}: instance does not typecheck: {e}") from None
    if tl != tr:
        raise IllTyped(f"{schema.id}: sides have types {tl} and {tr}")
    return AxiomInstance(schema.id, b, lhs, rhs, schema.side)


# ------------------------------------------------------------------- matching


def _match(tpl: Term, t: Term, b: dict, sig: Signature) -> Iterator[dict]:
    if isinstance(tpl, Meta):
        got = b.get(tpl.name)
        if got is None:
            yield {**b, tpl.name: t}
        elif got == t:
            yield b
        return
    if isinstance(tpl, GenMeta):
        if isinstance(t, Gen) and t.color is tpl.color:
            got = b.get(tpl.name)
            if got is None:
                yield {**b, tpl.name: t.name}
            elif got == t.name:
                yield b
        return
    if isinstance(tpl, SugarNode):
        free = sorted({p for e in tpl.nats for p in e if isinstance(p, str) and p not in b})
        if not free:
            if sugar(tpl.kind, tpl.color, *(_nat_value(e, b) for e in tpl.nats)) == t:
                yield b
            return
        try:
            n, m = typecheck(t, sig)
        except RelcalcError:
            return
        bound = n + m
        for vals in itertools.product(range(bound + 1), repeat=len(free)):
            nb = {**b, **dict(zip(free, vals))}
            if sugar(tpl.kind, tpl.color, *(_nat_value(e, nb) for e in tpl.nats)) == t:
                yield nb
        return
    if isinstance(tpl, (Seq, Tensor)):
        if type(t) is type(tpl) and t.color is tpl.color:
            for b1 in _match(tpl.left, t.left, b, sig):
                yield from _match(tpl.right, t.right, b1, sig)
        return
    if tpl == t:
        yield b


def match_side(schema: AxiomSchema, side: str, t: Term, sig: Signature,
               partial: Mapping[str, Binding] | None = None) -> list[AxiomInstance]:
    """All instances whose ``side`` ('lhs' or 'rhs') is exactly ``t``."""
    tpl = schema.lhs if side == "lhs" else schema.rhs
    found: list[AxiomInstance] = []
    seen = set()
    for b in _match(tpl, t, dict(partial or {}), sig):
        try:
            inst = instantiate(schema, b, sig)
        except (MissingBinding, IllTyped, UnknownSymbol):
            continue
        if (inst.lhs if side == "lhs" else inst.rhs) != t:
            continue
        key = (inst.lhs, inst.rhs)
        if key not in seen:
            seen.add(key)
            found.append(inst)
    return found
