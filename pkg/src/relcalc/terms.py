"""Monoidal signatures, two-coloured terms, typing, sugar and normalisation.

A term is an immutable tree.  Leaves are generators (a signature symbol in
one of two colours) or one of the seven colour-indexed constants; inner
nodes are sequential composition and monoidal product, again coloured.
White is the existential/conjunctive fragment, black its De Morgan dual.

Template nodes (:class:`Meta`, :class:`GenMeta`, :class:`SugarNode`) only
appear inside axiom schemas; typechecking refuses them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import ClassVar, Iterable, Iterator, Mapping, Union

from .errors import TypeMismatch, UnknownSymbol


class Color(enum.Enum):
    WHITE = "+"
    BLACK = "-"

    @property
    def flip(self) -> "Color":
        return Color.BLACK if self is Color.WHITE else Color.WHITE

    @property
    def sign(self) -> str:
        return self.value


W = Color.WHITE
B = Color.BLACK


@dataclass(frozen=True)
class Type:
    input: int
    output: int

    def __post_init__(self):
        if self.input < 0 or self.output < 0:
            raise ValueError("wire counts are natural numbers")

    def __iter__(self):
        yield self.input
        yield self.output

    def __str__(self) -> str:
        return f"{self.input} -> {self.output}"


@dataclass(frozen=True)
class Signature:
    """Symbol name -> (arity, coarity)."""

    symbols: tuple[tuple[str, int, int], ...] = ()

    def __post_init__(self):
        names = [s[0] for s in self.symbols]
        if len(set(names)) != len(names):
            raise ValueError("duplicate symbol names")
        for name, ar, coar in self.symbols:
            if ar < 0 or coar < 0:
                raise ValueError(f"negative arity for {name}")
        object.__setattr__(self, "symbols", tuple(sorted(self.symbols)))

    @classmethod
    def of(cls, mapping: Mapping[str, tuple[int, int]] | None = None, **kw) -> "Signature":
        items = dict(mapping or {})
        items.update(kw)
        return cls(tuple((k, int(v[0]), int(v[1])) for k, v in items.items()))

    def __contains__(self, name: str) -> bool:
        return any(s[0] == name for s in self.symbols)

    def shape(self, name: str) -> tuple[int, int]:
        for s, ar, coar in self.symbols:
            if s == name:
                return ar, coar
        raise UnknownSymbol(name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s[0] for s in self.symbols)

    def as_dict(self) -> dict[str, tuple[int, int]]:
        return {s: (a, c) for s, a, c in self.symbols}

    def extend(self, **kw: tuple[int, int]) -> "Signature":
        d = self.as_dict()
        d.update(kw)
        return Signature.of(d)

    def union(self, other: "Signature") -> "Signature":
        d = self.as_dict()
        for k, v in other.as_dict().items():
            if k in d and d[k] != v:
                raise ValueError(f"conflicting shapes for {k}")
            d[k] = v
        return Signature.of(d)

    def to_json(self) -> dict:
        return {"symbols": {s: {"ar": a, "coar": c} for s, a, c in self.symbols}}

    @classmethod
    def from_json(cls, data: Mapping) -> "Signature":
        syms = data.get("symbols", data)
        return cls.of({k: (v["ar"], v["coar"]) for k, v in syms.items()})


# --------------------------------------------------------------------- terms


class Term:
    """Base class.  Equality is structural; hashes are cached."""

    __slots__ = ()

    def _key(self) -> tuple:  # pragma: no cover - overridden
        raise NotImplementedError

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if type(self) is not type(other) or hash(self) != hash(other):
            return False
        return self._key() == other._key()

    def __ne__(self, other) -> bool:
        return not self == other

    def __hash__(self) -> int:
        return self._h  # type: ignore[attr-defined]

    def __str__(self) -> str:
        from .syntax import print_term

        return print_term(self)

    @property
    def size(self) -> int:
        return 1


def _seal(obj, *key):
    object.__setattr__(obj, "_h", hash((type(obj).__name__,) + key))


@dataclass(frozen=True, eq=False, repr=False)
class Gen(Term):
    name: str
    color: Color
    _h: int = field(init=False, compare=False)

    def __post_init__(self):
        _seal(self, self.name, self.color)

    def _key(self):
        return (self.name, self.color)

    def __repr__(self):
        return f"Gen({self.name!r}, {self.color.name})"


@dataclass(frozen=True, eq=False, repr=False)
class Constant(Term):
    color: Color
    _h: int = field(init=False, compare=False)

    arity: ClassVar[int] = 0
    coarity: ClassVar[int] = 0

    def __post_init__(self):
        _seal(self, self.color)

    def _key(self):
        return (self.color,)

    def __repr__(self):
        return f"{type(self).__name__}({self.color.name})"


class Id0(Constant):
    arity, coarity = 0, 0


class Id1(Constant):
    arity, coarity = 1, 1


class Sym(Constant):
    arity, coarity = 2, 2


class Copier(Constant):
    arity, coarity = 1, 2


class Discard(Constant):
    arity, coarity = 1, 0


class Cocopier(Constant):
    arity, coarity = 2, 1


class Codiscard(Constant):
    arity, coarity = 0, 1


CONSTANTS: tuple[type[Constant], ...] = (Id0, Id1, Sym, Copier, Discard, Cocopier, Codiscard)


@dataclass(frozen=True, eq=False, repr=False)
class Seq(Term):
    color: Color
    left: Term
    right: Term
    _h: int = field(init=False, compare=False)
    _size: int = field(init=False, compare=False)

    def __post_init__(self):
        _seal(self, self.color, hash(self.left), hash(self.right))
        object.__setattr__(self, "_size", 1 + self.left.size + self.right.size)

    def _key(self):
        return (self.color, self.left, self.right)

    @property
    def size(self) -> int:
        return self._size

    def __repr__(self):
        return f"Seq({self.color.name}, {self.left!r}, {self.right!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Tensor(Term):
    color: Color
    left: Term
    right: Term
    _h: int = field(init=False, compare=False)
    _size: int = field(init=False, compare=False)

    def __post_init__(self):
        _seal(self, self.color, hash(self.left), hash(self.right))
        object.__setattr__(self, "_size", 1 + self.left.size + self.right.size)

    def _key(self):
        return (self.color, self.left, self.right)

    @property
    def size(self) -> int:
        return self._size

    def __repr__(self):
        return f"Tensor({self.color.name}, {self.left!r}, {self.right!r})"


Binary = (Seq, Tensor)


# ------------------------------------------------------------ template nodes

NatExpr = tuple[Union[str, int], ...]  # a sum of variables and literals


@dataclass(frozen=True, eq=False, repr=False)
class Meta(Term):
    """Term metavariable."""

    name: str
    _h: int = field(init=False, compare=False)

    def __post_init__(self):
        _seal(self, self.name)

    def _key(self):
        return (self.name,)

    def __repr__(self):
        return f"Meta({self.name!r})"


@dataclass(frozen=True, eq=False, repr=False)
class GenMeta(Term):
    """Symbol metavariable in a fixed colour (R∘ / R• in a schema)."""

    name: str
    color: Color
    _h: int = field(init=False, compare=False)

    def __post_init__(self):
        _seal(self, self.name, self.color)

    def _key(self):
        return (self.name, self.color)

    def __repr__(self):
        return f"GenMeta({self.name!r}, {self.color.name})"


@dataclass(frozen=True, eq=False, repr=False)
class SugarNode(Term):
    """``sugar(kind, color, *nats)`` with symbolic arities."""

    kind: str
    color: Color
    nats: tuple[NatExpr, ...]
    _h: int = field(init=False, compare=False)

    def __post_init__(self):
        _seal(self, self.kind, self.color, self.nats)

    def _key(self):
        return (self.kind, self.color, self.nats)

    def __repr__(self):
        return f"SugarNode({self.kind!r}, {self.color.name}, {self.nats!r})"


TEMPLATE_NODES = (Meta, GenMeta, SugarNode)


# -------------------------------------------------------------------- paths


class Dir(enum.Enum):
    SL = "SL"
    SR = "SR"
    TL = "TL"
    TR = "TR"


Path = tuple[Dir, ...]


def as_path(p: Iterable[Union[str, Dir]]) -> Path:
    return tuple(d if isinstance(d, Dir) else Dir(d) for d in p)


def subterm_at(t: Term, path: Iterable[Union[str, Dir]]) -> Term:
    for i, d in enumerate(as_path(path)):
        if d in (Dir.SL, Dir.SR) and isinstance(t, Seq):
            t = t.left if d is Dir.SL else t.right
        elif d in (Dir.TL, Dir.TR) and isinstance(t, Tensor):
            t = t.left if d is Dir.TL else t.right
        else:
            raise KeyError(f"path component {i} ({d.value}) does not fit {type(t).__name__}")
    return t


def replace_at(t: Term, path: Iterable[Union[str, Dir]], new: Term) -> Term:
    path = as_path(path)
    if not path:
        return new
    head, rest = path[0], path[1:]
    if head in (Dir.SL, Dir.SR) and isinstance(t, Seq):
        if head is Dir.SL:
            return Seq(t.color, replace_at(t.left, rest, new), t.right)
        return Seq(t.color, t.left, replace_at(t.right, rest, new))
    if head in (Dir.TL, Dir.TR) and isinstance(t, Tensor):
        if head is Dir.TL:
            return Tensor(t.color, replace_at(t.left, rest, new), t.right)
        return Tensor(t.color, t.left, replace_at(t.right, rest, new))
    raise KeyError(f"path component {head.value} does not fit {type(t).__name__}")


def positions(t: Term, prefix: Path = ()) -> Iterator[tuple[Path, Term]]:
    """All (path, subterm) pairs, pre-order."""
    yield prefix, t
    if isinstance(t, Seq):
        yield from positions(t.left, prefix + (Dir.SL,))
        yield from positions(t.right, prefix + (Dir.SR,))
    elif isinstance(t, Tensor):
        yield from positions(t.left, prefix + (Dir.TL,))
        yield from positions(t.right, prefix + (Dir.TR,))


def symbols_of(t: Term) -> set[str]:
    return {s.name for _, s in positions(t) if isinstance(s, Gen)}


def depth(t: Term) -> int:
    if isinstance(t, Binary):
        return 1 + max(depth(t.left), depth(t.right))
    return 0


# ------------------------------------------------------------------- typing


@lru_cache(maxsize=1 << 18)
def _typecheck(t: Term, sig: Signature) -> tuple[int, int]:
    if isinstance(t, Constant):
        return t.arity, t.coarity
    if isinstance(t, Gen):
        ar, coar = sig.shape(t.name)
        return (ar, coar) if t.color is W else (coar, ar)
    if isinstance(t, Seq):
        try:
            ln, lm = _typecheck(t.left, sig)
        except TypeMismatch as e:
            raise _shift(e, Dir.SL) from None
        try:
            rn, rm = _typecheck(t.right, sig)
        except TypeMismatch as e:
            raise _shift(e, Dir.SR) from None
        if lm != rn:
            raise TypeMismatch((), f"right input {lm}", f"{rn}", "sequential composition")
        return ln, rm
    if isinstance(t, Tensor):
        try:
            ln, lm = _typecheck(t.left, sig)
        except TypeMismatch as e:
            raise _shift(e, Dir.TL) from None
        try:
            rn, rm = _typecheck(t.right, sig)
        except TypeMismatch as e:
            raise _shift(e, Dir.TR) from None
        return ln + rn, lm + rm
    raise TypeError(f"cannot typecheck template node {t!r}")


def _shift(e: TypeMismatch, d: Dir) -> TypeMismatch:
    return TypeMismatch((d,) + e.position, e.expected, e.found)


def typecheck(t: Term, sig: Signature) -> Type:
    """Type of ``t`` over ``sig``; raises UnknownSymbol or TypeMismatch."""
    return Type(*_typecheck(t, sig))


# -------------------------------------------------------------------- sugar

SUGAR_KINDS = ("id", "sym", "copier", "discard", "cocopier", "codiscard")


@lru_cache(maxsize=None)
def sugar(kind: str, color: Color, n: int, m: int | None = None) -> Term:
    """n-ary (or (n, m)-ary for ``sym``) structure built from the primitives.

    The one-wire cases are the primitives themselves; larger arities follow
    the recursive clauses, with ternary tensors nested to the right.
    """
    if n < 0 or (m is not None and m < 0):
        raise ValueError("arities are natural numbers")
    c = color
    if kind == "sym":
        if m is None:
            raise ValueError("sym needs two arities")
        if n == 0:
            return sugar("id", c, m)
        if m == 0:
            return sugar("id", c, n)
        if n == 1 and m == 1:
            return Sym(c)
        if n == 1:
            return Seq(c, Tensor(c, sugar("sym", c, 1, m - 1), Id1(c)),
                       Tensor(c, sugar("id", c, m - 1), Sym(c)))
        return Seq(c, Tensor(c, Id1(c), sugar("sym", c, n - 1, m)),
                   Tensor(c, sugar("sym", c, 1, m), sugar("id", c, n - 1)))
    if m is not None:
        raise ValueError(f"{kind} takes a single arity")
    if n == 0:
        return Id0(c)
    if kind == "id":
        return Id1(c) if n == 1 else Tensor(c, Id1(c), sugar("id", c, n - 1))
    if kind == "discard":
        return Discard(c) if n == 1 else Tensor(c, Discard(c), sugar("discard", c, n - 1))
    if kind == "codiscard":
        return Codiscard(c) if n == 1 else Tensor(c, Codiscard(c), sugar("codiscard", c, n - 1))
    if kind == "copier":
        if n == 1:
            return Copier(c)
        k = n - 1
        return Seq(c, Tensor(c, Copier(c), sugar("copier", c, k)),
                   Tensor(c, Id1(c), Tensor(c, sugar("sym", c, 1, k), sugar("id", c, k))))
    if kind == "cocopier":
        if n == 1:
            return Cocopier(c)
        k = n - 1
        return Seq(c, Tensor(c, Id1(c), Tensor(c, sugar("sym", c, k, 1), sugar("id", c, k))),
                   Tensor(c, Cocopier(c), sugar("cocopier", c, k)))
    raise ValueError(f"unknown sugar kind {kind!r}")


def ident(color: Color, n: int) -> Term:
    return sugar("id", color, n)


# ------------------------------------------------------------ normalisation


def _chain(t: Term, cls, color: Color) -> list[Term]:
    if isinstance(t, cls) and t.color is color:
        return _chain(t.left, cls, color) + _chain(t.right, cls, color)
    return [t]


def _is_identity(t: Term, color: Color) -> bool:
    if isinstance(t, (Id0, Id1)) and t.color is color:
        return True
    return (isinstance(t, Tensor) and t.color is color
            and _is_identity(t.left, color) and _is_identity(t.right, color))


def _rebuild(cls, color: Color, parts: list[Term]) -> Term:
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = cls(color, p, out)
    return out


@lru_cache(maxsize=1 << 16)
def assoc_normalize(t: Term) -> Term:
    """Right-nest same-coloured chains and drop unit factors."""
    if not isinstance(t, Binary):
        return t
    col = t.color
    if isinstance(t, Tensor):
        parts: list[Term] = []
        for f in _chain(t, Tensor, col):
            nf = assoc_normalize(f)
            parts.extend(_chain(nf, Tensor, col))
        parts = [p for p in parts if not (isinstance(p, Id0) and p.color is col)]
        return _rebuild(Tensor, col, parts) if parts else Id0(col)
    parts = []
    for f in _chain(t, Seq, col):
        nf = assoc_normalize(f)
        parts.extend(_chain(nf, Seq, col))
    kept = [p for p in parts if not _is_identity(p, col)]
    if not kept:
        # a composite of identities: keep a single one (they all agree)
        return parts[0]
    return _rebuild(Seq, col, kept)
