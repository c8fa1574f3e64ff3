"""First-order logic with equality, in both directions.

Concrete syntax, loosest first::

    F ::= F "\\/" F | F "/\\" F | "!" F | ("exists" | "forall") VAR "." F
        | "top" | "bot" | T "=" T | T "!=" T | NAME "(" T, ... ")" | NAME | "(" F ")"
    T ::= VAR | NAME "(" T, ... ")" | NAME

Variables are ``x1, x2, ...`` (plus ``y<i>`` and ``z<d>_<i>``, which only
the decoder produces).  A quantifier body extends as far right as
possible.  In a formula, an application is a predicate unless an ``=``
follows it; inside a term every application is a function symbol and a
bare non-variable name is a constant.

Encoding follows the context convention: a formula in context x1..xn
becomes a term n → 0, and a quantifier in context n must bind x(n+1).
Function symbols f of arity k become symbols f: k → 1 and the encoder
reports the axioms that force them to be total functions.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

from ..derived import cap, negate_term
from ..errors import InvalidInput, ParseError, ScopeError
from ..semantics import FiniteInterpretation
from ..terms import (
    B, W, Cocopier, Codiscard, Color, Constant, Copier, Discard, Gen, Id0, Id1, Seq,
    Signature, Sym, Tensor, Term, ident, sugar, typecheck,
)
from ..theories import Axiom, function_axioms
from ._lex import Cursor

# ------------------------------------------------------------------- AST


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Fn:
    name: str
    args: tuple["FOLTerm", ...] = ()


FOLTerm = Union[Var, Fn]


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Eq:
    left: FOLTerm
    right: FOLTerm


@dataclass(frozen=True)
class Pred:
    name: str
    args: tuple[FOLTerm, ...] = ()


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


Formula = Union[Top, Bot, Eq, Pred, And, Or, Not, Exists, Forall]

_VAR = re.compile(r"[xyz]\d+(_\d+)?$")


def is_var(name: str) -> bool:
    return bool(_VAR.match(name))


# ---------------------------------------------------------------- parsing

_SPEC = [("op", r"\\/|/\\|!=|[!=().,]"), ("name", r"[A-Za-z][A-Za-z0-9_]*")]


def parse_fol(text: str) -> Formula:
    cur = Cursor(text, _SPEC)
    f = _disj(cur)
    cur.done()
    return f


def _disj(cur):
    f = _conj(cur)
    while cur.accept("\\/"):
        f = Or(f, _conj(cur))
    return f


def _conj(cur):
    f = _unary(cur)
    while cur.accept("/\\"):
        f = And(f, _unary(cur))
    return f


def _unary(cur):
    if cur.accept("!"):
        return Not(_unary(cur))
    t = cur.peek
    if t.text in ("exists", "forall"):
        cur.next()
        v = cur.next()
        if v.kind != "name" or not is_var(v.text):
            raise ParseError(v.pos, "expected a variable after the quantifier")
        cur.expect(".")
        body = _disj(cur)
        return Exists(v.text, body) if t.text == "exists" else Forall(v.text, body)
    if t.text in ("top", "bot"):
        cur.next()
        return Top() if t.text == "top" else Bot()
    if t.text == "(":
        cur.next()
        f = _disj(cur)
        cur.expect(")")
        return f
    if t.kind != "name":
        raise ParseError(t.pos, f"expected a formula, found {t.text or 'end of input'!r}")
    cur.next()
    args = _args(cur) if cur.peek.text == "(" else None
    if cur.peek.text in ("=", "!="):
        left = _as_term(t.text, args)
        op = cur.next().text
        right = _term(cur)
        return Eq(left, right) if op == "=" else Not(Eq(left, right))
    if is_var(t.text) and args is None:
        raise ParseError(t.pos, f"variable {t.text} used as a formula")
    return Pred(t.text, args or ())


def _args(cur) -> tuple:
    cur.expect("(")
    if cur.accept(")"):
        return ()
    out = [_term(cur)]
    while cur.accept(","):
        out.append(_term(cur))
    cur.expect(")")
    return tuple(out)


def _as_term(name: str, args) -> FOLTerm:
    if args is None:
        return Var(name) if is_var(name) else Fn(name)
    return Fn(name, args)


def _term(cur) -> FOLTerm:
    t = cur.next()
    if t.kind != "name":
        raise ParseError(t.pos, f"expected a term, found {t.text or 'end of input'!r}")
    return _as_term(t.text, _args(cur) if cur.peek.text == "(" else None)


# ---------------------------------------------------------------- printing


def show_term(t: FOLTerm) -> str:
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.name
    return f"{t.name}({', '.join(show_term(a) for a in t.args)})"


def show_fol(f: Formula) -> str:
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Eq):
        return f"{show_term(f.left)} = {show_term(f.right)}"
    if isinstance(f, Pred):
        return f.name if not f.args else f"{f.name}({', '.join(show_term(a) for a in f.args)})"
    if isinstance(f, Not):
        if isinstance(f.arg, Eq):
            return f"{show_term(f.arg.left)} != {show_term(f.arg.right)}"
        return f"!{_wrap(f.arg)}"
    if isinstance(f, And):
        return f"{_wrap(f.left)} /\\ {_wrap(f.right)}"
    if isinstance(f, Or):
        return f"{_wrap(f.left)} \\/ {_wrap(f.right)}"
    q = "exists" if isinstance(f, Exists) else "forall"
    return f"{q} {f.var}. {show_fol(f.body)}"


def _wrap(f: Formula) -> str:
    s = show_fol(f)
    return s if isinstance(f, (Top, Bot, Pred)) else f"({s})"


# --------------------------------------------------------------- analysis


def free_vars(f: Formula | FOLTerm) -> set[str]:
    if isinstance(f, Var):
        return {f.name}
    if isinstance(f, (Fn, Pred)):
        return set().union(*(free_vars(a) for a in f.args))
    if isinstance(f, Eq):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (And, Or)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Not):
        return free_vars(f.arg)
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.body) - {f.var}
    return set()


def symbol_shapes(f: Formula) -> dict[str, tuple[int, int]]:
    """Signature shapes used by ``f``: predicates k → 0, functions k → 1."""
    out: dict[str, tuple[int, int]] = {}

    def note(name, shape):
        if out.setdefault(name, shape) != shape:
            raise InvalidInput(f"symbol {name} used with shapes {out[name]} and {shape}")

    def term(t):
        if isinstance(t, Fn):
            note(t.name, (len(t.args), 1))
            for a in t.args:
                term(a)

    def form(g):
        if isinstance(g, Pred):
            note(g.name, (len(g.args), 0))
            for a in g.args:
                term(a)
        elif isinstance(g, Eq):
            term(g.left)
            term(g.right)
        elif isinstance(g, (And, Or)):
            form(g.left)
            form(g.right)
        elif isinstance(g, Not):
            form(g.arg)
        elif isinstance(g, (Exists, Forall)):
            form(g.body)

    form(f)
    return out


def _functions(f: Formula) -> list[str]:
    return sorted(n for n, (_, coar) in symbol_shapes(f).items() if coar == 1)


# ---------------------------------------------------------------- encoding


@dataclass(frozen=True)
class FOLEncoding:
    term: Term
    signature: Signature
    axioms: tuple[Axiom, ...]  # function axioms for every function symbol used


def fan_out(n: int, k: int, color: Color = W) -> Term:
    """n → k·n: k copies of the n input wires."""
    if k == 0:
        return sugar("discard", color, n)
    if k == 1:
        return ident(color, n)
    return Seq(color, sugar("copier", color, n), Tensor(color, ident(color, n), fan_out(n, k - 1, color)))


def _tensor_all(ts: Sequence[Term]) -> Term:
    if not ts:
        return Id0(W)
    out = ts[-1]
    for t in reversed(ts[:-1]):
        out = Tensor(W, t, out)
    return out


def _index(name: str) -> int:
    m = re.fullmatch(r"x(\d+)", name)
    if not m or int(m.group(1)) < 1:
        raise ScopeError(f"{name} is not a context variable x1, x2, ...")
    return int(m.group(1))


def encode_term(t: FOLTerm, n: int) -> Term:
    if isinstance(t, Var):
        i = _index(t.name)
        if i > n:
            raise ScopeError(f"{t.name} is outside the context x1..x{n}")
        return Tensor(W, sugar("discard", W, i - 1), Tensor(W, Id1(W), sugar("discard", W, n - i)))
    k = len(t.args)
    return Seq(W, Seq(W, fan_out(n, k), _tensor_all([encode_term(a, n) for a in t.args])),
               Gen(t.name, W))


def _enc(f: Formula, n: int) -> Term:
    if isinstance(f, Top):
        return sugar("discard", W, n)
    if isinstance(f, Bot):
        return sugar("discard", B, n)
    if isinstance(f, Eq):
        both = Seq(W, fan_out(n, 2), Tensor(W, encode_term(f.left, n), encode_term(f.right, n)))
        return Seq(W, both, cap(W, 1))
    if isinstance(f, Pred):
        k = len(f.args)
        return Seq(W, Seq(W, fan_out(n, k), _tensor_all([encode_term(a, n) for a in f.args])),
                   Gen(f.name, W))
    if isinstance(f, And):
        return Seq(W, sugar("copier", W, n), Tensor(W, _enc(f.left, n), _enc(f.right, n)))
    if isinstance(f, Or):
        return Seq(B, sugar("copier", B, n), Tensor(B, _enc(f.left, n), _enc(f.right, n)))
    if isinstance(f, (Exists, Forall)):
        if f.var != f"x{n + 1}":
            raise ScopeError(f"in context x1..x{n} a quantifier must bind x{n + 1}, not {f.var}")
        col = W if isinstance(f, Exists) else B
        return Seq(col, Tensor(col, ident(col, n), Codiscard(col)), _enc(f.body, n + 1))
    if isinstance(f, Not):
        inner = _enc(f.arg, n)
        return negate_term(inner, Signature.of(symbol_shapes(f.arg)))
    raise TypeError(f"not a formula: {f!r}")


def encode_fol(f: Formula, n: int, sig: Signature | None = None) -> FOLEncoding:
    """The n → 0 term for ``f`` in context x1..xn."""
    for v in free_vars(f):
        if _index(v) > n:
            raise ScopeError(f"free variable {v} is outside the context x1..x{n}")
    shapes = symbol_shapes(f)
    if sig is None:
        sig = Signature.of(shapes)
    else:
        for name, shape in shapes.items():
            if name not in sig or sig.shape(name) != shape:
                raise InvalidInput(f"{name} must be declared with shape {shape}")
    term = _enc(f, n)
    axioms = tuple(a for fn in _functions(f) for a in function_axioms(fn, sig))
    return FOLEncoding(term, sig, axioms)


def permutation_term(perm: Sequence[int], color: Color = W) -> Term:
    """n → n wiring that sends input wire i to output wire perm[i]."""
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise InvalidInput("not a permutation")
    # bubble sort, recording adjacent transpositions
    cur, swaps = list(perm), []
    for i in range(n):
        for j in range(n - 1 - i):
            if cur[j] > cur[j + 1]:
                cur[j], cur[j + 1] = cur[j + 1], cur[j]
                swaps.append(j)
    out = ident(color, n)
    for j in swaps:
        layer = Tensor(color, ident(color, j), Tensor(color, Sym(color), ident(color, n - j - 2)))
        out = Seq(color, out, layer)
    return out


def weaken(t: Term, n: int, extra: int) -> Term:
    """A formula term in context n, read in context n + extra."""
    return Seq(W, Tensor(W, ident(W, n), sugar("discard", W, extra)), t)


# ----------------------------------------------------------------- oracle


def _value(t: FOLTerm, env: Mapping[str, int], interp: FiniteInterpretation) -> int:
    if isinstance(t, Var):
        return env[t.name]
    args = tuple(_value(a, env, interp) for a in t.args)
    outs = [y[0] for x, y in interp.rho[t.name].pairs if x == args]
    if len(outs) != 1:
        raise InvalidInput(f"{t.name} is not interpreted as a total function")
    return outs[0]


def holds(f: Formula, env: Mapping[str, int], interp: FiniteInterpretation) -> bool:
    """Tarski satisfaction."""
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, Eq):
        return _value(f.left, env, interp) == _value(f.right, env, interp)
    if isinstance(f, Pred):
        vals = tuple(_value(a, env, interp) for a in f.args)
        rel = interp.rho[f.name]
        return (vals[:rel.n], vals[rel.n:]) in rel
    if isinstance(f, And):
        return holds(f.left, env, interp) and holds(f.right, env, interp)
    if isinstance(f, Or):
        return holds(f.left, env, interp) or holds(f.right, env, interp)
    if isinstance(f, Not):
        return not holds(f.arg, env, interp)
    body = f.body
    vals = (holds(body, {**env, f.var: x}, interp) for x in range(interp.size))
    return any(vals) if isinstance(f, Exists) else all(vals)


def _table(f: Formula, interp: FiniteInterpretation) -> tuple[tuple[str, ...], frozenset]:
    """Satisfying assignments of f's free variables, computed bottom-up.

    Same semantics as :func:`holds`, but quantifiers project and
    conjunctions join tables, so deep quantifier nesting stays cheap.
    """
    X = range(interp.size)
    if isinstance(f, (Top, Bot)):
        return (), frozenset({()}) if isinstance(f, Top) else frozenset()
    if isinstance(f, (Eq, Pred)):
        vs = tuple(sorted(free_vars(f)))
        return vs, frozenset(a for a in itertools.product(X, repeat=len(vs))
                             if holds(f, dict(zip(vs, a)), interp))
    if isinstance(f, Not):
        vs, rows = _table(f.arg, interp)
        return vs, frozenset(itertools.product(X, repeat=len(vs))) - rows
    if isinstance(f, (And, Or)):
        lv, lr = _table(f.left, interp)
        rv, rr = _table(f.right, interp)
        if isinstance(f, And):
            return _join(lv, lr, rv, rr)
        vs = tuple(sorted(set(lv) | set(rv)))
        return vs, _widen(lv, lr, vs, X) | _widen(rv, rr, vs, X)
    bv, br = _table(f.body, interp)
    if f.var not in bv:
        if not X:  # over the empty domain ∃ is false and ∀ is true
            return bv, frozenset() if isinstance(f, Exists) else frozenset(itertools.product(X, repeat=len(bv)))
        return bv, br
    k = bv.index(f.var)
    vs = bv[:k] + bv[k + 1:]
    if isinstance(f, Exists):
        return vs, frozenset(a[:k] + a[k + 1:] for a in br)
    return vs, frozenset(a for a in itertools.product(X, repeat=len(vs))
                         if all(a[:k] + (x,) + a[k:] in br for x in X))


def _join(lv, lr, rv, rr):
    shared = [v for v in lv if v in rv]
    vs = tuple(sorted(set(lv) | set(rv)))
    li, ri = [lv.index(v) for v in shared], [rv.index(v) for v in shared]
    index: dict[tuple, list[tuple]] = {}
    for b in rr:
        index.setdefault(tuple(b[i] for i in ri), []).append(b)
    out = set()
    for a in lr:
        for b in index.get(tuple(a[i] for i in li), ()):
            env = dict(zip(rv, b))
            env.update(zip(lv, a))
            out.add(tuple(env[v] for v in vs))
    return vs, frozenset(out)


def _widen(vs0, rows, vs, X):
    """Rows over ``vs0`` extended by every value of the extra variables in ``vs``."""
    extra = [v for v in vs if v not in vs0]
    out = set()
    for a in rows:
        env = dict(zip(vs0, a))
        for ext in itertools.product(X, repeat=len(extra)):
            env.update(zip(extra, ext))
            out.add(tuple(env[v] for v in vs))
    return frozenset(out)


def fol_eval_vars(f: Formula, variables: Sequence[str], interp: FiniteInterpretation) -> frozenset:
    """All assignments to ``variables`` (as tuples) satisfying ``f``."""
    vs, rows = _table(f, interp)
    missing = set(vs) - set(variables)
    if missing:
        raise ScopeError(f"free variables {sorted(missing)} are not listed")
    idx = [list(variables).index(v) for v in vs]
    return frozenset(a for a in itertools.product(range(interp.size), repeat=len(variables))
                     if tuple(a[i] for i in idx) in rows)


def fol_eval(f: Formula, n: int, interp: FiniteInterpretation) -> frozenset:
    """The n-tuples over x1..xn satisfying ``f``."""
    return fol_eval_vars(f, [f"x{i}" for i in range(1, n + 1)], interp)


# ---------------------------------------------------------------- decoding


def _rename_term(t: FOLTerm, sub: Mapping[str, str]) -> FOLTerm:
    if isinstance(t, Var):
        return Var(sub.get(t.name, t.name))
    return Fn(t.name, tuple(_rename_term(a, sub) for a in t.args))


def rename(f: Formula, sub: Mapping[str, str]) -> Formula:
    """Simultaneous renaming of free variables (bound names never clash here)."""
    if isinstance(f, (Top, Bot)):
        return f
    if isinstance(f, Eq):
        return Eq(_rename_term(f.left, sub), _rename_term(f.right, sub))
    if isinstance(f, Pred):
        return Pred(f.name, tuple(_rename_term(a, sub) for a in f.args))
    if isinstance(f, And):
        return And(rename(f.left, sub), rename(f.right, sub))
    if isinstance(f, Or):
        return Or(rename(f.left, sub), rename(f.right, sub))
    if isinstance(f, Not):
        return Not(rename(f.arg, sub))
    inner = {k: v for k, v in sub.items() if k != f.var}
    return type(f)(f.var, rename(f.body, inner))


def _xs(k: int, pre: str = "x") -> list[Var]:
    return [Var(f"{pre}{i}") for i in range(1, k + 1)]


def _eqs(pairs, color: Color) -> Formula:
    atoms = [Eq(Var(a), Var(b)) if color is W else Not(Eq(Var(a), Var(b))) for a, b in pairs]
    return _fold(atoms, color)


def _fold(parts: list[Formula], color: Color) -> Formula:
    if not parts:
        return Top() if color is W else Bot()
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out) if color is W else Or(p, out)
    return out


def decode_fol(t: Term, sig: Signature | None = None) -> tuple[Formula, int, int]:
    """A formula over x1..xn (inputs) and y1..ym (outputs) equivalent to ``t``.

    Each composition at tree depth d binds its middle wires as z<d>_1,
    z<d>_2, ...; since depths differ along any branch, no binder can
    capture another.
    """
    sig = sig or Signature()
    n, m = typecheck(t, sig)
    return _dec(t, sig, 0), n, m


def _dec(t: Term, sig: Signature, depth: int) -> Formula:
    if isinstance(t, Constant):
        c = t.color
        pairs = {
            Id0: [], Id1: [("x1", "y1")], Sym: [("x1", "y2"), ("x2", "y1")],
            Copier: [("x1", "y1"), ("x1", "y2")], Discard: [],
            Cocopier: [("x1", "y1"), ("x2", "y1")], Codiscard: [],
        }[type(t)]
        return _eqs(pairs, c)
    if isinstance(t, Gen):
        ar, coar = sig.shape(t.name)
        if t.color is W:
            return Pred(t.name, tuple(_xs(ar) + _xs(coar, "y")))
        # type coar → ar: the inputs fill the relation's output positions
        return Not(Pred(t.name, tuple(_xs(ar, "y") + _xs(coar))))
    if isinstance(t, Seq):
        _, k = typecheck(t.left, sig)
        zs = [f"z{depth}_{i}" for i in range(1, k + 1)]
        phi = rename(_dec(t.left, sig, depth + 1), {f"y{i}": z for i, z in enumerate(zs, 1)})
        psi = rename(_dec(t.right, sig, depth + 1), {f"x{i}": z for i, z in enumerate(zs, 1)})
        body: Formula = And(phi, psi) if t.color is W else Or(phi, psi)
        q = Exists if t.color is W else Forall
        for z in reversed(zs):
            body = q(z, body)
        return body
    if isinstance(t, Tensor):
        n1, m1 = typecheck(t.left, sig)
        n2, m2 = typecheck(t.right, sig)
        shift = {**{f"x{i}": f"x{n1 + i}" for i in range(1, n2 + 1)},
                 **{f"y{j}": f"y{m1 + j}" for j in range(1, m2 + 1)}}
        phi = _dec(t.left, sig, depth + 1)
        psi = rename(_dec(t.right, sig, depth + 1), shift)
        return And(phi, psi) if t.color is W else Or(phi, psi)
    raise TypeError(f"cannot decode {t!r}")


def decoded_vars(n: int, m: int) -> list[str]:
    return [f"x{i}" for i in range(1, n + 1)] + [f"y{j}" for j in range(1, m + 1)]
