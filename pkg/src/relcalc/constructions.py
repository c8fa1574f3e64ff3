"""Derivations built by structural recursion.

``adjunction_derivation`` produces, for any term c : n → m, checkable
proofs of

    id⁺_n ≤ c ;⁻ α(c)        and        α(c) ;⁺ c ≤ id⁻_m .

``deduction_transform`` turns a derivation of a ≤ b that may use an extra
axiom id⁺₀ ≤ c into a derivation of c ⊗⁺ id⁺_n ≤ b ;⁻ α(a) that does not.
The derivation is first split into single steps, each handled by the
case for the context the step sits in, and the pieces are chained by the
transitivity case.
"""

from __future__ import annotations

from functools import lru_cache

from .derived import linear_adjoint
from .errors import InvalidInput, StepMismatch
from .proofs import (
    AssocStep, Derivation, ProofBuilder, RewriteStep, Step, TheoryStep, check_derivation,
    apply_step,
)
from .terms import (
    B, W, Codiscard, Cocopier, Copier, Dir, Discard, Gen, Id0, Id1, Seq, Signature, Sym,
    Tensor, Term, ident, subterm_at, typecheck,
)
from .theories import Theory

SL, SR, TL, TR = Dir.SL, Dir.SR, Dir.TL, Dir.TR

# base cases: (constant, colour) -> (tau axiom, gamma axiom)
_BASE = {
    (Copier, W): ("tau_copier_plus", "gamma_copier_plus"),
    (Discard, W): ("tau_discard_plus", "gamma_discard_plus"),
    (Copier, B): ("tau_copier_minus", "gamma_copier_minus"),
    (Discard, B): ("tau_discard_minus", "gamma_discard_minus"),
    (Cocopier, W): ("tau_cocopier_plus", "gamma_cocopier_plus"),
    (Codiscard, W): ("tau_codiscard_plus", "gamma_codiscard_plus"),
    (Cocopier, B): ("tau_cocopier_minus", "gamma_cocopier_minus"),
    (Codiscard, B): ("tau_codiscard_minus", "gamma_codiscard_minus"),
    (Sym, W): ("tau_sym_plus", "gamma_sym_plus"),
    (Sym, B): ("tau_sym_minus", "gamma_sym_minus"),
}


def adjunction_derivation(c: Term, thy: Theory | None = None) -> tuple[Derivation, Derivation]:
    """(τ, γ) derivations for ``c`` over the theory's signature (no axioms used)."""
    thy = thy or Theory(Signature())
    typecheck(c, thy.signature)
    return _tau(c, thy), _gamma(c, thy)


def tau(c: Term, thy: Theory) -> Derivation:
    return _tau(c, thy)


def gamma(c: Term, thy: Theory) -> Derivation:
    return _gamma(c, thy)


def _tau(c: Term, thy: Theory) -> Derivation:
    sig = thy.signature
    n, _ = typecheck(c, sig)
    a = linear_adjoint(c)
    pb = ProofBuilder(thy, ident(W, n))
    if isinstance(c, Gen):
        pb.rewrite("tau_R_plus" if c.color is W else "tau_R_minus", bind={"R": c.name})
    elif isinstance(c, (Id0, Id1)):
        unit = "seq_unit_right_b" if c.color is W else "seq_unit_left_b"
        pb.back(unit, bind={"a": ident(W, n)})
    elif isinstance(c, Sym):
        pb.rewrite(_BASE[(Sym, c.color)][0], bind={"n": 1, "m": 1})
    elif (type(c), c.color) in _BASE:
        pb.rewrite(_BASE[(type(c), c.color)][0], bind={"n": 1})
    elif isinstance(c, Seq):
        x, y = c.left, c.right
        _, k = typecheck(x, sig)
        pb.embed(_tau(x, thy))
        if c.color is W:
            # id ≤ x ;- αx ≤ (x ;+ (y ;- αy)) ;- αx ≤ ((x;+y) ;- αy) ;- αx
            pb.back("seq_unit_right_w", [SL])
            pb.embed(_tau(y, thy), [SL, SR])
            pb.rewrite("delta_l", [SL])
            pb.back("seq_assoc_b")
        else:
            # id ≤ x ;- αx ≤ x ;- ((y ;- αy) ;+ αx) ≤ x ;- (y ;- (αy ;+ αx))
            pb.back("seq_unit_left_w", [SR])
            pb.embed(_tau(y, thy), [SR, SL])
            pb.rewrite("delta_r", [SR])
            pb.rewrite("seq_assoc_b")
    elif isinstance(c, Tensor):
        x, y = c.left, c.right
        n1, _ = typecheck(x, sig)
        n2, _ = typecheck(y, sig)
        pb.assoc(to=Tensor(W, ident(W, n1), ident(W, n2)))
        pb.embed(_tau(x, thy), [TL])
        pb.embed(_tau(y, thy), [TR])
        pb.rewrite("nu_plus_l" if c.color is W else "nu_plus_r")
    else:
        raise TypeError(f"no adjunction derivation for {c!r}")
    return pb.build(Seq(B, c, a))


def _gamma(c: Term, thy: Theory) -> Derivation:
    sig = thy.signature
    _, m = typecheck(c, sig)
    a = linear_adjoint(c)
    pb = ProofBuilder(thy, Seq(W, a, c))
    if isinstance(c, Gen):
        pb.rewrite("gamma_R_plus" if c.color is W else "gamma_R_minus", bind={"R": c.name})
    elif isinstance(c, (Id0, Id1)):
        unit = "seq_unit_right_w" if c.color is W else "seq_unit_left_w"
        pb.rewrite(unit)
    elif isinstance(c, Sym):
        pb.rewrite(_BASE[(Sym, c.color)][1], bind={"n": 1, "m": 1})
    elif (type(c), c.color) in _BASE:
        pb.rewrite(_BASE[(type(c), c.color)][1], bind={"n": 1})
    elif isinstance(c, Seq):
        x, y = c.left, c.right
        if c.color is W:
            # (αy ;- αx) ;+ (x ;+ y) → ((αy ;- αx) ;+ x) ;+ y → (αy ;- (αx ;+ x)) ;+ y
            pb.rewrite("seq_assoc_w")
            pb.rewrite("delta_r", [SL])
            pb.embed(_gamma(x, thy), [SL, SR])
            pb.rewrite("seq_unit_right_b", [SL])
            pb.embed(_gamma(y, thy))
        else:
            # (αy ;+ αx) ;+ (x ;- y) → αy ;+ (αx ;+ (x ;- y)) → αy ;+ ((αx ;+ x) ;- y)
            pb.back("seq_assoc_w")
            pb.rewrite("delta_l", [SR])
            pb.embed(_gamma(x, thy), [SR, SL])
            pb.rewrite("seq_unit_left_b", [SR])
            pb.embed(_gamma(y, thy))
    elif isinstance(c, Tensor):
        x, y = c.left, c.right
        pb.rewrite("nu_minus_l" if c.color is W else "nu_minus_r")
        pb.embed(_gamma(x, thy), [TL])
        pb.embed(_gamma(y, thy), [TR])
        pb.assoc(to=ident(B, m))
    else:
        raise TypeError(f"no adjunction derivation for {c!r}")
    return pb.build(ident(B, m))


# ------------------------------------------------------------ deduction


class _Deduction:
    """Case analysis for one fixed theory and added axiom id⁺₀ ≤ c."""

    def __init__(self, thy: Theory, c: Term):
        self.thy = thy
        self.c = c
        self.added = len(thy.axioms)
        self.ext = thy.extend((Id0(W), c))

    def arity(self, t: Term) -> tuple[int, int]:
        return tuple(typecheck(t, self.thy.signature))  # type: ignore[return-value]

    def lhs(self, n: int) -> Term:
        return Tensor(W, self.c, ident(W, n))

    # lemmas on the scalar c -------------------------------------------

    def dup(self) -> Derivation:
        """c ≤ c ⊗ c."""
        pb = ProofBuilder(self.thy, self.c)
        pb.back("seq_unit_right_w", bind={"a": self.c})
        pb.rewrite("copier_plus_nat")
        pb.rewrite("seq_unit_left_w")
        return pb.build(Tensor(W, self.c, self.c))

    def commute(self, o: int) -> Derivation:
        """c ⊗ id_o = id_o ⊗ c."""
        c = self.c
        pb = ProofBuilder(self.thy, Tensor(W, c, ident(W, o)))
        pb.back("seq_unit_right_w")
        pb.rewrite("sym_natural_w")
        pb.rewrite("seq_unit_left_w")
        return pb.build(Tensor(W, ident(W, o), c))

    def slide_left(self, b1: Term) -> Derivation:
        """c ⊗ b1 = b1 ;+ (c ⊗ id_l) for b1 : n → l."""
        c = self.c
        pb = ProofBuilder(self.thy, Tensor(W, c, b1))
        pb.back("seq_unit_left_w", [TL], bind={"a": c})
        pb.back("seq_unit_right_w", [TR], bind={"a": b1})
        pb.back("interchange_w")
        pb.rewrite("tensor_unit_left_w", [SL])
        return pb.build()

    def slide_right(self, y: Term) -> Derivation:
        """c ⊗ y = (c ⊗ id_l) ;+ y for y : l → n."""
        c = self.c
        pb = ProofBuilder(self.thy, Tensor(W, c, y))
        pb.back("seq_unit_right_w", [TL], bind={"a": c})
        pb.back("seq_unit_left_w", [TR], bind={"a": y})
        pb.back("interchange_w")
        pb.rewrite("tensor_unit_left_w", [SR])
        return pb.build()

    # cases ------------------------------------------------------------

    def refl(self, e: Term) -> Derivation:
        """c ⊗ id_n ≤ e ;- α(e)."""
        n, _ = self.arity(e)
        pb = ProofBuilder(self.thy, self.lhs(n))
        pb.back("seq_unit_right_w", [TL], bind={"a": self.c})
        pb.rewrite("discard_plus_nat", [TL])
        pb.rewrite("tensor_unit_left_w")
        pb.embed(_tau(e, self.thy))
        return pb.build(Seq(B, e, linear_adjoint(e)))

    def single(self, e1: Term, step: Step) -> Derivation:
        """c ⊗ id_n ≤ e2 ;- α(e1) for one step e1 → e2."""
        if step.path:
            return self.in_context(e1, step)
        if isinstance(step, TheoryStep) and step.index == self.added:
            if e1 != Id0(W):
                raise InvalidInput("added axiom applied to a non-unit subterm")
            pb = ProofBuilder(self.thy, self.lhs(0))
            pb.rewrite("tensor_unit_right_w")
            pb.back("seq_unit_right_b", bind={"a": self.c})
            return pb.build(Seq(B, self.c, linear_adjoint(e1)))
        d = self.refl(e1)
        pb = ProofBuilder(self.thy, d.start)
        pb.embed(d)
        moved = _reroot(step, (SL,))
        pb._push(moved)
        return pb.build()

    def in_context(self, e1: Term, step: Step) -> Derivation:
        head = step.path[0]
        inner = _reroot(step, (), drop=1)
        if isinstance(e1, Seq) and head in (SL, SR):
            if head is SL:
                p1 = self.single(e1.left, inner)
                p2 = self.refl(e1.right)
            else:
                p1 = self.refl(e1.left)
                p2 = self.single(e1.right, inner)
            return self.seq_case(e1.color, p1, p2)
        if isinstance(e1, Tensor) and head in (TL, TR):
            if head is TL:
                p1 = self.single(e1.left, inner)
                p2 = self.refl(e1.right)
            else:
                p1 = self.refl(e1.left)
                p2 = self.single(e1.right, inner)
            return self.tensor_case(e1.color, p1, p2)
        raise InvalidInput("step path does not fit the term")

    @staticmethod
    def _parts(p: Derivation) -> tuple[Term, Term]:
        """For p : c ⊗ id ≤ b ;- α(a), return (a, b)."""
        end = p.end
        assert isinstance(end, Seq) and end.color is B
        return linear_adjoint(end.right), end.left

    def seq_case(self, col, p1: Derivation, p2: Derivation) -> Derivation:
        a1, b1 = self._parts(p1)
        a2, b2 = self._parts(p2)
        n, _ = self.arity(a1)
        c = self.c
        pb = ProofBuilder(self.thy, self.lhs(n))
        pb.embed(self.dup(), [TL])
        pb.back("tensor_assoc_w")
        pb.embed(p1, [TR])
        if col is W:
            pb.back("seq_unit_right_b", [TL], bind={"a": c})
            pb.rewrite("nu_plus_l")
            pb.rewrite("tensor_unit_left_b", [SR])
            pb.embed(self.slide_left(b1), [SL])
            pb.embed(p2, [SL, SR])
            pb.rewrite("delta_l", [SL])
            pb.back("seq_assoc_b")
        else:
            pb.back("seq_unit_left_b", [TL], bind={"a": c})
            pb.rewrite("nu_plus_r")
            pb.rewrite("tensor_unit_left_b", [SL])
            pb.embed(self.slide_right(linear_adjoint(a1)), [SR])
            pb.embed(p2, [SR, SL])
            pb.rewrite("delta_r", [SR])
            pb.rewrite("seq_assoc_b")
        return pb.build(Seq(B, Seq(col, b1, b2), linear_adjoint(Seq(col, a1, a2))))

    def tensor_case(self, col, p1: Derivation, p2: Derivation) -> Derivation:
        a1, b1 = self._parts(p1)
        a2, b2 = self._parts(p2)
        n1, _ = self.arity(a1)
        n2, _ = self.arity(a2)
        c = self.c
        pb = ProofBuilder(self.thy, self.lhs(n1 + n2))
        pb.embed(self.dup(), [TL])
        pb.assoc(to=Tensor(W, c, Tensor(W, Tensor(W, c, ident(W, n1)), ident(W, n2))))
        pb.embed(self.commute(n1), [TR, TL])
        pb.assoc(to=Tensor(W, Tensor(W, c, ident(W, n1)), Tensor(W, c, ident(W, n2))))
        pb.embed(p1, [TL])
        pb.embed(p2, [TR])
        pb.rewrite("nu_plus_l" if col is W else "nu_plus_r")
        return pb.build(Seq(B, Tensor(col, b1, b2), linear_adjoint(Tensor(col, a1, a2))))

    def trans(self, p1: Derivation, p2: Derivation) -> Derivation:
        """From c⊗id ≤ e ;- α(a) and c⊗id ≤ b ;- α(e) get c⊗id ≤ b ;- α(a)."""
        a, e = self._parts(p1)
        e2, b = self._parts(p2)
        if e != e2:
            raise InvalidInput("derivations do not chain")
        n, _ = self.arity(a)
        pb = ProofBuilder(self.thy, self.lhs(n))
        pb.embed(self.dup(), [TL])
        pb.embed(_scalar_seq(self), [TL])
        pb.back("seq_unit_right_w", [TR])
        pb.back("interchange_w")
        pb.embed(p2, [SL])
        pb.embed(p1, [SR])
        pb.rewrite("delta_l")
        pb.rewrite("delta_r", [SL])
        pb.embed(_gamma(e, self.thy), [SL, SR])
        pb.rewrite("seq_unit_right_b", [SL])
        return pb.build(Seq(B, b, linear_adjoint(a)))

    def run(self, d: Derivation) -> Derivation:
        cur = d.start
        acc = self.refl(cur) if not d.steps else None
        for step in d.steps:
            nxt, _ = apply_step(step, cur, self.ext)
            piece = self.single(cur, step)
            acc = piece if acc is None else self.trans(acc, piece)
            cur = nxt
        assert acc is not None
        return acc


def _scalar_seq(ded: _Deduction) -> Derivation:
    """c ⊗ c = c ;+ c."""
    c = ded.c
    pb = ProofBuilder(ded.thy, Tensor(W, c, c))
    pb.back("seq_unit_right_w", [TL], bind={"a": c})
    pb.back("seq_unit_left_w", [TR], bind={"a": c})
    pb.back("interchange_w")
    pb.rewrite("tensor_unit_right_w", [SL])
    pb.rewrite("tensor_unit_left_w", [SR])
    return pb.build(Seq(W, c, c))


def _reroot(step: Step, prefix: tuple, drop: int = 0) -> Step:
    path = prefix + tuple(step.path[drop:])
    if isinstance(step, RewriteStep):
        return RewriteStep(step.axiom, path, step.bind, step.direction)
    if isinstance(step, AssocStep):
        return AssocStep(path, step.to)
    return TheoryStep(step.index, path)


def deduction_transform(thy: Theory, c: Term, d: Derivation) -> Derivation:
    """Discharge the added axiom id⁺₀ ≤ c from ``d``.

    ``d`` must check in ``thy`` extended by that axiom (appended last).
    The result checks in ``thy`` and proves c ⊗⁺ id⁺_n ≤ b ;⁻ α(a).
    """
    sig = thy.signature
    if tuple(typecheck(c, sig)) != (0, 0):
        raise InvalidInput("the added axiom must be a 0 -> 0 term")
    ext = thy.extend((Id0(W), c))
    res = check_derivation(ext, d)
    if not res.ok:
        raise InvalidInput(f"derivation does not check in the extended theory: {res.error}")
    out = _Deduction(thy, c).run(d)
    return Derivation(thy, out.start, out.end, out.steps)
