"""Type checker with derivation recording.

Variables live in an ordered environment where the most recent binding of a
name wins and duplicates are kept; procedures map to the environment of
bindings their bodies introduce. Expression judgments leave the
environments untouched; statement judgments thread them left to right and
may append bindings:

    T-Assign   G D |- e : t          =>  G D |- var t x := e : Cmd -| G+{x:t} D
    T-Update   G D |- e : G(x)       =>  G D |- x := e : Cmd -| G D
    T-Seq      thread G and D through S1 then S2
    T-If       both branches from the same inputs, same result type;
               output G = input + additions of both branches
    T-While    body must return Cmd and leave both environments fixed
    T-Begin    check sections then body with threading; outputs reset
               to the inputs, block bindings stay local
    T-Proc     D gains p -> (bindings the body added); G unchanged
    T-Call     G output = G + D(p)
    T-Par      like T-If without a condition; T-Protect passes through

A failed check raises TypeCheckError rendered as
"error[RULE] at <subterm>: <cause>".
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    Add, And, Begin, Call, Decl, Empty, Eq, Expr, FalseLit, If, Le, Mul,
    NatLit, Not, Par, ProcDecl, Protect, Redex, Seq, Stmt, Sub, TrueLit,
    TypeName, Update, Var, While, is_source_form, pretty, pretty_expr,
)


@dataclass(frozen=True)
class TypeEnv:
    bindings: tuple[tuple[str, TypeName], ...] = ()

    def lookup(self, name: str) -> TypeName | None:
        for key, t in reversed(self.bindings):
            if key == name:
                return t
        return None

    def extend(self, name: str, t: TypeName) -> "TypeEnv":
        return TypeEnv(self.bindings + ((name, t),))

    def is_prefix_of(self, other: "TypeEnv") -> bool:
        return self.bindings == other.bindings[:len(self.bindings)]

    def render(self) -> str:
        return "{" + ", ".join(f"{k}={t}" for k, t in self.bindings) + "}"


@dataclass(frozen=True)
class ProcTypeEnv:
    entries: tuple[tuple[str, TypeEnv], ...] = ()

    def lookup(self, name: str) -> TypeEnv | None:
        for key, g in self.entries:
            if key == name:
                return g
        return None

    def bind(self, name: str, g: TypeEnv) -> "ProcTypeEnv":
        if self.lookup(name) is not None:
            return ProcTypeEnv(tuple(
                (k, g if k == name else v) for k, v in self.entries))
        return ProcTypeEnv(self.entries + ((name, g),))

    def render(self) -> str:
        return "{" + ", ".join(f"{k}={g.render()}" for k, g in self.entries) + "}"


def env_union(g1: TypeEnv, g2: TypeEnv) -> TypeEnv:
    """Concatenation; duplicates survive, so lookups prefer g2's bindings."""
    return TypeEnv(g1.bindings + g2.bindings)


class PrefixError(Exception):
    """The before-environment is not a prefix of the after-environment;
    indicates a checker bug, since statements only append bindings."""


def env_diff(g_after: TypeEnv, g_before: TypeEnv) -> TypeEnv:
    """The suffix of bindings added after `g_before` (positional, not set)."""
    if not g_before.is_prefix_of(g_after):
        raise PrefixError(f"{g_before.render()} is not a prefix of {g_after.render()}")
    return TypeEnv(g_after.bindings[len(g_before.bindings):])


@dataclass(frozen=True)
class Judgment:
    rule: str
    gamma_in: TypeEnv
    delta_in: ProcTypeEnv
    subject: Redex
    type: TypeName
    gamma_out: TypeEnv
    delta_out: ProcTypeEnv
    children: tuple["Judgment", ...] = ()


class TypeCheckError(Exception):
    def __init__(self, rule: str, location: Redex, cause: str):
        self.rule = rule
        self.location = location
        self.cause = cause
        super().__init__(str(self))

    def __str__(self) -> str:
        return f"error[{self.rule}] at {_show(self.location)}: {self.cause}"


def _show(subject: Redex) -> str:
    try:
        return pretty(subject)
    except TypeError:
        return pretty_expr(subject)


def _mismatch(rule: str, location: Redex, expected: TypeName,
              found: TypeName) -> TypeCheckError:
    return TypeCheckError(rule, location, f"expected {expected}, found {found}")


def type_of_expr(gamma: TypeEnv, delta: ProcTypeEnv, e: Expr) -> Judgment:
    """Expression judgment; output environments always equal the inputs."""

    def axiom(rule: str, t: TypeName, children=()) -> Judgment:
        return Judgment(rule, gamma, delta, e, t, gamma, delta, children)

    def operand(rule: str, sub: Expr, want: TypeName) -> Judgment:
        j = type_of_expr(gamma, delta, sub)
        if j.type is not want:
            raise _mismatch(rule, e, want, j.type)
        return j

    match e:
        case NatLit(_):
            return axiom("T-Nat", TypeName.NAT)
        case TrueLit():
            return axiom("T-True", TypeName.BOOL)
        case FalseLit():
            return axiom("T-False", TypeName.BOOL)
        case Var(name):
            t = gamma.lookup(name)
            if t is None:
                raise TypeCheckError("T-Var", e, "unbound variable")
            return axiom("T-Var", t)
        case Add(a, b):
            return axiom("T-Add", TypeName.NAT,
                         (operand("T-Add", a, TypeName.NAT),
                          operand("T-Add", b, TypeName.NAT)))
        case Sub(a, b):
            return axiom("T-Sub", TypeName.NAT,
                         (operand("T-Sub", a, TypeName.NAT),
                          operand("T-Sub", b, TypeName.NAT)))
        case Mul(a, b):
            return axiom("T-Mult", TypeName.NAT,
                         (operand("T-Mult", a, TypeName.NAT),
                          operand("T-Mult", b, TypeName.NAT)))
        case Eq(a, b):
            return axiom("T-Equal", TypeName.BOOL,
                         (operand("T-Equal", a, TypeName.NAT),
                          operand("T-Equal", b, TypeName.NAT)))
        case Le(a, b):
            return axiom("T-LEqual", TypeName.BOOL,
                         (operand("T-LEqual", a, TypeName.NAT),
                          operand("T-LEqual", b, TypeName.NAT)))
        case And(a, b):
            return axiom("T-And", TypeName.BOOL,
                         (operand("T-And", a, TypeName.BOOL),
                          operand("T-And", b, TypeName.BOOL)))
        case Not(b):
            return axiom("T-Not", TypeName.BOOL,
                         (operand("T-Not", b, TypeName.BOOL),))
    raise TypeError(f"not an expression: {e!r}")


def type_of_stmt(gamma: TypeEnv, delta: ProcTypeEnv, s: Stmt) -> Judgment:
    match s:
        case Decl(t, name, rhs):
            j = type_of_expr(gamma, delta, rhs)
            if j.type is not t:
                raise _mismatch("T-Assign", s, t, j.type)
            return Judgment("T-Assign", gamma, delta, s, TypeName.CMD,
                            gamma.extend(name, t), delta, (j,))
        case Update(name, rhs):
            bound = gamma.lookup(name)
            if bound is None:
                raise TypeCheckError("T-Update", s, "unbound variable")
            j = type_of_expr(gamma, delta, rhs)
            if j.type is not bound:
                raise _mismatch("T-Update", s, bound, j.type)
            return Judgment("T-Update", gamma, delta, s, TypeName.CMD,
                            gamma, delta, (j,))
        case Seq(first, second):
            j1 = type_of_stmt(gamma, delta, first)
            j2 = type_of_stmt(j1.gamma_out, j1.delta_out, second)
            return Judgment("T-Seq", gamma, delta, s, j2.type,
                            j2.gamma_out, j2.delta_out, (j1, j2))
        case If(cond, then_branch, else_branch):
            jc = type_of_expr(gamma, delta, cond)
            if jc.type is not TypeName.BOOL:
                raise _mismatch("T-If", s, TypeName.BOOL, jc.type)
            j1 = type_of_stmt(gamma, delta, then_branch)
            j2 = type_of_stmt(gamma, delta, else_branch)
            if j1.type is not j2.type:
                raise TypeCheckError(
                    "T-If", s, f"branches disagree: {j1.type} vs {j2.type}")
            gamma_out = env_union(env_union(gamma, env_diff(j1.gamma_out, gamma)),
                                  env_diff(j2.gamma_out, gamma))
            return Judgment("T-If", gamma, delta, s, j1.type,
                            gamma_out, delta, (jc, j1, j2))
        case While(cond, body):
            jc = type_of_expr(gamma, delta, cond)
            if jc.type is not TypeName.BOOL:
                raise _mismatch("T-While", s, TypeName.BOOL, jc.type)
            jb = type_of_stmt(gamma, delta, body)
            if jb.type is not TypeName.CMD:
                raise _mismatch("T-While", s, TypeName.CMD, jb.type)
            if jb.gamma_out != gamma or jb.delta_out != delta:
                raise TypeCheckError("T-While", s,
                                     "loop body modifies environment")
            return Judgment("T-While", gamma, delta, s, TypeName.CMD,
                            gamma, delta, (jc, jb))
        case Begin(decls, procs, body):
            children = []
            g, d = gamma, delta
            if decls:
                for decl in decls:
                    j = type_of_stmt(g, d, decl)
                    children.append(j)
                    g, d = j.gamma_out, j.delta_out
            else:
                children.append(_empty_judgment(g, d))
            if procs:
                for proc in procs:
                    j = type_of_stmt(g, d, proc)
                    children.append(j)
                    g, d = j.gamma_out, j.delta_out
            else:
                children.append(_empty_judgment(g, d))
            jb = type_of_stmt(g, d, body)
            children.append(jb)
            if jb.type is not TypeName.CMD:
                raise _mismatch("T-Begin", s, TypeName.CMD, jb.type)
            return Judgment("T-Begin", gamma, delta, s, TypeName.CMD,
                            gamma, delta, tuple(children))
        case ProcDecl(name, body):
            jb = type_of_stmt(gamma, delta, body)
            if jb.type is not TypeName.CMD:
                raise _mismatch("T-Proc", s, TypeName.CMD, jb.type)
            added = env_diff(jb.gamma_out, gamma)
            return Judgment("T-Proc", gamma, delta, s, TypeName.CMD,
                            gamma, delta.bind(name, added), (jb,))
        case Call(name):
            bound = delta.lookup(name)
            if bound is None:
                raise TypeCheckError("T-Call", s, "unbound procedure")
            return Judgment("T-Call", gamma, delta, s, TypeName.CMD,
                            env_union(gamma, bound), delta)
        case Par(left, right):
            j1 = type_of_stmt(gamma, delta, left)
            j2 = type_of_stmt(gamma, delta, right)
            gamma_out = env_union(env_union(gamma, env_diff(j1.gamma_out, gamma)),
                                  env_diff(j2.gamma_out, gamma))
            return Judgment("T-Par", gamma, delta, s, TypeName.CMD,
                            gamma_out, delta, (j1, j2))
        case Protect(body):
            jb = type_of_stmt(gamma, delta, body)
            return Judgment("T-Protect", gamma, delta, s, TypeName.CMD,
                            jb.gamma_out, jb.delta_out, (jb,))
        case Empty():
            return _empty_judgment(gamma, delta)
        case _:
            raise TypeCheckError("check", s, "runtime-only construct")


def _empty_judgment(gamma: TypeEnv, delta: ProcTypeEnv) -> Judgment:
    return Judgment("T-Empty", gamma, delta, Empty(), TypeName.CMD,
                    gamma, delta)


def check_program(s: Stmt) -> Judgment:
    """Check a source program from empty environments, recording the full
    derivation. Runtime-only constructs are rejected before checking."""
    if not is_source_form(s):
        raise TypeCheckError("check", s, "runtime-only construct")
    return type_of_stmt(TypeEnv(), ProcTypeEnv(), s)


def render_derivation(j: Judgment) -> str:
    """Indented one-line-per-judgment rendering of a derivation tree."""
    lines: list[str] = []

    def walk(node: Judgment, depth: int) -> None:
        lines.append(
            "  " * depth
            + f"{node.rule}: {node.gamma_in.render()} {node.delta_in.render()}"
            + f" ⊢ {_show(node.subject)} : {node.type}"
            + f" ⊣ {node.gamma_out.render()} {node.delta_out.render()}"
        )
        for child in node.children:
            walk(child, depth + 1)

    walk(j, 0)
    return "\n".join(lines) + "\n"
