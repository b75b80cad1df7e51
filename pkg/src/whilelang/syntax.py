"""Abstract syntax of the While language.

Three layers share one set of node classes:

* basic forms: arithmetic/boolean expressions, declarations, update,
  sequencing, if/while;
* extended forms: begin blocks with variable and procedure declaration
  sections, call, par, protect;
* runtime-only forms that reduction introduces and the concrete grammar
  never accepts: protected regions, beginscope/endscope markers, bare
  expressions and values in statement position, and the empty statement.

The module also defines evaluation contexts over statements and the
`decompose`/`plug` pair that drives the one-step reduction relation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union


class TypeName(enum.Enum):
    NAT = "Nat"
    BOOL = "Bool"
    CMD = "Cmd"

    def __str__(self) -> str:
        return self.value


# ---------------------------------------------------------------------------
# Values

@dataclass(frozen=True)
class NatV:
    n: int


@dataclass(frozen=True)
class TrueV:
    pass


@dataclass(frozen=True)
class FalseV:
    pass


@dataclass(frozen=True)
class VoidV:
    pass


Value = Union[NatV, TrueV, FalseV, VoidV]

VOID = VoidV()


def value_text(v: Value) -> str:
    match v:
        case NatV(n):
            return str(n)
        case TrueV():
            return "true"
        case FalseV():
            return "false"
        case VoidV():
            return "void"
    raise TypeError(f"not a value: {v!r}")


# ---------------------------------------------------------------------------
# Expressions
#
# `Var` belongs to both expression classes; which shapes may fill a variable
# occurrence is decided by the hole it sits in (see Hole below).

@dataclass(frozen=True)
class NatLit:
    n: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Add:
    left: "AExp"
    right: "AExp"


@dataclass(frozen=True)
class Sub:
    left: "AExp"
    right: "AExp"


@dataclass(frozen=True)
class Mul:
    left: "AExp"
    right: "AExp"


@dataclass(frozen=True)
class TrueLit:
    pass


@dataclass(frozen=True)
class FalseLit:
    pass


@dataclass(frozen=True)
class Eq:
    left: "AExp"
    right: "AExp"


@dataclass(frozen=True)
class Le:
    left: "AExp"
    right: "AExp"


@dataclass(frozen=True)
class And:
    left: "BExp"
    right: "BExp"


@dataclass(frozen=True)
class Not:
    operand: "BExp"


AExp = Union[NatLit, Var, Add, Sub, Mul]
BExp = Union[TrueLit, FalseLit, Var, Eq, Le, And, Not]
Expr = Union[AExp, BExp]

TRUE = TrueLit()
FALSE = FalseLit()


def is_value_expr(e: Expr) -> bool:
    """Literals are the expression normal forms; variables are not."""
    return isinstance(e, (NatLit, TrueLit, FalseLit))


def expr_value(e: Expr) -> Value:
    match e:
        case NatLit(n):
            return NatV(n)
        case TrueLit():
            return TrueV()
        case FalseLit():
            return FalseV()
    raise ValueError(f"not a value expression: {e!r}")


def value_expr(v: Value) -> Expr:
    """Inject a value back into expression syntax. Void has no expression form."""
    match v:
        case NatV(n):
            return NatLit(n)
        case TrueV():
            return TRUE
        case FalseV():
            return FALSE
    raise ValueError(f"no expression form for {v!r}")


# ---------------------------------------------------------------------------
# Statements

@dataclass(frozen=True)
class Seq:
    first: "Stmt"
    second: "Stmt"


@dataclass(frozen=True)
class If:
    cond: BExp
    then_branch: "Stmt"
    else_branch: "Stmt"


@dataclass(frozen=True)
class While:
    cond: BExp
    body: "Stmt"


@dataclass(frozen=True)
class Decl:
    type_name: TypeName
    name: str
    rhs: Expr


@dataclass(frozen=True)
class Update:
    name: str
    rhs: Expr


@dataclass(frozen=True)
class ProcDecl:
    name: str
    body: "Stmt"


@dataclass(frozen=True)
class Begin:
    decls: tuple[Decl, ...]
    procs: tuple[ProcDecl, ...]
    body: "Stmt"


@dataclass(frozen=True)
class Call:
    name: str


@dataclass(frozen=True)
class Par:
    left: "Stmt"
    right: "Stmt"


@dataclass(frozen=True)
class Protect:
    body: "Stmt"


# Runtime-only statements.

@dataclass(frozen=True)
class Protected:
    body: "Stmt"


@dataclass(frozen=True)
class BeginScope:
    pass


@dataclass(frozen=True)
class EndScope:
    pass


@dataclass(frozen=True)
class ExprStmt:
    expr: Expr


@dataclass(frozen=True)
class ValStmt:
    value: Value


@dataclass(frozen=True)
class Empty:
    pass


Stmt = Union[
    Seq, If, While, Decl, Update, ProcDecl, Begin, Call, Par, Protect,
    Protected, BeginScope, EndScope, ExprStmt, ValStmt, Empty,
]

VOID_STMT = ValStmt(VOID)

_RUNTIME_ONLY = (Protected, BeginScope, EndScope, ExprStmt, ValStmt, Empty)


def is_source_form(s: Stmt) -> bool:
    """True iff no runtime-only constructor occurs anywhere in the statement."""
    match s:
        case Seq(a, b) | Par(a, b):
            return is_source_form(a) and is_source_form(b)
        case If(_, a, b):
            return is_source_form(a) and is_source_form(b)
        case While(_, body) | Protect(body) | ProcDecl(_, body):
            return is_source_form(body)
        case Begin(_, procs, body):
            return all(is_source_form(p.body) for p in procs) and is_source_form(body)
        case Decl() | Update() | Call():
            return True
        case _ if isinstance(s, _RUNTIME_ONLY):
            return False
    raise TypeError(f"not a statement: {s!r}")


# ---------------------------------------------------------------------------
# Atomic-region predicate
#
# A statement guards an in-progress atomic region when its next step would
# happen inside a `protected` body: true for the acquired form, propagated
# through the head of a sequence and through both sides of a par. The
# unacquired `protect` form is interruptible; the lock is taken by the
# protect -> protected step itself.

def protected_pred(s: Stmt) -> bool:
    match s:
        case Protected(_):
            return True
        case Seq(first, _):
            return protected_pred(first)
        case Par(left, right):
            return protected_pred(left) or protected_pred(right)
        case _:
            return False


# ---------------------------------------------------------------------------
# Pretty-printing
#
# Statement precedence, loosest first:  par  <  ;  <  simple.
# `;` is right-associative and binds tighter than `par`; `par` is
# left-associative.  if/while bodies and if branches are simple statements;
# `{ ... }` regroups.  Expression precedence, loosest first:
# and < (= , <=) < (+, -) < * < not < atom.

_PAR_LEVEL = 0
_SEQ_LEVEL = 1
_SIMPLE_LEVEL = 2


def pretty(s: Stmt) -> str:
    """Canonical concrete syntax for a statement, runtime forms included."""
    return _pp_stmt(s, _PAR_LEVEL)


def pretty_expr(e: Expr) -> str:
    return _pp_expr(e, 0)


def _braced(s: Stmt) -> str:
    return "{ " + _pp_stmt(s, _PAR_LEVEL) + " }"


def _pp_stmt(s: Stmt, level: int) -> str:
    match s:
        case Par(left, right):
            text = f"{_pp_stmt(left, _PAR_LEVEL)} par {_pp_stmt(right, _SEQ_LEVEL)}"
            return _braced(s) if level > _PAR_LEVEL else text
        case Seq(first, second):
            text = f"{_pp_stmt(first, _SIMPLE_LEVEL)}; {_pp_stmt(second, _SEQ_LEVEL)}"
            return _braced(s) if level > _SEQ_LEVEL else text
        case If(cond, then_branch, else_branch):
            return (
                f"if {_pp_expr(cond, 0)} then {_pp_stmt(then_branch, _SIMPLE_LEVEL)}"
                f" else {_pp_stmt(else_branch, _SIMPLE_LEVEL)}"
            )
        case While(cond, body):
            return f"while {_pp_expr(cond, 0)} do {_pp_stmt(body, _SIMPLE_LEVEL)}"
        case Decl(t, name, rhs):
            return f"var {t} {name} := {_pp_expr(rhs, 0)}"
        case Update(name, rhs):
            return f"{name} := {_pp_expr(rhs, 0)}"
        case ProcDecl(name, body):
            return f"proc {name} is {_pp_stmt(body, _SIMPLE_LEVEL)}"
        case Begin():
            return _pp_begin(s)
        case Call(name):
            return f"call {name}"
        case Protect(body):
            return f"protect {_pp_stmt(body, _PAR_LEVEL)} end"
        case Protected(body):
            return f"protected {_pp_stmt(body, _PAR_LEVEL)} end"
        case BeginScope():
            return "beginscope"
        case EndScope():
            return "endscope"
        case ExprStmt(e):
            return _pp_expr(e, 0)
        case ValStmt(v):
            return value_text(v)
        case Empty():
            return "ε"
    raise TypeError(f"not a statement: {s!r}")


def _pp_begin(s: Begin) -> str:
    # The declaration sections are read greedily, so a body whose leading
    # statement is a declaration must be braced or it would be absorbed
    # into the section before it on re-parse.
    body = s.body
    body_text = _pp_stmt(body, _SEQ_LEVEL)
    if not s.procs and isinstance(body, Seq) and isinstance(body.first, Decl):
        body_text = _braced(body)
    items = [_pp_stmt(d, _SIMPLE_LEVEL) for d in s.decls]
    items += [_pp_stmt(p, _SIMPLE_LEVEL) for p in s.procs]
    items.append(body_text)
    return "begin " + "; ".join(items) + " end"


# Expression precedence levels, loosest binding first.
_AND_LEVEL = 0
_CMP_LEVEL = 1
_ADD_LEVEL = 2
_MUL_LEVEL = 3
_NOT_LEVEL = 4


def _pp_expr(e: Expr, level: int) -> str:
    match e:
        case NatLit(n):
            return str(n)
        case Var(name):
            return name
        case TrueLit():
            return "true"
        case FalseLit():
            return "false"
        case Add(a, b):
            return _infix(f"{_pp_expr(a, _ADD_LEVEL)} + {_pp_expr(b, _MUL_LEVEL)}",
                          _ADD_LEVEL, level)
        case Sub(a, b):
            return _infix(f"{_pp_expr(a, _ADD_LEVEL)} - {_pp_expr(b, _MUL_LEVEL)}",
                          _ADD_LEVEL, level)
        case Mul(a, b):
            return _infix(f"{_pp_expr(a, _MUL_LEVEL)} * {_pp_expr(b, _NOT_LEVEL)}",
                          _MUL_LEVEL, level)
        case Eq(a, b):
            return _infix(f"{_pp_expr(a, _ADD_LEVEL)} = {_pp_expr(b, _ADD_LEVEL)}",
                          _CMP_LEVEL, level)
        case Le(a, b):
            return _infix(f"{_pp_expr(a, _ADD_LEVEL)} <= {_pp_expr(b, _ADD_LEVEL)}",
                          _CMP_LEVEL, level)
        case And(a, b):
            return _infix(f"{_pp_expr(a, _CMP_LEVEL)} and {_pp_expr(b, _AND_LEVEL)}",
                          _AND_LEVEL, level)
        case Not(b):
            return _infix(f"not {_pp_expr(b, _NOT_LEVEL)}", _NOT_LEVEL, level)
    raise TypeError(f"not an expression: {e!r}")


def _infix(text: str, own_level: int, required: int) -> str:
    return f"({text})" if own_level < required else text


# ---------------------------------------------------------------------------
# Evaluation contexts
#
# A context is a root-to-hole path of frames. Each frame records the node
# shape around the hole; `plug` rebuilds the surrounding node. Descent into
# the right operand of a binary operator requires the left operand to be a
# value already, and a par side is entered only while the opposite side is
# not inside an atomic region.

class Hole(enum.Enum):
    ARITH = "arith"
    BOOL = "bool"
    ANY = "any"


@dataclass(frozen=True)
class FBinLeft:
    node: type
    right: Expr


@dataclass(frozen=True)
class FBinRight:
    node: type
    left: Expr


@dataclass(frozen=True)
class FNot:
    pass


@dataclass(frozen=True)
class FSeqHead:
    rest: Stmt


@dataclass(frozen=True)
class FIfCond:
    then_branch: Stmt
    else_branch: Stmt


@dataclass(frozen=True)
class FDeclRhs:
    type_name: TypeName
    name: str


@dataclass(frozen=True)
class FUpdateRhs:
    name: str


@dataclass(frozen=True)
class FParLeft:
    right: Stmt


@dataclass(frozen=True)
class FParRight:
    left: Stmt


@dataclass(frozen=True)
class FProtectedBody:
    pass


@dataclass(frozen=True)
class FExprStmt:
    pass


Frame = Union[
    FBinLeft, FBinRight, FNot, FSeqHead, FIfCond, FDeclRhs, FUpdateRhs,
    FParLeft, FParRight, FProtectedBody, FExprStmt,
]

EvalContext = tuple[Frame, ...]

Redex = Union[Stmt, Expr]

_ARITH_OPS = (Add, Sub, Mul, Eq, Le)


def hole_class(ctx: EvalContext) -> Hole:
    """Which expression shapes the innermost hole of `ctx` accepts."""
    for frame in reversed(ctx):
        match frame:
            case FBinLeft(node, _) | FBinRight(node, _):
                return Hole.ARITH if node in _ARITH_OPS else Hole.BOOL
            case FNot() | FIfCond():
                return Hole.BOOL
            case FDeclRhs() | FUpdateRhs() | FExprStmt():
                return Hole.ANY
            case _:
                return Hole.ANY
    return Hole.ANY


def decompose(s: Stmt) -> list[tuple[EvalContext, Redex]]:
    """All maximal decompositions of a runtime statement into context and redex.

    A redex is either an expression ready for one primitive step (a variable
    to resolve or an operator whose operands are values) or a statement some
    reduction rule matches directly. Normal forms and stuck dead ends yield
    an empty list; the caller tells them apart. A par node contributes one
    decomposition per schedulable side.
    """
    out: list[tuple[EvalContext, Redex]] = []
    _decompose_stmt(s, [], out)
    return out


def _decompose_stmt(s: Stmt, path: list[Frame],
                    out: list[tuple[EvalContext, Redex]]) -> None:
    match s:
        case ValStmt(_):
            return
        case Seq(first, second):
            if isinstance(first, ValStmt):
                out.append((tuple(path), s))
            else:
                path.append(FSeqHead(second))
                _decompose_stmt(first, path, out)
                path.pop()
        case Par(left, right):
            if not protected_pred(right):
                path.append(FParLeft(right))
                _decompose_stmt(left, path, out)
                path.pop()
            if not protected_pred(left):
                path.append(FParRight(left))
                _decompose_stmt(right, path, out)
                path.pop()
        case Protected(body):
            if isinstance(body, ValStmt):
                out.append((tuple(path), s))
            else:
                path.append(FProtectedBody())
                _decompose_stmt(body, path, out)
                path.pop()
        case If(cond, then_branch, else_branch):
            if isinstance(cond, (TrueLit, FalseLit)):
                out.append((tuple(path), s))
            else:
                path.append(FIfCond(then_branch, else_branch))
                _decompose_expr(cond, path, out)
                path.pop()
        case Decl(t, name, rhs):
            if is_value_expr(rhs):
                out.append((tuple(path), s))
            else:
                path.append(FDeclRhs(t, name))
                _decompose_expr(rhs, path, out)
                path.pop()
        case Update(name, rhs):
            if is_value_expr(rhs):
                out.append((tuple(path), s))
            else:
                path.append(FUpdateRhs(name))
                _decompose_expr(rhs, path, out)
                path.pop()
        case ExprStmt(e):
            if is_value_expr(e):
                out.append((tuple(path), s))
            else:
                path.append(FExprStmt())
                _decompose_expr(e, path, out)
                path.pop()
        case While() | Begin() | Call() | Protect() | ProcDecl() | \
                BeginScope() | EndScope() | Empty():
            out.append((tuple(path), s))
        case _:
            raise TypeError(f"not a statement: {s!r}")


def _decompose_expr(e: Expr, path: list[Frame],
                    out: list[tuple[EvalContext, Redex]]) -> None:
    if is_value_expr(e):
        return
    match e:
        case Var(_):
            out.append((tuple(path), e))
        case Not(operand):
            if is_value_expr(operand):
                out.append((tuple(path), e))
            else:
                path.append(FNot())
                _decompose_expr(operand, path, out)
                path.pop()
        case Add() | Sub() | Mul() | Eq() | Le() | And():
            left, right = e.left, e.right
            if not is_value_expr(left):
                path.append(FBinLeft(type(e), right))
                _decompose_expr(left, path, out)
                path.pop()
            elif not is_value_expr(right):
                path.append(FBinRight(type(e), left))
                _decompose_expr(right, path, out)
                path.pop()
            else:
                out.append((tuple(path), e))
        case _:
            raise TypeError(f"not an expression: {e!r}")


def decompose_expr(e: Expr) -> list[tuple[EvalContext, Redex]]:
    """Decomposition of a bare expression; at most one redex exists."""
    out: list[tuple[EvalContext, Redex]] = []
    _decompose_expr(e, [], out)
    return out


def plug(ctx: EvalContext, filled: Redex) -> Stmt:
    """Rebuild the whole statement with `filled` at the hole of `ctx`."""
    current = filled
    for frame in reversed(ctx):
        current = plug_frame(frame, current)
    return current


def plug_frame(frame: Frame, filled: Redex) -> Redex:
    match frame:
        case FBinLeft(node, right):
            return node(filled, right)
        case FBinRight(node, left):
            return node(left, filled)
        case FNot():
            return Not(filled)
        case FSeqHead(rest):
            return Seq(filled, rest)
        case FIfCond(then_branch, else_branch):
            return If(filled, then_branch, else_branch)
        case FDeclRhs(t, name):
            return Decl(t, name, filled)
        case FUpdateRhs(name):
            return Update(name, filled)
        case FParLeft(right):
            return Par(filled, right)
        case FParRight(left):
            return Par(left, filled)
        case FProtectedBody():
            return Protected(filled)
        case FExprStmt():
            return ExprStmt(filled)
    raise TypeError(f"not a frame: {frame!r}")
