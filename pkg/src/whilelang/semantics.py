"""One-step reduction over configurations.

A configuration is a variable store, a procedure store, and a runtime
statement; it is terminal exactly when the statement is a value. The step
relation is computed by decomposing the statement into an evaluation
context and a redex, contracting the redex, and rebuilding. Rebuilding is
where the sequencing and parallelism rules apply:

* a sequence head that steps to void is discharged (Seq2), otherwise the
  sequence is rebuilt (Seq1); a head that already is a value is removed by
  the Seq-discharge rule;
* a par side that steps to a value leaves the composition (Par2/Par4),
  otherwise the composition is rebuilt (Par1/Par3); a side may only step
  while the opposite side is not inside an atomic region.

Each step is labeled with the root-to-axiom path of rule names, e.g.
"Par1/Seq2/Assign"; expression-position descent contributes no component,
the primitive expression steps carry Expr-* labels.

Failed contractions (unbound names, redeclaration in the same scope,
values of the wrong shape) produce no step: the configuration is stuck and
`diagnose` reports the offending redex. There are no error transitions.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import env as envmod
from .env import Env, RedeclError, ScopeError, UnboundError
from .syntax import (
    Add, And, Begin, BeginScope, Call, Decl, Empty, EndScope, Eq, EvalContext,
    Expr, ExprStmt, FParLeft, FParRight, FSeqHead, FalseLit, FalseV, Hole,
    If, Le, Mul, NatLit, NatV, Not, Par, ProcDecl, Protect, Protected, Redex,
    Seq, Stmt, Sub, TRUE, FALSE, TrueLit, TrueV, Update, ValStmt, Var,
    VOID_STMT, While, decompose, decompose_expr, hole_class, is_value_expr,
    plug_frame, expr_value, protected_pred,
)

_EXPR_REDEXES = (Var, Add, Sub, Mul, Eq, Le, And, Not)

__all__ = [
    "Configuration", "StepResult", "StuckInfo", "protected_pred",
    "eval_expr_step", "successors", "is_terminal", "diagnose",
]


@dataclass(frozen=True)
class Configuration:
    store: Env
    procs: Env
    stmt: Stmt


@dataclass(frozen=True)
class StepResult:
    rule: str
    next: Configuration


@dataclass(frozen=True)
class StuckInfo:
    at: Redex
    reason: str


class _StuckRedex(Exception):
    def __init__(self, at: Redex, reason: str):
        self.info = StuckInfo(at, reason)
        super().__init__(reason)


def is_terminal(c: Configuration) -> bool:
    return isinstance(c.stmt, ValStmt)


# ---------------------------------------------------------------------------
# Expression redexes

def _resolve_var(store: Env, var: Var, hole: Hole) -> Expr:
    try:
        value = envmod.lookup_var(store, var.name)
    except UnboundError:
        raise _StuckRedex(var, f"unbound variable {var.name}") from None
    match value:
        case NatV(n) if hole in (Hole.ARITH, Hole.ANY):
            return NatLit(n)
        case TrueV() if hole in (Hole.BOOL, Hole.ANY):
            return TRUE
        case FalseV() if hole in (Hole.BOOL, Hole.ANY):
            return FALSE
    raise _StuckRedex(var, "operand of wrong shape")


def _nat_operands(redex: Expr) -> tuple[int, int]:
    left, right = redex.left, redex.right
    if isinstance(left, NatLit) and isinstance(right, NatLit):
        return left.n, right.n
    raise _StuckRedex(redex, "operand of wrong shape")


def contract_expr(store: Env, redex: Expr, hole: Hole) -> tuple[str, Expr]:
    """Contract an expression redex; subtraction is monus, conjunction is
    strict in both operands."""
    match redex:
        case Var(_):
            return "Expr-Var", _resolve_var(store, redex, hole)
        case Add(_, _):
            a, b = _nat_operands(redex)
            return "Expr-Add", NatLit(a + b)
        case Sub(_, _):
            a, b = _nat_operands(redex)
            return "Expr-Sub", NatLit(max(0, a - b))
        case Mul(_, _):
            a, b = _nat_operands(redex)
            return "Expr-Mul", NatLit(a * b)
        case Eq(_, _):
            a, b = _nat_operands(redex)
            return "Expr-Eq", TRUE if a == b else FALSE
        case Le(_, _):
            a, b = _nat_operands(redex)
            return "Expr-Le", TRUE if a <= b else FALSE
        case And(left, right):
            if isinstance(left, (TrueLit, FalseLit)) and \
                    isinstance(right, (TrueLit, FalseLit)):
                both = isinstance(left, TrueLit) and isinstance(right, TrueLit)
                return "Expr-And", TRUE if both else FALSE
            raise _StuckRedex(redex, "operand of wrong shape")
        case Not(operand):
            if isinstance(operand, (TrueLit, FalseLit)):
                return "Expr-Not", FALSE if isinstance(operand, TrueLit) else TRUE
            raise _StuckRedex(redex, "operand of wrong shape")
    raise TypeError(f"not an expression redex: {redex!r}")


def eval_expr_step(store: Env, e: Expr, hole: Hole = Hole.ANY):
    """One small step of an expression under `store`.

    Returns (label, expression) or None when `e` already is a value;
    raises nothing on stuck expressions, returning the StuckInfo instead.
    """
    if is_value_expr(e):
        return None
    (ctx, redex), = decompose_expr(e)
    effective = hole_class(ctx) if ctx else hole
    try:
        label, contractum = contract_expr(store, redex, effective)
    except _StuckRedex as stuck:
        return stuck.info
    rebuilt = contractum
    for frame in reversed(ctx):
        rebuilt = plug_frame(frame, rebuilt)
    return label, rebuilt


# ---------------------------------------------------------------------------
# Statement redexes

def _desugar_begin(block: Begin) -> Stmt:
    items: list[Stmt] = [BeginScope()]
    items += list(block.decls)
    items += list(block.procs)
    items += [block.body, EndScope()]
    stmt = items[-1]
    for item in reversed(items[:-1]):
        stmt = Seq(item, stmt)
    return stmt


def contract_stmt(store: Env, procs: Env, redex: Stmt) \
        -> tuple[str, Stmt, Env, Env]:
    match redex:
        case Decl(_, name, rhs):
            try:
                store2 = envmod.declare_var(store, name, expr_value(rhs))
            except RedeclError:
                raise _StuckRedex(
                    redex, f"variable {name} already declared in this scope"
                ) from None
            return "Assign", VOID_STMT, store2, procs
        case Update(name, rhs):
            try:
                store2 = envmod.update_var(store, name, expr_value(rhs))
            except UnboundError:
                raise _StuckRedex(redex, f"unbound variable {name}") from None
            return "Update", VOID_STMT, store2, procs
        case Seq(ValStmt(_), second):
            return "Seq-discharge", second, store, procs
        case Empty():
            return "Empty", VOID_STMT, store, procs
        case If(TrueLit(), then_branch, _):
            return "If-True", then_branch, store, procs
        case If(FalseLit(), _, else_branch):
            return "If-False", else_branch, store, procs
        case While(cond, body):
            unfolded = If(cond, Seq(body, redex), VOID_STMT)
            return "While", unfolded, store, procs
        case Begin():
            return "Begin", _desugar_begin(redex), store, procs
        case BeginScope():
            store2, procs2 = envmod.push_scope(store, procs)
            return "BeginScope", VOID_STMT, store2, procs2
        case EndScope():
            try:
                store2, procs2 = envmod.pop_scope(store, procs)
            except ScopeError:
                raise _StuckRedex(redex, "cannot pop the global scope") from None
            return "EndScope", VOID_STMT, store2, procs2
        case ProcDecl(name, body):
            try:
                procs2 = envmod.declare_proc(procs, name, body)
            except RedeclError:
                raise _StuckRedex(
                    redex, f"procedure {name} already declared in this scope"
                ) from None
            return "Proc", VOID_STMT, store, procs2
        case Call(name):
            try:
                body = envmod.lookup_proc(procs, name)
            except UnboundError:
                raise _StuckRedex(redex, f"unbound procedure {name}") from None
            return "Call", body, store, procs
        case Protect(body):
            return "Protect", Protected(body), store, procs
        case Protected(ValStmt(_)):
            return "Protected", VOID_STMT, store, procs
        case ExprStmt(e):
            return "Expr-Val", ValStmt(expr_value(e)), store, procs
    raise TypeError(f"not a statement redex: {redex!r}")


def _rebuild(ctx: EvalContext, filled: Redex, axiom: str) -> tuple[str, Stmt]:
    """Wrap the contractum back up through the context, applying the value
    collapses of the sequencing and parallelism rules and collecting the
    rule-name path."""
    components: list[str] = []
    current = filled
    for frame in reversed(ctx):
        match frame:
            case FSeqHead(rest):
                if current == VOID_STMT:
                    components.append("Seq2")
                    current = rest
                else:
                    components.append("Seq1")
                    current = Seq(current, rest)
            case FParLeft(right):
                if isinstance(current, ValStmt):
                    components.append("Par2")
                    current = right
                else:
                    components.append("Par1")
                    current = Par(current, right)
            case FParRight(left):
                if isinstance(current, ValStmt):
                    components.append("Par4")
                    current = left
                else:
                    components.append("Par3")
                    current = Par(left, current)
            case _:
                current = plug_frame(frame, current)
    components.reverse()
    components.append(axiom)
    return "/".join(components), current


def _step_and_diagnose(c: Configuration) \
        -> tuple[list[StepResult], list[StuckInfo]]:
    results: list[StepResult] = []
    stuck: list[StuckInfo] = []
    for ctx, redex in decompose(c.stmt):
        try:
            if isinstance(redex, _EXPR_REDEXES):
                axiom, contractum = contract_expr(c.store, redex, hole_class(ctx))
                store2, procs2 = c.store, c.procs
            else:
                axiom, contractum, store2, procs2 = \
                    contract_stmt(c.store, c.procs, redex)
        except _StuckRedex as failure:
            stuck.append(failure.info)
            continue
        rule, stmt2 = _rebuild(ctx, contractum, axiom)
        results.append(StepResult(rule, Configuration(store2, procs2, stmt2)))
    if not results and not stuck and not is_terminal(c):
        stuck.append(StuckInfo(c.stmt, "no applicable reduction"))
    return results, stuck


def successors(c: Configuration) -> list[StepResult]:
    """The complete labeled set of one-step reducts of a configuration.

    Empty for terminal configurations, and also for stuck ones; use
    `diagnose` to tell the two apart and name the offender.
    """
    return _step_and_diagnose(c)[0]


def diagnose(c: Configuration) -> StuckInfo | None:
    """Why a non-terminal configuration has no successors, if that is so."""
    results, stuck = _step_and_diagnose(c)
    if results or is_terminal(c):
        return None
    return stuck[0]
