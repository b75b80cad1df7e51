"""whilelang: a small imperative language with scoped stores, interleaved
parallelism with atomic regions, an exhaustive reduction-graph explorer,
and a type checker that records derivations."""

from .env import (
    Env, EnvError, ProcEnv, RedeclError, ScopeError, Store, UnboundError,
    declare_proc, declare_var, lookup_proc, lookup_var, parse_store,
    pop_scope, push_scope, render_procs, render_store, update_var,
)
from .explorer import (
    BudgetExceeded, OutcomeSet, ReductionGraph, Stuck, Terminated, Trace,
    explore, outcomes, run, to_dot, to_json_trace,
)
from .parser import ParseError, parse_program
from .semantics import (
    Configuration, StepResult, StuckInfo, diagnose, eval_expr_step,
    is_terminal, protected_pred, successors,
)
from .syntax import (
    AExp, Add, And, BExp, Begin, BeginScope, Call, Decl, Empty, EndScope,
    Eq, EvalContext, Expr, ExprStmt, FalseLit, FalseV, If, Le, Mul, NatLit,
    NatV, Not, Par, ProcDecl, Protect, Protected, Seq, Stmt, Sub, TrueLit,
    TrueV, TypeName, Update, ValStmt, Value, Var, VoidV, While, decompose,
    is_source_form, plug, pretty, pretty_expr,
)
from .typesys import (
    Judgment, ProcTypeEnv, TypeCheckError, TypeEnv, check_program,
    env_diff, env_union, render_derivation, type_of_expr, type_of_stmt,
)

__version__ = "0.1.0"
