"""AST for the mini array DSL.

The language is Fortran-flavored: one routine per file, scalar integer /
scalar real / 1-based real array variables, assignments, increment
statements, counted loops, if/else, and OpenMP-style pragmas attaching
scoping clauses and schedules to parallel loops.  Generated derivative
code additionally uses parallel regions, worksharing loops inside
regions, and calls into the runtime support library.

Equality of nodes is structural.  Statement line numbers exist only for
diagnostics and are excluded from comparisons, so a parse/emit round
trip can compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields

SCOPES = ("shared", "private", "firstprivate", "lastprivate", "reduction_sum")
OVERRIDE_SCOPES = ("shared", "reduction_sum", "atomic_shared")
INTRINSICS = ("sin", "cos", "exp", "sqrt")

# Runtime entry points that generated code may reference in call statements.
RUNTIME_CALLS = (
    "push_real8",
    "pop_real8",
    "push_integer4",
    "pop_integer4",
    "push_integer8",
    "pop_integer8",
    "save_top",
    "restore_top",
    "get_static_schedule",
    "init_dynamic_schedule",
    "record_dynamic_schedule",
    "finalize_dynamic_schedule",
)


# ---------------------------------------------------------------------------
# Expressions (immutable)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Expr:
    """Base class for expressions."""


@dataclass(frozen=True)
class IntLit(Expr):
    value: int


@dataclass(frozen=True)
class RealLit(Expr):
    value: float


@dataclass(frozen=True)
class Ref(Expr):
    """A scalar variable reference, or an array cell when index is set."""

    name: str
    index: Expr | None = None


@dataclass(frozen=True)
class BinOp(Expr):
    """Binary arithmetic. op is one of + - * /.

    Division is IEEE double division when either operand is real and
    floor division when both operands are integers.
    """

    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class UnaryNeg(Expr):
    operand: Expr


@dataclass(frozen=True)
class Intrinsic(Expr):
    """Unary intrinsic call: sin, cos, exp, sqrt."""

    name: str
    arg: Expr


@dataclass(frozen=True)
class Compare(Expr):
    """Relational expression, valid only as an if condition.

    op is one of == /= < <= > >=.
    """

    op: str
    left: Expr
    right: Expr


# ---------------------------------------------------------------------------
# Clauses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Schedule:
    """Loop schedule: kind is 'static' or 'dynamic', chunk optional."""

    kind: str
    chunk: int | None = None


@dataclass
class ClauseSet:
    """Scoping and schedule clauses attached to a parallel loop or region.

    scoping maps a variable name to one of SCOPES.  Variables referenced
    in the construct but absent from scoping default to shared, except
    loop counters, which are private.  ad_override maps a variable name
    to the adjoint scoping forced by a `!$ad omp_adjoint` directive; its
    keys must be shared (explicitly or by default) in the primal.
    """

    scoping: dict[str, str] = field(default_factory=dict)
    schedule: Schedule | None = None
    ad_override: dict[str, str] = field(default_factory=dict)

    def scope_of(self, name: str, counters: set[str] = frozenset()) -> str:
        """Effective scope of a variable in this construct."""
        if name in self.scoping:
            return self.scoping[name]
        if name in counters:
            return "private"
        return "shared"


# ---------------------------------------------------------------------------
# Statements
# ---------------------------------------------------------------------------


def _line_field():
    return field(default=None, compare=False, repr=False)


@dataclass
class Stmt:
    """Base class for statements."""


@dataclass
class Assign(Stmt):
    lhs: Ref
    rhs: Expr
    line: int | None = _line_field()


@dataclass
class Increment(Stmt):
    """lhs += rhs.  With atomic=True the update is a linearizable RMW."""

    lhs: Ref
    rhs: Expr
    atomic: bool = False
    line: int | None = _line_field()


@dataclass
class SeqLoop(Stmt):
    var: str
    start: Expr
    end: Expr
    stride: Expr
    body: list[Stmt]
    line: int | None = _line_field()


@dataclass
class ParallelLoop(Stmt):
    """Worksharing loop in canonical form (loop-invariant integer bounds)."""

    var: str
    start: Expr
    end: Expr
    stride: Expr
    clauses: ClauseSet
    body: list[Stmt]
    line: int | None = _line_field()


@dataclass
class ParallelRegion(Stmt):
    """Explicit parallel region; produced by the adjoint transform."""

    clauses: ClauseSet
    body: list[Stmt]
    line: int | None = _line_field()


@dataclass
class WorkshareLoop(Stmt):
    """A worksharing loop inside an explicit parallel region.

    Iterations are dispatched to the region's threads per the schedule;
    only generated code uses this node.
    """

    var: str
    start: Expr
    end: Expr
    stride: Expr
    schedule: Schedule | None
    body: list[Stmt]
    line: int | None = _line_field()


@dataclass
class If(Stmt):
    cond: Expr
    then_body: list[Stmt]
    else_body: list[Stmt] = field(default_factory=list)
    line: int | None = _line_field()


@dataclass
class CallStmt(Stmt):
    """Call to a runtime support entry point (see RUNTIME_CALLS)."""

    name: str
    args: list[Expr] = field(default_factory=list)
    line: int | None = _line_field()


# ---------------------------------------------------------------------------
# Declarations and program
# ---------------------------------------------------------------------------


@dataclass
class VarDecl:
    """Variable declaration.

    base is 'real' or 'integer'; extent is the array extent expression
    (real arrays only) or None for scalars; intent is 'in', 'out',
    'inout' for parameters and None for locals; active marks a
    parameter as carrying derivatives.
    """

    name: str
    base: str
    extent: Expr | None = None
    intent: str | None = None
    active: bool = False

    @property
    def is_array(self) -> bool:
        return self.extent is not None


@dataclass
class Program:
    """One routine: parameters, local declarations, statement body."""

    name: str
    params: list[VarDecl]
    decls: list[VarDecl]
    body: list[Stmt]

    def all_decls(self) -> list[VarDecl]:
        return self.params + self.decls

    def lookup(self, name: str) -> VarDecl | None:
        for d in self.params:
            if d.name == name:
                return d
        for d in self.decls:
            if d.name == name:
                return d
        return None


# ---------------------------------------------------------------------------
# Smart constructors (light constant folding keeps generated code readable)
# ---------------------------------------------------------------------------

ZERO = IntLit(0)
ONE = IntLit(1)


def add(a: Expr, b: Expr) -> Expr:
    if a == ZERO:
        return b
    if b == ZERO:
        return a
    if isinstance(a, IntLit) and isinstance(b, IntLit):
        return IntLit(a.value + b.value)
    return BinOp("+", a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if b == ZERO:
        return a
    if isinstance(a, IntLit) and isinstance(b, IntLit):
        return IntLit(a.value - b.value)
    return BinOp("-", a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if a == ONE:
        return b
    if b == ONE:
        return a
    if isinstance(a, IntLit) and isinstance(b, IntLit):
        return IntLit(a.value * b.value)
    if isinstance(a, UnaryNeg):
        return neg(mul(a.operand, b))
    if isinstance(b, UnaryNeg):
        return neg(mul(a, b.operand))
    # partials of the form 1/d combine with seeds into a plain division
    if isinstance(b, BinOp) and b.op == "/" and b.left == ONE:
        return div(a, b.right)
    if isinstance(a, BinOp) and a.op == "/" and a.left == ONE:
        return div(b, a.right)
    return BinOp("*", a, b)


def div(a: Expr, b: Expr) -> Expr:
    if b == ONE:
        return a
    if isinstance(a, UnaryNeg):
        return neg(div(a.operand, b))
    return BinOp("/", a, b)


def neg(a: Expr) -> Expr:
    if isinstance(a, UnaryNeg):
        return a.operand
    if isinstance(a, IntLit):
        return IntLit(-a.value)
    return UnaryNeg(a)


def int_floor_div(a: Expr, b: Expr) -> Expr:
    if b == ONE:
        return a
    if isinstance(a, IntLit) and isinstance(b, IntLit) and b.value != 0:
        return IntLit(a.value // b.value)
    return BinOp("/", a, b)


def last_iteration_expr(start: Expr, end: Expr, stride: Expr) -> Expr:
    """Counter value of the logically last iteration.

    last = start + floor((end - start) / stride) * stride.  Correct for
    either stride sign; for zero-trip loops it lands one stride before
    start, so a reversed loop over (last, start, -stride) also runs zero
    iterations.
    """
    if stride == ONE:
        return end
    return add(start, mul(int_floor_div(sub(end, start), stride), stride))


# ---------------------------------------------------------------------------
# Tree walking helpers
# ---------------------------------------------------------------------------


def expr_refs(e: Expr):
    """Yield every Ref occurring in e, including refs inside indices."""
    if isinstance(e, Ref):
        yield e
        if e.index is not None:
            yield from expr_refs(e.index)
    elif isinstance(e, (BinOp, Compare)):
        yield from expr_refs(e.left)
        yield from expr_refs(e.right)
    elif isinstance(e, UnaryNeg):
        yield from expr_refs(e.operand)
    elif isinstance(e, Intrinsic):
        yield from expr_refs(e.arg)


def expr_names(e: Expr) -> set[str]:
    return {r.name for r in expr_refs(e)}


def walk_stmts(stmts: list[Stmt]):
    """Yield every statement, depth first."""
    for s in stmts:
        yield s
        if isinstance(s, (SeqLoop, ParallelLoop, WorkshareLoop, ParallelRegion)):
            yield from walk_stmts(s.body)
        elif isinstance(s, If):
            yield from walk_stmts(s.then_body)
            yield from walk_stmts(s.else_body)


def assigned_names(stmts: list[Stmt]) -> set[str]:
    """Names written by any statement in the subtree (including counters)."""
    out: set[str] = set()
    for s in walk_stmts(stmts):
        if isinstance(s, (Assign, Increment)):
            out.add(s.lhs.name)
        elif isinstance(s, (SeqLoop, ParallelLoop, WorkshareLoop)):
            out.add(s.var)
        elif isinstance(s, CallStmt) and s.name.startswith("pop_"):
            out.add(s.args[0].name)  # pop writes its target ref
        elif isinstance(s, CallStmt) and s.name == "get_static_schedule":
            out.update(a.name for a in s.args[3:5])
    return out


def copy_expr(e: Expr) -> Expr:
    """Expressions are immutable; sharing is safe."""
    return e


def clone_stmt(s: Stmt) -> Stmt:
    """Deep-copy a statement tree (expressions are shared)."""
    kwargs = {}
    for f in fields(s):
        v = getattr(s, f.name)
        if isinstance(v, list):
            if v and isinstance(v[0], Stmt):
                v = [clone_stmt(x) for x in v]
            else:
                v = list(v)
        elif isinstance(v, ClauseSet):
            v = ClauseSet(dict(v.scoping), v.schedule, dict(v.ad_override))
        kwargs[f.name] = v
    return type(s)(**kwargs)
