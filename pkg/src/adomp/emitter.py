"""Canonical pretty-printer for the mini DSL.

emit(parse(text)) is deterministic and parse(emit(p)) == p structurally,
so generated derivative programs survive a round trip through text.
"""

from __future__ import annotations

from .ir import (
    Assign,
    BinOp,
    CallStmt,
    ClauseSet,
    Compare,
    Expr,
    If,
    Increment,
    IntLit,
    ParallelLoop,
    ParallelRegion,
    Program,
    RealLit,
    Ref,
    Schedule,
    SeqLoop,
    Stmt,
    UnaryNeg,
    Intrinsic,
    VarDecl,
    WorkshareLoop,
)

# Binding strength; higher binds tighter.
_PREC = {"==": 1, "/=": 1, "<": 1, "<=": 1, ">": 1, ">=": 1,
         "+": 2, "-": 2, "*": 3, "/": 3}
_NEG_PREC = 4


def emit_expr(e: Expr) -> str:
    return _expr(e, 0)


def _expr(e: Expr, parent_prec: int, right_of: str | None = None) -> str:
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, RealLit):
        return _real(e.value)
    if isinstance(e, Ref):
        if e.index is None:
            return e.name
        return f"{e.name}({_expr(e.index, 0)})"
    if isinstance(e, Intrinsic):
        return f"{e.name}({_expr(e.arg, 0)})"
    if isinstance(e, UnaryNeg):
        inner = _expr(e.operand, _NEG_PREC)
        text = f"-{inner}"
        return f"({text})" if parent_prec >= _NEG_PREC else text
    if isinstance(e, (BinOp, Compare)):
        prec = _PREC[e.op]
        left = _expr(e.left, prec - 1)
        # - and / are left associative: parenthesize an equal-precedence
        # right operand (a - (b - c), a / (b * c)).
        right_needs = prec if e.op in ("-", "/") else prec - 1
        right = _expr(e.right, right_needs)
        text = f"{left} {e.op} {right}"
        return f"({text})" if prec <= parent_prec else text
    raise TypeError(f"cannot emit {e!r}")


def _real(v: float) -> str:
    text = repr(v)
    if "e" in text or "E" in text or "." in text or "inf" in text or "nan" in text:
        return text
    return text + ".0"


_CLAUSE_ORDER = ("shared", "private", "firstprivate", "lastprivate", "reduction_sum")


def _clause_text(clauses: ClauseSet) -> str:
    parts = []
    for scope in _CLAUSE_ORDER:
        group = [v for v, s in clauses.scoping.items() if s == scope]
        if not group:
            continue
        if scope == "reduction_sum":
            parts.append(f"reduction(+: {', '.join(group)})")
        else:
            parts.append(f"{scope}({', '.join(group)})")
    if clauses.schedule is not None:
        parts.append(_schedule_text(clauses.schedule))
    return " ".join(parts)


def _schedule_text(sched: Schedule) -> str:
    if sched.chunk is None:
        return f"schedule({sched.kind})"
    return f"schedule({sched.kind}, {sched.chunk})"


def _override_text(override: dict[str, str]) -> str:
    parts = []
    for scope, clause in (("shared", "shared"), ("reduction_sum", None), ("atomic_shared", "atomic")):
        group = [v for v, s in override.items() if s == scope]
        if not group:
            continue
        if scope == "reduction_sum":
            parts.append(f"reduction(+: {', '.join(group)})")
        else:
            parts.append(f"{clause}({', '.join(group)})")
    return " ".join(parts)


def _decl(d: VarDecl) -> str:
    attrs = [d.base]
    if d.intent is not None:
        attrs.append(f"intent({d.intent})")
    if d.active:
        attrs.append("active")
    name = d.name if d.extent is None else f"{d.name}({_expr(d.extent, 0)})"
    return f"{', '.join(attrs)} :: {name}"


def emit(program: Program) -> str:
    """Render a routine as canonical DSL text."""
    lines: list[str] = []
    lines.append(f"subroutine {program.name}({', '.join(p.name for p in program.params)})")
    for d in program.params:
        lines.append(f"  {_decl(d)}")
    for d in program.decls:
        lines.append(f"  {_decl(d)}")
    _stmts(program.body, lines, 1)
    lines.append(f"end subroutine {program.name}")
    return "\n".join(lines) + "\n"


def _stmts(stmts: list[Stmt], lines: list[str], depth: int):
    for s in stmts:
        _stmt(s, lines, depth)


def _stmt(s: Stmt, lines: list[str], depth: int):
    pad = "  " * depth
    if isinstance(s, Assign):
        lines.append(f"{pad}{_expr(s.lhs, 0)} = {_expr(s.rhs, 0)}")
    elif isinstance(s, Increment):
        if s.atomic:
            lines.append(f"{pad}!$omp atomic")
        lines.append(f"{pad}{_expr(s.lhs, 0)} += {_expr(s.rhs, 0)}")
    elif isinstance(s, SeqLoop):
        lines.append(f"{pad}do {s.var} = {_loop_bounds(s)}")
        _stmts(s.body, lines, depth + 1)
        lines.append(f"{pad}end do")
    elif isinstance(s, ParallelLoop):
        if s.clauses.ad_override:
            lines.append(f"{pad}!$ad omp_adjoint {_override_text(s.clauses.ad_override)}")
        clause = _clause_text(s.clauses)
        lines.append(f"{pad}!$omp parallel do{' ' + clause if clause else ''}")
        lines.append(f"{pad}do {s.var} = {_loop_bounds(s)}")
        _stmts(s.body, lines, depth + 1)
        lines.append(f"{pad}end do")
    elif isinstance(s, ParallelRegion):
        clause = _clause_text(s.clauses)
        lines.append(f"{pad}!$omp parallel{' ' + clause if clause else ''}")
        _stmts(s.body, lines, depth + 1)
        lines.append(f"{pad}!$omp end parallel")
    elif isinstance(s, WorkshareLoop):
        sched = f" {_schedule_text(s.schedule)}" if s.schedule is not None else ""
        lines.append(f"{pad}!$omp do{sched}")
        lines.append(f"{pad}do {s.var} = {_loop_bounds(s)}")
        _stmts(s.body, lines, depth + 1)
        lines.append(f"{pad}end do")
    elif isinstance(s, If):
        lines.append(f"{pad}if ({_expr(s.cond, 0)}) then")
        _stmts(s.then_body, lines, depth + 1)
        if s.else_body:
            lines.append(f"{pad}else")
            _stmts(s.else_body, lines, depth + 1)
        lines.append(f"{pad}end if")
    elif isinstance(s, CallStmt):
        args = ", ".join(_expr(a, 0) for a in s.args)
        lines.append(f"{pad}call {s.name}({args})")
    else:
        raise TypeError(f"cannot emit {type(s).__name__}")


def _loop_bounds(s) -> str:
    text = f"{_expr(s.start, 0)}, {_expr(s.end, 0)}"
    if not (isinstance(s.stride, IntLit) and s.stride.value == 1):
        text += f", {_expr(s.stride, 0)}"
    return text
