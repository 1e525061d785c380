"""Lexer, parser, and validator for the mini DSL.

Source files hold exactly one routine:

    subroutine saxpy(n, a, x, y)
      integer, intent(in) :: n
      real, intent(in), active :: a
      real, intent(in), active :: x(n)
      real, intent(inout), active :: y(n)
      integer :: i
      !$omp parallel do shared(x, y) firstprivate(a) schedule(static)
      do i = 1, n
        y(i) += a * x(i)
      end do
    end subroutine saxpy

Pragma lines (`!$omp ...`, `!$ad ...`) bind to the following statement.
With omp_enabled=False every pragma line is treated as a comment, so
parallel loops degrade to sequential loops and the dataflow changes
accordingly.  The full grammar is documented in docs/grammar.md.
"""

from __future__ import annotations

import re

from .errors import ParseError, SemanticError
from .ir import (
    INTRINSICS,
    RUNTIME_CALLS,
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
    VarDecl,
    WorkshareLoop,
    expr_names,
    expr_refs,
    walk_stmts,
)

_TOKEN_RE = re.compile(
    r"""
    (?P<real>(\d+\.\d*|\.\d+)([eE][+-]?\d+)?|\d+[eE][+-]?\d+)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z][A-Za-z0-9_]*)
  | (?P<op>\+=|==|/=|!=|<=|>=|::|[-+*/(),=<>:])
  | (?P<ws>\s+)
  | (?P<bad>.)
    """,
    re.VERBOSE,
)

_KEYWORDS = {
    "subroutine", "end", "do", "if", "then", "else", "call",
    "integer", "real", "intent", "active",
}


def _tokenize(text: str, lineno: int) -> list[tuple[str, str, int]]:
    toks = []
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        if kind == "ws":
            continue
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group()!r}", lineno, m.start() + 1)
        toks.append((kind, m.group(), m.start() + 1))
    return toks


class _Line:
    """Token cursor over one logical line (pragma sentinel already removed)."""

    def __init__(self, text: str, lineno: int):
        self.text = text
        self.lineno = lineno
        self.toks = _tokenize(text, lineno)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        if self.pos < len(self.toks):
            return self.toks[self.pos]
        return ("eol", "", len(self.text) + 1)

    def next(self) -> tuple[str, str, int]:
        t = self.peek()
        self.pos += 1
        return t

    def accept(self, value: str) -> bool:
        if self.peek()[1] == value:
            self.pos += 1
            return True
        return False

    def accept_name(self, word: str) -> bool:
        kind, value, _ = self.peek()
        if kind == "name" and value.lower() == word:
            self.pos += 1
            return True
        return False

    def expect(self, value: str):
        _, got, col = self.peek()
        if got != value:
            shown = got if got else "end of line"
            raise ParseError(f"expected {value!r}, found {shown!r}", self.lineno, col)
        self.pos += 1

    def expect_name(self) -> str:
        kind, value, col = self.next()
        if kind != "name":
            raise ParseError(f"expected identifier, found {value!r}", self.lineno, col)
        return value

    def at_end(self) -> bool:
        return self.pos >= len(self.toks)

    def expect_end(self):
        if not self.at_end():
            _, value, col = self.peek()
            raise ParseError(f"unexpected trailing {value!r}", self.lineno, col)

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.lineno, self.peek()[2])


class _SourceLine:
    """One nonempty source line: either a pragma or a code line."""

    __slots__ = ("lineno", "pragma", "text")

    def __init__(self, text: str, lineno: int, pragma: str | None):
        self.text = text
        self.lineno = lineno
        self.pragma = pragma  # "omp" | "ad" | None

    def first_word(self) -> str:
        m = re.match(r"[A-Za-z][A-Za-z0-9_]*", self.text)
        return m.group().lower() if m else ""

    def cursor(self) -> _Line:
        return _Line(self.text, self.lineno)


def _strip_comment(raw: str) -> str:
    idx = raw.find("!")
    return raw if idx < 0 else raw[:idx]


def _scan_lines(source: str, omp_enabled: bool) -> list[_SourceLine]:
    out = []
    for i, raw in enumerate(source.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        low = stripped.lower()
        if low.startswith("!$omp") or low.startswith("!$ad"):
            if not omp_enabled:
                continue
            kind = "omp" if low.startswith("!$omp") else "ad"
            tail = stripped[5 if kind == "omp" else 4:].strip()
            out.append(_SourceLine(tail, i, kind))
            continue
        if stripped.startswith("!"):
            continue
        code = _strip_comment(raw).strip()
        if code:
            out.append(_SourceLine(code, i, None))
    return out


class _Parser:
    def __init__(self, source: str, omp_enabled: bool):
        self.lines = _scan_lines(source, omp_enabled)
        self.idx = 0

    # line cursor ------------------------------------------------------------

    def _peek(self) -> _SourceLine | None:
        return self.lines[self.idx] if self.idx < len(self.lines) else None

    def _next(self) -> _SourceLine:
        ln = self._peek()
        if ln is None:
            last = self.lines[-1].lineno if self.lines else 1
            raise ParseError("unexpected end of file", last)
        self.idx += 1
        return ln

    def _next_code(self) -> _Line:
        ln = self._next()
        if ln.pragma:
            raise ParseError("unexpected pragma", ln.lineno)
        return ln.cursor()

    # program ------------------------------------------------------------

    def parse_program(self) -> Program:
        ln = self._next_code()
        if not ln.accept_name("subroutine"):
            raise ln.error("expected 'subroutine'")
        name = ln.expect_name()
        param_names: list[str] = []
        ln.expect("(")
        if not ln.accept(")"):
            while True:
                param_names.append(ln.expect_name())
                if ln.accept(")"):
                    break
                ln.expect(",")
        ln.expect_end()

        params: dict[str, VarDecl] = {}
        decls: list[VarDecl] = []
        while True:
            nxt = self._peek()
            if nxt is None or nxt.pragma or nxt.first_word() not in ("real", "integer"):
                break
            for d in self._parse_decl_line(self._next_code()):
                if d.name in params or any(x.name == d.name for x in decls):
                    raise SemanticError(f"duplicate declaration of {d.name!r}")
                if d.name in param_names:
                    if d.intent is None:
                        raise SemanticError(f"parameter {d.name!r} needs an intent")
                    params[d.name] = d
                else:
                    if d.intent is not None:
                        raise SemanticError(f"intent on non-parameter {d.name!r}")
                    if d.active:
                        raise SemanticError(f"'active' applies to parameters only: {d.name!r}")
                    decls.append(d)

        missing = [p for p in param_names if p not in params]
        if missing:
            raise SemanticError(f"undeclared parameters: {', '.join(missing)}")

        body = self._parse_stmts(stop=("end",))
        ln = self._next_code()
        if not (ln.accept_name("end") and ln.accept_name("subroutine")):
            raise ln.error("expected 'end subroutine'")
        if not ln.at_end():
            trailing = ln.expect_name()
            ln.expect_end()
            if trailing != name:
                raise ParseError(f"mismatched routine name {trailing!r}", ln.lineno)
        if self._peek() is not None:
            raise ParseError("one routine per file", self._peek().lineno)

        program = Program(name, [params[p] for p in param_names], decls, body)
        _validate(program)
        return program

    def _parse_decl_line(self, ln: _Line) -> list[VarDecl]:
        base = ln.expect_name().lower()
        intent = None
        active = False
        while ln.accept(","):
            attr = ln.expect_name().lower()
            if attr == "intent":
                ln.expect("(")
                intent = ln.expect_name().lower()
                if intent not in ("in", "out", "inout"):
                    raise ln.error(f"bad intent {intent!r}")
                ln.expect(")")
            elif attr == "active":
                active = True
            else:
                raise ln.error(f"unknown attribute {attr!r}")
        ln.expect("::")
        out = []
        while True:
            name = ln.expect_name()
            extent = None
            if ln.accept("("):
                extent = self._parse_expr(ln)
                ln.expect(")")
            if extent is not None and base != "real":
                raise SemanticError(f"arrays must be real: {name!r}", ln.lineno)
            out.append(VarDecl(name, base, extent, intent, active))
            if not ln.accept(","):
                break
        ln.expect_end()
        return out

    # statements ------------------------------------------------------------

    def _parse_stmts(self, stop: tuple[str, ...]) -> list[Stmt]:
        """Parse until a code line starting with a stop keyword or an
        `!$omp end parallel` pragma (left unconsumed)."""
        out: list[Stmt] = []
        while True:
            ln = self._peek()
            if ln is None:
                return out
            if ln.pragma == "omp" and re.match(r"\s*end\s+parallel\b", ln.text, re.I):
                return out
            if ln.pragma is None and ln.first_word() in stop:
                return out
            out.append(self._parse_stmt())

    def _parse_stmt(self) -> Stmt:
        ln = self._peek()
        if ln.pragma == "ad":
            return self._parse_ad_directive()
        if ln.pragma == "omp":
            return self._parse_omp_pragma()
        word = ln.first_word()
        if word == "do":
            return self._parse_do(self._next_code(), clauses=None)
        if word == "if":
            return self._parse_if()
        if word == "call":
            return self._parse_call(self._next_code())
        return self._parse_assign_or_increment(self._next_code(), atomic=False)

    def _parse_ad_directive(self) -> Stmt:
        src = self._next()
        tail = src.cursor()
        if not tail.accept_name("omp_adjoint"):
            raise tail.error("expected 'omp_adjoint'")
        override: dict[str, str] = {}
        while not tail.at_end():
            kind = tail.expect_name().lower()
            if kind == "shared":
                scope = "shared"
                tail.expect("(")
            elif kind == "atomic":
                scope = "atomic_shared"
                tail.expect("(")
            elif kind == "reduction":
                scope = "reduction_sum"
                tail.expect("(")
                tail.expect("+")
                tail.expect(":")
            else:
                raise tail.error(f"unknown adjoint override clause {kind!r}")
            while True:
                var = tail.expect_name()
                if var in override:
                    raise SemanticError(f"duplicate override for {var!r}", src.lineno)
                override[var] = scope
                if tail.accept(")"):
                    break
                tail.expect(",")
        nxt = self._peek()
        if nxt is None or nxt.pragma != "omp":
            raise ParseError("'!$ad omp_adjoint' must precede an '!$omp parallel do' pragma",
                             src.lineno)
        stmt = self._parse_omp_pragma()
        if not isinstance(stmt, ParallelLoop):
            raise ParseError("'!$ad omp_adjoint' applies to a parallel do loop", src.lineno)
        stmt.clauses.ad_override = override
        return stmt

    def _parse_omp_pragma(self) -> Stmt:
        src = self._next()
        tail = src.cursor()
        if tail.accept_name("parallel"):
            if tail.accept_name("do"):
                clauses = self._parse_clauses(tail)
                body_ln = self._next_code()
                if not body_ln.accept_name("do"):
                    raise body_ln.error("expected 'do' after '!$omp parallel do'")
                return self._parse_do(body_ln, clauses=clauses, consumed_do=True)
            clauses = self._parse_clauses(tail)
            body = self._parse_stmts(stop=("end",))
            endln = self._peek()
            if endln is None or endln.pragma != "omp" or \
                    not re.match(r"\s*end\s+parallel\b", endln.text, re.I):
                raise ParseError("expected '!$omp end parallel'", src.lineno)
            self._next()
            return ParallelRegion(clauses, body, line=src.lineno)
        if tail.accept_name("atomic"):
            tail.expect_end()
            return self._parse_assign_or_increment(self._next_code(), atomic=True)
        if tail.accept_name("do"):
            clauses = self._parse_clauses(tail)
            if clauses.scoping:
                raise SemanticError("'!$omp do' takes only a schedule clause", src.lineno)
            body_ln = self._next_code()
            if not body_ln.accept_name("do"):
                raise body_ln.error("expected 'do' after '!$omp do'")
            loop = self._parse_do(body_ln, clauses=None, consumed_do=True)
            return WorkshareLoop(loop.var, loop.start, loop.end, loop.stride,
                                 clauses.schedule, loop.body, line=src.lineno)
        raise tail.error("unknown OpenMP pragma")

    def _parse_clauses(self, tail: _Line) -> ClauseSet:
        clauses = ClauseSet()
        while not tail.at_end():
            kind = tail.expect_name().lower()
            if kind == "schedule":
                if clauses.schedule is not None:
                    raise SemanticError("duplicate schedule clause", tail.lineno)
                tail.expect("(")
                skind = tail.expect_name().lower()
                if skind not in ("static", "dynamic"):
                    raise tail.error(f"unsupported schedule {skind!r}")
                chunk = None
                if tail.accept(","):
                    k, v, col = tail.next()
                    if k != "int" or int(v) <= 0:
                        raise ParseError("chunk must be a positive integer", tail.lineno, col)
                    chunk = int(v)
                tail.expect(")")
                clauses.schedule = Schedule(skind, chunk)
                continue
            if kind == "reduction":
                tail.expect("(")
                _, op, _ = tail.next()
                if op != "+":
                    raise SemanticError(f"only sum reductions are supported, got {op!r}",
                                        tail.lineno)
                tail.expect(":")
                scope = "reduction_sum"
            elif kind in ("shared", "private", "firstprivate", "lastprivate"):
                tail.expect("(")
                scope = kind
            else:
                raise tail.error(f"unknown clause {kind!r}")
            while True:
                var = tail.expect_name()
                if var in clauses.scoping:
                    raise SemanticError(f"variable {var!r} appears in two scoping clauses",
                                        tail.lineno)
                clauses.scoping[var] = scope
                if tail.accept(")"):
                    break
                tail.expect(",")
        return clauses

    def _parse_do(self, ln: _Line, clauses: ClauseSet | None, consumed_do: bool = False):
        if not consumed_do:
            ln.accept_name("do")
        lineno = ln.lineno
        var = ln.expect_name()
        ln.expect("=")
        start = self._parse_expr(ln)
        ln.expect(",")
        end = self._parse_expr(ln)
        stride: Expr = IntLit(1)
        if ln.accept(","):
            stride = self._parse_expr(ln)
        ln.expect_end()
        body = self._parse_stmts(stop=("end",))
        endln = self._next_code()
        if not (endln.accept_name("end") and endln.accept_name("do")):
            raise endln.error("expected 'end do'")
        endln.expect_end()
        if clauses is None:
            return SeqLoop(var, start, end, stride, body, line=lineno)
        return ParallelLoop(var, start, end, stride, clauses, body, line=lineno)

    def _parse_if(self) -> If:
        ln = self._next_code()
        ln.accept_name("if")
        lineno = ln.lineno
        ln.expect("(")
        cond = self._parse_condition(ln)
        ln.expect(")")
        if not ln.accept_name("then"):
            raise ln.error("expected 'then'")
        ln.expect_end()
        then_body = self._parse_stmts(stop=("else", "end"))
        else_body: list[Stmt] = []
        nxt = self._peek()
        if nxt is not None and nxt.pragma is None and nxt.first_word() == "else":
            eln = self._next_code()
            eln.accept_name("else")
            eln.expect_end()
            else_body = self._parse_stmts(stop=("end",))
        endln = self._next_code()
        if not (endln.accept_name("end") and endln.accept_name("if")):
            raise endln.error("expected 'end if'")
        endln.expect_end()
        return If(cond, then_body, else_body, line=lineno)

    def _parse_call(self, ln: _Line) -> CallStmt:
        ln.accept_name("call")
        lineno = ln.lineno
        name = ln.expect_name()
        args: list[Expr] = []
        if ln.accept("("):
            if not ln.accept(")"):
                while True:
                    args.append(self._parse_expr(ln))
                    if ln.accept(")"):
                        break
                    ln.expect(",")
        ln.expect_end()
        return CallStmt(name, args, line=lineno)

    def _parse_assign_or_increment(self, ln: _Line, atomic: bool) -> Stmt:
        lineno = ln.lineno
        lhs = self._parse_ref(ln)
        _, op, col = ln.next()
        if op == "+=":
            rhs = self._parse_expr(ln)
            ln.expect_end()
            return Increment(lhs, rhs, atomic=atomic, line=lineno)
        if op == "=":
            if atomic:
                raise SemanticError("'!$omp atomic' must precede an increment", lineno)
            rhs = self._parse_expr(ln)
            ln.expect_end()
            return Assign(lhs, rhs, line=lineno)
        raise ParseError(f"expected '=' or '+=', found {op!r}", lineno, col)

    def _parse_ref(self, ln: _Line) -> Ref:
        name = ln.expect_name()
        index = None
        if ln.accept("("):
            index = self._parse_expr(ln)
            ln.expect(")")
        return Ref(name, index)

    # expressions ------------------------------------------------------------

    def _parse_condition(self, ln: _Line) -> Compare:
        left = self._parse_expr(ln)
        _, op, col = ln.next()
        if op == "!=":
            op = "/="
        if op not in ("==", "/=", "<", "<=", ">", ">="):
            raise ParseError(f"expected a comparison operator, found {op!r}", ln.lineno, col)
        right = self._parse_expr(ln)
        return Compare(op, left, right)

    def _parse_expr(self, ln: _Line) -> Expr:
        e = self._parse_term(ln)
        while True:
            if ln.accept("+"):
                e = BinOp("+", e, self._parse_term(ln))
            elif ln.accept("-"):
                e = BinOp("-", e, self._parse_term(ln))
            else:
                return e

    def _parse_term(self, ln: _Line) -> Expr:
        e = self._parse_factor(ln)
        while True:
            if ln.accept("*"):
                e = BinOp("*", e, self._parse_factor(ln))
            elif ln.accept("/"):
                e = BinOp("/", e, self._parse_factor(ln))
            else:
                return e

    def _parse_factor(self, ln: _Line) -> Expr:
        if ln.accept("-"):
            return UnaryNeg(self._parse_factor(ln))
        if ln.accept("+"):
            return self._parse_factor(ln)
        return self._parse_atom(ln)

    def _parse_atom(self, ln: _Line) -> Expr:
        kind, value, col = ln.next()
        if kind == "int":
            return IntLit(int(value))
        if kind == "real":
            return RealLit(float(value))
        if kind == "name":
            if value.lower() in INTRINSICS and ln.peek()[1] == "(":
                ln.expect("(")
                arg = self._parse_expr(ln)
                ln.expect(")")
                return Intrinsic(value.lower(), arg)
            index = None
            if ln.accept("("):
                index = self._parse_expr(ln)
                ln.expect(")")
            return Ref(value, index)
        if value == "(":
            e = self._parse_expr(ln)
            ln.expect(")")
            return e
        shown = value if value else "end of line"
        raise ParseError(f"expected an expression, found {shown!r}", ln.lineno, col)


def parse(source_text: str, omp_enabled: bool = True) -> Program:
    """Parse and validate a routine.

    With omp_enabled=False, pragma lines are treated as comments: the
    result contains no ParallelLoop, ParallelRegion, WorkshareLoop, or
    atomic increment nodes.
    """
    return _Parser(source_text, omp_enabled).parse_program()


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def _validate(program: Program) -> None:
    names: dict[str, VarDecl] = {}
    for d in program.all_decls():
        if d.name in names:
            raise SemanticError(f"duplicate declaration of {d.name!r}")
        if d.name.lower() in _KEYWORDS or d.name.lower() in INTRINSICS:
            raise SemanticError(f"{d.name!r} is a reserved word")
        names[d.name] = d

    for d in program.all_decls():
        if d.extent is not None:
            for r in expr_refs(d.extent):
                ext = names.get(r.name)
                if ext is None:
                    raise SemanticError(f"undeclared name {r.name!r} in extent of {d.name!r}")
                if ext.base != "integer" or ext.extent is not None or ext.intent != "in":
                    raise SemanticError(
                        f"array extent of {d.name!r} must use intent(in) integer parameters")
        if d.active and d.base != "real":
            raise SemanticError(f"active variable {d.name!r} must be real")

    _check_body(program, program.body, in_parallel=False)


def _expr_type(program: Program, e: Expr, line: int | None) -> str:
    if isinstance(e, IntLit):
        return "integer"
    if isinstance(e, RealLit):
        return "real"
    if isinstance(e, Ref):
        d = program.lookup(e.name)
        if d is None:
            raise SemanticError(f"undeclared variable {e.name!r}", line)
        if e.index is not None:
            if not d.is_array:
                raise SemanticError(f"{e.name!r} is not an array", line)
            if _expr_type(program, e.index, line) != "integer":
                raise SemanticError(f"index of {e.name!r} must be integer", line)
            return "real"
        if d.is_array:
            raise SemanticError(f"array {e.name!r} used without an index", line)
        return d.base
    if isinstance(e, BinOp):
        lt = _expr_type(program, e.left, line)
        rt = _expr_type(program, e.right, line)
        return "integer" if lt == rt == "integer" else "real"
    if isinstance(e, UnaryNeg):
        return _expr_type(program, e.operand, line)
    if isinstance(e, Intrinsic):
        _expr_type(program, e.arg, line)
        return "real"
    if isinstance(e, Compare):
        raise SemanticError("comparison is only valid as an if condition", line)
    raise SemanticError(f"unknown expression {e!r}", line)


def _check_store(program: Program, lhs: Ref, rhs_type: str, line: int | None):
    d = program.lookup(lhs.name)
    if d is None:
        raise SemanticError(f"undeclared variable {lhs.name!r}", line)
    if d.intent == "in":
        raise SemanticError(f"cannot write intent(in) parameter {lhs.name!r}", line)
    lhs_type = _expr_type(program, lhs, line)
    if lhs_type == "integer" and rhs_type == "real":
        raise SemanticError(f"cannot assign real value to integer {lhs.name!r}", line)


_POP_CALLS = ("pop_real8", "pop_integer4", "pop_integer8")


def _check_body(program: Program, stmts: list[Stmt], in_parallel: bool):
    for s in stmts:
        if isinstance(s, Assign):
            rt = _expr_type(program, s.rhs, s.line)
            _check_store(program, s.lhs, rt, s.line)
        elif isinstance(s, Increment):
            rt = _expr_type(program, s.rhs, s.line)
            _check_store(program, s.lhs, rt, s.line)
            if s.atomic:
                d = program.lookup(s.lhs.name)
                if d.is_array and s.lhs.index is None:
                    raise SemanticError("atomic update needs a scalar or a single array cell",
                                        s.line)
        elif isinstance(s, (SeqLoop, WorkshareLoop)):
            _check_loop_header(program, s, s.line)
            if isinstance(s, WorkshareLoop) and not in_parallel:
                raise SemanticError("worksharing loop outside a parallel region", s.line)
            _check_body(program, s.body, in_parallel)
        elif isinstance(s, ParallelLoop):
            if in_parallel:
                raise SemanticError("nested parallelism is not supported", s.line)
            _check_loop_header(program, s, s.line)
            _check_canonical(program, s)
            _check_clauses(program, s, s.clauses, s.line)
            _check_body(program, s.body, in_parallel=True)
        elif isinstance(s, ParallelRegion):
            if in_parallel:
                raise SemanticError("nested parallelism is not supported", s.line)
            _check_clauses(program, s, s.clauses, s.line)
            _check_body(program, s.body, in_parallel=True)
        elif isinstance(s, If):
            if not isinstance(s.cond, Compare):
                raise SemanticError("if condition must be a comparison", s.line)
            _expr_type(program, s.cond.left, s.line)
            _expr_type(program, s.cond.right, s.line)
            _check_body(program, s.then_body, in_parallel)
            _check_body(program, s.else_body, in_parallel)
        elif isinstance(s, CallStmt):
            _check_call(program, s)
        else:
            raise SemanticError(f"unknown statement {type(s).__name__}", None)


def _check_call(program: Program, s: CallStmt):
    if s.name not in RUNTIME_CALLS:
        raise SemanticError(f"unknown runtime call {s.name!r}", s.line)
    for a in s.args:
        _expr_type(program, a, s.line)
    if s.name in _POP_CALLS:
        if len(s.args) != 1 or not isinstance(s.args[0], Ref):
            raise SemanticError(f"{s.name} takes one variable reference", s.line)
        _check_store(program, s.args[0], "integer", s.line)
    elif s.name == "get_static_schedule":
        if len(s.args) != 5 or not all(isinstance(a, Ref) for a in s.args[3:]):
            raise SemanticError(
                "get_static_schedule takes (start, end, stride, chunk_start, chunk_end)", s.line)
    elif s.name == "record_dynamic_schedule":
        if len(s.args) != 2:
            raise SemanticError("record_dynamic_schedule takes (counter, stride)", s.line)


def _check_loop_header(program: Program, loop, line):
    d = program.lookup(loop.var)
    if d is None:
        raise SemanticError(f"undeclared loop counter {loop.var!r}", line)
    if d.base != "integer" or d.is_array:
        raise SemanticError(f"loop counter {loop.var!r} must be a scalar integer", line)
    if d.intent == "in":
        raise SemanticError(f"loop counter {loop.var!r} cannot be intent(in)", line)
    for e in (loop.start, loop.end, loop.stride):
        if _expr_type(program, e, line) != "integer":
            raise SemanticError(f"loop bounds of {loop.var!r} must be integer expressions", line)


def _check_canonical(program: Program, loop: ParallelLoop):
    if isinstance(loop.stride, IntLit) and loop.stride.value == 0:
        raise SemanticError("parallel loop stride must be nonzero", loop.line)
    assigned = set()
    for s in walk_stmts(loop.body):
        if isinstance(s, (Assign, Increment)):
            assigned.add(s.lhs.name)
        elif isinstance(s, (SeqLoop, WorkshareLoop)):
            assigned.add(s.var)
    assigned.add(loop.var)
    for e in (loop.start, loop.end, loop.stride):
        bad = expr_names(e) & assigned
        if bad:
            raise SemanticError(
                f"parallel loop bounds must be loop-invariant; {sorted(bad)} written in body",
                loop.line)


def _check_clauses(program: Program, construct, clauses: ClauseSet, line):
    for var in clauses.scoping:
        if program.lookup(var) is None:
            raise SemanticError(f"undeclared variable {var!r} in scoping clause", line)
        if isinstance(construct, ParallelLoop) and var == construct.var:
            raise SemanticError(f"loop counter {var!r} cannot appear in a scoping clause", line)
    counters = {s.var for s in walk_stmts(construct.body)
                if isinstance(s, (SeqLoop, WorkshareLoop))}
    if isinstance(construct, ParallelLoop):
        counters.add(construct.var)
    for var in clauses.ad_override:
        if program.lookup(var) is None:
            raise SemanticError(f"undeclared variable {var!r} in adjoint override", line)
        if clauses.scope_of(var, counters) != "shared":
            raise SemanticError(
                f"adjoint override applies to shared variables only: {var!r}", line)
