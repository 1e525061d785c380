"""Control-flow representation and memory access analysis.

The CFG keeps the nested structure of the routine: every loop or
parallel construct owns a header block that controls entry into and
exit from its sub-flowgraph.  On top of it, scoping propagation tags
every variable referenced inside a parallel region with its effective
scope, and access classification assigns each (region, shared variable)
pair one of the patterns that drive the adjoint scoping decision.

Classification is deliberately conservative: the only index form proven
race-free is a single affine expression in the worksharing counter with
a literal nonzero coefficient, applied uniformly to all accesses of the
array in that region.  Everything else falls back to mixed_unprovable,
which is a legal answer, never an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import SemanticError
from .ir import (
    Assign,
    BinOp,
    CallStmt,
    Expr,
    If,
    Increment,
    IntLit,
    ParallelLoop,
    ParallelRegion,
    Program,
    Ref,
    SeqLoop,
    Stmt,
    UnaryNeg,
    WorkshareLoop,
    expr_refs,
    walk_stmts,
)
from .emitter import emit_expr

PATTERNS = (
    "not_accessed",
    "exclusive_single_thread",
    "read_only",
    "atomic_increment_only",
    "mixed_unprovable",
)


# ---------------------------------------------------------------------------
# Dependency rule table
# ---------------------------------------------------------------------------

#: Two successive accesses to one location conflict unless both are reads
#: or both are (atomic) increments.
DEP_KINDS = ("read", "write", "increment")


def depends(first: str, second: str) -> bool:
    """True when an ordering constraint exists between two successive
    accesses of the given kinds to the same location."""
    if first == second == "read":
        return False
    if first == second == "increment":
        return False
    return True


# ---------------------------------------------------------------------------
# Control-flow graph
# ---------------------------------------------------------------------------


@dataclass
class BasicBlock:
    id: int
    kind: str  # "plain" | "seq_loop" | "parallel_loop" | "parallel_region" | "workshare" | "branch" | "join" | "entry" | "exit"
    stmts: list[Stmt] = field(default_factory=list)
    succs: list[int] = field(default_factory=list)
    # header-only fields
    loop_var: str | None = None
    clauses: object = None
    region_id: int | None = None


@dataclass
class Region:
    """A parallel region: its header block and the contained subgraph."""

    id: int
    header_block: int
    construct: Stmt
    block_ids: list[int] = field(default_factory=list)
    counters: set[str] = field(default_factory=set)
    effective_scopes: dict[str, str] = field(default_factory=dict)


@dataclass
class Cfg:
    program: Program
    blocks: list[BasicBlock] = field(default_factory=list)
    entry: int = 0
    exit: int = 0
    regions: list[Region] = field(default_factory=list)

    def new_block(self, kind: str = "plain") -> BasicBlock:
        b = BasicBlock(len(self.blocks), kind)
        self.blocks.append(b)
        return b

    def region_of(self, construct: Stmt) -> Region | None:
        for r in self.regions:
            if r.construct is construct:
                return r
        return None


def build_cfg(program: Program) -> Cfg:
    """Build the nested control-flow graph of a validated program."""
    cfg = Cfg(program)
    entry = cfg.new_block("entry")
    cfg.entry = entry.id
    last = _build_seq(cfg, program.body, entry, region=None)
    exit_block = cfg.new_block("exit")
    last.succs.append(exit_block.id)
    cfg.exit = exit_block.id
    for region in cfg.regions:
        _annotate_region(cfg, region)
    return cfg


def _build_seq(cfg: Cfg, stmts: list[Stmt], current: BasicBlock, region: Region | None) -> BasicBlock:
    """Append stmts to the graph; returns the block where flow continues."""
    for s in stmts:
        if isinstance(s, (Assign, Increment, CallStmt)):
            if current.kind not in ("plain", "entry"):
                nxt = cfg.new_block()
                current.succs.append(nxt.id)
                current = nxt
            current.stmts.append(s)
            if region is not None:
                region.block_ids.append(current.id)
        elif isinstance(s, (SeqLoop, WorkshareLoop)):
            kind = "seq_loop" if isinstance(s, SeqLoop) else "workshare"
            header = cfg.new_block(kind)
            header.loop_var = s.var
            header.stmts.append(s)
            if isinstance(s, WorkshareLoop):
                header.clauses = s.schedule
            current.succs.append(header.id)
            if region is not None:
                region.block_ids.append(header.id)
                region.counters.add(s.var)
            body_entry = cfg.new_block()
            header.succs.append(body_entry.id)
            if region is not None:
                region.block_ids.append(body_entry.id)
            body_exit = _build_seq(cfg, s.body, body_entry, region)
            body_exit.succs.append(header.id)
            current = header
        elif isinstance(s, (ParallelLoop, ParallelRegion)):
            kind = "parallel_loop" if isinstance(s, ParallelLoop) else "parallel_region"
            header = cfg.new_block(kind)
            header.clauses = s.clauses
            header.stmts.append(s)
            new_region = Region(len(cfg.regions), header.id, s)
            header.region_id = new_region.id
            cfg.regions.append(new_region)
            if isinstance(s, ParallelLoop):
                header.loop_var = s.var
                new_region.counters.add(s.var)
            current.succs.append(header.id)
            body_entry = cfg.new_block()
            header.succs.append(body_entry.id)
            new_region.block_ids.append(body_entry.id)
            body_exit = _build_seq(cfg, s.body, body_entry, new_region)
            body_exit.succs.append(header.id)
            current = header
        elif isinstance(s, If):
            branch = cfg.new_block("branch")
            branch.stmts.append(s)
            current.succs.append(branch.id)
            if region is not None:
                region.block_ids.append(branch.id)
            join = cfg.new_block("join")
            for arm in (s.then_body, s.else_body):
                arm_entry = cfg.new_block()
                branch.succs.append(arm_entry.id)
                if region is not None:
                    region.block_ids.append(arm_entry.id)
                arm_exit = _build_seq(cfg, arm, arm_entry, region)
                arm_exit.succs.append(join.id)
            if region is not None:
                region.block_ids.append(join.id)
            current = join
        else:
            raise SemanticError(f"cannot build CFG for {type(s).__name__}")
    return current


# ---------------------------------------------------------------------------
# Scope propagation
# ---------------------------------------------------------------------------


def _region_names(region: Region) -> set[str]:
    names: set[str] = set()
    construct = region.construct
    for s in walk_stmts(construct.body):
        if isinstance(s, (Assign, Increment)):
            names.update(r.name for r in expr_refs(s.lhs))
            names.update(r.name for r in expr_refs(s.rhs))
        elif isinstance(s, (SeqLoop, WorkshareLoop)):
            names.add(s.var)
            for e in (s.start, s.end, s.stride):
                names.update(r.name for r in expr_refs(e))
        elif isinstance(s, If):
            names.update(r.name for r in expr_refs(s.cond))
        elif isinstance(s, CallStmt):
            for a in s.args:
                names.update(r.name for r in expr_refs(a))
    if isinstance(construct, ParallelLoop):
        names.add(construct.var)
    names.update(construct.clauses.scoping)
    return names


def _annotate_region(cfg: Cfg, region: Region):
    clauses = region.construct.clauses
    for name in sorted(_region_names(region)):
        region.effective_scopes[name] = clauses.scope_of(name, region.counters)


def propagate_scoping(cfg: Cfg) -> Cfg:
    """Tag every variable used inside each parallel region with its
    effective scope (explicit clause, counter rule, or shared default).

    build_cfg already computes the annotation; this pass re-derives it
    so the operation is usable on a hand-built Cfg too.
    """
    for region in cfg.regions:
        region.effective_scopes.clear()
        _annotate_region(cfg, region)
    return cfg


def scope_of_ref(cfg: Cfg, region_id: int, name: str) -> str:
    region = cfg.regions[region_id]
    if name in region.effective_scopes:
        return region.effective_scopes[name]
    return region.construct.clauses.scope_of(name, region.counters)


# ---------------------------------------------------------------------------
# Access classification
# ---------------------------------------------------------------------------


@dataclass
class AccessSummary:
    region: int
    variable: str
    pattern: str
    justification: str


def _affine_in(index: Expr, counter: str) -> tuple[int, Expr] | None:
    """Decompose index as c1 * counter + rest with literal c1 and
    counter-free rest; None when the index is not of that shape."""
    if isinstance(index, Ref):
        if index.name == counter:
            return (1, IntLit(0)) if index.index is None else None
        return (0, index) if counter not in {r.name for r in expr_refs(index)} else None
    if isinstance(index, IntLit):
        return (0, index)
    if isinstance(index, UnaryNeg):
        sub = _affine_in(index.operand, counter)
        if sub is None:
            return None
        c, rest = sub
        return (-c, UnaryNeg(rest))
    if isinstance(index, BinOp):
        left = _affine_in(index.left, counter)
        right = _affine_in(index.right, counter)
        if index.op == "+" and left and right:
            return (left[0] + right[0], BinOp("+", left[1], right[1]))
        if index.op == "-" and left and right:
            return (left[0] - right[0], BinOp("-", left[1], right[1]))
        if index.op == "*" and left and right:
            lc, lrest = left
            rc, rrest = right
            if lc == 0 and isinstance(lrest, IntLit):
                return (lrest.value * rc, BinOp("*", lrest, rrest))
            if rc == 0 and isinstance(rrest, IntLit):
                return (lc * rrest.value, BinOp("*", lrest, rrest))
            if lc == 0 and rc == 0:
                return (0, index)
        if index.op == "/" and left and right and left[0] == 0 and right[0] == 0:
            return (0, index)
        return None
    return None


def _collect_accesses(construct, var: str):
    """Yield (kind, index_expr_or_None, line) for every access to var.

    kind is read / write / increment; an increment whose right-hand side
    also reads the variable is reported as both an increment and reads.
    """
    for s in walk_stmts(construct.body):
        if isinstance(s, (Assign, Increment)):
            if s.lhs.name == var:
                kind = "increment" if isinstance(s, Increment) else "write"
                if isinstance(s, Increment) and not s.atomic:
                    kind = "plain_increment"
                yield (kind, s.lhs.index, s.line)
            if s.lhs.index is not None:
                for r in expr_refs(s.lhs.index):
                    if r.name == var:
                        yield ("read", r.index, s.line)
            for r in expr_refs(s.rhs):
                if r.name == var:
                    yield ("read", r.index, s.line)
        elif isinstance(s, (SeqLoop, WorkshareLoop)):
            for e in (s.start, s.end, s.stride):
                for r in expr_refs(e):
                    if r.name == var:
                        yield ("read", r.index, s.line)
        elif isinstance(s, If):
            for r in expr_refs(s.cond):
                if r.name == var:
                    yield ("read", r.index, s.line)
        elif isinstance(s, CallStmt):
            for a in s.args:
                for r in expr_refs(a):
                    if r.name == var:
                        yield ("read", r.index, s.line)


def classify_access(cfg: Cfg, region_id: int, var: str) -> AccessSummary:
    """Classify how a shared variable is accessed within a region."""
    region = cfg.regions[region_id]
    construct = region.construct
    accesses = list(_collect_accesses(construct, var))
    if not accesses:
        return AccessSummary(region_id, var, "not_accessed", "no access in region")

    kinds = {k for k, _, _ in accesses}
    if kinds == {"read"}:
        return AccessSummary(region_id, var, "read_only",
                             f"{len(accesses)} read accesses, no writes")
    if kinds <= {"increment"}:
        return AccessSummary(region_id, var, "atomic_increment_only",
                             f"{len(accesses)} atomic increments, no other access")

    counter = construct.var if isinstance(construct, ParallelLoop) else None
    if counter is not None:
        forms = set()
        ok = True
        for kind, index, _ in accesses:
            if index is None:
                ok = False
                break
            form = _affine_in(index, counter)
            if form is None or form[0] == 0:
                ok = False
                break
            forms.add((form[0], emit_expr(form[1])))
        if ok and len(forms) == 1:
            c1, rest = next(iter(forms))
            return AccessSummary(
                region_id, var, "exclusive_single_thread",
                f"all accesses use index {c1}*{counter} + ({rest}), injective in {counter}")

    detail = ", ".join(sorted(kinds))
    return AccessSummary(region_id, var, "mixed_unprovable",
                         f"access kinds {{{detail}}} not provably conflict-free")


def summarize_regions(cfg: Cfg) -> list[AccessSummary]:
    """AccessSummary for every shared variable of every parallel region."""
    out = []
    for region in cfg.regions:
        for name, scope in sorted(region.effective_scopes.items()):
            if scope == "shared":
                out.append(classify_access(cfg, region.id, name))
    return out
