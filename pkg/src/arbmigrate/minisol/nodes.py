"""AST node definitions for the MiniSol contract-language subset.

Every node carries a source span (byte offsets plus the 1-based line/column
of its first token).  Spans, like name-binding annotations, are excluded from
equality so two parses of the same text compare structurally equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Iterator, Union


@dataclass(frozen=True)
class Span:
    start: int
    end: int
    line: int
    column: int


EMPTY_SPAN = Span(0, 0, 0, 0)


class Node:
    """Marker base class for all AST nodes."""

    span: Span


def _span_field() -> Span:
    return EMPTY_SPAN


class BindingKind(Enum):
    STATE_VAR = "state_var"
    LOCAL = "local"
    PARAM = "param"
    FUNCTION = "function"
    CONTRACT = "contract"
    FREE = "free"


# --- types ---------------------------------------------------------------


@dataclass
class ElementaryType(Node):
    name: str  # uint256 | address | bool | string
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class ArrayType(Node):
    base: "TypeName"
    length: int | None  # None = dynamic
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class MappingType(Node):
    key: ElementaryType
    value: "TypeName"
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


TypeName = Union[ElementaryType, ArrayType, MappingType]


# --- expressions ----------------------------------------------------------


@dataclass
class NumberLit(Node):
    value: int
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class HexLit(Node):
    value: int
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class AddressLit(Node):
    value: int
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class StringLit(Node):
    value: str
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class BoolLit(Node):
    value: bool
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class Ident(Node):
    name: str
    binding: BindingKind = field(default=BindingKind.FREE, compare=False, repr=False)
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class MemberAccess(Node):
    obj: "Expr"
    member: str
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class IndexAccess(Node):
    obj: "Expr"
    index: "Expr"
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class CallExpr(Node):
    callee: "Expr"
    args: list["Expr"] = field(default_factory=list)
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class UnaryExpr(Node):
    op: str  # ! or -
    operand: "Expr"
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class BinaryExpr(Node):
    op: str
    left: "Expr"
    right: "Expr"
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


Expr = Union[
    NumberLit, HexLit, AddressLit, StringLit, BoolLit,
    Ident, MemberAccess, IndexAccess, CallExpr, UnaryExpr, BinaryExpr,
]


# --- statements -----------------------------------------------------------


@dataclass
class VarDeclStmt(Node):
    var_type: TypeName
    name: str
    location: str | None = None  # memory | calldata | storage
    initializer: Expr | None = None
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class AssignStmt(Node):
    target: Expr
    op: str  # = += -= *= /= %=
    value: Expr
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class IncDecStmt(Node):
    target: Expr
    op: str  # ++ or --
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class RequireStmt(Node):
    condition: Expr
    message: StringLit | None = None
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class IfStmt(Node):
    condition: Expr
    then_body: list["Stmt"] = field(default_factory=list)
    else_body: list["Stmt"] | None = None
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class ForStmt(Node):
    init: "Stmt | None"
    condition: Expr | None
    post: "Stmt | None"
    body: list["Stmt"] = field(default_factory=list)
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class WhileStmt(Node):
    condition: Expr
    body: list["Stmt"] = field(default_factory=list)
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class EmitStmt(Node):
    call: CallExpr
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class ReturnStmt(Node):
    value: Expr | None = None
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class ExprStmt(Node):
    expression: Expr
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


Stmt = Union[
    VarDeclStmt, AssignStmt, IncDecStmt, RequireStmt, IfStmt,
    ForStmt, WhileStmt, EmitStmt, ReturnStmt, ExprStmt,
]


# --- declarations ---------------------------------------------------------


@dataclass
class Param(Node):
    var_type: TypeName
    name: str
    location: str | None = None
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class StateVarDecl(Node):
    var_type: TypeName
    visibility: str | None
    name: str
    initializer: Expr | None = None
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class FunctionDef(Node):
    name: str
    params: list[Param] = field(default_factory=list)
    visibility: str | None = None
    mutability: str | None = None  # payable | view | pure
    modifiers: list[str] = field(default_factory=list)
    returns: list[TypeName] = field(default_factory=list)
    body: list[Stmt] = field(default_factory=list)
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


@dataclass
class ContractDef(Node):
    name: str
    members: list[StateVarDecl | FunctionDef] = field(default_factory=list)
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)

    @property
    def state_vars(self) -> list[StateVarDecl]:
        return [m for m in self.members if isinstance(m, StateVarDecl)]

    @property
    def functions(self) -> list[FunctionDef]:
        return [m for m in self.members if isinstance(m, FunctionDef)]


@dataclass
class SourceUnit(Node):
    contracts: list[ContractDef] = field(default_factory=list)
    path: str = field(default="<source>", compare=False)
    source: str = field(default="", compare=False, repr=False)
    span: Span = field(default=EMPTY_SPAN, compare=False, repr=False)


def children(node: Node) -> Iterator[Node]:
    """Direct child nodes, in source order (field declaration order)."""
    for f in fields(node):  # type: ignore[arg-type]
        value = getattr(node, f.name)
        if isinstance(value, Node) and f.name != "span":
            yield value
        elif isinstance(value, list):
            for item in value:
                if isinstance(item, Node):
                    yield item


def walk(node: Node) -> Iterator[Node]:
    """The node itself and every descendant, pre-order."""
    yield node
    for child in children(node):
        yield from walk(child)
