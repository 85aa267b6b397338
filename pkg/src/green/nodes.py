"""Abstract syntax tree for Green programs.

Spans and checker annotations are excluded from equality so that two
parses of the same text compare equal regardless of layout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional, Union

from .diagnostics import NO_SPAN, Span


def _span():
    return field(default=NO_SPAN, compare=False, repr=False)


def _note():
    return field(default=None, compare=False, repr=False)


# ---------------------------------------------------------------- types

@dataclass
class TypeExpr:
    kind: str  # basic, class, classobj, array
    name: str = ""
    elem: Optional["TypeExpr"] = None
    dims: list = field(default_factory=list)  # None, int or constant name per dimension
    expanded: bool = False
    span: Span = _span()

    def canonical(self) -> str:
        if self.kind == "array":
            return f"array({self.elem.canonical()})" + "[]" * len(self.dims)
        if self.kind == "classobj":
            return f"type({self.name})"
        return self.name


# ---------------------------------------------------------------- expressions

@dataclass
class Expr:
    pass


@dataclass
class Literal(Expr):
    kind: str  # char string boolean byte integer long real double
    value: Any
    span: Span = _span()
    ty: Any = _note()


@dataclass
class Name(Expr):
    id: str
    span: Span = _span()
    ty: Any = _note()
    ref: Any = _note()  # resolution recorded by the checker


@dataclass
class SelfExpr(Expr):
    span: Span = _span()
    ty: Any = _note()


@dataclass
class SuperExpr(Expr):
    span: Span = _span()
    ty: Any = _note()


@dataclass
class NilExpr(Expr):
    span: Span = _span()
    ty: Any = _note()


@dataclass
class ResultExpr(Expr):
    span: Span = _span()
    ty: Any = _note()


@dataclass
class ExceptionExpr(Expr):
    span: Span = _span()
    ty: Any = _note()


@dataclass
class TypeValue(Expr):
    """A basic type keyword or array type used as a class object."""
    type: TypeExpr
    span: Span = _span()
    ty: Any = _note()


@dataclass
class Unary(Expr):
    op: str
    operand: Expr
    span: Span = _span()
    ty: Any = _note()


@dataclass
class Binary(Expr):
    op: str
    left: Expr
    right: Expr
    span: Span = _span()
    ty: Any = _note()
    opty: Any = _note()  # operand type the arithmetic is carried out in


@dataclass
class Assign(Expr):
    target: Expr
    value: Expr
    span: Span = _span()
    ty: Any = _note()


@dataclass
class Index(Expr):
    obj: Expr
    index: Expr
    span: Span = _span()
    ty: Any = _note()


@dataclass
class Send(Expr):
    receiver: Optional[Expr]  # None means a send to self written without receiver
    name: str
    args: Optional[list]  # None means member access without parentheses
    span: Span = _span()
    ty: Any = _note()
    target: Any = _note()  # resolved method signature / member


@dataclass
class ArrayInit(Expr):
    elements: list
    span: Span = _span()
    ty: Any = _note()


@dataclass
class Box(Expr):
    """Inserted by the checker: wrap a basic value into its wrapper object."""
    expr: Expr
    basic: str
    span: Span = _span()
    ty: Any = _note()


@dataclass
class Unbox(Expr):
    """Inserted by the checker: take the basic value out of a wrapper object."""
    expr: Expr
    basic: str
    span: Span = _span()
    ty: Any = _note()


# ---------------------------------------------------------------- statements

@dataclass
class Stat:
    pass


@dataclass
class ExprStat(Stat):
    expr: Expr
    span: Span = _span()


@dataclass
class InitStat(Stat):
    target: Expr
    args: list
    span: Span = _span()
    target_info: Any = _note()


@dataclass
class Empty(Stat):
    span: Span = _span()


@dataclass
class Return(Stat):
    value: Optional[Expr]
    span: Span = _span()


@dataclass
class If(Stat):
    cond: Expr
    then: list
    orelse: Optional[list]
    span: Span = _span()


@dataclass
class While(Stat):
    cond: Expr
    body: list
    span: Span = _span()


@dataclass
class Repeat(Stat):
    body: list
    cond: Expr
    span: Span = _span()


@dataclass
class Loop(Stat):
    body: list
    span: Span = _span()


@dataclass
class Break(Stat):
    span: Span = _span()


@dataclass
class For(Stat):
    var: str
    vartype: Optional[TypeExpr]
    start: Expr
    stop: Expr
    body: list
    span: Span = _span()
    ty: Any = _note()


@dataclass
class CaseBranch:
    labels: list  # of Expr
    body: list
    span: Span = _span()


@dataclass
class Case(Stat):
    expr: Expr
    branches: list
    otherwise: Optional[list]
    span: Span = _span()
    by_class: bool = field(default=False, compare=False, repr=False)


@dataclass
class Try(Stat):
    catch: Expr
    body: list
    span: Span = _span()


@dataclass
class VarDecl(Stat):
    name: str
    type: TypeExpr
    init: Optional[Expr]
    span: Span = _span()


# ---------------------------------------------------------------- declarations

@dataclass
class Param:
    name: str
    type: TypeExpr
    variadic: bool = False
    span: Span = _span()


@dataclass
class VarGroup:
    names: list
    type: TypeExpr
    init: Optional[Expr] = None  # only in class objects
    span: Span = _span()


@dataclass
class AssertClause:
    before: Optional[Expr]
    vars: list  # of VarDecl
    after: Optional[Expr]
    span: Span = _span()


@dataclass
class MethodDecl:
    name: str
    params: list
    exc_type: Optional[TypeExpr] = None
    ret_type: Optional[TypeExpr] = None
    abstract: bool = False
    assert_clause: Optional[AssertClause] = None
    locals: list = field(default_factory=list)  # VarGroup
    body: Optional[list] = None
    native: bool = False
    span: Span = _span()


@dataclass
class ConstDecl:
    items: list  # (name, TypeExpr or None, Expr)
    span: Span = _span()


@dataclass
class EnumDecl:
    items: list  # (name, Expr or None)
    span: Span = _span()


@dataclass
class ClassDecl:
    name: str
    superclass: Optional[str] = None
    abstract: bool = False
    reflective: bool = False
    inits: list = field(default_factory=list)
    public: list = field(default_factory=list)
    subclass: Optional[list] = None
    private: list = field(default_factory=list)  # MethodDecl or VarGroup
    shell_base: Optional[TypeExpr] = None  # set for shell classes
    span: Span = _span()

    @property
    def is_shell(self) -> bool:
        return self.shell_base is not None

    @property
    def vars(self) -> list:
        return [m for m in self.private if isinstance(m, VarGroup)]

    @property
    def private_methods(self) -> list:
        return [m for m in self.private if isinstance(m, MethodDecl)]


@dataclass
class ObjectDecl:
    name: str
    init: Optional[MethodDecl] = None
    public: list = field(default_factory=list)  # MethodDecl, ConstDecl, EnumDecl
    private: list = field(default_factory=list)  # plus VarGroup
    span: Span = _span()


Decl = Union[ClassDecl, ObjectDecl]


@dataclass
class Program:
    decls: list
    span: Span = _span()
