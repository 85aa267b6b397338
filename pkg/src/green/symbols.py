"""Class and method symbols shared by the checker, interpreter and reflection."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from . import nodes as N
from .typesys import DEFAULT_EXC, WRAPPER, Sig


@dataclass(eq=False)
class MethodSym:
    owner: str  # ClassSym name, e.g. "Circle" or "type(Circle)"
    name: str
    params: list  # [(name, type)]
    ret: Optional[str] = None
    exc: str = DEFAULT_EXC
    exc_explicit: bool = False
    variadic: bool = False
    section: str = "public"  # init, public, subclass, private
    abstract: bool = False
    decl: Optional[N.MethodDecl] = None
    native: bool = False
    synth: Optional[str] = None  # new, cast, castObject, basicNew ...
    init: Optional["MethodSym"] = None  # the init a synthesized new calls
    assert_from: Optional["MethodSym"] = None  # method whose assert clause applies
    locals: dict = field(default_factory=dict)  # filled by the checker
    prelude: bool = False

    @property
    def ptypes(self) -> tuple:
        return tuple(t for _, t in self.params)

    @property
    def key(self) -> str:
        ps = list(self.ptypes)
        if self.variadic:
            ps[-1] = "..." + ps[-1]
        return f"{self.name}({','.join(ps)})"

    @property
    def sig(self) -> Sig:
        return Sig(self.name, self.ptypes, self.exc, self.ret, self.variadic)

    @property
    def qualname(self) -> str:
        return f"{display_name(self.owner)}::{self.key}"

    def wrapper_key(self) -> str:
        ps = [WRAPPER.get(t, t) for t in self.ptypes]
        return f"{self.name}({','.join(ps)})"

    def __repr__(self) -> str:
        return f"<MethodSym {self.qualname}>"


@dataclass(eq=False)
class ConstSym:
    name: str
    type: str
    value: Any
    enum: bool = False
    public: bool = True


@dataclass(eq=False)
class FieldSym:
    owner: str
    name: str
    type: str
    expanded: bool = False
    init: Optional[N.Expr] = None  # class-object variables only
    span: Any = None


@dataclass(eq=False)
class ClassSym:
    name: str
    kind: str  # class, object, shell
    decl: Any = None
    superclass: Optional[str] = None
    abstract: bool = False
    final: bool = False
    prelude: bool = False
    reflective: bool = False
    assoc: Optional[str] = None  # class <-> class object link
    shell_base: Optional[str] = None
    methods: list = field(default_factory=list)
    fields: list = field(default_factory=list)
    consts: dict = field(default_factory=dict)
    file: str = "<input>"

    @property
    def display(self) -> str:
        return display_name(self.name)

    def own(self, name: str) -> list:
        return [m for m in self.methods if m.name == name]

    def field(self, name: str) -> Optional[FieldSym]:
        for f in self.fields:
            if f.name == name:
                return f
        return None


def display_name(name: str) -> str:
    if name.startswith("type(") and name.endswith(")"):
        return name[5:-1]
    return name


def classobj_name(cls: str) -> str:
    return f"type({cls})"
