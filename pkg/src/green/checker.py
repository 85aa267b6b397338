"""Static semantics: symbol tables, class rules, expression and statement typing.

The checker annotates the AST in place. Every expression gets ``ty``;
names get ``ref``; message sends get a ``Target`` describing how the
interpreter must carry them out. Conversions between basic values and
wrapper objects are made explicit with Box and Unbox nodes.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Optional

from . import nodes as N
from .diagnostics import NO_SPAN, Diagnostic, GreenCompileError
from .exceptions import catch_classes_source, prelude_catch_source
from .lexer import INT_MAX, to_float32
from .parser import parse_source
from .stdlib import assertion_cast_source, basic_objects_source
from .symbols import ClassSym, ConstSym, FieldSym, MethodSym, classobj_name, display_name
from .typesys import (BASIC, DEFAULT_EXC, FINAL_TYPES, NIL, UNWRAPPER, WRAPPER, TypeDesc,
                      TypeTable, array_name, is_array_name, split_array)

ERR = "<error>"
INTEGRAL = ("byte", "integer", "long")
NUMERIC = ("byte", "integer", "long", "real", "double")
META_OPS = ("attachShell", "removeShell", "attachExtension", "removeExtension")


@dataclass
class Target:
    """How a message send or member access is executed."""
    kind: str  # virtual static new field const objfield array meta throw basicnew shellsuper
    method: Optional[MethodSym] = None
    owner: Optional[str] = None
    name: Optional[str] = None
    value: Any = None
    pack: Optional[tuple] = None  # (fixed argument count, element type) for variadic sends


@dataclass
class Ctx:
    cls: ClassSym
    method: Optional[MethodSym]
    locals: dict = field(default_factory=dict)
    expanded: set = field(default_factory=set)
    loop_ok: bool = False
    tries: list = field(default_factory=list)
    assert_phase: Optional[str] = None
    init_calls_super: bool = False

    @property
    def is_init(self) -> bool:
        return self.method is not None and self.method.section == "init"


def _is_shell(sym: Optional[ClassSym]) -> bool:
    return sym is not None and sym.kind == "shell"


class CheckedProgram:
    """The result of a successful check: symbols, types and annotated declarations."""

    def __init__(self, checker: "Checker"):
        self.classes: dict[str, ClassSym] = checker.classes
        self.types: TypeTable = checker.types
        self.diagnostics: list[Diagnostic] = checker.diags
        self.checker = checker
        self.manifest = checker.manifest

    @property
    def warnings(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if not d.is_error]

    def ancestors(self, name: str) -> list[ClassSym]:
        return self.checker.chain(name)

    def is_subclass(self, a: str, b: str) -> bool:
        return any(c.name == b for c in self.checker.chain(a))

    def class_sym(self, name: str) -> ClassSym:
        return self.checker.class_sym(name)

    def find_entry(self, name: str) -> MethodSym:
        return self.checker.find_entry(name)


class Checker:
    def __init__(self, base: Optional["Checker"] = None, manifest=None):
        self.diags: list[Diagnostic] = []
        self.manifest = manifest
        self.file = "<input>"
        if base is None:
            self.classes: dict[str, ClassSym] = {}
            self.types = TypeTable(self._resolve_desc)
            self.unchecked: set[str] = set()
        else:
            self.classes = dict(base.classes)
            self.types = TypeTable(self._resolve_desc)
            self.types.descs.update(base.types.descs)
            self.types._eq_cache.update(base.types._eq_cache)
            self.types._sub_cache.update(base.types._sub_cache)
            self.unchecked = set(base.unchecked)
        self.new_syms: list[ClassSym] = []
        self._lookup_cache: dict = {}

    # ------------------------------------------------------------ diagnostics

    def error(self, span, code: str, msg: str) -> None:
        self.diags.append(Diagnostic("error", span or NO_SPAN, code, msg, "type", self.file))

    def warn(self, span, code: str, msg: str) -> None:
        self.diags.append(Diagnostic("warning", span or NO_SPAN, code, msg, "type", self.file))

    @property
    def has_errors(self) -> bool:
        return any(d.is_error for d in self.diags)

    # ------------------------------------------------------------ declarations

    def declare_all(self, decls: list, file: str, prelude: bool) -> None:
        for d in decls:
            self.file = file
            if isinstance(d, N.ClassDecl):
                self.declare_class(d, file, prelude)
            else:
                self.declare_object(d, file, prelude)

    def declare_class(self, d: N.ClassDecl, file: str, prelude: bool) -> None:
        if d.name in self.classes:
            self.error(d.span, "T002", f"class {d.name} is declared twice")
            return
        kind = "shell" if d.is_shell else "class"
        sup = d.superclass
        if sup is None and kind == "class":
            sup = None if d.name == "Any" else ("Any" if d.name in ("AnyClass", "AnyClassObject") else "AnyClass")
        sym = ClassSym(d.name, kind, d, sup, d.abstract, prelude and d.name in FINAL_TYPES, prelude,
                       d.reflective, file=file)
        self.classes[d.name] = sym
        self.new_syms.append(sym)
        if kind == "class":
            oname = classobj_name(d.name)
            osym = self.classes.get(oname)
            if osym is None:
                osym = ClassSym(oname, "object", None, "AnyClassObject", prelude=prelude, file=file)
                self.classes[oname] = osym
                self.new_syms.append(osym)
            osym.assoc = d.name
            sym.assoc = oname

    def declare_object(self, d: N.ObjectDecl, file: str, prelude: bool) -> None:
        oname = classobj_name(d.name)
        osym = self.classes.get(oname)
        if osym is not None and osym.decl is not None:
            self.error(d.span, "T002", f"object {d.name} is declared twice")
            return
        if osym is None:
            osym = ClassSym(oname, "object", d, "AnyClassObject", prelude=prelude, file=file)
            self.classes[oname] = osym
            self.new_syms.append(osym)
            if d.name in self.classes:
                osym.assoc = d.name
                self.classes[d.name].assoc = oname
        else:
            osym.decl = d
            osym.file = file

    # ------------------------------------------------------------ hierarchy

    def class_sym(self, name: str) -> Optional[ClassSym]:
        sym = self.classes.get(name)
        if sym is None:
            if is_array_name(name):
                return self._array_sym(name)
            if name.startswith("type(array("):
                return self._array_obj_sym(name)
        return sym

    def chain(self, name: str) -> list[ClassSym]:
        out = []
        seen = set()
        sym = self.class_sym(name)
        while sym is not None and sym.name not in seen:
            out.append(sym)
            seen.add(sym.name)
            sym = self.classes.get(sym.superclass) if sym.superclass else None
        return out

    def is_subclass(self, a: str, b: str) -> bool:
        return any(c.name == b for c in self.chain(a))

    def check_hierarchy(self) -> None:
        for sym in self.new_syms:
            self.file = sym.file
            if sym.superclass is None or sym.kind == "object":
                continue
            sup = self.classes.get(sym.superclass)
            span = sym.decl.span if sym.decl else NO_SPAN
            if sup is None or sup.kind == "object":
                self.error(span, "T003", f"unknown superclass {sym.superclass} of {sym.name}")
                sym.superclass = "AnyClass" if sym.kind == "class" else None
                continue
            if sym.kind == "shell" and sup.kind != "shell":
                self.error(span, "T003", f"shell class {sym.name} may only inherit from a shell class")
                sym.superclass = None
                continue
            if sym.kind == "class" and sup.kind == "shell":
                self.error(span, "T003", f"class {sym.name} cannot inherit from shell class {sup.name}")
                sym.superclass = "AnyClass"
                continue
            if sup.final:
                self.error(span, "T004", f"class {sup.name} cannot be subclassed")
            # cycle detection
            seen = {sym.name}
            cur = sup
            while cur is not None:
                if cur.name in seen:
                    self.error(span, "T003", f"inheritance cycle through {sym.name}")
                    sym.superclass = "AnyClass" if sym.kind == "class" else None
                    break
                seen.add(cur.name)
                cur = self.classes.get(cur.superclass) if cur.superclass else None

    # ------------------------------------------------------------ types

    def resolve_type(self, t: Optional[N.TypeExpr]) -> Optional[str]:
        if t is None:
            return None
        if t.kind == "basic":
            return t.name
        if t.kind == "array":
            elem = self.resolve_type(t.elem)
            if elem == ERR:
                return ERR
            return array_name(elem, len(t.dims))
        if t.kind == "classobj":
            name = classobj_name(t.name)
            if name not in self.classes:
                self.error(t.span, "T001", f"unknown class object {t.name}")
                return ERR
            return name
        if t.name == NIL:
            return NIL
        sym = self.classes.get(t.name)
        if sym is None or sym.kind != "class":
            if sym is not None and sym.kind == "shell":
                self.error(t.span, "T001", f"shell class {t.name} cannot be used as a type")
            elif classobj_name(t.name) in self.classes:
                self.error(t.span, "T001", f"{t.name} is a class object; use type({t.name})")
            else:
                self.error(t.span, "T001", f"unknown type {t.name}")
            return ERR
        return t.name

    def _resolve_desc(self, name: str) -> Optional[TypeDesc]:
        if name == ERR:
            return TypeDesc(ERR, "class")
        sym = self.class_sym(name)
        if sym is None or sym.kind == "shell":
            return None
        sigs = tuple(m.sig for m in self.public_methods(name))
        kind = "classobj" if sym.kind == "object" else "class"
        return TypeDesc(name, kind, sigs, final=sym.final)

    def public_methods(self, name: str) -> list[MethodSym]:
        """The methods that make up the type of ``name``: public, non-init, inherited."""
        key = ("public", name)
        hit = self._lookup_cache.get(key)
        if hit is not None:
            return hit
        out, seen = [], set()
        for c in self.chain(name):
            for m in c.methods:
                if m.section == "public" and m.key not in seen:
                    seen.add(m.key)
                    out.append(m)
        self._lookup_cache[key] = out
        return out

    def subtype(self, s: str, t: str) -> bool:
        if s == ERR or t == ERR:
            return True
        try:
            return self.types.subtype(s, t)
        except KeyError:
            return False

    def equal(self, s: str, t: str) -> bool:
        if s == ERR or t == ERR:
            return True
        try:
            return self.types.equal(s, t)
        except KeyError:
            return False

    # ------------------------------------------------------------ synthetic array classes

    def _array_sym(self, name: str) -> ClassSym:
        sym = self.classes.get(name)
        if sym is not None:
            return sym
        elem, dims = split_array(name)
        inner = array_name(elem, dims - 1) if dims > 1 else elem
        sup = "AnyArray" if (elem in BASIC and dims == 1) else "AnyClassArray"
        sym = ClassSym(name, "array", None, sup, prelude=True)
        mk = functools.partial(MethodSym, name, synth="array", prelude=True)
        sym.methods = [
            mk("toString", [], "String"),
            mk("reset", []),
            mk("reset", [("up", "boolean")]),
            mk("more", [], "boolean"),
            mk("next", [], inner),
            mk("fill", [("v", inner)]),
        ]
        self.classes[name] = sym
        return sym

    def _array_obj_sym(self, name: str) -> ClassSym:
        sym = self.classes.get(name)
        if sym is not None:
            return sym
        arr = name[5:-1]
        _, dims = split_array(arr)
        sym = ClassSym(name, "object", None, "AnyClassObject", prelude=True, assoc=arr)
        for k in range(1, dims + 1):
            sym.methods.append(MethodSym(name, "new", [(f"n{i}", "integer") for i in range(k)], arr,
                                         synth="arraynew", prelude=True))
        self.classes[name] = sym
        return sym

    # ------------------------------------------------------------ members

    def resolve_members(self) -> None:
        for sym in self.new_syms:
            self.file = sym.file
            if sym.kind == "object":
                self._object_members(sym)
            else:
                self._class_members(sym)
        for sym in self.new_syms:
            if sym.kind == "object" and sym.assoc and self.classes[sym.assoc].kind == "class":
                self._synth_classobj(sym)

    def _method_sym(self, owner: str, m: N.MethodDecl, section: str, prelude: bool) -> MethodSym:
        params = []
        variadic = False
        names = set()
        for p in m.params:
            ty = self.resolve_type(p.type)
            if p.variadic:
                variadic = True
                if not is_array_name(ty) and ty != ERR:
                    self.error(p.span, "T001", "a variable-length parameter must have an array type")
            if p.name in names:
                self.error(p.span, "T002", f"parameter {p.name} declared twice")
            names.add(p.name)
            params.append((p.name, ty))
        exc = DEFAULT_EXC
        if m.exc_type is not None:
            exc = self.resolve_type(m.exc_type)
        ret = self.resolve_type(m.ret_type)
        return MethodSym(owner, m.name, params, ret, exc, m.exc_type is not None, variadic, section,
                         m.abstract, m, m.native, prelude=prelude)

    def _class_members(self, sym: ClassSym) -> None:
        d: N.ClassDecl = sym.decl
        methods = []
        for m in d.inits:
            if m.name != "init":
                self.error(m.span, "T012", f"only init methods may precede the public section, found {m.name}")
            methods.append(self._method_sym(sym.name, m, "init", sym.prelude))
        for m in d.public:
            sec = "init" if m.name == "init" else "public"
            methods.append(self._method_sym(sym.name, m, sec, sym.prelude))
        for m in d.subclass or []:
            if m.name == "init":
                self.error(m.span, "T012", "init methods cannot be in the subclass section")
            methods.append(self._method_sym(sym.name, m, "subclass", sym.prelude))
        for m in d.private_methods:
            if m.name == "init":
                self.error(m.span, "T012", "init methods cannot be in the private section")
            methods.append(self._method_sym(sym.name, m, "private", sym.prelude))
        sym.methods = methods
        for g in d.vars:
            ty = self.resolve_type(g.type)
            for n in g.names:
                if sym.field(n) is not None:
                    self.error(g.span, "T002", f"instance variable {n} declared twice")
                    continue
                sym.fields.append(FieldSym(sym.name, n, ty, g.type.expanded, None, g.span))
        if sym.kind == "shell":
            sym.shell_base = self.resolve_type(d.shell_base)

    def _object_members(self, sym: ClassSym) -> None:
        d: Optional[N.ObjectDecl] = sym.decl
        if d is None:
            return
        methods = []
        if d.init is not None:
            if d.init.params:
                self.error(d.init.span, "T012", "the init method of a class object takes no parameters")
            methods.append(self._method_sym(sym.name, d.init, "objinit", sym.prelude))
        for section, members in (("public", d.public), ("private", d.private)):
            for m in members:
                if isinstance(m, N.MethodDecl):
                    if m.name == "init":
                        self.error(m.span, "T012", "a class object has at most one init, before public")
                    methods.append(self._method_sym(sym.name, m, section, sym.prelude))
                elif isinstance(m, N.VarGroup):
                    ty = self.resolve_type(m.type)
                    for n in m.names:
                        if sym.field(n) is not None or n in sym.consts:
                            self.error(m.span, "T002", f"{n} declared twice")
                            continue
                        sym.fields.append(FieldSym(sym.name, n, ty, m.type.expanded, m.init, m.span))
                elif isinstance(m, N.ConstDecl):
                    for name, ty, expr in m.items:
                        if name in sym.consts or sym.field(name):
                            self.error(m.span, "T002", f"constant {name} declared twice")
                            continue
                        sym.consts[name] = ConstSym(name, self.resolve_type(ty) if ty else None, expr,
                                                    public=section == "public")
                elif isinstance(m, N.EnumDecl):
                    self._enum(sym, m, section == "public")
        sym.methods = methods

    def _enum(self, sym: ClassSym, m: N.EnumDecl, public: bool) -> None:
        nxt = 0
        for name, expr in m.items:
            if expr is not None:
                v = self.const_eval(expr, sym, set())
                if not isinstance(v, int) or isinstance(v, bool):
                    self.error(m.span, "T040", f"enum value of {name} must be an integer constant")
                    v = nxt
                nxt = v
            if name in sym.consts:
                self.error(m.span, "T002", f"enum constant {name} declared twice")
            sym.consts[name] = ConstSym(name, "integer", nxt, enum=True, public=public)
            nxt += 1

    def _synth_classobj(self, osym: ClassSym) -> None:
        cls = self.classes[osym.assoc]
        declared = {m.key for m in osym.methods}
        synth = []
        if not cls.abstract:
            for init in [m for m in cls.methods if m.section == "init"]:
                new = MethodSym(osym.name, "new", list(init.params), cls.name, init.exc, init.exc_explicit,
                                init.variadic, "public", synth="new", init=init, prelude=cls.prelude)
                if new.key not in declared:
                    synth.append(new)
        if cls.kind == "class":
            for name, ret, kind in (("cast", cls.name, "cast"), ("castObject", osym.name, "castObject")):
                m = MethodSym(osym.name, name, [("any", "Any")], ret, "CatchTypeErrorException", True,
                              synth=kind, prelude=True)
                if m.key not in declared:
                    synth.append(m)
        osym.methods = synth + osym.methods

    # ------------------------------------------------------------ constants

    def const_eval(self, e: N.Expr, scope: ClassSym, busy: set):
        if isinstance(e, N.Literal):
            return e.value
        if isinstance(e, N.Unary) and e.op in ("-", "+", "~", "not"):
            v = self.const_eval(e.operand, scope, busy)
            if v is None:
                return None
            if e.op == "-":
                return -v
            if e.op == "~":
                return ~v
            if e.op == "not":
                return not v
            return v
        if isinstance(e, N.Binary):
            a = self.const_eval(e.left, scope, busy)
            b = self.const_eval(e.right, scope, busy)
            if a is None or b is None:
                return None
            try:
                return _fold(e.op, a, b)
            except (ZeroDivisionError, TypeError):
                return None
        if isinstance(e, N.Name):
            c = scope.consts.get(e.id) if scope else None
            if c is not None:
                return self.const_value(scope, c, busy)
            return None
        if isinstance(e, N.Send) and e.args is None and isinstance(e.receiver, N.Name):
            osym = self.classes.get(classobj_name(e.receiver.id))
            if osym is not None and e.name in osym.consts:
                return self.const_value(osym, osym.consts[e.name], busy)
        return None

    def const_value(self, scope: ClassSym, c: ConstSym, busy: set):
        if c.enum or c.type is not None and not isinstance(c.value, N.Expr):
            return c.value
        if not isinstance(c.value, N.Expr):
            return c.value
        key = (scope.name, c.name)
        if key in busy:
            self.error(c.value.span if hasattr(c.value, "span") else NO_SPAN, "T040",
                       f"constant {c.name} is defined in terms of itself")
            c.value, c.type = 0, "integer"
            return 0
        busy.add(key)
        expr = c.value
        v = self.const_eval(expr, scope, busy)
        busy.discard(key)
        if v is None:
            self.error(expr.span if hasattr(expr, "span") else NO_SPAN, "T040",
                       f"value of constant {c.name} is not a constant expression")
            v = 0
        ty = _const_type(expr, v, scope, self)
        if c.type is not None and c.type != ERR and c.type != ty:
            if not (ty == "integer" and c.type in ("long", "byte") or ty == "real" and c.type == "double"):
                self.error(expr.span, "T021", f"constant {c.name} of type {c.type} initialised with {ty}")
        c.type = c.type or ty
        if c.type == "real":
            v = to_float32(float(v))
        elif c.type == "double":
            v = float(v)
        c.value = v
        return v

    def resolve_consts(self) -> None:
        for sym in self.new_syms:
            self.file = sym.file
            for c in sym.consts.values():
                self.const_value(sym, c, set())

    # ------------------------------------------------------------ class rules

    def class_rules(self) -> None:
        for sym in self.new_syms:
            self.file = sym.file
            if sym.kind == "object":
                self._object_rules(sym)
            else:
                self._class_rules(sym)
        self._expansion_cycles()

    def _collisions(self, sym: ClassSym) -> None:
        seen: dict[str, MethodSym] = {}
        wrapped: dict[str, MethodSym] = {}
        loose: dict[str, MethodSym] = {}
        for m in sym.methods:
            span = m.decl.span if m.decl else NO_SPAN
            if m.key in seen:
                self.error(span, "T009", f"method {m.key} declared twice in {sym.display}")
                continue
            seen[m.key] = m
            wk = m.wrapper_key()
            if wk in wrapped and wrapped[wk].key != m.key:
                self.error(span, "T009", f"methods {wrapped[wk].key} and {m.key} are ambiguous once basic "
                                         "types are replaced by their wrapper classes")
            wrapped.setdefault(wk, m)
            lk = f"{m.name}({','.join(m.ptypes)})"
            if lk in loose and loose[lk].variadic != m.variadic:
                self.error(span, "T009", f"methods {loose[lk].key} and {m.key} differ only in a "
                                         "variable-length parameter")
            loose.setdefault(lk, m)

    def _class_rules(self, sym: ClassSym) -> None:
        d = sym.decl
        self._collisions(sym)
        # redefinition rules against the superclass chain
        ancestors = self.chain(sym.name)[1:]
        for m in sym.methods:
            if m.section in ("init", "private"):
                continue
            span = m.decl.span if m.decl else NO_SPAN
            for a in ancestors:
                prev = [p for p in a.methods if p.name == m.name and p.ptypes == m.ptypes
                        and p.variadic == m.variadic and p.section not in ("init", "private")]
                if not prev:
                    continue
                p = prev[0]
                if p.section != m.section:
                    self.error(span, "T007", f"{m.name} is redefined in section {m.section} but declared "
                                             f"in section {p.section} of {a.display}")
                if p.ret != m.ret or p.exc != m.exc:
                    self.error(span, "T008", f"redefinition of {p.qualname} must keep its signature {p.sig}")
                if m.decl is not None and m.decl.assert_clause is None and not m.abstract:
                    m.assert_from = p.assert_from or (p if p.decl and p.decl.assert_clause else None)
                elif m.abstract and m.decl.assert_clause is None:
                    m.assert_from = p.assert_from
                break
        for m in sym.methods:
            if m.assert_from is None and m.decl is not None and m.decl.assert_clause is not None:
                m.assert_from = m
        # abstract completeness
        if not sym.abstract:
            impl: dict[str, MethodSym] = {}
            for c in self.chain(sym.name):
                for m in c.methods:
                    if m.section in ("init", "private"):
                        continue
                    impl.setdefault(m.key, m)
            for m in impl.values():
                if m.abstract:
                    if sym.kind == "shell":
                        continue
                    self.error(d.span, "T006", f"class {sym.name} must be declared abstract: method "
                                               f"{m.qualname} has no body")
                    break
        for m in sym.methods:
            if m.abstract and not sym.abstract and m.owner == sym.name and sym.kind != "shell":
                self.error(m.decl.span, "T006", f"abstract method {m.name} in a class not declared abstract")
        # constructors
        if sym.kind == "class" and not sym.abstract and not sym.prelude:
            inits = [m for m in sym.methods if m.section == "init"]
            osym = self.classes.get(sym.assoc) if sym.assoc else None
            has_new = osym is not None and any(m.name == "new" and m.synth is None for m in osym.methods)
            if not inits and not has_new:
                self.error(d.span, "T005", f"class {sym.name} has no init method, so no object of it "
                                           "can be created; declare it abstract or add an init")
        if sym.kind == "shell":
            self._shell_rules(sym)

    def _shell_rules(self, sym: ClassSym) -> None:
        base = sym.shell_base
        if base is None or base == ERR:
            return
        if classobj_name(sym.name) in self.classes and self.classes[classobj_name(sym.name)].decl:
            self.error(sym.decl.span, "T011", f"shell class {sym.name} cannot have a class object")
        sigs = self.public_methods(base) if self.class_sym(base) else []
        for m in sym.methods:
            if m.section != "public" or m.name == "interceptAll":
                continue
            if not any(self.types.sig_equal(m.sig, s.sig) for s in sigs):
                self.error(m.decl.span, "T011", f"public method {m.key} of shell class {sym.name} is not "
                                                f"a method of {display_name(base)}")

    def _object_rules(self, sym: ClassSym) -> None:
        self._collisions(sym)
        for m in sym.methods:
            if m.decl is not None and m.decl.assert_clause is not None:
                m.assert_from = m
        if sym.assoc and self.classes[sym.assoc].kind == "shell":
            self.error(sym.decl.span if sym.decl else NO_SPAN, "T011",
                       f"shell class {sym.assoc} cannot have a class object")

    def _expansion_cycles(self) -> None:
        graph: dict[str, set] = {}
        for sym in self.classes.values():
            if sym.kind != "class":
                continue
            for f in sym.fields:
                if f.expanded and f.type != ERR:
                    t = f.type
                    while is_array_name(t):
                        t = split_array(t)[0]
                    if t in self.classes:
                        graph.setdefault(sym.name, set()).add(t)
                        for sub in self.chain(t):
                            pass
        state: dict[str, int] = {}

        def visit(n: str, path: list) -> None:
            state[n] = 1
            for m in graph.get(n, ()):
                if state.get(m) == 1:
                    sym = self.classes[n]
                    self.file = sym.file
                    self.error(sym.decl.span, "T010", "cycle of expanded variables: " +
                               " -> ".join(path + [m]))
                elif state.get(m) is None:
                    visit(m, path + [m])
            state[n] = 2

        for n in list(graph):
            if n not in state:
                visit(n, [n])

    # ------------------------------------------------------------ method lookup

    def visible(self, tname: str, name: str, mode: str, ctx: Optional[Ctx]) -> list[MethodSym]:
        """Candidate methods called ``name`` for a receiver of type ``tname``.

        mode: public, self (sends to self), super, classprivate (X.m() from class X).
        """
        out, seen = [], set()
        if mode == "super":
            chain = self.chain(tname)
            for c in chain:
                for m in c.own(name):
                    if m.section in ("public", "subclass") and m.key not in seen:
                        seen.add(m.key)
                        out.append(m)
            return out
        for c in self.chain(tname):
            for m in c.own(name):
                ok = m.section == "public"
                if mode == "self":
                    ok = ok or m.section == "subclass" or (m.section == "private" and c.name == ctx.cls.name)
                    if c.kind == "object" and m.section == "private":
                        ok = True
                elif mode == "classprivate":
                    ok = ok or m.section == "private"
                if ok and m.key not in seen:
                    seen.add(m.key)
                    out.append(m)
        return out

    # ------------------------------------------------------------ conversions

    def convert(self, e: N.Expr, src: Optional[str], dst: str) -> Optional[N.Expr]:
        """``e`` adapted to be stored where ``dst`` is expected, or None."""
        if src is None:
            return None
        if src == ERR or dst == ERR:
            return e
        if src == dst:
            return e
        sb, db = src in BASIC, dst in BASIC
        if sb and db:
            return _adapt_literal(e, src, dst)
        if sb:
            w = WRAPPER[src]
            if self.subtype(w, dst):
                b = N.Box(e, src, getattr(e, "span", NO_SPAN))
                b.ty = w
                return b
            return None
        if db:
            if UNWRAPPER.get(src) == dst:
                u = N.Unbox(e, dst, getattr(e, "span", NO_SPAN))
                u.ty = dst
                return u
            return None
        return e if self.subtype(src, dst) else None

    def exact(self, src: str, dst: str, e: N.Expr) -> bool:
        if src == ERR or dst == ERR or src == dst:
            return True
        if src in BASIC and dst == WRAPPER[src] or dst in BASIC and src == WRAPPER[dst]:
            return True
        if src in BASIC and dst in BASIC:
            return _adapt_literal(e, src, dst) is not None
        if src in BASIC or dst in BASIC:
            return False
        return self.equal(src, dst)

    # ------------------------------------------------------------ overloads

    def resolve_call(self, cands: list[MethodSym], args: list, atypes: list, span, what: str):
        """Pick one method for the argument list. Returns (method, converted args, pack)."""
        n = len(args)

        def arity_ok(m: MethodSym) -> bool:
            k = len(m.params)
            return n == k or (m.variadic and n >= k - 1)

        cands = [m for m in cands if arity_ok(m)]
        if not cands:
            return None

        def fit(m: MethodSym, strict: bool):
            k = len(m.params)
            conv = []
            pack = None
            fixed = m.params[:-1] if m.variadic else m.params
            for a, t, (_, p) in zip(args, atypes, fixed):
                c = self.exact(t, p, a) and self.convert(a, t, p) if strict else self.convert(a, t, p)
                if c is None or c is False:
                    return None
                conv.append(c)
            if m.variadic:
                arr = m.params[-1][1]
                rest = list(zip(args[k - 1:], atypes[k - 1:]))
                if len(rest) == 1 and rest[0][1] != ERR and rest[0][1] is not None and \
                        is_array_name(rest[0][1]) and self.subtype(rest[0][1], arr):
                    conv.append(rest[0][0])
                    return conv, None
                elem, dims = split_array(arr) if arr != ERR else (ERR, 1)
                inner = array_name(elem, dims - 1) if dims > 1 else elem
                for a, t in rest:
                    c = self.exact(t, inner, a) and self.convert(a, t, inner) if strict else \
                        self.convert(a, t, inner)
                    if c is None or c is False:
                        return None
                    conv.append(c)
                pack = (k - 1, arr)
            return conv, pack

        if len(cands) == 1:
            r = fit(cands[0], False)
            if r is None:
                m = cands[0]
                self.error(span, "T025", f"arguments ({', '.join(_tn(t) for t in atypes)}) do not match "
                                         f"{m.qualname}")
                return cands[0], args, None
            return cands[0], r[0], r[1]
        exact = [(m, fit(m, True)) for m in cands]
        exact = [(m, r) for m, r in exact if r is not None]
        if len(exact) > 1:
            fixed = [(m, r) for m, r in exact if not m.variadic]
            if len(fixed) == 1:
                exact = fixed
        if len(exact) > 1:
            # an unadapted literal type beats a literal adapted to byte, long or double
            plain = [(m, r) for m, r in exact if all(t == p for t, (_, p) in zip(atypes, m.params))]
            if len(plain) == 1:
                exact = plain
        if len(exact) == 1:
            m, r = exact[0]
            return m, r[0], r[1]
        if len(exact) > 1:
            self.error(span, "T024", f"ambiguous call of {what}: " +
                       ", ".join(m.qualname for m, _ in exact))
            return exact[0][0], args, None
        compat = [m for m in cands if fit(m, False) is not None]
        if len(compat) == 1:
            self.error(span, "T023", f"no method {what} whose parameter types equal the argument types "
                                     f"({', '.join(_tn(t) for t in atypes)}); insert a cast")
            return compat[0], args, None
        if len(compat) > 1:
            self.error(span, "T024", f"ambiguous call of {what}: " + ", ".join(m.qualname for m in compat))
            return compat[0], args, None
        self.error(span, "T025", f"no method {what} accepts arguments ({', '.join(_tn(t) for t in atypes)})")
        return cands[0], args, None

    # ------------------------------------------------------------ exceptions

    def throw_params(self, tname: str) -> list[str]:
        """Parameter types of the throw(exc) handlers of a catch type, in search order."""
        if tname == ERR:
            return []
        out = []
        sym = self.class_sym(tname)
        if sym is None:
            return out
        for c in self.chain(tname):
            for m in c.methods:
                if m.name == "throw" and len(m.params) == 1 and m.section == "public":
                    out.append(m.params[0][1])
        return out

    def is_unchecked(self, tname: str) -> bool:
        return self.is_subclass(tname, "UncheckedException")

    def catch_union(self, ctx: Ctx) -> list[str]:
        out = [ctx.method.exc] if ctx.method is not None else [DEFAULT_EXC]
        out.extend(ctx.tries)
        return out

    def covered(self, exc: str, ctx: Ctx) -> bool:
        unchecked = self.is_unchecked(exc)
        for t in self.catch_union(ctx):
            for p in self.throw_params(t):
                if not unchecked and self.is_unchecked(p):
                    continue
                if self.subtype(exc, p):
                    return True
        return False

    def check_callee_exceptions(self, m: MethodSym, ctx: Ctx, span) -> None:
        if not m.exc_explicit or m.exc == ERR:
            return
        for p in self.throw_params(m.exc):
            if self.is_unchecked(p):
                continue
            if not self.covered(p, ctx):
                self.error(span, "T033", f"{m.qualname} may throw {p}, which is not handled by the "
                                         "exception parameter or an enclosing try")
                return

    # ------------------------------------------------------------ bodies

    def check_bodies(self) -> None:
        for sym in self.new_syms:
            self.file = sym.file
            for m in sym.methods:
                if m.decl is not None and (not m.abstract or m.decl.assert_clause is not None):
                    self.check_method(sym, m)
            if sym.kind == "object":
                ctx = Ctx(sym, None)
                for f in sym.fields:
                    if f.init is not None:
                        f.init = self.value_to(f.init, f.type, ctx, f"variable {f.name}")

    def check_method(self, sym: ClassSym, m: MethodSym) -> None:
        ctx = Ctx(sym, m)
        for name, ty in m.params:
            ctx.locals[name] = ty
        d = m.decl
        for g in d.locals:
            ty = self.resolve_type(g.type)
            for n in g.names:
                if n in ctx.locals:
                    self.error(g.span, "T002", f"local variable {n} declared twice")
                ctx.locals[n] = ty
                if g.type.expanded:
                    ctx.expanded.add(n)
        if d.assert_clause is not None:
            self.check_assert(d.assert_clause, ctx)
        if d.body is not None:
            self.stats(d.body, ctx)
        m.locals = dict(ctx.locals)
        if m.section == "init" and sym.kind == "class" and not sym.prelude and not ctx.init_calls_super:
            sup = self.classes.get(sym.superclass) if sym.superclass else None
            if sup is not None and not sup.prelude and any(x.section == "init" for x in sup.methods):
                self.warn(d.span, "W003", f"init of {sym.name} does not call an init of superclass {sup.name}")

    def check_assert(self, a: N.AssertClause, ctx: Ctx) -> None:
        ctx.assert_phase = "before"
        if a.before is not None:
            a.before = self.cond(a.before, ctx)
        for v in a.vars:
            if v.init is None:
                self.error(v.span, "T021", f"assert variable {v.name} must be initialised")
            self.stat(v, ctx)
        ctx.assert_phase = "after"
        if a.after is not None:
            a.after = self.cond(a.after, ctx)
        ctx.assert_phase = None

    def stats(self, stats: list, ctx: Ctx) -> None:
        for s in stats:
            self.stat(s, ctx)

    def stat(self, s: N.Stat, ctx: Ctx) -> None:
        meth = getattr(self, "s_" + type(s).__name__)
        meth(s, ctx)

    def s_Empty(self, s, ctx):
        pass

    def s_ExprStat(self, s: N.ExprStat, ctx: Ctx) -> None:
        e = s.expr
        if isinstance(e, N.Unary) and e.op in ("++", "--"):
            self.incdec(e, ctx)
            return
        t = self.expr(e, ctx, stat=True)
        if isinstance(e, N.Send) and t not in (None, ERR) and isinstance(e.target, Target) and \
                e.target.kind in ("virtual", "static") and not e.target.method.prelude:
            self.warn(s.span, "W001", f"value returned by {e.name} is ignored")

    def s_InitStat(self, s: N.InitStat, ctx: Ctx) -> None:
        t = self.expr(s.target, ctx)
        if t in (None, ERR):
            return
        if not self.is_lvalue(s.target, ctx, allow_expanded=True):
            self.error(s.span, "T027", "#init needs a variable")
        if t in BASIC:
            self.error(s.span, "T031", f"#init cannot create a value of type {t}")
            return
        atypes = [self.expr(a, ctx) for a in s.args]
        if is_array_name(t):
            osym = self._array_obj_sym(classobj_name(t))
            cands = [m for m in osym.methods if m.name == "new"]
            r = self.resolve_call(cands, s.args, atypes, s.span, f"{t}.new")
            if r is None:
                self.error(s.span, "T022", f"arrays of type {t} cannot be created with {len(s.args)} sizes")
                return
            m, s.args, pack = r
            s.target_info = Target("new", m, pack=pack)
            return
        if self._expanded_target(s.target, ctx):
            cands = [m for m in self.classes[t].methods if m.section == "init"] if t in self.classes else []
            r = self.resolve_call(cands, s.args, atypes, s.span, f"{t}::init") if cands else None
            if r is None:
                self.error(s.span, "T022", f"class {t} has no init with {len(s.args)} arguments")
                return
            m, s.args, pack = r
            s.target_info = Target("static", m, pack=pack)
            return
        cands = self.visible(classobj_name(t), "new", "public", ctx) if classobj_name(t) in self.classes else []
        r = self.resolve_call(cands, s.args, atypes, s.span, f"{t}.new") if cands else None
        if r is None:
            self.error(s.span, "T022", f"objects of {t} cannot be created with {len(s.args)} arguments")
            return
        m, s.args, pack = r
        self.check_callee_exceptions(m, ctx, s.span)
        s.target_info = Target("new", m, pack=pack)

    def s_Return(self, s: N.Return, ctx: Ctx) -> None:
        m = ctx.method
        ret = m.ret if m is not None else None
        if s.value is None:
            if ret is not None:
                self.error(s.span, "T030", f"{m.name} must return a value of type {ret}")
            return
        if ret is None:
            self.error(s.span, "T030", "this method does not return a value")
            self.expr(s.value, ctx)
            return
        s.value = self.value_to(s.value, ret, ctx, "return value")

    def s_If(self, s: N.If, ctx: Ctx) -> None:
        s.cond = self.cond(s.cond, ctx)
        self.stats(s.then, ctx)
        if s.orelse is not None:
            self.stats(s.orelse, ctx)

    def _loop_body(self, body: list, ctx: Ctx, loop_ok: bool) -> None:
        saved = ctx.loop_ok
        ctx.loop_ok = loop_ok
        self.stats(body, ctx)
        ctx.loop_ok = saved

    def s_While(self, s: N.While, ctx: Ctx) -> None:
        s.cond = self.cond(s.cond, ctx)
        self._loop_body(s.body, ctx, False)

    def s_Repeat(self, s: N.Repeat, ctx: Ctx) -> None:
        self._loop_body(s.body, ctx, False)
        s.cond = self.cond(s.cond, ctx)

    def s_Loop(self, s: N.Loop, ctx: Ctx) -> None:
        self._loop_body(s.body, ctx, True)

    def s_Break(self, s: N.Break, ctx: Ctx) -> None:
        if not ctx.loop_ok:
            self.error(s.span, "T029", "break must be inside a loop-end statement and not inside a nested "
                                       "for, while or repeat")

    def s_For(self, s: N.For, ctx: Ctx) -> None:
        declared = False
        if s.vartype is not None:
            ty = self.resolve_type(s.vartype)
            if s.var in ctx.locals:
                self.error(s.span, "T002", f"variable {s.var} already declared")
            ctx.locals[s.var] = ty
            declared = True
        ty = ctx.locals.get(s.var)
        if ty is None:
            self.error(s.span, "T036", f"for control variable {s.var} must be a local variable")
            ty = ERR
        elif ty not in ("char", "byte", "integer", "long", ERR):
            self.error(s.span, "T036", f"for control variable {s.var} must be of type char, byte, integer "
                                       f"or long, not {ty}")
        s.ty = ty
        s.start = self.value_to(s.start, ty, ctx, "for start")
        s.stop = self.value_to(s.stop, ty, ctx, "for limit")
        self._loop_body(s.body, ctx, False)
        if declared:
            ctx.locals[s.var + "$for"] = ty
            del ctx.locals[s.var]

    def s_Case(self, s: N.Case, ctx: Ctx) -> None:
        t = self.expr(s.expr, ctx)
        if t is None:
            self.error(s.span, "T035", "case expression has no value")
            t = ERR
        if t in UNWRAPPER:
            s.expr = self.convert(s.expr, t, UNWRAPPER[t])
            t = UNWRAPPER[t]
        by_class = t not in BASIC and t != ERR
        if t in ("real", "double"):
            self.error(s.expr.span, "T035", "case expression cannot be real or double")
        s.by_class = by_class
        seen = set()
        for b in s.branches:
            new_labels = []
            for lab in b.labels:
                new_labels.append(self.case_label(lab, t, by_class, ctx, seen))
            b.labels = new_labels
            self.stats(b.body, ctx)
        if s.otherwise is not None:
            self.stats(s.otherwise, ctx)
        if by_class and isinstance(s.expr, N.Send) and s.expr.name == "getClassException":
            rt = s.expr.receiver.ty if s.expr.receiver is not None else None
            handled = self.throw_params(rt) if rt else []
            for b in s.branches:
                for lab in b.labels:
                    cname = lab.value if isinstance(lab, N.Literal) else None
                    if cname and handled and not any(h == cname for h in handled):
                        self.warn(b.span, "W004", f"catch class {_tn(rt)} has no throw method for {cname}")

    def case_label(self, lab: N.Expr, t: str, by_class: bool, ctx: Ctx, seen: set) -> N.Expr:
        span = lab.span
        if by_class:
            if isinstance(lab, N.Name) and lab.id in self.classes and self.classes[lab.id].kind == "class":
                out = N.Literal("class", lab.id, span)
                out.ty = classobj_name(lab.id)
                if lab.id in seen:
                    self.error(span, "T035", f"duplicate case label {lab.id}")
                seen.add(lab.id)
                return out
            self.error(span, "T035", "case labels must be class names when the case expression is an object")
            return lab
        v = None
        lt = None
        if isinstance(lab, N.Literal):
            v, lt = lab.value, lab.kind
        elif isinstance(lab, N.Unary):
            v, lt = -lab.operand.value, lab.operand.kind
        elif isinstance(lab, N.Name):
            c = ctx.cls.consts.get(lab.id)
            if c is None and ctx.cls.assoc and ctx.cls.kind == "class":
                c = self.classes[ctx.cls.assoc].consts.get(lab.id)
            if c is not None:
                v, lt = c.value, c.type
        elif isinstance(lab, N.Send) and isinstance(lab.receiver, N.Name):
            osym = self.classes.get(classobj_name(lab.receiver.id))
            c = osym.consts.get(lab.name) if osym else None
            if c is not None:
                v, lt = c.value, c.type
        if lt is None:
            self.error(span, "T035", "case label must be a constant")
            return lab
        if t != ERR and lt != t and not (lt == "integer" and t in ("byte", "long") and isinstance(v, int)):
            self.error(span, "T035", f"case label of type {lt} does not match case expression of type {t}")
        if v in seen:
            self.error(span, "T035", f"duplicate case label {v!r}")
        seen.add(v)
        out = N.Literal(lt, v, span)
        out.ty = lt
        return out

    def s_Try(self, s: N.Try, ctx: Ctx) -> None:
        t = self.expr(s.catch, ctx)
        if t is None or (t != ERR and not self.subtype(t, DEFAULT_EXC)):
            self.error(s.catch.span, "T037", f"the catch object of a try must be a subtype of "
                                             f"CatchUncheckedException, not {_tn(t)}")
            t = ERR
        ctx.tries.append(t)
        self.stats(s.body, ctx)
        ctx.tries.pop()

    def s_VarDecl(self, s: N.VarDecl, ctx: Ctx) -> None:
        ty = self.resolve_type(s.type)
        if s.name in ctx.locals:
            self.error(s.span, "T002", f"variable {s.name} already declared")
        if s.init is not None:
            s.init = self.value_to(s.init, ty, ctx, f"variable {s.name}")
        ctx.locals[s.name] = ty
        if s.type.expanded:
            ctx.expanded.add(s.name)

    # ------------------------------------------------------------ expressions

    def value_to(self, e: N.Expr, dst: str, ctx: Ctx, what: str) -> N.Expr:
        if isinstance(e, N.ArrayInit):
            self.array_init(e, dst, ctx)
            return e
        t = self.expr(e, ctx)
        c = self.convert(e, t, dst)
        if c is None:
            self.error(e.span, "T021", f"cannot use a value of type {_tn(t)} as {what} of type {_tn(dst)}"
                       + ("; use a cast" if t and dst in self.classes and self.subtype(dst, t) else ""))
            return e
        return c

    def array_init(self, e: N.ArrayInit, dst: str, ctx: Ctx) -> None:
        if dst == ERR:
            for x in e.elements:
                if not isinstance(x, N.ArrayInit):
                    self.expr(x, ctx)
            e.ty = ERR
            return
        if not is_array_name(dst):
            self.error(e.span, "T021", f"an array initializer cannot be used as a value of type {_tn(dst)}")
            e.ty = ERR
            return
        elem, dims = split_array(dst)
        inner = array_name(elem, dims - 1) if dims > 1 else elem
        e.elements = [self.value_to(x, inner, ctx, "array element") for x in e.elements]
        e.ty = dst

    def cond(self, e: N.Expr, ctx: Ctx) -> N.Expr:
        return self.value_to(e, "boolean", ctx, "condition")

    def expr(self, e: N.Expr, ctx: Ctx, stat: bool = False) -> Optional[str]:
        meth = getattr(self, "e_" + type(e).__name__)
        t = meth(e, ctx) if not stat else meth(e, ctx, True) if isinstance(e, N.Send) else meth(e, ctx)
        e.ty = t
        return t

    def e_Literal(self, e: N.Literal, ctx: Ctx) -> str:
        return "String" if e.kind == "string" else e.kind

    def e_NilExpr(self, e, ctx) -> str:
        return NIL

    def e_SelfExpr(self, e, ctx: Ctx) -> str:
        if ctx.cls.kind == "shell":
            return ctx.cls.shell_base or ERR
        return ctx.cls.name

    def e_SuperExpr(self, e, ctx: Ctx) -> str:
        self.error(e.span, "T032", "super can only be used as a message receiver")
        return ERR

    def e_ResultExpr(self, e, ctx: Ctx) -> str:
        if ctx.assert_phase != "after" or ctx.method is None or ctx.method.ret is None:
            self.error(e.span, "T038", "result may only be used in the after part of a method that returns "
                                       "a value")
            return ERR
        return ctx.method.ret

    def e_ExceptionExpr(self, e, ctx: Ctx) -> str:
        self.error(e.span, "T034", "exception can only be used as a message receiver")
        return ERR

    def e_TypeValue(self, e: N.TypeValue, ctx: Ctx) -> str:
        t = self.resolve_type(e.type)
        if t == ERR:
            return ERR
        name = classobj_name(t)
        if t in BASIC:
            return name
        self._array_obj_sym(name)
        return name

    def e_Box(self, e: N.Box, ctx):
        return WRAPPER[e.basic]

    def e_Unbox(self, e: N.Unbox, ctx):
        return e.basic

    def e_ArrayInit(self, e: N.ArrayInit, ctx: Ctx) -> str:
        self.error(e.span, "T021", "an array initializer needs a declared array type")
        return ERR

    def e_Name(self, e: N.Name, ctx: Ctx) -> str:
        n = e.id
        if n in ctx.locals:
            e.ref = ("local", n)
            return ctx.locals[n]
        if n + "$for" in ctx.locals and n not in ctx.locals:
            pass
        f = ctx.cls.field(n)
        if f is not None:
            if ctx.assert_phase is not None and False:
                pass
            e.ref = ("field", f.owner, n)
            return f.type
        for scope in self._const_scopes(ctx):
            c = scope.consts.get(n)
            if c is not None:
                e.ref = ("const", c.value)
                return c.type
        osym = self.classes.get(classobj_name(n))
        if osym is not None:
            e.ref = ("classobj", osym.name)
            return osym.name
        if n in self.classes and self.classes[n].kind == "shell":
            self.error(e.span, "T020", f"shell class {n} has no class object")
            return ERR
        self.error(e.span, "T020", f"unknown identifier {n}")
        return ERR

    def _const_scopes(self, ctx: Ctx) -> list:
        out = []
        if ctx.cls.kind == "object":
            out.append(ctx.cls)
        elif ctx.cls.assoc and ctx.cls.assoc in self.classes:
            out.append(self.classes[ctx.cls.assoc])
        return out

    def is_lvalue(self, e: N.Expr, ctx: Ctx, allow_expanded: bool = False) -> bool:
        if isinstance(e, N.Name):
            if e.ref is None or e.ref[0] not in ("local", "field"):
                return False
            return allow_expanded or not self._expanded_target(e, ctx)
        if isinstance(e, N.Index):
            return True
        if isinstance(e, N.Send) and isinstance(e.target, Target) and e.target.kind in ("field", "objfield"):
            return allow_expanded or not self._expanded_target(e, ctx)
        return False

    def _expanded_target(self, e: N.Expr, ctx: Ctx) -> bool:
        if isinstance(e, N.Name) and e.ref is not None:
            if e.ref[0] == "local":
                return e.id in ctx.expanded
            if e.ref[0] == "field":
                f = self.classes[e.ref[1]].field(e.id)
                return f is not None and f.expanded
        if isinstance(e, N.Send) and isinstance(e.target, Target) and e.target.kind in ("field", "objfield"):
            f = self.classes[e.target.owner].field(e.target.name)
            return f is not None and f.expanded
        return False

    def e_Assign(self, e: N.Assign, ctx: Ctx) -> Optional[str]:
        t = self.expr(e.target, ctx)
        if isinstance(e.target, N.Name) and e.target.ref and e.target.ref[0] == "const":
            self.error(e.span, "T027", f"constant {e.target.id} cannot be assigned")
            return t
        if not self.is_lvalue(e.target, ctx):
            if self._expanded_target(e.target, ctx):
                self.error(e.span, "T027", "an expanded variable cannot be assigned")
            else:
                self.error(e.span, "T027", "the left-hand side of an assignment must be a variable")
            if not isinstance(e.value, N.ArrayInit):
                self.expr(e.value, ctx)
            return t
        if isinstance(e.target, N.Name) and e.target.ref[0] == "local" and ctx.method is not None and \
                any(p == e.target.id for p, _ in ctx.method.params) and ctx.assert_phase:
            self.error(e.span, "T027", "assertions cannot assign variables")
        if t is None:
            return ERR
        e.value = self.value_to(e.value, t, ctx, "assigned value")
        return t

    def e_Index(self, e: N.Index, ctx: Ctx) -> str:
        t = self.expr(e.obj, ctx)
        e.index = self.value_to(e.index, "integer", ctx, "array index")
        if t == ERR:
            return ERR
        if t is None or not is_array_name(t):
            self.error(e.span, "T026", f"indexing needs an array, not {_tn(t)}")
            return ERR
        elem, dims = split_array(t)
        return array_name(elem, dims - 1) if dims > 1 else elem

    def incdec(self, e: N.Unary, ctx: Ctx) -> None:
        t = self.expr(e.operand, ctx)
        if not self.is_lvalue(e.operand, ctx):
            self.error(e.span, "T027", f"{e.op} needs a variable")
        base = UNWRAPPER.get(t, t)
        if base not in INTEGRAL + ("char", ERR):
            self.error(e.span, "T026", f"{e.op} needs an integral or char variable, not {_tn(t)}")
        e.ty = None

    def e_Unary(self, e: N.Unary, ctx: Ctx) -> Optional[str]:
        op = e.op
        if op in ("++", "--"):
            self.incdec(e, ctx)
            self.error(e.span, "T026", f"{op} does not return a value")
            return ERR
        t = self.expr(e.operand, ctx)
        if t in UNWRAPPER:
            e.operand = self.convert(e.operand, t, UNWRAPPER[t])
            t = UNWRAPPER[t]
        if t == ERR:
            return ERR
        if op == "not":
            if t != "boolean":
                self.error(e.span, "T026", f"not needs a boolean operand, not {_tn(t)}")
            return "boolean"
        if op == "~":
            if t not in INTEGRAL:
                self.error(e.span, "T026", f"~ needs an integral operand, not {_tn(t)}")
            return t
        if t not in NUMERIC:
            self.error(e.span, "T026", f"unary {op} needs a numeric operand, not {_tn(t)}")
            return ERR
        return t

    def e_Binary(self, e: N.Binary, ctx: Ctx) -> str:
        op = e.op
        lt = self.expr(e.left, ctx)
        rt = self.expr(e.right, ctx)
        if lt is None or rt is None:
            self.error(e.span, "T026", f"operand of {op} has no value")
            return ERR
        if op in ("==", "<>"):
            if lt in BASIC or rt in BASIC:
                e.left, e.right, t = self._unify(e.left, lt, e.right, rt, e.span, op, allow_mixed=True)
                e.opty = t
                return "boolean"
            if lt == NIL or rt == NIL or lt == ERR or rt == ERR:
                e.opty = "ref"
                return "boolean"
            e.opty = "ref"
            return "boolean"
        if lt in UNWRAPPER:
            e.left = self.convert(e.left, lt, UNWRAPPER[lt])
            lt = UNWRAPPER[lt]
        if rt in UNWRAPPER:
            e.right = self.convert(e.right, rt, UNWRAPPER[rt])
            rt = UNWRAPPER[rt]
        if lt == ERR or rt == ERR:
            return "boolean" if op in ("<", "<=", ">", ">=", "and", "or", "xor") else ERR
        if op in ("and", "or", "xor"):
            if lt != "boolean" or rt != "boolean":
                self.error(e.span, "T026", f"{op} needs boolean operands, not {lt} and {rt}")
            e.opty = "boolean"
            return "boolean"
        if op in ("<", "<=", ">", ">="):
            if lt == "String" and rt == "String":
                e.opty = "String"
                return "boolean"
            ok = (lt in NUMERIC and rt in NUMERIC) or (lt == rt == "char")
            if not ok:
                self.error(e.span, "T026", f"{op} cannot compare {_tn(lt)} and {_tn(rt)}")
            e.opty = lt
            return "boolean"
        if op == "+" and (lt == "String" or rt == "String"):
            if lt != rt:
                self.error(e.span, "T026", f"+ cannot concatenate {_tn(lt)} and {_tn(rt)}; convert with "
                                           "toString")
            e.opty = "String"
            return "String"
        e.left, e.right, t = self._unify(e.left, lt, e.right, rt, e.span, op)
        if t == ERR:
            return ERR
        if op in ("+", "-", "*", "/"):
            if t not in NUMERIC:
                self.error(e.span, "T026", f"{op} needs numeric operands, not {_tn(t)}")
                return ERR
        elif op == "%":
            if t not in INTEGRAL:
                self.error(e.span, "T026", f"% needs integral operands, not {_tn(t)}")
                return ERR
        elif op in ("&", "|", "^"):
            if t not in INTEGRAL and t != "boolean":
                self.error(e.span, "T026", f"{op} needs integral operands, not {_tn(t)}")
                return ERR
        elif op in ("<<", ">>"):
            if t not in INTEGRAL:
                self.error(e.span, "T026", f"{op} needs integral operands, not {_tn(t)}")
                return ERR
        e.opty = t
        return t

    def _unify(self, a, at, b, bt, span, op, allow_mixed=False):
        if at in UNWRAPPER and bt in BASIC:
            a, at = self.convert(a, at, UNWRAPPER[at]), UNWRAPPER[at]
        if bt in UNWRAPPER and at in BASIC:
            b, bt = self.convert(b, bt, UNWRAPPER[bt]), UNWRAPPER[bt]
        if at == ERR or bt == ERR:
            return a, b, ERR
        if at == bt:
            return a, b, at
        if at in BASIC and bt in BASIC:
            if _adapt_literal(b, bt, at) is not None:
                return a, b, at
            if _adapt_literal(a, at, bt) is not None:
                return a, b, bt
            if allow_mixed and at in NUMERIC and bt in NUMERIC:
                return a, b, "mixed"
        self.error(span, "T026", f"{op} cannot combine {_tn(at)} and {_tn(bt)}; no automatic conversion "
                                 "is made")
        return a, b, ERR

    # ------------------------------------------------------------ message sends

    def e_Send(self, e: N.Send, ctx: Ctx, stat: bool = False) -> Optional[str]:
        r = e.receiver
        if isinstance(r, N.ExceptionExpr):
            return self.send_exception(e, ctx)
        if isinstance(r, N.SuperExpr):
            return self.send_super(e, ctx)
        if isinstance(r, N.Name) and r.id == "Meta" and r.id not in ctx.locals and e.name in META_OPS:
            return self.send_meta(e, ctx)
        if e.args is None:
            return self.member_access(e, ctx)
        if e.name == "init":
            return self.send_init(e, ctx)
        if isinstance(r, N.Name) and r.id == "Any" and e.name == "basicNew" and r.id not in ctx.locals \
                and len(e.args) == 1 and isinstance(e.args[0], N.Name) and \
                e.args[0].id in self.classes and self.classes[e.args[0].id].kind == "class":
            return self.send_basicnew(e, ctx)
        atypes = [self.expr(a, ctx) if not isinstance(a, N.ArrayInit) else None for a in e.args]
        if any(isinstance(a, N.ArrayInit) for a in e.args):
            for a in e.args:
                if isinstance(a, N.ArrayInit):
                    self.error(a.span, "T021", "an array initializer cannot be a message argument")
            return ERR
        self_send = r is None or isinstance(r, N.SelfExpr)
        if self_send:
            rt = self.e_SelfExpr(r, ctx) if r is None else self.expr(r, ctx)
            if ctx.cls.kind == "shell":
                cands = self.visible(ctx.cls.name, e.name, "self", ctx)
                keys = {m.key for m in cands}
                cands += [m for m in self.visible(rt, e.name, "public", ctx) if m.key not in keys]
            else:
                cands = self.visible(ctx.cls.name, e.name, "self", ctx)
            if ctx.is_init and ctx.cls.kind == "class" and not ctx.cls.prelude:
                self.warn(e.span, "W002", f"message send to self ({e.name}) inside an init method")
        else:
            rt = self.expr(r, ctx)
            if rt is None:
                self.error(e.span, "T022", "the receiver has no value")
                return ERR
            if rt == ERR:
                return ERR
            if rt in BASIC:
                e.receiver = self.convert(r, rt, WRAPPER[rt])
                rt = WRAPPER[rt]
            if rt == NIL:
                rt = "Any"
            mode = "public"
            if isinstance(r, N.Name) and r.ref and r.ref[0] == "classobj" and \
                    (ctx.cls.name == r.ref[1] or ctx.cls.assoc == r.ref[1]):
                mode = "classprivate"
            if is_array_name(rt):
                self._array_sym(rt)
            if self.class_sym(rt) is None:
                self.error(e.span, "T022", f"type {_tn(rt)} has no methods")
                return ERR
            cands = self.visible(rt, e.name, mode, ctx)
        if not cands:
            self.error(e.span, "T022", f"no method {e.name} in type {_tn(rt)}")
            return ERR
        res = self.resolve_call(cands, e.args, atypes, e.span, f"{display_name(rt)}.{e.name}")
        if res is None:
            self.error(e.span, "T022", f"no method {e.name} of type {_tn(rt)} takes {len(e.args)} arguments")
            return ERR
        m, e.args, pack = res
        self.check_callee_exceptions(m, ctx, e.span)
        if m.section == "init":
            self.error(e.span, "T031", "init methods are called through new or #init")
        kind = "virtual"
        if m.section == "private" and self.classes.get(m.owner) is not None and \
                self.classes[m.owner].kind != "object":
            kind = "static"
        if m.synth == "array":
            kind = "array"
        e.target = Target(kind, m, pack=pack)
        if ctx.assert_phase and m.section == "private" and self.classes[m.owner].kind == "class":
            self.error(e.span, "T038", "assertions may only call public methods")
        return m.ret

    def member_access(self, e: N.Send, ctx: Ctx) -> str:
        r = e.receiver
        if r is None or isinstance(r, N.SelfExpr):
            f = ctx.cls.field(e.name)
            if f is None:
                self.error(e.span, "T028", f"{ctx.cls.display} has no instance variable {e.name}")
                return ERR
            e.target = Target("field", owner=f.owner, name=f.name)
            return f.type
        if isinstance(r, N.Name) and r.id not in ctx.locals and ctx.cls.field(r.id) is None:
            osym = self.classes.get(classobj_name(r.id))
            if osym is not None:
                r.ref = ("classobj", osym.name)
                r.ty = osym.name
                own = ctx.cls.name == osym.name or ctx.cls.assoc == osym.name
                c = osym.consts.get(e.name)
                if c is not None:
                    if not c.public and not own:
                        self.error(e.span, "T028", f"constant {e.name} of {r.id} is private")
                    e.target = Target("const", value=c.value)
                    return c.type
                f = osym.field(e.name)
                if f is not None and own:
                    e.target = Target("objfield", owner=osym.name, name=f.name)
                    return f.type
                self.error(e.span, "T028", f"{r.id} has no accessible constant or variable {e.name}")
                return ERR
        self.expr(r, ctx)
        self.error(e.span, "T028", f"instance variable {e.name} can only be accessed through self")
        return ERR

    def send_init(self, e: N.Send, ctx: Ctx) -> Optional[str]:
        r = e.receiver
        atypes = [self.expr(a, ctx) for a in e.args]
        if r is None or isinstance(r, N.SelfExpr):
            owner = ctx.cls
            kind = "static"
        elif isinstance(r, N.SuperExpr):
            owner = self.classes.get(ctx.cls.superclass) if ctx.cls.superclass else None
            kind = "static"
            ctx.init_calls_super = True
        else:
            t = self.expr(r, ctx)
            if not self._expanded_target(r, ctx):
                self.error(e.span, "T031", "init messages can only be sent to self, super or expanded variables")
                return None
            owner = self.classes.get(t)
            kind = "static"
        if owner is None:
            self.error(e.span, "T031", "no init method to call")
            return None
        cands = [m for m in owner.methods if m.section == "init"]
        if not cands:
            if isinstance(r, N.SuperExpr) and owner.prelude:
                e.target = Target("noop")
                return None
            self.error(e.span, "T022", f"{owner.display} has no init method")
            return None
        res = self.resolve_call(cands, e.args, atypes, e.span, f"{owner.display}::init")
        if res is None:
            self.error(e.span, "T022", f"no init of {owner.display} takes {len(e.args)} arguments")
            return None
        m, e.args, pack = res
        e.target = Target(kind, m, pack=pack)
        return None

    def send_super(self, e: N.Send, ctx: Ctx) -> Optional[str]:
        if e.name == "init":
            return self.send_init(e, ctx)
        if e.args is None:
            self.error(e.span, "T028", "instance variables cannot be accessed through super")
            return ERR
        atypes = [self.expr(a, ctx) for a in e.args]
        sym = ctx.cls
        if sym.kind == "shell":
            sup = self.classes.get(sym.superclass) if sym.superclass else None
            cands = self.visible(sup.name, e.name, "super", ctx) if sup else []
            if cands:
                res = self.resolve_call(cands, e.args, atypes, e.span, f"super.{e.name}")
                m, e.args, pack = res
                e.target = Target("static", m, pack=pack)
                return m.ret
            cands = self.visible(sym.shell_base, e.name, "public", ctx) if sym.shell_base not in (None, ERR) \
                else []
            if not cands:
                self.error(e.span, "T032", f"no method {e.name} below shell {sym.name}")
                return ERR
            res = self.resolve_call(cands, e.args, atypes, e.span, f"super.{e.name}")
            if res is None:
                self.error(e.span, "T032", f"no method {e.name} below shell {sym.name} takes "
                                           f"{len(e.args)} arguments")
                return ERR
            m, e.args, pack = res
            e.target = Target("shellsuper", m, pack=pack)
            return m.ret
        if sym.superclass is None or sym.kind == "object":
            self.error(e.span, "T032", f"{sym.display} has no superclass")
            return ERR
        cands = self.visible(sym.superclass, e.name, "super", ctx)
        if not cands:
            self.error(e.span, "T032", f"no method {e.name} in the superclasses of {sym.name}")
            return ERR
        res = self.resolve_call(cands, e.args, atypes, e.span, f"super.{e.name}")
        if res is None:
            self.error(e.span, "T032", f"no method {e.name} in the superclasses takes {len(e.args)} arguments")
            return ERR
        m, e.args, pack = res
        if m.abstract:
            self.error(e.span, "T032", f"super.{e.name} refers to abstract method {m.qualname}")
        self.check_callee_exceptions(m, ctx, e.span)
        e.target = Target("static", m, pack=pack)
        return m.ret

    def send_exception(self, e: N.Send, ctx: Ctx) -> Optional[str]:
        e.receiver.ty = ERR
        if e.name != "throw" or e.args is None or len(e.args) != 1:
            self.error(e.span, "T034", "the only message accepted by exception is throw(exc)")
            for a in e.args or []:
                self.expr(a, ctx)
            return None
        t = self.expr(e.args[0], ctx)
        if t in (None, ERR):
            e.target = Target("throw")
            return None
        if t in BASIC or not self.subtype(t, "Exception"):
            self.error(e.span, "T034", f"only exception objects can be thrown, not {_tn(t)}")
        elif self.is_unchecked(t) and not (ctx.method is not None and ctx.method.exc_explicit) and \
                not ctx.tries:
            self.error(e.span, "T033", f"throwing unchecked exception {t} explicitly requires declaring it "
                                       "in the exception parameter")
        elif not self.covered(t, ctx):
            self.error(e.span, "T033", f"exception {t} is not handled by the type of exception "
                                       f"({_tn(ctx.method.exc if ctx.method else DEFAULT_EXC)})")
        e.target = Target("throw")
        return None

    def send_basicnew(self, e: N.Send, ctx: Ctx) -> str:
        cname = e.args[0].id
        self.expr(e.args[0], ctx)
        m = self.visible("type(Any)", "basicNew", "public", ctx)[0]
        self.check_callee_exceptions(m, ctx, e.span)
        e.target = Target("basicnew", m, value=cname)
        e.receiver.ref = ("classobj", "type(Any)")
        e.receiver.ty = "type(Any)"
        return cname

    def send_meta(self, e: N.Send, ctx: Ctx) -> Optional[str]:
        e.receiver.ref = ("classobj", "type(Meta)")
        e.receiver.ty = "type(Meta)"
        args = e.args or []
        op = e.name
        want = 2 if op.startswith("attach") else 1
        if len(args) != want:
            self.error(e.span, "T022", f"Meta.{op} takes {want} arguments")
            return None
        if op == "attachShell":
            t = self.expr(args[0], ctx)
            if t in BASIC:
                self.error(args[0].span, "T022", "a shell cannot be attached to a basic value")
            s = args[1]
            if not (isinstance(s, N.Send) and isinstance(s.receiver, N.Name) and s.name == "new" and
                    s.args is not None and self.classes.get(s.receiver.id) is not None and
                    self.classes[s.receiver.id].kind == "shell"):
                self.error(s.span, "T022", "the second argument of Meta.attachShell must be ShellClass.new(...)")
                return None
            shell = self.classes[s.receiver.id]
            atypes = [self.expr(a, ctx) for a in s.args]
            inits = [m for c in self.chain(shell.name) for m in c.methods if m.section == "init"
                     and m.owner == shell.name]
            if inits:
                res = self.resolve_call(inits, s.args, atypes, s.span, f"{shell.name}::init")
                if res is None:
                    self.error(s.span, "T022", f"no init of {shell.name} takes {len(s.args)} arguments")
                    return None
                m, s.args, pack = res
                s.target = Target("static", m, pack=pack)
            elif s.args:
                self.error(s.span, "T022", f"shell class {shell.name} has no init with arguments")
            else:
                s.target = Target("noop")
            s.ty = shell.name
            e.target = Target("meta", name=op, value=shell.name)
            return None
        if op == "removeShell":
            t = self.expr(args[0], ctx)
            if t in BASIC:
                self.error(args[0].span, "T022", "basic values have no shells")
            e.target = Target("meta", name=op)
            return None
        cls_arg = args[0]
        if not (isinstance(cls_arg, N.Name) and cls_arg.id in self.classes and
                self.classes[cls_arg.id].kind == "class"):
            self.error(cls_arg.span, "T022", f"the first argument of Meta.{op} must be a class name")
            return None
        self.expr(cls_arg, ctx)
        if op == "removeExtension":
            e.target = Target("meta", name=op, owner=cls_arg.id)
            return None
        ext = args[1]
        if not (isinstance(ext, N.Name) and ext.id in self.classes and self.classes[ext.id].kind == "shell"):
            self.error(ext.span, "T022", "the second argument of Meta.attachExtension must be a shell class")
            return None
        esym = self.classes[ext.id]
        if any(m.section == "init" and m.params for m in esym.methods):
            self.error(ext.span, "T022", f"extension class {ext.id} must have an init without parameters")
        allowed = self.manifest.extensions.get(ext.id) if self.manifest is not None else None
        if allowed is not None:
            if cls_arg.id not in allowed:
                self.error(e.span, "T011", f"class {cls_arg.id} is not in the allowed set of extension {ext.id}")
        elif esym.shell_base not in (None, ERR) and not self.subtype(cls_arg.id, esym.shell_base):
            self.error(e.span, "T011", f"extension {ext.id} cannot be attached to {cls_arg.id}, which is not "
                                       f"a subtype of {display_name(esym.shell_base)}")
        for m in esym.methods:
            if m.section == "public":
                target = [x for c in self.chain(cls_arg.id) for x in c.methods if x.key == m.key]
                if target and target[0].abstract:
                    self.warn(e.span, "W005", f"extension method {m.key} replaces an abstract method and will "
                                              "never be called")
        e.target = Target("meta", name=op, owner=cls_arg.id, value=ext.id)
        return None

    # ------------------------------------------------------------ entry point

    def find_entry(self, name: str) -> MethodSym:
        osym = self.classes.get(classobj_name(name))
        if osym is None:
            raise GreenCompileError([Diagnostic("error", NO_SPAN, "T039", f"no class object {name}", "type",
                                                "<entry>")])
        runs = [m for m in osym.methods if m.name == "run" and m.section == "public"]
        ok = [m for m in runs if not m.params or (len(m.params) == 1 and m.params[0][1] == "array(String)[]"
                                                 and not m.variadic)]
        if len(runs) != 1 or len(ok) != 1:
            span = osym.decl.span if osym.decl else NO_SPAN
            raise GreenCompileError([Diagnostic("error", span, "T039",
                                                f"class object {name} must define exactly one method run() or "
                                                "run(args : array(String)[])", "type", osym.file)])
        return ok[0]

    # ------------------------------------------------------------ dump

    def dump_types(self, names=None) -> str:
        lines = []
        for name, sym in sorted(self.classes.items()):
            if names is not None and name not in names:
                continue
            if sym.kind in ("shell", "array"):
                continue
            d = self.types.get(name)
            label = f"Type${display_name(name)}" if sym.kind == "object" else name
            lines.append(f"{label} = {{")
            for s in sorted(d.sigs, key=str):
                lines.append(f"  {s}")
            lines.append("}")
        return "\n".join(lines)


# ---------------------------------------------------------------- helpers

def _tn(t: Optional[str]) -> str:
    if t is None:
        return "no value"
    if t.startswith("type(") and t.endswith(")"):
        return f"type({display_name(t)})"
    return t


def _literal_of(e: N.Expr):
    if isinstance(e, N.Literal):
        return e.kind, e.value
    if isinstance(e, N.Unary) and e.op == "-" and isinstance(e.operand, N.Literal):
        k, v = e.operand.kind, e.operand.value
        if k in NUMERIC:
            return k, -v
    return None


def _adapt_literal(e: N.Expr, src: str, dst: str) -> Optional[N.Expr]:
    """Numeric literals take the type they are used at when the value fits."""
    lit = _literal_of(e)
    if lit is None or lit[0] != src:
        return None
    k, v = lit
    if k == "integer":
        if dst == "byte" and 0 <= v <= 255:
            return e
        if dst == "long":
            return e
        if dst in ("real", "double"):
            return None
    if k == "byte" and dst in ("integer", "long"):
        return e
    if k == "real" and dst == "double":
        _widen_real_literal(e)
        return e
    return None


def _widen_real_literal(e: N.Expr) -> None:
    lit = e if isinstance(e, N.Literal) else e.operand
    v = lit.value
    for digits in range(1, 18):
        s = f"{v:.{digits}g}"
        if to_float32(float(s)) == v:
            lit.value = float(s)
            return


def _fold(op: str, a, b):
    if isinstance(a, str) or isinstance(b, str):
        if op == "+":
            return str(a) + str(b)
        raise TypeError
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if isinstance(a, int) and isinstance(b, int):
            q = abs(a) // abs(b)
            return q if (a >= 0) == (b >= 0) else -q
        return a / b
    if op == "%":
        r = abs(a) % abs(b)
        return r if a >= 0 else -r
    if op == "&":
        return a & b
    if op == "|":
        return a | b
    if op == "^":
        return a ^ b
    if op == "<<":
        return a << b
    if op == ">>":
        return a >> b
    if op in ("and", "or", "xor"):
        return {"and": a and b, "or": a or b, "xor": a != b}[op]
    if op in ("==", "<>", "<", "<=", ">", ">="):
        return {"==": a == b, "<>": a != b, "<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[op]
    raise TypeError


def _const_type(expr: N.Expr, v, scope, ck) -> str:
    if isinstance(v, bool):
        return "boolean"
    if isinstance(v, str):
        lit = _literal_of(expr) if isinstance(expr, N.Literal) else None
        if lit and lit[0] == "char":
            return "char"
        return "String" if not (isinstance(expr, N.Literal) and expr.kind == "char") else "char"
    kinds = set()

    def walk(x):
        if isinstance(x, N.Literal):
            kinds.add(x.kind)
        elif isinstance(x, N.Unary):
            walk(x.operand)
        elif isinstance(x, N.Binary):
            walk(x.left)
            walk(x.right)
        elif isinstance(x, N.Name) and scope is not None and x.id in scope.consts:
            kinds.add(scope.consts[x.id].type)
    walk(expr)
    for k in ("double", "real", "long", "integer", "byte", "char"):
        if k in kinds:
            if k == "integer" and isinstance(v, int) and not -2**31 <= v <= INT_MAX:
                return "long"
            return k
    return "integer" if isinstance(v, int) else "double"


# ---------------------------------------------------------------- driver

_BASE: Optional[Checker] = None


def prelude_text() -> str:
    text = resources.files("green").joinpath("prelude.green").read_text(encoding="utf-8")
    return text + "\n" + basic_objects_source() + "\n" + assertion_cast_source()


def _nominal_exceptions(ck: Checker) -> list[tuple[str, list[str]]]:
    """Each exception class with the concrete classes its catch class handles."""
    names = [n for n, s in ck.classes.items() if s.kind == "class" and ck.is_subclass(n, "Exception")
             and n != "Exception"]
    out = []
    for n in names:
        sym = ck.classes[n]
        if not sym.abstract:
            out.append((n, [n]))
        else:
            subs = [m for m in names if m != n and ck.is_subclass(m, n) and not ck.classes[m].abstract]
            out.append((n, subs))
    return out


def base_checker() -> Checker:
    global _BASE
    if _BASE is None:
        ck = Checker()
        prog = parse_source(prelude_text(), "<prelude>", prelude=True)
        ck.declare_all(prog.decls, "<prelude>", True)
        unchecked = [n for n, s in ck.classes.items() if s.kind == "class" and not s.abstract and
                     _sup_chain_has(ck, n, "UncheckedException")]
        extra = prelude_catch_source(unchecked)
        ck.declare_all(parse_source(extra, "<prelude>", prelude=True).decls, "<prelude>", True)
        excs = [(n, t) for n, t in _nominal_exceptions(ck)]
        taken = set(ck.classes)
        gen = catch_classes_source(excs, taken)
        ck.declare_all(parse_source(gen, "<prelude>", prelude=True).decls, "<prelude>", True)
        _finish(ck)
        if ck.has_errors:
            raise GreenCompileError(ck.diags)
        ck.new_syms = []
        _BASE = ck
    return _BASE


def _sup_chain_has(ck: Checker, n: str, target: str) -> bool:
    seen = set()
    while n and n not in seen:
        if n == target:
            return True
        seen.add(n)
        s = ck.classes.get(n)
        n = s.superclass if s else None
    return False


def _finish(ck: Checker) -> None:
    ck.check_hierarchy()
    ck.resolve_members()
    ck.resolve_consts()
    ck.class_rules()
    ck.check_bodies()


def check_program(files: list[tuple[N.Program, str]], manifest=None) -> CheckedProgram:
    """Check parsed files together. Raises GreenCompileError when errors are found."""
    base = base_checker()
    ck = Checker(base, manifest)
    for prog, file in files:
        ck.declare_all(prog.decls, file, False)
    user_excs = [(n, t) for n, t in _nominal_exceptions(ck) if not ck.classes[n].prelude]
    if user_excs:
        taken = set(ck.classes)
        gen = catch_classes_source(user_excs, taken)
        if gen.strip():
            ck.declare_all(parse_source(gen, "<generated>", prelude=True).decls, "<generated>", False)
            for s in ck.new_syms:
                if s.file == "<generated>":
                    s.prelude = False
    _finish(ck)
    if ck.has_errors:
        raise GreenCompileError(ck.diags)
    return CheckedProgram(ck)
