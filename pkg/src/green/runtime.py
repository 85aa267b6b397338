"""Tree-walking interpreter for checked Green programs."""

from __future__ import annotations

import math
import sys
import threading
from typing import Any, Optional

from . import nodes as N
from .checker import CheckedProgram, Target
from .lexer import to_float32
from .symbols import ClassSym, MethodSym, classobj_name
from .typesys import BASIC, UNWRAPPER, WRAPPER, array_name, split_array

ZERO = {"char": "\0", "boolean": False, "byte": 0, "integer": 0, "long": 0, "real": 0.0, "double": 0.0}
MAX_DEPTH = 1800
BASIC_OBJECTS = frozenset(classobj_name(b) for b in BASIC)


class Obj:
    """A heap object: class instance, class object, wrapper, string or mirror."""

    __slots__ = ("cls", "fields", "shells", "native")

    def __init__(self, cls: ClassSym, fields: Optional[dict] = None, native: Any = None):
        self.cls = cls
        self.fields = fields if fields is not None else {}
        self.shells: list = []
        self.native = native

    def __repr__(self) -> str:
        return f"<{self.cls.name} {self.native!r}>" if self.native is not None else f"<{self.cls.name}>"


class ArrObj:
    __slots__ = ("cls", "elem", "dims", "items", "cursor", "up", "shells")

    def __init__(self, cls: ClassSym, items: list):
        self.cls = cls
        self.elem, self.dims = split_array(cls.name)
        self.items = items
        self.cursor = 0
        self.up = True
        self.shells: list = []

    @property
    def inner(self) -> str:
        return array_name(self.elem, self.dims - 1) if self.dims > 1 else self.elem


class ShellInst:
    __slots__ = ("cls", "fields")

    def __init__(self, cls: ClassSym, fields: dict):
        self.cls = cls
        self.fields = fields


class Frame:
    __slots__ = ("method", "self", "fobj", "locals", "layer", "result", "last_invoke")

    def __init__(self, method, self_, fobj, layer=None):
        self.method = method
        self.self = self_
        self.fobj = fobj
        self.locals: dict = {}
        self.layer = layer
        self.result = None
        self.last_invoke = None


class ReturnSignal(Exception):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value


class BreakSignal(Exception):
    pass


class Unwind(Exception):
    """Transfers control to the try statement whose catch object handles an exception."""

    def __init__(self, idx, catch, method, ptype, exc):
        self.idx, self.catch, self.method, self.ptype, self.exc = idx, catch, method, ptype, exc


class ExitProgram(Exception):
    def __init__(self, code: int):
        self.code = code


class InternalFault(Exception):
    """A state the checker should have ruled out."""


class _Poison:
    def __repr__(self):
        return "<undefined>"


POISON = _Poison()
_BREAK = BreakSignal()


def wrap_int(v: int, t: str) -> int:
    if t == "integer":
        return ((v + 0x80000000) & 0xFFFFFFFF) - 0x80000000
    if t == "long":
        return ((v + 0x8000000000000000) & 0xFFFFFFFFFFFFFFFF) - 0x8000000000000000
    if t == "byte":
        return v & 0xFF
    return v


def shortest_real(v: float) -> str:
    """The shortest decimal text that reads back as the same float32."""
    if math.isinf(v) or math.isnan(v):
        return repr(v)
    for digits in range(1, 10):
        s = f"{v:.{digits}g}"
        if to_float32(float(s)) == v:
            return repr(float(s))
    return repr(v)


class Interpreter:
    def __init__(self, prog: CheckedProgram, out=None, err=None, inp=None, assertions: bool = True,
                 reflect=(), strict_for: bool = False):
        from . import reflect as R
        from .stdlib import NATIVES
        self.prog = prog
        self.ck = prog.checker
        self.classes = prog.classes
        self.types = prog.types
        self.out = out or sys.stdout
        self.err = err or sys.stderr
        self.inp = inp or sys.stdin
        self.assertions = assertions
        self.reflect_classes = "classes" in reflect
        self.reflect_calls = "calls" in reflect
        self.strict_for = strict_for
        self.natives = NATIVES
        self.R = R
        self.classobjs: dict[str, Obj] = {}
        self.catches: list = []
        self.callstack: list = []
        self.extensions: dict[str, list] = {}
        self.ext_insts: dict = {}
        self.end_list: list = []
        self.manifest = prog.manifest
        self._lookup: dict = {}
        self._handlers: dict = {}
        self._layout: dict = {}
        self._strings: dict = {}
        self.mirrors: dict = {}
        self.ev = {
            N.Literal: self.ev_literal, N.Name: self.ev_name, N.SelfExpr: self.ev_self,
            N.NilExpr: lambda e, fr: None, N.ResultExpr: lambda e, fr: fr.result,
            N.TypeValue: self.ev_typevalue, N.Unary: self.ev_unary, N.Binary: self.ev_binary,
            N.Assign: self.ev_assign, N.Index: self.ev_index, N.Send: self.ev_send,
            N.ArrayInit: self.ev_arrayinit, N.Box: self.ev_box, N.Unbox: self.ev_unbox,
        }
        self.ex = {
            N.ExprStat: self.s_exprstat, N.InitStat: self.s_initstat, N.Empty: lambda s, fr: None,
            N.Return: self.s_return, N.If: self.s_if, N.While: self.s_while, N.Repeat: self.s_repeat,
            N.Loop: self.s_loop, N.Break: self.s_break, N.For: self.s_for, N.Case: self.s_case,
            N.Try: self.s_try, N.VarDecl: self.s_vardecl,
        }
        self.string_cls = self.classes["String"]

    # ------------------------------------------------------------ objects

    def classobj(self, name: str) -> Obj:
        """The singleton for class object ``name`` (``type(X)``)."""
        o = self.classobjs.get(name)
        if o is None:
            sym = self.ck.class_sym(name)
            if sym is None:
                raise InternalFault(f"no class object {name}")
            o = Obj(sym)
            self.classobjs[name] = o
            for f in sym.fields:
                o.fields[(f.owner, f.name)] = self.zero(f.type, f.expanded)
        return o

    def classobj_of_type(self, t: str) -> Obj:
        return self.classobj(classobj_name(t))

    def zero(self, t: str, expanded: bool = False):
        z = ZERO.get(t)
        if z is not None:
            return z
        if expanded and t in self.classes and self.classes[t].kind == "class":
            return self.alloc(self.classes[t])
        return None

    def layout(self, cls: ClassSym) -> list:
        lay = self._layout.get(cls.name)
        if lay is None:
            lay = []
            for c in reversed(self.ck.chain(cls.name)):
                for f in c.fields:
                    lay.append(((f.owner, f.name), f.type, f.expanded))
            self._layout[cls.name] = lay
        return lay

    def alloc(self, cls: ClassSym) -> Obj:
        fields = {}
        for key, t, exp in self.layout(cls):
            z = ZERO.get(t)
            fields[key] = z if z is not None else (self.zero(t, True) if exp else None)
        return Obj(cls, fields)

    def mkstr(self, s: str) -> Obj:
        return Obj(self.string_cls, None, s)

    def box(self, v, basic: str) -> Obj:
        return Obj(self.classes[WRAPPER[basic]], None, v)

    def box_any(self, v):
        """Box a host value whose Green type is only known from the value."""
        if isinstance(v, (Obj, ArrObj)) or v is None:
            return v
        if isinstance(v, bool):
            return self.box(v, "boolean")
        if isinstance(v, int):
            return self.box(v, "integer")
        if isinstance(v, float):
            return self.box(v, "double")
        if isinstance(v, str):
            return self.box(v, "char")
        raise InternalFault(f"cannot box {v!r}")

    def new_array(self, tname: str, items: list) -> ArrObj:
        return ArrObj(self.ck.class_sym(tname), items)

    def make_array(self, tname: str, sizes: list) -> ArrObj:
        elem, dims = split_array(tname)
        n = sizes[0]
        if n < 0:
            self.raise_exc("IllegalArrayIndexException", n, None)
        if len(sizes) > 1:
            inner = array_name(elem, dims - 1)
            items = [self.make_array(inner, sizes[1:]) for _ in range(n)]
        elif dims > 1:
            items = [None] * n
        else:
            items = [ZERO.get(elem)] * n
        return self.new_array(tname, items)

    def new_object(self, cname: str, args: list) -> Obj:
        """Create an object by running the init of ``cname`` that takes ``len(args)`` arguments."""
        cls = self.classes[cname]
        obj = self.alloc(cls)
        for m in cls.methods:
            if m.section == "init" and len(m.params) == len(args):
                self.invoke(m, obj, args)
                break
        return obj

    def raise_exc(self, cname: str, *args):
        self.throw(self.new_object(cname, list(args)))

    def dyn_type(self, v) -> str:
        return v.cls.name

    def is_instance(self, v, t: str) -> bool:
        if v is None:
            return t not in BASIC
        if t == "Any":
            return True
        return self.types.subtype(v.cls.name, t)

    # ------------------------------------------------------------ text

    def to_text(self, v) -> str:
        """Text printed by Out.write for one argument."""
        if v is None:
            return "nil"
        if isinstance(v, Obj):
            n = v.cls.name
            if n == "String":
                return v.native
            if n == "Real" or n == "Double":
                return shortest_real(v.native) if n == "Real" else repr(v.native)
        s = self.send_name(v, "toString", [])
        return s.native if s is not None else "nil"

    # ------------------------------------------------------------ program

    def run(self, entry: str, args: list[str]) -> int:
        """Run ``entry.run`` and return the exit status."""
        result: list = [1, None]

        def target():
            try:
                result[0] = self._run(entry, args)
            except BaseException as e:  # re-raised on the calling thread
                result[1] = e

        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, 200000))
        prev = threading.stack_size()
        threading.stack_size(512 * 1024 * 1024)
        try:
            t = threading.Thread(target=target)
            t.start()
            t.join()
        finally:
            threading.stack_size(prev)
            sys.setrecursionlimit(old)
        if result[1] is not None:
            raise result[1]
        return result[0]

    def _run(self, entry: str, args: list[str]) -> int:
        try:
            try:
                self.catches.append(self.new_object("HCatchUncheckedException", []))
                self.init_class_objects()
                m = self.prog.find_entry(entry)
                recv = self.classobj(classobj_name(entry))
                cargs = []
                if m.params:
                    cargs = [self.new_array("array(String)[]", [self.mkstr(a) for a in args])]
                self.invoke(m, recv, cargs)
            except Unwind as u:
                del self.catches[u.idx + 1:]
                self.callstack.clear()
                self.handle(u)
            self.run_end_list()
            return 0
        except ExitProgram as e:
            return e.code
        finally:
            self.flush()

    def flush(self) -> None:
        for s in (self.out, self.err):
            try:
                s.flush()
            except (AttributeError, ValueError):
                pass

    def run_end_list(self) -> None:
        funcs, self.end_list = self.end_list, []
        for f in funcs:
            self.send_name(f, "exec", [])

    def init_class_objects(self) -> None:
        objs = [s for s in self.classes.values() if s.kind == "object" and not s.name.startswith("type(array(")]
        for s in objs:
            self.classobj(s.name)
        for s in objs:
            o = self.classobjs[s.name]
            fr = Frame(None, o, o)
            for f in s.fields:
                if f.init is not None:
                    o.fields[(f.owner, f.name)] = self.eval(f.init, fr)
        for s in objs:
            for m in s.methods:
                if m.section == "objinit":
                    self.invoke(m, self.classobjs[s.name], [])

    # ------------------------------------------------------------ calls

    def invoke(self, m: MethodSym, recv, args: list, fobj=None, layer=None):
        if m.native or m.synth:
            if self.assertions and m.assert_from is not None and m.owner not in BASIC_OBJECTS:
                afr = self.assert_before(m, recv, args)
                result = self.call_native(m, recv, args)
                self.assert_after(m, recv, afr, result)
                return result
            return self.call_native(m, recv, args)
        d = m.decl
        fr = Frame(m, recv, recv if fobj is None else fobj, layer)
        loc = fr.locals
        for (n, _), v in zip(m.params, args):
            loc[n] = v
        mloc = m.locals
        for g in d.locals:
            exp = g.type.expanded
            for n in g.names:
                t = mloc.get(n)
                z = ZERO.get(t)
                loc[n] = z if z is not None else (self.zero(t, True) if exp else None)
        cs = self.callstack
        if len(cs) > MAX_DEPTH:
            self.raise_exc("StackOverflowException")
        cs.append((m, recv))
        try:
            afr = None
            if self.assertions and m.assert_from is not None:
                afr = self.assert_before(m, recv, args)
            try:
                self.exec_block(d.body, fr)
                result = None
            except ReturnSignal as r:
                result = r.value
            if afr is not None:
                self.assert_after(m, recv, afr, result)
            return result
        except RecursionError:
            del cs[len(cs):]
            self.raise_exc("StackOverflowException")
        finally:
            cs.pop()

    def call_native(self, m: MethodSym, recv, args: list):
        synth = m.synth
        if synth == "new":
            cls = self.classes[m.init.owner]
            obj = self.alloc(cls)
            self.invoke(m.init, obj, args)
            return obj
        if synth == "cast" or synth == "castObject":
            target = m.ret
            v = args[0]
            if v is not None and not self.is_instance(v, target):
                self.raise_exc("TypeErrorException")
            return v
        if synth == "arraynew":
            return self.make_array(m.ret, args)
        if synth == "array":
            return self.natives[("array", m.name)](self, recv, args)
        fn = self.natives.get((m.owner, m.key))
        if fn is None:
            fn = self.natives.get(("*", m.name))
        if fn is None:
            raise InternalFault(f"no native implementation of {m.qualname}")
        return fn(self, recv, args)

    def lookup(self, cls: ClassSym, m: MethodSym) -> MethodSym:
        key = (cls.name, id(m))
        hit = self._lookup.get(key)
        if hit is not None:
            return hit
        found = None
        if m.section in ("init", "objinit"):
            found = m
        else:
            chain = self.ck.chain(cls.name)
            mk = m.key
            for c in chain:
                for x in c.methods:
                    if x.name == m.name and x.key == mk and x.section in ("public", "subclass") and not x.abstract:
                        found = x
                        break
                if found:
                    break
            if found is None:
                n = len(m.params)
                for c in chain:
                    for x in c.methods:
                        if x.name == m.name and len(x.params) == n and x.variadic == m.variadic and \
                                x.section in ("public", "subclass") and not x.abstract and \
                                all(self.types.equal(a, b) for a, b in zip(x.ptypes, m.ptypes)):
                            found = x
                            break
                    if found:
                        break
            if found is None and m.section == "private" and not m.abstract:
                found = m
        if found is None:
            raise InternalFault(f"method {m.key} not found in {cls.name}")
        self._lookup[key] = found
        return found

    def find_method(self, cls: ClassSym, name: str, nargs: int) -> Optional[MethodSym]:
        for c in self.ck.chain(cls.name):
            for x in c.methods:
                if x.name == name and len(x.params) == nargs and x.section == "public" and not x.abstract:
                    return x
        return None

    def send_name(self, recv, name: str, args: list):
        """Send by name and arity; used by natives."""
        if recv is None:
            self.raise_exc("MessageSendToNilException")
        m = self.find_method(recv.cls, name, len(args))
        if m is None:
            raise InternalFault(f"no method {name} in {recv.cls.name}")
        return self.send(recv, m, args)

    def send(self, recv, m: MethodSym, args: list):
        if recv is None:
            self.raise_exc("MessageSendToNilException")
        if recv.shells or (self.extensions and recv.cls.name in self.extensions):
            return self.dispatch_layers(recv, m, args, 0)
        return self.invoke(self.lookup(recv.cls, m), recv, args)

    # ------------------------------------------------------------ shells

    def layers(self, recv) -> list:
        out = list(reversed(recv.shells))
        exts = self.extensions.get(recv.cls.name)
        if exts:
            for ext in reversed(exts):
                key = (id(recv), id(ext))
                inst = self.ext_insts.get(key)
                if inst is None:
                    inst = self.new_shell_inst(ext[0], recv, [], ext[1])
                    self.ext_insts[key] = inst
                    ext[2].append(recv)
                out.append(inst)
        return out

    def new_shell_inst(self, cls: ClassSym, target, args: list, init: Optional[MethodSym]) -> ShellInst:
        inst = ShellInst(cls, self.alloc(cls).fields)
        if init is not None:
            self.invoke(init, target, args, fobj=inst)
        return inst

    def shell_method(self, cls: ClassSym, m: MethodSym) -> Optional[MethodSym]:
        key = ("shell", cls.name, id(m))
        if key in self._lookup:
            return self._lookup[key]
        found = None
        for c in self.ck.chain(cls.name):
            for x in c.methods:
                if x.section == "public" and x.name == m.name and len(x.params) == len(m.params) and \
                        x.name != "interceptAll" and \
                        (x.key == m.key or all(self.types.equal(a, b) for a, b in zip(x.ptypes, m.ptypes))):
                    found = x
                    break
            if found:
                break
        self._lookup[key] = found
        return found

    def intercept_method(self, cls: ClassSym) -> Optional[MethodSym]:
        for c in self.ck.chain(cls.name):
            for x in c.methods:
                if x.name == "interceptAll" and x.section == "public":
                    return x
        return None

    def dispatch_layers(self, recv, m: MethodSym, args: list, start: int):
        layers = self.layers(recv)
        for i in range(start, len(layers)):
            inst = layers[i]
            sm = self.shell_method(inst.cls, m)
            if sm is not None:
                return self.invoke(sm, recv, args, fobj=inst, layer=i)
            ia = self.intercept_method(inst.cls)
            if ia is not None and m.section != "init":
                mi = self.R.object_method_info(self, recv, m, i + 1)
                vet = self.new_array("array(Any)[]", [self.box_value(a, t) for a, (_, t) in zip(args, m.params)])
                probe = Frame(ia, recv, inst, i)
                res = self.invoke_intercept(ia, recv, [mi, vet], inst, i, probe)
                if m.ret is None:
                    return None
                if res is None and ia.ret is None:
                    res = mi.native[3]
                return self.unbox_value(res, m.ret)
        return self.invoke(self.lookup(recv.cls, m), recv, args)

    def invoke_intercept(self, ia, recv, args, inst, layer, probe):
        return self.invoke(ia, recv, args, fobj=inst, layer=layer)

    def call_below(self, recv, m: MethodSym, args: list, layer: int):
        """Run ``m`` on ``recv`` starting at shell layer ``layer``."""
        if recv is None:
            self.raise_exc("MessageSendToNilException")
        if layer <= 0:
            return self.send(recv, m, args)
        return self.dispatch_layers(recv, m, args, layer)

    def box_value(self, v, t: str):
        if t in BASIC:
            return self.box(v, t)
        return v

    def unbox_value(self, v, t: str):
        if t in BASIC:
            if v is None:
                return ZERO[t]
            if isinstance(v, Obj) and v.cls.name == WRAPPER[t]:
                return v.native
            self.raise_exc("TypeErrorException")
        return v

    # ------------------------------------------------------------ assertions

    def assert_before(self, m: MethodSym, recv, args):
        src = m.assert_from
        clause = src.decl.assert_clause
        afr = Frame(src, recv, recv)
        for (n, _), v in zip(src.params, args):
            afr.locals[n] = v
        if clause.before is not None and not self.eval(clause.before, afr):
            self.assertion_failed(m, recv, "Before")
        for v in clause.vars:
            self.s_vardecl(v, afr)
        return afr

    def assert_after(self, m: MethodSym, recv, afr: Frame, result) -> None:
        clause = m.assert_from.decl.assert_clause
        if clause.after is None:
            return
        afr.result = result
        if not self.eval(clause.after, afr):
            self.assertion_failed(m, recv, "After")

    def assertion_failed(self, m: MethodSym, recv, phase: str) -> None:
        mi = self.R.object_method_info(self, recv, m, 0)
        fix = self.find_method(recv.cls, f"correctAssertion{phase}", 1) if recv is not None else None
        if fix is not None:
            self.send(recv, fix, [mi])
            return
        self.raise_exc(f"Assertion{phase}Exception", mi)

    # ------------------------------------------------------------ exceptions

    def throw(self, exc) -> None:
        if exc is None:
            self.raise_exc("MessageSendToNilException")
        cs = self.catches
        for idx in range(len(cs) - 1, -1, -1):
            c = cs[idx]
            if c is None:
                continue
            if c.cls is None:
                raise Unwind(idx, c, None, None, exc)
            found = self.find_handler(c, exc)
            if found is not None:
                raise Unwind(idx, c, found[0], found[1], exc)
        self.err.write(f"Exception {exc.cls.name} not caught\n")
        raise ExitProgram(1)

    def find_handler(self, c, exc):
        key = (c.cls.name, exc.cls.name)
        if key in self._handlers:
            return self._handlers[key]
        found = None
        et = exc.cls.name
        for cls in self.ck.chain(c.cls.name):
            for m in cls.methods:
                if m.name == "throw" and len(m.params) == 1 and m.section == "public" and \
                        self.types.subtype(et, m.params[0][1]):
                    found = (m, m.params[0][1])
                    break
            if found:
                break
        self._handlers[key] = found
        return found

    def handle(self, u: Unwind) -> None:
        c = u.catch
        setter = self.find_method(c.cls, "set", 2)
        if setter is not None:
            self.send(c, setter, [u.exc, self.classobj_of_type(u.ptype)])
        self.invoke(u.method, c, [u.exc])

    # ------------------------------------------------------------ statements

    def exec_block(self, stats: list, fr: Frame) -> None:
        ex = self.ex
        for s in stats:
            ex[s.__class__](s, fr)

    def s_exprstat(self, s: N.ExprStat, fr: Frame) -> None:
        e = s.expr
        if e.__class__ is N.Unary and (e.op == "++" or e.op == "--"):
            self.incdec(e, fr)
        else:
            self.ev[e.__class__](e, fr)

    def s_initstat(self, s: N.InitStat, fr: Frame) -> None:
        t: Target = s.target_info
        args = self.eval_args(s.args, t.pack, fr)
        if t.kind == "static":
            obj = self.eval(s.target, fr)
            self.invoke(t.method, obj, args)
            return
        obj = self.send(self.classobj(t.method.owner), t.method, args)
        self.store(s.target, fr, obj)

    def s_return(self, s: N.Return, fr: Frame) -> None:
        raise ReturnSignal(None if s.value is None else self.ev[s.value.__class__](s.value, fr))

    def s_if(self, s: N.If, fr: Frame) -> None:
        if self.ev[s.cond.__class__](s.cond, fr):
            self.exec_block(s.then, fr)
        elif s.orelse is not None:
            self.exec_block(s.orelse, fr)

    def s_while(self, s: N.While, fr: Frame) -> None:
        c = s.cond
        ev = self.ev[c.__class__]
        while ev(c, fr):
            self.exec_block(s.body, fr)

    def s_repeat(self, s: N.Repeat, fr: Frame) -> None:
        c = s.cond
        ev = self.ev[c.__class__]
        while True:
            self.exec_block(s.body, fr)
            if ev(c, fr):
                break

    def s_loop(self, s: N.Loop, fr: Frame) -> None:
        try:
            while True:
                self.exec_block(s.body, fr)
        except BreakSignal:
            pass

    def s_break(self, s, fr) -> None:
        raise _BREAK

    def s_for(self, s: N.For, fr: Frame) -> None:
        a = self.eval(s.start, fr)
        b = self.eval(s.stop, fr)
        loc = fr.locals
        var = s.var
        if s.ty == "char":
            lo, hi = ord(a), ord(b)
            for i in range(lo, hi + 1):
                loc[var] = chr(i)
                self.exec_block(s.body, fr)
        else:
            for i in range(a, b + 1):
                loc[var] = i
                self.exec_block(s.body, fr)
        if self.strict_for:
            loc[var] = POISON

    def s_case(self, s: N.Case, fr: Frame) -> None:
        v = self.eval(s.expr, fr)
        if s.by_class:
            for br in s.branches:
                for lab in br.labels:
                    if v is not None and (v.cls.name == lab.value or v is self.classobjs.get(lab.ty)):
                        self.exec_block(br.body, fr)
                        return
        else:
            for br in s.branches:
                for lab in br.labels:
                    if lab.value == v:
                        self.exec_block(br.body, fr)
                        return
        if s.otherwise is not None:
            self.exec_block(s.otherwise, fr)

    def s_try(self, s: N.Try, fr: Frame) -> None:
        c = self.eval(s.catch, fr)
        cs = self.catches
        depth = len(cs)
        calls = len(self.callstack)
        cs.append(c)
        try:
            self.exec_block(s.body, fr)
        except Unwind as u:
            if u.idx != depth:
                raise
            del cs[depth:]
            del self.callstack[calls:]
            self.handle(u)
        finally:
            del cs[depth:]

    def s_vardecl(self, s: N.VarDecl, fr: Frame) -> None:
        if s.init is not None:
            fr.locals[s.name] = self.eval(s.init, fr)
        else:
            t = s.type.canonical()
            z = ZERO.get(t)
            fr.locals[s.name] = z if z is not None else (self.zero(t, True) if s.type.expanded else None)

    # ------------------------------------------------------------ expressions

    def eval(self, e, fr: Frame):
        return self.ev[e.__class__](e, fr)

    def ev_literal(self, e: N.Literal, fr: Frame):
        k = e.kind
        if k == "string":
            o = self._strings.get(id(e))
            if o is None:
                o = self._strings[id(e)] = self.mkstr(e.value)
            return o
        if k == "class":
            return self.classobj(e.ty)
        return e.value

    def ev_name(self, e: N.Name, fr: Frame):
        r = e.ref
        k = r[0]
        if k == "local":
            v = fr.locals[r[1]]
            if v is POISON:
                self.raise_exc("InternalErrorException",
                               self.mkstr(f"for variable {r[1]} read after its loop"))
            return v
        if k == "field":
            return fr.fobj.fields[(r[1], r[2])]
        if k == "const":
            v = r[1]
            return self.mkstr(v) if isinstance(v, str) and e.ty == "String" else v
        return self.classobj(r[1])

    def ev_self(self, e, fr: Frame):
        return fr.self

    def ev_typevalue(self, e: N.TypeValue, fr: Frame):
        return self.classobj(e.ty)

    def ev_box(self, e: N.Box, fr: Frame):
        return Obj(self.classes[WRAPPER[e.basic]], None, self.ev[e.expr.__class__](e.expr, fr))

    def ev_unbox(self, e: N.Unbox, fr: Frame):
        v = self.ev[e.expr.__class__](e.expr, fr)
        if v is None:
            self.raise_exc("MessageSendToNilException")
        return v.native

    def ev_arrayinit(self, e: N.ArrayInit, fr: Frame):
        return self.new_array(e.ty, [self.eval(x, fr) for x in e.elements])

    def ev_index(self, e: N.Index, fr: Frame):
        a = self.ev[e.obj.__class__](e.obj, fr)
        i = self.ev[e.index.__class__](e.index, fr)
        if a is None:
            self.raise_exc("MessageSendToNilException")
        if i < 0 or i >= len(a.items):
            self.raise_exc("IllegalArrayIndexException", i, a)
        return a.items[i]

    def store(self, t, fr: Frame, v) -> None:
        c = t.__class__
        if c is N.Name:
            r = t.ref
            if r[0] == "local":
                fr.locals[r[1]] = v
            else:
                fr.fobj.fields[(r[1], r[2])] = v
        elif c is N.Index:
            a = self.eval(t.obj, fr)
            i = self.eval(t.index, fr)
            if a is None:
                self.raise_exc("MessageSendToNilException")
            if i < 0 or i >= len(a.items):
                self.raise_exc("IllegalArrayIndexException", i, a)
            a.items[i] = v
        elif c is N.Send:
            tg = t.target
            if tg.kind == "field":
                fr.fobj.fields[(tg.owner, tg.name)] = v
            else:
                self.classobj(tg.owner).fields[(tg.owner, tg.name)] = v
        else:
            raise InternalFault("bad assignment target")

    def ev_assign(self, e: N.Assign, fr: Frame):
        v = self.ev[e.value.__class__](e.value, fr)
        self.store(e.target, fr, v)
        return v

    def incdec(self, e: N.Unary, fr: Frame) -> None:
        t = e.operand
        d = 1 if e.op == "++" else -1
        ty = t.ty
        if t.__class__ is N.Index:
            a = self.eval(t.obj, fr)
            i = self.eval(t.index, fr)
            if a is None:
                self.raise_exc("MessageSendToNilException")
            if i < 0 or i >= len(a.items):
                self.raise_exc("IllegalArrayIndexException", i, a)
            a.items[i] = self._step(a.items[i], ty, d)
        else:
            self.store(t, fr, self._step(self.eval(t, fr), ty, d))

    def _step(self, v, ty: str, d: int):
        if ty in UNWRAPPER:
            if v is None:
                self.raise_exc("MessageSendToNilException")
            b = UNWRAPPER[ty]
            return self.box(self._step(v.native, b, d), b)
        if ty == "char":
            return chr((ord(v) + d) & 0xFF)
        return wrap_int(v + d, ty)

    def ev_unary(self, e: N.Unary, fr: Frame):
        op = e.op
        v = self.ev[e.operand.__class__](e.operand, fr)
        t = e.ty
        if op == "not":
            return not v
        if op == "-":
            if t == "real":
                return to_float32(-v)
            if t == "double":
                return -v
            return wrap_int(-v, t)
        if op == "~":
            return wrap_int(~v, t)
        return v

    def ev_binary(self, e: N.Binary, fr: Frame):
        op = e.op
        ev = self.ev
        if op == "and":
            return bool(ev[e.left.__class__](e.left, fr)) and bool(ev[e.right.__class__](e.right, fr))
        if op == "or":
            return bool(ev[e.left.__class__](e.left, fr)) or bool(ev[e.right.__class__](e.right, fr))
        a = ev[e.left.__class__](e.left, fr)
        b = ev[e.right.__class__](e.right, fr)
        t = e.opty
        if op == "==":
            return a is b if t == "ref" else a == b
        if op == "<>":
            return a is not b if t == "ref" else a != b
        if t == "String":
            if op == "+":
                return self.mkstr(a.native + b.native)
            a, b = a.native, b.native
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        if op == ">=":
            return a >= b
        if op == "xor":
            return a != b
        if t == "real" or t == "double":
            return self.real_op(op, a, b, t)
        if t == "boolean":
            if op == "&":
                return a and b
            if op == "|":
                return a or b
            return a != b
        if op == "+":
            r = a + b
        elif op == "-":
            r = a - b
        elif op == "*":
            r = a * b
        elif op == "/":
            if b == 0:
                self.raise_exc("DivisionByZeroException")
            q = abs(a) // abs(b)
            r = q if (a >= 0) == (b >= 0) else -q
        elif op == "%":
            if b == 0:
                self.raise_exc("DivisionByZeroException")
            r = abs(a) % abs(b)
            if a < 0:
                r = -r
        elif op == "&":
            r = a & b
        elif op == "|":
            r = a | b
        elif op == "^":
            r = a ^ b
        elif op == "<<":
            r = a << (b & (63 if t == "long" else 31 if t == "integer" else 7))
        elif op == ">>":
            r = a >> (b & (63 if t == "long" else 31 if t == "integer" else 7))
        else:
            raise InternalFault(f"operator {op}")
        return wrap_int(r, t)

    def real_op(self, op: str, a: float, b: float, t: str) -> float:
        try:
            if op == "+":
                r = a + b
            elif op == "-":
                r = a - b
            elif op == "*":
                r = a * b
            elif op == "/":
                if b == 0:
                    self.raise_exc("DivisionByZeroException")
                r = a / b
            else:
                raise InternalFault(f"operator {op} on {t}")
        except OverflowError:
            self.raise_exc("RealOverflowException")
        exact = r
        if t == "real":
            r = to_float32(r)
        if math.isinf(r) and not (math.isinf(a) or math.isinf(b)):
            self.raise_exc("RealOverflowException")
        if r == 0 and exact != 0 or (exact == 0 and op in ("*", "/") and a != 0 and b != 0 and
                                     not math.isinf(b)):
            self.raise_exc("RealUnderflowException")
        return r

    # ------------------------------------------------------------ sends

    def eval_args(self, args: list, pack, fr: Frame) -> list:
        ev = self.ev
        vals = [ev[a.__class__](a, fr) for a in args]
        if pack is not None:
            k, arr = pack
            vals = vals[:k] + [self.new_array(arr, vals[k:])]
        return vals

    def ev_send(self, e: N.Send, fr: Frame):
        t: Target = e.target
        k = t.kind
        if k == "virtual":
            r = e.receiver
            recv = fr.self if r is None else self.ev[r.__class__](r, fr)
            args = self.eval_args(e.args, t.pack, fr) if e.args or t.pack else []
            if recv is None:
                self.raise_exc("MessageSendToNilException")
            if recv.shells or (self.extensions and recv.cls.name in self.extensions):
                return self.dispatch_layers(recv, t.method, args, 0)
            return self.invoke(self.lookup(recv.cls, t.method), recv, args)
        if k == "field":
            return fr.fobj.fields[(t.owner, t.name)]
        if k == "const":
            v = t.value
            return self.mkstr(v) if isinstance(v, str) and e.ty == "String" else v
        if k == "static":
            r = e.receiver
            if r is None or r.__class__ in (N.SelfExpr, N.SuperExpr):
                recv = fr.self
            else:
                recv = self.eval(r, fr)
            args = self.eval_args(e.args, t.pack, fr)
            m = t.method
            owner = self.classes.get(m.owner)
            if owner is not None and owner.kind == "shell":
                return self.invoke(m, recv, args, fobj=fr.fobj, layer=fr.layer)
            return self.invoke(m, recv, args)
        if k == "array":
            recv = self.eval(e.receiver, fr) if e.receiver is not None else fr.self
            args = self.eval_args(e.args, t.pack, fr)
            if recv is None:
                self.raise_exc("MessageSendToNilException")
            return self.send(recv, t.method, args)
        if k == "objfield":
            return self.classobj(t.owner).fields[(t.owner, t.name)]
        if k == "throw":
            self.throw(self.eval(e.args[0], fr))
            return None
        if k == "shellsuper":
            args = self.eval_args(e.args, t.pack, fr)
            return self.call_below(fr.self, t.method, args, fr.layer + 1)
        if k == "basicnew":
            cls = self.classes[t.value]
            if cls.abstract:
                self.raise_exc("CreationException")
            return self.alloc(cls)
        if k == "meta":
            from . import meta
            return meta.eval_meta(self, e, fr)
        if k == "noop":
            return None
        raise InternalFault(f"send kind {k}")


def run_program(prog: CheckedProgram, entry: str, args: list[str], **kw) -> int:
    return Interpreter(prog, **kw).run(entry, args)
