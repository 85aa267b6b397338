"""Run-time mirrors: ClassInfo, MethodInfo, variable and constant infos, object infos.

Mirrors are ordinary heap objects of the prelude reflection classes whose
``native`` slot holds the described symbol. Class information is only
available with ``--reflect=classes``; the method call stack needs
``--reflect=calls``.
"""

from __future__ import annotations

from .stdlib import NATIVES
from .symbols import display_name
from .typesys import BASIC, WRAPPER, is_array_name


class _PackMarker:
    """Catch-stack entry that turns any exception into a PackedException."""

    cls = None


def require_classes(rt) -> None:
    if not rt.reflect_classes:
        rt.raise_exc("NoReflectiveClassInfoException")


def info_name(name: str) -> str:
    if name.startswith("type("):
        return "Type$" + display_name(name)
    return name


def class_info(rt, name: str):
    key = ("class", name)
    o = rt.mirrors.get(key)
    if o is None:
        from .runtime import Obj
        cls = rt.classes["ArrayClassInfo" if is_array_name(name) else "ClassInfo"]
        o = Obj(cls, rt.alloc(cls).fields, name)
        rt.mirrors[key] = o
    return o


def class_method_info(rt, m):
    from .runtime import Obj
    return Obj(rt.classes["ClassMethodInfo"], {}, m)


def object_method_info(rt, recv, m, layer: int):
    from .runtime import Obj
    return Obj(rt.classes["ObjectMethodInfo"], {}, [recv, m, layer, None])


def object_info(rt, obj):
    from .runtime import Obj
    kind = "ClassObjectInfo" if obj.cls.kind == "object" else "ObjectInfo"
    return Obj(rt.classes[kind], {}, obj)


def _arr(rt, tname: str, items: list):
    return rt.new_array(tname, items)


def _methods(rt, name: str, public_only: bool = False, own_only: bool = False) -> list:
    out, seen = [], set()
    chain = rt.ck.chain(name)
    if own_only:
        chain = chain[:1]
    for c in chain:
        for m in c.methods:
            if m.section in ("init", "objinit"):
                continue
            if public_only and m.section != "public":
                continue
            if m.section == "private" and c is not chain[0]:
                continue
            k = m.key
            if k in seen:
                continue
            seen.add(k)
            out.append(m)
    return out


def _fields(rt, name: str, own_only: bool = False) -> list:
    chain = rt.ck.chain(name)
    if own_only:
        chain = chain[:1]
    out = []
    for c in reversed(chain):
        out.extend(c.fields)
    return out


def _param_type(obj) -> str:
    """The type named by a class object argument of getMethod."""
    if obj.cls.assoc:
        return obj.cls.assoc
    return display_name(obj.cls.name)


def _find_method(rt, name: str, mname: str, types: list):
    for m in _methods(rt, name):
        if m.name == mname and len(m.params) == len(types) and \
                all(p == t or rt.types.equal(p, t) for p, t in zip(m.ptypes, types) if p not in BASIC):
            if all(p == t for p, t in zip(m.ptypes, types) if p in BASIC):
                return m
    return None


def _unbox_args(rt, m, args):
    if len(args) != len(m.params):
        rt.raise_exc("WrongParametersException")
    out = []
    for v, (_, t) in zip(args, m.params):
        if t in BASIC:
            if v is None or v.cls.name != WRAPPER[t]:
                rt.raise_exc("WrongParametersException")
            out.append(v.native)
        else:
            if v is not None and not rt.is_instance(v, t):
                rt.raise_exc("WrongParametersException")
            out.append(v)
    return out


def packed_call(rt, fn):
    """Run ``fn``; an exception escaping it is rethrown packed in a PackedException."""
    from .runtime import Unwind
    marker = _PackMarker()
    cs = rt.catches
    depth = len(cs)
    calls = len(rt.callstack)
    cs.append(marker)
    try:
        return fn()
    except Unwind as u:
        if u.idx != depth:
            raise
        del cs[depth:]
        del rt.callstack[calls:]
        rt.raise_exc("PackedException", u.exc)
    finally:
        del cs[depth:]


def _invoke(rt, recv, m, args, layer: int, pack: bool):
    if recv is None:
        rt.raise_exc("MessageSendToNilException")
    if not rt.is_instance(recv, m.owner):
        rt.raise_exc("TypeErrorException")
    vals = _unbox_args(rt, m, args)
    if layer > 0:
        res = rt.call_below(recv, m, vals, layer)
    elif pack:
        res = packed_call(rt, lambda: rt.send(recv, m, vals))
    else:
        res = rt.send(recv, m, vals)
    return rt.box_value(res, m.ret) if m.ret else None


# ------------------------------------------------ entry points

def _get_class_info(rt, r, a):
    require_classes(rt)
    return class_info(rt, r.cls.name)


NATIVES[("AnyClass", "getClassInfo()")] = _get_class_info
NATIVES[("*", "getClassInfo")] = _get_class_info


def _get_info(rt, obj):
    if obj is None:
        rt.raise_exc("MessageSendToNilException")
    require_classes(rt)
    return object_info(rt, obj)


NATIVES[("Any", "getInfo()")] = lambda rt, r, a: _get_info(rt, r)
NATIVES[("type(Any)", "getInfo(Any)")] = lambda rt, r, a: _get_info(rt, a[0])


def _assoc_info(rt, r, a):
    require_classes(rt)
    return class_info(rt, r.cls.assoc or display_name(r.cls.name))


def _init_method(rt, r, a):
    require_classes(rt)
    for m in r.cls.methods:
        if m.section == "objinit":
            return object_method_info(rt, r, m, 0)
    return None


NATIVES[("AnyClassObject", "getAssociateClassInfo()")] = _assoc_info
NATIVES[("AnyClassObject", "getInitMethod()")] = _init_method


def _get_classes(rt, r, a):
    require_classes(rt)
    names = [n for n, s in rt.classes.items() if s.kind == "class"]
    return _arr(rt, "array(ClassInfo)[]", [class_info(rt, n) for n in names])


def _search_class(rt, r, a):
    require_classes(rt)
    name = a[0].native if a[0] is not None else ""
    s = rt.classes.get(name)
    return class_info(rt, name) if s is not None and s.kind == "class" else None


def _call_stack(rt, r, a):
    if not rt.reflect_calls:
        rt.raise_exc("NoReflectiveCallInfoException")
    infos = [object_method_info(rt, recv, m, 0) for m, recv in reversed(rt.callstack)]
    return _arr(rt, "array(MethodInfo)[]", infos)


NATIVES[("type(Runtime)", "getClasses()")] = _get_classes
NATIVES[("type(Runtime)", "searchForClass(String)")] = _search_class
NATIVES[("type(Runtime)", "getMethodCallStack()")] = _call_stack


# ------------------------------------------------ ClassInfo

def _ci(name: str, fn):
    NATIVES[("ClassInfo", name)] = fn


_ci("getName()", lambda rt, r, a: rt.mkstr(info_name(r.native)))
_ci("toString()", lambda rt, r, a: rt.mkstr(info_name(r.native)))
_ci("isSupertypeOf(ClassInfo)", lambda rt, r, a: a[0] is not None and rt.types.subtype(a[0].native, r.native))
_ci("isSuperclassOf(ClassInfo)", lambda rt, r, a: a[0] is not None and rt.prog.is_subclass(a[0].native, r.native))


def _superclass(rt, r, a):
    s = rt.ck.class_sym(r.native)
    return class_info(rt, s.superclass) if s is not None and s.superclass else None


_ci("getSuperclass()", _superclass)


def _ivars(own: bool):
    def fn(rt, r, a):
        from .runtime import Obj
        cls = rt.classes["ClassInstanceVariableInfo"]
        return _arr(rt, "array(ClassInstanceVariableInfo)[]",
                    [Obj(cls, {}, f) for f in _fields(rt, r.native, own)])
    return fn


_ci("getInstanceVariables()", _ivars(False))
_ci("getThisClassInstanceVariables()", _ivars(True))


def _ivar(rt, r, a):
    from .runtime import Obj
    name = a[0].native if a[0] is not None else ""
    for f in _fields(rt, r.native):
        if f.name == name:
            return Obj(rt.classes["ClassInstanceVariableInfo"], {}, f)
    return None


_ci("getInstanceVariable(String)", _ivar)


def _cmethods(public: bool = False, own: bool = False, inits: bool = False):
    def fn(rt, r, a):
        if inits:
            s = rt.ck.class_sym(r.native)
            ms = [m for m in s.methods if m.section == "init"]
        else:
            ms = _methods(rt, r.native, public, own)
        return _arr(rt, "array(ClassMethodInfo)[]", [class_method_info(rt, m) for m in ms])
    return fn


_ci("getMethods()", _cmethods())
_ci("getThisClassMethods()", _cmethods(own=True))
_ci("getPublicMethods()", _cmethods(public=True))
_ci("getInitMethods()", _cmethods(inits=True))


def _get_method(rt, r, a):
    name = a[0].native if a[0] is not None else ""
    types = [_param_type(x) for x in a[1].items] if a[1] is not None else []
    m = _find_method(rt, r.native, name, types)
    return class_method_info(rt, m) if m is not None else None


_ci("getMethod(String,array(AnyClassObject)[])", _get_method)
_ci("getMethod_v(String,...array(AnyClassObject)[])", _get_method)


def _get_public(rt, r, a):
    name = a[0].native if a[0] is not None else ""
    for m in _methods(rt, r.native, public_only=True):
        if m.name == name:
            return class_method_info(rt, m)
    return None


_ci("getPublicMethod(String)", _get_public)
_ci("getAssociateClassObject()", lambda rt, r, a: rt.classobj(f"type({r.native})")
    if not r.native.startswith("type(") else rt.classobj(r.native))
_ci("isClassOf(Any)", lambda rt, r, a: a[0] is not None and a[0].cls.name == r.native)
_ci("isAbstract()", lambda rt, r, a: bool(getattr(rt.ck.class_sym(r.native), "abstract", False)))
_ci("isReflective()", lambda rt, r, a: bool(getattr(rt.ck.class_sym(r.native), "reflective", False)) or
    rt.reflect_classes)


def _elem_class(rt, r, a):
    from .typesys import array_name, split_array
    elem, dims = split_array(r.native)
    return class_info(rt, array_name(elem, dims - 1) if dims > 1 else elem)


NATIVES[("ArrayClassInfo", "getArrayElementClass()")] = _elem_class
NATIVES[("ArrayClassInfo", "getNumberOfDimensions()")] = lambda rt, r, a: r.native.count("[]")


# ------------------------------------------------ MethodInfo

def _msym(r):
    return r.native[1] if isinstance(r.native, list) else r.native


def _mi(name: str, fn):
    NATIVES[("MethodInfo", name)] = fn


_mi("getName()", lambda rt, r, a: rt.mkstr(_msym(r).name))
_mi("toString()", lambda rt, r, a: rt.mkstr(_msym(r).qualname))
_mi("getVisibility()", lambda rt, r, a: rt.mkstr(_msym(r).section))
_mi("getParameterTypes()", lambda rt, r, a: _arr(rt, "array(ClassInfo)[]",
                                                  [class_info(rt, t) for t in _msym(r).ptypes]))
_mi("getReturnType()", lambda rt, r, a: class_info(rt, _msym(r).ret) if _msym(r).ret else None)
_mi("getExceptionClass()", lambda rt, r, a: class_info(rt, _msym(r).exc))
_mi("isAbstract()", lambda rt, r, a: _msym(r).abstract)


def _body(rt, r, a):
    rt.raise_exc("NoReflectiveBodyInfoException")


_mi("getBody()", _body)


def _cm_invoke(rt, r, a):
    args = a[1].items if a[1] is not None else []
    return _invoke(rt, a[0], r.native, args, 0, True)


NATIVES[("ClassMethodInfo", "invoke(Any,array(Any)[])")] = _cm_invoke
NATIVES[("ClassMethodInfo", "invoke_v(Any,...array(Any)[])")] = _cm_invoke


def _om_invoke(rt, r, a):
    recv, m, layer, _ = r.native
    args = a[0].items if a[0] is not None else []
    res = _invoke(rt, recv, m, args, layer, layer == 0)
    r.native[3] = res
    return res


NATIVES[("ObjectMethodInfo", "invoke(array(Any)[])")] = _om_invoke
NATIVES[("ObjectMethodInfo", "invoke_v(...array(Any)[])")] = _om_invoke


# ------------------------------------------------ variables and constants

def _fsym(r):
    return r.native[1] if isinstance(r.native, tuple) else r.native


def _iv(name: str, fn):
    NATIVES[("InstanceVariableInfo", name)] = fn


_iv("getName()", lambda rt, r, a: rt.mkstr(_fsym(r).name))
_iv("getType()", lambda rt, r, a: class_info(rt, _fsym(r).type))
_iv("isExpanded()", lambda rt, r, a: _fsym(r).expanded)
_iv("toString()", lambda rt, r, a: rt.mkstr(f"{_fsym(r).name} : {_fsym(r).type}"))


def _field_get(rt, obj, f):
    if obj is None:
        rt.raise_exc("MessageSendToNilException")
    key = (f.owner, f.name)
    if key not in obj.fields:
        rt.raise_exc("TypeErrorException")
    return rt.box_value(obj.fields[key], f.type)


def _field_set(rt, obj, f, v):
    if obj is None:
        rt.raise_exc("MessageSendToNilException")
    key = (f.owner, f.name)
    if key not in obj.fields or f.expanded:
        rt.raise_exc("TypeErrorException")
    if f.type in BASIC:
        if v is None or v.cls.name != WRAPPER[f.type]:
            rt.raise_exc("TypeErrorException")
        v = v.native
    elif v is not None and not rt.is_instance(v, f.type):
        rt.raise_exc("TypeErrorException")
    obj.fields[key] = v


NATIVES[("ClassInstanceVariableInfo", "get(Any)")] = lambda rt, r, a: _field_get(rt, a[0], r.native)
NATIVES[("ClassInstanceVariableInfo", "set(Any,Any)")] = lambda rt, r, a: _field_set(rt, a[0], r.native, a[1])
NATIVES[("ObjectInstanceVariableInfo", "get()")] = lambda rt, r, a: _field_get(rt, r.native[0], r.native[1])
NATIVES[("ObjectInstanceVariableInfo", "set(Any)")] = \
    lambda rt, r, a: _field_set(rt, r.native[0], r.native[1], a[0])


def _const_value(rt, c):
    v = c.value
    if c.type == "String":
        return rt.mkstr(v)
    if c.type in BASIC:
        return rt.box(v, c.type)
    return v


NATIVES[("ConstantInfo", "getName()")] = lambda rt, r, a: rt.mkstr(r.native.name)
NATIVES[("ConstantInfo", "getValue()")] = lambda rt, r, a: _const_value(rt, r.native)
NATIVES[("ConstantInfo", "toString()")] = lambda rt, r, a: rt.mkstr(f"{r.native.name} = {r.native.value}")


# ------------------------------------------------ object infos

def _oi(name: str, fn):
    NATIVES[("AnyObjectInfo", name)] = fn


def _obj_ivars(rt, r, a):
    from .runtime import Obj
    cls = rt.classes["ObjectInstanceVariableInfo"]
    return _arr(rt, "array(ObjectInstanceVariableInfo)[]",
                [Obj(cls, {}, (r.native, f)) for f in _fields(rt, r.native.cls.name)])


def _obj_ivar(rt, r, a):
    from .runtime import Obj
    name = a[0].native if a[0] is not None else ""
    for f in _fields(rt, r.native.cls.name):
        if f.name == name:
            return Obj(rt.classes["ObjectInstanceVariableInfo"], {}, (r.native, f))
    return None


def _obj_methods(public: bool):
    def fn(rt, r, a):
        return _arr(rt, "array(ObjectMethodInfo)[]",
                    [object_method_info(rt, r.native, m, 0) for m in _methods(rt, r.native.cls.name, public)])
    return fn


def _obj_method(rt, r, a, public: bool = False):
    name = a[0].native if a[0] is not None else ""
    if len(a) > 1:
        types = [_param_type(x) for x in a[1].items] if a[1] is not None else []
        m = _find_method(rt, r.native.cls.name, name, types)
        return object_method_info(rt, r.native, m, 0) if m is not None else None
    for m in _methods(rt, r.native.cls.name, public):
        if m.name == name:
            return object_method_info(rt, r.native, m, 0)
    return None


_oi("getObject()", lambda rt, r, a: r.native)
_oi("getTypeInfo()", lambda rt, r, a: class_info(rt, r.native.cls.name))
_oi("getInstanceVariables()", _obj_ivars)
_oi("getInstanceVariable(String)", _obj_ivar)
_oi("getMethods()", _obj_methods(False))
_oi("getPublicMethods()", _obj_methods(True))
_oi("getPublicMethod(String)", lambda rt, r, a: _obj_method(rt, r, a, True))
_oi("getMethod(String)", _obj_method)
_oi("getMethod(String,array(AnyClassObject)[])", _obj_method)
_oi("toString()", lambda rt, r, a: rt.mkstr(info_name(r.native.cls.name)))


def _consts(enum: bool):
    def fn(rt, r, a):
        from .runtime import Obj
        cls = rt.classes["ConstantInfo"]
        cs = [c for c in r.native.cls.consts.values() if c.enum == enum]
        return _arr(rt, "array(ConstantInfo)[]", [Obj(cls, {}, c) for c in cs])
    return fn


def _safe_unbox(rt, m, args):
    if len(args) != len(m.params):
        return None
    out = []
    for v, (_, t) in zip(args, m.params):
        if t in BASIC:
            if v is None or v.cls.name != WRAPPER[t]:
                return None
            out.append(v.native)
        elif v is not None and not rt.is_instance(v, t):
            return None
        else:
            out.append(v)
    return out


def _coi_new_safe(rt, r, a):
    obj = r.native
    args = a[0].items if a[0] is not None else []
    for m in obj.cls.methods:
        if m.name != "new" or m.section != "public":
            continue
        vals = _safe_unbox(rt, m, args)
        if vals is None:
            continue
        return packed_call(rt, lambda: rt.send(obj, m, vals))
    rt.raise_exc("WrongParametersException")


NATIVES[("ClassObjectInfo", "getConstants()")] = _consts(False)
NATIVES[("ClassObjectInfo", "getEnumConstants()")] = _consts(True)
NATIVES[("ClassObjectInfo", "new(array(Any)[])")] = _coi_new_safe
NATIVES[("ClassObjectInfo", "new_v(...array(Any)[])")] = _coi_new_safe
