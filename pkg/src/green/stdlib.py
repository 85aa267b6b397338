"""Built-in classes: basic class objects, wrappers, strings and standard objects."""

from __future__ import annotations

import math

from .lexer import to_float32
from .typesys import BASIC, UNWRAPPER, WRAPPER

CAP = {b: b.capitalize() for b in BASIC}

# source types accepted by X.cast(...), following the class object listings
CAST_FROM = {
    "char": ["byte", "integer"],
    "boolean": ["integer", "byte"],
    "byte": ["boolean", "char", "integer", "long", "real", "double"],
    "integer": ["char", "boolean", "byte", "long", "real", "double"],
    "long": ["byte", "integer", "real", "double"],
    "real": ["byte", "integer", "long", "double"],
    "double": ["byte", "integer", "long", "real"],
}

SIZE_BITS = {"char": 8, "boolean": 8, "byte": 8, "integer": 32, "long": 64, "real": 32, "double": 64}


def basic_objects_source() -> str:
    out = []
    for b in BASIC:
        lines = [f"object {b}", "  public:",
                 "    proc getSizeInBits() : integer ;",
                 "    proc getSize() : integer ;",
                 f"    proc cast( value : String ) : {b}",
                 "      assert",
                 "        before castOk(value);",
                 "      end ;",
                 f"    proc cast( any : Any ) (exception : CatchTypeErrorException) : {b} ;",
                 "    proc castOk( value : String ) : boolean ;",
                 "    proc castOk( any : Any ) : boolean ;"]
        for src in CAST_FROM[b]:
            lines += [f"    proc cast( value : {src} ) : {b}",
                      "      assert",
                      "        before castOk(value);",
                      "      end ;",
                      f"    proc castOk( value : {src} ) : boolean ;"]
        lines += [f"    proc getMinValue() : {b} ;", f"    proc getMaxValue() : {b} ;"]
        if b == "char":
            lines += ["    proc getMaxIntegerChar() : integer ;",
                      "    proc getMinIntegerChar() : integer ;"]
        if b in ("real", "double"):
            lines += ["    proc getRadix() : integer ;",
                      "    proc getRounds() : integer ;",
                      "    proc getPrecision() : integer ;",
                      f"    proc getEpsilon() : {b} ;",
                      "    proc getMantDig() : integer ;",
                      f"    proc getMaxExp() : {b} ;",
                      f"    proc getMinExp() : {b} ;"]
        lines.append("end\n")
        out.append("\n".join(lines))
    return "\n".join(out)


def assertion_cast_source() -> str:
    out = []
    for b in BASIC:
        name = f"AssertionCast{CAP[b]}Exception"
        out.append(f"""class {name} subclassOf AssertionException
    proc init( p_originalValueClass : AnyClassObject; p_value : Any )
      begin
      originalValueClass = p_originalValueClass;
      value = p_value;
      end
  public:
    proc getOriginalValueClass() : AnyClassObject
      begin
      return originalValueClass;
      end
    proc getOriginalValue() : Any
      begin
      return value;
      end
    proc isCastTo{CAP[b]}() : boolean
      begin
      return true;
      end
  private:
    var originalValueClass : AnyClassObject;
        value : Any;
end
""")
    return "\n".join(out)


# ---------------------------------------------------------------- natives

NATIVES: dict = {}

INT_RANGE = {"byte": (0, 255), "integer": (-2**31, 2**31 - 1), "long": (-2**63, 2**63 - 1),
             "char": (0, 127)}
FLT_MAX = 3.4028234663852886e38


def native(owner: str, *keys: str):
    def deco(fn):
        for k in keys:
            NATIVES[(owner, k)] = fn
        return fn
    return deco


def fmt_basic(v, t: str) -> str:
    """toString of a basic value."""
    if t == "boolean":
        return "true" if v else "false"
    if t == "char":
        return v
    if t in ("real", "double"):
        if math.isinf(v) or math.isnan(v):
            return ("-" if v < 0 else "") + ("inf" if math.isinf(v) else "nan")
        return f"{v:.6E}"
    return str(v)


# ------------------------------------------------ basic conversions

def convert(dst: str, src: str, v):
    """(ok, value) for ``dst.cast(v)`` where ``v`` has basic type ``src``."""
    if src == dst:
        return True, v
    if src == "char":
        n = ord(v)
    elif src == "boolean":
        n = 1 if v else 0
    elif src in ("real", "double"):
        if math.isinf(v) or math.isnan(v):
            n = None
        else:
            n = int(v)
    else:
        n = v
    if dst == "boolean":
        return True, n != 0
    if dst in ("real", "double"):
        f = float(v) if src not in ("char", "boolean") else float(n)
        if dst == "real":
            r = to_float32(f)
            return not (math.isinf(r) and not math.isinf(f)), r
        return True, f
    lo, hi = INT_RANGE[dst]
    ok = n is not None and lo <= n <= hi
    if n is None:
        n = 0
    if dst == "char":
        return ok, chr(n & 0xFF)
    from .runtime import wrap_int
    return ok, wrap_int(n, dst)


def parse_basic(dst: str, s: str):
    """(ok, value) for ``dst.cast(aString)``."""
    t = s.strip()
    try:
        if dst == "char":
            return (len(s) == 1 and ord(s) <= 127), (s[0] if s else "\0")
        if dst == "boolean":
            return t in ("true", "false"), t == "true"
        if dst in ("real", "double"):
            f = float(t)
            if dst == "real":
                r = to_float32(f)
                return not (math.isinf(r) and not math.isinf(f)), r
            return True, f
        n = int(t, 10)
        lo, hi = INT_RANGE[dst]
        from .runtime import wrap_int
        return lo <= n <= hi, wrap_int(n, dst)
    except ValueError:
        return False, ZERO_OF[dst]


ZERO_OF = {"char": "\0", "boolean": False, "byte": 0, "integer": 0, "long": 0, "real": 0.0, "double": 0.0}


def _cast_fail(rt, dst: str, src: str, v):
    if rt.assertions:
        rt.raise_exc(f"AssertionCast{CAP[dst]}Exception", rt.classobj(f"type({src})"), rt.box(v, src)
                     if src in WRAPPER else v)


def _register_basic(b: str):
    owner = f"type({b})"
    bits = SIZE_BITS[b]
    NATIVES[(owner, "getSizeInBits()")] = lambda rt, r, a: bits
    NATIVES[(owner, "getSize()")] = lambda rt, r, a: bits // 8

    def cast_from(src):
        def fn(rt, r, a):
            ok, v = convert(b, src, a[0])
            if not ok:
                _cast_fail(rt, b, src, a[0])
            return v

        def ok_fn(rt, r, a):
            return convert(b, src, a[0])[0]
        NATIVES[(owner, f"cast({src})")] = fn
        NATIVES[(owner, f"castOk({src})")] = ok_fn

    for src in CAST_FROM[b]:
        cast_from(src)

    def cast_str(rt, r, a):
        if a[0] is None:
            rt.raise_exc("MessageSendToNilException")
        ok, v = parse_basic(b, a[0].native)
        if not ok:
            _cast_fail(rt, b, "String", a[0])
        return v

    def castok_str(rt, r, a):
        return a[0] is not None and parse_basic(b, a[0].native)[0]

    def _any(a0):
        if a0 is None or a0.cls.name not in UNWRAPPER:
            return None
        src = UNWRAPPER[a0.cls.name]
        if src != b and src not in CAST_FROM[b]:
            return None
        return convert(b, src, a0.native)

    def cast_any(rt, r, a):
        res = _any(a[0])
        if res is None or not res[0]:
            rt.raise_exc("TypeErrorException")
        return res[1]

    def castok_any(rt, r, a):
        res = _any(a[0])
        return res is not None and res[0]

    NATIVES[(owner, "cast(String)")] = cast_str
    NATIVES[(owner, "castOk(String)")] = castok_str
    NATIVES[(owner, "cast(Any)")] = cast_any
    NATIVES[(owner, "castOk(Any)")] = castok_any
    if b in INT_RANGE and b != "char":
        lo, hi = INT_RANGE[b]
    elif b == "char":
        lo, hi = "\0", chr(127)
    elif b == "boolean":
        lo, hi = False, True
    else:
        hi = FLT_MAX if b == "real" else 1.7976931348623157e308
        lo = -hi
    NATIVES[(owner, "getMinValue()")] = lambda rt, r, a: lo
    NATIVES[(owner, "getMaxValue()")] = lambda rt, r, a: hi
    if b == "char":
        NATIVES[(owner, "getMaxIntegerChar()")] = lambda rt, r, a: 127
        NATIVES[(owner, "getMinIntegerChar()")] = lambda rt, r, a: 0
    if b in ("real", "double"):
        info = {"real": (2, 1, 6, 1.1920928955078125e-07, 24, 128.0, -125.0),
                "double": (2, 1, 15, 2.220446049250313e-16, 53, 1024.0, -1021.0)}[b]
        for name, val in zip(("getRadix()", "getRounds()", "getPrecision()", "getEpsilon()", "getMantDig()",
                              "getMaxExp()", "getMinExp()"), info):
            NATIVES[(owner, name)] = (lambda v: lambda rt, r, a: v)(val)


for _b in BASIC:
    _register_basic(_b)


# ------------------------------------------------ wrappers

def _register_wrapper(b: str):
    w = WRAPPER[b]

    def init(rt, r, a):
        r.native = a[0]

    NATIVES[(w, f"init({b})")] = init
    NATIVES[(w, "get()")] = lambda rt, r, a: r.native
    NATIVES[(w, "toString()")] = lambda rt, r, a: rt.mkstr(fmt_basic(r.native, b))
    NATIVES[(w, "equals(Any)")] = lambda rt, r, a: (a[0] is not None and a[0].cls is r.cls
                                                    and a[0].native == r.native)


for _b in BASIC:
    _register_wrapper(_b)


# ------------------------------------------------ Any

@native("Any", "toString()")
def _any_tostring(rt, r, a):
    return rt.mkstr("")


@native("Exception", "toString()")
def _exc_tostring(rt, r, a):
    return rt.mkstr(r.cls.name)


def _chain_names(rt, v):
    return [c.name for c in rt.ck.chain(v.cls.name)]


@native("Any", "isObjectOf(AnyClassObject)")
def _is_object_of(rt, r, a):
    c = a[0]
    if c is None or r is None:
        return False
    target = c.cls.assoc or c.cls.name[5:-1]
    return target in _chain_names(rt, r)


def shallow_clone(rt, v):
    from .runtime import ArrObj, Obj
    if isinstance(v, ArrObj):
        return ArrObj(v.cls, list(v.items))
    if v.cls.kind == "object":
        return v
    native = list(v.native) if isinstance(v.native, list) else v.native
    return Obj(v.cls, dict(v.fields), native)


def deep_clone(rt, v, memo=None):
    from .runtime import ArrObj, Obj
    if memo is None:
        memo = {}
    if v is None or not isinstance(v, (Obj, ArrObj)):
        return v
    if id(v) in memo:
        return memo[id(v)]
    if isinstance(v, ArrObj):
        c = ArrObj(v.cls, [])
        memo[id(v)] = c
        c.items = [deep_clone(rt, x, memo) for x in v.items]
        return c
    if v.cls.kind == "object":
        return v
    native = list(v.native) if isinstance(v.native, list) else v.native
    c = Obj(v.cls, {}, native)
    memo[id(v)] = c
    c.fields = {k: deep_clone(rt, x, memo) for k, x in v.fields.items()}
    return c


def _same(x, y) -> bool:
    from .runtime import ArrObj, Obj
    if isinstance(x, (Obj, ArrObj)) or isinstance(y, (Obj, ArrObj)):
        return x is y
    return x == y


def shallow_equal(rt, x, y) -> bool:
    from .runtime import ArrObj
    if x is None or y is None or x.cls is not y.cls:
        return False
    if isinstance(x, ArrObj):
        return len(x.items) == len(y.items) and all(_same(a, b) for a, b in zip(x.items, y.items))
    if x.native is not None or y.native is not None:
        if x.native != y.native:
            return False
    return all(_same(x.fields[k], y.fields[k]) for k in x.fields)


def deep_equal(rt, x, y, seen=None) -> bool:
    from .runtime import ArrObj, Obj
    if seen is None:
        seen = set()
    if not isinstance(x, (Obj, ArrObj)) or not isinstance(y, (Obj, ArrObj)):
        return _same(x, y)
    if x is y:
        return True
    if x.cls is not y.cls:
        return False
    if (id(x), id(y)) in seen:
        return True
    seen.add((id(x), id(y)))
    if isinstance(x, ArrObj):
        return len(x.items) == len(y.items) and all(deep_equal(rt, a, b, seen)
                                                    for a, b in zip(x.items, y.items))
    if x.cls.kind == "object":
        return False
    if x.native != y.native:
        return False
    return all(deep_equal(rt, x.fields[k], y.fields[k], seen) for k in x.fields)


def shallow_copy(rt, x, y) -> bool:
    from .runtime import ArrObj
    if y is None or x.cls is not y.cls:
        return False
    if isinstance(x, ArrObj):
        if len(x.items) != len(y.items):
            return False
        x.items[:] = y.items
        return True
    x.fields.update(y.fields)
    x.native = list(y.native) if isinstance(y.native, list) else y.native
    return True


NATIVES[("Any", "shallowClone()")] = lambda rt, r, a: shallow_clone(rt, r)
NATIVES[("Any", "deepClone()")] = lambda rt, r, a: deep_clone(rt, r)
NATIVES[("Any", "shallowCopy(Any)")] = lambda rt, r, a: shallow_copy(rt, r, a[0])
NATIVES[("Any", "shallowEqual(Any)")] = lambda rt, r, a: shallow_equal(rt, r, a[0])
NATIVES[("Any", "deepEqual(Any)")] = lambda rt, r, a: deep_equal(rt, r, a[0])


def _nonnil(rt, v):
    if v is None:
        rt.raise_exc("MessageSendToNilException")
    return v


NATIVES[("type(Any)", "toString(Any)")] = lambda rt, r, a: rt.mkstr(rt.to_text(_nonnil(rt, a[0])))
NATIVES[("type(Any)", "isObjectOf(Any,AnyClassObject)")] = \
    lambda rt, r, a: _is_object_of(rt, _nonnil(rt, a[0]), a[1:])
NATIVES[("type(Any)", "shallowClone(Any)")] = lambda rt, r, a: shallow_clone(rt, _nonnil(rt, a[0]))
NATIVES[("type(Any)", "deepClone(Any)")] = lambda rt, r, a: deep_clone(rt, _nonnil(rt, a[0]))
NATIVES[("type(Any)", "shallowCopy(Any,Any)")] = lambda rt, r, a: shallow_copy(rt, _nonnil(rt, a[0]), a[1])
NATIVES[("type(Any)", "shallowEqual(Any,Any)")] = lambda rt, r, a: shallow_equal(rt, _nonnil(rt, a[0]), a[1])
NATIVES[("type(Any)", "deepEqual(Any,Any)")] = lambda rt, r, a: deep_equal(rt, _nonnil(rt, a[0]), a[1])


@native("type(Any)", "basicNew(AnyClassObject)")
def _basic_new(rt, r, a):
    c = _nonnil(rt, a[0])
    cls = rt.classes.get(c.cls.assoc) if c.cls.assoc else None
    if cls is None or cls.kind != "class" or cls.abstract:
        rt.raise_exc("CreationException")
    return rt.alloc(cls)


@native("AnyClass", "getClassObject()")
def _get_class_object(rt, r, a):
    if r.cls.kind == "object":
        return r
    return rt.classobj(f"type({r.cls.name})")


NATIVES[("*", "getClassObject")] = _get_class_object


# ------------------------------------------------ arrays

def _array_path(rt, arr, idx: list):
    if len(idx) > arr.dims:
        rt.raise_exc("TooManyDimensionsException", len(idx), arr.dims)
    cur = arr
    for depth, i in enumerate(idx):
        if cur is None:
            rt.raise_exc("MessageSendToNilException")
        if i < 0 or i >= len(cur.items):
            rt.raise_exc("IllegalArrayIndexException", i, cur)
        if depth == len(idx) - 1:
            return cur, i
        cur = cur.items[i]
    return cur, None


def _array_get(rt, r, a):
    cont, i = _array_path(rt, r, a)
    v = cont.items[i]
    if cont.dims == 1 and cont.elem in WRAPPER:
        return rt.box(v, cont.elem)
    return v


def _array_set(rt, r, a):
    v, idx = a[0], a[1:]
    cont, i = _array_path(rt, r, idx)
    t = cont.inner
    if t in WRAPPER:
        if v is None or v.cls.name != WRAPPER[t]:
            rt.raise_exc("TypeErrorException")
        cont.items[i] = v.native
        return
    if v is not None and not rt.is_instance(v, t):
        rt.raise_exc("TypeErrorException")
    cont.items[i] = v


NATIVES[("AnyArray", "getSize()")] = lambda rt, r, a: len(r.items)
for _k in ("get(integer)", "get(integer,integer)", "get(integer,integer,integer)"):
    NATIVES[("AnyArray", _k)] = _array_get
for _k in ("set(Any,integer)", "set(Any,integer,integer)", "set(Any,integer,integer,integer)"):
    NATIVES[("AnyArray", _k)] = _array_set


def _arr_reset(rt, r, a):
    up = a[0] if a else True
    r.up = up
    r.cursor = 0 if up else len(r.items) - 1


def _arr_next(rt, r, a):
    if not 0 <= r.cursor < len(r.items):
        rt.raise_exc("IllegalArrayIndexException", r.cursor, r)
    v = r.items[r.cursor]
    r.cursor += 1 if r.up else -1
    return v


def _arr_fill(rt, r, a):
    r.items[:] = [a[0]] * len(r.items)


NATIVES[("array", "toString")] = lambda rt, r, a: rt.mkstr(r.cls.name)
NATIVES[("array", "reset")] = _arr_reset
NATIVES[("array", "more")] = lambda rt, r, a: 0 <= r.cursor < len(r.items)
NATIVES[("array", "next")] = _arr_next
NATIVES[("array", "fill")] = _arr_fill


# ------------------------------------------------ strings

def _s(rt, v) -> str:
    if v is None:
        rt.raise_exc("MessageSendToNilException")
    return v.native if not isinstance(v.native, list) else "".join(v.native)


def _cmp(x: str, y: str) -> int:
    return (x > y) - (x < y)


def _hash(s: str) -> int:
    h = 0
    for ch in s:
        h = (h * 31 + ord(ch)) & 0xFFFFFFFF
    return h - 0x100000000 if h >= 0x80000000 else h


def _string_init_args(rt, r, a):
    r.native = "".join(rt.to_text(x) for x in a[0].items)


def _ok_parse(t):
    return lambda rt, r, a: parse_basic(t, r.native)[0]


def _to_basic(t):
    def fn(rt, r, a):
        ok, v = parse_basic(t, r.native)
        return v
    return fn


NATIVES[("String", "init(String)")] = lambda rt, r, a: setattr(r, "native", _s(rt, a[0]))
NATIVES[("String", "init(...array(Any)[])")] = _string_init_args
NATIVES[("String", "get(integer)")] = lambda rt, r, a: r.native[a[0]]
NATIVES[("String", "cmp(String)")] = lambda rt, r, a: _cmp(r.native, _s(rt, a[0]))
NATIVES[("String", "cmpIgnoreCase(String)")] = lambda rt, r, a: _cmp(r.native.lower(), _s(rt, a[0]).lower())
NATIVES[("String", "newConcat(String)")] = lambda rt, r, a: rt.mkstr(r.native + _s(rt, a[0]))
NATIVES[("String", "getSize()")] = lambda rt, r, a: len(r.native)
NATIVES[("String", "newToLowerCase()")] = lambda rt, r, a: rt.mkstr(r.native.lower())
NATIVES[("String", "newToUpperCase()")] = lambda rt, r, a: rt.mkstr(r.native.upper())
NATIVES[("String", "getSubset(integer,integer)")] = lambda rt, r, a: rt.mkstr(r.native[a[0]:a[1] + 1])
NATIVES[("String", "search(String)")] = lambda rt, r, a: r.native.find(_s(rt, a[0]))
NATIVES[("String", "hashCode()")] = lambda rt, r, a: _hash(r.native)
NATIVES[("String", "toString()")] = lambda rt, r, a: r
NATIVES[("String", "equals(Any)")] = lambda rt, r, a: (a[0] is not None and a[0].cls is r.cls
                                                       and a[0].native == r.native)
for _t in ("byte", "integer", "long", "real", "double"):
    NATIVES[("String", f"to{_t}()")] = _to_basic(_t)
    NATIVES[("String", f"to{_t}Ok()")] = _ok_parse(_t)
NATIVES[("String", "toDynString()")] = lambda rt, r, a: rt.new_object("DynString", [r])
NATIVES[("String", "tocharArray()")] = lambda rt, r, a: rt.new_array("array(char)[]", list(r.native))
for _b in BASIC:
    NATIVES[("type(String)", f"cast({_b})")] = (lambda b: lambda rt, r, a: rt.mkstr(fmt_basic(a[0], b)))(_b)


def _ds(rt, r) -> list:
    return r.native


NATIVES[("DynString", "init()")] = lambda rt, r, a: setattr(r, "native", [])
NATIVES[("DynString", "init(String)")] = lambda rt, r, a: setattr(r, "native", list(_s(rt, a[0])))
NATIVES[("DynString", "get(integer)")] = lambda rt, r, a: r.native[a[0]]
NATIVES[("DynString", "set(integer,char)")] = lambda rt, r, a: r.native.__setitem__(a[0], a[1])
NATIVES[("DynString", "getSize()")] = lambda rt, r, a: len(r.native)
NATIVES[("DynString", "concat(String)")] = lambda rt, r, a: r.native.extend(_s(rt, a[0]))
NATIVES[("DynString", "add(char)")] = lambda rt, r, a: r.native.append(a[0])
NATIVES[("DynString", "prepend(String)")] = lambda rt, r, a: r.native.__setitem__(slice(0, 0), list(_s(rt, a[0])))
NATIVES[("DynString", "insert(String,integer)")] = \
    lambda rt, r, a: r.native.__setitem__(slice(a[1], a[1]), list(_s(rt, a[0])))
NATIVES[("DynString", "remove(integer,integer)")] = lambda rt, r, a: r.native.__delitem__(slice(a[0], a[1] + 1))
NATIVES[("DynString", "removeAllCh(char)")] = \
    lambda rt, r, a: r.native.__setitem__(slice(None), [c for c in r.native if c != a[0]])
NATIVES[("DynString", "removeSpaceBegin()")] = \
    lambda rt, r, a: r.native.__setitem__(slice(None), list("".join(r.native).lstrip(" ")))
NATIVES[("DynString", "removeSpaceEnd()")] = \
    lambda rt, r, a: r.native.__setitem__(slice(None), list("".join(r.native).rstrip(" ")))
NATIVES[("DynString", "search(String)")] = lambda rt, r, a: "".join(r.native).find(_s(rt, a[0]))
NATIVES[("DynString", "cmp(String)")] = lambda rt, r, a: _cmp("".join(r.native), _s(rt, a[0]))
NATIVES[("DynString", "toString()")] = lambda rt, r, a: rt.mkstr("".join(r.native))


# ------------------------------------------------ standard objects

def _writer(stream: str, newline: bool):
    def fn(rt, r, a):
        s = getattr(rt, stream)
        s.write("".join(rt.to_text(x) for x in a[0].items) + ("\n" if newline else ""))
    return fn


NATIVES[("type(Out)", "write(...array(Any)[])")] = _writer("out", False)
NATIVES[("type(Out)", "writeln(...array(Any)[])")] = _writer("out", True)
NATIVES[("type(OutError)", "write(...array(Any)[])")] = _writer("err", False)
NATIVES[("type(OutError)", "writeln(...array(Any)[])")] = _writer("err", True)


def _read_token(rt) -> str:
    buf = []
    while True:
        ch = rt.inp.read(1)
        if not ch:
            break
        if ch.isspace():
            if buf:
                break
            continue
        buf.append(ch)
    return "".join(buf)


def _reader(t: str):
    def fn(rt, r, a):
        tok = _read_token(rt)
        ok, v = parse_basic(t, tok)
        if not ok:
            m = rt.find_method(rt.string_cls, f"to{t}", 0)
            rt.assertion_failed(m, rt.mkstr(tok), "Before")
        return v
    return fn


for _t in ("byte", "integer", "long", "real", "double"):
    NATIVES[("type(In)", f"read{CAP[_t]}()")] = _reader(_t)


@native("type(In)", "readCh()")
def _read_ch(rt, r, a):
    ch = rt.inp.read(1)
    return ch if ch else "\0"


NATIVES[("type(In)", "readString()")] = lambda rt, r, a: rt.mkstr(_read_token(rt))


@native("type(In)", "readLine()")
def _read_line(rt, r, a):
    line = rt.inp.readline()
    return rt.mkstr(line[:-1] if line.endswith("\n") else line)


@native("type(In)", "eof()")
def _eof(rt, r, a):
    s = rt.inp
    try:
        pos = s.tell()
        ch = s.read(1)
        s.seek(pos)
        return ch == ""
    except (OSError, ValueError):
        return False


for _k in ("collectGarbage()", "doNotCollectGarbage()", "keepCollectingGarbage()"):
    NATIVES[("type(Memory)", _k)] = lambda rt, r, a: None
for _k in ("sizeFreeMemory()", "sizeBiggestFreeBlock()", "sizeMemory()"):
    NATIVES[("type(Memory)", _k)] = lambda rt, r, a: 1 << 30


@native("type(Runtime)", "exit(integer)")
def _exit(rt, r, a):
    from .runtime import ExitProgram
    rt.run_end_list()
    raise ExitProgram(a[0])


NATIVES[("type(Runtime)", "putAtEndList(Function)")] = lambda rt, r, a: rt.end_list.append(_nonnil(rt, a[0]))


@native("type(Runtime)", "getCatchObjectStack()")
def _catch_stack(rt, r, a):
    return rt.new_array("array(Any)[]", list(reversed(rt.catches)))


@native("type(Runtime)", "setCatchUnchecked(CatchUncheckedException)")
def _set_unchecked(rt, r, a):
    rt.catches[0] = a[0]


NATIVES[("type(Runtime)", "getCatchUnchecked()")] = lambda rt, r, a: rt.catches[0]


@native("*", "throw")
def _hard_throw(rt, r, a):
    from .runtime import ExitProgram
    rt.err.write(f"Exception {a[0].cls.name} not caught\n")
    raise ExitProgram(1)
