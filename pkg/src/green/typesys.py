"""Structural types: signatures, type equality and subtyping.

A type is the set of public method signatures of a class. Two types are
equal when each signature of one has an equal signature in the other;
the comparison may revisit a pair of types through recursive references,
in which case the pair is assumed equal (the visited-pair set ``Ig``).
Subtyping is signature-set inclusion with invariant parameter and return
types, so it needs no assumption set of its own.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

BASIC = ("char", "boolean", "byte", "integer", "long", "real", "double")
WRAPPER = {"char": "Char", "boolean": "Boolean", "byte": "Byte", "integer": "Integer",
           "long": "Long", "real": "Real", "double": "Double"}
UNWRAPPER = {v: k for k, v in WRAPPER.items()}
DEFAULT_EXC = "CatchUncheckedException"
NIL = "Nil"
# types whose only subtypes are themselves and Nil
FINAL_TYPES = frozenset(["String", *WRAPPER.values()])


class Sig(NamedTuple):
    name: str
    params: tuple
    exc: str = DEFAULT_EXC
    ret: Optional[str] = None
    variadic: bool = False

    def __str__(self) -> str:
        ps = ", ".join(self.params)
        if self.variadic:
            ps = ps.rsplit(", ", 1)
            ps[-1] = "..." + ps[-1]
            ps = ", ".join(ps)
        s = f"{self.name}({ps})"
        if self.exc != DEFAULT_EXC:
            s += f"({self.exc})"
        if self.ret:
            s += f" : {self.ret}"
        return s


@dataclass
class TypeDesc:
    name: str
    kind: str  # basic, class, classobj, array, nil
    sigs: tuple = ()
    final: bool = False
    elem: Optional[str] = None
    dims: int = 0


def array_name(elem: str, dims: int) -> str:
    return f"array({elem})" + "[]" * dims


def split_array(name: str) -> tuple[str, int]:
    """``array(T)[][]`` -> (``T``, 2)."""
    dims = 0
    while name.endswith("[]"):
        name = name[:-2]
        dims += 1
    return name[len("array("):-1], dims


def is_array_name(name: str) -> bool:
    return name.startswith("array(") and name.endswith("[]")


class StepLimitExceeded(Exception):
    pass


class TypeTable:
    """All type descriptors of one program.

    ``resolver`` builds descriptors on first use, which lets the checker
    compute the type of a class lazily and create array types on demand.
    """

    def __init__(self, resolver: Optional[Callable[[str], Optional[TypeDesc]]] = None,
                 step_limit: Optional[int] = None):
        self.descs: dict[str, TypeDesc] = {}
        self.resolver = resolver
        self._eq_cache: dict[tuple, bool] = {}
        self._sub_cache: dict[tuple, bool] = {}
        self.steps = 0
        self.step_limit = step_limit
        for b in BASIC:
            self.descs[b] = TypeDesc(b, "basic")
        self.descs[NIL] = TypeDesc(NIL, "nil")

    def add(self, desc: TypeDesc) -> TypeDesc:
        self.descs[desc.name] = desc
        self._eq_cache.clear()
        self._sub_cache.clear()
        return desc

    def get(self, name: str) -> TypeDesc:
        d = self.descs.get(name)
        if d is None:
            if is_array_name(name):
                elem, dims = split_array(name)
                d = TypeDesc(name, "array", elem=elem, dims=dims)
            elif self.resolver is not None:
                d = self.resolver(name)
            if d is None:
                raise KeyError(f"unknown type {name}")
            self.descs[name] = d
        return d

    def __contains__(self, name: str) -> bool:
        try:
            self.get(name)
            return True
        except KeyError:
            return False

    def _tick(self) -> None:
        self.steps += 1
        if self.step_limit is not None and self.steps > self.step_limit:
            raise StepLimitExceeded(self.steps)

    # ---------------------------------------------------------------- equality

    def equal(self, s: str, t: str) -> bool:
        if s == t:
            return True
        key = (s, t)
        hit = self._eq_cache.get(key)
        if hit is None:
            hit = self._equal(s, t, _Visited())
            self._eq_cache[key] = hit
            self._eq_cache[(t, s)] = hit
        return hit

    def _equal(self, s: str, t: str, ig: "_Visited") -> bool:
        self._tick()
        if s == t:
            return True
        ds, dt = self.get(s), self.get(t)
        if ds.kind in ("basic", "nil") or dt.kind in ("basic", "nil"):
            return False
        if ds.final or dt.final:
            return False
        if ds.kind == "array" or dt.kind == "array":
            if ds.kind != dt.kind or ds.dims != dt.dims:
                return False
            return self._equal(ds.elem, dt.elem, ig)
        if (s, t) in ig:
            return True
        ig.add((s, t))
        return self._covers(ds, dt, ig) and self._covers(dt, ds, ig)

    def _covers(self, ds: TypeDesc, dt: TypeDesc, ig: "_Visited") -> bool:
        """Every signature of ``dt`` has an equal signature in ``ds``."""
        for b in dt.sigs:
            found = False
            for a in ds.sigs:
                if a.name != b.name or len(a.params) != len(b.params) or a.variadic != b.variadic:
                    continue
                mark = ig.mark()
                if self._sig_equal(a, b, ig):
                    found = True
                    break
                ig.reset(mark)
            if not found:
                return False
        return True

    def _sig_equal(self, a: Sig, b: Sig, ig: "_Visited") -> bool:
        self._tick()
        if a.name != b.name or len(a.params) != len(b.params) or a.variadic != b.variadic:
            return False
        if (a.ret is None) != (b.ret is None):
            return False
        for p, q in zip(a.params, b.params):
            if not self._equal(p, q, ig):
                return False
        if a.ret is not None and not self._equal(a.ret, b.ret, ig):
            return False
        return self._equal(a.exc, b.exc, ig)

    def sig_equal(self, a: Sig, b: Sig) -> bool:
        return self._sig_equal(a, b, _Visited())

    # ---------------------------------------------------------------- subtyping

    def subtype(self, s: str, t: str) -> bool:
        """True when a value of type ``s`` may be used where ``t`` is expected."""
        if s == t:
            return True
        key = (s, t)
        hit = self._sub_cache.get(key)
        if hit is None:
            hit = self._subtype(s, t)
            self._sub_cache[key] = hit
        return hit

    def _subtype(self, s: str, t: str) -> bool:
        self._tick()
        ds, dt = self.get(s), self.get(t)
        if ds.kind == "basic" or dt.kind == "basic":
            return False
        if dt.kind == "nil":
            return False
        if ds.kind == "nil":
            return True
        if dt.final:
            return False
        if ds.kind == "array":
            if dt.kind == "array":
                return self.equal(s, t)
            if t in ("AnyArray", "Any", "AnyClass"):
                return True
            if t == "AnyClassArray":
                return self.get(ds.elem).kind not in ("basic",) or ds.dims > 1
            return False
        if dt.kind == "array":
            return False
        return self._covers(ds, dt, _Visited())

    def is_reference(self, name: str) -> bool:
        return self.get(name).kind != "basic"


class _Visited:
    """The visited-pair set with cheap rollback for failed candidate matches."""

    __slots__ = ("pairs", "log")

    def __init__(self):
        self.pairs: set = set()
        self.log: list = []

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def add(self, pair) -> None:
        if pair not in self.pairs:
            self.pairs.add(pair)
            self.log.append(pair)

    def mark(self) -> int:
        return len(self.log)

    def reset(self, mark: int) -> None:
        while len(self.log) > mark:
            self.pairs.discard(self.log.pop())


def type_equal(table: TypeTable, s: str, t: str) -> bool:
    return table.equal(s, t)


def is_subtype(table: TypeTable, s: str, t: str) -> bool:
    return table.subtype(s, t)


def signature_equal(table: TypeTable, a: Sig, b: Sig) -> bool:
    return table.sig_equal(a, b)
