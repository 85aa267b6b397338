"""Random generators shared by the property tests and the acceptance suite."""

from __future__ import annotations

import random
from dataclasses import dataclass

from green.typesys import DEFAULT_EXC, Sig, TypeDesc, TypeTable

# ------------------------------------------------------------ type tables

METHOD_NAMES = ("m", "n", "p")
LEAF_TYPES = ("integer", "boolean")


@dataclass
class RandomTable:
    table: TypeTable
    names: list[str]
    parent: dict  # class name -> superclass name or None

    def is_subclass(self, s: str, t: str) -> bool:
        while s is not None:
            if s == t:
                return True
            s = self.parent[s]
        return False


def random_table(rng: random.Random, max_types: int = 12, step_limit=None) -> RandomTable:
    """Up to ``max_types`` class types whose signatures refer to each other freely.

    Each class may inherit from an earlier one, in which case it keeps all
    the parent's signatures and may add some. Duplicated class bodies are
    planted on purpose so that equal but differently named types occur.
    """
    n = rng.randint(1, max_types)
    names = [f"T{i}" for i in range(n)]
    refs = names + list(LEAF_TYPES)
    parent: dict = {}
    own: dict = {}

    def fresh_sigs(k):
        out = []
        for _ in range(k):
            arity = rng.randint(0, 2)
            params = tuple(rng.choice(refs) for _ in range(arity))
            ret = rng.choice(refs + [None])
            exc = DEFAULT_EXC if rng.random() < 0.8 else rng.choice(names)
            out.append(Sig(rng.choice(METHOD_NAMES), params, exc, ret))
        return out

    for i, name in enumerate(names):
        parent[name] = rng.choice(names[:i]) if i and rng.random() < 0.4 else None
        if i and rng.random() < 0.25:
            # clone another body with type names permuted, a source of equal types
            src = rng.choice(names[:i])
            own[name] = list(own[src])
            parent[name] = parent[src]
        else:
            own[name] = fresh_sigs(rng.randint(0, 3))

    def all_sigs(name):
        sigs = list(own[name])
        p = parent[name]
        if p is not None:
            sigs = list(all_sigs(p)) + sigs
        return tuple(dict.fromkeys(sigs))

    tt = TypeTable(step_limit=step_limit)
    tt.add(TypeDesc(DEFAULT_EXC, "class", ()))
    for name in names:
        tt.add(TypeDesc(name, "class", all_sigs(name)))
    return RandomTable(tt, names, parent)


def unrolled_relation(tt: TypeTable, names: list[str], depth: int) -> set:
    """Pairs of ``names`` that stay equal when unrolled ``depth`` levels deep.

    Level 0 relates every pair of class types; each further level keeps a
    pair when every signature of one side has a signature on the other side
    whose component types were related at the level before.
    """
    universe = list(names) + [DEFAULT_EXC]
    rel = {(a, b) for a in universe for b in universe}

    def sig_eq(a, b, prev):
        if a.name != b.name or len(a.params) != len(b.params) or a.variadic != b.variadic:
            return False
        if (a.ret is None) != (b.ret is None):
            return False
        pairs = list(zip(a.params, b.params)) + [(a.exc, b.exc)]
        if a.ret is not None:
            pairs.append((a.ret, b.ret))
        return all(p == q or (p, q) in prev for p, q in pairs)

    def covers(x, y, prev):
        return all(any(sig_eq(a, b, prev) for a in x.sigs) for b in y.sigs)

    for _ in range(depth):
        prev = rel
        rel = {(a, b) for (a, b) in prev
               if covers(tt.get(a), tt.get(b), prev) and covers(tt.get(b), tt.get(a), prev)}
    return rel


def unrolled_equal(tt: TypeTable, s: str, t: str, depth: int, names=None) -> bool:
    if names is None:
        names = [n for n, d in tt.descs.items() if d.kind == "class" and n != DEFAULT_EXC]
    return s == t or (s, t) in unrolled_relation(tt, names, depth)


# ------------------------------------------------------------ programs

EXC_DECLS = """class GenException subclassOf Exception
    proc init( c : integer )
      begin
      code = c;
      end
  public:
    proc getCode() : integer
      begin
      return code;
      end
  private:
    var code : integer;
end

class OtherException subclassOf Exception
    proc init() begin end
  public:
    proc other() begin end
end

class CatchGen subclassOf CatchUncheckedException
    proc init() begin end
  public:
    proc throw( e : GenException )
      begin
      Out.writeln("caught ", e.getCode());
      end
end

class CatchOther subclassOf CatchUncheckedException
    proc init() begin end
  public:
    proc throw( e : OtherException ) begin end
end
"""


@dataclass
class GMethod:
    name: str
    index: int  # calls only go to methods with a smaller index on self
    throws: bool = False
    body: list = None


@dataclass
class GClass:
    name: str
    index: int
    parent: "GClass | None"
    own: list  # GMethod declared here, overriding or new
    other: "GClass | None" = None  # static type of the field "other"
    other_dyn: "GClass | None" = None  # class created for it in init
    twin_of: "GClass | None" = None

    def methods(self) -> dict:
        """Public interface, name -> the GMethod that implements it."""
        out = dict(self.parent.methods()) if self.parent else {}
        for m in self.own:
            out[m.name] = m
        return out

    def is_subclass_of(self, other: "GClass") -> bool:
        c = self
        while c is not None:
            if c is other:
                return True
            c = c.parent
        return False


@dataclass
class GProgram:
    classes: list
    main: list  # statements of Main.run
    locals: list  # (name, type) of Main.run
    extra: str = ""  # declarations appended by mutations

    def render(self) -> str:
        parts = [EXC_DECLS]
        for c in self.classes:
            parts.append(_render_class(c))
        parts.append(self.extra)
        loc = ""
        if self.locals:
            loc = "      var " + "\n          ".join(f"{n} : {t};" for n, t in self.locals) + "\n"
        parts.append("object Main\n  public:\n"
                     "    proc use( p : C0 ) : integer\n      begin\n      return p.m0(1);\n      end\n"
                     f"    proc run()\n{loc}      begin\n" + "".join(f"      {s}\n" for s in self.main) +
                     "      end\nend\n")
        return "\n".join(parts)


def _render_method(m: GMethod) -> str:
    exc = " ( exception : CatchGen )" if m.throws else ""
    body = "".join(f"      {s}\n" for s in m.body)
    return f"    proc {m.name}( x : integer ){exc} : integer\n      begin\n{body}      end\n"


def _render_class(c: GClass) -> str:
    head = f"class {c.name}" + (f" subclassOf {c.parent.name}" if c.parent else "") + "\n"
    init = "    proc init()\n      begin\n"
    if c.parent:
        init += "      super.init();\n"
    init += f"      v{c.index} = {c.index + 1};\n"
    if c.other is not None:
        init += f"      other = {c.other_dyn.name}.new();\n"
    init += "      end\n"
    out = [head, init, "  public:\n", *(_render_method(m) for m in c.own), "  private:\n",
           f"    var v{c.index} : integer;\n"]
    if c.other is not None:
        out.append(f"        other : {c.other.name};\n")
    out.append("end\n")
    return "".join(out)


class ProgramGen:
    """Random well-typed programs over a small class hierarchy.

    Termination is guaranteed by construction: a method only calls methods
    with a smaller index on ``self``, and calls on the field ``other``
    always reach an object of a class created earlier.
    """

    def __init__(self, rng: random.Random):
        self.rng = rng

    def expr(self, c: GClass, m_index: int, iface: dict, depth: int = 0) -> str:
        rng = self.rng
        leaves = ["x", f"v{c.index}", str(rng.randint(0, 9))]
        if depth < 2 and rng.random() < 0.5:
            op = rng.choice(["+", "-", "*"])
            return f"({self.expr(c, m_index, iface, depth + 1)} {op} {self.expr(c, m_index, iface, depth + 1)})"
        if depth < 2 and rng.random() < 0.35:
            lower = [m for m in iface.values() if m.index < m_index and not m.throws]
            targets = []
            if lower:
                targets.append("self")
            if c.other is not None:
                targets.append("other")
            if targets:
                t = rng.choice(targets)
                if t == "self":
                    return f"{rng.choice(lower).name}({self.expr(c, m_index, iface, depth + 1)})"
                om = [m for m in c.other.methods().values() if not m.throws]
                if om:
                    return f"other.{rng.choice(om).name}({self.expr(c, m_index, iface, depth + 1)})"
        return rng.choice(leaves)

    def body(self, c: GClass, m: GMethod, iface: dict) -> list:
        rng = self.rng
        out = []
        if m.throws:
            out += [f"if x > {rng.randint(2, 6)}", "then", "  exception.throw(GenException.new(x));", "endif"]
        if rng.random() < 0.3:
            out += [f"if x < {rng.randint(0, 5)}", "then", f"  return {self.expr(c, m.index, iface)};", "endif"]
        out.append(f"return {self.expr(c, m.index, iface)};")
        return out

    def program(self) -> GProgram:
        rng = self.rng
        classes: list[GClass] = []
        n = rng.randint(2, 6)
        next_m = 0
        for i in range(n):
            parent = rng.choice(classes) if classes and rng.random() < 0.6 else None
            if i == 0:
                parent = None
            c = GClass(f"C{i}", i, parent, [])
            inherited = parent.methods() if parent else {}
            for name, m in inherited.items():
                if rng.random() < 0.4:
                    c.own.append(GMethod(name, m.index, m.throws))
            k = 1 + rng.randint(0, 2) if i else 2
            for _ in range(k):
                c.own.append(GMethod(f"m{next_m}", next_m, rng.random() < 0.2 and next_m > 0))
                next_m += 1
            if classes and rng.random() < 0.5:
                c.other = rng.choice(classes)
                subs = [d for d in classes if d.is_subclass_of(c.other)]
                c.other_dyn = rng.choice(subs)
            classes.append(c)
        # structural twins: same public interface, no subclass link
        for c in list(classes):
            if rng.random() < 0.3:
                i = len(classes)
                t = GClass(f"C{i}", i, None, [GMethod(m.name, m.index, m.throws)
                                              for m in c.methods().values()], twin_of=c)
                classes.append(t)
        for c in classes:
            iface = c.methods()
            for m in c.own:
                m.body = self.body(c, m, iface)
        return GProgram(classes, *self.main(classes))

    def main(self, classes: list):
        rng = self.rng
        stmts, locs = [], []
        for c in classes:
            sups = [d for d in classes if _iface_keys(c) >= _iface_keys(d) and d is not c
                    and _same_sigs(c, d)]
            st = rng.choice([c] + sups)
            v = f"o{c.index}"
            locs.append((v, st.name))
            stmts.append(f"{v} = {c.name}.new();")
            for m in sorted(st.methods().values(), key=lambda m: m.index):
                call = f"{v}.{m.name}({rng.randint(0, 9)})"
                if m.throws:
                    stmts += ["try(CatchGen.new())", f"  Out.writeln({call});", "end"]
                else:
                    stmts.append(f"Out.writeln({call});")
        c0 = [c for c in classes if _iface_keys(c) >= _iface_keys(classes[0]) and _same_sigs(c, classes[0])]
        locs.append(("arr", "array(C0)[]"))
        locs.append(("i", "integer"))
        stmts.append(f"arr#init({len(c0)});")
        for k, c in enumerate(c0):
            stmts.append(f"arr[{k}] = {c.name}.new();")
        stmts += [f"for i = 0 to {len(c0) - 1} do", "  Out.writeln(use(arr[i]));"]
        return stmts, locs


def _iface_keys(c: GClass) -> set:
    return set(c.methods())


def _same_sigs(c: GClass, d: GClass) -> bool:
    """All generated methods share one signature shape apart from the exception clause."""
    cm, dm = c.methods(), d.methods()
    return all(cm[n].throws == dm[n].throws for n in dm)


MUTATIONS = ("assign_direction", "missing_method", "array_covariance", "exception_signature")


def strict_pair(prog: GProgram, rng: random.Random):
    """A (sub, sup) pair where sub is a strict subtype of sup."""
    pairs = [(c, d) for c in prog.classes for d in prog.classes
             if c is not d and _iface_keys(c) > _iface_keys(d) and _same_sigs(c, d)]
    return rng.choice(pairs) if pairs else None


def mutate(prog: GProgram, kind: str, rng: random.Random) -> GProgram:
    """Return a copy of ``prog`` with one type error of the given class."""
    import copy
    p = copy.deepcopy(prog)
    pair = strict_pair(p, rng)
    if pair is None:
        # give C0 a strict subclass so every mutation class has a target
        base = p.classes[0]
        n = len(p.classes)
        extra = GClass(f"C{n}", n, base, [GMethod(f"m{1000 + n}", 1000 + n, False, ["return x;"])])
        p.classes.append(extra)
        pair = (extra, base)
    sub, sup = pair
    if kind == "assign_direction":
        p.locals += [("mutA", sup.name), ("mutB", sub.name)]
        p.main += [f"mutA = {sub.name}.new();", "mutB = mutA;"]
    elif kind == "missing_method":
        extra = sorted(_iface_keys(sub) - _iface_keys(sup))
        p.locals.append(("mutA", sup.name))
        p.main += [f"mutA = {sub.name}.new();", f"Out.writeln(mutA.{rng.choice(extra)}(1));"]
    elif kind == "array_covariance":
        p.locals += [("mutA", f"array({sup.name})[]"), ("mutB", f"array({sub.name})[]")]
        p.main += ["mutB#init(1);", "mutA = mutB;"]
    elif kind == "exception_signature":
        throwers = [(c, m) for c in p.classes for m in c.methods().values() if m.throws]
        n = len(p.classes)
        if throwers and rng.random() < 0.5:
            owner, m = rng.choice(throwers)
            # a redefinition that drops the exception clause
            over = GMethod(m.name, m.index, False, ["return x;"])
        else:
            owner, m = rng.choice([(c, m) for c in p.classes for m in c.methods().values()])
            # a redefinition that adds one
            over = GMethod(m.name, m.index, not m.throws, ["return x;"])
        p.classes.append(GClass(f"C{n}", n, owner, [over]))
    else:
        raise ValueError(kind)
    return p


# ------------------------------------------------------------ loops

def _loop_stmt(rng: random.Random, depth: int = 0) -> list:
    v = rng.choice("abc")
    r = rng.random()
    if r < 0.45:
        op = rng.choice(["+", "-", "*"])
        return [f"{v} = ({rng.choice('abck')} {op} {rng.randint(1, 5)}) % 97;"]
    if r < 0.7:
        return [f'Out.write({rng.choice("abck")}, " ");']
    if depth < 2:
        return ([f"if {v} > {rng.randint(0, 50)}", "then"] + ["  " + s for s in _loop_block(rng, depth + 1)]
                + ["else"] + ["  " + s for s in _loop_block(rng, depth + 1)] + ["endif"])
    return [f"++{v};"]


def _loop_block(rng: random.Random, depth: int = 0) -> list:
    out = []
    for _ in range(rng.randint(1, 3)):
        out += _loop_stmt(rng, depth)
    return out


def _loop_cond(rng: random.Random) -> str:
    v = rng.choice("abc")
    return f"k >= {rng.randint(1, 12)} or {v} {rng.choice(['<', '>', '==', '<>'])} {rng.randint(0, 60)}"


def _loop_program(body: list) -> str:
    lines = "".join(f"      {s}\n" for s in body)
    return ("object Main\n  public:\n    proc go()\n      var a, b, c, k : integer;\n      begin\n"
            "      a = 3; b = 7; c = 11;\n" + lines +
            '      Out.writeln();\n      Out.writeln(a, " ", b, " ", c, " ", k);\n      end\n'
            "    proc run()\n      begin\n      go();\n      end\nend\n")


def loop_pair(rng: random.Random, kind: str) -> tuple[str, str]:
    """Two programs that must behave identically.

    ``repeat``: ``repeat S until e`` against ``S; while not (e) do S``.
    ``loop``: ``loop S1 if e then break S2 end`` against the same body in
    ``while true`` that leaves the procedure with ``return``.
    """
    cond = _loop_cond(rng)
    s = ["++k;"] + _loop_block(rng)
    if kind == "repeat":
        a = ["repeat", *("  " + x for x in s), f"until {cond};"]
        b = [*s, f"while not ({cond}) do", "  begin", *("  " + x for x in s), "  end"]
        return _loop_program(a), _loop_program(b)
    s2 = _loop_block(rng)
    a = ["loop", *("  " + x for x in s), f"  if {cond}", "  then", "    break;", "  endif",
         *("  " + x for x in s2), "end"]
    b = ["while true do", "  begin", *("  " + x for x in s), f"  if {cond}", "  then",
         '    Out.writeln();', '    Out.writeln(a, " ", b, " ", c, " ", k);', "    return;", "  endif",
         *("  " + x for x in s2), "  end"]
    return _loop_program(a), _loop_program(b)


# ------------------------------------------------------------ shell and extension stacks

META_DECLS = """class Calc
    proc init() begin end
  public:
    proc val() : integer
      begin
      return 1;
      end
end
""" + "".join(f"""
shell class S{i}(Calc)
  public:
    proc val() : integer
      begin
      return super.val() * 10 + {i};
      end
end

shell class E{i}(Calc)
    proc init() begin end
  public:
    proc val() : integer
      begin
      return super.val() * 10 + {i + 4};
      end
end
""" for i in (1, 2, 3))


def meta_sequence(rng: random.Random, length: int = 12) -> tuple[str, str]:
    """A program doing random attach/remove steps and the output a stack model predicts.

    Shells go on one object; extensions go on class Calc and are seen by a
    second object. Removing from an empty stack must throw NoShellException
    or NoExtensionException and nothing else.
    """
    shells, exts = [], []
    body, expect = [], []

    def value(stack, base=1):
        v = base
        for d in stack:
            v = v * 10 + d
        return v

    for _ in range(length):
        op = rng.choice(["attachShell", "removeShell", "attachExtension", "removeExtension"])
        i = rng.randint(1, 3)
        body.append("catch = CatchMetaException.new();")
        if op == "attachShell":
            body += ["try(catch)", f"  Meta.attachShell(s, S{i}.new());", "end"]
            shells.append(i)
            thrown = "nil"
        elif op == "removeShell":
            body += ["try(catch)", "  Meta.removeShell(s);", "end"]
            thrown = "NoShell" if not shells else "nil"
            if shells:
                shells.pop()
        elif op == "attachExtension":
            body += ["try(catch)", f"  Meta.attachExtension(Calc, E{i});", "end"]
            exts.append(i + 4)
            thrown = "nil"
        else:
            body += ["try(catch)", "  Meta.removeExtension(Calc);", "end"]
            thrown = "NoExtension" if not exts else "nil"
            if exts:
                exts.pop()
        body += ["report(catch);", 'Out.writeln(" ", s.val(), " ", e.val());']
        expect.append(f"{thrown} {value(exts + shells)} {value(exts)}")
    lines = "".join(f"      {x}\n" for x in body)
    src = META_DECLS + """
object Main
  public:
    proc report( catch : CatchMetaException )
      begin
      if catch.getException() == nil
      then
        Out.write("nil");
      else
        if catch.getClassException() == NoShellException
        then
          Out.write("NoShell");
        else
          if catch.getClassException() == NoExtensionException
          then
            Out.write("NoExtension");
          else
            Out.write("other");
          endif
        endif
      endif
      end
    proc run()
      var s, e : Calc;
          catch : CatchMetaException;
      begin
      s = Calc.new();
      e = Calc.new();
""" + lines + "      end\nend\n"
    return src, "".join(x + "\n" for x in expect)
