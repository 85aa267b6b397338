"""Canonical source printer for the AST. Output re-parses to an equal tree."""

from __future__ import annotations

from . import nodes as N

# binding strength, higher binds tighter
PREC = {
    "=": 1, "or": 2, "xor": 3, "and": 4,
    "==": 5, "<>": 5, "<": 5, "<=": 5, ">": 5, ">=": 5,
    "+": 6, "-": 6, "*": 7, "/": 7, "%": 7,
    "|": 8, "^": 9, "&": 10, "<<": 11, ">>": 11,
}
UNARY_PREC = 12
POSTFIX_PREC = 13
NONASSOC = {"==", "<>", "<", "<=", ">", ">=", "<<", ">>"}

ESC = {"\n": "\\n", "\t": "\\t", "\r": "\\r", "\0": "\\0", "\\": "\\\\"}


def quote(s: str, q: str) -> str:
    out = []
    for c in s:
        if c in ESC:
            out.append(ESC[c])
        elif c == q:
            out.append("\\" + c)
        elif ord(c) < 32 or ord(c) == 127:
            out.append(f"\\x{ord(c):02x}")
        else:
            out.append(c)
    return q + "".join(out) + q


def type_str(t: N.TypeExpr) -> str:
    at = "@" if t.expanded else ""
    if t.kind == "array":
        dims = "".join(f"[{'' if d is None else d}]" for d in t.dims)
        return f"{at}array({type_str(t.elem)}){dims}"
    if t.kind == "classobj":
        return f"{at}type({t.name})"
    return at + t.name


def literal_str(e: N.Literal) -> str:
    k, v = e.kind, e.value
    if k == "string":
        return quote(v, '"')
    if k == "char":
        return quote(v, "'")
    if k == "boolean":
        return "true" if v else "false"
    if k == "byte":
        return f"{v}b"
    if k == "long":
        return f"{v}L"
    if k == "real":
        return f"{float(v)!r}r".replace("inf", "1.0E39")
    if k == "double":
        return f"{float(v)!r}d"
    return str(v)


def expr_str(e: N.Expr, ctx: int = 0) -> str:
    s, p = _expr(e)
    return f"({s})" if p < ctx else s


def _expr(e: N.Expr) -> tuple[str, int]:
    if isinstance(e, N.Literal):
        s = literal_str(e)
        # a negative literal only arises from constant folding; keep it atomic
        return (f"({s})" if s.startswith("-") else s), POSTFIX_PREC
    if isinstance(e, N.Name):
        return e.id, POSTFIX_PREC
    if isinstance(e, N.SelfExpr):
        return "self", POSTFIX_PREC
    if isinstance(e, N.SuperExpr):
        return "super", POSTFIX_PREC
    if isinstance(e, N.NilExpr):
        return "nil", POSTFIX_PREC
    if isinstance(e, N.ResultExpr):
        return "result", POSTFIX_PREC
    if isinstance(e, N.ExceptionExpr):
        return "exception", POSTFIX_PREC
    if isinstance(e, N.TypeValue):
        return type_str(e.type), POSTFIX_PREC
    if isinstance(e, (N.Box, N.Unbox)):
        return _expr(e.expr)
    if isinstance(e, N.ArrayInit):
        return "#(" + ", ".join(expr_str(x, PREC["or"]) for x in e.elements) + ")", POSTFIX_PREC
    if isinstance(e, N.Index):
        return f"{expr_str(e.obj, POSTFIX_PREC)}[{expr_str(e.index)}]", POSTFIX_PREC
    if isinstance(e, N.Send):
        args = "" if e.args is None else "(" + ", ".join(expr_str(a) for a in e.args) + ")"
        if e.receiver is None:
            return f"{e.name}{args}", POSTFIX_PREC
        return f"{expr_str(e.receiver, POSTFIX_PREC)}.{e.name}{args}", POSTFIX_PREC
    if isinstance(e, N.Unary):
        op = e.op
        inner = expr_str(e.operand, UNARY_PREC)
        if op == "not":
            return f"not {inner}", UNARY_PREC
        # keep "- -x" and "+ +x" from lexing as ++ or --
        sep = " " if inner[:1] in "+-" else ""
        return f"{op}{sep}{inner}", UNARY_PREC
    if isinstance(e, N.Binary):
        p = PREC[e.op]
        right_ctx = p + 1
        left_ctx = p + 1 if e.op in NONASSOC else p
        return f"{expr_str(e.left, left_ctx)} {e.op} {expr_str(e.right, right_ctx)}", p
    if isinstance(e, N.Assign):
        return f"{expr_str(e.target, POSTFIX_PREC)} = {expr_str(e.value, 1)}", 1
    raise TypeError(f"cannot print {type(e).__name__}")


class Printer:
    def __init__(self):
        self.lines: list[str] = []
        self.depth = 0

    def w(self, text: str) -> None:
        self.lines.append("  " * self.depth + text)

    def program(self, prog: N.Program) -> str:
        for d in prog.decls:
            if isinstance(d, N.ObjectDecl):
                self.object_decl(d)
            else:
                self.class_decl(d)
            self.lines.append("")
        return "\n".join(self.lines)

    def class_decl(self, d: N.ClassDecl) -> None:
        if d.is_shell:
            head = f"shell class {d.name}({type_str(d.shell_base)})"
        else:
            head = ("abstract " if d.abstract else "") + ("reflective " if d.reflective else "")
            head += f"class {d.name}"
        if d.superclass:
            head += f" subclassOf {d.superclass}"
        self.w(head)
        self.depth += 1
        for m in d.inits:
            self.method(m)
        if d.public:
            self.section("public", d.public)
        if d.subclass is not None:
            self.section("subclass", d.subclass)
        if d.private:
            self.section("private", d.private)
        self.depth -= 1
        self.w("end")

    def section(self, name: str, members: list) -> None:
        self.w(f"{name}:")
        self.depth += 1
        for m in members:
            self.member(m)
        self.depth -= 1

    def member(self, m) -> None:
        if isinstance(m, N.MethodDecl):
            self.method(m)
        elif isinstance(m, N.VarGroup):
            init = f" = {expr_str(m.init)}" if m.init is not None else ""
            self.w(f"var {', '.join(m.names)} : {type_str(m.type)}{init};")
        elif isinstance(m, N.ConstDecl):
            items = []
            for name, ty, val in m.items:
                t = f" : {type_str(ty)}" if ty else ""
                items.append(f"{name}{t} = {expr_str(val, PREC['or'])}")
            self.w("const " + ", ".join(items) + ";")
        elif isinstance(m, N.EnumDecl):
            items = [n if v is None else f"{n} = {expr_str(v, PREC['or'])}" for n, v in m.items]
            self.w("enum(" + ", ".join(items) + ");")

    def object_decl(self, d: N.ObjectDecl) -> None:
        self.w(f"object {d.name}")
        self.depth += 1
        if d.init:
            self.method(d.init)
        if d.public:
            self.section("public", d.public)
        if d.private:
            self.section("private", d.private)
        self.depth -= 1
        self.w("end")

    def method(self, m: N.MethodDecl) -> None:
        params = []
        for p in m.params:
            params.append(f"{p.name} : {'... ' if p.variadic else ''}{type_str(p.type)}")
        head = ("abstract " if m.abstract else "") + f"proc {m.name}(" + "; ".join(params) + ")"
        if m.exc_type:
            head += f" (exception : {type_str(m.exc_type)})"
        if m.ret_type:
            head += f" : {type_str(m.ret_type)}"
        self.w(head)
        if m.abstract:
            return
        self.depth += 1
        if m.assert_clause:
            a = m.assert_clause
            self.w("assert")
            self.depth += 1
            if a.before is not None:
                self.w(f"before {expr_str(a.before, PREC['or'])};")
            for v in a.vars:
                self.stat(v)
            if a.after is not None:
                self.w(f"after {expr_str(a.after, PREC['or'])};")
            self.depth -= 1
            self.w("end")
        for g in m.locals:
            self.w(f"var {', '.join(g.names)} : {type_str(g.type)};")
        if m.native:
            self.w(";")
        else:
            self.w("begin")
            self.block(m.body)
            self.w("end")
        self.depth -= 1

    def block(self, stats: list) -> None:
        self.depth += 1
        for s in stats:
            self.stat(s)
        self.depth -= 1

    def body(self, stats: list) -> None:
        self.w("begin")
        self.block(stats)
        self.w("end")

    def stat(self, s: N.Stat) -> None:
        if isinstance(s, N.ExprStat):
            self.w(expr_str(s.expr) + ";")
        elif isinstance(s, N.InitStat):
            self.w(f"{expr_str(s.target, POSTFIX_PREC)}#init({', '.join(expr_str(a) for a in s.args)});")
        elif isinstance(s, N.Empty):
            self.w(";")
        elif isinstance(s, N.Return):
            self.w("return;" if s.value is None else f"return {expr_str(s.value)};")
        elif isinstance(s, N.Break):
            self.w("break;")
        elif isinstance(s, N.VarDecl):
            init = f" = {expr_str(s.init)}" if s.init is not None else ""
            self.w(f"var {s.name} : {type_str(s.type)}{init};")
        elif isinstance(s, N.If):
            self.w(f"if {expr_str(s.cond, PREC['or'])}")
            self.w("then")
            self.block(s.then)
            if s.orelse is not None:
                self.w("else")
                self.block(s.orelse)
            self.w("endif")
        elif isinstance(s, N.While):
            self.w(f"while {expr_str(s.cond)} do")
            self.body(s.body)
        elif isinstance(s, N.Repeat):
            self.w("repeat")
            self.block(s.body)
            self.w(f"until {expr_str(s.cond)};")
        elif isinstance(s, N.Loop):
            self.w("loop")
            self.block(s.body)
            self.w("end")
        elif isinstance(s, N.For):
            vt = f" : {type_str(s.vartype)}" if s.vartype else ""
            self.w(f"for {s.var}{vt} = {expr_str(s.start, PREC['or'])} to {expr_str(s.stop, PREC['or'])} do")
            self.body(s.body)
        elif isinstance(s, N.Case):
            self.w(f"case {expr_str(s.expr)} of")
            self.depth += 1
            for b in s.branches:
                self.w(", ".join(label_str(x) for x in b.labels) + " :")
                self.body(b.body)
            if s.otherwise is not None:
                self.w("otherwise")
                self.body(s.otherwise)
            self.depth -= 1
            self.w("end")
        elif isinstance(s, N.Try):
            self.w(f"try({expr_str(s.catch)})")
            self.block(s.body)
            self.w("end")
        else:
            raise TypeError(f"cannot print {type(s).__name__}")


def label_str(e: N.Expr) -> str:
    if isinstance(e, N.Unary):
        return "-" + literal_str(e.operand)
    if isinstance(e, N.Literal):
        return literal_str(e)
    return expr_str(e)


def print_program(prog: N.Program) -> str:
    return Printer().program(prog)
