"""Recursive-descent parser for Green.

Expression precedence, loosest first: assignment (right associative),
``or``, ``xor``, ``and``, comparisons (non-associative), additive,
multiplicative, ``|``, ``^``, ``&``, shifts (non-associative), unary,
postfix.
"""

from __future__ import annotations

from . import nodes as N
from .diagnostics import Diagnostic, GreenCompileError, Span
from .lexer import BASIC_TYPES, LexError, Token, tokenize

RELATIONS = ("==", "<>", "<", "<=", ">", ">=")
UNARY_OPS = ("~", "+", "-", "++", "--")


class ParseError(Exception):
    def __init__(self, span: Span, message: str, code: str = "P001"):
        self.span = span
        self.message = message
        self.code = code
        super().__init__(message)


class Parser:
    def __init__(self, tokens: list[Token], file: str = "<input>", prelude: bool = False):
        self.toks = tokens
        self.i = 0
        self.file = file
        self.prelude = prelude
        self.diagnostics: list[Diagnostic] = []
        last = tokens[-1].span if tokens else Span(0, 0, 1, 1)
        self.eof = Token("eof", "<end of file>", Span(last.offset + last.length, 0, last.line, last.col + last.length))

    # ------------------------------------------------------------ helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i] if self.i < len(self.toks) else self.eof

    def peek(self, k: int = 1) -> Token:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else self.eof

    def next(self) -> Token:
        t = self.tok
        if self.i < len(self.toks):
            self.i += 1
        return t

    def at_op(self, *ops) -> bool:
        return self.tok.is_op(*ops)

    def at_kw(self, *words) -> bool:
        return self.tok.is_kw(*words)

    def fail(self, expected: str, code: str = "P001"):
        t = self.tok
        raise ParseError(t.span, f"expected {expected}, found '{t.lexeme}'", code)

    def expect_op(self, op: str) -> Token:
        if not self.at_op(op):
            self.fail(f"'{op}'")
        return self.next()

    def expect_kw(self, *words: str) -> Token:
        if not self.at_kw(*words):
            self.fail(" or ".join(f"'{w}'" for w in words))
        return self.next()

    def expect_id(self) -> Token:
        if self.tok.kind != "id":
            self.fail("identifier")
        return self.next()

    def accept_op(self, op: str) -> bool:
        if self.at_op(op):
            self.next()
            return True
        return False

    def accept_kw(self, word: str) -> bool:
        if self.at_kw(word):
            self.next()
            return True
        return False

    def error(self, err: ParseError) -> None:
        self.diagnostics.append(Diagnostic("error", err.span, err.code, err.message, "parse", self.file))

    def skip_semis(self) -> None:
        while self.at_op(";"):
            self.next()

    # ------------------------------------------------------------ program

    def parse_program(self) -> N.Program:
        decls = []
        start = self.tok.span
        while self.tok.kind != "eof":
            try:
                self.skip_semis()
                if self.tok.kind == "eof":
                    break
                decls.append(self.declaration())
            except ParseError as err:
                self.error(err)
                self.recover_declaration()
        if not decls and not self.diagnostics:
            self.error(ParseError(start, "a program needs at least one declaration"))
        return N.Program(decls, start)

    def recover_declaration(self) -> None:
        depth = 0
        while self.tok.kind != "eof":
            if depth == 0 and self.at_kw("class", "object", "shell", "abstract", "reflective") \
                    and self.i > 0 and self.toks[self.i - 1].is_kw("end"):
                return
            self.next()

    def declaration(self):
        if self.at_kw("object"):
            return self.object_decl()
        if self.at_kw("shell"):
            return self.shell_decl()
        if self.at_kw("abstract", "reflective", "class"):
            return self.class_decl()
        self.fail("'class', 'object' or 'shell'")

    def class_decl(self) -> N.ClassDecl:
        span = self.tok.span
        abstract = self.accept_kw("abstract")
        reflective = self.accept_kw("reflective")
        self.expect_kw("class")
        name = self.expect_id().lexeme
        if self.at_op("("):
            raise ParseError(self.tok.span, "parameterized classes are not supported", "P010")
        sup = None
        if self.accept_kw("subclassOf"):
            sup = self.expect_id().lexeme
            if self.at_op("("):
                raise ParseError(self.tok.span, "parameterized classes are not supported", "P010")
        decl = N.ClassDecl(name, sup, abstract, reflective, span=span)
        self.class_body(decl)
        return decl

    def shell_decl(self) -> N.ClassDecl:
        span = self.tok.span
        self.expect_kw("shell")
        self.expect_kw("class")
        name = self.expect_id().lexeme
        self.expect_op("(")
        base = self.class_type()
        self.expect_op(")")
        sup = None
        if self.accept_kw("subclassOf"):
            sup = self.expect_id().lexeme
        decl = N.ClassDecl(name, sup, shell_base=base, span=span)
        self.class_body(decl)
        return decl

    def class_body(self, decl: N.ClassDecl) -> None:
        while self.at_kw("proc", "abstract") or self.at_op(";"):
            if self.accept_op(";"):
                continue
            decl.inits.append(self.method_decl())
        if self.accept_kw("public"):
            self.expect_op(":")
            decl.public = self.method_list()
        if self.accept_kw("subclass"):
            self.expect_op(":")
            decl.subclass = self.method_list()
        if self.accept_kw("private"):
            self.expect_op(":")
            while True:
                self.skip_semis()
                if self.at_kw("var"):
                    decl.private.extend(self.inst_var_decls(allow_init=False))
                elif self.at_kw("proc", "abstract"):
                    decl.private.append(self.method_decl())
                else:
                    break
        if self.at_kw("subclass"):
            raise ParseError(self.tok.span, "at most one subclass section is allowed, before the private section", "P011")
        if self.at_kw("public"):
            raise ParseError(self.tok.span, "sections must appear in the order init, public, subclass, private", "P011")
        self.expect_kw("end")

    def method_list(self) -> list:
        out = []
        while True:
            self.skip_semis()
            if self.at_kw("proc", "abstract"):
                out.append(self.method_decl())
            else:
                return out

    def object_decl(self) -> N.ObjectDecl:
        span = self.tok.span
        self.expect_kw("object")
        if self.prelude and self.tok.kind == "kw" and self.tok.lexeme in BASIC_TYPES:
            name = self.next().lexeme
        else:
            name = self.expect_id().lexeme
        decl = N.ObjectDecl(name, span=span)
        self.skip_semis()
        if self.at_kw("proc"):
            decl.init = self.method_decl()
            self.skip_semis()
        if self.accept_kw("public"):
            self.expect_op(":")
            decl.public = self.object_members(private=False)
        if self.accept_kw("private"):
            self.expect_op(":")
            decl.private = self.object_members(private=True)
        self.expect_kw("end")
        return decl

    def object_members(self, private: bool) -> list:
        out = []
        while True:
            self.skip_semis()
            if self.at_kw("proc", "abstract"):
                out.append(self.method_decl())
            elif self.at_kw("const"):
                out.append(self.const_decl())
            elif self.at_kw("enum"):
                out.append(self.enum_decl())
            elif private and self.at_kw("var"):
                out.extend(self.inst_var_decls(allow_init=True))
            else:
                return out

    def const_decl(self) -> N.ConstDecl:
        span = self.expect_kw("const").span
        items = []
        while True:
            name = self.expect_id().lexeme
            ty = None
            if self.accept_op(":"):
                ty = self.type_ext()
            self.expect_op("=")
            items.append((name, ty, self.or_expr()))
            if not self.accept_op(","):
                break
        self.expect_op(";")
        return N.ConstDecl(items, span)

    def enum_decl(self) -> N.EnumDecl:
        span = self.expect_kw("enum").span
        self.expect_op("(")
        items = []
        while True:
            name = self.expect_id().lexeme
            val = self.or_expr() if self.accept_op("=") else None
            items.append((name, val))
            if not self.accept_op(","):
                break
        self.expect_op(")")
        self.accept_op(";")
        return N.EnumDecl(items, span)

    def inst_var_decls(self, allow_init: bool) -> list:
        self.expect_kw("var")
        out = []
        while self.tok.kind == "id":
            span = self.tok.span
            names = [self.expect_id().lexeme]
            while self.accept_op(","):
                names.append(self.expect_id().lexeme)
            self.expect_op(":")
            ty = self.type_ext()
            init = None
            if allow_init and self.accept_op("="):
                init = self.array_init_or_expr()
            self.expect_op(";")
            out.append(N.VarGroup(names, ty, init, span))
        if not out:
            self.fail("variable declaration")
        return out

    # ------------------------------------------------------------ methods

    def method_decl(self) -> N.MethodDecl:
        span = self.tok.span
        abstract = self.accept_kw("abstract")
        self.expect_kw("proc")
        name = self.expect_id().lexeme
        self.expect_op("(")
        params = []
        if not self.at_op(")"):
            while True:
                pspan = self.tok.span
                names = [self.expect_id().lexeme]
                while self.accept_op(","):
                    names.append(self.expect_id().lexeme)
                self.expect_op(":")
                variadic = self.accept_op("...")
                ty = self.type_ext()
                for n in names:
                    params.append(N.Param(n, ty, variadic, pspan))
                if not self.accept_op(";"):
                    break
        self.expect_op(")")
        for p in params[:-1]:
            if p.variadic:
                raise ParseError(p.span, "a variable-length parameter must be the last one", "P012")
        exc = None
        if self.at_op("(") and self.peek().is_kw("exception"):
            self.next()
            self.next()
            self.expect_op(":")
            exc = self.class_type()
            self.expect_op(")")
        ret = None
        if self.accept_op(":"):
            ret = self.type_ext()
        m = N.MethodDecl(name, params, exc, ret, abstract, span=span)
        if abstract:
            if self.at_kw("assert", "assertion"):
                m.assert_clause = self.assert_clause()
            self.accept_op(";")
            return m
        if self.at_kw("assert", "assertion"):
            m.assert_clause = self.assert_clause()
        while self.at_kw("var"):
            m.locals.extend(self.inst_var_decls(allow_init=False))
        if self.prelude and self.at_op(";"):
            self.next()
            m.native = True
            return m
        self.expect_kw("begin")
        m.body = self.statement_list(("end",))
        self.expect_kw("end")
        return m

    def assert_clause(self) -> N.AssertClause:
        span = self.next().span
        before = after = None
        if self.accept_kw("before"):
            before = self.or_expr()
            self.expect_op(";")
        avars = []
        while self.at_kw("var"):
            avars.append(self.stat_var_decl())
            self.expect_op(";")
        if self.accept_kw("after"):
            after = self.or_expr()
            self.expect_op(";")
        self.expect_kw("end")
        return N.AssertClause(before, avars, after, span)

    # ------------------------------------------------------------ types

    def type_ext(self) -> N.TypeExpr:
        span = self.tok.span
        expanded = self.accept_op("@")
        t = self.type_()
        t.expanded = expanded
        t.span = span
        return t

    def type_(self) -> N.TypeExpr:
        t = self.tok
        if t.kind == "kw" and t.lexeme in BASIC_TYPES:
            self.next()
            return N.TypeExpr("basic", t.lexeme, span=t.span)
        if t.is_kw("array"):
            self.next()
            self.expect_op("(")
            elem = self.type_ext()
            self.expect_op(")")
            dims = []
            if not self.at_op("["):
                self.fail("'['")
            while self.accept_op("["):
                if self.tok.kind == "integer":
                    dims.append(self.next().value)
                elif self.tok.kind == "id":
                    dims.append(self.next().lexeme)
                else:
                    dims.append(None)
                self.expect_op("]")
            return N.TypeExpr("array", elem=elem, dims=dims, span=t.span)
        return self.class_type()

    def class_type(self) -> N.TypeExpr:
        t = self.tok
        if t.is_kw("type"):
            self.next()
            self.expect_op("(")
            if self.prelude and self.tok.kind == "kw" and self.tok.lexeme in BASIC_TYPES:
                name = self.next().lexeme
            else:
                name = self.expect_id().lexeme
            self.expect_op(")")
            return N.TypeExpr("classobj", name, span=t.span)
        name = self.expect_id().lexeme
        if self.at_op("("):
            raise ParseError(self.tok.span, "parameterized classes are not supported", "P010")
        return N.TypeExpr("class", name, span=t.span)

    # ------------------------------------------------------------ statements

    def statement_list(self, stops: tuple) -> list:
        out = []
        while not self.at_kw(*stops) and self.tok.kind != "eof":
            try:
                out.append(self.statement())
            except ParseError as err:
                self.error(err)
                self.recover_statement(stops)
        return out

    def recover_statement(self, stops) -> None:
        start = self.i
        while self.tok.kind != "eof":
            if self.at_op(";"):
                self.next()
                return
            if self.at_kw(*stops) and self.i > start:
                return
            if self.at_kw("end", "endif", "until", "else", "otherwise") and self.i > start:
                return
            self.next()

    def un_stat_block(self) -> list:
        if self.at_kw("begin"):
            self.next()
            body = self.statement_list(("end",))
            self.expect_kw("end")
            return body
        return [self.statement()]

    def statement(self) -> N.Stat:
        t = self.tok
        span = t.span
        if t.is_op(";"):
            self.next()
            return N.Empty(span)
        if t.kind == "kw":
            w = t.lexeme
            if w == "if":
                self.next()
                cond = self.or_expr()
                self.expect_kw("then")
                then = self.statement_list(("else", "endif"))
                orelse = None
                if self.accept_kw("else"):
                    orelse = self.statement_list(("endif",))
                self.expect_kw("endif")
                return N.If(cond, then, orelse, span)
            if w == "while":
                self.next()
                cond = self.expr()
                self.expect_kw("do")
                return N.While(cond, self.un_stat_block(), span)
            if w == "repeat":
                self.next()
                body = self.statement_list(("until",))
                self.expect_kw("until")
                cond = self.expr()
                self.expect_op(";")
                return N.Repeat(body, cond, span)
            if w == "loop":
                self.next()
                body = self.statement_list(("end",))
                self.expect_kw("end")
                return N.Loop(body, span)
            if w == "break":
                self.next()
                self.expect_op(";")
                return N.Break(span)
            if w == "return":
                self.next()
                value = None if self.at_op(";") else self.expr()
                self.expect_op(";")
                return N.Return(value, span)
            if w == "for":
                self.next()
                var = self.expect_id().lexeme
                vt = None
                if self.accept_op(":"):
                    vt = self.type_()
                self.expect_op("=")
                start = self.or_expr()
                self.expect_kw("to")
                stop = self.or_expr()
                self.expect_kw("do")
                return N.For(var, vt, start, stop, self.un_stat_block(), span)
            if w == "case":
                return self.case_stat()
            if w == "try":
                self.next()
                self.expect_op("(")
                catch = self.expr()
                self.expect_op(")")
                body = self.statement_list(("end",))
                self.expect_kw("end")
                return N.Try(catch, body, span)
            if w == "var":
                d = self.stat_var_decl()
                if self.at_op(","):
                    raise ParseError(self.tok.span, "a var statement declares a single variable", "P013")
                self.expect_op(";")
                return d
            if w == "begin":
                raise ParseError(span, "a begin-end block is only allowed as the body of a loop or case branch", "P014")
        e = self.postfix_or_unary_for_statement()
        if self.at_op("#"):
            self.next()
            if not (self.tok.kind == "id" and self.tok.lexeme == "init"):
                self.fail("'init'")
            self.next()
            self.expect_op("(")
            args = self.expr_list(")")
            self.expect_op(")")
            self.expect_op(";")
            return N.InitStat(e, args, span)
        if self.at_op("="):
            e = self.finish_assignment(e)
        elif not (isinstance(e, N.Send) and e.args is not None) and \
                not (isinstance(e, N.Unary) and e.op in ("++", "--")):
            raise ParseError(span, "expression is not a statement", "P015")
        self.expect_op(";")
        return N.ExprStat(e, span)

    def postfix_or_unary_for_statement(self) -> N.Expr:
        if self.at_op("++", "--"):
            t = self.next()
            return N.Unary(t.lexeme, self.unary(), t.span)
        return self.postfix()

    def stat_var_decl(self) -> N.VarDecl:
        span = self.expect_kw("var").span
        name = self.expect_id().lexeme
        self.expect_op(":")
        ty = self.type_ext()
        init = None
        if self.accept_op("="):
            init = self.array_init_or_expr(full=True)
        return N.VarDecl(name, ty, init, span)

    def case_stat(self) -> N.Case:
        span = self.expect_kw("case").span
        e = self.expr()
        self.expect_kw("of")
        branches = []
        otherwise = None
        while not self.at_kw("end", "otherwise"):
            bspan = self.tok.span
            labels = [self.case_label()]
            while self.accept_op(","):
                labels.append(self.case_label())
            self.expect_op(":")
            branches.append(N.CaseBranch(labels, self.un_stat_block(), bspan))
        if not branches:
            self.fail("case label")
        if self.accept_kw("otherwise"):
            self.accept_op(":")
            otherwise = self.un_stat_block()
        self.expect_kw("end")
        return N.Case(e, branches, otherwise, span)

    def case_label(self) -> N.Expr:
        t = self.tok
        if t.kind in ("boolean", "byte", "char", "integer", "long"):
            self.next()
            return N.Literal(t.kind, t.value, t.span)
        if t.is_op("#") and self.peek().kind == "char":
            self.next()
            c = self.next()
            return N.Literal("char", c.value, t.span)
        if t.is_op("-") and self.peek().kind in ("integer", "long", "byte"):
            self.next()
            n = self.next()
            return N.Unary("-", N.Literal(n.kind, n.value, n.span), t.span)
        if t.kind == "id":
            self.next()
            e = N.Name(t.lexeme, t.span)
            if self.accept_op("."):
                m = self.expect_id()
                e = N.Send(e, m.lexeme, None, m.span)
            return e
        self.fail("case label")

    # ------------------------------------------------------------ expressions

    def expr_list(self, close: str) -> list:
        args = []
        if self.at_op(close):
            return args
        while True:
            args.append(self.array_init_or_expr(full=True))
            if not self.accept_op(","):
                return args

    def array_init_or_expr(self, full: bool = False) -> N.Expr:
        if self.at_op("#") and self.peek().is_op("("):
            return self.array_init()
        return self.expr() if full else self.or_expr()

    def array_init(self) -> N.ArrayInit:
        span = self.expect_op("#").span
        self.expect_op("(")
        elems = [self.array_init_or_expr()]
        while self.accept_op(","):
            elems.append(self.array_init_or_expr())
        self.expect_op(")")
        return N.ArrayInit(elems, span)

    def expr(self) -> N.Expr:
        left = self.or_expr()
        if self.at_op("="):
            return self.finish_assignment(left)
        return left

    def finish_assignment(self, target: N.Expr) -> N.Expr:
        t = self.expect_op("=")
        if not isinstance(target, (N.Name, N.Index, N.Send)) or \
                isinstance(target, N.Send) and target.args is not None:
            raise ParseError(t.span, "invalid assignment target", "P016")
        if self.at_op("#") and self.peek().is_op("("):
            value = self.array_init()
        else:
            value = self.expr()
        return N.Assign(target, value, getattr(target, "span", t.span))

    def or_expr(self) -> N.Expr:
        return self._left_assoc(self.xor_expr, kws=("or",))

    def xor_expr(self) -> N.Expr:
        return self._left_assoc(self.and_expr, kws=("xor",))

    def and_expr(self) -> N.Expr:
        return self._left_assoc(self.rel_expr, kws=("and",))

    def rel_expr(self) -> N.Expr:
        left = self.add_expr()
        if self.at_op(*RELATIONS):
            op = self.next()
            right = self.add_expr()
            left = N.Binary(op.lexeme, left, right, op.span)
            if self.at_op(*RELATIONS):
                raise ParseError(self.tok.span, "non-associative operator chained", "P020")
        return left

    def add_expr(self) -> N.Expr:
        return self._left_assoc(self.mult_expr, ops=("+", "-"))

    def mult_expr(self) -> N.Expr:
        return self._left_assoc(self.bor_expr, ops=("*", "/", "%"))

    def bor_expr(self) -> N.Expr:
        return self._left_assoc(self.bxor_expr, ops=("|",))

    def bxor_expr(self) -> N.Expr:
        return self._left_assoc(self.band_expr, ops=("^",))

    def band_expr(self) -> N.Expr:
        return self._left_assoc(self.shift_expr, ops=("&",))

    def shift_expr(self) -> N.Expr:
        left = self.unary()
        if self.at_op("<<", ">>"):
            op = self.next()
            right = self.unary()
            left = N.Binary(op.lexeme, left, right, op.span)
            if self.at_op("<<", ">>"):
                raise ParseError(self.tok.span, "non-associative operator chained", "P020")
        return left

    def _left_assoc(self, sub, ops=(), kws=()) -> N.Expr:
        left = sub()
        while (ops and self.at_op(*ops)) or (kws and self.at_kw(*kws)):
            op = self.next()
            left = N.Binary(op.lexeme, left, sub(), op.span)
        return left

    def unary(self) -> N.Expr:
        t = self.tok
        if t.is_op(*UNARY_OPS) or t.is_kw("not"):
            self.next()
            operand = self.unary()
            return N.Unary(t.lexeme, operand, t.span)
        return self.postfix()

    def postfix(self) -> N.Expr:
        e = self.primary()
        while True:
            if self.at_op("["):
                span = self.next().span
                idx = self.expr()
                self.expect_op("]")
                e = N.Index(e, idx, span)
            elif self.at_op("."):
                self.next()
                name = self.expect_id()
                args = None
                if self.accept_op("("):
                    args = self.expr_list(")")
                    self.expect_op(")")
                e = N.Send(e, name.lexeme, args, name.span)
            else:
                return e

    def primary(self) -> N.Expr:
        t = self.tok
        k = t.kind
        if k in ("char", "string", "boolean", "byte", "integer", "long", "real", "double"):
            self.next()
            return N.Literal(k, t.value, t.span)
        if k == "id":
            self.next()
            if self.accept_op("("):
                args = self.expr_list(")")
                self.expect_op(")")
                return N.Send(None, t.lexeme, args, t.span)
            return N.Name(t.lexeme, t.span)
        if t.is_op("("):
            self.next()
            e = self.expr()
            self.expect_op(")")
            return e
        if t.is_op("#"):
            if self.peek().kind == "char":
                self.next()
                c = self.next()
                return N.Literal("char", c.value, t.span)
            if self.peek().is_op("("):
                return self.array_init()
        if k == "kw":
            w = t.lexeme
            if w == "self":
                self.next()
                return N.SelfExpr(t.span)
            if w == "super":
                self.next()
                if not self.at_op("."):
                    self.fail("'.' after super")
                return N.SuperExpr(t.span)
            if w == "exception":
                self.next()
                return N.ExceptionExpr(t.span)
            if w == "nil":
                self.next()
                return N.NilExpr(t.span)
            if w == "result":
                self.next()
                return N.ResultExpr(t.span)
            if w in BASIC_TYPES:
                self.next()
                return N.TypeValue(N.TypeExpr("basic", w, span=t.span), t.span)
            if w == "array":
                ty = self.type_()
                return N.TypeValue(ty, t.span)
        self.fail("expression")


def parse_program(tokens: list[Token], file: str = "<input>", prelude: bool = False) -> N.Program:
    """Parse a token list. Raises GreenCompileError with every syntax error found."""
    p = Parser(tokens, file, prelude)
    prog = p.parse_program()
    if p.diagnostics:
        raise GreenCompileError(p.diagnostics)
    return prog


def parse_source(source: str, file: str = "<input>", prelude: bool = False) -> N.Program:
    try:
        tokens = tokenize(source)
    except LexError as e:
        raise GreenCompileError([Diagnostic("error", e.span, "L001", e.message, "lex", file)]) from None
    return parse_program(tokens, file, prelude)


def parse_expression(source_or_tokens) -> N.Expr:
    tokens = tokenize(source_or_tokens) if isinstance(source_or_tokens, str) else source_or_tokens
    p = Parser(tokens)
    try:
        e = p.expr()
        if p.tok.kind != "eof":
            p.fail("end of expression")
    except ParseError as err:
        raise GreenCompileError([Diagnostic("error", err.span, err.code, err.message, "parse")]) from None
    return e
