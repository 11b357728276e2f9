"""Recursive-descent parser for MiniSol.

Anything outside the declared grammar is rejected with an "unsupported
construct" diagnostic rather than silently misparsed.  Inside function bodies
the parser recovers at statement boundaries so one bad statement does not
hide later errors; in strict mode (the default and only mode) no partial AST
escapes — if any diagnostic was recorded, :class:`MiniSolSyntaxError` is
raised carrying all of them.
"""

from __future__ import annotations

from .lexer import (
    Diagnostic,
    MiniSolSyntaxError,
    Token,
    TokenKind,
    tokenize,
    unescape_string,
)
from .nodes import (
    AddressLit,
    ArrayType,
    AssignStmt,
    BinaryExpr,
    BindingKind,
    BoolLit,
    CallExpr,
    ContractDef,
    ElementaryType,
    EmitStmt,
    Expr,
    ExprStmt,
    ForStmt,
    FunctionDef,
    HexLit,
    Ident,
    IfStmt,
    IncDecStmt,
    IndexAccess,
    MappingType,
    MemberAccess,
    NumberLit,
    Param,
    RequireStmt,
    ReturnStmt,
    SourceUnit,
    Span,
    StateVarDecl,
    Stmt,
    StringLit,
    TypeName,
    UnaryExpr,
    VarDeclStmt,
    WhileStmt,
    walk,
)

ELEMENTARY_TYPES = ("uint256", "uint", "address", "bool", "string")
_TYPE_START = frozenset(ELEMENTARY_TYPES) | {"mapping"}
_VISIBILITY = ("public", "private", "internal", "external")
_MUTABILITY = ("payable", "view", "pure")
_LOCATIONS = ("memory", "calldata", "storage")
# Type keywords usable as conversion callees, e.g. payable(x) or address(0).
_CAST_KEYWORDS = frozenset({"address", "payable", "uint256", "uint", "bool", "string"})

_BINARY_PRECEDENCE = {
    "||": 1,
    "&&": 2,
    "==": 3, "!=": 3,
    "<": 4, "<=": 4, ">": 4, ">=": 4,
    "+": 5, "-": 5,
    "*": 6, "/": 6, "%": 6,
}
_ASSIGN_OPS = frozenset({"=", "+=", "-=", "*=", "/=", "%="})


class _ParseFailure(Exception):
    def __init__(self, diagnostic: Diagnostic):
        self.diagnostic = diagnostic
        super().__init__(str(diagnostic))


class _Parser:
    def __init__(self, tokens: list[Token], source: str):
        self.tokens = tokens
        self.source = source
        self.pos = 0
        self.diagnostics: list[Diagnostic] = []

    # -- token helpers ---------------------------------------------------

    def _peek(self, ahead: int = 0) -> Token | None:
        idx = self.pos + ahead
        return self.tokens[idx] if idx < len(self.tokens) else None

    def _at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def _here(self) -> tuple[int, int]:
        tok = self._peek()
        if tok is not None:
            return tok.line, tok.column
        if self.tokens:
            last = self.tokens[-1]
            return last.line, last.column + len(last.text)
        return 1, 1

    def _fail(self, message: str) -> _ParseFailure:
        line, col = self._here()
        return _ParseFailure(Diagnostic(message, line, col))

    def _check(self, text: str) -> bool:
        tok = self._peek()
        return tok is not None and tok.text == text

    def _check_kind(self, kind: TokenKind) -> bool:
        tok = self._peek()
        return tok is not None and tok.kind == kind

    def _advance(self) -> Token:
        tok = self._peek()
        if tok is None:
            raise self._fail("unexpected end of input")
        self.pos += 1
        return tok

    def _accept(self, text: str) -> Token | None:
        if self._check(text):
            return self._advance()
        return None

    def _expect(self, text: str) -> Token:
        tok = self._peek()
        if tok is None or tok.text != text:
            got = tok.text if tok is not None else "end of input"
            raise self._fail(f"expected {text!r}, found {got!r}")
        return self._advance()

    def _expect_identifier(self, what: str) -> Token:
        tok = self._peek()
        if tok is None or tok.kind != TokenKind.IDENTIFIER:
            got = tok.text if tok is not None else "end of input"
            raise self._fail(f"expected {what}, found {got!r}")
        return self._advance()

    def _span_from(self, start_tok: Token, end_tok: Token) -> Span:
        return Span(
            start=start_tok.offset,
            end=end_tok.offset + len(end_tok.text),
            line=start_tok.line,
            column=start_tok.column,
        )

    def _prev(self) -> Token:
        return self.tokens[self.pos - 1]

    def _node_span(self, start_tok: Token) -> Span:
        return self._span_from(start_tok, self._prev())

    # -- recovery --------------------------------------------------------

    def _sync_statement(self) -> None:
        """Skip to just past the next ';' (or stop before '}' / end)."""
        depth = 0
        while not self._at_end():
            tok = self._peek()
            assert tok is not None
            if tok.text == "{":
                depth += 1
            elif tok.text == "}":
                if depth == 0:
                    return
                depth -= 1
            elif tok.text == ";" and depth == 0:
                self._advance()
                return
            self._advance()

    # -- grammar ---------------------------------------------------------

    def parse_unit(self, path: str) -> SourceUnit:
        contracts: list[ContractDef] = []
        first = self._peek()
        while not self._at_end():
            try:
                contracts.append(self.parse_contract())
            except _ParseFailure as failure:
                self.diagnostics.append(failure.diagnostic)
                self._sync_statement()
        span = (
            self._span_from(first, self._prev())
            if first is not None and self.pos > 0
            else Span(0, 0, 1, 1)
        )
        return SourceUnit(contracts=contracts, path=path, source=self.source, span=span)

    def parse_contract(self) -> ContractDef:
        start = self._expect("contract")
        name = self._expect_identifier("contract name")
        self._expect("{")
        members: list[StateVarDecl | FunctionDef] = []
        while not self._check("}"):
            if self._at_end():
                raise self._fail("expected '}'")
            try:
                members.append(self.parse_member())
            except _ParseFailure as failure:
                self.diagnostics.append(failure.diagnostic)
                self._sync_statement()
        self._expect("}")
        return ContractDef(name=name.text, members=members, span=self._node_span(start))

    def parse_member(self) -> StateVarDecl | FunctionDef:
        tok = self._peek()
        assert tok is not None
        if tok.text == "function":
            return self.parse_function()
        if tok.text in _TYPE_START:
            return self.parse_state_var()
        raise self._fail(
            f"unsupported construct at {tok.text!r}: contracts may only contain "
            "state variables and functions"
        )

    def parse_state_var(self) -> StateVarDecl:
        start = self._peek()
        assert start is not None
        var_type = self.parse_typename()
        visibility = None
        tok = self._peek()
        if tok is not None and tok.text in _VISIBILITY:
            visibility = self._advance().text
        name = self._expect_identifier("state variable name")
        initializer = None
        if self._accept("="):
            initializer = self.parse_expression()
        self._expect(";")
        return StateVarDecl(
            var_type=var_type,
            visibility=visibility,
            name=name.text,
            initializer=initializer,
            span=self._node_span(start),
        )

    def parse_function(self) -> FunctionDef:
        start = self._expect("function")
        name = self._expect_identifier("function name")
        self._expect("(")
        params: list[Param] = []
        if not self._check(")"):
            params.append(self.parse_param())
            while self._accept(","):
                params.append(self.parse_param())
        self._expect(")")

        visibility: str | None = None
        mutability: str | None = None
        modifiers: list[str] = []
        returns: list[TypeName] = []
        while True:
            tok = self._peek()
            if tok is None:
                raise self._fail("expected function body")
            if tok.text in _VISIBILITY:
                if visibility is not None:
                    raise self._fail(f"duplicate visibility {tok.text!r}")
                visibility = self._advance().text
            elif tok.text in _MUTABILITY:
                if mutability is not None:
                    raise self._fail(f"duplicate mutability {tok.text!r}")
                mutability = self._advance().text
            elif tok.text == "returns":
                self._advance()
                self._expect("(")
                returns.append(self.parse_typename())
                while self._accept(","):
                    returns.append(self.parse_typename())
                self._expect(")")
            elif tok.kind == TokenKind.IDENTIFIER:
                modifiers.append(self._advance().text)
            elif tok.text == "{":
                break
            else:
                raise self._fail(
                    f"unsupported construct in function header: {tok.text!r}"
                )
        body = self.parse_block()
        return FunctionDef(
            name=name.text,
            params=params,
            visibility=visibility,
            mutability=mutability,
            modifiers=modifiers,
            returns=returns,
            body=body,
            span=self._node_span(start),
        )

    def parse_param(self) -> Param:
        start = self._peek()
        assert start is not None
        var_type = self.parse_typename()
        location = None
        tok = self._peek()
        if tok is not None and tok.text in _LOCATIONS:
            location = self._advance().text
        name = self._expect_identifier("parameter name")
        return Param(
            var_type=var_type,
            name=name.text,
            location=location,
            span=self._node_span(start),
        )

    def parse_typename(self, allow_mapping: bool = True) -> TypeName:
        tok = self._peek()
        if tok is None:
            raise self._fail("expected type")
        if tok.text == "mapping":
            if not allow_mapping:
                raise self._fail("unsupported construct: nested mappings (single level only)")
            start = self._advance()
            self._expect("(")
            key = self.parse_elementary()
            self._expect("=>")
            value = self.parse_typename(allow_mapping=False)
            self._expect(")")
            return MappingType(key=key, value=value, span=self._node_span(start))
        base: TypeName = self.parse_elementary()
        if self._check("["):
            start_tok = self._advance()
            length: int | None = None
            if self._check_kind(TokenKind.NUMBER):
                length = int(self._advance().text)
            self._expect("]")
            base = ArrayType(
                base=base,
                length=length,
                span=Span(
                    base.span.start,
                    self._prev().offset + 1,
                    base.span.line,
                    base.span.column,
                ),
            )
            if self._check("["):
                raise self._fail("unsupported construct: nested arrays")
        return base

    def parse_elementary(self) -> ElementaryType:
        tok = self._peek()
        if tok is None or tok.text not in ELEMENTARY_TYPES:
            got = tok.text if tok is not None else "end of input"
            raise self._fail(f"expected elementary type, found {got!r}")
        self._advance()
        name = "uint256" if tok.text == "uint" else tok.text
        return ElementaryType(name=name, span=self._span_from(tok, tok))

    # -- statements -------------------------------------------------------

    def parse_block(self) -> list[Stmt]:
        self._expect("{")
        stmts: list[Stmt] = []
        while not self._check("}"):
            if self._at_end():
                raise self._fail("expected '}'")
            try:
                stmts.append(self.parse_statement())
            except _ParseFailure as failure:
                self.diagnostics.append(failure.diagnostic)
                self._sync_statement()
        self._expect("}")
        return stmts

    def _body_or_single(self) -> list[Stmt]:
        if self._check("{"):
            return self.parse_block()
        return [self.parse_statement()]

    def parse_statement(self) -> Stmt:
        tok = self._peek()
        if tok is None:
            raise self._fail("expected statement")
        text = tok.text
        if text in _TYPE_START:
            return self.parse_var_decl()
        if text == "require":
            return self.parse_require()
        if text == "if":
            return self.parse_if()
        if text == "for":
            return self.parse_for()
        if text == "while":
            return self.parse_while()
        if text == "emit":
            return self.parse_emit()
        if text == "return":
            start = self._advance()
            value = None if self._check(";") else self.parse_expression()
            self._expect(";")
            return ReturnStmt(value=value, span=self._node_span(start))
        if text in {"contract", "function"}:
            raise self._fail(f"unsupported construct: {text!r} inside a function body")
        stmt = self.parse_simple_statement()
        self._expect(";")
        start_offset = stmt.span.start
        stmt.span = Span(start_offset, self._prev().offset + 1, stmt.span.line, stmt.span.column)
        return stmt

    def parse_var_decl(self) -> VarDeclStmt:
        start = self._peek()
        assert start is not None
        if start.text == "mapping":
            raise self._fail("unsupported construct: mapping variables must be state variables")
        var_type = self.parse_typename(allow_mapping=False)
        location = None
        tok = self._peek()
        if tok is not None and tok.text in _LOCATIONS:
            location = self._advance().text
        name = self._expect_identifier("variable name")
        initializer = None
        if self._accept("="):
            initializer = self.parse_expression()
        self._expect(";")
        return VarDeclStmt(
            var_type=var_type,
            name=name.text,
            location=location,
            initializer=initializer,
            span=self._node_span(start),
        )

    def parse_require(self) -> RequireStmt:
        start = self._expect("require")
        self._expect("(")
        condition = self.parse_expression()
        message = None
        if self._accept(","):
            tok = self._peek()
            if tok is None or tok.kind != TokenKind.STRING:
                raise self._fail("require message must be a string literal")
            self._advance()
            message = StringLit(value=unescape_string(tok.text), span=self._span_from(tok, tok))
        self._expect(")")
        self._expect(";")
        return RequireStmt(condition=condition, message=message, span=self._node_span(start))

    def parse_if(self) -> IfStmt:
        start = self._expect("if")
        self._expect("(")
        condition = self.parse_expression()
        self._expect(")")
        then_body = self._body_or_single()
        else_body: list[Stmt] | None = None
        if self._accept("else"):
            if self._check("if"):
                else_body = [self.parse_if()]
            else:
                else_body = self._body_or_single()
        return IfStmt(
            condition=condition,
            then_body=then_body,
            else_body=else_body,
            span=self._node_span(start),
        )

    def parse_for(self) -> ForStmt:
        start = self._expect("for")
        self._expect("(")
        init: Stmt | None = None
        if self._accept(";"):
            pass
        elif self._peek() is not None and self._peek().text in _TYPE_START:  # type: ignore[union-attr]
            init = self.parse_var_decl()  # consumes its ';'
        else:
            init = self.parse_simple_statement()
            self._expect(";")
        condition = None if self._check(";") else self.parse_expression()
        self._expect(";")
        post: Stmt | None = None
        if not self._check(")"):
            post = self.parse_simple_statement()
        self._expect(")")
        body = self._body_or_single()
        return ForStmt(
            init=init, condition=condition, post=post, body=body, span=self._node_span(start)
        )

    def parse_while(self) -> WhileStmt:
        start = self._expect("while")
        self._expect("(")
        condition = self.parse_expression()
        self._expect(")")
        body = self._body_or_single()
        return WhileStmt(condition=condition, body=body, span=self._node_span(start))

    def parse_emit(self) -> EmitStmt:
        start = self._expect("emit")
        expr = self.parse_postfix()
        if not isinstance(expr, CallExpr):
            raise self._fail("emit expects an event call")
        self._expect(";")
        return EmitStmt(call=expr, span=self._node_span(start))

    def parse_simple_statement(self) -> Stmt:
        """Assignment, increment/decrement, or bare expression (no ';')."""
        start = self._peek()
        assert start is not None
        expr = self.parse_expression()
        tok = self._peek()
        if tok is not None and tok.text in _ASSIGN_OPS:
            if not isinstance(expr, (Ident, MemberAccess, IndexAccess)):
                raise self._fail(f"cannot assign to this expression with {tok.text!r}")
            op = self._advance().text
            value = self.parse_expression()
            return AssignStmt(
                target=expr, op=op, value=value, span=self._node_span(start)
            )
        if tok is not None and tok.text in {"++", "--"}:
            if not isinstance(expr, (Ident, MemberAccess, IndexAccess)):
                raise self._fail(f"cannot apply {tok.text!r} to this expression")
            op = self._advance().text
            return IncDecStmt(target=expr, op=op, span=self._node_span(start))
        return ExprStmt(expression=expr, span=self._node_span(start))

    # -- expressions ------------------------------------------------------

    def parse_expression(self) -> Expr:
        return self.parse_binary(1)

    def parse_binary(self, min_prec: int) -> Expr:
        left = self.parse_unary()
        while True:
            tok = self._peek()
            if tok is None:
                return left
            prec = _BINARY_PRECEDENCE.get(tok.text)
            if prec is None or prec < min_prec:
                return left
            op = self._advance().text
            right = self.parse_binary(prec + 1)
            left = BinaryExpr(
                op=op,
                left=left,
                right=right,
                span=Span(left.span.start, right.span.end, left.span.line, left.span.column),
            )

    def parse_unary(self) -> Expr:
        tok = self._peek()
        if tok is not None and tok.text in {"!", "-"}:
            start = self._advance()
            operand = self.parse_unary()
            return UnaryExpr(
                op=start.text,
                operand=operand,
                span=Span(start.offset, operand.span.end, start.line, start.column),
            )
        return self.parse_postfix()

    def parse_postfix(self) -> Expr:
        expr = self.parse_primary()
        while True:
            if self._check("."):
                self._advance()
                member = self._expect_identifier("member name")
                expr = MemberAccess(
                    obj=expr,
                    member=member.text,
                    span=Span(
                        expr.span.start,
                        member.offset + len(member.text),
                        expr.span.line,
                        expr.span.column,
                    ),
                )
            elif self._check("("):
                self._advance()
                args: list[Expr] = []
                if not self._check(")"):
                    args.append(self.parse_expression())
                    while self._accept(","):
                        args.append(self.parse_expression())
                close = self._expect(")")
                expr = CallExpr(
                    callee=expr,
                    args=args,
                    span=Span(
                        expr.span.start, close.offset + 1, expr.span.line, expr.span.column
                    ),
                )
            elif self._check("["):
                self._advance()
                index = self.parse_expression()
                close = self._expect("]")
                expr = IndexAccess(
                    obj=expr,
                    index=index,
                    span=Span(
                        expr.span.start, close.offset + 1, expr.span.line, expr.span.column
                    ),
                )
            else:
                return expr

    def parse_primary(self) -> Expr:
        tok = self._peek()
        if tok is None:
            raise self._fail("expected expression")
        if tok.kind == TokenKind.NUMBER:
            self._advance()
            return NumberLit(value=int(tok.text), span=self._span_from(tok, tok))
        if tok.kind == TokenKind.HEX:
            self._advance()
            return HexLit(value=int(tok.text, 16), span=self._span_from(tok, tok))
        if tok.kind == TokenKind.ADDRESS:
            self._advance()
            return AddressLit(value=int(tok.text, 16), span=self._span_from(tok, tok))
        if tok.kind == TokenKind.STRING:
            self._advance()
            return StringLit(value=unescape_string(tok.text), span=self._span_from(tok, tok))
        if tok.text in {"true", "false"}:
            self._advance()
            return BoolLit(value=tok.text == "true", span=self._span_from(tok, tok))
        if tok.kind == TokenKind.IDENTIFIER:
            self._advance()
            return Ident(name=tok.text, span=self._span_from(tok, tok))
        if tok.text in _CAST_KEYWORDS and self._peek(1) is not None and self._peek(1).text == "(":  # type: ignore[union-attr]
            self._advance()
            return Ident(name=tok.text, span=self._span_from(tok, tok))
        if self._check("("):
            self._advance()
            expr = self.parse_expression()
            self._expect(")")
            return expr
        raise self._fail(f"expected expression, found {tok.text!r}")


# --- name resolution -------------------------------------------------------


def annotate_bindings(unit: SourceUnit) -> None:
    """Mark every identifier as state var / local / param / function /
    contract, or free (builtins like ``block`` and ``msg``)."""
    contract_names = {c.name for c in unit.contracts}
    for contract in unit.contracts:
        state_names = {v.name for v in contract.state_vars}
        function_names = {f.name for f in contract.functions}

        def resolve(expr: Expr, scope: set[str], params: set[str]) -> None:
            for node in walk(expr):
                if isinstance(node, Ident):
                    if node.name in scope:
                        node.binding = BindingKind.LOCAL
                    elif node.name in params:
                        node.binding = BindingKind.PARAM
                    elif node.name in state_names:
                        node.binding = BindingKind.STATE_VAR
                    elif node.name in function_names:
                        node.binding = BindingKind.FUNCTION
                    elif node.name in contract_names:
                        node.binding = BindingKind.CONTRACT
                    else:
                        node.binding = BindingKind.FREE

        def resolve_stmts(stmts: list[Stmt], scope: set[str], params: set[str]) -> None:
            for stmt in stmts:
                resolve_stmt(stmt, scope, params)

        def resolve_stmt(stmt: Stmt | None, scope: set[str], params: set[str]) -> None:
            if stmt is None:
                return
            if isinstance(stmt, VarDeclStmt):
                if stmt.initializer is not None:
                    resolve(stmt.initializer, scope, params)
                scope.add(stmt.name)
            elif isinstance(stmt, AssignStmt):
                resolve(stmt.target, scope, params)
                resolve(stmt.value, scope, params)
            elif isinstance(stmt, IncDecStmt):
                resolve(stmt.target, scope, params)
            elif isinstance(stmt, RequireStmt):
                resolve(stmt.condition, scope, params)
            elif isinstance(stmt, IfStmt):
                resolve(stmt.condition, scope, params)
                resolve_stmts(stmt.then_body, set(scope), params)
                if stmt.else_body is not None:
                    resolve_stmts(stmt.else_body, set(scope), params)
            elif isinstance(stmt, ForStmt):
                inner = set(scope)
                resolve_stmt(stmt.init, inner, params)
                if stmt.condition is not None:
                    resolve(stmt.condition, inner, params)
                resolve_stmt(stmt.post, inner, params)
                resolve_stmts(stmt.body, set(inner), params)
            elif isinstance(stmt, WhileStmt):
                resolve(stmt.condition, scope, params)
                resolve_stmts(stmt.body, set(scope), params)
            elif isinstance(stmt, EmitStmt):
                resolve(stmt.call, scope, params)
            elif isinstance(stmt, ReturnStmt):
                if stmt.value is not None:
                    resolve(stmt.value, scope, params)
            elif isinstance(stmt, ExprStmt):
                resolve(stmt.expression, scope, params)

        for var in contract.state_vars:
            if var.initializer is not None:
                resolve(var.initializer, set(), set())
        for fn in contract.functions:
            resolve_stmts(fn.body, set(), {p.name for p in fn.params})


# --- entry points ----------------------------------------------------------


def parse_tokens(tokens: list[Token], source: str = "", path: str = "<source>") -> SourceUnit:
    parser = _Parser(tokens, source)
    unit = parser.parse_unit(path)
    if parser.diagnostics:
        raise MiniSolSyntaxError(parser.diagnostics)
    annotate_bindings(unit)
    return unit


def parse_source(source: str, path: str = "<source>") -> SourceUnit:
    """Tokenize and parse; raises MiniSolSyntaxError with all diagnostics."""
    return parse_tokens(tokenize(source), source, path)
