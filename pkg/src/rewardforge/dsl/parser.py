"""Parser and static validator for the reward expression language.

Candidate reward functions are written in a small closed language:
let-bindings, conditional expressions, guarded arithmetic, vector
helpers, frame accessors, and bounded aggregations over the visible
humans.  Parsing never executes anything; a validated program is an
immutable typed AST whose evaluation cost is O(humans) per frame.

Grammar (also published in ``grammar.py`` for prompt embedding):

    program    = { "let" IDENT "=" expr ";" } expr
    expr       = ifexpr | orexpr
    ifexpr     = "if" expr "then" expr { "elif" expr "then" expr } "else" expr
    orexpr     = andexpr { "or" andexpr }
    andexpr    = notexpr { "and" notexpr }
    notexpr    = "not" notexpr | comparison
    comparison = additive [ ("<"|"<="|">"|">="|"=="|"!=") additive ]
    additive   = term { ("+"|"-") term }
    term       = factor { ("*"|"/") factor }
    factor     = "-" factor | primary
    primary    = NUMBER | IDENT "(" [ expr { "," expr } ] ")"
               | AGGNAME "(" IDENT ":" expr ")" | IDENT | "(" expr ")"

``#`` starts a comment running to end of line.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

NUM = "num"
VEC = "vec"
BOOL = "bool"
HUMAN = "human"

KEYWORDS = {"let", "if", "then", "elif", "else", "and", "or", "not"}
AGG_NAMES = {"min_over_humans", "sum_over_humans"}

# name -> list of (argument types, result type) overloads
SIGNATURES: dict[str, list[tuple[tuple[str, ...], str]]] = {
    "add": [((NUM, NUM), NUM)],
    "sub": [((NUM, NUM), NUM), ((VEC, VEC), VEC)],
    "mul": [((NUM, NUM), NUM)],
    "div": [((NUM, NUM), NUM)],
    "neg": [((NUM,), NUM)],
    "min": [((NUM, NUM), NUM)],
    "max": [((NUM, NUM), NUM)],
    "abs": [((NUM,), NUM)],
    "clamp": [((NUM, NUM, NUM), NUM)],
    "exp": [((NUM,), NUM)],
    "log": [((NUM,), NUM)],
    "sqrt": [((NUM,), NUM)],
    "tanh": [((NUM,), NUM)],
    "pow": [((NUM, NUM), NUM)],
    "lt": [((NUM, NUM), BOOL)],
    "le": [((NUM, NUM), BOOL)],
    "gt": [((NUM, NUM), BOOL)],
    "ge": [((NUM, NUM), BOOL)],
    "eq": [((NUM, NUM), BOOL)],
    "ne": [((NUM, NUM), BOOL)],
    "and": [((BOOL, BOOL), BOOL)],
    "or": [((BOOL, BOOL), BOOL)],
    "not": [((BOOL,), BOOL)],
    "dist": [((VEC, VEC), NUM)],
    "norm": [((VEC,), NUM)],
    "dot": [((VEC, VEC), NUM)],
    "robot_pos": [((), VEC)],
    "robot_prev_pos": [((), VEC)],
    "robot_vel": [((), VEC)],
    "robot_radius": [((), NUM)],
    "start": [((), VEC)],
    "goal": [((), VEC)],
    "goal_dist": [((), NUM), ((VEC,), NUM)],
    "step_index": [((), NUM)],
    "horizon": [((), NUM)],
    "reached_goal": [((), BOOL)],
    "collided": [((), BOOL)],
    "timed_out": [((), BOOL)],
    "count_within": [((NUM,), NUM)],
    "h_pos": [((HUMAN,), VEC)],
    "h_vel": [((HUMAN,), VEC)],
    "h_radius": [((HUMAN,), NUM)],
    "predicted": [((HUMAN, NUM), VEC)],
}

_OPERATOR_SUGAR = {
    "add": "+",
    "sub": "-",
    "mul": "*",
    "div": "/",
    "lt": "<",
    "le": "<=",
    "gt": ">",
    "ge": ">=",
    "eq": "==",
    "ne": "!=",
}

MAX_POW_EXPONENT = 8


@dataclass(frozen=True)
class Limits:
    max_nodes: int = 512
    max_agg_depth: int = 1


@dataclass(frozen=True)
class ParseIssue:
    category: str  # syntax | unknown identifier | type mismatch | limit exceeded
    message: str
    line: int
    col: int

    def __str__(self) -> str:
        return f"line {self.line}, col {self.col}: {self.category}: {self.message}"


class ProgramParseError(Exception):
    def __init__(self, issues: list[ParseIssue]):
        self.issues = issues
        super().__init__("\n".join(str(i) for i in issues))


# --- AST ----------------------------------------------------------------


@dataclass(frozen=True)
class Node:
    pos: tuple[int, int] = field(default=(0, 0), compare=False, kw_only=True)


@dataclass(frozen=True)
class Num(Node):
    value: float


@dataclass(frozen=True)
class Name(Node):
    ident: str


@dataclass(frozen=True)
class Call(Node):
    fn: str
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class Let(Node):
    name: str
    value: "Expr"
    body: "Expr"


@dataclass(frozen=True)
class If(Node):
    branches: tuple[tuple["Expr", "Expr"], ...]
    orelse: "Expr"


@dataclass(frozen=True)
class Agg(Node):
    kind: str  # min_over_humans | sum_over_humans
    var: str
    body: "Expr"


Expr = Num | Name | Call | Let | If | Agg


def count_nodes(node: Expr) -> int:
    if isinstance(node, (Num, Name)):
        return 1
    if isinstance(node, Call):
        return 1 + sum(count_nodes(a) for a in node.args)
    if isinstance(node, Let):
        return 1 + count_nodes(node.value) + count_nodes(node.body)
    if isinstance(node, If):
        return 1 + sum(count_nodes(c) + count_nodes(e) for c, e in node.branches) + count_nodes(
            node.orelse
        )
    if isinstance(node, Agg):
        return 1 + count_nodes(node.body)
    raise TypeError(f"unknown node {node!r}")


# --- Lexer --------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # number | ident | keyword | op | punct | eof
    text: str
    line: int
    col: int


_TWO_CHAR_OPS = {"<=", ">=", "==", "!="}
_ONE_CHAR_OPS = {"+", "-", "*", "/", "<", ">"}
_PUNCT = {"(", ")", ",", ";", ":", "="}


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_col = col
        two = source[i : i + 2]
        if two in _TWO_CHAR_OPS:
            tokens.append(Token("op", two, line, start_col))
            i += 2
            col += 2
            continue
        if ch in _ONE_CHAR_OPS:
            tokens.append(Token("op", ch, line, start_col))
            i += 1
            col += 1
            continue
        if ch in _PUNCT:
            tokens.append(Token("punct", ch, line, start_col))
            i += 1
            col += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (source[j].isdigit() or (source[j] == "." and not seen_dot)):
                if source[j] == ".":
                    seen_dot = True
                j += 1
            if j < n and source[j] in "eE":
                k = j + 1
                if k < n and source[k] in "+-":
                    k += 1
                if k < n and source[k].isdigit():
                    while k < n and source[k].isdigit():
                        k += 1
                    j = k
            text = source[i:j]
            tokens.append(Token("number", text, line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            text = source[i:j]
            kind = "keyword" if text in KEYWORDS else "ident"
            tokens.append(Token(kind, text, line, start_col))
            col += j - i
            i = j
            continue
        raise ProgramParseError(
            [ParseIssue("syntax", f"unexpected character {ch!r}", line, start_col)]
        )
    tokens.append(Token("eof", "", line, col))
    return tokens


# --- Parser -------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, tok: Token | None = None) -> ProgramParseError:
        tok = tok or self.peek()
        return ProgramParseError([ParseIssue("syntax", message, tok.line, tok.col)])

    def expect(self, kind: str, text: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            got = tok.text or tok.kind
            raise self.fail(f"expected {want!r}, found {got!r}")
        return self.advance()

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def parse_program(self) -> Expr:
        node = self.parse_letchain()
        if not self.at("eof"):
            raise self.fail("trailing input after expression")
        return node

    def parse_letchain(self) -> Expr:
        if self.at("keyword", "let"):
            tok = self.advance()
            name = self.expect("ident").text
            if name in SIGNATURES or name in AGG_NAMES:
                raise self.fail(f"cannot rebind built-in {name!r}", tok)
            self.expect("punct", "=")
            value = self.parse_expr()
            self.expect("punct", ";")
            body = self.parse_letchain()
            return Let(name=name, value=value, body=body, pos=(tok.line, tok.col))
        return self.parse_expr()

    def parse_expr(self) -> Expr:
        if self.at("keyword", "if"):
            return self.parse_if()
        return self.parse_or()

    def parse_if(self) -> Expr:
        tok = self.expect("keyword", "if")
        branches = []
        cond = self.parse_expr()
        self.expect("keyword", "then")
        branches.append((cond, self.parse_expr()))
        while self.at("keyword", "elif"):
            self.advance()
            cond = self.parse_expr()
            self.expect("keyword", "then")
            branches.append((cond, self.parse_expr()))
        self.expect("keyword", "else")
        orelse = self.parse_expr()
        return If(branches=tuple(branches), orelse=orelse, pos=(tok.line, tok.col))

    def parse_or(self) -> Expr:
        left = self.parse_and()
        while self.at("keyword", "or"):
            tok = self.advance()
            right = self.parse_and()
            left = Call(fn="or", args=(left, right), pos=(tok.line, tok.col))
        return left

    def parse_and(self) -> Expr:
        left = self.parse_not()
        while self.at("keyword", "and"):
            tok = self.advance()
            right = self.parse_not()
            left = Call(fn="and", args=(left, right), pos=(tok.line, tok.col))
        return left

    def parse_not(self) -> Expr:
        if self.at("keyword", "not"):
            tok = self.advance()
            operand = self.parse_not()
            return Call(fn="not", args=(operand,), pos=(tok.line, tok.col))
        return self.parse_comparison()

    _CMP = {"<": "lt", "<=": "le", ">": "gt", ">=": "ge", "==": "eq", "!=": "ne"}

    def parse_comparison(self) -> Expr:
        left = self.parse_additive()
        if self.peek().kind == "op" and self.peek().text in self._CMP:
            tok = self.advance()
            right = self.parse_additive()
            return Call(fn=self._CMP[tok.text], args=(left, right), pos=(tok.line, tok.col))
        return left

    def parse_additive(self) -> Expr:
        left = self.parse_term()
        while self.peek().kind == "op" and self.peek().text in ("+", "-"):
            tok = self.advance()
            right = self.parse_term()
            fn = "add" if tok.text == "+" else "sub"
            left = Call(fn=fn, args=(left, right), pos=(tok.line, tok.col))
        return left

    def parse_term(self) -> Expr:
        left = self.parse_factor()
        while self.peek().kind == "op" and self.peek().text in ("*", "/"):
            tok = self.advance()
            right = self.parse_factor()
            fn = "mul" if tok.text == "*" else "div"
            left = Call(fn=fn, args=(left, right), pos=(tok.line, tok.col))
        return left

    def parse_factor(self) -> Expr:
        if self.at("op", "-"):
            tok = self.advance()
            operand = self.parse_factor()
            if isinstance(operand, Num):
                return Num(value=-operand.value, pos=(tok.line, tok.col))
            return Call(fn="neg", args=(operand,), pos=(tok.line, tok.col))
        return self.parse_primary()

    def parse_primary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            return Num(value=float(tok.text), pos=(tok.line, tok.col))
        if tok.kind == "punct" and tok.text == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect("punct", ")")
            return inner
        if tok.kind == "ident":
            self.advance()
            if tok.text in AGG_NAMES:
                self.expect("punct", "(")
                var = self.expect("ident").text
                self.expect("punct", ":")
                body = self.parse_expr()
                self.expect("punct", ")")
                return Agg(kind=tok.text, var=var, body=body, pos=(tok.line, tok.col))
            if self.at("punct", "("):
                self.advance()
                args: list[Expr] = []
                if not self.at("punct", ")"):
                    args.append(self.parse_expr())
                    while self.at("punct", ","):
                        self.advance()
                        args.append(self.parse_expr())
                self.expect("punct", ")")
                return Call(fn=tok.text, args=tuple(args), pos=(tok.line, tok.col))
            return Name(ident=tok.text, pos=(tok.line, tok.col))
        raise self.fail(f"expected an expression, found {tok.text or tok.kind!r}")


# --- Static validation ---------------------------------------------------


class _Validator:
    def __init__(self, limits: Limits):
        self.limits = limits
        self.issues: list[ParseIssue] = []

    def error(self, category: str, message: str, node: Node) -> str:
        self.issues.append(ParseIssue(category, message, node.pos[0], node.pos[1]))
        return NUM  # recover with a scalar so checking can continue

    def check(self, node: Expr, env: dict[str, str], agg_depth: int) -> str:
        if isinstance(node, Num):
            return NUM
        if isinstance(node, Name):
            if node.ident in env:
                return env[node.ident]
            if node.ident in SIGNATURES:
                return self.error(
                    "syntax", f"built-in {node.ident!r} must be called with parentheses", node
                )
            return self.error("unknown identifier", f"{node.ident!r} is not defined", node)
        if isinstance(node, Let):
            value_type = self.check(node.value, env, agg_depth)
            return self.check(node.body, {**env, node.name: value_type}, agg_depth)
        if isinstance(node, If):
            result: str | None = None
            for cond, expr in node.branches:
                cond_type = self.check(cond, env, agg_depth)
                if cond_type != BOOL:
                    self.error("type mismatch", f"condition must be boolean, got {cond_type}", cond)
                branch_type = self.check(expr, env, agg_depth)
                if result is None:
                    result = branch_type
                elif branch_type != result:
                    self.error(
                        "type mismatch",
                        f"branches disagree: {result} vs {branch_type}",
                        expr,
                    )
            orelse_type = self.check(node.orelse, env, agg_depth)
            if result is not None and orelse_type != result:
                self.error(
                    "type mismatch", f"branches disagree: {result} vs {orelse_type}", node.orelse
                )
            return result or orelse_type
        if isinstance(node, Agg):
            if agg_depth + 1 > self.limits.max_agg_depth:
                return self.error(
                    "limit exceeded",
                    f"aggregation depth exceeds {self.limits.max_agg_depth}",
                    node,
                )
            body_type = self.check(node.body, {**env, node.var: HUMAN}, agg_depth + 1)
            if body_type != NUM:
                self.error(
                    "type mismatch", f"aggregation body must be scalar, got {body_type}", node.body
                )
            return NUM
        if isinstance(node, Call):
            if node.fn not in SIGNATURES:
                for arg in node.args:
                    self.check(arg, env, agg_depth)
                return self.error("unknown identifier", f"unknown function {node.fn!r}", node)
            arg_types = tuple(self.check(arg, env, agg_depth) for arg in node.args)
            overloads = SIGNATURES[node.fn]
            for sig, ret in overloads:
                if sig == arg_types:
                    self._check_literal_args(node)
                    return ret
            wanted = " or ".join(
                "(" + ", ".join(sig) + ")" for sig, _ in overloads
            )
            return self.error(
                "type mismatch",
                f"{node.fn} expects {wanted}, got ({', '.join(arg_types)})",
                node,
            )
        raise TypeError(f"unknown node {node!r}")

    def _check_literal_args(self, node: Call) -> None:
        if node.fn == "pow":
            exponent = node.args[1]
            if not isinstance(exponent, Num) or exponent.value != int(exponent.value):
                self.error(
                    "type mismatch", "pow exponent must be an integer literal", node.args[1]
                )
            elif not (0 <= int(exponent.value) <= MAX_POW_EXPONENT):
                self.error(
                    "limit exceeded",
                    f"pow exponent must be in [0, {MAX_POW_EXPONENT}]",
                    node.args[1],
                )
        if node.fn == "predicted":
            step = node.args[1]
            if not isinstance(step, Num) or step.value != int(step.value) or step.value < 1:
                self.error(
                    "type mismatch",
                    "predicted() step must be an integer literal >= 1",
                    node.args[1],
                )


# --- Program container ----------------------------------------------------


@dataclass(frozen=True)
class Provenance:
    kind: str  # seed | llm_initial | mutation | crossover | refinement | restart
    parents: tuple[str, ...] = ()
    note: str = ""


@dataclass(frozen=True)
class RewardProgram:
    source: str
    ast: Expr
    limits: Limits
    provenance: Provenance
    node_count: int

    @property
    def digest(self) -> str:
        return hashlib.sha256(pretty(self.ast).encode("utf-8")).hexdigest()[:16]


def parse_program(
    source: str,
    limits: Limits | None = None,
    provenance: Provenance | None = None,
) -> RewardProgram:
    """Parse, type-check, and bound-check a candidate reward program.

    Raises ProgramParseError carrying line/column issues suitable for
    verbatim inclusion in retry feedback.  Never executes the program.
    """
    limits = limits or Limits()
    tokens = tokenize(source)
    ast = _Parser(tokens).parse_program()

    issues: list[ParseIssue] = []
    nodes = count_nodes(ast)
    if nodes > limits.max_nodes:
        issues.append(
            ParseIssue("limit exceeded", f"{nodes} nodes exceeds limit {limits.max_nodes}", 1, 1)
        )
    validator = _Validator(limits)
    result_type = validator.check(ast, {}, 0)
    issues.extend(validator.issues)
    if not validator.issues and result_type != NUM:
        issues.append(
            ParseIssue("type mismatch", f"program must produce a scalar, got {result_type}", 1, 1)
        )
    if issues:
        raise ProgramParseError(issues)
    return RewardProgram(
        source=source,
        ast=ast,
        limits=limits,
        provenance=provenance or Provenance(kind="llm_initial"),
        node_count=nodes,
    )


# --- Pretty printer -------------------------------------------------------

_PRECEDENCE = {
    "or": 1,
    "and": 2,
    "not": 3,
    "lt": 4,
    "le": 4,
    "gt": 4,
    "ge": 4,
    "eq": 4,
    "ne": 4,
    "add": 5,
    "sub": 5,
    "mul": 6,
    "div": 6,
    "neg": 7,
}


def _format_number(value: float) -> str:
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def _pretty(node: Expr, parent_prec: int) -> str:
    if isinstance(node, Num):
        if node.value < 0:
            text = f"-{_format_number(-node.value)}"
            return f"({text})" if parent_prec > _PRECEDENCE["neg"] else text
        return _format_number(node.value)
    if isinstance(node, Name):
        return node.ident
    if isinstance(node, Let):
        text = f"let {node.name} = {_pretty(node.value, 0)}; {_pretty(node.body, 0)}"
        return f"({text})" if parent_prec > 0 else text
    if isinstance(node, If):
        parts = []
        for i, (cond, expr) in enumerate(node.branches):
            head = "if" if i == 0 else "elif"
            parts.append(f"{head} {_pretty(cond, 0)} then {_pretty(expr, 0)}")
        parts.append(f"else {_pretty(node.orelse, 0)}")
        text = " ".join(parts)
        return f"({text})" if parent_prec > 0 else text
    if isinstance(node, Agg):
        return f"{node.kind}({node.var}: {_pretty(node.body, 0)})"
    if isinstance(node, Call):
        fn = node.fn
        if fn in ("and", "or"):
            prec = _PRECEDENCE[fn]
            text = f"{_pretty(node.args[0], prec)} {fn} {_pretty(node.args[1], prec + 1)}"
            return f"({text})" if parent_prec > prec else text
        if fn == "not":
            prec = _PRECEDENCE["not"]
            text = f"not {_pretty(node.args[0], prec)}"
            return f"({text})" if parent_prec > prec else text
        if fn == "neg":
            prec = _PRECEDENCE["neg"]
            text = f"-{_pretty(node.args[0], prec + 1)}"
            return f"({text})" if parent_prec > prec else text
        if fn in _OPERATOR_SUGAR:
            # sub doubles as the vec2 difference builtin; both print as "-".
            prec = _PRECEDENCE.get(fn, 4)
            op = _OPERATOR_SUGAR[fn]
            left = _pretty(node.args[0], prec)
            right = _pretty(node.args[1], prec + 1)
            text = f"{left} {op} {right}"
            return f"({text})" if parent_prec > prec else text
        args = ", ".join(_pretty(a, 0) for a in node.args)
        return f"{fn}({args})"
    raise TypeError(f"unknown node {node!r}")


def pretty(node: Expr | RewardProgram) -> str:
    """Canonical text form; re-parses to a structurally identical AST."""
    if isinstance(node, RewardProgram):
        node = node.ast
    return _pretty(node, 0)
