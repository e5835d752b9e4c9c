"""
表达式小语言：解析、规范打印与求值。

文法（优先级 ^ > 一元负号 > * / > + -，^ 右结合）：
    sum    := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | 'x' | ('exp' | 'ln') '(' sum ')' | '(' sum ')'

树深度不超过 config.MAX_EXPR_DEPTH；数字字面量必须是有限浮点数。
"""
import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import List, Protocol, Tuple, Union

import numpy as np

from src.common import config, messages
from src.common.errors import ExprSyntaxError, InvalidInputError, UnknownIdentifierError


# ---------- 节点定义 ----------
class UnaryOp(Enum):
    NEG = "-"
    EXP = "exp"
    LN = "ln"


class BinaryOp(Enum):
    ADD = "+"
    SUB = "-"
    MUL = "*"
    DIV = "/"
    POW = "^"


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str = "x"


@dataclass(frozen=True)
class Unary:
    op: UnaryOp
    arg: "Expr"


@dataclass(frozen=True)
class Binary:
    op: BinaryOp
    left: "Expr"
    right: "Expr"


Expr = Union[Const, Var, Unary, Binary]
EXPR_TYPES = (Const, Var, Unary, Binary)


@dataclass(frozen=True)
class OutOfDomain:
    """求值越界标记：携带出错的子表达式与 x"""
    node: Expr
    x: float
    reason: str

    def describe(self) -> str:
        return messages.ERR_OUT_OF_DOMAIN.format(node=print_canonical(self.node), x=self.x, reason=self.reason)


Value = Union[float, OutOfDomain]


# ---------- 词法分析 ----------
_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)

_FUNCTIONS = {"exp": UnaryOp.EXP, "ln": UnaryOp.LN}
_EOF = "EOF"
# 规范形式每层树节点至多嵌套两层（括号加负号或指数）
_NESTING_LIMIT = 2 * config.MAX_EXPR_DEPTH


@dataclass
class _Token:
    kind: str   # number / ident / op / EOF
    text: str
    position: int


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExprSyntaxError(
                messages.ERR_SYNTAX.format(position=bad, detail=messages.ERR_UNEXPECTED_CHAR.format(char=text[bad])),
                bad,
            )
        kind = m.lastgroup
        tokens.append(_Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(_Token(_EOF, "", len(text)))
    return tokens


# ---------- 语法分析（递归下降） ----------
class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.index = 0
        self.depth = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def fail(self, expected: str):
        tok = self.current
        found = messages.ERR_END_OF_INPUT if tok.kind == _EOF else f"'{tok.text}'"
        raise ExprSyntaxError(
            messages.ERR_SYNTAX.format(
                position=tok.position,
                detail=messages.ERR_EXPECTED.format(expected=expected, found=found),
            ),
            tok.position,
        )

    def expect_op(self, op: str):
        if self.current.kind == "op" and self.current.text == op:
            return self.advance()
        self.fail(f"'{op}'")

    def at_op(self, *ops: str) -> bool:
        return self.current.kind == "op" and self.current.text in ops

    def parse(self) -> Expr:
        node = self.sum()
        if self.current.kind != _EOF:
            self.fail(messages.ERR_END_OF_INPUT)
        return node

    def sum(self) -> Expr:
        node = self.term()
        while self.at_op("+", "-"):
            op = BinaryOp.ADD if self.advance().text == "+" else BinaryOp.SUB
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.at_op("*", "/"):
            op = BinaryOp.MUL if self.advance().text == "*" else BinaryOp.DIV
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        # 每层括号、函数参数、负号与指数都经过这里
        if self.depth >= _NESTING_LIMIT:
            tok = self.current
            raise ExprSyntaxError(
                messages.ERR_SYNTAX.format(
                    position=tok.position, detail=messages.ERR_TOO_DEEP.format(limit=_NESTING_LIMIT)),
                tok.position,
            )
        self.depth += 1
        try:
            if self.at_op("-"):
                self.advance()
                return Unary(UnaryOp.NEG, self.unary())
            return self.power()
        finally:
            self.depth -= 1

    def power(self) -> Expr:
        base = self.atom()
        if self.at_op("^"):
            self.advance()
            # 右结合：指数部分再次进入 unary
            return Binary(BinaryOp.POW, base, self.unary())
        return base

    def atom(self) -> Expr:
        tok = self.current
        if tok.kind == "number":
            self.advance()
            value = float(tok.text)
            if not math.isfinite(value):
                raise ExprSyntaxError(
                    messages.ERR_SYNTAX.format(
                        position=tok.position, detail=messages.ERR_NON_FINITE_LITERAL.format(text=tok.text)),
                    tok.position,
                )
            return Const(value)
        if tok.kind == "ident":
            self.advance()
            if tok.text == "x":
                return Var()
            if tok.text in _FUNCTIONS:
                self.expect_op("(")
                arg = self.sum()
                self.expect_op(")")
                return Unary(_FUNCTIONS[tok.text], arg)
            raise UnknownIdentifierError(
                messages.ERR_UNKNOWN_IDENTIFIER.format(name=tok.text, position=tok.position),
                tok.text,
                tok.position,
            )
        if self.at_op("("):
            self.advance()
            node = self.sum()
            self.expect_op(")")
            return node
        self.fail(messages.EXPECTED_OPERAND)


def parse(text: str) -> Expr:
    """把文本解析为表达式树"""
    if text is None or not text.strip():
        raise InvalidInputError(messages.ERR_EMPTY_EXPR)
    node = _Parser(text).parse()
    depth = expr_depth(node)
    if depth > config.MAX_EXPR_DEPTH:
        raise ExprSyntaxError(
            messages.ERR_SYNTAX.format(
                position=0, detail=messages.ERR_TREE_TOO_DEEP.format(depth=depth, limit=config.MAX_EXPR_DEPTH)),
            0,
        )
    return node


def expr_depth(e: Expr) -> int:
    """树深度（叶子为 1），显式栈实现，不受递归上限影响"""
    deepest = 0
    stack = [(e, 1)]
    while stack:
        node, depth = stack.pop()
        deepest = max(deepest, depth)
        if isinstance(node, Unary):
            stack.append((node.arg, depth + 1))
        elif isinstance(node, Binary):
            stack.append((node.left, depth + 1))
            stack.append((node.right, depth + 1))
    return deepest


def _too_deep(e: Expr) -> InvalidInputError:
    return InvalidInputError(messages.ERR_TREE_TOO_DEEP.format(depth=expr_depth(e), limit=config.MAX_EXPR_DEPTH))


# ---------- 规范打印 ----------
def format_number(value: float) -> str:
    if math.isfinite(value) and float(value).is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(float(value))


def print_canonical(e: Expr) -> str:
    """全括号规范形式，parse(print_canonical(e)) == e"""
    try:
        return _print(e)
    except RecursionError:
        raise _too_deep(e) from None


def _print(e: Expr) -> str:
    if isinstance(e, Const):
        return format_number(e.value)
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Unary):
        inner = _print(e.arg)
        if e.op is UnaryOp.NEG:
            return f"(-{inner})"
        return f"{e.op.value}({inner})"
    return f"({_print(e.left)} {e.op.value} {_print(e.right)})"


def substitute(e: Expr, replacement: Expr) -> Expr:
    """把变量 x 替换为 replacement，用于构造 φ∘f、exp∘g"""
    try:
        return _substitute(e, replacement)
    except RecursionError:
        raise _too_deep(e) from None


def _substitute(e: Expr, replacement: Expr) -> Expr:
    if isinstance(e, Var):
        return replacement
    if isinstance(e, Const):
        return e
    if isinstance(e, Unary):
        return Unary(e.op, _substitute(e.arg, replacement))
    return Binary(e.op, _substitute(e.left, replacement), _substitute(e.right, replacement))


def exp_of(e: Expr) -> Expr:
    return Unary(UnaryOp.EXP, e)


def ln_of(e: Expr) -> Expr:
    return Unary(UnaryOp.LN, e)


# ---------- 标量求值 ----------
def evaluate(e: Expr, x: float) -> Value:
    """在 x 处求值；越界返回 OutOfDomain，溢出得到 ±inf（扩展实数）"""
    try:
        return _evaluate(e, x)
    except RecursionError:
        raise _too_deep(e) from None


def _evaluate(e: Expr, x: float) -> Value:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return float(x)
    if isinstance(e, Unary):
        a = _evaluate(e.arg, x)
        if isinstance(a, OutOfDomain):
            return a
        if e.op is UnaryOp.NEG:
            return -a
        if e.op is UnaryOp.EXP:
            try:
                return math.exp(a)
            except OverflowError:
                return math.inf
        if a <= 0:
            return OutOfDomain(e, x, messages.ERR_REASON_LN_DOMAIN)
        return math.log(a)

    left = _evaluate(e.left, x)
    if isinstance(left, OutOfDomain):
        return left
    right = _evaluate(e.right, x)
    if isinstance(right, OutOfDomain):
        return right
    op = e.op
    if op is BinaryOp.ADD:
        result = left + right
    elif op is BinaryOp.SUB:
        result = left - right
    elif op is BinaryOp.MUL:
        result = left * right
    elif op is BinaryOp.DIV:
        if right == 0:
            return OutOfDomain(e, x, messages.ERR_REASON_DIV_ZERO)
        result = left / right
    else:
        result = _scalar_pow(e, x, left, right)
        if isinstance(result, OutOfDomain):
            return result
    if math.isnan(result):
        return OutOfDomain(e, x, messages.ERR_REASON_NAN)
    return result


def _scalar_pow(e: Expr, x: float, base: float, exponent: float) -> Value:
    if base == 0 and exponent < 0:
        return OutOfDomain(e, x, messages.ERR_REASON_DIV_ZERO)
    integral = math.isfinite(exponent) and float(exponent).is_integer()
    if base < 0 and not integral:
        return OutOfDomain(e, x, messages.ERR_REASON_NAN)
    try:
        return math.pow(base, exponent)
    except OverflowError:
        if base < 0 and integral and int(exponent) % 2 == 1:
            return -math.inf
        return math.inf
    except ValueError:
        return OutOfDomain(e, x, messages.ERR_REASON_NAN)


# ---------- 向量化求值 ----------
def evaluate_array(e: Expr, xs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    在数组上求值，返回 (values, ok)。
    ok 为 False 的位置即标量 evaluate 会返回 OutOfDomain 的位置，values 在那里为 NaN。
    """
    xs = np.asarray(xs, dtype=float)
    with np.errstate(all="ignore"):
        try:
            values, ok = _eval_array(e, xs)
        except RecursionError:
            raise _too_deep(e) from None
        values = np.where(ok, values, np.nan)
    return values, ok


def _eval_array(e: Expr, xs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(e, Const):
        return np.full(xs.shape, e.value, dtype=float), np.ones(xs.shape, dtype=bool)
    if isinstance(e, Var):
        return xs.copy(), np.ones(xs.shape, dtype=bool)
    if isinstance(e, Unary):
        a, ok = _eval_array(e.arg, xs)
        if e.op is UnaryOp.NEG:
            return -a, ok
        if e.op is UnaryOp.EXP:
            return np.exp(a), ok
        ok = ok & (a > 0)
        return np.log(np.where(ok, a, 1.0)), ok

    left, ok_l = _eval_array(e.left, xs)
    right, ok_r = _eval_array(e.right, xs)
    ok = ok_l & ok_r
    op = e.op
    if op is BinaryOp.ADD:
        result = left + right
    elif op is BinaryOp.SUB:
        result = left - right
    elif op is BinaryOp.MUL:
        result = left * right
    elif op is BinaryOp.DIV:
        ok = ok & (right != 0)
        result = left / np.where(right != 0, right, 1.0)
    else:
        integral = np.isfinite(right) & (np.floor(right) == right)
        ok = ok & ~((left == 0) & (right < 0)) & ~((left < 0) & ~integral)
        result = np.power(left, right)
    ok = ok & ~np.isnan(result)
    return result, ok


# ---------- 被积函数协议 ----------
class Integrand(Protocol):
    """求积、水平集与 Sugeno 求解共同使用的被积函数接口"""

    def value(self, x: float) -> Value:
        ...

    def values(self, xs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        ...

    def describe(self) -> str:
        ...


class ExprIntegrand:
    """把表达式树包装成被积函数"""

    def __init__(self, expr: Expr):
        self.expr = expr

    def value(self, x: float) -> Value:
        return evaluate(self.expr, x)

    def values(self, xs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return evaluate_array(self.expr, xs)

    def describe(self) -> str:
        return print_canonical(self.expr)


def as_integrand(f) -> Integrand:
    if isinstance(f, EXPR_TYPES):
        return ExprIntegrand(f)
    if isinstance(f, str):
        return ExprIntegrand(parse(f))
    return f


def is_expr(obj) -> bool:
    return isinstance(obj, EXPR_TYPES)
