"""Small arithmetic expression language for coefficients and signals.

Scenario files describe PDE coefficients, nonlinearities, disturbances and
initial data as strings like ``"3*x^2 - 3/ln(2)*x*ln(1+x)"``.  This module
tokenizes and parses them into a small AST, evaluates the AST on scalars or
numpy arrays, and compiles it to a flat postfix program that the jitted
solver kernel can interpret without calling back into Python.

Grammar (loosest binding first)::

    expr   :=  term  (('+'|'-') term)*
    term   :=  unary (('*'|'/') unary)*
    unary  :=  '-' unary | power
    power  :=  atom ('^' unary)?          # right-associative, binds tighter
    atom   :=  NUMBER | ident '(' args ')' | ident | '(' expr ')'

so ``-x^2`` is ``-(x^2)`` and ``2^3^2`` is ``2^(3^2)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ExprError",
    "EvalError",
    "Num",
    "Var",
    "Neg",
    "Bin",
    "Call",
    "Expr",
    "parse_expr",
    "eval_expr",
    "compile_program",
    "VAR_SLOTS",
]

#: variable name -> environment slot used by the compiled program
VAR_SLOTS = {"x": 0, "t": 1, "w": 2, "wx": 3, "s": 4, "r": 5}

_UNARY_FUNCTIONS = ("sin", "cos", "tan", "exp", "ln", "abs", "sqrt", "tanh")
_BINARY_FUNCTIONS = ("min", "max", "pow")
FUNCTIONS = _UNARY_FUNCTIONS + _BINARY_FUNCTIONS


class ExprError(ValueError):
    """Parse-time error; ``position`` is the 0-based character offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position
        self.reason = message


class EvalError(ValueError):
    """Evaluation-time error (unbound variable, ln/sqrt domain violation)."""


# --------------------------------------------------------------------------
# AST
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class Bin:
    op: str  # one of + - * / ^
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        mo = _TOKEN_RE.match(text, pos)
        if mo is None or mo.end() == pos:
            # skip leading whitespace before reporting
            stripped = pos
            while stripped < len(text) and text[stripped].isspace():
                stripped += 1
            if stripped == len(text):
                break
            raise ExprError(f"unexpected character {text[stripped]!r}", stripped)
        if mo.group("num") is not None:
            tokens.append(("num", float(mo.group("num")), mo.start("num")))
        elif mo.group("ident") is not None:
            tokens.append(("ident", mo.group("ident"), mo.start("ident")))
        else:
            tokens.append(("op", mo.group("op"), mo.start("op")))
        pos = mo.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens, allowed_vars):
        self.tokens = tokens
        self.allowed = frozenset(allowed_vars)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, symbol):
        kind, val, pos = self.peek()
        if kind == "op" and val == symbol:
            return self.advance()
        raise ExprError(f"expected {symbol!r}", pos)

    def parse(self):
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprError(f"unexpected token {val!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.advance()
                node = Bin(val, node, self.term())
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.advance()
                node = Bin(val, node, self.unary())
            else:
                return node

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.advance()
            # exponent may itself carry a unary minus: 2^-3
            node = Bin("^", node, self.unary())
        return node

    def atom(self):
        kind, val, pos = self.advance()
        if kind == "num":
            return Num(val)
        if kind == "ident":
            nkind, nval, _ = self.peek()
            if nkind == "op" and nval == "(":
                return self.call(val, pos)
            if val in FUNCTIONS:
                raise ExprError(f"function {val!r} requires arguments", pos)
            if val not in self.allowed:
                raise ExprError(f"unknown identifier {val!r}", pos)
            return Var(val)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "end":
            raise ExprError("unexpected end of expression", pos)
        raise ExprError(f"unexpected token {val!r}", pos)

    def call(self, name, pos):
        if name not in FUNCTIONS:
            raise ExprError(f"unknown function {name!r}", pos)
        self.expect_op("(")
        args = [self.expr()]
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == ",":
                self.advance()
                args.append(self.expr())
            else:
                break
        self.expect_op(")")
        want = 2 if name in _BINARY_FUNCTIONS else 1
        if len(args) != want:
            raise ExprError(
                f"function {name!r} takes {want} argument(s), got {len(args)}", pos
            )
        return Call(name, tuple(args))


def parse_expr(text, allowed_vars=()):
    """Parse ``text`` into an AST; only ``allowed_vars`` may appear.

    Raises ExprError (with a 0-based ``position``) on syntax errors, unknown
    identifiers, disallowed variables, and arity mismatches.
    """
    if not isinstance(text, str) or not text.strip():
        raise ExprError("empty expression", 0)
    for name in allowed_vars:
        if name not in VAR_SLOTS:
            raise ValueError(f"unsupported variable name {name!r}")
    return _Parser(_tokenize(text), allowed_vars).parse()


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------

_NUMPY_FN = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "exp": np.exp,
    "tanh": np.tanh,
    "min": np.minimum,
    "max": np.maximum,
    "pow": np.power,
    "abs": np.abs,
}


def eval_expr(ast, env):
    """Evaluate an AST with IEEE-double semantics.

    ``env`` maps variable names to floats or numpy arrays.  ``ln`` of a
    nonpositive value and ``sqrt`` of a negative value raise EvalError; the
    remaining operations follow IEEE arithmetic (division by zero gives inf).
    """
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        return _eval(ast, env)


def _eval(ast, env):
    if isinstance(ast, Num):
        return ast.value
    if isinstance(ast, Var):
        try:
            return env[ast.name]
        except KeyError:
            raise EvalError(f"unbound variable {ast.name!r}") from None
    if isinstance(ast, Neg):
        return -_eval(ast.operand, env)
    if isinstance(ast, Bin):
        left = _eval(ast.left, env)
        right = _eval(ast.right, env)
        if ast.op == "+":
            return left + right
        if ast.op == "-":
            return left - right
        if ast.op == "*":
            return left * right
        if ast.op == "/":
            return np.divide(left, right)
        return np.power(left, right)
    if isinstance(ast, Call):
        args = [_eval(arg, env) for arg in ast.args]
        if ast.fn == "ln":
            if np.any(np.asarray(args[0]) <= 0.0):
                raise EvalError("ln of nonpositive value")
            return np.log(args[0])
        if ast.fn == "sqrt":
            if np.any(np.asarray(args[0]) < 0.0):
                raise EvalError("sqrt of negative value")
            return np.sqrt(args[0])
        return _NUMPY_FN[ast.fn](*args)
    raise TypeError(f"not an expression node: {ast!r}")


# --------------------------------------------------------------------------
# postfix program (consumed by the jitted solver kernel)
# --------------------------------------------------------------------------

# opcode numbering shared with issverify._kernel
OP_CONST = 0
OP_VAR = 1
OP_NEG = 2
OP_ADD = 3
OP_SUB = 4
OP_MUL = 5
OP_DIV = 6
OP_POW = 7
OP_SIN = 8
OP_COS = 9
OP_TAN = 10
OP_EXP = 11
OP_LN = 12
OP_ABS = 13
OP_SQRT = 14
OP_TANH = 15
OP_MIN = 16
OP_MAX = 17
OP_POWI = 18  # small integer power, exponent in the arg slot

_FN_OPCODE = {
    "sin": OP_SIN,
    "cos": OP_COS,
    "tan": OP_TAN,
    "exp": OP_EXP,
    "ln": OP_LN,
    "abs": OP_ABS,
    "sqrt": OP_SQRT,
    "tanh": OP_TANH,
    "min": OP_MIN,
    "max": OP_MAX,
    "pow": OP_POW,
}

MAX_STACK = 64


@dataclass(frozen=True)
class Program:
    code: np.ndarray  # int32 opcodes
    args: np.ndarray  # int32 operand (const index or var slot)
    consts: np.ndarray  # float64 pool


def compile_program(ast):
    """Flatten an AST into the postfix Program run by the solver kernel."""
    code, args, consts = [], [], []

    def emit(node):
        if isinstance(node, Num):
            code.append(OP_CONST)
            args.append(len(consts))
            consts.append(float(node.value))
        elif isinstance(node, Var):
            code.append(OP_VAR)
            args.append(VAR_SLOTS[node.name])
        elif isinstance(node, Neg):
            emit(node.operand)
            code.append(OP_NEG)
            args.append(0)
        elif isinstance(node, Bin):
            if (node.op == "^" and isinstance(node.right, Num)
                    and float(node.right.value).is_integer()
                    and 2 <= node.right.value <= 16):
                emit(node.left)
                code.append(OP_POWI)
                args.append(int(node.right.value))
                return
            emit(node.left)
            emit(node.right)
            code.append({"+": OP_ADD, "-": OP_SUB, "*": OP_MUL,
                         "/": OP_DIV, "^": OP_POW}[node.op])
            args.append(0)
        elif isinstance(node, Call):
            for arg in node.args:
                emit(arg)
            code.append(_FN_OPCODE[node.fn])
            args.append(0)
        else:
            raise TypeError(f"not an expression node: {node!r}")

    emit(ast)
    depth = 0
    peak = 0
    for op in code:
        if op in (OP_CONST, OP_VAR):
            depth += 1
        elif op in (OP_ADD, OP_SUB, OP_MUL, OP_DIV, OP_POW, OP_MIN, OP_MAX):
            depth -= 1
        peak = max(peak, depth)
    if peak > MAX_STACK:
        raise ExprError("expression too deep", 0)
    return Program(
        code=np.asarray(code, dtype=np.int32),
        args=np.asarray(args, dtype=np.int32),
        consts=np.asarray(consts, dtype=np.float64),
    )


def _collect_vars(ast, out):
    if isinstance(ast, Var):
        out.add(ast.name)
    elif isinstance(ast, Neg):
        _collect_vars(ast.operand, out)
    elif isinstance(ast, Bin):
        _collect_vars(ast.left, out)
        _collect_vars(ast.right, out)
    elif isinstance(ast, Call):
        for arg in ast.args:
            _collect_vars(arg, out)


class Expr:
    """A parsed coefficient/signal: text + AST + compiled program.

    Callable with keyword variable bindings; broadcasting over numpy arrays
    follows from the underlying numpy evaluation.
    """

    __slots__ = ("text", "ast", "program", "variables")

    def __init__(self, text, allowed_vars=()):
        self.text = text
        self.ast = parse_expr(text, allowed_vars)
        self.program = compile_program(self.ast)
        used = set()
        _collect_vars(self.ast, used)
        self.variables = frozenset(used)

    def __call__(self, **env):
        return eval_expr(self.ast, env)

    def uses(self, name):
        return name in self.variables

    def __repr__(self):
        return f"Expr({self.text!r})"
