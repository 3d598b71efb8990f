"""The tokenizer, parser, and interpreter for KeyLang, the language used by
anisopy to write coefficient and source functions inside experiment configs
KeyLang is a simple calculator-based language. Each token in the language must
be separated by a space. The expressions follow standard order of operations.
The following are allowed operations:
+ : addition
- : subtraction (or negation in front of a base)
* : multiplication
/ : division
^ : exponent
( ... ) : parentheses (for overriding order of operations), where ... is any
expression
sin ( ... ), cos, exp, sqrt, abs, log : functions applied to an expression
any float literal
pi : the constant pi
x1, x2, x3 : coordinates, substituted upon interpretation time

KeyLang Grammar
-------------------
Expr -> Term + Expr | Term - Expr | Term       (evaluated left to right)
Term -> Unary * Term | Unary / Term | Unary    (evaluated left to right)
Unary -> - Unary | Factor
Factor -> Base ^ Unary | Base
Base -> Const | ( Expr ) | Func ( Expr )
Const -> <float literal> | pi | Var
Var -> x1 | x2 | x3

Example: sin ( pi * x1 ) * x2 ^ 2 - 1
"""
from typing import Callable, List, Set, Union

import numpy as np

__all__ = [
    "ExpressionSyntaxError",
    "Ast",
    "FUNCTIONS",
    "parse",
    "interpret",
    "variables",
    "compile_expression",
]


class ExpressionSyntaxError(Exception):
    """The exception thrown when a syntax error is found"""

    pass


FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "log": np.log,
}
"""The functions callable from KeyLang, by name"""

_VARIABLES = {"x1": 0, "x2": 1, "x3": 2}


class Ast(object):
    """The base class of the abstract syntax tree"""

    def __init__(self, left=None, right=None, data=None) -> None:
        self.left = left
        self.right = right
        self.data = data


class _Expr(Ast):
    """An expression in the KeyLang grammar"""

    def __str__(self) -> str:
        return f"( {self.left} {self.data} {self.right} )"


class _Term(Ast):
    """A term in the KeyLang grammar"""

    def __str__(self) -> str:
        return f"( {self.left} {self.data} {self.right} )"


class _Factor(Ast):
    """A factor in the KeyLang grammar"""

    def __str__(self) -> str:
        return f"( {self.left} ^ {self.right} )"


class _Neg(Ast):
    """A negated base in the KeyLang grammar"""

    def __str__(self) -> str:
        return f"- {self.left}"


class _Call(Ast):
    """A function call in the KeyLang grammar"""

    def __str__(self) -> str:
        return f"{self.data} ( {self.left} )"


class _Float(Ast):
    """A float literal in the KeyLang grammar"""

    def __str__(self) -> str:
        return f"{self.data}"


class _Var(Ast):
    """A coordinate variable in the KeyLang grammar"""

    def __str__(self) -> str:
        return f"x{self.data + 1}"


def parse(s: str) -> Ast:
    """Parses the inputed KeyLang expression into a KeyLang abstract syntax
    tree

    Parameters
    ----------
    s : str
        the expression to parse

    Returns
    -------
    Ast
        the KeyLang AST representative of the expression

    Raises
    ------
    ExpressionSyntaxError if the expression is malformed
    """
    tokens = _tokenize(s)
    ast = _parse_expr(tokens)
    if len(tokens) != 0:
        raise ExpressionSyntaxError(f'Unexpected token at -> {" ".join(tokens)}')
    return ast


def _tokenize(s: str) -> List[str]:
    """Converts the inputed KeyLang expression into a list of tokens

    Parameters
    ----------
    s : str
        the KeyLang expression to tokenize

    Returns
    -------
    List[str]
        the list of tokens"""
    return s.split()


def _parse_expr(tokens: List[str]) -> Ast:
    """Parses the inputted tokens as an expression

    Parameters
    ----------
    tokens : List[str]
        the list of tokens to parse

    Returns
    -------
    Ast
        the abstract syntax tree representative of the expression"""
    expr = _parse_term(tokens)
    while len(tokens) > 0 and tokens[0] in ("+", "-"):
        op = tokens.pop(0)
        expr = _Expr(expr, _parse_term(tokens), op)
    return expr


def _parse_term(tokens: List[str]) -> Ast:
    """Parses the inputted tokens as a term

    Parameters
    ----------
    tokens : List[str]
        the list of tokens to parse

    Returns
    -------
    Ast
        the abstract syntax tree representative of the term"""
    term = _parse_unary(tokens)
    while len(tokens) > 0 and tokens[0] in ("*", "/"):
        op = tokens.pop(0)
        term = _Term(term, _parse_unary(tokens), op)
    return term


def _parse_factor(tokens: List[str]) -> Ast:
    """Parses the inputted tokens as a factor

    Parameters
    ----------
    tokens : List[str]
        the list of tokens to parse

    Returns
    -------
    Ast
        the abstract syntax tree representative of the factor"""
    base = _parse_base(tokens)
    if len(tokens) == 0:
        return base
    match tokens[0]:
        case "^":
            tokens.pop(0)
            return _Factor(base, _parse_unary(tokens), "^")
        case _:
            return base


def _parse_unary(tokens: List[str]) -> Ast:
    """Parses the inputted tokens as an optionally negated factor"""
    if len(tokens) > 0 and tokens[0] == "-":
        tokens.pop(0)
        return _Neg(_parse_unary(tokens))
    return _parse_factor(tokens)


def _parse_base(tokens: List[str]) -> Ast:
    """Parses the inputted tokens as a base

    Parameters
    ----------
    tokens : List[str]
        the list of tokens to parse

    Returns
    -------
    Ast
        the abstract syntax tree representative of the base"""
    if len(tokens) == 0:
        raise ExpressionSyntaxError("Abrupt end of expression found")
    match tokens[0]:
        case "(":
            tokens.pop(0)
            base = _parse_expr(tokens)
            _expect_close(tokens)
            return base
        case name if name in FUNCTIONS:
            tokens.pop(0)
            if len(tokens) == 0 or tokens.pop(0) != "(":
                raise ExpressionSyntaxError(f"Missing parenthesis after {name}")
            arg = _parse_expr(tokens)
            _expect_close(tokens)
            return _Call(left=arg, data=name)
        case _:
            return _parse_const(tokens)


def _expect_close(tokens: List[str]) -> None:
    """Consumes a closing parenthesis or raises"""
    if len(tokens) == 0 or tokens.pop(0) != ")":
        raise ExpressionSyntaxError(f'Mismatched parentheses at -> {" ".join(tokens)}')


def _parse_const(tokens: List[str]) -> Ast:
    """Parses the inputted tokens as a constant

    Parameters
    ----------
    tokens : List[str]
        the list of tokens to parse

    Returns
    -------
    Ast
        the abstract syntax tree representative of the constant"""
    token = tokens.pop(0)
    match token:
        case "pi":
            return _Float(data=float(np.pi))
        case var if var in _VARIABLES:
            return _Var(data=_VARIABLES[var])
        case _:
            try:
                return _Float(data=float(token))
            except ValueError:
                raise ExpressionSyntaxError(
                    f'Float literal not found -> {" ".join([token] + tokens)}'
                )


def interpret(ast: Ast, x: np.ndarray) -> Union[float, np.ndarray]:
    """Evaluates the KeyLang AST at the given coordinates

    Parameters
    ----------
    ast : Ast
        the AST of the expression
    x : np.ndarray
        coordinates of shape (N, P) (or a single point of shape (N,))

    Returns
    -------
    Union[float, np.ndarray]
        the result of the expression, a float when no variable is used"""
    match ast:
        case _Expr():
            if ast.data == "+":
                return interpret(ast.left, x) + interpret(ast.right, x)
            return interpret(ast.left, x) - interpret(ast.right, x)
        case _Term():
            if ast.data == "*":
                return interpret(ast.left, x) * interpret(ast.right, x)
            return interpret(ast.left, x) / interpret(ast.right, x)
        case _Factor():
            return interpret(ast.left, x) ** interpret(ast.right, x)
        case _Neg():
            return -interpret(ast.left, x)
        case _Call():
            return FUNCTIONS[ast.data](interpret(ast.left, x))
        case _Float():
            return ast.data
        case _Var():
            if ast.data >= len(x):
                raise ExpressionSyntaxError(
                    f"{ast} used with {len(x)}-dimensional coordinates"
                )
            return x[ast.data]


def variables(ast: Ast) -> Set[int]:
    """Returns the zero-based coordinate indices the expression depends on

    Parameters
    ----------
    ast : Ast
        the AST of the expression

    Returns
    -------
    Set[int]
        the indices of the variables used
    """
    if ast is None:
        return set()
    if isinstance(ast, _Var):
        return {ast.data}
    return variables(ast.left) | variables(ast.right)


def compile_expression(s: str) -> Callable[[np.ndarray], Union[float, np.ndarray]]:
    """Parses the expression once and returns a function of the coordinates

    Parameters
    ----------
    s : str
        the KeyLang expression

    Returns
    -------
    Callable[[np.ndarray], Union[float, np.ndarray]]
        function evaluating the expression on coordinates of shape (N, P)
    """
    ast = parse(s)

    def evaluate(x: np.ndarray) -> Union[float, np.ndarray]:
        return interpret(ast, x)

    evaluate.ast = ast
    evaluate.source = s
    return evaluate
