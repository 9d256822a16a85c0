"""Propositional formula language: syntax trees, parser, printer, substitution.

Connectives are ``!``, ``&``, ``|``, ``->`` and ``<->`` plus the constants
``true`` and ``false``.  Precedence is ``!`` over ``&`` over ``|`` over
``->`` over ``<->``; ``->`` associates to the right, ``<->`` to the left.
Trees are immutable and never simplified on construction, so a substitution
like (p & q)[p := false] really yields ``false & q``; callers squeeze
constants out explicitly with :func:`fold_constants` when they want to.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable


class Formula:
    """Base class of all formula nodes.  Nodes are immutable and hashable."""

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Constant(Formula):
    value: bool


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    children: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ValueError("And needs at least two children")


@dataclass(frozen=True)
class Or(Formula):
    children: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ValueError("Or needs at least two children")


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Iff(Formula):
    lhs: Formula
    rhs: Formula


TRUE = Constant(True)
FALSE = Constant(False)


def conj(parts: Iterable[Formula]) -> Formula:
    """Conjunction of ``parts``, flattening nested Ands; true when empty."""
    flat: list[Formula] = []
    for part in parts:
        if isinstance(part, And):
            flat.extend(part.children)
        else:
            flat.append(part)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def disj(parts: Iterable[Formula]) -> Formula:
    """Disjunction of ``parts``, flattening nested Ors; false when empty."""
    flat: list[Formula] = []
    for part in parts:
        if isinstance(part, Or):
            flat.extend(part.children)
        else:
            flat.append(part)
    if not flat:
        return FALSE
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def variables(formula: Formula) -> tuple[str, ...]:
    """Names of the atoms occurring in ``formula``, sorted, without duplicates."""
    seen: set[str] = set()
    stack = [formula]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            seen.add(node.name)
        elif isinstance(node, Not):
            stack.append(node.child)
        elif isinstance(node, (And, Or)):
            stack.extend(node.children)
        elif isinstance(node, (Implies, Iff)):
            stack.append(node.lhs)
            stack.append(node.rhs)
    return tuple(sorted(seen))


def substitute(formula: Formula, name: str, value: bool) -> Formula:
    """Replace every occurrence of atom ``name`` by the constant ``value``.

    Nothing else changes: no simplification happens, and a name absent from
    the formula is allowed (the formula comes back untouched).
    """
    if isinstance(formula, Atom):
        return Constant(value) if formula.name == name else formula
    if isinstance(formula, Constant):
        return formula
    if isinstance(formula, Not):
        return Not(substitute(formula.child, name, value))
    if isinstance(formula, And):
        return And(tuple(substitute(c, name, value) for c in formula.children))
    if isinstance(formula, Or):
        return Or(tuple(substitute(c, name, value) for c in formula.children))
    if isinstance(formula, Implies):
        return Implies(substitute(formula.lhs, name, value),
                       substitute(formula.rhs, name, value))
    if isinstance(formula, Iff):
        return Iff(substitute(formula.lhs, name, value),
                   substitute(formula.rhs, name, value))
    raise TypeError(f"not a formula node: {formula!r}")


def fold_constants(formula: Formula) -> Formula:
    """Equivalence-preserving cleanup: absorb true/false, drop double
    negations, flatten nested And/Or chains."""
    if isinstance(formula, (Atom, Constant)):
        return formula
    if isinstance(formula, Not):
        child = fold_constants(formula.child)
        if isinstance(child, Constant):
            return FALSE if child.value else TRUE
        if isinstance(child, Not):
            return child.child
        return Not(child)
    if isinstance(formula, (And, Or)):
        is_and = isinstance(formula, And)
        absorber, neutral = (False, True) if is_and else (True, False)
        flat: list[Formula] = []
        for raw in formula.children:
            child = fold_constants(raw)
            if isinstance(child, Constant):
                if child.value == absorber:
                    return Constant(absorber)
                continue  # neutral element
            if isinstance(child, And if is_and else Or):
                flat.extend(child.children)
            else:
                flat.append(child)
        if not flat:
            return Constant(neutral)
        if len(flat) == 1:
            return flat[0]
        return And(tuple(flat)) if is_and else Or(tuple(flat))
    if isinstance(formula, Implies):
        lhs = fold_constants(formula.lhs)
        rhs = fold_constants(formula.rhs)
        if isinstance(lhs, Constant):
            return rhs if lhs.value else TRUE
        if isinstance(rhs, Constant):
            return TRUE if rhs.value else fold_constants(Not(lhs))
        return Implies(lhs, rhs)
    if isinstance(formula, Iff):
        lhs = fold_constants(formula.lhs)
        rhs = fold_constants(formula.rhs)
        if isinstance(lhs, Constant):
            return rhs if lhs.value else fold_constants(Not(rhs))
        if isinstance(rhs, Constant):
            return lhs if rhs.value else fold_constants(Not(lhs))
        return Iff(lhs, rhs)
    raise TypeError(f"not a formula node: {formula!r}")


# ---------------------------------------------------------------------------
# printing

_PRECEDENCE = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5, Atom: 6, Constant: 6}


def format_formula(formula: Formula) -> str:
    """Render with minimal parentheses; ``parse`` inverts this exactly."""
    if isinstance(formula, Constant):
        return "true" if formula.value else "false"
    if isinstance(formula, Atom):
        return formula.name
    if isinstance(formula, Not):
        return "!" + _child_text(formula.child, 5)
    if isinstance(formula, And):
        return " & ".join(_child_text(c, 5) for c in formula.children)
    if isinstance(formula, Or):
        return " | ".join(_child_text(c, 4) for c in formula.children)
    if isinstance(formula, Implies):
        return f"{_child_text(formula.lhs, 3)} -> {_child_text(formula.rhs, 2)}"
    if isinstance(formula, Iff):
        return f"{_child_text(formula.lhs, 1)} <-> {_child_text(formula.rhs, 2)}"
    raise TypeError(f"not a formula node: {formula!r}")


def _child_text(formula: Formula, floor: int) -> str:
    text = format_formula(formula)
    if _PRECEDENCE[type(formula)] < floor:
        return f"({text})"
    return text


# ---------------------------------------------------------------------------
# parsing

class ParseError(Exception):
    """Raised on malformed input; carries the position of the offence."""

    def __init__(self, message: str, line: int, column: int, token: str | None = None):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column
        self.token = token


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_PUNCTUATION = ("<->", "->", "&", "|", "!", "(", ")")


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, column = 1, 1
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch == "\n":
            line += 1
            column = 1
            pos += 1
            continue
        if ch in " \t\r":
            pos += 1
            column += 1
            continue
        if ch == "#":
            nl = text.find("\n", pos)
            pos = len(text) if nl < 0 else nl
            continue
        match = _IDENT_RE.match(text, pos)
        if match:
            word = match.group()
            tokens.append(_Token("ident", word, line, column))
            pos += len(word)
            column += len(word)
            continue
        for punct in _PUNCTUATION:
            if text.startswith(punct, pos):
                tokens.append(_Token(punct, punct, line, column))
                pos += len(punct)
                column += len(punct)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, column, ch)
    tokens.append(_Token("eof", "", line, column))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def parse(self) -> Formula:
        node = self._iff()
        tok = self._peek()
        if tok.kind != "eof":
            raise ParseError(f"unexpected token {tok.text!r} after formula",
                             tok.line, tok.column, tok.text)
        return node

    def _peek(self) -> _Token:
        return self.tokens[self.pos]

    def _advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _iff(self) -> Formula:
        node = self._implies()
        while self._peek().kind == "<->":
            self._advance()
            node = Iff(node, self._implies())
        return node

    def _implies(self) -> Formula:
        node = self._or()
        if self._peek().kind == "->":
            self._advance()
            return Implies(node, self._implies())
        return node

    def _or(self) -> Formula:
        parts = [self._and()]
        while self._peek().kind == "|":
            self._advance()
            parts.append(self._and())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def _and(self) -> Formula:
        parts = [self._not()]
        while self._peek().kind == "&":
            self._advance()
            parts.append(self._not())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def _not(self) -> Formula:
        if self._peek().kind == "!":
            self._advance()
            return Not(self._not())
        return self._atom()

    def _atom(self) -> Formula:
        tok = self._peek()
        if tok.kind == "ident":
            self._advance()
            if tok.text == "true":
                return TRUE
            if tok.text == "false":
                return FALSE
            return Atom(tok.text)
        if tok.kind == "(":
            self._advance()
            node = self._iff()
            closing = self._peek()
            if closing.kind != ")":
                found = repr(closing.text) if closing.kind != "eof" else "end of input"
                raise ParseError(f"expected ')', found {found}",
                                 closing.line, closing.column, closing.text)
            self._advance()
            return node
        found = repr(tok.text) if tok.kind != "eof" else "end of input"
        raise ParseError(f"expected a formula, found {found}", tok.line, tok.column, tok.text)


def parse(text: str) -> Formula:
    """Parse ``text`` into a formula tree.

    Grammar (whitespace insignificant, ``#`` comments to end of line)::

        formula := iff
        iff     := implies ("<->" implies)*
        implies := or ("->" implies)?
        or      := and ("|" and)*
        and     := not ("&" not)*
        not     := "!" not | atom
        atom    := IDENT | "true" | "false" | "(" formula ")"
    """
    return _Parser(_tokenize(text)).parse()
