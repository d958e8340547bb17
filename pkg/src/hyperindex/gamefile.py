"""Text format for game trees.

::

    node     := chance | decision | terminal
    chance   := "chance" "{" (rational ":" node)+ "}"
    decision := "player" int "infoset" string "{" (label ":" node)+ "}"
    terminal := "(" rational "," rational ")"

Strings and labels are bare words or double-quoted. ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .exactcore import fmt
from .gametree import Chance, Decision, GameTree, Terminal, validate_tree


class GameFileError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Token:
    kind: str  # "punct", "word", "string", "eof"
    text: str
    line: int
    col: int


_TOKEN = re.compile(r'\s+|#[^\n]*|"(?:[^"\\]|\\.)*"|[{}():,]|[^\s{}():,"#]+')
_RATIONAL = re.compile(r"^[+-]?\d+(?:/\d+|\.\d+)?$")


def tokenize(text: str) -> list:
    tokens = []
    line = 1
    pos = 0
    line_start = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise GameFileError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        s = m.group(0)
        col = pos - line_start + 1
        if s[0] == '"':
            tokens.append(Token("string", re.sub(r"\\(.)", r"\1", s[1:-1]), line, col))
        elif s in "{}():,":
            tokens.append(Token("punct", s, line, col))
        elif not s.isspace() and not s.startswith("#"):
            tokens.append(Token("word", s, line, col))
        nl = s.count("\n")
        if nl:
            line += nl
            line_start = pos + s.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.next()
        if t.kind != "punct" or t.text != text:
            raise GameFileError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return t

    def rational(self) -> Fraction:
        t = self.next()
        if t.kind != "word" or not _RATIONAL.match(t.text):
            raise GameFileError(f"expected a rational, found {t.text or 'end of input'!r}", t.line, t.col)
        if "/" in t.text:
            num, den = t.text.split("/")
            if int(den) == 0:
                raise GameFileError(f"zero denominator in rational {t.text!r}", t.line, t.col)
            return Fraction(int(num), int(den))
        return Fraction(t.text)

    def name(self, what: str) -> str:
        t = self.next()
        if t.kind not in ("word", "string"):
            raise GameFileError(f"expected {what}, found {t.text or 'end of input'!r}", t.line, t.col)
        return t.text

    def node(self):
        t = self.peek()
        if t.kind == "punct" and t.text == "(":
            self.next()
            a = self.rational()
            self.expect(",")
            b = self.rational()
            self.expect(")")
            return Terminal((a, b))
        if t.kind == "word" and t.text == "chance":
            self.next()
            self.expect("{")
            branches = []
            while not self._at("}"):
                p = self.rational()
                self.expect(":")
                branches.append((p, self.node()))
            self.expect("}")
            if not branches:
                raise GameFileError("chance node needs at least one branch", t.line, t.col)
            return Chance(tuple(branches))
        if t.kind == "word" and t.text == "player":
            self.next()
            pt = self.next()
            if pt.kind != "word" or pt.text not in ("1", "2"):
                raise GameFileError(f"player must be 1 or 2, found {pt.text!r}", pt.line, pt.col)
            kw = self.next()
            if kw.kind != "word" or kw.text != "infoset":
                raise GameFileError(f"expected 'infoset', found {kw.text!r}", kw.line, kw.col)
            iid = self.name("an infoset id")
            self.expect("{")
            branches = []
            while not self._at("}"):
                label = self.name("an action label")
                self.expect(":")
                branches.append((label, self.node()))
            self.expect("}")
            if not branches:
                raise GameFileError("decision node needs at least one action", t.line, t.col)
            return Decision(int(pt.text), iid, tuple(branches))
        raise GameFileError(f"expected a node, found {t.text or 'end of input'!r}", t.line, t.col)

    def _at(self, punct: str) -> bool:
        t = self.peek()
        if t.kind == "eof":
            raise GameFileError(f"unexpected end of input, expected {punct!r}", t.line, t.col)
        return t.kind == "punct" and t.text == punct


def parse_game(text: str, validate: bool = True) -> GameTree:
    """Parse a game file; raises GameFileError with a position on failure."""
    p = _Parser(text)
    root = p.node()
    t = p.peek()
    if t.kind != "eof":
        raise GameFileError(f"trailing input {t.text!r}", t.line, t.col)
    tree = GameTree(root)
    if validate:
        diags = validate_tree(tree)
        if diags:
            raise GameFileError("invalid game: " + "; ".join(diags))
    return tree


def _quote(s: str) -> str:
    if re.fullmatch(r'[^\s{}():,"#]+', s) and s not in ("chance", "player", "infoset"):
        return s
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def dump_game(tree_or_root, indent: str = "  ") -> str:
    """Inverse of parse_game."""
    root = tree_or_root.root if isinstance(tree_or_root, GameTree) else tree_or_root
    lines: list[str] = []

    def emit(node, depth, prefix):
        pad = indent * depth
        if isinstance(node, Terminal):
            lines.append(f"{pad}{prefix}({fmt(node.payoff[0])}, {fmt(node.payoff[1])})")
        elif isinstance(node, Chance):
            lines.append(f"{pad}{prefix}chance {{")
            for p, c in node.branches:
                emit(c, depth + 1, f"{fmt(p)}: ")
            lines.append(f"{pad}}}")
        else:
            lines.append(f"{pad}{prefix}player {node.player} infoset {_quote(node.infoset)} {{")
            for a, c in node.branches:
                emit(c, depth + 1, f"{_quote(a)}: ")
            lines.append(f"{pad}}}")

    emit(root, 0, "")
    return "\n".join(lines) + "\n"
