"""Surface syntax for terms.

Grammar (whitespace separates applications, application is left-associative):

    term     := atomterm { atomterm }
    atomterm := "S" | "K" | "I" | "a" nat | "x" nat | "#" nat
              | "$" name | zeta | "(" term ")"
    zeta     := "z[" [ pair { "," pair } ] "]"
    pair     := nat "->" nat

``I`` and ``#n`` are sugar for the identity combinator and the numerals;
``$name`` resolves against the standard environment.  The plain printer in
the term module emits only core tokens; :func:`render` re-sugars numerals
(and the bare identity) for human output.  Both printers round-trip
through :func:`parse`.
"""

from __future__ import annotations

import re

from .stdlib import I, numeral, numeral_value, std_env
from .terms import App, Atom, Oracle, Perm, Term, TermError, Var


class ParseError(TermError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comb>[SKI])
  | (?P<atom>a(?P<atom_n>\d+))
  | (?P<var>x(?P<var_n>\d+))
  | (?P<num>\#(?P<num_n>\d+))
  | (?P<name>\$(?P<name_s>[A-Za-z_][A-Za-z0-9_]*))
  | (?P<zeta>z\[(?P<zeta_body>[^\]]*)\])
  | (?P<open>\()
  | (?P<close>\))
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup if m.lastgroup in ("open", "close") else None
        for name in ("comb", "atom", "var", "num", "name", "zeta", "open", "close"):
            if m.group(name):
                kind = name
                break
        if kind is not None and kind != "ws" and m.group("ws") is None:
            tokens.append((kind, m.group(0), pos))
        pos = m.end()
    return tokens


def parse_perm_body(body: str, position: int = 0) -> Perm:
    """Parse the inside of a permutation literal: '1->2,2->1'."""
    body = body.strip()
    if not body:
        return Perm.identity()
    pairs = []
    for chunk in body.split(","):
        m = re.fullmatch(r"\s*(\d+)\s*->\s*(\d+)\s*", chunk)
        if m is None:
            raise ParseError(f"bad permutation entry {chunk!r}", position)
        pairs.append((int(m.group(1)), int(m.group(2))))
    try:
        return Perm(tuple(pairs))
    except TermError as exc:
        raise ParseError(str(exc), position) from None


def parse_perm(text: str) -> Perm:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError("permutations are written [a->b,...]", 0)
    return parse_perm_body(text[1:-1])


def parse(text: str) -> Term:
    """Parse a term, expanding the sugar forms."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty input", 0)
    term, index = _parse_app(text, tokens, 0)
    if index != len(tokens):
        raise ParseError(f"trailing input {tokens[index][1]!r}", tokens[index][2])
    return term


def _parse_app(text: str, tokens, index: int) -> tuple[Term, int]:
    parts = []
    while index < len(tokens) and tokens[index][0] != "close":
        part, index = _parse_atom(text, tokens, index)
        parts.append(part)
    if not parts:
        pos = tokens[index][2] if index < len(tokens) else len(text)
        raise ParseError("expected a term", pos)
    out = parts[0]
    for p in parts[1:]:
        out = App(out, p)
    return out, index


def _parse_atom(text: str, tokens, index: int) -> tuple[Term, int]:
    kind, value, pos = tokens[index]
    if kind == "comb":
        from .terms import K as K_, S as S_

        if value == "S":
            return S_, index + 1
        if value == "K":
            return K_, index + 1
        return I, index + 1
    if kind == "atom":
        n = int(value[1:])
        if n < 1:
            raise ParseError("atom indices start at 1", pos)
        return Atom(n), index + 1
    if kind == "var":
        return Var(int(value[1:])), index + 1
    if kind == "num":
        return numeral(int(value[1:])), index + 1
    if kind == "name":
        env = std_env()
        name = value[1:]
        if name not in env:
            raise ParseError(f"unknown name ${name}", pos)
        return env[name], index + 1
    if kind == "zeta":
        return Oracle(parse_perm_body(value[2:-1], pos)), index + 1
    if kind == "open":
        term, index = _parse_app(text, tokens, index + 1)
        if index >= len(tokens) or tokens[index][0] != "close":
            raise ParseError("unbalanced parenthesis", pos)
        return term, index + 1
    raise ParseError(f"unexpected token {value!r}", pos)


def render(t: Term, sugar: bool = True) -> str:
    """Human-facing rendering: numerals print as #n, the bare identity as I.

    With ``sugar=False`` this is the plain core-token printer.
    """
    from .terms import print_term

    if not sugar:
        return print_term(t)
    out: list[str] = []
    _render_into(t, out, parenthesize=False)
    return " ".join(out)


def _render_into(t: Term, out: list[str], parenthesize: bool) -> None:
    if t == I:
        out.append("I")
        return
    value = numeral_value(t)
    if value is not None and value > 0:
        out.append(f"#{value}")
        return
    if isinstance(t, App):
        spine: list[Term] = []
        cur: Term = t
        while isinstance(cur, App) and cur != I and numeral_value(cur) is None:
            spine.append(cur.right)
            cur = cur.left
        parts: list[str] = []
        _render_into(cur, parts, parenthesize=True)
        for arg in reversed(spine):
            _render_into(arg, parts, parenthesize=True)
        rendered = " ".join(parts)
        if parenthesize and len(parts) > 1:
            rendered = f"({rendered})"
        out.append(rendered)
        return
    from .terms import _leaf_text

    out.append(_leaf_text(t))
