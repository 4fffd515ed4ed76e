"""Minimal s-expression reader and writer.

Values are nested Python lists with ``Symbol``, ``int`` and ``str`` leaves.
Strings are double-quoted with backslash escapes; ``;`` starts a comment to
end of line.  The writer emits a canonical single-line form that the reader
round-trips.
"""

from __future__ import annotations


class SexprError(ValueError):
    pass


class Symbol(str):
    """A bare identifier, distinct from a quoted string."""

    __slots__ = ()

    def __repr__(self) -> str:
        return f"Symbol({str.__repr__(self)})"


Sexpr = "Symbol | int | str | list"


def loads(text: str) -> list:
    """Read all top-level forms."""
    forms, index = [], 0
    n = len(text)
    while True:
        index = _skip_space(text, index)
        if index >= n:
            return forms
        form, index = _read(text, index)
        forms.append(form)


def loads_one(text: str):
    forms = loads(text)
    if len(forms) != 1:
        raise SexprError(f"expected one form, found {len(forms)}")
    return forms[0]


def _skip_space(text: str, index: int) -> int:
    n = len(text)
    while index < n:
        ch = text[index]
        if ch == ";":
            while index < n and text[index] != "\n":
                index += 1
        elif ch.isspace():
            index += 1
        else:
            break
    return index


def _read(text: str, index: int):
    ch = text[index]
    if ch == "(":
        items = []
        index += 1
        while True:
            index = _skip_space(text, index)
            if index >= len(text):
                raise SexprError("unterminated list")
            if text[index] == ")":
                return items, index + 1
            item, index = _read(text, index)
            items.append(item)
    if ch == ")":
        raise SexprError(f"unbalanced ')' at {index}")
    if ch == '"':
        out = []
        index += 1
        while index < len(text):
            ch = text[index]
            if ch == "\\":
                if index + 1 >= len(text):
                    raise SexprError("dangling escape")
                out.append(text[index + 1])
                index += 2
            elif ch == '"':
                return "".join(out), index + 1
            else:
                out.append(ch)
                index += 1
        raise SexprError("unterminated string")
    start = index
    while index < len(text) and not text[index].isspace() and text[index] not in '()";':
        index += 1
    token = text[start:index]
    try:
        return int(token), index
    except ValueError:
        return Symbol(token), index


def dumps(value) -> str:
    if isinstance(value, list):
        return "(" + " ".join(dumps(v) for v in value) + ")"
    if isinstance(value, Symbol):
        return str(value)
    if isinstance(value, bool):
        raise SexprError("booleans have no surface form")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    raise SexprError(f"cannot serialize {value!r}")
