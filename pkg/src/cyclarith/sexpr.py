"""A small s-expression reader and printer with source positions."""
from __future__ import annotations


class SexprError(ValueError):
    def __init__(self, message: str, pos=None):
        self.pos = pos
        where = f"{pos[0]}:{pos[1]}: " if pos else ""
        super().__init__(where + message)


class Sym(str):
    """An atom; remembers where it was read."""

    pos = None

    def __new__(cls, text, pos=None):
        obj = super().__new__(cls, text)
        obj.pos = pos
        return obj


class SList(list):
    pos = None

    def __init__(self, items=(), pos=None):
        super().__init__(items)
        self.pos = pos


DELIMS = set("() \t\r\n;")


def read_all(text: str) -> list:
    """Parse every datum in ``text``."""
    stack = [SList(pos=(1, 1))]
    line, col, i, n = 1, 1, 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if c in " \t\r":
            i, col = i + 1, col + 1
            continue
        if c == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == "(":
            stack.append(SList(pos=(line, col)))
            i, col = i + 1, col + 1
            continue
        if c == ")":
            if len(stack) == 1:
                raise SexprError("unbalanced ')'", (line, col))
            done = stack.pop()
            stack[-1].append(done)
            i, col = i + 1, col + 1
            continue
        j = i
        while j < n and text[j] not in DELIMS:
            j += 1
        stack[-1].append(Sym(text[i:j], (line, col)))
        col += j - i
        i = j
    if len(stack) != 1:
        raise SexprError("unclosed '('", stack[-1].pos)
    return list(stack[0])


def read_one(text: str):
    items = read_all(text)
    if len(items) != 1:
        raise SexprError(f"expected exactly one expression, found {len(items)}")
    return items[0]


def dumps(d, width: int = 100, indent: int = 0) -> str:
    """Print a datum; lists that fit on one line stay on one line."""
    flat = _flat(d)
    if isinstance(d, str) or len(flat) + indent <= width:
        return flat
    head = _flat(d[0]) if d else ""
    pad = " " * (indent + 2)
    parts = [dumps(x, width, indent + 2) for x in d[1:]]
    return "(" + head + "".join("\n" + pad + p for p in parts) + ")"


def _flat(d) -> str:
    if isinstance(d, str):
        return d
    return "(" + " ".join(_flat(x) for x in d) + ")"


def expect_list(d, head: str | None = None, min_len: int = 0) -> SList:
    if isinstance(d, str):
        raise SexprError(f"expected a list{' (' + head + ' ...)' if head else ''}, got {d!r}",
                         getattr(d, "pos", None))
    if head is not None and (not d or d[0] != head):
        raise SexprError(f"expected ({head} ...)", getattr(d, "pos", None))
    if len(d) < min_len:
        raise SexprError(f"too few items in ({d[0] if d else ''} ...)", getattr(d, "pos", None))
    return d


def expect_atom(d) -> str:
    if not isinstance(d, str):
        raise SexprError("expected an atom", getattr(d, "pos", None))
    return str(d)
