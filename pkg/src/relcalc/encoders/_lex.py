"""A tiny regex lexer and cursor shared by the encoder parsers."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


class Cursor:
    def __init__(self, text: str, spec: list[tuple[str, str]]):
        rx = re.compile("|".join(f"(?P<{k}>{p})" for k, p in spec))
        self.toks: list[Token] = []
        i = 0
        while i < len(text):
            if text[i].isspace():
                i += 1
                continue
            m = rx.match(text, i)
            if not m:
                raise ParseError(i, f"unexpected character {text[i]!r}")
            self.toks.append(Token(m.lastgroup, m.group(), i))
            i = m.end()
        self.toks.append(Token("end", "", len(text)))
        self.i = 0

    @property
    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def accept(self, *texts: str) -> Token | None:
        if self.peek.text in texts and self.peek.kind != "end":
            return self.next()
        return None

    def expect(self, text: str) -> Token:
        t = self.next()
        if t.text != text:
            raise ParseError(t.pos, f"expected {text!r}, found {t.text or 'end of input'!r}")
        return t

    def done(self) -> None:
        t = self.peek
        if t.kind != "end":
            raise ParseError(t.pos, f"unexpected {t.text!r}")
