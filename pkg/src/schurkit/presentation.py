"""Finitely presented groups and their text format.

File grammar (UTF-8, line oriented, ``#`` starts a comment)::

    group "Heisenberg-27"
    prime 3
    generators a b c
    relators a^3, b^3, c^3
    relators [b,a] = c, [c,a], [c,b]
    expect order=27 class=2

Words are products of factors written by juxtaposition (``*`` is also
accepted).  A factor is a generator, ``1``, ``( word )`` or a commutator
``[u, v, ...]`` (left normed), followed by any number of ``^k`` (integer
power) or ``^v`` (conjugation by a factor).  A relation ``u = v`` is stored
as the relator ``u v^-1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .words import FreeWord, commutator


class PresentationError(ValueError):
    pass


class PresentationSyntaxError(PresentationError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class GeneratorSymbol:
    name: str
    index: int


@dataclass
class FinitePresentation:
    generators: list[GeneratorSymbol]
    relators: list[FreeWord]
    prime: int = 3
    name: str = ""
    expect: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise PresentationError("generator names must be unique")
        for i, g in enumerate(self.generators):
            if g.index != i:
                raise PresentationError(f"generator {g.name} has index {g.index}, expected {i}")
        n = len(self.generators)
        for r in self.relators:
            for gi in r.generators():
                if not 0 <= gi < n:
                    raise PresentationError(f"relator references undeclared generator {gi}")
        _check_prime(self.prime)

    @classmethod
    def from_names(cls, names, relators, prime=3, name="", expect=None):
        gens = [GeneratorSymbol(s, i) for i, s in enumerate(names)]
        return cls(gens, list(relators), prime, name, dict(expect or {}))

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def word(self, text: str) -> FreeWord:
        lhs, rhs = parse_relation(text, self.names)
        return lhs if rhs is None else lhs * rhs.inverse()

    def to_text(self) -> str:
        lines = []
        if self.name:
            lines.append(f'group "{self.name}"')
        lines.append(f"prime {self.prime}")
        lines.append("generators " + " ".join(self.names))
        for r in self.relators:
            lines.append("relators " + r.to_str(self.names))
        if self.expect:
            lines.append("expect " + " ".join(f"{k}={v}" for k, v in self.expect.items()))
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        if not isinstance(other, FinitePresentation):
            return NotImplemented
        return (self.names == other.names and self.relators == other.relators
                and self.prime == other.prime and self.name == other.name
                and self.expect == other.expect)


def _check_prime(p: int):
    if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise PresentationError(f"{p} is not a prime")
    if p == 2:
        raise PresentationError("prime 2 is not supported: only odd primes are handled")


_TOKEN = re.compile(r"\s*(?:(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>-?\d+)|(?P<sym>[\^\[\],()=*]))")


class _Tokens:
    def __init__(self, text: str, line: int, col0: int):
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                bad = len(text) - len(text[pos:].lstrip()) if m is None else pos
                raise PresentationSyntaxError(f"unexpected character {text[bad]!r}", line, col0 + bad + 1)
            kind = m.lastgroup
            start = m.start(kind)
            self.toks.append((kind, m.group(kind), col0 + start + 1))
            pos = m.end()
        self.i = 0
        self.line = line
        self.end_col = col0 + len(text) + 1

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, self.end_col)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, sym):
        kind, val, col = self.take()
        if val != sym:
            found = "end of input" if kind is None else repr(val)
            raise PresentationSyntaxError(f"expected {sym!r}, found {found}", self.line, col)

    def error(self, msg):
        raise PresentationSyntaxError(msg, self.line, self.peek()[2])


class _WordParser:
    def __init__(self, toks: _Tokens, names: list[str]):
        self.t = toks
        self.index = {n: i for i, n in enumerate(names)}

    def word(self) -> FreeWord:
        w = FreeWord()
        seen = False
        while True:
            kind, val, _ = self.t.peek()
            if kind == "id" or val in ("(", "[") or (kind == "int" and val == "1"):
                w = w * self.factor()
                seen = True
            elif val == "*" and seen:
                self.t.take()
                kind, val, _ = self.t.peek()
                if not (kind == "id" or val in ("(", "[") or val == "1"):
                    self.t.error("expected a factor after '*'")
            else:
                break
        if not seen:
            self.t.error("expected a word")
        return w

    def atom(self) -> FreeWord:
        kind, val, col = self.t.take()
        if kind == "id":
            if val not in self.index:
                raise PresentationSyntaxError(f"undeclared generator {val!r}", self.t.line, col)
            return FreeWord.gen(self.index[val])
        if kind == "int" and val == "1":
            return FreeWord()
        if val == "(":
            w = self.word()
            self.t.expect(")")
            return w
        if val == "[":
            entries = [self.word()]
            while self.t.peek()[1] == ",":
                self.t.take()
                entries.append(self.word())
            if self.t.peek()[1] != "]":
                self.t.error("unclosed '[' in commutator" if self.t.peek()[0] is None else "expected ',' or ']'")
            self.t.take()
            if len(entries) < 2:
                raise PresentationSyntaxError("commutator needs at least two entries", self.t.line, col)
            return commutator(*entries)
        found = "end of input" if kind is None else repr(val)
        raise PresentationSyntaxError(f"expected a generator, '(' or '[', found {found}", self.t.line, col)

    def factor(self) -> FreeWord:
        w = self.atom()
        while self.t.peek()[1] == "^":
            self.t.take()
            kind, val, _ = self.t.peek()
            if kind == "int":
                self.t.take()
                w = w ** int(val)
            else:
                w = w.conj(self.atom())
        return w

    def relation(self) -> tuple[FreeWord, FreeWord | None]:
        lhs = self.word()
        rhs = None
        if self.t.peek()[1] == "=":
            self.t.take()
            rhs = self.word()
        return lhs, rhs


def parse_relation(text: str, names, line: int = 1, col0: int = 0):
    toks = _Tokens(text, line, col0)
    p = _WordParser(toks, list(names))
    out = p.relation()
    if toks.peek()[0] is not None:
        toks.error(f"unexpected {toks.peek()[1]!r}")
    return out


def parse_word(text: str, names) -> FreeWord:
    lhs, rhs = parse_relation(text, names)
    if rhs is not None:
        raise PresentationError("expected a word, got a relation")
    return lhs


def parse_relation_list(text: str, names, line: int, col0: int) -> list[tuple[FreeWord, FreeWord | None]]:
    toks = _Tokens(text, line, col0)
    p = _WordParser(toks, list(names))
    rels = [p.relation()]
    while toks.peek()[1] == ",":
        toks.take()
        rels.append(p.relation())
    if toks.peek()[0] is not None:
        toks.error(f"unexpected {toks.peek()[1]!r}")
    return rels


def iter_directives(text: str):
    """Yield ``(keyword, rest, line_no, rest_col)`` for each non-blank line."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.lstrip()
        if not stripped:
            continue
        indent = len(line) - len(stripped)
        parts = stripped.split(None, 1)
        key = parts[0]
        rest = parts[1] if len(parts) > 1 else ""
        rest_col = indent + len(key) + (len(stripped[len(key):]) - len(stripped[len(key):].lstrip()))
        yield key, rest, lineno, rest_col


def parse_header(key, rest, lineno, col, state):
    if key == "group":
        m = re.fullmatch(r'"([^"]*)"', rest.strip())
        if not m:
            raise PresentationSyntaxError('group name must be a double-quoted string', lineno, col + 1)
        state["name"] = m.group(1)
    elif key == "prime":
        if not re.fullmatch(r"\d+", rest.strip()):
            raise PresentationSyntaxError("prime must be a positive integer", lineno, col + 1)
        p = int(rest)
        try:
            _check_prime(p)
        except PresentationError as exc:
            raise PresentationSyntaxError(str(exc), lineno, col + 1) from None
        state["prime"] = p
    elif key == "expect":
        for item in rest.split():
            if "=" not in item:
                raise PresentationSyntaxError(f"expect entries are key=value, got {item!r}", lineno, col + 1)
            k, v = item.split("=", 1)
            state["expect"][k] = v
    else:
        return False
    return True


def parse_presentation(text: str) -> FinitePresentation:
    state = {"name": "", "prime": 3, "expect": {}}
    names: list[str] | None = None
    relators: list[FreeWord] = []
    for key, rest, lineno, col in iter_directives(text):
        if parse_header(key, rest, lineno, col, state):
            continue
        if key == "generators":
            if names is not None:
                raise PresentationSyntaxError("generators declared twice", lineno, 1)
            names = rest.split()
            for n in names:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n):
                    raise PresentationSyntaxError(f"bad generator name {n!r}", lineno, col + 1)
            if len(set(names)) != len(names):
                raise PresentationSyntaxError("duplicate generator name", lineno, col + 1)
        elif key == "relators":
            if names is None:
                raise PresentationSyntaxError("relators before generators", lineno, 1)
            for lhs, rhs in parse_relation_list(rest, names, lineno, col):
                relators.append(lhs if rhs is None else lhs * rhs.inverse())
        else:
            raise PresentationSyntaxError(f"unknown directive {key!r}", lineno, 1)
    if names is None:
        raise PresentationSyntaxError("missing generators line", 1, 1)
    return FinitePresentation.from_names(names, relators, state["prime"], state["name"], state["expect"])


def load_presentation(path) -> FinitePresentation:
    with open(path, encoding="utf-8") as fh:
        return parse_presentation(fh.read())
