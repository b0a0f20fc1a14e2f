"""Regular expression syntax: abstract syntax, parsing, printing, canonical forms.

Expressions are built from the constants 0 and 1, single lowercase letters,
binary sum ``e + f``, binary sequencing ``e;f`` (juxtaposition also accepted
on input), and iteration ``e*``.  Canonical forms quotient expressions by
associativity, commutativity and idempotence of ``+`` at every nesting level;
no other laws are applied, so for example ``a + 0`` and ``a`` stay distinct.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


class RegexError(ValueError):
    """Raised for malformed expression text or bad alphabet input."""


@dataclass(frozen=True)
class Zero:
    """The empty language."""


@dataclass(frozen=True)
class One:
    """The language containing only the empty word."""


@dataclass(frozen=True)
class Letter:
    char: str


@dataclass(frozen=True)
class Sum:
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Seq:
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Star:
    body: Regex


Regex = Zero | One | Letter | Sum | Seq | Star

#: A canonical form is the sorted, deduplicated tuple of normalized summands.
#: The empty tuple represents the expression 0.
CanonicalForm = tuple[Regex, ...]

Alphabet = tuple[str, ...]


def size(e: Regex) -> int:
    """Number of nodes in the syntax tree."""
    match e:
        case Zero() | One() | Letter(_):
            return 1
        case Sum(l, r) | Seq(l, r):
            return 1 + size(l) + size(r)
        case Star(b):
            return 1 + size(b)
    raise TypeError(f"not a regex: {e!r}")


def letters(e: Regex) -> frozenset[str]:
    """The set of letters occurring in ``e``."""
    match e:
        case Letter(c):
            return frozenset((c,))
        case Sum(l, r) | Seq(l, r):
            return letters(l) | letters(r)
        case Star(b):
            return letters(b)
        case _:
            return frozenset()


def make_alphabet(chars: Iterable[str]) -> Alphabet:
    """Build a sorted, duplicate-free alphabet from single lowercase letters."""
    seen = sorted(set(chars))
    for c in seen:
        if len(c) != 1 or not ("a" <= c <= "z"):
            raise RegexError(f"alphabet symbols must be single lowercase letters, got {c!r}")
    return tuple(seen)


def infer_alphabet(*exprs: Regex) -> Alphabet:
    """The sorted union of letters occurring in the given expressions."""
    acc: frozenset[str] = frozenset()
    for e in exprs:
        acc |= letters(e)
    return tuple(sorted(acc))


# ---------------------------------------------------------------------------
# Structural order and canonical forms


_TAGS = {Zero: 0, One: 1, Letter: 2, Seq: 3, Star: 4, Sum: 5}

SortKey = tuple


def sort_key(e: Regex) -> SortKey:
    """Total order key: constructor tag first, then children lexicographically.

    Zero < One < Letter < Seq < Star < Sum, letters by character.
    """
    match e:
        case Zero():
            return (0,)
        case One():
            return (1,)
        case Letter(c):
            return (2, c)
        case Seq(l, r):
            return (3, sort_key(l), sort_key(r))
        case Star(b):
            return (4, sort_key(b))
        case Sum(l, r):
            return (5, sort_key(l), sort_key(r))
    raise TypeError(f"not a regex: {e!r}")


def _summands(e: Regex) -> Iterator[Regex]:
    """Yield the non-Sum leaves of the sum spine of ``e``, left to right."""
    stack = [e]
    while stack:
        x = stack.pop()
        if isinstance(x, Sum):
            stack.append(x.right)
            stack.append(x.left)
        else:
            yield x


def _normalize_summand(e: Regex) -> Regex:
    # e is not a Sum; rewrite any sums nested under Seq/Star into normal form.
    match e:
        case Seq(l, r):
            return Seq(normal(l), normal(r))
        case Star(b):
            return Star(normal(b))
        case _:
            return e


def canonicalize(e: Regex) -> CanonicalForm:
    """Canonical form of ``e`` modulo associativity/commutativity/idempotence of +.

    The sum spine is flattened, every summand has its nested subterms
    normalized the same way, and the summands are sorted and deduplicated.
    The single-summand form ``(0,)`` is identified with the empty form, so
    ``canonicalize(Zero())`` is the empty tuple; a 0 that sits beside other
    summands is kept (there is no unit law here).
    """
    parts = sorted((_normalize_summand(s) for s in _summands(e)), key=sort_key)
    out: list[Regex] = []
    for p in parts:
        if not out or out[-1] != p:
            out.append(p)
    if out == [Zero()]:
        return ()
    return tuple(out)


def embed(form: CanonicalForm) -> Regex:
    """Rebuild an expression from a canonical form (right-associated sums)."""
    if not form:
        return Zero()
    acc = form[-1]
    for s in reversed(form[:-1]):
        acc = Sum(s, acc)
    return acc


def normal(e: Regex) -> Regex:
    """The canonical representative of ``e`` as an expression."""
    return embed(canonicalize(e))


def aci_equal(e: Regex, f: Regex) -> bool:
    """Whether two expressions are equal modulo ACI of + (at every level)."""
    return canonicalize(e) == canonicalize(f)


# ---------------------------------------------------------------------------
# Parsing

_ATOM_START = set("01(") | {chr(c) for c in range(ord("a"), ord("z") + 1)}


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet | None):
        self.text = text
        self.pos = 0
        self.alphabet = alphabet

    def error(self, message: str) -> RegexError:
        return RegexError(f"{message} at position {self.pos} in {self.text!r}")

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str | None:
        self.skip_ws()
        if self.pos >= len(self.text):
            return None
        return self.text[self.pos]

    def expr(self) -> Regex:
        acc = self.term()
        while self.peek() == "+":
            self.pos += 1
            acc = Sum(acc, self.term())
        return acc

    def term(self) -> Regex:
        acc = self.factor()
        while True:
            c = self.peek()
            if c == ";":
                self.pos += 1
                acc = Seq(acc, self.factor())
            elif c is not None and c in _ATOM_START:
                acc = Seq(acc, self.factor())
            else:
                return acc

    def factor(self) -> Regex:
        acc = self.atom()
        while self.peek() == "*":
            self.pos += 1
            acc = Star(acc)
        return acc

    def atom(self) -> Regex:
        c = self.peek()
        if c is None:
            raise self.error("unexpected end of input")
        if c == "0":
            self.pos += 1
            return Zero()
        if c == "1":
            self.pos += 1
            return One()
        if c == "(":
            self.pos += 1
            inner = self.expr()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.pos += 1
            return inner
        if "a" <= c <= "z":
            if self.alphabet is not None and c not in self.alphabet:
                raise self.error(f"letter {c!r} not in alphabet {''.join(self.alphabet)!r}")
            self.pos += 1
            return Letter(c)
        raise self.error(f"unexpected character {c!r}")


def parse(text: str, alphabet: Alphabet | None = None) -> Regex:
    """Parse expression text.

    Grammar (lowest to highest precedence): sums ``e + f``, sequences ``e;f``
    with ``;`` optional, iteration ``e*``.  Whitespace is ignored.  When an
    alphabet is given, letters outside it are rejected.
    """
    p = _Parser(text, alphabet)
    result = p.expr()
    if p.peek() is not None:
        raise p.error("trailing input")
    return result


# ---------------------------------------------------------------------------
# Printing

# Precedence levels: Sum 0, Seq 1, Star 2, atoms 3.  A node is parenthesized
# when its level is below what its context requires; right operands require
# one level more than left ones so that printing round-trips exactly through
# the left-associating parser.


def _level(e: Regex) -> int:
    match e:
        case Sum(_, _):
            return 0
        case Seq(_, _):
            return 1
        case Star(_):
            return 2
        case _:
            return 3


def _fmt(e: Regex, min_level: int) -> str:
    match e:
        case Zero():
            s = "0"
        case One():
            s = "1"
        case Letter(c):
            s = c
        case Sum(l, r):
            s = f"{_fmt(l, 0)} + {_fmt(r, 1)}"
        case Seq(l, r):
            s = f"{_fmt(l, 1)};{_fmt(r, 2)}"
        case Star(b):
            s = f"{_fmt(b, 2)}*"
        case _:
            raise TypeError(f"not a regex: {e!r}")
    if _level(e) < min_level:
        return f"({s})"
    return s


def pretty(e: Regex) -> str:
    """Render ``e`` with minimal parentheses; ``parse(pretty(e)) == e``."""
    return _fmt(e, 0)
