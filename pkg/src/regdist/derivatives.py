"""Syntactic output and transition structure of regular expressions.

``step`` is the one-letter transition.  It is deliberately literal: the
sequencing case builds ``(e)_a ; f + o(e) ; (f)_a`` with the output of ``e``
embedded as the expression 0 or 1, and nothing is simplified away.  All
simplification in this package happens in later, clearly marked places.
"""

from __future__ import annotations

from .syntax import Alphabet, Letter, One, Regex, Seq, Star, Sum, Zero


def output(e: Regex) -> int:
    """1 if the language of ``e`` contains the empty word, else 0."""
    match e:
        case Zero() | Letter(_):
            return 0
        case One() | Star(_):
            return 1
        case Sum(l, r):
            return output(l) | output(r)
        case Seq(l, r):
            return output(l) & output(r)
    raise TypeError(f"not a regex: {e!r}")


def output_bit(e: Regex) -> Regex:
    """The output of ``e`` as the expression 0 or 1."""
    return One() if output(e) else Zero()


def step(e: Regex, a: str) -> Regex:
    """The derivative of ``e`` by the letter ``a``, built literally."""
    match e:
        case Zero() | One():
            return Zero()
        case Letter(c):
            return One() if c == a else Zero()
        case Sum(l, r):
            return Sum(step(l, a), step(r, a))
        case Seq(l, r):
            return Sum(Seq(step(l, a), r), Seq(output_bit(l), step(r, a)))
        case Star(b):
            return Seq(step(b, a), e)
    raise TypeError(f"not a regex: {e!r}")


def word_derivative(e: Regex, w: str) -> Regex:
    """Derivative of ``e`` by the word ``w``, one letter at a time."""
    for ch in w:
        e = step(e, ch)
    return e


def member(e: Regex, w: str) -> bool:
    """Whether ``w`` belongs to the language of ``e``."""
    return output(word_derivative(e, w)) == 1


def fundamental_decomposition(e: Regex, alphabet: Alphabet) -> Regex:
    """Rebuild ``e`` from its letter derivatives and output.

    Returns ``a1;(e)_a1 + ... + ak;(e)_ak + o(e)`` with the letter terms
    folded left to right in alphabet order and the output bit last.  The
    result denotes the same language as ``e``.
    """
    acc: Regex | None = None
    for a in alphabet:
        term = Seq(Letter(a), step(e, a))
        acc = term if acc is None else Sum(acc, term)
    bit = output_bit(e)
    return bit if acc is None else Sum(acc, bit)
