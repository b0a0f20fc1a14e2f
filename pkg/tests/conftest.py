"""Shared helpers: random expressions and the admitted pair corpus.

A generated pair enters the corpus only when the reachable part of its
product automaton is small.  That keeps brute-force enumeration cheap, and
the pair count doubles as the word length the enumeration has to cover: a
shortest separating word never revisits a product state, so searching up to
that many letters is exhaustive.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import pytest

from regdist.automaton import StateLimitExceeded, build, product_pairs
from regdist.syntax import Alphabet, Letter, One, Regex, Seq, Star, Sum, Zero, make_alphabet

CORPUS_SEED = 20260822
CORPUS_SIZE = 500


def rand_expr(rng: random.Random, budget: int, letters: tuple[str, ...] = ("a", "b")) -> Regex:
    """A random expression with at most ``budget`` constructors."""
    if budget <= 1 or rng.random() < 0.18:
        leaves = [Zero(), One()] + [Letter(c) for c in letters] * 2
        return rng.choice(leaves)
    op = rng.choice(("sum", "seq", "seq", "star"))
    if op == "star":
        return Star(rand_expr(rng, budget - 1, letters))
    cut = rng.randint(1, budget - 1)
    left = rand_expr(rng, cut, letters)
    right = rand_expr(rng, budget - 1 - cut, letters)
    return (Sum if op == "sum" else Seq)(left, right)


@dataclass(frozen=True)
class Pair:
    left: Regex
    right: Regex
    alphabet: Alphabet
    bound: int  # reachable product pairs, hence a sufficient search depth


def admit(e: Regex, f: Regex, alphabet: Alphabet) -> Pair | None:
    try:
        aut = build([e, f], alphabet, 400)
    except StateLimitExceeded:
        return None
    s, t = aut.roots
    bound = len(product_pairs(aut, s, t))
    if len(alphabet) ** bound > (1 << 14) or bound > 64:
        return None
    return Pair(e, f, alphabet, bound)


def build_corpus(size: int = CORPUS_SIZE, seed: int = CORPUS_SEED) -> list[Pair]:
    rng = random.Random(seed)
    out: list[Pair] = []
    while len(out) < size:
        letters = ("a",) if rng.random() < 0.25 else ("a", "b")
        alphabet = make_alphabet(letters)
        e = rand_expr(rng, rng.randint(3, 15), letters)
        f = rand_expr(rng, rng.randint(3, 15), letters)
        pair = admit(e, f, alphabet)
        if pair is not None:
            out.append(pair)
    return out


@pytest.fixture(scope="session")
def corpus() -> list[Pair]:
    return build_corpus()
