"""Brute-force language semantics, used as an independent test oracle.

A :class:`LanguageSlice` is the set of words of a language up to a length
bound.  Each length layer is stored as a bitmask over all words of that
length, indexing a word by its base-k digit string (alphabet order), so that
union is bitwise or and concatenation is a sum of shifts.  Nothing here
touches derivatives or automata; the slices come straight from the usual
set-of-words reading of the connectives.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .syntax import Alphabet, Letter, One, Regex, Seq, Star, Sum, Zero


@dataclass(frozen=True)
class LanguageSlice:
    alphabet: Alphabet
    max_len: int
    masks: tuple[int, ...]  # masks[n] covers all words of length n

    def member(self, w: str) -> bool:
        """Whether ``w`` (of length <= max_len) is in the slice."""
        n = len(w)
        if n > self.max_len:
            raise ValueError(f"word {w!r} longer than slice bound {self.max_len}")
        return bool(self.masks[n] >> self._index(w) & 1)

    def words(self) -> Iterator[str]:
        """All words in the slice, shortest first, same length lexicographic."""
        for n, mask in enumerate(self.masks):
            while mask:
                low = mask & -mask
                yield self._word(n, low.bit_length() - 1)
                mask ^= low

    def _index(self, w: str) -> int:
        k = len(self.alphabet)
        idx = 0
        for ch in w:
            idx = idx * k + self.alphabet.index(ch)
        return idx

    def _word(self, n: int, idx: int) -> str:
        k = len(self.alphabet)
        chars = []
        for _ in range(n):
            idx, d = divmod(idx, k)
            chars.append(self.alphabet[d])
        return "".join(reversed(chars))


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _concat(a: list[int], b: list[int], k: int, max_len: int) -> list[int]:
    out = [0] * (max_len + 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j in range(max_len - i + 1):
            bj = b[j]
            if not bj:
                continue
            width = k**j
            for p in _bits(ai):
                out[i + j] |= bj << (p * width)
    return out


def _layers(e: Regex, alphabet: Alphabet, max_len: int) -> list[int]:
    match e:
        case Zero():
            return [0] * (max_len + 1)
        case One():
            return [1] + [0] * max_len
        case Letter(c):
            if c not in alphabet:
                raise ValueError(f"letter {c!r} not in alphabet {alphabet!r}")
            out = [0] * (max_len + 1)
            if max_len >= 1:
                out[1] = 1 << alphabet.index(c)
            return out
        case Sum(l, r):
            la = _layers(l, alphabet, max_len)
            ra = _layers(r, alphabet, max_len)
            return [x | y for x, y in zip(la, ra)]
        case Seq(l, r):
            return _concat(
                _layers(l, alphabet, max_len),
                _layers(r, alphabet, max_len),
                len(alphabet),
                max_len,
            )
        case Star(b):
            body = _layers(b, alphabet, max_len)
            k = len(alphabet)
            out = [0] * (max_len + 1)
            out[0] = 1
            # out[n] needs only shorter asterate layers, since splits use a
            # nonempty body word on the left.
            for n in range(1, max_len + 1):
                for i in range(1, n + 1):
                    bi = body[i]
                    if not bi:
                        continue
                    rest = out[n - i]
                    if not rest:
                        continue
                    width = k ** (n - i)
                    for p in _bits(bi):
                        out[n] |= rest << (p * width)
            return out
    raise TypeError(f"not a regex: {e!r}")


def denote(e: Regex, alphabet: Alphabet, max_len: int) -> LanguageSlice:
    """The words of ``e`` up to length ``max_len``, by structural recursion."""
    return LanguageSlice(alphabet, max_len, tuple(_layers(e, alphabet, max_len)))


def brute_witness(e: Regex, f: Regex, alphabet: Alphabet, max_len: int) -> str | None:
    """Shortest word (lexicographically least among those) in exactly one of
    the two languages, or None if they agree on all words up to ``max_len``."""
    a = denote(e, alphabet, max_len)
    b = denote(f, alphabet, max_len)
    for n in range(max_len + 1):
        diff = a.masks[n] ^ b.masks[n]
        if diff:
            return a._word(n, (diff & -diff).bit_length() - 1)
    return None


def brute_distance(
    e: Regex, f: Regex, alphabet: Alphabet, max_len: int, discount: Fraction
) -> Fraction:
    """``discount ** |w|`` for the least disagreeing word up to ``max_len``,
    or 0 if none exists within the bound."""
    w = brute_witness(e, f, alphabet, max_len)
    if w is None:
        return Fraction(0)
    return discount ** len(w)
