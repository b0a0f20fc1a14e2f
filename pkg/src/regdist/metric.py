"""Shortest-distinguishing-word distances over quotient automata.

Distances take the form ``discount ** n`` where ``n`` is the length of a
shortest word telling two languages apart (0 when no such word exists).
The fixed point computation works on exponents, which keeps everything both
exact and independent of the particular discount; rationals only enter when a
value is extracted.  A parallel rational-valued interface exposes the same
one-step operator on arbitrary tables for use in tests and experiments.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Iterator

from .automaton import (
    DEFAULT_STATE_CAP,
    QuotientAutomaton,
    build,
    product_pairs,
    state_normal,
)
from .derivatives import output, step
from .syntax import Alphabet, Regex, infer_alphabet, sort_key


@dataclass(frozen=True)
class Config:
    """Global parameters; the discount is a rational strictly between 0 and 1."""

    discount: Fraction = Fraction(1, 2)

    def __post_init__(self) -> None:
        if not isinstance(self.discount, Fraction):
            raise TypeError(f"discount must be a Fraction, got {type(self.discount).__name__}")
        if not Fraction(0) < self.discount < Fraction(1):
            raise ValueError(f"discount must lie strictly between 0 and 1, got {self.discount}")


@total_ordering
@dataclass(frozen=True)
class ExponentValue:
    """The value ``discount ** exponent``, with ``None`` standing for 0.

    Ordered by value, so a *larger* exponent compares *smaller*, and the
    infinite exponent (None) is the least element.
    """

    exponent: int | None

    def __lt__(self, other: ExponentValue) -> bool:
        if self.exponent is None:
            return other.exponent is not None
        if other.exponent is None:
            return False
        return self.exponent > other.exponent

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def scaled(self) -> ExponentValue:
        """Multiplication by one factor of the discount."""
        return self if self.exponent is None else ExponentValue(self.exponent + 1)

    def value(self, discount: Fraction) -> Fraction:
        if self.exponent is None:
            return Fraction(0)
        return discount**self.exponent


DIST_ZERO = ExponentValue(None)
DIST_TOP = ExponentValue(0)

#: Pseudometric table: every off-diagonal unordered state pair gets a value.
Table = dict[tuple[int, int], ExponentValue]

RationalTable = dict[tuple[int, int], Fraction]


def _all_pairs(n: int) -> Iterator[tuple[int, int]]:
    for i in range(n):
        for j in range(i + 1, n):
            yield (i, j)


def pair_count(n: int) -> int:
    """Number of off-diagonal unordered pairs among ``n`` states."""
    return n * (n - 1) // 2


def top_table(aut: QuotientAutomaton) -> Table:
    """The everywhere-1 table, the greatest pseudometric under consideration."""
    return {p: DIST_TOP for p in _all_pairs(aut.n_states)}


def phi(aut: QuotientAutomaton, table: Table) -> Table:
    """One step of the behavioural-distance operator, on exponents.

    A pair with disagreeing outputs maps to 1; otherwise to the discount
    times the largest current distance among same-letter successor pairs
    (diagonal successors contribute 0).
    """
    out: Table = {}
    for (i, j), _ in table.items():
        if aut.outputs[i] != aut.outputs[j]:
            out[(i, j)] = DIST_TOP
            continue
        best: int | None = None
        for k in range(len(aut.alphabet)):
            di = aut.transitions[i][k]
            dj = aut.transitions[j][k]
            if di == dj:
                continue
            succ = table[(min(di, dj), max(di, dj))]
            if succ.exponent is not None and (best is None or succ.exponent < best):
                best = succ.exponent
        out[(i, j)] = DIST_ZERO if best is None else ExponentValue(best + 1)
    return out


def _separable_pairs(aut: QuotientAutomaton) -> set[tuple[int, int]]:
    """Pairs from which synchronized steps can reach an output disagreement."""
    preds: dict[tuple[int, int], list[tuple[int, int]]] = {}
    frontier: list[tuple[int, int]] = []
    reached: set[tuple[int, int]] = set()
    for i, j in _all_pairs(aut.n_states):
        if aut.outputs[i] != aut.outputs[j]:
            reached.add((i, j))
            frontier.append((i, j))
        for k in range(len(aut.alphabet)):
            di = aut.transitions[i][k]
            dj = aut.transitions[j][k]
            if di == dj:
                continue
            preds.setdefault((min(di, dj), max(di, dj)), []).append((i, j))
    while frontier:
        nxt: list[tuple[int, int]] = []
        for p in frontier:
            for q in preds.get(p, ()):
                if q not in reached:
                    reached.add(q)
                    nxt.append(q)
        frontier = nxt
    return reached


@dataclass(frozen=True)
class DescentResult:
    """Outcome of the descending fixed point iteration.

    ``trace[0]`` is the top table and ``trace[i+1] = phi(trace[i])``; when the
    iteration goes stationary the repeated table is kept in the trace.  The
    final ``table`` maps pairs that never separate to the exact value 0.
    """

    table: Table
    trace: tuple[Table, ...]
    iterations: int


def kleene_descent(aut: QuotientAutomaton) -> DescentResult:
    """Iterate ``phi`` from the top table until stationary.

    A shortest separating word never revisits an unordered state pair, so
    separable pairs settle within ``pair_count(n)`` steps and the iteration
    is cut off there.  Pairs still carrying the cut-off exponent at that
    point can never separate and are mapped to 0.
    """
    cap = pair_count(aut.n_states)
    cur = top_table(aut)
    trace = [cur]
    iterations = 0
    stationary = False
    while iterations < cap:
        nxt = phi(aut, cur)
        trace.append(nxt)
        iterations += 1
        if nxt == cur:
            stationary = True
            break
        cur = nxt
    table = dict(trace[-1])
    if not stationary:
        separable = _separable_pairs(aut)
        for p, ev in table.items():
            if ev.exponent == iterations and p not in separable:
                table[p] = DIST_ZERO
    return DescentResult(table=table, trace=tuple(trace), iterations=iterations)


def table_values(table: Table, cfg: Config) -> RationalTable:
    """Extract rational values from an exponent table."""
    return {p: ev.value(cfg.discount) for p, ev in table.items()}


def separation(e: Regex, f: Regex, alphabet: Alphabet | None = None, cap: int = DEFAULT_STATE_CAP) -> ExponentValue:
    """Exponent form of the distance between two expressions."""
    aut = build([e, f], alphabet, cap)
    s, t = aut.roots
    if s == t:
        return DIST_ZERO
    return kleene_descent(aut).table[(min(s, t), max(s, t))]


def distance(
    e: Regex,
    f: Regex,
    cfg: Config | None = None,
    alphabet: Alphabet | None = None,
    cap: int = DEFAULT_STATE_CAP,
) -> Fraction:
    """The distance between the languages of ``e`` and ``f``, exactly."""
    cfg = cfg or Config()
    return separation(e, f, alphabet, cap).value(cfg.discount)


def witness(
    e: Regex,
    f: Regex,
    alphabet: Alphabet | None = None,
    cap: int = DEFAULT_STATE_CAP,
) -> str | None:
    """A shortest word in exactly one of the two languages, or None.

    Among shortest candidates the lexicographically least (in alphabet
    order) is returned; the empty word is reported as ``""``.
    """
    aut = build([e, f], alphabet, cap)
    s, t = aut.roots
    if s == t:
        return None
    if aut.outputs[s] != aut.outputs[t]:
        return ""
    queue: deque[tuple[tuple[int, int], str]] = deque([((min(s, t), max(s, t)), "")])
    seen = {(min(s, t), max(s, t))}
    while queue:
        (u, v), word = queue.popleft()
        for k, letter in enumerate(aut.alphabet):
            du = aut.transitions[u][k]
            dv = aut.transitions[v][k]
            if du == dv:
                continue
            pair = (min(du, dv), max(du, dv))
            if pair in seen:
                continue
            if aut.outputs[du] != aut.outputs[dv]:
                return word + letter
            seen.add(pair)
            queue.append((pair, word + letter))
    return None


# ---------------------------------------------------------------------------
# Rational-valued surface


def phi_rational(aut: QuotientAutomaton, table: RationalTable, cfg: Config) -> RationalTable:
    """The one-step operator on arbitrary rational tables."""
    out: RationalTable = {}
    for (i, j), _ in table.items():
        if aut.outputs[i] != aut.outputs[j]:
            out[(i, j)] = Fraction(1)
            continue
        worst = Fraction(0)
        for k in range(len(aut.alphabet)):
            di = aut.transitions[i][k]
            dj = aut.transitions[j][k]
            if di == dj:
                continue
            succ = table[(min(di, dj), max(di, dj))]
            if succ > worst:
                worst = succ
        out[(i, j)] = cfg.discount * worst
    return out


def sup_distance(a: RationalTable, b: RationalTable) -> Fraction:
    """Supremum norm distance between two tables over the same pairs."""
    if a.keys() != b.keys():
        raise ValueError("tables cover different pair sets")
    gap = Fraction(0)
    for p, av in a.items():
        diff = abs(av - b[p])
        if diff > gap:
            gap = diff
    return gap


# ---------------------------------------------------------------------------
# Distance-zero certificates: bisimulations up to normalization


def _unordered(u: Regex, v: Regex) -> tuple[Regex, Regex]:
    un = state_normal(u)
    vn = state_normal(v)
    return (un, vn) if sort_key(un) <= sort_key(vn) else (vn, un)


def check_bisim(
    relation: Iterable[tuple[Regex, Regex]],
    e: Regex,
    f: Regex,
    alphabet: Alphabet | None = None,
) -> bool:
    """Is ``relation`` a bisimulation (up to normalization) relating e and f?

    The pair (e, f) must occur in the relation or be identical after
    normalization; every related pair must agree on output and have all
    same-letter derivatives related again, where identical pairs count as
    related without being listed.
    """
    rel = {_unordered(u, v) for u, v in relation}
    if alphabet is None:
        members: list[Regex] = [e, f]
        for u, v in rel:
            members.append(u)
            members.append(v)
        alphabet = infer_alphabet(*members)
    ue, vf = _unordered(e, f)
    if ue != vf and (ue, vf) not in rel:
        return False
    for u, v in rel:
        if output(u) != output(v):
            return False
        for a in alphabet:
            du, dv = _unordered(step(u, a), step(v, a))
            if du != dv and (du, dv) not in rel:
                return False
    return True


def bisim_closure(
    e: Regex,
    f: Regex,
    alphabet: Alphabet | None = None,
    cap: int = DEFAULT_STATE_CAP,
) -> tuple[tuple[Regex, Regex], ...]:
    """The synchronized derivative closure of (e, f), as expression pairs.

    When the two languages are equal the result passes :func:`check_bisim`;
    when they are not, it contains an output-disagreeing pair and fails it.
    """
    aut = build([e, f], alphabet, cap)
    s, t = aut.roots
    out = []
    for i, j in product_pairs(aut, s, t):
        if i != j:
            out.append((aut.states[i], aut.states[j]))
    return tuple(out)
