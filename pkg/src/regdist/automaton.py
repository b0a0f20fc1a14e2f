"""Finite state spaces from iterated derivatives.

States are expressions interned up to ACI of + together with the unit laws
``0;x = x;0 = 0``, ``1;x = x;1 = x`` and ``x + 0 = x``.  The unit laws matter:
the literal transition function threads output bits into sequences, and
without collapsing them the set of derivatives modulo ACI alone grows
forever (already for ``a*``).  Both normalizations preserve the language, so
the quotient is a plain deterministic automaton over the same behaviours.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .derivatives import output, step
from .syntax import (
    Alphabet,
    CanonicalForm,
    One,
    Regex,
    Seq,
    Star,
    Sum,
    Zero,
    canonicalize,
    infer_alphabet,
    normal,
    pretty,
)

DEFAULT_STATE_CAP = 100_000


class StateLimitExceeded(RuntimeError):
    """The derivative closure grew past the configured state cap."""

    def __init__(self, cap: int):
        super().__init__(f"state cap of {cap} exceeded while closing under derivatives")
        self.cap = cap


def unit_normalize(e: Regex) -> Regex:
    """One bottom-up pass of the unit rewrites 0;x, x;0, 1;x, x;1, x+0."""
    match e:
        case Zero() | One():
            return e
        case Sum(l, r):
            ln = unit_normalize(l)
            rn = unit_normalize(r)
            if ln == Zero():
                return rn
            if rn == Zero():
                return ln
            return Sum(ln, rn)
        case Seq(l, r):
            ln = unit_normalize(l)
            rn = unit_normalize(r)
            if ln == Zero() or rn == Zero():
                return Zero()
            if ln == One():
                return rn
            if rn == One():
                return ln
            return Seq(ln, rn)
        case Star(b):
            return Star(unit_normalize(b))
        case _:
            return e


def state_normal(e: Regex) -> Regex:
    """Joint fixed point of ACI normalization and the unit rewrites.

    Starting from the ACI normal form keeps the result a function of the
    ACI class of ``e``.  Each round either terminates or shrinks the term
    (ACI normalization never grows it, and a firing unit rewrite strictly
    shrinks it), so the loop is finite.
    """
    e = normal(e)
    while True:
        nxt = normal(unit_normalize(e))
        if nxt == e:
            return e
        e = nxt


def state_key(e: Regex) -> CanonicalForm:
    """Interning key for the state of ``e``."""
    return canonicalize(state_normal(e))


@dataclass(frozen=True, eq=False)
class QuotientAutomaton:
    """Deterministic automaton over derivative classes.

    ``states[i]`` is the canonical representative of state ``i``;
    ``transitions[i][k]`` is the successor of state ``i`` under letter
    ``alphabet[k]``; ``outputs[i]`` is its acceptance bit; ``roots`` are the
    state ids of the expressions the closure was built from, in input order.
    """

    alphabet: Alphabet
    states: tuple[Regex, ...]
    outputs: tuple[int, ...]
    transitions: tuple[tuple[int, ...], ...]
    roots: tuple[int, ...]
    _index: dict[CanonicalForm, int] = field(repr=False)

    @property
    def n_states(self) -> int:
        return len(self.states)

    def state_of(self, e: Regex) -> int:
        """The state id of ``e``; raises KeyError if it is not in the closure."""
        return self._index[state_key(e)]

    def delta(self, i: int, a: str) -> int:
        return self.transitions[i][self.alphabet.index(a)]


def build(
    roots: list[Regex] | tuple[Regex, ...],
    alphabet: Alphabet | None = None,
    cap: int = DEFAULT_STATE_CAP,
) -> QuotientAutomaton:
    """Close the given expressions under letter derivatives.

    Breadth-first in discovery order, so state ids are stable for a given
    input.  Raises :class:`StateLimitExceeded` once more than ``cap`` states
    appear.
    """
    if alphabet is None:
        alphabet = infer_alphabet(*roots)
    index: dict[CanonicalForm, int] = {}
    reps: list[Regex] = []

    def intern(e: Regex) -> int:
        key = state_key(e)
        got = index.get(key)
        if got is not None:
            return got
        if len(reps) >= cap:
            raise StateLimitExceeded(cap)
        index[key] = len(reps)
        reps.append(state_normal(e))
        return index[key]

    root_ids = tuple(intern(e) for e in roots)
    transitions: list[tuple[int, ...]] = []
    cursor = 0
    while cursor < len(reps):
        src = reps[cursor]
        transitions.append(tuple(intern(step(src, a)) for a in alphabet))
        cursor += 1
    return QuotientAutomaton(
        alphabet=alphabet,
        states=tuple(reps),
        outputs=tuple(output(s) for s in reps),
        transitions=tuple(transitions),
        roots=root_ids,
        _index=index,
    )


def product_pairs(aut: QuotientAutomaton, s: int, t: int) -> tuple[tuple[int, int], ...]:
    """Unordered state pairs reachable from {s, t} under synchronized steps.

    The starting pair is included; pairs are returned in discovery order.
    """
    start = (min(s, t), max(s, t))
    seen = {start}
    order = [start]
    frontier = [start]
    while frontier:
        nxt: list[tuple[int, int]] = []
        for u, v in frontier:
            for k in range(len(aut.alphabet)):
                du = aut.transitions[u][k]
                dv = aut.transitions[v][k]
                pair = (min(du, dv), max(du, dv))
                if pair not in seen:
                    seen.add(pair)
                    order.append(pair)
                    nxt.append(pair)
        frontier = nxt
    return tuple(order)


def to_dot(aut: QuotientAutomaton) -> str:
    """Graphviz rendering: accepting states doubly circled, edges by letter."""

    def esc(text: str) -> str:
        return text.replace("\\", "\\\\").replace('"', '\\"')

    lines = ["digraph quotient {", "  rankdir=LR;"]
    for rank, root in enumerate(aut.roots):
        lines.append(f'  start{rank} [shape=point, label=""];')
    for i, s in enumerate(aut.states):
        shape = "doublecircle" if aut.outputs[i] else "circle"
        lines.append(f'  q{i} [shape={shape}, label="{esc(pretty(s))}"];')
    for rank, root in enumerate(aut.roots):
        lines.append(f"  start{rank} -> q{root};")
    for i, row in enumerate(aut.transitions):
        by_target: dict[int, list[str]] = {}
        for k, j in enumerate(row):
            by_target.setdefault(j, []).append(aut.alphabet[k])
        for j in sorted(by_target):
            label = ",".join(by_target[j])
            lines.append(f'  q{i} -> q{j} [label="{esc(label)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
