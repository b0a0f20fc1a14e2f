"""Quantitative derivations: building, checking, and serializing certificates.

A derivation concludes a judgement ``left = right within eps``: the distance
between the two languages is at most ``eps``.  Leaves are axiom instances,
inner nodes apply deduction rules, and a checker revalidates every node
against the rule's side conditions, so a certificate stands on its own.
Infinitary arguments are packaged as named templates: the document names a
generator and parameters, and the checker re-derives and checks finite
instances in process rather than trusting anything embedded in the document.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable

from .automaton import DEFAULT_STATE_CAP, build, state_normal, unit_normalize
from .derivatives import fundamental_decomposition, output, output_bit, step
from .metric import Config, ExponentValue, kleene_descent, witness
from .syntax import (
    Alphabet,
    Letter,
    One,
    Regex,
    RegexError,
    Seq,
    Star,
    Sum,
    Zero,
    canonicalize,
    infer_alphabet,
    letters,
    normal,
    parse,
    pretty,
    sort_key,
)

DEFAULT_SPOT_CHECKS = 8


class Rule(Enum):
    REFL = "Refl"
    SYMM = "Symm"
    TRIANG = "Triang"
    MAX = "Max"
    NEXP = "NExp"
    TOP = "Top"
    NPREF = "NPref"
    SL1 = "SL1"
    SL2 = "SL2"
    SL3 = "SL3"
    SL4 = "SL4"
    SL5 = "SL5"
    ONE_S = "OneS"
    S = "S"
    S1 = "S1"
    ZERO_S = "ZeroS"
    S0 = "S0"
    D1 = "D1"
    D2 = "D2"
    UNROLL = "Unroll"
    TIGHT = "Tight"
    HYPOTHESIS = "Hypothesis"
    CONT_TEMPLATE = "ContTemplate"


class ProofError(ValueError):
    """A derivation was composed in a way its rule does not allow."""


class CertificateError(ValueError):
    """A certificate document is malformed."""


@dataclass(frozen=True)
class CheckError(Exception):
    """Why and where a derivation failed to check."""

    rule: str
    path: tuple[int, ...]
    reason: str

    def __str__(self) -> str:
        where = "/".join(str(i) for i in self.path) or "root"
        return f"{self.rule} node at {where}: {self.reason}"


class _TemplateRefused(Exception):
    """A template generator declined the given parameters."""


@dataclass(frozen=True)
class Judgement:
    left: Regex
    right: Regex
    eps: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.eps, Fraction):
            object.__setattr__(self, "eps", Fraction(self.eps))
        if self.eps < 0:
            raise ProofError(f"negative bound {self.eps}")

    def flipped(self) -> Judgement:
        return Judgement(self.right, self.left, self.eps)


@dataclass(frozen=True)
class Meta:
    """Rule-specific payload; unused fields stay None."""

    midpoint: Regex | None = None
    letter: str | None = None
    schema: str | None = None
    params: tuple[tuple[str, str], ...] = ()
    spot_indices: tuple[int, ...] = ()


_EMPTY_META = Meta()


@dataclass(frozen=True)
class Derivation:
    rule: Rule
    conclusion: Judgement
    premises: tuple[Derivation, ...] = ()
    meta: Meta = _EMPTY_META

    @property
    def left(self) -> Regex:
        return self.conclusion.left

    @property
    def right(self) -> Regex:
        return self.conclusion.right

    @property
    def eps(self) -> Fraction:
        return self.conclusion.eps


# ---------------------------------------------------------------------------
# Node constructors.  Each builds a valid instance or raises ProofError.


def refl(e: Regex) -> Derivation:
    return Derivation(Rule.REFL, Judgement(e, e, Fraction(0)))


def symm(d: Derivation) -> Derivation:
    return Derivation(Rule.SYMM, d.conclusion.flipped(), (d,))


def triang(d1: Derivation, d2: Derivation) -> Derivation:
    if d1.right != d2.left:
        raise ProofError(f"midpoint mismatch: {pretty(d1.right)} vs {pretty(d2.left)}")
    concl = Judgement(d1.left, d2.right, d1.eps + d2.eps)
    return Derivation(Rule.TRIANG, concl, (d1, d2), Meta(midpoint=d1.right))


def weaken(d: Derivation, eps: Fraction) -> Derivation:
    if not eps > d.eps:
        raise ProofError(f"weakening needs a strictly larger bound: {eps} vs {d.eps}")
    return Derivation(Rule.MAX, Judgement(d.left, d.right, eps), (d,))


def weaken_to(d: Derivation, eps: Fraction) -> Derivation:
    """``d`` itself when the bound already matches, otherwise a Max node."""
    eps = eps if isinstance(eps, Fraction) else Fraction(eps)
    if eps == d.eps:
        return d
    return weaken(d, eps)


def refl_at(e: Regex, eps: Fraction) -> Derivation:
    return weaken_to(refl(e), eps)


def sum_cong(dl: Derivation, dr: Derivation) -> Derivation:
    if dl.eps != dr.eps:
        raise ProofError("congruence premises must share one bound")
    concl = Judgement(Sum(dl.left, dr.left), Sum(dl.right, dr.right), dl.eps)
    return Derivation(Rule.NEXP, concl, (dl, dr))


def seq_cong(dl: Derivation, dr: Derivation) -> Derivation:
    if dl.eps != dr.eps:
        raise ProofError("congruence premises must share one bound")
    concl = Judgement(Seq(dl.left, dr.left), Seq(dl.right, dr.right), dl.eps)
    return Derivation(Rule.NEXP, concl, (dl, dr))


def star_cong(db: Derivation) -> Derivation:
    concl = Judgement(Star(db.left), Star(db.right), db.eps)
    return Derivation(Rule.NEXP, concl, (db,))


def top_rule(e: Regex, f: Regex) -> Derivation:
    return Derivation(Rule.TOP, Judgement(e, f, Fraction(1)))


def npref(d: Derivation, a: str, cfg: Config, eps: Fraction | None = None) -> Derivation:
    if eps is None:
        eps = cfg.discount * d.eps
    if eps < cfg.discount * d.eps:
        raise ProofError(f"prefix bound {eps} below {cfg.discount} * {d.eps}")
    concl = Judgement(Seq(Letter(a), d.left), Seq(Letter(a), d.right), eps)
    return Derivation(Rule.NPREF, concl, (d,), Meta(letter=a))


def sl1(e: Regex) -> Derivation:
    return Derivation(Rule.SL1, Judgement(Sum(e, e), e, Fraction(0)))


def sl2(e: Regex, f: Regex) -> Derivation:
    return Derivation(Rule.SL2, Judgement(Sum(e, f), Sum(f, e), Fraction(0)))


def sl3(e: Regex, f: Regex, g: Regex) -> Derivation:
    concl = Judgement(Sum(Sum(e, f), g), Sum(e, Sum(f, g)), Fraction(0))
    return Derivation(Rule.SL3, concl)


def sl4(e: Regex) -> Derivation:
    return Derivation(Rule.SL4, Judgement(Sum(e, Zero()), e, Fraction(0)))


def sl5(d1: Derivation, d2: Derivation) -> Derivation:
    concl = Judgement(
        Sum(d1.left, d2.left), Sum(d1.right, d2.right), max(d1.eps, d2.eps)
    )
    return Derivation(Rule.SL5, concl, (d1, d2))


def one_s(e: Regex) -> Derivation:
    return Derivation(Rule.ONE_S, Judgement(Seq(One(), e), e, Fraction(0)))


def s_assoc(e: Regex, f: Regex, g: Regex) -> Derivation:
    concl = Judgement(Seq(e, Seq(f, g)), Seq(Seq(e, f), g), Fraction(0))
    return Derivation(Rule.S, concl)


def s_one(e: Regex) -> Derivation:
    return Derivation(Rule.S1, Judgement(Seq(e, One()), e, Fraction(0)))


def zero_s(e: Regex) -> Derivation:
    return Derivation(Rule.ZERO_S, Judgement(Seq(Zero(), e), Zero(), Fraction(0)))


def s_zero(e: Regex) -> Derivation:
    return Derivation(Rule.S0, Judgement(Seq(e, Zero()), Zero(), Fraction(0)))


def d1(e: Regex, f: Regex, g: Regex) -> Derivation:
    concl = Judgement(Seq(e, Sum(f, g)), Sum(Seq(e, f), Seq(e, g)), Fraction(0))
    return Derivation(Rule.D1, concl)


def d2(e: Regex, f: Regex, g: Regex) -> Derivation:
    concl = Judgement(Seq(Sum(e, f), g), Sum(Seq(e, g), Seq(f, g)), Fraction(0))
    return Derivation(Rule.D2, concl)


def unroll(e: Regex) -> Derivation:
    concl = Judgement(Star(e), Sum(Seq(e, Star(e)), One()), Fraction(0))
    return Derivation(Rule.UNROLL, concl)


def tight(e: Regex) -> Derivation:
    concl = Judgement(Star(Sum(e, One())), Star(e), Fraction(0))
    return Derivation(Rule.TIGHT, concl)


def hypothesis(j: Judgement) -> Derivation:
    return Derivation(Rule.HYPOTHESIS, j)


def cont_template(
    schema: str,
    params: dict[str, str],
    conclusion: Judgement,
    spot_indices: Iterable[int] = (),
) -> Derivation:
    if conclusion.eps != 0:
        raise ProofError("templates conclude zero-bound judgements only")
    meta = Meta(
        schema=schema,
        params=tuple(sorted(params.items())),
        spot_indices=tuple(spot_indices),
    )
    return Derivation(Rule.CONT_TEMPLATE, conclusion, (), meta)


def _chain(*parts: Derivation) -> Derivation:
    """Compose by transitivity, skipping links that just restate one side."""
    kept = [p for p in parts if not (p.left == p.right and p.eps == 0)]
    if not kept:
        return parts[0]
    acc = kept[-1]
    for p in reversed(kept[:-1]):
        acc = triang(p, acc)
    return acc


# ---------------------------------------------------------------------------
# Certificates and their JSON form


@dataclass(frozen=True)
class Certificate:
    config: Config
    root: Derivation
    hypotheses: tuple[Judgement, ...] = ()


def _judgement_to_dict(j: Judgement) -> dict:
    return {"left": pretty(j.left), "right": pretty(j.right), "eps": str(j.eps)}


def _node_to_dict(d: Derivation) -> dict:
    out: dict = {
        "rule": d.rule.value,
        "conclusion": _judgement_to_dict(d.conclusion),
        "premises": [_node_to_dict(p) for p in d.premises],
        "meta": {},
    }
    m = d.meta
    if m.midpoint is not None:
        out["meta"]["midpoint"] = pretty(m.midpoint)
    if m.letter is not None:
        out["meta"]["letter"] = m.letter
    if m.schema is not None:
        out["meta"]["schema"] = m.schema
        out["meta"]["params"] = {k: v for k, v in m.params}
        out["meta"]["spot_indices"] = list(m.spot_indices)
    return out


def serialize(cert: Certificate) -> dict:
    return {
        "version": 1,
        "lambda": str(cert.config.discount),
        "hypotheses": [_judgement_to_dict(j) for j in cert.hypotheses],
        "root": _node_to_dict(cert.root),
    }


def to_json(cert: Certificate, indent: int | None = 2) -> str:
    return json.dumps(serialize(cert), indent=indent)


def _parse_expr(text: object, what: str) -> Regex:
    if not isinstance(text, str):
        raise CertificateError(f"{what} must be a string, got {type(text).__name__}")
    try:
        return parse(text)
    except RegexError as exc:
        raise CertificateError(f"bad {what}: {exc}") from exc


def _parse_eps(text: object, what: str) -> Fraction:
    if not isinstance(text, (str, int)):
        raise CertificateError(f"{what} must be a string, got {type(text).__name__}")
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise CertificateError(f"bad {what}: {text!r}") from exc
    if value < 0:
        raise CertificateError(f"negative {what}: {text!r}")
    return value


def _judgement_from_dict(d: object, what: str) -> Judgement:
    if not isinstance(d, dict):
        raise CertificateError(f"{what} must be an object")
    missing = {"left", "right", "eps"} - d.keys()
    if missing:
        raise CertificateError(f"{what} lacks {sorted(missing)}")
    return Judgement(
        _parse_expr(d["left"], f"{what} left side"),
        _parse_expr(d["right"], f"{what} right side"),
        _parse_eps(d["eps"], f"{what} bound"),
    )


def _node_from_dict(d: object, path: str) -> Derivation:
    if not isinstance(d, dict):
        raise CertificateError(f"node {path} must be an object")
    try:
        rule = Rule(d.get("rule"))
    except ValueError:
        raise CertificateError(f"node {path}: unknown rule tag {d.get('rule')!r}") from None
    concl = _judgement_from_dict(d.get("conclusion"), f"node {path} conclusion")
    raw_premises = d.get("premises", [])
    if not isinstance(raw_premises, list):
        raise CertificateError(f"node {path}: premises must be a list")
    premises = tuple(
        _node_from_dict(p, f"{path}/{i}") for i, p in enumerate(raw_premises)
    )
    raw_meta = d.get("meta", {})
    if not isinstance(raw_meta, dict):
        raise CertificateError(f"node {path}: meta must be an object")
    midpoint = None
    if "midpoint" in raw_meta:
        midpoint = _parse_expr(raw_meta["midpoint"], f"node {path} midpoint")
    letter = None
    if "letter" in raw_meta:
        letter = raw_meta["letter"]
        if not isinstance(letter, str) or len(letter) != 1:
            raise CertificateError(f"node {path}: letter must be a single character")
    schema = None
    params: tuple[tuple[str, str], ...] = ()
    spots: tuple[int, ...] = ()
    if rule is Rule.CONT_TEMPLATE:
        schema = raw_meta.get("schema")
        if not isinstance(schema, str):
            raise CertificateError(f"node {path}: template needs a schema name")
        raw_params = raw_meta.get("params", {})
        if not isinstance(raw_params, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in raw_params.items()
        ):
            raise CertificateError(f"node {path}: template params must map strings to strings")
        params = tuple(sorted(raw_params.items()))
        raw_spots = raw_meta.get("spot_indices", [])
        if not isinstance(raw_spots, list) or not all(
            isinstance(i, int) and i >= 0 for i in raw_spots
        ):
            raise CertificateError(f"node {path}: spot_indices must be nonnegative integers")
        spots = tuple(raw_spots)
    if rule is Rule.TRIANG and midpoint is None:
        raise CertificateError(f"node {path}: transitivity needs its midpoint recorded")
    meta = Meta(midpoint=midpoint, letter=letter, schema=schema, params=params, spot_indices=spots)
    try:
        return Derivation(rule, concl, premises, meta)
    except ProofError as exc:
        raise CertificateError(f"node {path}: {exc}") from exc


def deserialize(doc: object) -> Certificate:
    if not isinstance(doc, dict):
        raise CertificateError("certificate must be a JSON object")
    if doc.get("version") != 1:
        raise CertificateError(f"unsupported certificate version {doc.get('version')!r}")
    lam = _parse_eps(doc.get("lambda"), "lambda")
    try:
        cfg = Config(discount=lam)
    except ValueError as exc:
        raise CertificateError(str(exc)) from exc
    raw_hyps = doc.get("hypotheses", [])
    if not isinstance(raw_hyps, list):
        raise CertificateError("hypotheses must be a list")
    hyps = tuple(
        _judgement_from_dict(h, f"hypothesis {i}") for i, h in enumerate(raw_hyps)
    )
    if "root" not in doc:
        raise CertificateError("certificate lacks a root derivation")
    root = _node_from_dict(doc["root"], "root")
    return Certificate(config=cfg, root=root, hypotheses=hyps)


def from_json(text: str) -> Certificate:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateError(f"not valid JSON: {exc}") from exc
    return deserialize(doc)


# ---------------------------------------------------------------------------
# Checking


def _fail(rule: Rule, path: tuple[int, ...], reason: str) -> CheckError:
    return CheckError(rule.value, path, reason)


def _check_axiom_shape(d: Derivation, path: tuple[int, ...]) -> CheckError | None:
    j = d.conclusion
    l, r = j.left, j.right
    ok: bool
    match d.rule:
        case Rule.SL1:
            ok = isinstance(l, Sum) and l.left == l.right == r
        case Rule.SL2:
            ok = (
                isinstance(l, Sum)
                and isinstance(r, Sum)
                and l.left == r.right
                and l.right == r.left
            )
        case Rule.SL3:
            ok = (
                isinstance(l, Sum)
                and isinstance(l.left, Sum)
                and isinstance(r, Sum)
                and isinstance(r.right, Sum)
                and l.left.left == r.left
                and l.left.right == r.right.left
                and l.right == r.right.right
            )
        case Rule.SL4:
            ok = isinstance(l, Sum) and l.right == Zero() and l.left == r
        case Rule.ONE_S:
            ok = isinstance(l, Seq) and l.left == One() and l.right == r
        case Rule.S:
            ok = (
                isinstance(l, Seq)
                and isinstance(l.right, Seq)
                and isinstance(r, Seq)
                and isinstance(r.left, Seq)
                and l.left == r.left.left
                and l.right.left == r.left.right
                and l.right.right == r.right
            )
        case Rule.S1:
            ok = isinstance(l, Seq) and l.right == One() and l.left == r
        case Rule.ZERO_S:
            ok = isinstance(l, Seq) and l.left == Zero() and r == Zero()
        case Rule.S0:
            ok = isinstance(l, Seq) and l.right == Zero() and r == Zero()
        case Rule.D1:
            ok = (
                isinstance(l, Seq)
                and isinstance(l.right, Sum)
                and isinstance(r, Sum)
                and isinstance(r.left, Seq)
                and isinstance(r.right, Seq)
                and r.left.left == l.left
                and r.right.left == l.left
                and r.left.right == l.right.left
                and r.right.right == l.right.right
            )
        case Rule.D2:
            ok = (
                isinstance(l, Seq)
                and isinstance(l.left, Sum)
                and isinstance(r, Sum)
                and isinstance(r.left, Seq)
                and isinstance(r.right, Seq)
                and r.left.right == l.right
                and r.right.right == l.right
                and r.left.left == l.left.left
                and r.right.left == l.left.right
            )
        case Rule.UNROLL:
            ok = (
                isinstance(l, Star)
                and isinstance(r, Sum)
                and r.right == One()
                and isinstance(r.left, Seq)
                and r.left.left == l.body
                and r.left.right == l
            )
        case Rule.TIGHT:
            ok = (
                isinstance(l, Star)
                and isinstance(l.body, Sum)
                and l.body.right == One()
                and isinstance(r, Star)
                and r.body == l.body.left
            )
        case _:
            return _fail(d.rule, path, "not an axiom")
    if not ok:
        return _fail(
            d.rule, path, f"sides do not fit: {pretty(l)} vs {pretty(r)}"
        )
    if d.premises:
        return _fail(d.rule, path, "axioms take no premises")
    if j.eps != 0:
        return _fail(d.rule, path, f"axioms conclude at bound 0, got {j.eps}")
    return None


_AXIOM_RULES = {
    Rule.SL1,
    Rule.SL2,
    Rule.SL3,
    Rule.SL4,
    Rule.ONE_S,
    Rule.S,
    Rule.S1,
    Rule.ZERO_S,
    Rule.S0,
    Rule.D1,
    Rule.D2,
    Rule.UNROLL,
    Rule.TIGHT,
}


def _check_node(
    d: Derivation,
    path: tuple[int, ...],
    cfg: Config,
    hyps: frozenset[Judgement],
) -> CheckError | None:
    """Local validity of one node, given its premises' conclusions."""
    j = d.conclusion
    if not isinstance(j.eps, Fraction) or j.eps < 0:
        return _fail(d.rule, path, f"bad bound {j.eps!r}")
    if d.rule in _AXIOM_RULES:
        return _check_axiom_shape(d, path)
    match d.rule:
        case Rule.REFL:
            if d.premises or j.left != j.right or j.eps != 0:
                return _fail(d.rule, path, "must conclude e = e at bound 0")
        case Rule.SYMM:
            if len(d.premises) != 1:
                return _fail(d.rule, path, "takes one premise")
            if d.premises[0].conclusion != j.flipped():
                return _fail(d.rule, path, "premise is not the mirrored judgement")
        case Rule.TRIANG:
            if len(d.premises) != 2:
                return _fail(d.rule, path, "takes two premises")
            m = d.meta.midpoint
            if m is None:
                return _fail(d.rule, path, "midpoint not recorded")
            p1, p2 = (p.conclusion for p in d.premises)
            if p1.left != j.left or p1.right != m:
                return _fail(d.rule, path, "first premise does not reach the midpoint")
            if p2.left != m or p2.right != j.right:
                return _fail(d.rule, path, "second premise does not leave the midpoint")
            if j.eps != p1.eps + p2.eps:
                return _fail(d.rule, path, f"bound {j.eps} is not {p1.eps} + {p2.eps}")
        case Rule.MAX:
            if len(d.premises) != 1:
                return _fail(d.rule, path, "takes one premise")
            p = d.premises[0].conclusion
            if p.left != j.left or p.right != j.right:
                return _fail(d.rule, path, "premise proves different sides")
            if not j.eps > p.eps:
                return _fail(d.rule, path, f"bound must strictly grow: {p.eps} -> {j.eps}")
        case Rule.SL5:
            if len(d.premises) != 2:
                return _fail(d.rule, path, "takes two premises")
            p1, p2 = (p.conclusion for p in d.premises)
            if not (isinstance(j.left, Sum) and isinstance(j.right, Sum)):
                return _fail(d.rule, path, "conclusion sides must be sums")
            if (
                p1.left != j.left.left
                or p2.left != j.left.right
                or p1.right != j.right.left
                or p2.right != j.right.right
            ):
                return _fail(d.rule, path, "premises do not match the summands")
            if j.eps != max(p1.eps, p2.eps):
                return _fail(d.rule, path, f"bound {j.eps} is not max({p1.eps}, {p2.eps})")
        case Rule.NEXP:
            err = _check_nexp(d, path)
            if err is not None:
                return err
        case Rule.TOP:
            if d.premises or j.eps != 1:
                return _fail(d.rule, path, "concludes any sides at bound exactly 1")
        case Rule.NPREF:
            if len(d.premises) != 1:
                return _fail(d.rule, path, "takes one premise")
            a = d.meta.letter
            if a is None:
                return _fail(d.rule, path, "letter not recorded")
            p = d.premises[0].conclusion
            want_l = Seq(Letter(a), p.left)
            want_r = Seq(Letter(a), p.right)
            if j.left != want_l or j.right != want_r:
                return _fail(d.rule, path, f"conclusion must prefix both sides with {a!r}")
            if j.eps < cfg.discount * p.eps:
                return _fail(
                    d.rule, path, f"bound {j.eps} below {cfg.discount} * {p.eps}"
                )
        case Rule.HYPOTHESIS:
            if d.premises:
                return _fail(d.rule, path, "takes no premises")
            if j not in hyps:
                return _fail(d.rule, path, "judgement is not among the hypotheses")
        case Rule.CONT_TEMPLATE:
            if d.premises:
                return _fail(d.rule, path, "takes no premises")
            if j.eps != 0:
                return _fail(d.rule, path, "templates conclude at bound 0")
            if d.meta.schema not in TEMPLATE_SCHEMAS:
                return _fail(d.rule, path, f"unknown schema {d.meta.schema!r}")
        case _:
            return _fail(d.rule, path, "unhandled rule")
    return None


def _check_nexp(d: Derivation, path: tuple[int, ...]) -> CheckError | None:
    j = d.conclusion
    l, r = j.left, j.right
    if type(l) is not type(r):
        return _fail(d.rule, path, "sides use different constructors")
    match l:
        case Zero() | One() | Letter(_):
            if l != r:
                return _fail(d.rule, path, "constant sides differ")
            if d.premises:
                return _fail(d.rule, path, "constants take no premises")
            return None
        case Sum(_, _) | Seq(_, _):
            if len(d.premises) != 2:
                return _fail(d.rule, path, "binary constructors take two premises")
            p1, p2 = (p.conclusion for p in d.premises)
            assert isinstance(r, (Sum, Seq))
            if p1.left != l.left or p1.right != r.left:
                return _fail(d.rule, path, "first premise does not relate the left parts")
            if p2.left != l.right or p2.right != r.right:
                return _fail(d.rule, path, "second premise does not relate the right parts")
            if p1.eps != j.eps or p2.eps != j.eps:
                return _fail(d.rule, path, "premise bounds must equal the conclusion bound")
            return None
        case Star(_):
            if len(d.premises) != 1:
                return _fail(d.rule, path, "iteration takes one premise")
            p = d.premises[0].conclusion
            assert isinstance(r, Star)
            if p.left != l.body or p.right != r.body:
                return _fail(d.rule, path, "premise does not relate the bodies")
            if p.eps != j.eps:
                return _fail(d.rule, path, "premise bound must equal the conclusion bound")
            return None
    return _fail(d.rule, path, "sides are not expressions")


def diagnose(
    root: Derivation,
    cfg: Config,
    hypotheses: Iterable[Judgement] = (),
    spot_checks: int = DEFAULT_SPOT_CHECKS,
) -> CheckError | None:
    """Check every node; None when the derivation is valid, else the first
    failure found with its location."""
    hyps = frozenset(hypotheses)
    seen: set[int] = set()
    stack: list[tuple[Derivation, tuple[int, ...]]] = [(root, ())]
    while stack:
        d, path = stack.pop()
        if id(d) in seen:
            continue
        seen.add(id(d))
        err = _check_node(d, path, cfg, hyps)
        if err is not None:
            return err
        if d.rule is Rule.CONT_TEMPLATE:
            err = _expand_template(d, path, cfg, hyps, spot_checks, stack)
            if err is not None:
                return err
        for i, p in enumerate(d.premises):
            stack.append((p, path + (i,)))
    return None


def _expand_template(
    d: Derivation,
    path: tuple[int, ...],
    cfg: Config,
    hyps: frozenset[Judgement],
    spot_checks: int,
    stack: list[tuple[Derivation, tuple[int, ...]]],
) -> CheckError | None:
    schema = d.meta.schema
    assert schema is not None
    generator = TEMPLATE_SCHEMAS[schema]
    indices = sorted(set(d.meta.spot_indices) | set(range(spot_checks + 1)))
    try:
        instantiate = generator(dict(d.meta.params), d.conclusion, cfg)
    except (_TemplateRefused, ProofError, RegexError, CertificateError) as exc:
        return _fail(d.rule, path, f"schema {schema!r} refused: {exc}")
    for i in indices:
        try:
            inst = instantiate(i)
        except (_TemplateRefused, ProofError, RegexError) as exc:
            return _fail(d.rule, path, f"instance {i} failed to build: {exc}")
        want = Judgement(d.left, d.right, cfg.discount**i)
        if inst.conclusion != want:
            return _fail(
                d.rule,
                path,
                f"instance {i} concludes {pretty(inst.left)} = {pretty(inst.right)}"
                f" within {inst.eps}, expected bound {want.eps}",
            )
        stack.append((inst, path + (i,)))
    return None


def check(
    root: Derivation,
    cfg: Config,
    hypotheses: Iterable[Judgement] = (),
    spot_checks: int = DEFAULT_SPOT_CHECKS,
) -> bool:
    return diagnose(root, cfg, hypotheses, spot_checks) is None


def check_certificate(cert: Certificate, spot_checks: int = DEFAULT_SPOT_CHECKS) -> bool:
    return check(cert.root, cert.config, cert.hypotheses, spot_checks)


def diagnose_certificate(
    cert: Certificate, spot_checks: int = DEFAULT_SPOT_CHECKS
) -> CheckError | None:
    return diagnose(cert.root, cert.config, cert.hypotheses, spot_checks)


# ---------------------------------------------------------------------------
# Zero-bound rewriting derivations: ACI normalization and unit collapse


@lru_cache(maxsize=4096)
def aci_to_canonical(e: Regex) -> Derivation:
    """Derivation of ``e = normal(e)`` at bound 0."""
    match e:
        case Zero() | One() | Letter(_):
            return refl(e)
        case Star(b):
            return star_cong(aci_to_canonical(b))
        case Seq(l, r):
            return seq_cong(aci_to_canonical(l), aci_to_canonical(r))
        case Sum(l, r):
            dl = aci_to_canonical(l)
            dr = aci_to_canonical(r)
            merged = _merge_sorted(dl.right, dr.right)
            out = _chain(sum_cong(dl, dr), merged)
            assert out.right == normal(e)
            return out
    raise TypeError(f"not a regex: {e!r}")


def _merge_sorted(x: Regex, y: Regex) -> Derivation:
    """``x + y = normal(x + y)`` for already-normal ``x`` and ``y``."""
    if not isinstance(x, Sum):
        return _insert_sorted(x, y)
    h, t = x.left, x.right
    rec = _merge_sorted(t, y)
    return _chain(
        sl3(h, t, y),
        sum_cong(refl(h), rec),
        _insert_sorted(h, rec.right),
    )


def _insert_sorted(s: Regex, y: Regex) -> Derivation:
    """``s + y = normal(s + y)`` for a single normal summand ``s`` and normal ``y``."""
    if not isinstance(y, Sum):
        if s == y:
            return sl1(s)
        if sort_key(s) <= sort_key(y):
            return refl(Sum(s, y))
        return sl2(s, y)
    h, t = y.left, y.right
    if s == h:
        return _chain(symm(sl3(s, s, t)), sum_cong(sl1(s), refl(t)))
    if sort_key(s) < sort_key(h):
        return refl(Sum(s, y))
    rec = _insert_sorted(s, t)
    return _chain(
        symm(sl3(s, h, t)),
        sum_cong(sl2(s, h), refl(t)),
        sl3(h, s, t),
        sum_cong(refl(h), rec),
    )


def aci_bridge(x: Regex, y: Regex) -> Derivation:
    """``x = y`` at bound 0, for ACI-equivalent expressions."""
    if x == y:
        return refl(x)
    if canonicalize(x) != canonicalize(y):
        raise ProofError(
            f"{pretty(x)} and {pretty(y)} are not equal up to sum reordering"
        )
    return _chain(aci_to_canonical(x), symm(aci_to_canonical(y)))


@lru_cache(maxsize=4096)
def unit_collapse(e: Regex) -> Derivation:
    """Derivation of ``e = unit_normalize(e)`` at bound 0."""
    match e:
        case Zero() | One() | Letter(_):
            return refl(e)
        case Sum(l, r):
            dl = unit_collapse(l)
            dr = unit_collapse(r)
            ln, rn = dl.right, dr.right
            base = sum_cong(dl, dr)
            if ln == Zero():
                out = _chain(base, sl2(Zero(), rn), sl4(rn))
            elif rn == Zero():
                out = _chain(base, sl4(ln))
            elif ln == l and rn == r:
                out = refl(e)
            else:
                out = base
        case Seq(l, r):
            dl = unit_collapse(l)
            dr = unit_collapse(r)
            ln, rn = dl.right, dr.right
            base = seq_cong(dl, dr)
            if ln == Zero():
                out = _chain(base, zero_s(rn))
            elif rn == Zero():
                out = _chain(base, s_zero(ln))
            elif ln == One():
                out = _chain(base, one_s(rn))
            elif rn == One():
                out = _chain(base, s_one(ln))
            elif ln == l and rn == r:
                out = refl(e)
            else:
                out = base
        case Star(b):
            db = unit_collapse(b)
            out = refl(e) if db.right == b else star_cong(db)
        case _:
            raise TypeError(f"not a regex: {e!r}")
    assert out.right == unit_normalize(e)
    return out


@lru_cache(maxsize=4096)
def normalization_proof(e: Regex) -> Derivation:
    """Derivation of ``e = state_normal(e)`` at bound 0."""
    chain = aci_to_canonical(e)
    cur = chain.right
    while True:
        du = unit_collapse(cur)
        da = aci_to_canonical(du.right)
        if da.right == cur:
            assert cur == state_normal(e)
            return chain
        chain = _chain(chain, du, da)
        cur = da.right


# ---------------------------------------------------------------------------
# The fundamental decomposition, derived


def _dist_right(e: Regex, g: Regex) -> Derivation:
    """``e;g`` distributed over the sum structure of ``e``, at bound 0."""
    if not isinstance(e, Sum):
        return refl(Seq(e, g))
    return _chain(
        d2(e.left, e.right, g),
        sum_cong(_dist_right(e.left, g), _dist_right(e.right, g)),
    )


def _fold_cong(slot_proofs: list[Derivation], tail: Derivation) -> Derivation:
    """Congruence over a left-folded sum of slots with a trailing element."""
    if not slot_proofs:
        return tail
    acc = slot_proofs[0]
    for sp in slot_proofs[1:]:
        acc = sum_cong(acc, sp)
    return sum_cong(acc, tail)


def _fold_sl5(slot_proofs: list[Derivation], tail: Derivation) -> Derivation:
    if not slot_proofs:
        return tail
    acc = slot_proofs[0]
    for sp in slot_proofs[1:]:
        acc = sl5(acc, sp)
    return sl5(acc, tail)


@lru_cache(maxsize=4096)
def normal_form_proof(e: Regex, alphabet: Alphabet) -> Derivation:
    """Derivation of ``e = fundamental_decomposition(e, alphabet)`` at bound 0."""
    stray = letters(e) - set(alphabet)
    if stray:
        raise ProofError(f"letters {sorted(stray)} of {pretty(e)} missing from the alphabet")
    target = fundamental_decomposition(e, alphabet)
    match e:
        case Zero() | One() | Letter(_):
            term_proofs = []
            for a in alphabet:
                da = step(e, a)
                term = s_one(Letter(a)) if da == One() else s_zero(Letter(a))
                term_proofs.append(term)
            folded = _fold_sl5(term_proofs, refl(output_bit(e)))
            collapse = unit_collapse(folded.right)
            assert collapse.right == e
            return symm(_chain(folded, collapse))
        case Sum(f, g):
            base = sum_cong(normal_form_proof(f, alphabet), normal_form_proof(g, alphabet))
            slot_proofs = [symm(d1(Letter(a), step(f, a), step(g, a))) for a in alphabet]
            bf, bg = output_bit(f), output_bit(g)
            if bf == bg:
                bit_proof = sl1(bf)
            elif bg == Zero():
                bit_proof = sl4(bf)
            else:
                bit_proof = _chain(sl2(Zero(), One()), sl4(One()))
            slots = _fold_cong(slot_proofs, bit_proof)
            return _chain(base, aci_bridge(base.right, slots.left), slots)
        case Seq(f, g):
            return _seq_normal_form(f, g, alphabet, target)
        case Star(f):
            return _star_normal_form(f, alphabet)
    raise TypeError(f"not a regex: {e!r}")


def _seq_normal_form(f: Regex, g: Regex, alphabet: Alphabet, target: Regex) -> Derivation:
    base = seq_cong(normal_form_proof(f, alphabet), refl(g))
    dist = _dist_right(base.right.left, g)
    reassoc = [symm(s_assoc(Letter(a), step(f, a), g)) for a in alphabet]
    if output(f) == 0:
        tail = zero_s(g)
        shaped = _fold_cong(reassoc, tail)
        slot_bridges = []
        for a in alphabet:
            fa_g = Seq(step(f, a), g)
            widen = _chain(
                symm(sl4(fa_g)),
                sum_cong(refl(fa_g), symm(zero_s(step(g, a)))),
            )
            slot_bridges.append(seq_cong(refl(Letter(a)), widen))
        final = _fold_cong(slot_bridges, refl(output_bit(Seq(f, g))))
        out = _chain(base, dist, shaped, final)
    else:
        tail = _chain(one_s(g), normal_form_proof(g, alphabet))
        shaped = _fold_cong(reassoc, tail)
        slot_merges = []
        for a in alphabet:
            fa_g = Seq(step(f, a), g)
            ga = step(g, a)
            lift = sum_cong(
                refl(Seq(Letter(a), fa_g)),
                seq_cong(refl(Letter(a)), symm(one_s(ga))),
            )
            merge = symm(d1(Letter(a), fa_g, Seq(One(), ga)))
            slot_merges.append(_chain(lift, merge))
        final = _fold_cong(slot_merges, refl(output_bit(g)))
        out = _chain(
            base, dist, shaped, aci_bridge(shaped.right, final.left), final
        )
    assert out.right == target
    return out


def _star_normal_form(f: Regex, alphabet: Alphabet) -> Derivation:
    e = Star(f)
    nf_f = normal_form_proof(f, alphabet)
    if not alphabet:
        # No letters: every language is contained in {empty word}, so the
        # decomposition is just the output bit 1.
        if output(f) == 0:
            return _chain(
                unroll(f),
                sum_cong(seq_cong(nf_f, refl(e)), refl(One())),
                sum_cong(zero_s(e), refl(One())),
                sl2(Zero(), One()),
                sl4(One()),
            )
        to_sum = _chain(nf_f, symm(_chain(sl2(Zero(), One()), sl4(One()))))
        return _chain(
            star_cong(to_sum),
            tight(Zero()),
            _star_normal_form(Zero(), alphabet),
        )
    F = fundamental_decomposition(f, alphabet)
    assert isinstance(F, Sum)
    W = F.left
    if output(f) == 1:
        drop_bit = tight(W)
    else:
        drop_bit = star_cong(sl4(W))
    c1 = _chain(star_cong(nf_f), drop_bit)
    c2 = unroll(W)
    c3 = sum_cong(seq_cong(refl(W), symm(c1)), refl(One()))
    c4 = sum_cong(_dist_right(W, e), refl(One()))
    reassoc = [symm(s_assoc(Letter(a), step(f, a), e)) for a in alphabet]
    c5 = _fold_cong(reassoc, refl(One()))
    out = _chain(c1, c2, c3, c4, c5)
    assert out.right == fundamental_decomposition(e, alphabet)
    return out


# ---------------------------------------------------------------------------
# Prefixing by empty-word-free expressions


def generalized_prefix(
    premise: Derivation, e: Regex, eps_out: Fraction, cfg: Config
) -> Derivation:
    """From ``f = g`` within eps, derive ``e;f = e;g`` within ``eps_out``.

    Requires ``o(e) = 0`` and ``eps_out >= discount * eps``; the contraction
    of a guarding letter is what pays for the looser bound.
    """
    if output(e) != 0:
        raise ProofError(f"prefix {pretty(e)} accepts the empty word")
    if eps_out < cfg.discount * premise.eps:
        raise ProofError(
            f"target bound {eps_out} below {cfg.discount} * {premise.eps}"
        )
    f, g = premise.left, premise.right
    match e:
        case Zero():
            return weaken_to(_chain(zero_s(f), symm(zero_s(g))), eps_out)
        case Letter(c):
            return npref(premise, c, cfg, eps_out)
        case Sum(e1, e2):
            inner = sl5(
                generalized_prefix(premise, e1, eps_out, cfg),
                generalized_prefix(premise, e2, eps_out, cfg),
            )
            return _chain(d2(e1, e2, f), inner, symm(d2(e1, e2, g)))
        case Seq(e1, e2):
            if output(e1) == 0 and output(e2) == 0:
                core = generalized_prefix(
                    generalized_prefix(premise, e2, eps_out, cfg), e1, eps_out, cfg
                )
            elif output(e1) == 0:
                lifted = seq_cong(refl_at(e2, premise.eps), premise)
                core = generalized_prefix(lifted, e1, eps_out, cfg)
            else:
                core = seq_cong(
                    refl_at(e1, eps_out),
                    generalized_prefix(premise, e2, eps_out, cfg),
                )
            return _chain(symm(s_assoc(e1, e2, f)), core, s_assoc(e1, e2, g))
    raise ProofError(f"cannot prefix with {pretty(e)}")


# ---------------------------------------------------------------------------
# Loop hypotheses and star unrollings


def _split_loop_hypothesis(hyp: Judgement) -> tuple[Regex, Regex, Regex]:
    """Destructure ``g = e;g + f`` (bound 0, o(e) = 0) into (g, e, f)."""
    if hyp.eps != 0:
        raise ProofError("loop hypotheses carry bound 0")
    rhs = hyp.right
    if not (isinstance(rhs, Sum) and isinstance(rhs.left, Seq)):
        raise ProofError(f"hypothesis right side {pretty(rhs)} is not e;g + f")
    e = rhs.left.left
    if rhs.left.right != hyp.left:
        raise ProofError("loop body does not recur on the left side")
    if output(e) != 0:
        raise ProofError(f"loop head {pretty(e)} accepts the empty word")
    return hyp.left, e, rhs.right


def star_unroll_proof(hyp: Judgement, n: int, cfg: Config) -> Derivation:
    """From the loop hypothesis ``g = e;g + f``, conclude ``g = e*;f``
    within ``discount ** n``."""
    g, e, f = _split_loop_hypothesis(hyp)
    closed = Seq(Star(e), f)
    if n < 0:
        raise ProofError("unrolling depth must be nonnegative")
    if n == 0:
        return top_rule(g, closed)
    prev = star_unroll_proof(hyp, n - 1, cfg)
    gstep = generalized_prefix(prev, e, cfg.discount**n, cfg)
    s5 = sl5(gstep, refl(f))
    c1 = sum_cong(s_assoc(e, Star(e), f), refl(f))
    c2 = sum_cong(refl(Seq(Seq(e, Star(e)), f)), symm(one_s(f)))
    c3 = symm(d2(Seq(e, Star(e)), One(), f))
    c4 = seq_cong(symm(unroll(e)), refl(f))
    return _chain(hypothesis(hyp), s5, c1, c2, c3, c4)


def salomaa_rule(
    hyp: Judgement, cfg: Config, spot_checks: int = DEFAULT_SPOT_CHECKS
) -> Derivation:
    """The closed solution ``g = e*;f`` at bound 0, as a template node.

    The checker regenerates unrollings of the hypothesis at the recorded
    depths (and its own) and validates each; the limit holds because the
    bounds ``discount ** n`` vanish.
    """
    g, e, f = _split_loop_hypothesis(hyp)
    params = {"g": pretty(g), "e": pretty(e), "f": pretty(f)}
    concl = Judgement(g, Seq(Star(e), f), Fraction(0))
    return cont_template("star_unroll", params, concl, range(spot_checks + 1))


def _star_unroll_template(
    params: dict[str, str], conclusion: Judgement, cfg: Config
) -> Callable[[int], Derivation]:
    try:
        g = parse(params["g"])
        e = parse(params["e"])
        f = parse(params["f"])
    except KeyError as exc:
        raise _TemplateRefused(f"missing parameter {exc}") from exc
    hyp = Judgement(g, Sum(Seq(e, g), f), Fraction(0))
    _split_loop_hypothesis(hyp)
    if conclusion != Judgement(g, Seq(Star(e), f), Fraction(0)):
        raise _TemplateRefused("conclusion does not match the parameters")
    return lambda i: star_unroll_proof(hyp, i, cfg)


# ---------------------------------------------------------------------------
# Synthesis


@dataclass(frozen=True)
class SynthesisFailure(Exception):
    """The requested bound is below the actual distance."""

    distance: Fraction
    separation: ExponentValue
    witness: str | None

    def __str__(self) -> str:
        w = "the empty word" if self.witness == "" else repr(self.witness)
        return (
            f"the languages are {self.distance} apart"
            f" (separated by {w}), which exceeds the requested bound"
        )


class _ProofContext:
    """Shared automaton, fixed point, and memo tables for one expression pair."""

    def __init__(self, e: Regex, f: Regex, cfg: Config, alphabet: Alphabet, cap: int):
        self.cfg = cfg
        self.alphabet = alphabet
        self.aut = build([e, f], alphabet, cap)
        self.descent = kleene_descent(self.aut)
        s, t = self.aut.roots
        if s == t:
            self.root_separation = ExponentValue(None)
        else:
            self.root_separation = self.descent.table[(min(s, t), max(s, t))]
        self._pair_memo: dict[tuple[int, int, int], Derivation] = {}
        self._bridge_memo: dict[tuple[int, int], Derivation] = {}

    def _bridge(self, i: int, k: int) -> Derivation:
        """``step(states[i], a_k) = successor representative`` at bound 0."""
        got = self._bridge_memo.get((i, k))
        if got is None:
            raw = step(self.aut.states[i], self.alphabet[k])
            got = normalization_proof(raw)
            assert got.right == self.aut.states[self.aut.transitions[i][k]]
            self._bridge_memo[(i, k)] = got
        return got

    def _pair_proof(self, i: int, j: int, n: int) -> Derivation:
        """Relate the representatives of states i and j within
        ``discount ** min(n, separation exponent)``."""
        if i == j:
            return refl(self.aut.states[i])
        key = (min(i, j), max(i, j), n)
        flip = i > j
        got = self._pair_memo.get(key)
        if got is None:
            got = self._build_pair_proof(*key)
            self._pair_memo[key] = got
        return symm(got) if flip else got

    def _build_pair_proof(self, i: int, j: int, n: int) -> Derivation:
        aut = self.aut
        g, h = aut.states[i], aut.states[j]
        if n == 0 or aut.outputs[i] != aut.outputs[j]:
            return top_rule(g, h)
        slots = []
        for k, a in enumerate(self.alphabet):
            bg = self._bridge(i, k)
            bh = self._bridge(j, k)
            sub = self._pair_proof(aut.transitions[i][k], aut.transitions[j][k], n - 1)
            premise = _chain(bg, sub, symm(bh))
            slots.append(npref(premise, a, self.cfg))
        folded = _fold_sl5(slots, refl(output_bit(g)))
        nf_g = normal_form_proof(g, self.alphabet)
        nf_h = normal_form_proof(h, self.alphabet)
        return _chain(nf_g, folded, symm(nf_h))

    def root_proof(self, e: Regex, f: Regex, n: int) -> Derivation:
        s = self.aut.state_of(e)
        t = self.aut.state_of(f)
        core = self._pair_proof(s, t, n)
        return _chain(normalization_proof(e), core, symm(normalization_proof(f)))


@lru_cache(maxsize=64)
def _make_context(e: Regex, f: Regex, cfg: Config, alphabet: Alphabet, cap: int) -> _ProofContext:
    return _ProofContext(e, f, cfg, alphabet, cap)


def iterate_proof(
    e: Regex,
    f: Regex,
    n: int,
    cfg: Config,
    alphabet: Alphabet | None = None,
    cap: int = DEFAULT_STATE_CAP,
) -> Derivation:
    """The n-th approximant: ``e = f`` within ``discount ** n`` or better
    (the bound is exact once ``n`` reaches the separation exponent)."""
    if alphabet is None:
        alphabet = infer_alphabet(e, f)
    ctx = _make_context(e, f, cfg, alphabet, cap)
    return ctx.root_proof(e, f, n)


def _descent_template(
    params: dict[str, str], conclusion: Judgement, cfg: Config
) -> Callable[[int], Derivation]:
    try:
        left = parse(params["left"])
        right = parse(params["right"])
    except KeyError as exc:
        raise _TemplateRefused(f"missing parameter {exc}") from exc
    if conclusion != Judgement(left, right, Fraction(0)):
        raise _TemplateRefused("conclusion does not match the parameters")
    alphabet = infer_alphabet(left, right)
    ctx = _make_context(left, right, cfg, alphabet, DEFAULT_STATE_CAP)
    if not ctx.root_separation.is_zero:
        raise _TemplateRefused(
            "the languages are apart; no descent to 0 exists"
        )
    return lambda i: weaken_to(ctx.root_proof(left, right, i), cfg.discount**i)


TEMPLATE_SCHEMAS: dict[str, Callable[[dict[str, str], Judgement, Config], Callable[[int], Derivation]]] = {
    "star_unroll": _star_unroll_template,
    "descent": _descent_template,
}


def synthesize(
    e: Regex,
    f: Regex,
    epsilon: Fraction,
    cfg: Config | None = None,
    alphabet: Alphabet | None = None,
    cap: int = DEFAULT_STATE_CAP,
    spot_checks: int = DEFAULT_SPOT_CHECKS,
) -> Certificate:
    """Produce a checkable certificate of ``e = f`` within ``epsilon``.

    Raises :class:`SynthesisFailure` when ``epsilon`` undercuts the actual
    distance; in all other cases the certificate's bound is ``epsilon``
    itself (distance zero at bound zero uses a descent template).
    """
    cfg = cfg or Config()
    epsilon = epsilon if isinstance(epsilon, Fraction) else Fraction(epsilon)
    if epsilon < 0:
        raise ValueError(f"negative bound {epsilon}")
    if e == f:
        return Certificate(cfg, refl_at(e, epsilon))
    if canonicalize(e) == canonicalize(f):
        return Certificate(cfg, weaken_to(aci_bridge(e, f), epsilon))
    if alphabet is None:
        alphabet = infer_alphabet(e, f)
    ctx = _make_context(e, f, cfg, alphabet, cap)
    sep = ctx.root_separation
    if sep.is_zero:
        if epsilon == 0:
            node = cont_template(
                "descent",
                {"left": pretty(e), "right": pretty(f)},
                Judgement(e, f, Fraction(0)),
                range(spot_checks + 1),
            )
            return Certificate(cfg, node)
        n = 0
        while cfg.discount**n > epsilon:
            n += 1
        return Certificate(cfg, weaken_to(ctx.root_proof(e, f, n), epsilon))
    assert sep.exponent is not None
    dist = sep.value(cfg.discount)
    if epsilon < dist:
        raise SynthesisFailure(dist, sep, witness(e, f, alphabet, cap))
    return Certificate(cfg, weaken_to(ctx.root_proof(e, f, sep.exponent), epsilon))
