"""Command line interface.

Subcommands: ``dist`` (distance, witness, automaton facts), ``prove``
(synthesize a certificate), ``check`` (validate a certificate document),
``batch`` (tab-separated pairs in bulk), and ``nf`` (fundamental
decomposition with its correctness certificate).

Exit codes: 0 success; 1 semantic refusal or failed check; 2 malformed
input; 3 a requested verification did not match.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from .automaton import DEFAULT_STATE_CAP, StateLimitExceeded, build, product_pairs, to_dot
from .derivatives import fundamental_decomposition
from .metric import Config, kleene_descent, pair_count, witness
from .oracle import brute_distance
from .proof import (
    DEFAULT_SPOT_CHECKS,
    Certificate,
    CertificateError,
    SynthesisFailure,
    check_certificate,
    diagnose_certificate,
    from_json,
    normal_form_proof,
    synthesize,
    to_json,
)
from .syntax import Alphabet, Regex, RegexError, infer_alphabet, make_alphabet, parse, pretty

EXIT_OK = 0
EXIT_REFUSED = 1
EXIT_BAD_INPUT = 2
EXIT_MISMATCH = 3


def _decimal(x: Fraction) -> str:
    return f"{float(x):#.6g}"


def _render_witness(w: str | None) -> str:
    if w is None:
        return "-"
    if w == "":
        return '""'
    return w


@dataclass(frozen=True)
class RunReport:
    """What one distance computation did and found."""

    left: str
    right: str
    discount: Fraction
    distance: Fraction
    witness: str | None
    states: int
    pairs: int
    iterations: int
    elapsed_ms: float

    def to_dict(self) -> dict:
        return {
            "left": self.left,
            "right": self.right,
            "lambda": str(self.discount),
            "distance": {"exact": str(self.distance), "decimal": _decimal(self.distance)},
            "witness": self.witness,
            "states": self.states,
            "pairs": self.pairs,
            "iterations": self.iterations,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }

    def to_text(self) -> str:
        return "\n".join(
            [
                f"distance: {self.distance} ({_decimal(self.distance)})",
                f"witness: {_render_witness(self.witness)}",
                f"states: {self.states}  pairs: {self.pairs}  iterations: {self.iterations}",
                f"time: {self.elapsed_ms:.2f} ms",
            ]
        )


def _parse_discount(text: str) -> Fraction:
    try:
        lam = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise RegexError(f"cannot read {text!r} as a rational") from None
    Config(discount=lam)  # range check
    return lam


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--lambda",
        dest="discount",
        default="1/2",
        metavar="Q",
        help="discount factor, a rational in (0,1) such as 1/2 or 0.25 (default 1/2)",
    )
    p.add_argument(
        "--alphabet",
        default=None,
        metavar="LETTERS",
        help="explicit alphabet, e.g. 'ab'; default: the letters in the input",
    )
    p.add_argument(
        "--cap",
        type=int,
        default=DEFAULT_STATE_CAP,
        metavar="N",
        help=f"state cap for the derivative closure (default {DEFAULT_STATE_CAP})",
    )


def _setup(args: argparse.Namespace) -> tuple[Config, Alphabet | None]:
    cfg = Config(discount=_parse_discount(args.discount))
    alphabet = make_alphabet(args.alphabet) if args.alphabet is not None else None
    return cfg, alphabet


def _parse_pair(args: argparse.Namespace, alphabet: Alphabet | None) -> tuple[Regex, Regex]:
    return parse(args.left, alphabet), parse(args.right, alphabet)


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")


def cmd_dist(args: argparse.Namespace) -> int:
    cfg, alphabet = _setup(args)
    e, f = _parse_pair(args, alphabet)
    if alphabet is None:
        alphabet = infer_alphabet(e, f)
    t0 = time.perf_counter()
    aut = build([e, f], alphabet, args.cap)
    descent = kleene_descent(aut)
    s, t = aut.roots
    if s == t:
        dist = Fraction(0)
    else:
        dist = descent.table[(min(s, t), max(s, t))].value(cfg.discount)
    w = witness(e, f, alphabet, args.cap)
    elapsed = (time.perf_counter() - t0) * 1000
    report = RunReport(
        left=args.left,
        right=args.right,
        discount=cfg.discount,
        distance=dist,
        witness=w,
        states=aut.n_states,
        pairs=pair_count(aut.n_states),
        iterations=descent.iterations,
        elapsed_ms=elapsed,
    )
    if args.dot is not None:
        _write_text(args.dot, to_dot(aut))
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(report.to_text())
        if args.trace:
            for i, table in enumerate(descent.trace):
                cells = ", ".join(
                    f"({a},{b})={'inf' if ev.exponent is None else ev.exponent}"
                    for (a, b), ev in sorted(table.items())
                )
                print(f"step {i}: {cells or '(no pairs)'}")
    if args.verify:
        bound = len(product_pairs(aut, s, t))
        reference = brute_distance(e, f, alphabet, bound, cfg.discount)
        if reference != dist:
            print(
                f"verification mismatch: fixed point gives {dist},"
                f" enumeration up to length {bound} gives {reference}",
                file=sys.stderr,
            )
            return EXIT_MISMATCH
    return EXIT_OK


def cmd_prove(args: argparse.Namespace) -> int:
    cfg, alphabet = _setup(args)
    e, f = _parse_pair(args, alphabet)
    if args.epsilon is None and not args.tight:
        raise RegexError("prove needs a bound: give EPS or pass --tight")
    if args.epsilon is not None and args.tight:
        raise RegexError("give either EPS or --tight, not both")
    if args.tight:
        from .metric import distance

        epsilon = distance(e, f, cfg, alphabet, args.cap)
    else:
        epsilon = _parse_eps_arg(args.epsilon)
    try:
        cert = synthesize(e, f, epsilon, cfg, alphabet, args.cap, args.spot_checks)
    except SynthesisFailure as exc:
        print(f"refused: {exc}", file=sys.stderr)
        print(f"distance: {exc.distance}", file=sys.stderr)
        print(f"witness: {_render_witness(exc.witness)}", file=sys.stderr)
        return EXIT_REFUSED
    if args.verify and not check_certificate(cert, args.spot_checks):
        err = diagnose_certificate(cert, args.spot_checks)
        print(f"verification mismatch: synthesized certificate fails: {err}", file=sys.stderr)
        return EXIT_MISMATCH
    text = to_json(cert)
    if args.output is not None:
        _write_text(args.output, text)
        j = cert.root.conclusion
        print(f"wrote certificate: {pretty(j.left)} = {pretty(j.right)} within {j.eps}")
    else:
        print(text)
    return EXIT_OK


def _parse_eps_arg(text: str) -> Fraction:
    try:
        eps = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise RegexError(f"cannot read {text!r} as a rational") from None
    if eps < 0:
        raise RegexError(f"bound must be nonnegative, got {eps}")
    return eps


def cmd_check(args: argparse.Namespace) -> int:
    if args.certificate == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.certificate, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise CertificateError(f"cannot read {args.certificate}: {exc}") from exc
    cert = from_json(text)
    err = diagnose_certificate(cert, args.spot_checks)
    j = cert.root.conclusion
    if args.json:
        out = {
            "valid": err is None,
            "conclusion": {"left": pretty(j.left), "right": pretty(j.right), "eps": str(j.eps)},
            "error": None if err is None else str(err),
        }
        print(json.dumps(out, indent=2))
    elif err is None:
        print(f"valid: {pretty(j.left)} = {pretty(j.right)} within {j.eps}")
    else:
        print(f"invalid: {err}")
    return EXIT_OK if err is None else EXIT_REFUSED


def cmd_batch(args: argparse.Namespace) -> int:
    cfg, alphabet = _setup(args)
    if args.file == "-":
        lines = sys.stdin.read().splitlines()
    else:
        try:
            with open(args.file, "r", encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        except OSError as exc:
            raise RegexError(f"cannot read {args.file}: {exc}") from exc
    rows: list[str] = []
    failed = False
    for line in lines:
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) < 2:
            rows.append("\t".join([line, "", "-", "-", "row needs two tab-separated expressions"]))
            failed = True
            continue
        left_text, right_text = cols[0], cols[1]
        try:
            e = parse(left_text, alphabet)
            f = parse(right_text, alphabet)
            row_alpha = alphabet if alphabet is not None else infer_alphabet(e, f)
            from .metric import distance

            dist = distance(e, f, cfg, row_alpha, args.cap)
            w = witness(e, f, row_alpha, args.cap)
            rows.append(
                "\t".join([left_text, right_text, str(dist), _render_witness(w), ""])
            )
        except (RegexError, StateLimitExceeded) as exc:
            rows.append("\t".join([left_text, right_text, "-", "-", str(exc)]))
            failed = True
    out = "\n".join(rows)
    if args.output is not None:
        _write_text(args.output, out)
    elif rows:
        print(out)
    return EXIT_REFUSED if failed else EXIT_OK


def cmd_nf(args: argparse.Namespace) -> int:
    cfg, alphabet = _setup(args)
    e = parse(args.expr, alphabet)
    if alphabet is None:
        alphabet = infer_alphabet(e)
    decomposition = fundamental_decomposition(e, alphabet)
    print(pretty(decomposition))
    proof = normal_form_proof(e, alphabet)
    cert = Certificate(cfg, proof)
    text = to_json(cert)
    if args.output is not None:
        _write_text(args.output, text)
    else:
        print(text)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regdist",
        description="Exact behavioural distances between regular expressions, with certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", help="distance between two expressions")
    p.add_argument("left")
    p.add_argument("right")
    _common_flags(p)
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--trace", action="store_true", help="print the fixed point trace")
    p.add_argument("--dot", default=None, metavar="FILE", help="write the automaton as Graphviz")
    p.add_argument(
        "--verify",
        action="store_true",
        help="cross-check against brute-force enumeration (exit 3 on mismatch)",
    )
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("prove", help="synthesize a distance certificate")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("epsilon", nargs="?", default=None, metavar="EPS")
    _common_flags(p)
    p.add_argument("--tight", action="store_true", help="prove the exact distance")
    p.add_argument("-o", "--output", default=None, metavar="FILE")
    p.add_argument(
        "--spot-checks",
        type=int,
        default=DEFAULT_SPOT_CHECKS,
        metavar="K",
        help="template instances to check (default 8)",
    )
    p.add_argument(
        "--verify",
        action="store_true",
        help="re-check the certificate before writing (exit 3 on failure)",
    )
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("check", help="validate a certificate document")
    p.add_argument("certificate", help="path to a JSON certificate, or - for stdin")
    p.add_argument(
        "--spot-checks",
        type=int,
        default=DEFAULT_SPOT_CHECKS,
        metavar="K",
        help="template instances to check (default 8)",
    )
    p.add_argument("--json", action="store_true", help="machine-readable result")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("batch", help="distances for tab-separated pairs")
    p.add_argument("file", help="input file with LEFT<TAB>RIGHT per line, or - for stdin")
    _common_flags(p)
    p.add_argument("-o", "--output", default=None, metavar="FILE")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("nf", help="fundamental decomposition plus certificate")
    p.add_argument("expr")
    _common_flags(p)
    p.add_argument("-o", "--output", default=None, metavar="FILE")
    p.set_defaults(func=cmd_nf)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        code = args.func(args)
        sys.stdout.flush()
        return code
    except BrokenPipeError:
        # The reader hung up mid-write (regdist ... | head).  Point stdout at
        # devnull so the interpreter's shutdown flush cannot raise again.
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 1
    except (RegexError, CertificateError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except StateLimitExceeded as exc:
        print(f"gave up: {exc}", file=sys.stderr)
        return EXIT_REFUSED


if __name__ == "__main__":
    sys.exit(main())
