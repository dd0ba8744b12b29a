"""Command-line front end: parse polynomials, orchestrate the modules,
emit versioned JSON (or TSV for tabular outputs).

Exit codes: 0 success, 2 falsification candidate (a `verify` run whose
numerator recovery left nonzero residuals), 1 usage or execution error.
Errors are rendered as structured JSON on standard error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from . import euclid, noncrit, oracle, spf, tsden
from .mpoly import Polynomial, from_terms
from .newton import build_polyhedron
from .numeric import PrimeSpec

SCHEMA = 1
_EXPONENT_LIMIT = 10**6


class ParseError(ValueError):
    """Syntax error in a polynomial source string, with its position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


# ---------------------------------------------------------------------------
# polynomial grammar: signed integer coefficients, identifiers, *, ^, + and -;
# juxtaposition multiplies (3x == 3*x); no parentheses.

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[\^*+\-])"
)


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    return tokens


def parse_polynomial(text: str) -> Polynomial:
    """Parse a sum of integer-coefficient monomials into canonical form.

    Variables are the identifiers that appear, in sorted order, so the
    printed canonical form parses back to an equal polynomial.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial", 0)
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else (None, None, len(text))

    terms: List[Tuple[int, Dict[str, int]]] = []
    sign = 1
    kind, value, pos = peek()
    if kind == "op" and value in "+-":
        sign = -1 if value == "-" else 1
        i += 1

    while True:
        # one term: factors joined by '*' or juxtaposition
        coeff = sign
        powers: Dict[str, int] = {}
        saw_factor = False
        while True:
            kind, value, pos = peek()
            if kind == "int":
                i += 1
                base = int(value)
                exp, exp_pos = _maybe_exponent(tokens, i)
                if exp is not None:
                    i += 2
                    coeff *= base**exp
                else:
                    coeff *= base
                saw_factor = True
            elif kind == "name":
                i += 1
                exp, exp_pos = _maybe_exponent(tokens, i)
                if exp is not None:
                    i += 2
                else:
                    exp = 1
                if exp > _EXPONENT_LIMIT:
                    raise ParseError(
                        f"exponent {exp} exceeds the limit {_EXPONENT_LIMIT}", exp_pos
                    )
                powers[value] = powers.get(value, 0) + exp
                saw_factor = True
            elif kind == "op" and value == "*":
                if not saw_factor:
                    raise ParseError("'*' with no left operand", pos)
                i += 1
                nk, nv, np_ = peek()
                if nk not in ("int", "name"):
                    raise ParseError("'*' with no right operand", np_)
            else:
                break
        if not saw_factor:
            raise ParseError("expected a coefficient or variable", pos)
        terms.append((coeff, powers))

        kind, value, pos = peek()
        if kind is None:
            break
        if kind == "op" and value in "+-":
            sign = -1 if value == "-" else 1
            i += 1
            continue
        raise ParseError(f"unexpected token {value!r}", pos)

    variables = sorted({name for _, powers in terms for name in powers})
    pairs = []
    for coeff, powers in terms:
        exps = tuple(powers.get(v, 0) for v in variables)
        pairs.append((exps, coeff))
    return from_terms(variables, pairs)


def _maybe_exponent(tokens, i) -> Tuple[Optional[int], int]:
    """If tokens[i] is '^', return (exponent value, its position)."""
    if i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] == "^":
        if i + 1 >= len(tokens) or tokens[i + 1][0] != "int":
            raise ParseError("'^' must be followed by a natural number", tokens[i][2])
        exp = int(tokens[i + 1][1])
        if exp > _EXPONENT_LIMIT:
            raise ParseError(
                f"exponent {exp} exceeds the limit {_EXPONENT_LIMIT}", tokens[i + 1][2]
            )
        return exp, tokens[i + 1][2]
    return None, tokens[i][2] if i < len(tokens) else -1


# ---------------------------------------------------------------------------
# requests and orchestration


@dataclass
class AnalysisRequest:
    f_text: Optional[str] = None
    g_text: Optional[str] = None
    prime: int = 5
    depth: Optional[int] = None
    max_deg: Optional[int] = None
    budget: int = oracle.DEFAULT_BUDGET
    mode: Optional[str] = None  # noncrit: exact | heuristic
    c: Optional[int] = None
    d: Optional[int] = None
    c_weight: Optional[int] = None
    d_weight: Optional[int] = None
    domain: str = "full"
    trace: bool = False
    depth_guard: int = 32


def _require(req: AnalysisRequest, field: str, flag: str):
    value = getattr(req, field)
    if value is None:
        raise ValueError(f"this subcommand requires {flag}")
    return value


def _noncrit_mode(req: AnalysisRequest, f: Polynomial) -> str:
    if req.mode == "exact":
        return "exact_small"
    if req.mode == "heuristic":
        return "finite_field_heuristic"
    if req.mode is None:
        return "exact_small" if f.nvars <= 2 else "finite_field_heuristic"
    raise ValueError(f"unknown mode {req.mode!r} (use exact or heuristic)")


def run(cmd: str, req: AnalysisRequest) -> Tuple[dict, int]:
    """Execute one subcommand; returns (JSON payload, exit code)."""
    if cmd == "analyze":
        f = parse_polynomial(_require(req, "f_text", "-f"))
        poly = build_polyhedron(f)
        report = noncrit.check_noncritical(f, mode=_noncrit_mode(req, f), polyhedron=poly)
        payload = {
            "schema": SCHEMA,
            "f": str(f),
            "polyhedron": poly.as_dict(),
            "noncritical": report.as_dict(),
        }
        if req.g_text is not None:
            g = parse_polynomial(req.g_text)
            den = tsden.denominator(f, g)
            payload["g"] = str(g)
            payload["denominator"] = den.as_dict()
        return payload, 0

    if cmd == "poles":
        f = parse_polynomial(_require(req, "f_text", "-f"))
        g = parse_polynomial(_require(req, "g_text", "-g"))
        poles = tsden.candidate_poles(f, g)
        return {"schema": SCHEMA, "poles": poles.as_strings()}, 0

    if cmd == "spf":
        f = parse_polynomial(_require(req, "f_text", "-f"))
        p = PrimeSpec(req.prime)
        if req.domain == "full":
            D = spf.ResidueDomain.full(p.p, f.nvars)
        elif req.domain == "torus":
            D = spf.ResidueDomain.unit_torus(p.p, f.nvars)
        else:
            raise ValueError(f"unknown domain {req.domain!r} (use full or torus)")
        result = spf.spf_evaluate(f, D, p, depth_guard=req.depth_guard)
        payload = {
            "schema": SCHEMA,
            "f": str(f),
            "p": p.p,
            "domain": req.domain,
            "zeta": result.zeta.as_dict(),
            "text": str(result.zeta),
        }
        if req.trace:
            payload["trace"] = result.trace.as_dict()
        return payload, 0

    if cmd == "count":
        f = parse_polynomial(_require(req, "f_text", "-f"))
        p = PrimeSpec(req.prime)
        depth = req.depth if req.depth is not None else 8
        counts = oracle.count_mod(f, p, depth, budget=req.budget)
        series = oracle.measure_series(counts)
        payload = {
            "schema": SCHEMA,
            **counts.as_dict(),
            "series": [str(c) for c in series.coefficients],
        }
        return payload, 0

    if cmd == "verify":
        f = parse_polynomial(_require(req, "f_text", "-f"))
        g = parse_polynomial(_require(req, "g_text", "-g"))
        p = PrimeSpec(req.prime)
        report = oracle.verify_theorem(
            f, g, p, depth=req.depth, max_deg=req.max_deg, budget=req.budget
        )
        payload = {"schema": SCHEMA, **report.as_dict()}
        return payload, 0 if report.ok else 2

    if cmd == "phi":
        c = _require(req, "c", "-c")
        d = _require(req, "d", "-d")
        orb = euclid.orbit(c, d)
        cw = req.c_weight if req.c_weight is not None else c
        dw = req.d_weight if req.d_weight is not None else d
        sums = euclid.weight_sums(orb, cw, dw)
        payload = {
            "schema": SCHEMA,
            "c": c,
            "d": d,
            "e": orb.e,
            "e_prime": orb.e_prime,
            "period": orb.period,
            "states": [list(s) for s in orb.states],
            "c_weight": cw,
            "d_weight": dw,
            "mins": list(sums.mins),
            "picks": list(sums.picks),
            "min_sum": sums.min_sum,
            "pick_sum": sums.pick_sum,
        }
        return payload, 0

    raise ValueError(f"unknown subcommand {cmd!r}")


# ---------------------------------------------------------------------------
# rendering


def _render_tsv(cmd: str, payload: dict) -> str:
    if cmd == "count":
        lines = ["m\tN_m"]
        lines += [f"{m + 1}\t{n}" for m, n in enumerate(payload["counts"])]
        return "\n".join(lines)
    if cmd == "phi":
        lines = ["step\tstate_c\tstate_d\tmin\tpick"]
        for idx, st in enumerate(payload["states"][1:], start=1):
            lines.append(
                f"{idx}\t{st[0]}\t{st[1]}\t{payload['mins'][idx - 1]}\t{payload['picks'][idx - 1]}"
            )
        lines.append(f"min_sum\t{payload['min_sum']}")
        lines.append(f"pick_sum\t{payload['pick_sum']}")
        return "\n".join(lines)
    if cmd == "poles":
        return "\n".join(["pole"] + payload["poles"])
    raise ValueError(f"--tsv is not available for {cmd!r}; use --json")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="igusa",
        description="Exact local zeta data: Newton polyhedra, candidate poles, "
        "stationary-phase evaluation, and point-counting verification.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(sp, *, f=False, g=False, prime=False, depthish=False):
        if f:
            sp.add_argument("-f", dest="f_text", metavar="POLY", help="polynomial, e.g. 'x^2 + y^3'")
        if g:
            sp.add_argument("-g", dest="g_text", metavar="POLY", help="second polynomial (disjoint variables)")
        if prime:
            sp.add_argument("-p", dest="prime", type=int, default=5, help="prime (default 5)")
        if depthish:
            sp.add_argument("--depth", type=int, default=None, help="levels of p-adic precision")
            sp.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET,
                            help="node budget for counting (default 10^8)")
        sp.add_argument("--json", dest="fmt", action="store_const", const="json",
                        default="json", help="JSON output (default)")
        sp.add_argument("--tsv", dest="fmt", action="store_const", const="tsv",
                        help="TSV output (tabular subcommands only)")

    sp = sub.add_parser("analyze", help="Newton polyhedron, non-criticality, denominator")
    common(sp, f=True, g=True)
    sp.add_argument("--mode", choices=["exact", "heuristic"], default=None,
                    help="non-criticality decision mode")

    sp = sub.add_parser("poles", help="candidate poles of the direct-sum zeta function")
    common(sp, f=True, g=True)

    sp = sub.add_parser("spf", help="exact stationary-phase evaluation of the integral")
    common(sp, f=True, prime=True)
    sp.add_argument("--domain", choices=["full", "torus"], default="full")
    sp.add_argument("--trace", action="store_true", help="include the recursion trace")
    sp.add_argument("--depth-guard", dest="depth_guard", type=int, default=32)

    sp = sub.add_parser("count", help="count solutions mod p^m by lifting")
    common(sp, f=True, prime=True, depthish=True)

    sp = sub.add_parser("verify", help="check the predicted denominator against counts")
    common(sp, f=True, g=True, prime=True, depthish=True)
    sp.add_argument("--max-deg", dest="max_deg", type=int, default=None,
                    help="numerator degree bound (default depth-3)")

    sp = sub.add_parser("phi", help="orbit and weight tables of the interleaving map")
    common(sp)
    sp.add_argument("-c", type=int, required=True)
    sp.add_argument("-d", type=int, required=True)
    sp.add_argument("--cw", dest="c_weight", type=int, default=None, help="weight of c-steps")
    sp.add_argument("--dw", dest="d_weight", type=int, default=None, help="weight of d-steps")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    fields = {k: v for k, v in vars(args).items() if k in AnalysisRequest.__dataclass_fields__}
    req = AnalysisRequest(**fields)
    try:
        payload, code = run(args.cmd, req)
        if args.fmt == "tsv":
            print(_render_tsv(args.cmd, payload))
        else:
            print(json.dumps(payload, indent=2))
        return code
    except BrokenPipeError:
        return 1
    except Exception as exc:  # structured errors on stderr, exit 1
        error = {
            "schema": SCHEMA,
            "error": {"type": type(exc).__name__, "message": str(exc)},
        }
        if isinstance(exc, ParseError):
            error["error"]["position"] = exc.position
        print(json.dumps(error, indent=2), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
