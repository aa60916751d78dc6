"""Command-line surface.

Subcommands: expand, theta, recover, verify, jager.  Seeds are given as

    fixture:pi-minus-3          vendored 1000-digit literal
    surd:P,D,Q                  exact (P + sqrt(D))/Q, must lie in (0, 1)
    dec:0.414213562373095...    decimal literal, >= 32 significant digits

Exit codes are stable: 0 success, 2 precision exhaustion, 3 domain error,
1 anything else.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .cfengine import expand_states
from .errors import (
    CrossCheckFailure,
    DomainError,
    InsufficientPrecision,
    PrecisionExhausted,
    RegionViolation,
)
from .exactreal import (
    PrecisionContext,
    QuadraticSurd,
    RigorousReal,
    as_interval,
    certainly_gt,
    certainly_lt,
    exact_floor,
    is_exact,
)
from .fixtures import fixture_decimal
from .jager import GammaCertificate, in_gamma, theta_sequence
from .symmetry import digit_from_pair, reconstruct

EXIT_OK = 0
EXIT_OTHER = 1
EXIT_PRECISION = 2
EXIT_DOMAIN = 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# seeds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeedSpec:
    kind: str  # surd | decimal-literal | fixture
    payload: str

    def __str__(self):
        prefix = {"surd": "surd", "decimal-literal": "dec", "fixture": "fixture"}
        return f"{prefix[self.kind]}:{self.payload}"


def parse_seed(text: str) -> SeedSpec:
    text = text.strip()
    if text.startswith("fixture:"):
        return SeedSpec("fixture", text.split(":", 1)[1])
    if text.startswith("surd:"):
        return SeedSpec("surd", text.split(":", 1)[1])
    if text.startswith(("dec:", "decimal:")):
        return SeedSpec("decimal-literal", text.split(":", 1)[1])
    if text and (text[0].isdigit() or text[0] in "+-."):
        return SeedSpec("decimal-literal", text)
    raise UsageError(
        f"cannot parse seed {text!r}: expected fixture:NAME, surd:P,D,Q or dec:LITERAL"
    )


def realize_seed(spec: SeedSpec):
    if spec.kind == "fixture":
        try:
            literal = fixture_decimal(spec.payload)
        except KeyError as exc:
            raise DomainError(str(exc)) from exc
        return RigorousReal.from_decimal(literal)
    if spec.kind == "surd":
        try:
            p, d, q = (int(part) for part in spec.payload.split(","))
        except ValueError as exc:
            raise UsageError(f"surd payload must be P,D,Q integers: {exc}") from exc
        try:
            x = QuadraticSurd(p, d, q)
        except ValueError as exc:
            raise DomainError(str(exc)) from exc
        if not (x > 0 and x < 1):
            raise DomainError(
                f"surd ({p}+√{d})/{q} ≈ {float(x):.6f} is not in (0, 1)"
            )
        return x
    if spec.kind == "decimal-literal":
        literal = spec.payload
        frac_digits = literal.partition(".")[2]
        significant = len(frac_digits.lstrip("0")) if frac_digits else 0
        if significant < 32:
            raise DomainError(
                f"decimal seed has {significant} significant digits; "
                "at least 32 are required for honest enclosures"
            )
        x = RigorousReal.from_decimal(literal)
        if x.lower.sign() <= 0 or x.upper.floor() >= 1:
            raise DomainError(f"decimal seed {literal[:20]}... is not inside (0, 1)")
        return x
    raise UsageError(f"unknown seed kind {spec.kind!r}")


# ---------------------------------------------------------------------------
# decimal display with explicit rounding direction
# ---------------------------------------------------------------------------


def round_fraction_str(fr: Fraction, digits: int, mode: str) -> str:
    scaled = fr * 10**digits
    if mode == "up":
        m = -((-scaled.numerator) // scaled.denominator)
    elif mode == "down":
        m = scaled.numerator // scaled.denominator
    elif mode == "nearest":
        m = exact_floor(scaled + Fraction(1, 2))
    else:
        raise ValueError(f"unknown rounding mode {mode!r}")
    sign = "-" if m < 0 else ""
    s = str(abs(m)).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}" if digits else f"{sign}{s}"


def display_value(value, digits: int, mode: str) -> str:
    """Round a theta value for humans; `down` uses the lower bound so the
    printed number stays a bound in the stated direction."""
    if is_exact(value):
        iv = as_interval(value, max(192, digits * 4))
    else:
        iv = value
    fr = iv.lower.as_fraction() if mode == "down" else iv.upper.as_fraction()
    return round_fraction_str(fr, digits, mode)


def bound_strings(value, digits_hint: int) -> tuple[str, str]:
    """Machine-format (lower, upper) decimal bounds, outward-rounded, with
    enough digits that feeding them back loses almost nothing."""
    iv = value if not is_exact(value) else as_interval(value, 256)
    w = iv.width()
    if w > 0:
        needed = int(-math.log10(float(w))) + 2 if float(w) > 0 else 320
    else:
        needed = 320
    digits = max(digits_hint, min(max(needed, 8), 1100))
    lo = round_fraction_str(iv.lower.as_fraction(), digits, "down")
    hi = round_fraction_str(iv.upper.as_fraction(), digits, "up")
    return lo, hi


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _context(args) -> PrecisionContext:
    return PrecisionContext(
        initial_bits=args.precision, max_bits=args.max_precision
    )


def cmd_expand(args) -> int:
    spec = parse_seed(args.seed)
    x0 = realize_seed(spec)
    ctx = _context(args)
    partial = False
    try:
        state = expand_states(x0, args.terms, ctx)[-1]
    except PrecisionExhausted as exc:
        if not args.allow_partial or not exc.partial:
            raise
        state = exc.partial[-1]
        partial = True
    digits = list(state.digits)
    convergents = state.convergents[: args.terms]
    if args.format == "json":
        print(
            json.dumps(
                {
                    "seed": str(spec),
                    "digits": digits,
                    "convergents": [{"p": p, "q": q} for p, q in convergents],
                    "partial": partial,
                },
                indent=2,
            )
        )
    else:
        print(f"seed: {spec}")
        print(f"digits ({len(digits)}): {digits}")
        print(f"{'n':>4}  {'p_n':>24}  {'q_n':>24}")
        for n, (p, q) in enumerate(convergents):
            print(f"{n:>4}  {p:>24}  {q:>24}")
        if partial:
            print("(partial: precision exhausted)")
    return EXIT_PRECISION if partial else EXIT_OK


def cmd_theta(args) -> int:
    spec = parse_seed(args.seed)
    x0 = realize_seed(spec)
    ctx = _context(args)
    thetas = theta_sequence(x0, args.terms - 1, ctx)
    if args.format == "json":
        entries = []
        for tv in thetas:
            lo, hi = bound_strings(tv.value, args.digits)
            entries.append({"n": tv.index, "lower": lo, "upper": hi})
        print(json.dumps({"seed": str(spec), "entries": entries}, indent=2))
    else:
        print(f"seed: {spec}")
        print(f"{'n':>4}  theta_n ({args.rounding} at {args.digits} digits)")
        for tv in thetas:
            print(f"{tv.index:>4}  {display_value(tv.value, args.digits, args.rounding)}")
    return EXIT_OK


def _pair_from_json(path: str, at: int | None):
    with open(path) as fh:
        doc = json.load(fh)
    entries = {e["n"]: e for e in doc["entries"]}
    if at is None:
        at = min(entries)
    for n in (at, at + 1):
        if n not in entries:
            raise UsageError(f"theta JSON has no entry for n={n}")

    def to_value(e):
        lo = Fraction(_decimal_to_fraction(e["lower"]))
        hi = Fraction(_decimal_to_fraction(e["upper"]))
        w = hi - lo
        bits = int(-math.log2(float(w))) + 16 if w > 0 else 256
        return RigorousReal.from_fraction_bounds(lo, hi, max(bits, 64))

    return (to_value(entries[at]), to_value(entries[at + 1])), at


def _decimal_to_fraction(text: str) -> Fraction:
    text = text.strip()
    sign = -1 if text.startswith("-") else 1
    text = text.lstrip("+-")
    whole, _, frac = text.partition(".")
    return sign * Fraction(int((whole or "0") + frac), 10 ** len(frac))


def cmd_recover(args) -> int:
    ctx = _context(args)
    if args.from_json:
        pair, at = _pair_from_json(args.from_json, args.at)
    else:
        if not args.pair:
            raise UsageError("recover needs --pair U,V or --from-json FILE")
        parts = args.pair.split(",")
        if len(parts) != 2:
            raise UsageError("--pair takes exactly two comma-separated decimals")
        pair = tuple(RigorousReal.from_decimal(p.strip()) for p in parts)
        at = args.at if args.at is not None else 0
    try:
        result = reconstruct(
            pair, at=at, back=args.back, fwd=args.fwd, ctx=ctx,
            allow_partial=args.allow_partial,
        )
    except InsufficientPrecision as exc:
        if args.allow_partial and exc.partial is not None:
            result = exc.partial
        else:
            raise
    digits = sorted(result.digits, key=lambda d: d.index)
    if args.format == "json":
        lo0, hi0 = bound_strings(pair[0], args.digits)
        lo1, hi1 = bound_strings(pair[1], args.digits)
        print(
            json.dumps(
                {
                    "pair": [{"lower": lo0, "upper": hi0}, {"lower": lo1, "upper": hi1}],
                    "at": at,
                    "digits": [
                        {"index": d.index, "value": d.value, "source": d.source}
                        for d in digits
                    ],
                    "thetas": [
                        dict(
                            n=tv.index,
                            **dict(
                                zip(
                                    ("lower", "upper"),
                                    bound_strings(tv.value, args.digits),
                                )
                            ),
                        )
                        for tv in result.thetas
                    ],
                    "complete": result.complete,
                },
                indent=2,
            )
        )
    else:
        print(f"anchor pair at n={at}, recovered back={result.back_done} fwd={result.fwd_done}")
        print("digits: " + ", ".join(f"a_{d.index}={d.value}" for d in digits))
        print(f"{'n':>4}  theta_n ({args.rounding} at {args.digits} digits)")
        for tv in result.thetas:
            print(f"{tv.index:>4}  {display_value(tv.value, args.digits, args.rounding)}")
        if not result.complete:
            print("(partial: precision drained before finishing)")
    return EXIT_OK if result.complete else EXIT_PRECISION


def _verify_one(spec_text: str, terms: int, ctx: PrecisionContext) -> dict:
    spec = parse_seed(spec_text)
    x0 = realize_seed(spec)
    states = expand_states(x0, terms + 2, ctx)
    digits = states[-1].digits
    thetas = theta_sequence(x0, terms + 1, ctx)
    vals = [t.value for t in thetas]
    checks = []

    def add(name, ok, witness):
        checks.append({"name": name, "pass": bool(ok), "witness": witness})

    # every theta in (0, 1)
    ok = all(certainly_gt(v, 0) and certainly_lt(v, 1) for v in vals)
    add("theta_in_unit_interval", ok, f"{len(vals)} values")

    # consecutive sums below 1 (n = 1 sits ON the line when a_1 = 1)
    worst = None
    ok = True
    for n in range(1, terms + 1):
        s_ok = certainly_lt(vals[n - 1] + vals[n], 1)
        if n == 1 and digits[0] == 1:
            s_ok = not certainly_gt(vals[0] + vals[1], 1)
        ok &= s_ok
        up = float(as_interval(vals[n - 1], 64).upper) + float(
            as_interval(vals[n], 64).upper
        )
        if worst is None or up > worst:
            worst = up
    add("pair_sum_below_one", ok, f"max pair sum ≈ {worst:.6f}")

    # Vahlen: min of each pair < 1/2
    half = Fraction(1, 2)
    ok = all(
        certainly_lt(vals[n - 1], half) or certainly_lt(vals[n], half)
        for n in range(1, terms + 1)
    )
    add("vahlen_min_pair_below_half", ok, f"{terms} pairs")

    # Borel: min of each triple < 5^-1/2,  via theta^2 * 5 < 1
    def below_inv_sqrt(v, m: int) -> bool:
        try:
            return certainly_lt(v * v * m, 1)
        except ValueError:
            iv = as_interval(v, 160)
            return certainly_lt(iv * iv * m, 1)

    def above_inv_sqrt(v, m: int) -> bool:
        try:
            return certainly_gt(v * v * m, 1)
        except ValueError:
            iv = as_interval(v, 160)
            return certainly_gt(iv * iv * m, 1)

    ok = all(
        any(below_inv_sqrt(vals[n + d], 5) for d in (-1, 0, 1))
        for n in range(1, terms)
    )
    add("borel_min_triple_below_hurwitz", ok, f"{terms - 1} triples")

    # digit-indexed bracket: min triple < (a^2+4)^-1/2 < max triple
    ok = True
    for n in range(1, terms):
        m = digits[n] ** 2 + 4  # a_{n+1}
        ok &= any(below_inv_sqrt(vals[n + d], m) for d in (-1, 0, 1))
        ok &= any(above_inv_sqrt(vals[n + d], m) for d in (-1, 0, 1))
    add("digit_bracket_min_max", ok, f"{terms - 1} triples")

    # triangle membership of pairs (open-region boundary case exempt)
    ok = True
    outside = 0
    for n in range(1, terms + 1):
        cert = in_gamma(vals[n - 1], vals[n])
        if cert is not GammaCertificate.INSIDE:
            if n == 1 and digits[0] == 1:
                continue  # genuine boundary pair on u + v = 1
            outside += 1
            ok = False
    add("jager_pairs_in_triangle", ok, f"{outside} pairs failed certification")

    # digit recovery agreement, both conventions
    ok = True
    mism = 0
    for n in range(1, terms):
        expected = digits[n]
        past = digit_from_pair(thetas[n - 1], thetas[n], ctx)
        future = digit_from_pair(thetas[n + 1], thetas[n], ctx)
        want_future = expected + 1 if (n == 1 and digits[0] == 1) else expected
        if past != expected or future != want_future:
            mism += 1
            ok = False
    add("digit_recovery_both_sides", ok, f"{mism} mismatches over {terms - 1} indices")

    all_pass = all(c["pass"] for c in checks)
    return {"seed": str(spec), "pass": all_pass, "checks": checks}


def cmd_verify(args) -> int:
    ctx = _context(args)
    if args.seeds_file:
        with open(args.seeds_file) as fh:
            seeds = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
        with ThreadPoolExecutor(max_workers=min(8, len(seeds) or 1)) as pool:
            reports = list(
                pool.map(lambda s: _verify_one(s, args.terms, ctx), seeds)
            )
    else:
        reports = [_verify_one(args.seed, args.terms, ctx)]
    if args.format == "json":
        print(json.dumps(reports if args.seeds_file else reports[0], indent=2))
    else:
        for rep in reports:
            print(f"seed: {rep['seed']}")
            for c in rep["checks"]:
                mark = "PASS" if c["pass"] else "FAIL"
                print(f"  [{mark}] {c['name']}: {c['witness']}")
    return EXIT_OK if all(r["pass"] for r in reports) else EXIT_OTHER


def cmd_jager(args) -> int:
    spec = parse_seed(args.seed)
    x0 = realize_seed(spec)
    ctx = _context(args)
    thetas = theta_sequence(x0, args.terms - 1, ctx)
    rows = []
    for n in range(1, args.terms):
        u, v = thetas[n - 1], thetas[n]
        cert = in_gamma(u.value, v.value)
        rows.append(
            (
                n,
                display_value(u.value, args.digits, "up"),
                display_value(v.value, args.digits, "up"),
                cert.value,
            )
        )
    if args.format == "json":
        print(
            json.dumps(
                {
                    "seed": str(spec),
                    "pairs": [
                        {"n": n, "theta_prev": a, "theta_n": b, "in_gamma": c}
                        for n, a, b, c in rows
                    ],
                },
                indent=2,
            )
        )
    else:
        print("n,theta_prev,theta_n,in_gamma")
        for n, a, b, c in rows:
            print(f"{n},{a},{b},{c}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(sub, with_digits=True):
    sub.add_argument("--precision", type=int, default=128, help="initial working precision, bits")
    sub.add_argument("--max-precision", type=int, default=1 << 20, help="escalation ceiling, bits")
    sub.add_argument("--format", choices=("table", "json", "csv"), default="table")
    sub.add_argument("--allow-partial", action="store_true", help="exit 2 with partial output instead of failing outright")
    if with_digits:
        sub.add_argument("--digits", type=int, default=4, help="decimal digits for display")
        sub.add_argument("--rounding", choices=("nearest", "up", "down"), default="nearest", help="display rounding of theta values")


def build_parser() -> _Parser:
    parser = _Parser(prog="cftheta", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("expand", help="digits and convergents of a seed")
    p.add_argument("seed")
    p.add_argument("--terms", type=int, required=True)
    _add_common(p, with_digits=False)
    p.set_defaults(func=cmd_expand)

    p = subs.add_parser("theta", help="approximation coefficients theta_0..theta_{N-1}")
    p.add_argument("seed")
    p.add_argument("--terms", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_theta)

    p = subs.add_parser("recover", help="digits and thetas from one consecutive pair")
    p.add_argument("--pair", help="two decimal literals U,V (full precision)")
    p.add_argument("--from-json", help="theta-command JSON output to read the pair from")
    p.add_argument("--at", type=int, default=None, help="index n of the pair (theta_n, theta_{n+1})")
    p.add_argument("--back", type=int, default=0)
    p.add_argument("--fwd", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_recover)

    p = subs.add_parser("verify", help="run the invariant suite against a seed")
    p.add_argument("seed", nargs="?")
    p.add_argument("--terms", type=int, required=True)
    p.add_argument("--seeds-file", help="verify many seeds, one spec per line")
    _add_common(p, with_digits=False)
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("jager", help="stream consecutive coefficient pairs")
    p.add_argument("seed")
    p.add_argument("--terms", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_jager)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "verify" and not args.seed and not args.seeds_file:
            raise UsageError("verify needs a seed or --seeds-file")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_OTHER
    except (DomainError, RegionViolation) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (PrecisionExhausted, InsufficientPrecision) as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except CrossCheckFailure as exc:
        print(f"cross-check failure (implementation bug): {exc}", file=sys.stderr)
        return EXIT_OTHER
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
