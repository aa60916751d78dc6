"""Brute-force cross-validation of the coefficient pipeline.

`brute_theta` computes a coefficient straight from the definition --
big-integer convergents from a deliberately naive digit loop, times an
enclosure of the seed at quadruple precision -- touching nothing from the
Perron/Psi machinery.  `crosscheck` then compares, per index, the oracle
value against the pipeline value, the recovered digits against the
directly extracted ones, and reconstruction output against the direct
sequence.  Mismatches become report entries, not exceptions; a report
with any failing flag means the suite fails.

The oracle is allowed to be slow; it exists to be trusted, not to be fast.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from fractions import Fraction

from .errors import InsufficientPrecision, PrecisionExhausted
from .exactreal import (
    DEFAULT_CONTEXT,
    Number,
    PrecisionContext,
    QuadraticSurd,
    RigorousReal,
    as_interval,
    floor_checked,
    is_exact,
)
from .jager import theta_sequence
from .symmetry import digit_from_pair, reconstruct


def _naive_digits_convergents(x0, count: int, precision: int):
    """Digit loop written from scratch: floor(1/x), shift, recurrence."""
    digits: list[int] = []
    convs: list[tuple[int, int]] = [(0, 1)]
    p_prev, q_prev = 1, 0
    if isinstance(x0, QuadraticSurd):
        x = x0
    else:
        x = RigorousReal.from_fraction_bounds(
            x0.lower.as_fraction(), x0.upper.as_fraction(), precision
        )
    for _ in range(count):
        r = x.reciprocal() if isinstance(x, QuadraticSurd) else 1 / x
        a = floor_checked(r)
        x = r - a
        p, q = convs[-1]
        digits.append(a)
        convs.append((a * p + p_prev, a * q + q_prev))
        p_prev, q_prev = p, q
    return digits, convs


def brute_theta(
    x0, n: int, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> Number:
    """theta_n by definition only, at quadruple working precision.

    Exact for surd seeds; an enclosure computed at 4x the context's
    initial precision otherwise, making oracle error negligible next to
    the pipeline's.
    """
    oracle_bits = min(4 * ctx.initial_bits, ctx.max_bits)
    for prec in PrecisionContext(
        oracle_bits, ctx.max_bits, ctx.growth_factor
    ).precisions():
        try:
            _, convs = _naive_digits_convergents(x0, n, prec)
        except InsufficientPrecision:
            continue
        p, q = convs[n]
        if is_exact(x0):
            return abs(x0 - Fraction(p, q)) * (q * q)
        seed = RigorousReal.from_fraction_bounds(
            x0.lower.as_fraction(), x0.upper.as_fraction(), prec
        )
        return abs(seed - Fraction(p, q)) * (q * q)
    raise PrecisionExhausted(f"oracle could not reach index {n}", index=n)


@dataclass(frozen=True)
class OracleEntry:
    index: int
    theta_oracle: tuple[float, float]
    theta_pipeline: tuple[float, float]
    overlap: bool
    digit: int | None = None
    digit_past_ok: bool | None = None
    digit_future_ok: bool | None = None
    reconstruct_overlap: bool | None = None
    boundary_case: bool = False  # n = 1 with a_1 = 1: future form reads a_2 + 1


@dataclass(frozen=True)
class OracleReport:
    seed: str
    start: int
    end: int
    entries: tuple[OracleEntry, ...]

    @property
    def all_ok(self) -> bool:
        return all(
            e.overlap
            and e.digit_past_ok is not False
            and e.digit_future_ok is not False
            and e.reconstruct_overlap is not False
            for e in self.entries
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "seed": self.seed,
                "range": [self.start, self.end],
                "all_ok": self.all_ok,
                "entries": [asdict(e) for e in self.entries],
            },
            indent=2,
        )


def _bounds(v: Number, prec: int = 192) -> tuple[Fraction, Fraction]:
    if is_exact(v) and not isinstance(v, QuadraticSurd):
        f = Fraction(v)
        return f, f
    iv = as_interval(v, prec)
    return iv.lower.as_fraction(), iv.upper.as_fraction()


def _values_meet(a: Number, b: Number) -> bool:
    if is_exact(a) and is_exact(b):
        try:
            return a == b
        except ValueError:
            pass
    alo, ahi = _bounds(a)
    blo, bhi = _bounds(b)
    return max(alo, blo) <= min(ahi, bhi)


def _naive_escalating(seed, count: int, ctx: PrecisionContext):
    start = min(4 * ctx.initial_bits, ctx.max_bits)
    for prec in PrecisionContext(start, ctx.max_bits, ctx.growth_factor).precisions():
        try:
            return _naive_digits_convergents(seed, count, prec)
        except InsufficientPrecision:
            continue
    raise PrecisionExhausted(f"oracle expansion stalled before {count} digits")


def crosscheck(
    seed, n_last: int, ctx: PrecisionContext = DEFAULT_CONTEXT, label: str = ""
) -> OracleReport:
    """Three comparisons per index; failures are entries, never raises."""
    pipeline = theta_sequence(seed, n_last, ctx)
    oracle_vals = [brute_theta(seed, n, ctx) for n in range(n_last + 1)]
    digits, _ = _naive_escalating(seed, n_last + 1, ctx)
    rec = reconstruct(
        (pipeline[0], pipeline[1]), at=0, back=0, fwd=n_last - 1, ctx=ctx
    ) if n_last >= 1 else None

    entries = []
    for n in range(n_last + 1):
        ov = _values_meet(oracle_vals[n], pipeline[n].value)
        digit = digits[n] if n < len(digits) else None
        past_ok = future_ok = None
        boundary = False
        if 1 <= n <= n_last - 1:
            expected = digits[n]  # a_{n+1}
            past_ok = digit_from_pair(pipeline[n - 1], pipeline[n], ctx) == expected
            got_future = digit_from_pair(pipeline[n + 1], pipeline[n], ctx)
            if n == 1 and digits[0] == 1:
                boundary = True
                future_ok = got_future == expected + 1
            else:
                future_ok = got_future == expected
        rec_ok = None
        if rec is not None:
            try:
                rec_ok = _values_meet(rec.theta(n).value, pipeline[n].value)
            except KeyError:
                rec_ok = None
        lo_o, hi_o = _bounds(oracle_vals[n])
        lo_p, hi_p = _bounds(pipeline[n].value)
        entries.append(
            OracleEntry(
                index=n,
                theta_oracle=(float(lo_o), float(hi_o)),
                theta_pipeline=(float(lo_p), float(hi_p)),
                overlap=ov,
                digit=digit,
                digit_past_ok=past_ok,
                digit_future_ok=future_ok,
                reconstruct_overlap=rec_ok,
                boundary_case=boundary,
            )
        )
    return OracleReport(
        seed=label or repr(seed), start=0, end=n_last, entries=tuple(entries)
    )
