"""Digit recovery and bidirectional reconstruction of the theta sequence.

The central identity: with s = sqrt(1 - 4*theta_outer*theta_n), the next
digit is

    a_{n+1} = floor((1 + s) / (2*theta_n))

and it does not matter whether theta_outer is theta_{n-1} or theta_{n+1}.
Combined with the symmetric propagation formula

    theta_{n+-1} = theta_{n-+1} + a_{n+1}*s - a_{n+1}^2*theta_n

one consecutive pair determines the whole coefficient sequence in both
directions (backward recovery bottoms out at theta_0; a_1 is not
robustly recoverable, since its recovery expression equals a_1 exactly,
with no fractional margin for an enclosure to settle on).

The propagation formula is an involution only when the digit is the one
the pair actually encodes: applying it twice with digit a returns the
starting value iff sqrt(1 - 4*t*c) <= 2*a*c, which the recovered digit
always satisfies.  With an arbitrary a the second radicand is still the
perfect square (s - 2ac)^2 but the branch flips.

Floors here are boundary-hazardous by design (a huge digit pushes the
argument arbitrarily close to an integer from above), so every floor goes
through `floor_checked`; for exact inputs whose expression lands exactly
on an integer, the hit is detected algebraically instead of looping
forever.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    CrossCheckFailure,
    DomainError,
    InsufficientPrecision,
)
from .exactreal import (
    DEFAULT_CONTEXT,
    Number,
    PrecisionContext,
    as_interval,
    certainly_gt,
    exact_sqrt,
    floor_checked,
    is_exact,
)
from .jager import ThetaValue


class Direction(enum.Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


@dataclass(frozen=True)
class ThetaPair:
    """A consecutive coefficient pair oriented for recovery.

    `left` is the outer coefficient (theta_{n-1} going forward,
    theta_{n+1} going backward), `center` is theta_n.  The workable domain
    is 4*left*center < 1; genuine forward pairs also satisfy
    left + center <= 1, with equality exactly in the a_1 = 1 boundary
    case, so only a provable excess over 1 is rejected.
    """

    left: Number
    center: Number
    direction: Direction = Direction.FORWARD

    def __post_init__(self):
        if not (certainly_gt(self.left, 0) and certainly_gt(self.center, 0)):
            raise DomainError("pair members must be certifiably positive")
        if not _radicand_positive(self.left, self.center):
            raise DomainError("cannot certify 4*left*center < 1")
        if self.direction is Direction.FORWARD:
            try:
                too_big = certainly_gt(self.left + self.center, 1)
            except ValueError:
                too_big = False  # mixed fields: leave to the interval path
            if too_big:
                raise DomainError("forward pair with left + center > 1")


@dataclass(frozen=True)
class RecoveredDigit:
    """A partial quotient recovered from coefficients, not from the seed."""

    index: int
    value: int
    source: str  # from_past_pair | from_future_pair

    def __post_init__(self):
        if self.value < 1:
            raise ValueError(f"recovered digit a_{self.index} = {self.value} < 1")
        if self.source not in ("from_past_pair", "from_future_pair"):
            raise ValueError(f"unknown source {self.source!r}")


def _value(x: Number | ThetaValue) -> Number:
    return x.value if isinstance(x, ThetaValue) else x


def _radicand_positive(t: Number, c: Number) -> bool:
    try:
        return certainly_gt(1 - 4 * (t * c), 0)
    except ValueError:
        it, ic = as_interval(t, 160), as_interval(c, 160)
        return certainly_gt(1 - 4 * (it * ic), 0)


def _floor_recovery_expr(
    t: Number, c: Number, divisor: Number, ctx: PrecisionContext
) -> tuple[int, bool]:
    """floor((1 + sqrt(1 - 4*t*c)) / (2*divisor)), rigorously.

    Returns (floor, hit) where hit reports the expression being EXACTLY
    that integer -- the a_1 = 1 boundary signature that some callers must
    compensate for.  Exact inputs try the exact square root first, then
    enclose at escalating precision, deciding an exact integer hit m via
    the algebraic test 1 - 4*t*c == (2*m*divisor - 1)^2.  Interval inputs
    get one shot at their own precision and raise InsufficientPrecision
    if the floor stays undecided.
    """
    if not certainly_gt(c, 0) or not certainly_gt(divisor, 0):
        raise DomainError("theta values must be certifiably positive")
    if not _radicand_positive(t, c):
        raise DomainError("cannot certify 1 - 4*theta_outer*theta_n > 0")

    all_exact = is_exact(t) and is_exact(c) and is_exact(divisor)
    if all_exact:
        try:
            s = exact_sqrt(1 - 4 * (t * c))
            if s is not None:
                value = (1 + s) / (2 * divisor)
                f = floor_checked(value)
                return f, value == f
        except ValueError:
            pass  # mixed fields: interval route below

    for prec in ctx.precisions():
        it = as_interval(t, prec)
        ic = as_interval(c, prec)
        idiv = as_interval(divisor, prec)
        rad = 1 - 4 * (it * ic)
        if rad.lower.sign() < 0:
            if not all_exact:
                raise DomainError(
                    "radicand enclosure touches zero at input precision"
                )
            continue
        expr = (1 + rad.sqrt()) / (2 * idiv)
        try:
            return floor_checked(expr), False
        except InsufficientPrecision:
            if not all_exact:
                raise
            # the expression may BE an integer: check algebraically
            lo, hi = expr.floor_bounds()
            if hi == lo + 1:
                try:
                    if 1 - 4 * (t * c) == (2 * hi * divisor - 1) ** 2:
                        return hi, True
                except ValueError:
                    pass
            continue
    raise InsufficientPrecision(
        f"digit floor undecided at max_bits={ctx.max_bits}"
    )


def digit_from_pair(
    theta_outer: Number | ThetaValue,
    theta_n: Number | ThetaValue,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> int:
    """The digit a_{n+1} from (theta_{n-1}, theta_n) or (theta_{n+1}, theta_n).

    The same expression serves both conventions, with one proviso: fed the
    future pair (theta_2, theta_1) of a seed whose first digit is 1, the
    expression equals a_2 + 1 exactly (the underlying identity reads
    a_2 + [a_1] and [a_1] = 1 there, not < 1).  `reconstruct` compensates
    when walking backward to theta_0; this raw form stays faithful to the
    formula.  For points of the open triangle the result is >= 1.
    """
    t, c = _value(theta_outer), _value(theta_n)
    return _floor_recovery_expr(t, c, c, ctx)[0]


def dk_step(
    theta_from: Number | ThetaValue,
    theta_n: Number | ThetaValue,
    a: int,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> Number:
    """Symmetric propagation: theta_from + a*sqrt(1-4*theta_from*theta_n) - a^2*theta_n.

    Maps theta_{n-1} to theta_{n+1} and, with the same digit, back again.
    Exact inputs stay exact whenever the radicand has a square root in a
    cheaply reachable quadratic field; otherwise the result is an
    enclosure at the context's initial precision.
    """
    if a < 1:
        raise ValueError("digit a must be >= 1")
    t, c = _value(theta_from), _value(theta_n)
    if not _radicand_positive(t, c):
        raise DomainError("cannot certify 1 - 4*theta_from*theta_n > 0")
    if is_exact(t) and is_exact(c):
        try:
            s = exact_sqrt(1 - 4 * (t * c))
            if s is not None:
                return t + a * s - a * a * c
        except ValueError:
            pass
    prec = max(
        ctx.initial_bits,
        getattr(t, "precision", 0),
        getattr(c, "precision", 0),
    )
    it, ic = as_interval(t, prec), as_interval(c, prec)
    rad = 1 - 4 * (it * ic)
    if rad.lower.sign() < 0:
        raise DomainError("radicand enclosure touches zero at input precision")
    return it + a * rad.sqrt() - (a * a) * ic


def step(
    theta_prev_or_next: Number | ThetaValue,
    theta_n: Number | ThetaValue,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> tuple[int, Number]:
    """Recover the digit, then propagate past it; one recovery step.

    Forward: (theta_{n-1}, theta_n) -> (a_{n+1}, theta_{n+1}).
    Backward: (theta_{n+1}, theta_n) -> (a_{n+1}, theta_{n-1}).
    """
    a = digit_from_pair(theta_prev_or_next, theta_n, ctx)
    return a, dk_step(theta_prev_or_next, theta_n, a, ctx)


@dataclass(frozen=True)
class ReconstructionResult:
    """Thetas and digits recovered around an anchor pair.

    `thetas` covers indices at-back_done .. at+1+fwd_done (including the
    anchor pair itself); `digits` covers a_{at-back_done+2} ..
    a_{at+fwd_done+1} when complete.
    """

    at: int
    thetas: tuple[ThetaValue, ...]
    digits: tuple[RecoveredDigit, ...]
    back_done: int
    fwd_done: int
    complete: bool

    def theta(self, index: int) -> ThetaValue:
        for tv in self.thetas:
            if tv.index == index:
                return tv
        raise KeyError(index)


# pre-flight lower bound on per-step precision drain, in bits; the true
# drain is ~2*log2(digit) per step and is caught in-loop, this only
# rejects requests that cannot possibly fit
_STEP_BUDGET_BITS = 6
_BUDGET_SLACK_BITS = 32


def reconstruct(
    pair: tuple[Number | ThetaValue, Number | ThetaValue],
    at: int,
    back: int,
    fwd: int,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    allow_partial: bool = False,
) -> ReconstructionResult:
    """Recover theta_{at-back}..theta_{at+1+fwd} from the pair (theta_at, theta_{at+1}).

    The pair must be consecutive coefficients of an actual expansion at
    full working precision; feeding arbitrary triangle points produces
    formally valid garbage (no detection is attempted).  Reconstruction
    drains precision every step; with interval inputs whose width cannot
    cover the request, or when a floor becomes undecidable mid-run,
    InsufficientPrecision carries the partial result unless
    allow_partial=True, in which case the partial result is returned with
    complete=False.
    """
    if back < 0 or fwd < 0:
        raise ValueError("back and fwd must be >= 0")
    if back > at:
        raise ValueError(f"back={back} exceeds anchor position {at}")
    t_a, t_b = _value(pair[0]), _value(pair[1])

    if back + fwd > 0:
        if not (certainly_gt(t_a, 0) and certainly_gt(t_b, 0)):
            raise DomainError("pair members must be certifiably positive")
        if not _radicand_positive(t_a, t_b):
            raise DomainError(
                "cannot certify 4*theta_a*theta_b < 1 for the anchor pair"
            )

    # pre-flight budget per the escalation policy: each step costs roughly
    # the bits of the digit it recovers; refuse requests that cannot fit
    steps = back + fwd
    needed = steps * _STEP_BUDGET_BITS + _BUDGET_SLACK_BITS
    if needed > ctx.max_bits:
        raise InsufficientPrecision(
            f"{steps} steps need at least ~{needed} bits > max_bits={ctx.max_bits}"
        )
    if not (is_exact(t_a) and is_exact(t_b)):
        width = max(
            float(as_interval(t_a, 64).width()),
            float(as_interval(t_b, 64).width()),
        )
        if width > 0 and needed > -math.log2(width):
            raise InsufficientPrecision(
                f"input enclosures too wide for {steps} recovery steps "
                f"(~{-math.log2(width):.0f} bits available, ~{needed} needed)"
            )

    thetas: dict[int, Number] = {at: t_a, at + 1: t_b}
    digits: list[RecoveredDigit] = []
    back_done = fwd_done = 0
    complete = True

    def _partial() -> ReconstructionResult:
        tvs = tuple(
            ThetaValue(i, thetas[i], "reconstruction") for i in sorted(thetas)
        )
        return ReconstructionResult(
            at=at,
            thetas=tvs,
            digits=tuple(sorted(digits, key=lambda d: d.index)),
            back_done=back_done,
            fwd_done=fwd_done,
            complete=complete,
        )

    # forward sweep: pair (theta_m, theta_{m+1}) yields a_{m+2}, theta_{m+2}
    u, v, m = t_a, t_b, at
    for _ in range(fwd):
        try:
            a = digit_from_pair(u, v, ctx)
            nxt = dk_step(u, v, a, ctx)
        except InsufficientPrecision as exc:
            complete = False
            if allow_partial:
                break
            raise InsufficientPrecision(
                f"forward recovery stalled at theta_{m + 2}: {exc}",
                index=m + 2,
                partial=_partial(),
            ) from exc
        digits.append(RecoveredDigit(m + 2, a, "from_past_pair"))
        thetas[m + 2] = nxt
        u, v, m = v, nxt, m + 1
        fwd_done += 1

    # backward sweep: pair (theta_m, theta_{m+1}) yields a_{m+1}, theta_{m-1}
    u, v, m = t_a, t_b, at
    for _ in range(back):
        try:
            a, exact_hit = _floor_recovery_expr(v, u, u, ctx)
            if m == 1 and exact_hit:
                # recovering theta_0 of a seed with a_1 = 1: the recovery
                # expression equals a_2 + [a_1] = a_2 + 1 exactly
                a -= 1
            prv = dk_step(v, u, a, ctx)
        except InsufficientPrecision as exc:
            complete = False
            if allow_partial:
                break
            raise InsufficientPrecision(
                f"backward recovery stalled at theta_{m - 1}: {exc}",
                index=m - 1,
                partial=_partial(),
            ) from exc
        digits.append(RecoveredDigit(m + 1, a, "from_future_pair"))
        thetas[m - 1] = prv
        u, v, m = prv, u, m - 1  # pair becomes (theta_{m-1}, theta_m)
        back_done += 1

    return _partial()


def digit_sequence_from_thetas(
    thetas: Sequence[Number | ThetaValue],
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> list[int]:
    """Digits a_2..a_{N+1} from consecutive genuine theta_0..theta_N.

    Each digit a_{k+2} comes from the pair (theta_k, theta_{k+1}) via the
    future-side expression; interior digits (those also reachable from the
    following pair through the past-side expression, dividing by the
    earlier coefficient) are cross-checked, and disagreement raises
    CrossCheckFailure.
    """
    vals = [_value(t) for t in thetas]
    if len(vals) < 2:
        raise ValueError("need at least theta_0 and theta_1")
    digits = []
    for k in range(len(vals) - 1):
        digits.append(digit_from_pair(vals[k], vals[k + 1], ctx))
    # past-side form on pair (theta_k, theta_{k+1}) recovers a_{k+1};
    # compare with the future-side value already computed from the pair
    # before it, i.e. digits[k-1]
    for k in range(1, len(vals) - 1):
        past_side, exact_hit = _floor_recovery_expr(
            vals[k], vals[k + 1], vals[k], ctx
        )
        if k == 1 and exact_hit:
            past_side -= 1  # a_2 + [a_1] with a_1 = 1: bracket equals 1
        if past_side != digits[k - 1]:
            raise CrossCheckFailure(
                f"a_{k + 1}: future-side form gives {digits[k - 1]}, "
                f"past-side form gives {past_side}"
            )
    return digits
