"""Digit extraction and the two-sided dynamics of an expansion.

One Gauss-map step turns the state (digits, convergents, future x_n,
past y_n) at time n into the state at time n+1:

    r = 1/x_n,  a_{n+1} = floor(r),  x_{n+1} = r - a_{n+1}

The past is the exact rational y_n = -a_n - [a_{n-1}, ..., a_1] (y_1 =
-a_1), updated incrementally by the second coordinate of the natural
extension map, y_{n+1} = 1/y_n - a_{n+1}.  Pasts and convergents are kept
as exact integers/rationals regardless of the carrier of x.

For interval carriers every step may raise InsufficientPrecision; `expand`
owns the retry loop and always restarts from the original seed enclosure
(iterating an already-widened state would compound the loss).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DomainError, InsufficientPrecision, PrecisionExhausted
from .exactreal import (
    DEFAULT_CONTEXT,
    PrecisionContext,
    QuadraticSurd,
    RigorousReal,
    floor_checked,
)

Seed = Union[QuadraticSurd, RigorousReal]


@dataclass(frozen=True)
class ContinuedFractionState:
    """Snapshot of an expansion after n digit extractions.

    `digits` holds a_1..a_n; `convergents` holds (p_k, q_k) for k = 0..n,
    seeded with p_0/q_0 = 0/1 (the seed lies in the unit interval, so its
    zeroth convergent is 0/1).  `future` is x_n in the seed's carrier;
    `past` is y_n, None at n = 0.
    """

    digits: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]
    future: Seed
    past: Fraction | None
    n: int

    @staticmethod
    def initial(x0: Seed) -> "ContinuedFractionState":
        _check_unit_interval(x0)
        return ContinuedFractionState((), ((0, 1),), x0, None, 0)


def _check_unit_interval(x0: Seed) -> None:
    if isinstance(x0, QuadraticSurd):
        if not (x0 > 0 and x0 < 1):
            raise DomainError(f"seed {x0} is not in (0, 1)")
    elif isinstance(x0, RigorousReal):
        if x0.lower.sign() <= 0 or x0.upper.floor() >= 1:
            raise DomainError(
                "seed enclosure cannot be certified inside (0, 1): "
                f"[{float(x0.lower)}, {float(x0.upper)}]"
            )
    else:
        raise DomainError(
            f"seed must be a QuadraticSurd or RigorousReal, got {type(x0).__name__} "
            "(rational seeds have terminating expansions and are rejected)"
        )


def _reciprocal(x: Seed):
    if isinstance(x, QuadraticSurd):
        return x.reciprocal()
    try:
        return 1 / x
    except DomainError as exc:
        # the true value is nonzero; an enclosure touching zero is a
        # precision problem, not a domain problem
        raise InsufficientPrecision(f"future enclosure touches zero: {exc}") from exc


def gauss_step(state: ContinuedFractionState) -> ContinuedFractionState:
    """Extract one digit; exact for surds, may raise for intervals."""
    r = _reciprocal(state.future)
    a = floor_checked(r)
    if a < 1:
        raise DomainError(f"extracted digit {a} < 1; future left (0, 1)")
    future = r - a
    past = Fraction(-a) if state.past is None else 1 / state.past - a
    p1, q1 = state.convergents[-1]
    p0, q0 = state.convergents[-2] if state.n >= 1 else (1, 0)
    return ContinuedFractionState(
        digits=state.digits + (a,),
        convergents=state.convergents + ((a * p1 + p0, a * q1 + q0),),
        future=future,
        past=past,
        n=state.n + 1,
    )


def _expand_once(x0: Seed, n_terms: int) -> list[ContinuedFractionState]:
    states = [ContinuedFractionState.initial(x0)]
    for _ in range(n_terms):
        states.append(gauss_step(states[-1]))
    return states


def expand_states(
    x0: Seed, n_terms: int, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> list[ContinuedFractionState]:
    """States 0..n_terms of the expansion of x0.

    Surd seeds are expanded exactly in one pass.  Interval seeds are
    retried from the original enclosure at escalating working precision;
    if ctx is exhausted, PrecisionExhausted carries the deepest state list
    reached so partial results stay usable.
    """
    if n_terms < 0:
        raise ValueError("n_terms must be >= 0")
    if isinstance(x0, QuadraticSurd):
        return _expand_once(x0, n_terms)
    _check_unit_interval(x0)
    seed_lo = x0.lower.as_fraction()
    seed_hi = x0.upper.as_fraction()
    best: list[ContinuedFractionState] = []
    for prec in ctx.precisions():
        seed = RigorousReal.from_fraction_bounds(seed_lo, seed_hi, prec)
        states = [ContinuedFractionState.initial(seed)]
        try:
            for _ in range(n_terms):
                states.append(gauss_step(states[-1]))
            return states
        except InsufficientPrecision:
            if len(states) > len(best):
                best = states
    raise PrecisionExhausted(
        f"reached {len(best) - 1} of {n_terms} digits at max_bits={ctx.max_bits}",
        index=len(best) - 1,
        partial=best,
    )


def expand(
    x0: Seed, n_terms: int, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> ContinuedFractionState:
    """Final state after n_terms digits (see expand_states)."""
    return expand_states(x0, n_terms, ctx)[-1]


def natural_extension_step(x, y):
    """One tick of the two-sided dynamics: (x, y) -> (T(x), 1/y - floor(1/x)).

    Applied to (x_n, y_n) of a genuine expansion this yields
    (x_{n+1}, y_{n+1}).  Carriers mix freely; floor extraction may raise
    InsufficientPrecision for interval x.
    """
    r = _reciprocal(x)
    a = floor_checked(r)
    if isinstance(y, (int, Fraction)):
        y_next = 1 / Fraction(y) - a
    elif isinstance(y, QuadraticSurd):
        y_next = y.reciprocal() - a
    else:
        y_next = 1 / y - a
    return r - a, y_next


def past_of_prefix(digits) -> Fraction:
    """Exact y_n = -a_n - [a_{n-1}, ..., a_1] from the digit prefix alone."""
    digits = list(digits)
    if not digits:
        raise ValueError("past_of_prefix needs at least one digit")
    if any(a < 1 for a in digits):
        raise ValueError("all digits must be >= 1")
    tail = Fraction(0)  # [empty] := 0
    for a in digits[:-1]:
        tail = 1 / (a + tail)
    return -digits[-1] - tail


def detect_period(
    x0: QuadraticSurd, max_steps: int = 100_000
) -> tuple[int, int]:
    """(preperiod, period) of the digit sequence of a quadratic seed.

    Gauss-map states of a surd are canonical (P, D, Q) triples, so the
    orbit repeats exactly; hashing states finds the cycle.
    """
    _check_unit_interval(x0)
    seen: dict[QuadraticSurd, int] = {}
    x = x0
    for step in range(max_steps):
        if x in seen:
            start = seen[x]
            return start, step - start
        seen[x] = step
        r = x.reciprocal()
        x = r - floor_checked(r)
    raise RuntimeError(f"no period within {max_steps} steps")
