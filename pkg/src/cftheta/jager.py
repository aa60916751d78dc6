"""Approximation coefficients and the map between dynamic and Jager pairs.

The coefficient of the n-th convergent is theta_n = q_n^2*|x0 - p_n/q_n|.
Two independent routes compute it:

* by that definition, from the convergents;
* by Perron's identity theta_{n-1} = 1/(x_n - y_n), i.e. through the map
  Psi(x, y) = (1/(x-y), -x*y/(x-y)) applied to the dynamic pair, whose
  image (theta_{n-1}, theta_n) is the Jager pair at time n.

`theta_sequence` runs both routes and refuses to return anything unless
they agree; a disagreement is an implementation bug, surfaced as
CrossCheckFailure, never a precision problem.

Psi maps Omega = (0,1) x (-inf,-1) onto the open triangle
Gamma = {u > 0, v > 0, u + v < 1} and is inverted by

    Psi^-1(u, v) = ((1 - sqrt(1-4uv))/(2u), -(1 + sqrt(1-4uv))/(2u)).

One genuine boundary case exists: when a_1 = 1 the time-1 past is
y_1 = -1 and theta_0 + theta_1 = 1 exactly, so the first Jager pair sits
ON the hypotenuse rather than inside the open triangle.  Pair containers
here admit that closed boundary; `in_gamma` stays faithful to the open
region and classifies such pairs as outside.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .cfengine import expand_states
from .errors import (
    CrossCheckFailure,
    InsufficientPrecision,
    PrecisionExhausted,
    RegionViolation,
)
from .exactreal import (
    DEFAULT_CONTEXT,
    Number,
    PrecisionContext,
    RigorousReal,
    as_interval,
    certainly_gt,
    exact_sqrt,
    is_exact,
)


class GammaCertificate(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    UNDECIDABLE = "undecidable-at-precision"


PROVENANCES = ("definition", "perron", "reconstruction")


@dataclass(frozen=True)
class ThetaValue:
    """One approximation coefficient with its index and origin."""

    index: int
    value: Number
    provenance: str

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        v = self.value
        if is_exact(v):
            if not (0 < v and v < 1):
                raise ValueError(f"theta_{self.index} = {v} outside (0, 1)")
        elif isinstance(v, RigorousReal):
            if v.upper.sign() <= 0 or v.lower.floor() >= 1:
                raise ValueError(
                    f"theta_{self.index} enclosure provably outside (0, 1)"
                )

    def upper_fraction(self) -> Fraction:
        """A rational upper bound (exact values bound themselves tightly)."""
        if isinstance(self.value, RigorousReal):
            return self.value.upper.as_fraction()
        return as_interval(self.value, 192).upper.as_fraction()


@dataclass(frozen=True)
class DynamicPair:
    """A point of the closed natural-extension domain: x in (0,1), y <= -1."""

    x: Number
    y: Number

    def __post_init__(self):
        if is_exact(self.x):
            ok_x = 0 < self.x and self.x < 1
        else:
            ok_x = not (self.x.upper.sign() <= 0 or self.x.lower.floor() >= 1)
        if is_exact(self.y):
            ok_y = self.y <= -1
        else:
            # reject only when provably y > -1 (the whole enclosure above);
            # enclosures straddling the boundary are admitted
            ok_y = self.y.lower.as_fraction() <= -1
        if not (ok_x and ok_y):
            raise RegionViolation(
                f"({self.x}, {self.y}) not certifiable in (0,1) x (-inf,-1]"
            )


@dataclass(frozen=True)
class JagerPair:
    """(theta_{n-1}, theta_n) with its triangle-membership certificate."""

    n: int
    first: ThetaValue
    second: ThetaValue
    certificate: GammaCertificate

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("Jager pairs start at time n = 1")


# ---------------------------------------------------------------------------
# the two theta routes
# ---------------------------------------------------------------------------


def theta_by_definition(
    x0: Number,
    p: int,
    q: int,
    index: int = 0,
    output_tolerance: Fraction | None = None,
) -> ThetaValue:
    """theta(x0, p/q) = q^2*|x0 - p/q| in x0's own carrier."""
    if q < 1:
        raise ValueError("q must be >= 1")
    if math.gcd(p, q) != 1:
        raise ValueError(f"p/q = {p}/{q} is not in lowest terms")
    diff = x0 - Fraction(p, q)
    value = abs(diff) * (q * q)
    if output_tolerance is not None and isinstance(value, RigorousReal):
        if value.width() > output_tolerance:
            raise InsufficientPrecision(
                f"theta enclosure width {float(value.width())} exceeds "
                f"requested tolerance {float(output_tolerance)}"
            )
    return ThetaValue(index, value, "definition")


def theta_by_perron(pair: DynamicPair, n: int = 1) -> ThetaValue:
    """theta_{n-1} = 1/(x_n - y_n); no division hazard since x - y > 1."""
    return ThetaValue(n - 1, 1 / (pair.x - pair.y), "perron")


def theta_next_by_perron(pair: DynamicPair, n: int = 1) -> ThetaValue:
    """The companion form 1/theta_n = -(x_n - y_n)/(x_n*y_n)."""
    value = -(pair.x * pair.y) / (pair.x - pair.y)
    return ThetaValue(n, value, "perron")


# ---------------------------------------------------------------------------
# Psi and its inverse
# ---------------------------------------------------------------------------


def in_gamma(u: Number, v: Number) -> GammaCertificate:
    """Three-valued membership test for the open triangle Gamma.

    `inside` and `outside` are proved from enclosures (exact carriers
    always decide); points straddling the boundary at the available
    precision come back undecidable.
    """
    u = u.value if isinstance(u, ThetaValue) else u
    v = v.value if isinstance(v, ThetaValue) else v
    if is_exact(u) and is_exact(v):
        try:
            if u > 0 and v > 0 and u + v < 1:
                return GammaCertificate.INSIDE
            return GammaCertificate.OUTSIDE
        except ValueError:
            u, v = as_interval(u, 160), as_interval(v, 160)
    iu = u if isinstance(u, RigorousReal) else as_interval(u, 160)
    iv = v if isinstance(v, RigorousReal) else as_interval(v, 160)
    s = iu + iv
    one = Fraction(1)
    if iu.is_positive() and iv.is_positive() and s.upper.as_fraction() < one:
        return GammaCertificate.INSIDE
    if (
        iu.upper.sign() <= 0
        or iv.upper.sign() <= 0
        or s.lower.as_fraction() >= one
    ):
        return GammaCertificate.OUTSIDE
    return GammaCertificate.UNDECIDABLE


def psi(pair: DynamicPair, n: int = 1) -> JagerPair:
    """Psi(x, y) = (1/(x-y), -x*y/(x-y)), certified inside Gamma.

    Raises RegionViolation when the image cannot be certified inside the
    open triangle -- including the genuine a_1 = 1 boundary pair, whose
    image lies exactly on u + v = 1.
    """
    u = 1 / (pair.x - pair.y)
    v = -(pair.x * pair.y) / (pair.x - pair.y)
    cert = in_gamma(u, v)
    if cert is not GammaCertificate.INSIDE:
        raise RegionViolation(
            f"Psi image ({u}, {v}) not certified inside Gamma: {cert.value}",
            certificate=cert,
        )
    return JagerPair(
        n=n,
        first=ThetaValue(n - 1, u, "perron"),
        second=ThetaValue(n, v, "perron"),
        certificate=cert,
    )


def psi_inv(
    pair_or_u,
    v: Number | None = None,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> DynamicPair:
    """Inverse of Psi on the triangle (closed hypotenuse admitted).

    Accepts a JagerPair or raw (u, v).  Requires u > 0, v > 0 and
    4*u*v < 1 to be certifiable (RegionViolation otherwise); the computed
    point is then validated inside the closed domain x in (0,1), y <= -1,
    which rejects inputs with u + v > 1.
    """
    if isinstance(pair_or_u, JagerPair):
        u, v = pair_or_u.first.value, pair_or_u.second.value
    else:
        u = pair_or_u
        u = u.value if isinstance(u, ThetaValue) else u
        v = v.value if isinstance(v, ThetaValue) else v
    if v is None:
        raise TypeError("psi_inv needs a JagerPair or both u and v")

    if not (certainly_gt(u, 0) and certainly_gt(v, 0)):
        raise RegionViolation(
            "cannot certify u > 0 and v > 0",
            certificate=in_gamma(u, v),
        )
    radicand = 1 - 4 * (u * v)
    if not certainly_gt(radicand, 0):
        raise RegionViolation(
            "cannot certify 4*u*v < 1",
            certificate=in_gamma(u, v),
        )

    if is_exact(u) and is_exact(v) and is_exact(radicand):
        try:
            s = exact_sqrt(radicand)
        except ValueError:
            s = None
        if s is not None:
            try:
                x = (1 - s) / (2 * u)
                y = -(1 + s) / (2 * u)
                return DynamicPair(x, y)
            except ValueError:
                pass  # cross-field mix: fall through to intervals

    for prec in ctx.precisions():
        iu = as_interval(u, prec)
        iv = as_interval(v, prec)
        rad = 1 - 4 * (iu * iv)
        if rad.lower.sign() < 0:
            if not is_exact(u) or not is_exact(v):
                raise RegionViolation(
                    "radicand enclosure touches zero at input precision",
                    certificate=GammaCertificate.UNDECIDABLE,
                )
            continue
        s = rad.sqrt()
        x = (1 - s) / (2 * iu)
        y = -(1 + s) / (2 * iu)
        # domain rejection here is provable (enclosures contain the true
        # point), so a RegionViolation from the pair is final, not a
        # precision problem
        return DynamicPair(x, y)
    raise PrecisionExhausted(
        f"psi_inv could not stabilize within max_bits={ctx.max_bits}"
    )


# ---------------------------------------------------------------------------
# the full coefficient sequence, cross-checked
# ---------------------------------------------------------------------------


def _combine(defn: Number, perron: Number, index: int) -> Number:
    """Intersection of the two routes; disjoint routes are a bug."""
    if is_exact(defn) and is_exact(perron):
        if defn != perron:
            raise CrossCheckFailure(
                f"theta_{index}: definition {defn} != Perron {perron}"
            )
        return perron
    i_def = defn if isinstance(defn, RigorousReal) else as_interval(defn, 160)
    i_per = perron if isinstance(perron, RigorousReal) else as_interval(perron, 160)
    meet = i_def.intersect(i_per)
    if meet is None:
        raise CrossCheckFailure(
            f"theta_{index}: definition and Perron enclosures are disjoint: "
            f"{i_def} vs {i_per}"
        )
    return meet


def theta_sequence(
    x0, n_last: int, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> list[ThetaValue]:
    """theta_0..theta_{n_last}, each computed by definition AND Perron.

    The returned value at each index is the exact common value (surd
    seeds) or the intersection of the two enclosures; the routes failing
    to meet raises CrossCheckFailure.
    """
    if n_last < 0:
        raise ValueError("n_last must be >= 0")
    states = expand_states(x0, n_last + 1, ctx)
    seed = states[0].future  # seed at the working precision actually used
    out: list[ThetaValue] = []
    for k in range(n_last + 1):
        p, q = states[k].convergents[k]
        defn = abs(seed - Fraction(p, q)) * (q * q)
        nxt = states[k + 1]
        perron = 1 / (nxt.future - nxt.past)
        out.append(ThetaValue(k, _combine(defn, perron, k), "perron"))
    return out


def jager_pairs(
    x0, n_last: int, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> list[JagerPair]:
    """Jager pairs (theta_{n-1}, theta_n) for n = 1..n_last."""
    thetas = theta_sequence(x0, n_last, ctx)
    pairs = []
    for n in range(1, n_last + 1):
        u, v = thetas[n - 1], thetas[n]
        pairs.append(
            JagerPair(
                n=n,
                first=u,
                second=v,
                certificate=in_gamma(u.value, v.value),
            )
        )
    return pairs
