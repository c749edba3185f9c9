"""Closed-form work bounds and the limiting per-vertex MinBucket work.

Bound expressions are reported with every O-constant set to 1. They describe
asymptotic order, not an upper bound on the realized work of one graph.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .degrees import (
    DegreeSequence,
    DivergenceError,
    ReferenceDistribution,
    moment,
    power_tail,
)

LABEL = "bound expression, constants suppressed"

MINBUCKET_LINEAR_ALPHA = Fraction(7, 3)
TRIVIAL_LINEAR_ALPHA = 3


def _degree_counts(seq) -> tuple[np.ndarray, np.ndarray]:
    d = seq.degrees if isinstance(seq, DegreeSequence) else np.asarray(seq, dtype=np.int64)
    return np.unique(d, return_counts=True)


def trivial_bound(seq) -> int:
    """``sum_v d_v**2`` as an exact integer."""
    vals, counts = _degree_counts(seq)
    return sum(int(c) * int(k) ** 2 for k, c in zip(vals, counts))


def minbucket_bound(seq) -> float:
    """``n + m**-2 * (sum_v d_v**(4/3))**3``."""
    vals, counts = _degree_counts(seq)
    n = int(counts.sum())
    stubs = sum(int(c) * int(k) for k, c in zip(vals, counts))
    if stubs == 0:
        raise ValueError("m must be positive")
    m = stubs / 2
    s43 = math.fsum(int(c) * float(k) ** (4 / 3) for k, c in zip(vals, counts))
    return n + s43 ** 3 / m ** 2


@dataclass(frozen=True)
class PowerLawPrediction:
    alpha: float
    n: int
    d_max: float
    trivial_exponent: float
    minbucket_exponent: float
    trivial: float
    minbucket: float
    trivial_linear: bool
    minbucket_linear: bool
    label: str = LABEL


def power_law_predictions(alpha, n: int, d_max: float) -> PowerLawPrediction:
    """Work orders ``n + n d_max^(3-alpha)`` and ``n + n d_max^(7-3 alpha)``.

    Linear classification compares ``alpha`` with the thresholds directly
    (``alpha >= 7/3`` for MinBucket, ``alpha >= 3`` for trivial) so the
    boundary value is not at the mercy of rounding in ``7 - 3 alpha``.
    """
    if not 1 < alpha < 4:
        raise ValueError(f"alpha must lie in (1, 4), got {alpha}")
    te = 3 - float(alpha)
    me = 7 - 3 * float(alpha)
    exact = isinstance(alpha, (int, Fraction))
    return PowerLawPrediction(
        alpha=float(alpha),
        n=n,
        d_max=d_max,
        trivial_exponent=te,
        minbucket_exponent=me,
        trivial=n + n * d_max ** te,
        minbucket=n + n * d_max ** me,
        trivial_linear=alpha >= TRIVIAL_LINEAR_ALPHA,
        minbucket_linear=alpha >= (MINBUCKET_LINEAR_ALPHA if exact else 7 / 3),
    )


@dataclass(frozen=True)
class LimitConstant:
    value: float
    lo: float
    hi: float
    truncation: int | None = None  # head length used for infinite support

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi


def limit_constant(dist: ReferenceDistribution, tol: float = 1e-9,
                   truncation: int | None = None) -> LimitConstant:
    """Limiting per-vertex MinBucket work with ties counted in both buckets.

    ``C = sum_t t(t-1) f(t) S(t)**2 / (2 E[d]**2)`` with ``S(t) = sum_{s>=t} s f(s)``.
    Finite supports are summed directly. For an untruncated power law the
    sum runs explicitly up to ``truncation`` (grown until the bracket is
    within ``tol``) and the remainder is bracketed analytically.
    """
    if dist.finite:
        t = dist.support().astype(float)
        f = dist.pmf()
        tf = t * f
        S = np.cumsum(tf[::-1])[::-1]
        ed = math.fsum(tf.tolist())
        v = math.fsum((t * (t - 1) * f * S * S).tolist()) / (2 * ed * ed)
        # cumsum rounding is the only error source for a finite support
        slack = 4 * t.size * np.finfo(float).eps
        return LimitConstant(float(v), float(v * (1 - slack)), float(v * (1 + slack)))

    a = dist.alpha
    if a <= 2:
        raise DivergenceError(f"E[d] is infinite for alpha={a}")
    if a <= 7 / 3:
        # float(7/3) sits one ulp above 7/3; treat it as the boundary, matching
        # power_law_predictions, instead of returning a ~1e14 artifact
        raise DivergenceError(f"E[d^(4/3)] is infinite for alpha={a}")
    N = truncation or 1024
    while True:
        res = _power_law_constant(a, N)
        if truncation is not None or res.hi - res.lo <= tol * res.value:
            return res
        N *= 4


def _power_law_constant(a: float, N: int) -> LimitConstant:
    # Unnormalized g(t) = t^-a, U(t) = sum_{s>=t} s g(s), M1 = U(1), Z = sum g.
    # C = sum_t t(t-1) g(t) U(t)^2 / (2 Z M1^2).
    t = np.arange(1, N + 1, dtype=float)
    ul, uh = power_tail(a - 1, N + 1)
    U_tail = 0.5 * (ul + uh)
    partial = _suffix_sums(t ** (1 - a))
    U = partial + U_tail
    head = math.fsum((t * (t - 1) * t ** -a * U * U).tolist())
    m1_lo, m1_hi = partial[0] + ul, partial[0] + uh
    zl, zh = power_tail(a, 1)

    # U(t) for t > N lies in [A t^(2-a) + t^(1-a)/2, same + (a-1) t^-a / 12].
    A = 1 / (a - 2)
    base = {2 - a: A, 1 - a: 0.5}
    upper = dict(base)
    upper[-a] = (a - 1) / 12
    tl = _poly_tail(_term_poly(base, a), N + 1, lower=True)
    th = _poly_tail(_term_poly(upper, a), N + 1, lower=False)
    # head used a point value of U_tail; widen by its bracket
    dU = uh - ul
    head_lo = head - 2 * dU * math.fsum((t * (t - 1) * t ** -a * U).tolist())
    head_hi = head + 2 * dU * math.fsum((t * (t - 1) * t ** -a * (U + dU)).tolist())
    lo = (max(head_lo, 0.0) + tl) / (2 * zh * m1_hi ** 2) * (1 - _ROUND)
    hi = (head_hi + th) / (2 * zl * m1_lo ** 2) * (1 + _ROUND)
    return LimitConstant(float(0.5 * (lo + hi)), float(lo), float(hi), N)


_BLOCK = 256
# relative rounding allowance: in-block cumsum error plus the final products
_ROUND = 4 * _BLOCK * float(np.finfo(float).eps)


def _suffix_sums(x: np.ndarray) -> np.ndarray:
    """Suffix sums with error bounded by the block length, not by ``len(x)``."""
    r = x[::-1]
    pad = (-r.size) % _BLOCK
    blocks = np.concatenate([r, np.zeros(pad)]).reshape(-1, _BLOCK)
    inner = np.cumsum(blocks, axis=1)
    offsets = np.empty(len(blocks))
    acc = []
    for i, b in enumerate(blocks):
        offsets[i] = math.fsum(acc)
        acc.append(math.fsum(b.tolist()))
    out = (inner + offsets[:, None]).ravel()[: r.size]
    return out[::-1]


def _term_poly(u: dict, a: float) -> dict:
    """Coefficients of ``(t^2 - t) t^-a u(t)^2`` as ``{exponent: coef}``."""
    sq: dict = {}
    items = list(u.items())
    for e1, c1 in items:
        for e2, c2 in items:
            sq[e1 + e2] = sq.get(e1 + e2, 0.0) + c1 * c2
    out: dict = {}
    for e, c in sq.items():
        for shift, k in ((2 - a, 1.0), (1 - a, -1.0)):
            out[e + shift] = out.get(e + shift, 0.0) + k * c
    return out


def _poly_tail(poly: dict, start: int, lower: bool) -> float:
    total = []
    for e, c in poly.items():
        lo, hi = power_tail(-e, start)
        # pick the bracket end that keeps the total on the requested side
        total.append(c * (lo if (c > 0) == lower else hi))
    return math.fsum(total)


@dataclass(frozen=True)
class BoundReport:
    trivial_bound: int | None = None
    minbucket_bound: float | None = None
    power_law_exponents: tuple[float, float] | None = None
    limit_constant: LimitConstant | None = None
    alpha: float | None = None
    label: str = LABEL

    def as_text(self) -> str:
        rows = [("label", self.label)]
        if self.alpha is not None:
            rows.append(("alpha", repr(self.alpha)))
        if self.trivial_bound is not None:
            rows.append(("trivial_bound", str(self.trivial_bound)))
        if self.minbucket_bound is not None:
            rows.append(("minbucket_bound", repr(self.minbucket_bound)))
        if self.power_law_exponents is not None:
            rows.append(("trivial_exponent", repr(self.power_law_exponents[0])))
            rows.append(("minbucket_exponent", repr(self.power_law_exponents[1])))
        if self.limit_constant is not None:
            c = self.limit_constant
            rows += [("limit_constant", repr(c.value)), ("limit_constant_lo", repr(c.lo)),
                     ("limit_constant_hi", repr(c.hi))]
        return "".join(f"{k}={v}\n" for k, v in rows)


def bound_report(seq: DegreeSequence) -> BoundReport:
    return BoundReport(trivial_bound=trivial_bound(seq), minbucket_bound=minbucket_bound(seq))


def power_law_report(alpha: float, cap: int | None = None, tol: float = 1e-9) -> BoundReport:
    """Exponents plus, when finite, the limit constant of the (capped) power law."""
    c = None
    try:
        c = limit_constant(ReferenceDistribution.power_law(alpha, cap), tol)
    except DivergenceError:
        pass
    return BoundReport(power_law_exponents=(3 - alpha, 7 - 3 * alpha),
                       limit_constant=c, alpha=float(alpha))
