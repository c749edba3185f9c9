"""Degree sequences and reference degree distributions.

A :class:`DegreeSequence` is the target input of the graph generators. A
:class:`ReferenceDistribution` is a pmf on the positive integers (parametric
power law or explicit table) from which sequences are drawn i.i.d.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

# Bernoulli numbers B_2, B_4, ..., B_12 for the Euler-Maclaurin tail.
_BERNOULLI_EVEN = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730)

# Below this start index the tail is summed directly before applying Euler-Maclaurin.
_TAIL_DIRECT = 16

# Relative widening that absorbs float rounding in bracket ends.
_SLACK = 8 * float(np.finfo(float).eps)


class DegreeError(ValueError):
    """Invalid degree sequence or distribution parameters."""


class TruncationError(DegreeError):
    """Max degree violates the requested truncation bound."""


class DivergenceError(ArithmeticError):
    """A requested moment or constant is infinite."""


# ---------------------------------------------------------------------------
# power sums


def power_tail(s: float, start: int) -> tuple[float, float]:
    """Bracket ``sum_{t >= start} t**-s`` for ``s > 1``.

    Uses Euler-Maclaurin with five correction terms. ``t**-s`` is completely
    monotone, so the remainder has the sign of the first omitted term and is
    no larger in magnitude; that term gives the second end of the bracket.
    """
    if s <= 1:
        raise DivergenceError(f"sum of t^-{s} diverges")
    if start < 1:
        raise ValueError("start must be >= 1")
    head = 0.0
    if start < _TAIL_DIRECT:
        head = math.fsum(t ** -s for t in range(start, _TAIL_DIRECT))
        start = _TAIL_DIRECT
    N = float(start)
    terms = [N ** (1 - s) / (s - 1), 0.5 * N ** -s]
    rising = s  # (s)_{2k-1}
    nxt = 0.0
    for k, b in enumerate(_BERNOULLI_EVEN, start=1):
        if k > 1:
            rising *= (s + 2 * k - 3) * (s + 2 * k - 2)
        term = b / math.factorial(2 * k) * rising * N ** (-s - 2 * k + 1)
        if k == len(_BERNOULLI_EVEN):
            nxt = term
        else:
            terms.append(term)
    approx = head + math.fsum(terms)
    lo, hi = sorted((approx, approx + nxt))
    return lo * (1 - _SLACK), hi * (1 + _SLACK)


def _fsum(values: np.ndarray) -> float:
    return math.fsum(np.asarray(values, dtype=float).tolist())


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class PowerLawParams:
    alpha: float
    n: int
    d_max: int

    def __post_init__(self):
        if not self.alpha > 1:
            raise DegreeError(f"alpha must be > 1, got {self.alpha}")
        if self.n < 2:
            raise DegreeError(f"n must be >= 2, got {self.n}")
        if not 1 <= self.d_max <= self.n - 1:
            raise DegreeError(f"d_max must lie in [1, n-1], got {self.d_max}")


@dataclass(frozen=True, eq=False)
class DegreeSequence:
    """Target degrees, stored sorted ascending.

    ``perm[i]`` is the original vertex id of sorted position ``i``. Build
    instances with :meth:`from_degrees`; it validates and applies the parity
    rule (an odd stub sum bumps one minimum-degree vertex by one).
    """

    degrees: np.ndarray
    perm: np.ndarray
    parity_adjusted: bool = False
    _vertex_order: np.ndarray = field(repr=False, default=None)

    @classmethod
    def from_degrees(cls, values: Iterable[int]) -> "DegreeSequence":
        d = np.array(list(values) if not isinstance(values, np.ndarray) else values)
        if d.ndim != 1 or d.size == 0:
            raise DegreeError("degree sequence must be a nonempty 1-d list")
        if not np.issubdtype(d.dtype, np.integer):
            if not np.all(np.equal(np.mod(d, 1), 0)):
                raise DegreeError("degrees must be integers")
        d = d.astype(np.int64)
        if d.min() < 1:
            raise DegreeError("degrees must be >= 1 (isolated vertices are added outside the sequence)")
        adjusted = False
        if int(d.sum()) % 2:
            d = d.copy()
            d[int(np.argmin(d))] += 1
            adjusted = True
        perm = np.argsort(d, kind="stable")
        srt = d[perm]
        for a in (d, perm, srt):
            a.setflags(write=False)
        return cls(srt, perm, adjusted, d)

    @property
    def n(self) -> int:
        return int(self.degrees.size)

    @property
    def stub_sum(self) -> int:
        return int(self.degrees.sum())

    @property
    def m(self) -> int:
        return self.stub_sum // 2

    @property
    def max_degree(self) -> int:
        return int(self.degrees[-1])

    def vertex_degrees(self) -> np.ndarray:
        """Degrees indexed by original vertex id."""
        return self._vertex_order

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, DegreeSequence):
            return NotImplemented
        return np.array_equal(self._vertex_order, other._vertex_order)

    def __hash__(self):
        return hash(self._vertex_order.tobytes())


@dataclass(frozen=True)
class ReferenceDistribution:
    """A pmf on {1, 2, ...}, optionally truncated to {1, ..., cap}.

    Either parametric (``alpha``: mass proportional to ``t**-alpha``) or an
    explicit table (``weights[i]`` is the unnormalized mass of ``t = i + 1``).
    A table always has finite support; ``cap`` may shorten it further.
    """

    alpha: float | None = None
    weights: tuple[float, ...] | None = None
    cap: int | None = None

    def __post_init__(self):
        if (self.alpha is None) == (self.weights is None):
            raise DegreeError("give exactly one of alpha or weights")
        if self.alpha is not None and not self.alpha > 1:
            raise DegreeError(f"alpha must be > 1, got {self.alpha}")
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            if w.size == 0 or np.any(w < 0) or not np.isfinite(w).all() or w.sum() <= 0:
                raise DegreeError("weights must be finite, nonnegative, and not all zero")
        if self.cap is not None and self.cap < 1:
            raise DegreeError("cap must be >= 1")
        if self.weights is not None and self.cap is not None:
            if np.asarray(self.weights[: self.cap]).sum() <= 0:
                raise DegreeError("no mass at or below cap")

    @classmethod
    def power_law(cls, alpha: float, cap: int | None = None) -> "ReferenceDistribution":
        return cls(alpha=float(alpha), cap=cap)

    @classmethod
    def from_table(cls, table: Mapping[int, float] | Sequence[float],
                   cap: int | None = None) -> "ReferenceDistribution":
        """Build from ``{degree: weight}`` or a list indexed from degree 1."""
        if isinstance(table, Mapping):
            if any(k < 1 for k in table):
                raise DegreeError("degrees in a table must be >= 1")
            w = [0.0] * max(table)
            for k, v in table.items():
                w[k - 1] = float(v)
        else:
            w = [float(v) for v in table]
        return cls(weights=tuple(w), cap=cap)

    @classmethod
    def point_mass(cls, k: int) -> "ReferenceDistribution":
        return cls.from_table({k: 1.0})

    @property
    def finite(self) -> bool:
        return self.cap is not None or self.weights is not None

    @property
    def support_max(self) -> int | None:
        if self.weights is not None:
            return len(self.weights) if self.cap is None else min(self.cap, len(self.weights))
        return self.cap

    def support(self) -> np.ndarray:
        if not self.finite:
            raise DivergenceError("untruncated power law has infinite support")
        return np.arange(1, self.support_max + 1, dtype=np.int64)

    def weights_array(self) -> np.ndarray:
        """Unnormalized masses on ``support()``."""
        t = self.support()
        if self.weights is not None:
            return np.asarray(self.weights[: t.size], dtype=float)
        return t.astype(float) ** -self.alpha

    def normalizer(self) -> float:
        """Total unnormalized mass ``Z`` (zeta-style constant for power laws)."""
        if self.finite:
            return _fsum(self.weights_array())
        lo, hi = _zeta_bracket(self.alpha)
        return 0.5 * (lo + hi)

    def pmf(self) -> np.ndarray:
        """Normalized (truncated) probabilities on ``support()``."""
        w = self.weights_array()
        return w / _fsum(w)

    def kept_mass(self) -> float:
        """Fraction of the untruncated mass inside the support; ``1 - gamma_n``."""
        if self.cap is None:
            return 1.0
        full = ReferenceDistribution(self.alpha, self.weights, None)
        return self.normalizer() / full.normalizer()


def _zeta_bracket(s: float, start: int = 1) -> tuple[float, float]:
    return power_tail(s, start)


def truncated_power_law(alpha: float, cap: int) -> ReferenceDistribution:
    return ReferenceDistribution.power_law(alpha, cap)


def cap_sqrt_n(n: int) -> int:
    """Default truncation cap ``floor(sqrt(n))``."""
    return max(1, math.isqrt(n))


def cap_sqrt_n_over_log2(n: int) -> int:
    """Theory cap ``floor(sqrt(n) / ln(n)**2)`` (natural log), at least 1."""
    if n < 2:
        return 1
    return max(1, int(math.sqrt(n) / math.log(n) ** 2))


# ---------------------------------------------------------------------------
# operations


def power_law_sequence(params: PowerLawParams) -> DegreeSequence:
    """Deterministic power-law sequence by inverse-CDF quantiles.

    Vertex ``i`` (1-indexed) gets the smallest ``d`` with ``F(d) >= (i - 0.5)/n``
    where ``F`` is the CDF of mass proportional to ``d**-alpha`` on
    ``{1..d_max}``.
    """
    d = np.arange(1, params.d_max + 1, dtype=float)
    w = d ** -params.alpha
    cdf = np.cumsum(w) / _fsum(w)
    q = (np.arange(1, params.n + 1) - 0.5) / params.n
    idx = np.searchsorted(cdf, q, side="left")
    idx = np.minimum(idx, params.d_max - 1)
    return DegreeSequence.from_degrees(idx + 1)


def sample_iid_degrees(dist: ReferenceDistribution, n: int, seed=None) -> DegreeSequence:
    """``n`` i.i.d. draws from the (truncated) pmf of ``dist``.

    ``seed`` is anything :func:`numpy.random.default_rng` accepts, including a
    ``Generator``, which is consumed in place.
    """
    if n < 1:
        raise DegreeError("n must be >= 1")
    if not dist.finite:
        raise DegreeError("sampling needs a finite support; set cap")
    rng = np.random.default_rng(seed)
    p = dist.pmf()
    cdf = np.cumsum(p)
    cdf[-1] = 1.0
    draws = np.searchsorted(cdf, rng.random(n), side="right") + 1
    # zero-mass trailing entries of a table can never be hit except via rounding
    draws = np.minimum(draws, dist.support_max)
    return DegreeSequence.from_degrees(draws)


@dataclass(frozen=True)
class TruncationReport:
    max_degree: int
    m: int
    half_root_m: float  # sqrt(m)/2
    quarter_root_m: float  # sqrt(m)/4
    below_half_root_m: bool
    below_quarter_root_m: bool


def validate_truncation(seq: DegreeSequence, strict: bool = False) -> TruncationReport:
    """Check ``max degree < sqrt(m)/2`` (and the stricter ``sqrt(m)/4``).

    Violations raise :class:`TruncationError` in strict mode and warn otherwise.
    """
    m = seq.m
    dmax = seq.max_degree
    # exact comparison: d < sqrt(m)/k  <=>  (k d)^2 < m
    rep = TruncationReport(
        max_degree=dmax,
        m=m,
        half_root_m=math.sqrt(m) / 2,
        quarter_root_m=math.sqrt(m) / 4,
        below_half_root_m=(2 * dmax) ** 2 < m,
        below_quarter_root_m=(4 * dmax) ** 2 < m,
    )
    if not rep.below_half_root_m:
        msg = f"max degree {dmax} is not below sqrt(m)/2 = {rep.half_root_m:.4g}"
        if strict:
            raise TruncationError(msg)
        warnings.warn(msg, stacklevel=2)
    return rep


@dataclass(frozen=True)
class Moment:
    value: float
    lo: float
    hi: float


def moment(dist: ReferenceDistribution, r: float, tol: float = 1e-12) -> Moment:
    """``E[d**r] = sum_t t**r f(t)`` with a rigorous bracket.

    Raises :class:`DivergenceError` for an untruncated power law with
    ``r >= alpha - 1``.
    """
    if not r > 0:
        raise ValueError("r must be > 0")
    if dist.finite:
        t = dist.support().astype(float)
        v = _fsum(t ** r * dist.pmf())
        return Moment(v, v, v)
    a = dist.alpha
    if r >= a - 1:
        raise DivergenceError(f"E[d^{r}] diverges for alpha={a}")
    N = _TAIL_DIRECT
    while True:
        t = np.arange(1, N, dtype=float)
        num_head = _fsum(t ** (r - a))
        z_head = _fsum(t ** -a)
        nl, nh = power_tail(a - r, N)
        zl, zh = power_tail(a, N)
        lo = (num_head + nl) / (z_head + zh)
        hi = (num_head + nh) / (z_head + zl)
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol * mid or N > 1 << 22:
            return Moment(mid, lo, hi)
        N *= 4


# ---------------------------------------------------------------------------
# io


def save_degrees(seq: DegreeSequence | Sequence[int], path) -> None:
    vals = seq.vertex_degrees() if isinstance(seq, DegreeSequence) else seq
    text = "".join(f"{int(v)}\n" for v in vals)
    Path(path).write_text(text, encoding="utf-8")


def load_degrees(path) -> DegreeSequence:
    vals = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        s = line.strip()
        if not s:
            continue
        if not s.isdigit() or int(s) < 1:
            raise DegreeError(f"{path}:{lineno}: expected a positive integer, got {s!r}")
        vals.append(int(s))
    return DegreeSequence.from_degrees(vals)
