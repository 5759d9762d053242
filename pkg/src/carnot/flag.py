"""Flag of bracket-generated subspaces at a point.

Computes the growth vector, degree of non-holonomy, weights, and an adapted
basis of evaluated bracket words. Bracket words are right-nested, enumerated
by length and then lexicographically, which makes every downstream choice
(adapted basis, privileged chart) deterministic.

Rank decisions are exact when the base point has rational coordinates;
otherwise a pivot tolerance of 1e-10 is used and the report carries a
warning flag.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .errors import (
    NonNegativeOrder,
    NotBracketGenerating,
    ZeroDriftAtPoint,
)
from .poly import VectorField

PIVOT_TOL = 1e-10
DEFAULT_R_MAX = 6

# A bracket word (i1, ..., ik) with 1-based letters denotes the right-nested
# bracket [f_i1, [f_i2, ..., [f_ik-1, f_ik]]]; a single letter is the
# generator itself.
BracketWord = tuple


@dataclass(frozen=True)
class FlagReport:
    growth: tuple
    r: int
    weights: tuple
    basis_words: tuple
    basis_vectors: tuple
    exact: bool
    warning: str | None = None

    def to_json(self):
        return {
            "growth": list(self.growth),
            "r": self.r,
            "weights": list(self.weights),
            "basis_words": [list(w) for w in self.basis_words],
            "basis_vectors": [
                [str(v) if isinstance(v, Fraction) else float(v) for v in vec]
                for vec in self.basis_vectors
            ],
            "exact": self.exact,
            "warning": self.warning,
        }


def weights_from_growth(growth, dim) -> tuple:
    """w_i = s exactly when n_{s-1} < i <= n_s (with n_0 = 0)."""
    weights = []
    prev = 0
    for s, n_s in enumerate(growth, start=1):
        weights.extend([s] * (n_s - prev))
        prev = n_s
    if len(weights) != dim:
        raise ValueError(f"growth vector {growth} does not fill dimension {dim}")
    return tuple(weights)


def bracket_word_field(fields, word: BracketWord) -> VectorField:
    """Field of a right-nested bracket word with 1-based letters."""
    if not word:
        raise ValueError("empty bracket word")
    out = fields[word[-1] - 1]
    for letter in reversed(word[:-1]):
        out = fields[letter - 1].bracket(out)
    return out


def _is_exact_point(q) -> bool:
    return all(isinstance(x, (int, Fraction)) for x in q)


class _ExactRank:
    """Incremental rank tracking via exact fraction elimination."""

    def __init__(self, dim):
        self.dim = dim
        self.rows = []  # reduced rows
        self.pivots = []  # pivot column per row

    def try_add(self, vec) -> bool:
        v = [Fraction(x) for x in vec]
        for row, p in zip(self.rows, self.pivots):
            if v[p] != 0:
                factor = v[p] / row[p]
                v = [a - factor * b for a, b in zip(v, row)]
        for j, x in enumerate(v):
            if x != 0:
                self.rows.append(v)
                self.pivots.append(j)
                return True
        return False

    @property
    def rank(self):
        return len(self.rows)


class _FloatRank:
    def __init__(self, dim, tol=PIVOT_TOL):
        self.dim = dim
        self.tol = tol
        self.rows = []
        self.pivots = []

    def try_add(self, vec) -> bool:
        v = np.asarray(vec, dtype=float).copy()
        for row, p in zip(self.rows, self.pivots):
            v -= (v[p] / row[p]) * row
        j = int(np.argmax(np.abs(v)))
        if abs(v[j]) > self.tol:
            self.rows.append(v)
            self.pivots.append(j)
            return True
        return False

    @property
    def rank(self):
        return len(self.rows)


def growth_vector(fields, q, r_max: int = DEFAULT_R_MAX) -> FlagReport:
    """Growth vector, weights and adapted bracket basis at q.

    Enumerates bracket words by increasing length (lexicographic within a
    length), evaluates them at q, and keeps the first linearly independent
    vectors. Raises NotBracketGenerating if the rank stalls below n at depth
    r_max.
    """
    if not fields:
        raise ValueError("need at least one generator")
    dim = fields[0].dim
    m = len(fields)
    exact = _is_exact_point(q)
    tracker = _ExactRank(dim) if exact else _FloatRank(dim)
    evaluate = (
        (lambda f: f.evaluate_exact(q)) if exact else (lambda f: f.evaluate(q))
    )

    growth = []
    basis_words = []
    basis_vectors = []
    # cache right-nested suffix fields to avoid recomputing brackets
    cache = {}

    def field_of(word):
        if word in cache:
            return cache[word]
        if len(word) == 1:
            f = fields[word[0] - 1]
        else:
            f = fields[word[0] - 1].bracket(field_of(word[1:]))
        cache[word] = f
        return f

    for length in range(1, r_max + 1):
        for word in product(range(1, m + 1), repeat=length):
            f = field_of(word)
            if all(c.is_zero() for c in f.components):
                continue
            vec = evaluate(f)
            if tracker.try_add(vec):
                basis_words.append(word)
                basis_vectors.append(tuple(vec))
        growth.append(tracker.rank)
        if tracker.rank == dim:
            weights = weights_from_growth(growth, dim)
            return FlagReport(
                growth=tuple(growth),
                r=length,
                weights=weights,
                basis_words=tuple(basis_words),
                basis_vectors=tuple(basis_vectors),
                exact=exact,
                warning=None if exact else "float pivots, tolerance 1e-10",
            )
    raise NotBracketGenerating(tracker.rank, dim, r_max)


def adapted_basis(report: FlagReport):
    """(word, vector) pairs in enumeration order, grouped by weight.

    The i-th pair was found while scanning words of length weights[i], so the
    vectors are adapted to the flag by construction.
    """
    return list(zip(report.basis_words, report.basis_vectors))


def drift_order(f0_chart: VectorField, chart) -> int:
    """Drift weight s = -ord(f0) for a drift given in chart coordinates.

    Raises ZeroDriftAtPoint when the field vanishes at the chart center and
    NonNegativeOrder when its order is >= 0 (the drift vanishes too fast to
    carry a weight).
    """
    if all(c == 0 for c in f0_chart.constant_part()):
        raise ZeroDriftAtPoint("drift vanishes at the chart center")
    order = f0_chart.min_weighted_degree(chart.weights)
    if order is None or order >= 0:
        raise NonNegativeOrder(order)
    return -order


@dataclass(frozen=True)
class RegularityReport:
    regular: bool
    order_at_center: int
    orders_seen: tuple
    points: tuple


def is_regular_drift(
    f0, fields, q, radius, n_samples, seed, r_max: int = DEFAULT_R_MAX
) -> RegularityReport:
    """Sampled check that the drift order is locally constant near q.

    Each sample point gets its own privileged chart; sample coordinates are
    snapped to dyadic rationals so every per-point computation stays exact.
    """
    from .privileged import build_chart  # local import, avoids a cycle

    chart0 = build_chart(fields, q, r_max)
    g0 = chart0.push(f0)
    base = g0.min_weighted_degree(chart0.weights)
    orders = {base}
    points = []
    rng = np.random.default_rng(seed)
    dim = fields[0].dim
    denom = 1 << 20
    for _ in range(n_samples):
        direction = rng.normal(size=dim)
        direction /= max(np.linalg.norm(direction), 1e-300)
        rho = radius * rng.uniform() ** (1.0 / dim)
        raw = np.asarray([float(x) for x in q]) + rho * direction
        p = tuple(Fraction(round(x * denom), denom) for x in raw)
        chart = build_chart(fields, p, r_max)
        g = chart.push(f0)
        orders.add(g.min_weighted_degree(chart.weights))
        points.append(p)
    return RegularityReport(
        regular=(len(orders) == 1),
        order_at_center=base,
        orders_seen=tuple(sorted(o if o is not None else 10**9 for o in orders)),
        points=tuple(points),
    )
