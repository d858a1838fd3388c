"""Exact hard-core model statistics on small graphs.

Every probability here is a ``fractions.Fraction``; polynomials in the
fugacity have integer coefficients.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .graph import (
    CanonicalKey,
    Graph,
    bits,
    canonical_form,
    canonical_label,
    induced_subgraph,
    regular_degree,
)

Rational = Fraction

MEMO_LIMIT = 1 << 22
MAX_ENUMERATION_VERTICES = 30
MAX_LOCAL_VERTICES = 20


class UndefinedQuantityError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or an integer literal; decimals and floats are rejected."""
    s = text.strip()
    num, _, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if den else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}: expected 'p/q' or an integer") from None
    if q == 0:
        raise ValueError(f"malformed rational {text!r}: zero denominator")
    return Fraction(p, q)


def format_rational(x: Fraction) -> str:
    """Canonical text form: "p/q" in lowest terms, or a bare integer."""
    return str(Fraction(x))


@dataclass(frozen=True)
class Polynomial:
    """Integer polynomial in one variable; ``coeffs[k]`` multiplies ``x**k``."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(a) for a in c))

    @classmethod
    def monomial(cls, k: int, a: int = 1) -> "Polynomial":
        return cls((0,) * k + (a,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial(tuple(k * a for k, a in enumerate(self.coeffs) if k))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Polynomial(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-a for a in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, int):
            return Polynomial(tuple(other * a for a in self.coeffs))
        out = [0] * max(len(self.coeffs) + len(other.coeffs) - 1, 0)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        out = Polynomial((1,))
        for _ in range(k):
            out = out * self
        return out

    def to_json(self) -> dict:
        return {"coeffs": [str(a) for a in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "Polynomial":
        return cls(tuple(int(a) for a in obj["coeffs"]))

    def __str__(self) -> str:
        terms = [f"{a}*x^{k}" if k else str(a) for k, a in enumerate(self.coeffs) if a]
        return " + ".join(terms) or "0"


X = Polynomial((0, 1))
ONE = Polynomial((1,))


# ---------------------------------------------------------------------------
# independence polynomial
# ---------------------------------------------------------------------------

def _binomial_row(k: int) -> tuple[int, ...]:
    row = [1]
    for _ in range(k):
        row = [a + b for a, b in zip(row + [0], [0] + row)]
    return tuple(row)


def _poly_on(adj: tuple[int, ...], mask: int, memo: dict[int, tuple[int, ...]]) -> tuple[int, ...]:
    if not mask:
        return (1,)
    hit = memo.get(mask)
    if hit is not None:
        return hit
    pivot, best = -1, -1
    m = mask
    while m:
        low = m & -m
        v = low.bit_length() - 1
        deg = (adj[v] & mask).bit_count()
        if deg > best:
            pivot, best = v, deg
        m ^= low
    if best == 0:
        out = _binomial_row(mask.bit_count())
    else:
        rest = mask & ~(1 << pivot)
        without = _poly_on(adj, rest, memo)
        with_v = _poly_on(adj, rest & ~adj[pivot], memo)
        n = max(len(without), len(with_v) + 1)
        out = tuple(
            (without[k] if k < len(without) else 0) + (with_v[k - 1] if 0 < k <= len(with_v) else 0)
            for k in range(n)
        )
    if len(memo) < MEMO_LIMIT:
        memo[mask] = out
    return out


def independence_polynomial(g: Graph, mask: int | None = None) -> Polynomial:
    """P_G(x) = sum over independent sets I of x^|I|.

    Uses P_G = P_{G-v} + x P_{G-N[v]} with ``v`` of maximum degree, memoized
    on the surviving vertex set. ``mask`` restricts to an induced subgraph.
    """
    m = g.vertex_mask if mask is None else mask
    return Polynomial(_poly_on(g.adj, m, {}))


def independence_number(g: Graph) -> int:
    return independence_polynomial(g).degree


def occupancy_fraction(g: Graph, lam: Fraction) -> Fraction:
    if g.n == 0:
        raise UndefinedQuantityError("occupancy fraction of the 0-vertex graph is undefined")
    lam = Fraction(lam)
    p = independence_polynomial(g)
    return lam * p.derivative()(lam) / (g.n * p(lam))


def log_partition_per_vertex(g: Graph, lam: Fraction) -> float:
    """log(P_G(lam)) / n evaluated in floating point from the exact value."""
    return log_fraction(Fraction(independence_polynomial(g)(Fraction(lam)))) / g.n


def log_fraction(q: Fraction) -> float:
    return math.log(q.numerator) - math.log(q.denominator)


@dataclass(frozen=True)
class OccupancyReport:
    lam: Fraction
    alpha: Fraction
    p: tuple[Fraction, ...]
    q: tuple[Fraction, ...]


def vertex_probabilities(g: Graph, lam: Fraction) -> OccupancyReport:
    """Per-vertex occupation and uncovered probabilities.

    q_v = P_{G-N(v)} / P_G and p_v = lam * P_{G-N[v]} / P_G.
    """
    if g.n == 0:
        raise UndefinedQuantityError("vertex probabilities of the 0-vertex graph are undefined")
    lam = Fraction(lam)
    full = g.vertex_mask
    memo: dict[int, tuple[int, ...]] = {}
    total = Polynomial(_poly_on(g.adj, full, memo))(lam)
    p, q = [], []
    for v in range(g.n):
        uncovered = Polynomial(_poly_on(g.adj, full & ~g.adj[v], memo))(lam)
        occupied = Polynomial(_poly_on(g.adj, full & ~g.adj[v] & ~(1 << v), memo))(lam)
        q.append(Fraction(uncovered) / total)
        p.append(lam * occupied / total)
    return OccupancyReport(lam, sum(p, Fraction(0)) / g.n, tuple(p), tuple(q))


# ---------------------------------------------------------------------------
# enumeration-based statistics
# ---------------------------------------------------------------------------

def independent_sets(g: Graph) -> Iterator[int]:
    """Yield every independent set of ``g`` as a vertex bitmask."""
    adj = g.adj

    def rec(v: int, allowed: int, chosen: int) -> Iterator[int]:
        allowed &= ~((1 << v) - 1)
        if not allowed:
            yield chosen
            return
        u = (allowed & -allowed).bit_length() - 1
        yield from rec(u + 1, allowed & ~(1 << u), chosen)
        yield from rec(u + 1, allowed & ~(1 << u) & ~adj[u], chosen | (1 << u))

    yield from rec(0, g.vertex_mask, 0)


def _covered(adj: tuple[int, ...], mask: int) -> int:
    out = 0
    for u in bits(mask):
        out |= adj[u]
    return out


def _require_regular(g: Graph, max_n: int) -> int:
    d = regular_degree(g)
    if d is None:
        raise PreconditionError("graph is not regular")
    if g.n == 0:
        raise PreconditionError("graph has no vertices")
    if g.n > max_n:
        raise PreconditionError(f"enumeration supports n <= {max_n}, got {g.n}")
    return d


def _weighted_mean(counts: dict, lam: Fraction) -> dict:
    """Turn per-key size histograms into probabilities under the hard-core law."""
    weights = {key: Polynomial(tuple(hist))(lam) for key, hist in counts.items()}
    total = sum(weights.values())
    return {key: Fraction(w) / total for key, w in weights.items()}


@dataclass(frozen=True)
class YDistribution:
    d: int
    lam: Fraction
    y: tuple[Fraction, ...]

    def mean(self) -> Fraction:
        return sum((i * yi for i, yi in enumerate(self.y)), Fraction(0))


def y_distribution(g: Graph, lam: Fraction) -> YDistribution:
    """Law of the number of uncovered neighbors of a uniform vertex."""
    d = _require_regular(g, MAX_ENUMERATION_VERTICES)
    lam = Fraction(lam)
    hist = [[0] * (g.n + 1) for _ in range(d + 1)]
    for ind in independent_sets(g):
        k = ind.bit_count()
        open_ = ~_covered(g.adj, ind)
        for v in range(g.n):
            hist[(g.adj[v] & open_).bit_count()][k] += 1
    probs = _weighted_mean(dict(enumerate(hist)), lam)
    return YDistribution(d, lam, tuple(probs[i] for i in range(d + 1)))


@dataclass(frozen=True)
class LocalGraphDistribution:
    d: int
    lam: Fraction
    entries: dict[CanonicalKey, tuple[Graph, Fraction]] = field(default_factory=dict)

    def probability(self, key: CanonicalKey) -> Fraction:
        return self.entries[key][1] if key in self.entries else Fraction(0)


def local_graph_distribution(g: Graph, lam: Fraction) -> LocalGraphDistribution:
    """Law of the isomorphism class of H = G[U], U = N(v) minus N(I minus N(v))."""
    d = _require_regular(g, MAX_LOCAL_VERTICES)
    lam = Fraction(lam)
    hist: dict[CanonicalKey, list[int]] = defaultdict(lambda: [0] * (g.n + 1))
    reps: dict[CanonicalKey, Graph] = {}
    key_of: dict[int, CanonicalKey] = {}
    for ind in independent_sets(g):
        k = ind.bit_count()
        for v in range(g.n):
            nv = g.adj[v]
            u = nv & ~_covered(g.adj, ind & ~nv)
            key = key_of.get(u)
            if key is None:
                h = induced_subgraph(g, u)
                key = canonical_label(h)
                key_of[u] = key
                reps.setdefault(key, canonical_form(h))
            hist[key][k] += 1
    probs = _weighted_mean(hist, lam)
    entries = {key: (reps[key], probs[key]) for key in sorted(probs)}
    return LocalGraphDistribution(d, lam, entries)


def neighborly_residual(dist: LocalGraphDistribution, d: int, lam: Fraction) -> Fraction:
    """(lam/(1+lam)) E[1/P_H] - (lam/d) E[P'_H/P_H]; zero iff neighborly."""
    if not dist.entries:
        raise PreconditionError("empty distribution")
    lam = Fraction(lam)
    inv, logd = Fraction(0), Fraction(0)
    for h, prob in dist.entries.values():
        poly = independence_polynomial(h)
        value = Fraction(poly(lam))
        inv += prob / value
        logd += prob * poly.derivative()(lam) / value
    return lam / (1 + lam) * inv - lam / d * logd


def local_graphs_all_complete(g: Graph) -> bool:
    """Whether every H(v, I) over independent I and vertices v is complete or empty."""
    for ind in independent_sets(g):
        for v in range(g.n):
            nv = g.adj[v]
            u = nv & ~_covered(g.adj, ind & ~nv)
            for w in bits(u):
                if (g.adj[w] & u) != u & ~(1 << w):
                    return False
    return True
