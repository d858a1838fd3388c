"""Closed-form LP optima, partition-function bounds and corpus scans."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .graph import (
    Graph,
    generalized_petersen,
    is_disjoint_union_of_cliques,
    is_triangle_free,
    regular_degree,
    t3_tree,
    write_graph6,
)
from .hardcore import (
    Polynomial,
    X,
    ONE,
    format_rational,
    independence_polynomial,
    log_fraction,
    y_distribution,
)

# ---------------------------------------------------------------------------
# triangle-free d-regular program
# ---------------------------------------------------------------------------


def branch_index(d: int, lam: Fraction) -> int:
    """The i in 1..d-1 with m_i <= lam < m_{i-1}, where m_i = (d/(i+1))^(1/i) - 1.

    Decided exactly: m_i <= lam iff (i+1)(1+lam)^i >= d. The m_i decrease in
    i, so the branch is the first i that passes.
    """
    if d < 2:
        raise ValueError(f"branch index needs d >= 2, got {d}")
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError("fugacity must be positive")
    for i in range(1, d):
        if (i + 1) * (1 + lam) ** i >= d:
            return i
    return d - 1


def breakpoint(d: int, i: int) -> float:
    """m_i as a float, for display only; m_0 is infinite."""
    if i == 0:
        return math.inf
    return (d / (i + 1)) ** (1 / i) - 1


@dataclass(frozen=True)
class TfBound:
    d: int
    lam: Fraction
    i: int
    y0: Fraction
    yi: Fraction
    yi1: Fraction
    S: Fraction
    M: Fraction
    A: Fraction

    def vector(self) -> tuple[Fraction, ...]:
        y = [Fraction(0)] * (self.d + 1)
        y[0] += self.y0
        y[self.i] += self.yi
        y[self.i + 1] += self.yi1
        return tuple(y)

    @property
    def objective(self) -> Fraction:
        return self.i * self.yi + (self.i + 1) * self.yi1

    def duals(self) -> tuple[Fraction, Fraction, Fraction]:
        return self.S, self.M, self.A


def tf_bound_at(d: int, lam: Fraction, i: int) -> TfBound:
    """Evaluate the three-point primal and dual formulas on branch ``i``."""
    lam = Fraction(lam)
    t = 1 + lam
    den = t ** (i + 1) + lam * (d + 1 + (d + i + 1) * lam)
    return TfBound(
        d,
        lam,
        i,
        y0=lam * (1 + (i + 1) * lam) / den,
        yi=t * ((i + 1) * t**i - d) / den,
        yi1=t**2 * (d - i * t ** (i - 1)) / den,
        S=d * t * (1 + (i + 1) * lam) / den,
        M=t ** (i + 2) / den,
        A=d * t * (t ** (i + 1) - (1 + (i + 1) * lam)) / den,
    )


def tf_bound(d: int, lam: Fraction) -> TfBound:
    return tf_bound_at(d, lam, branch_index(d, lam))


def tf_alpha_bound(d: int, lam: Fraction) -> Fraction:
    """Lower bound on the occupancy fraction of triangle-free d-regular graphs."""
    return tf_bound(d, lam).y0


def tf_alpha_over_lambda(d: int, t: Fraction) -> Fraction:
    """y0(t) / t with the factor t cancelled, so it is finite at t = 0."""
    if t == 0:
        return Fraction(1)
    i = branch_index(d, t)
    u = 1 + t
    return (1 + (i + 1) * t) / (u ** (i + 1) + t * (d + 1 + (d + i + 1) * t))


# ---------------------------------------------------------------------------
# cubic program
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1)
def t3_polynomial() -> Polynomial:
    """Independence polynomial of the depth-2 tree with root degree 3."""
    return independence_polynomial(t3_tree())


def t3_closed_form() -> Polynomial:
    """(1 + 3x + x^2)^3 + x (1+x)^6, split on whether the root is occupied."""
    return Polynomial((1, 3, 1)) ** 3 + X * (ONE + X) ** 6


@dataclass(frozen=True)
class CubicBound:
    lam: Fraction
    big_lambda: Fraction
    y: tuple[Fraction, Fraction, Fraction, Fraction]
    S: Fraction
    M: Fraction
    A: Fraction
    B: Fraction

    @property
    def y0(self) -> Fraction:
        return self.y[0]

    @property
    def objective(self) -> Fraction:
        return sum((i * yi for i, yi in enumerate(self.y)), Fraction(0))

    @property
    def dual_objective(self) -> Fraction:
        return self.S + self.big_lambda * self.B

    def duals(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return self.S, self.M, self.A, self.B


def cubic_bound(lam: Fraction) -> CubicBound:
    lam = Fraction(lam)
    pt = Fraction(t3_polynomial()(lam))
    q = 1 + 6 * lam + 6 * lam**2
    t = 1 + lam
    y0 = lam * (1 + 2 * lam) / q + lam**3 * t**2 / (q * pt)
    y1 = (-1 + lam + 2 * lam**2) / q + (1 + 7 * lam + 9 * lam**2 + lam**3) * t**2 / (q * pt)
    y2 = 2 * t**2 / q - (2 + 14 * lam + 21 * lam**2 + 8 * lam**3) * t**2 / (q * pt)
    y3 = t**3 / pt
    return CubicBound(
        lam,
        t**3 / pt,
        (y0, y1, y2, y3),
        S=3 * t * (1 + 2 * lam) / q,
        M=t**3 / q,
        A=3 * lam**2 * t / q,
        B=3 * lam**2 / q,
    )


def cubic_alpha_over_lambda(t: Fraction) -> Fraction:
    """y0(t) / t for the cubic bound, finite at t = 0."""
    pt = Fraction(t3_polynomial()(t))
    q = 1 + 6 * t + 6 * t**2
    return (1 + 2 * t) / q + t**2 * (1 + t) ** 2 / (q * pt)


def cubic_numerators() -> tuple[Polynomial, Polynomial]:
    """Numerators of y1 and y2 over the common denominator (1+6x+6x^2) P_T3(x)."""
    pt = t3_polynomial()
    sq = (ONE + X) ** 2
    n1 = Polynomial((-1, 1, 2)) * pt + Polynomial((1, 7, 9, 1)) * sq
    n2 = 2 * sq * pt - Polynomial((2, 14, 21, 8)) * sq
    return n1, n2


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------


def adaptive_simpson(f: Callable[[float], float], a: float, b: float, tol: float,
                     max_depth: int = 60) -> float:
    """Adaptive Simpson quadrature with the usual |S2 - S1| <= 15 tol acceptance."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")

    def simpson(fa, fm, fb, h):
        return h / 6 * (fa + 4 * fm + fb)

    fa, fb, fm = f(a), f(b), f((a + b) / 2)
    total = 0.0
    stack = [(a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, whole, eps, depth = stack.pop()
        mid = (lo + hi) / 2
        fl, fr = f((lo + mid) / 2), f((mid + hi) / 2)
        left = simpson(flo, fl, fmid, mid - lo)
        right = simpson(fmid, fr, fhi, hi - mid)
        err = left + right - whole
        if depth >= max_depth or abs(err) <= 15 * eps:
            total += left + right + err / 15
        else:
            stack.append((lo, mid, flo, fl, fmid, left, eps / 2, depth + 1))
            stack.append((mid, hi, fmid, fr, fhi, right, eps / 2, depth + 1))
    return total


def log_partition_bound(model: str, d: int, lambda_max: float, tol: float = 1e-10) -> float:
    """Per-vertex lower bound on log P_G(lambda_max): integral of alpha*(t)/t over (0, lambda_max]."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if lambda_max <= 0:
        raise ValueError("lambda_max must be positive")
    if model == "cubic":
        if d != 3:
            raise ValueError("cubic model requires d = 3")
        integrand = cubic_alpha_over_lambda
    elif model == "tfree":
        def integrand(t):
            return tf_alpha_over_lambda(d, t)
    else:
        raise ValueError(f"unknown model {model!r}")
    return adaptive_simpson(lambda t: float(integrand(Fraction(t))), 0.0, float(lambda_max), tol)


# ---------------------------------------------------------------------------
# reference values
# ---------------------------------------------------------------------------


def reference_occupancy(kind: str, d: int, lam: Fraction) -> Fraction:
    """Occupancy fraction of K_{d+1} ("clique") or K_{d,d} ("biclique")."""
    lam = Fraction(lam)
    if kind == "clique":
        return lam / (1 + (d + 1) * lam)
    if kind == "biclique":
        return lam * (1 + lam) ** (d - 1) / (2 * (1 + lam) ** d - 1)
    raise ValueError(f"unknown reference kind {kind!r}")


def shearer(d: int) -> Fraction:
    f = Fraction(1)
    for k in range(1, d + 1):
        f = (1 + (k * k - k) * f) / (k * k + 1)
    return f


def lambert_w(x: float) -> float:
    """Principal branch of the Lambert W function for x >= 0."""
    if x < 0:
        raise ValueError("lambert_w is only implemented for x >= 0")
    if x == 0:
        return 0.0
    w = math.log1p(x)
    for _ in range(100):
        ew = math.exp(w)
        step = (w * ew - x) / (ew * (w + 1))
        w -= step
        if abs(step) <= 1e-15 * max(1.0, abs(w)):
            break
    return w


def lambert_partition_constant() -> float:
    """exp((W(3 ln 2)^2 + 2 W(3 ln 2)) / 6)."""
    w = lambert_w(3 * math.log(2))
    return math.exp((w * w + 2 * w) / 6)


@lru_cache(maxsize=None)
def _petersen_polys() -> tuple[Polynomial, Polynomial]:
    return (independence_polynomial(generalized_petersen(5, 2)),
            independence_polynomial(generalized_petersen(7, 2)))


def conjecture_reference(lam: Fraction) -> float:
    """min(P_GP(5,2)(lam)^(1/10), P_GP(7,2)(lam)^(1/14))."""
    lam = Fraction(lam)
    p5, p7 = _petersen_polys()
    return math.exp(min(log_fraction(Fraction(p5(lam))) / 10,
                        log_fraction(Fraction(p7(lam))) / 14))


# ---------------------------------------------------------------------------
# corpus scan
# ---------------------------------------------------------------------------

CHECKS = ("main", "djpr", "tf-bound", "cubic-bound", "y3-bound", "conjecture", "equality-structure")
TRIANGLE_FREE_CHECKS = {"tf-bound", "cubic-bound", "y3-bound", "conjecture"}
CUBIC_CHECKS = {"cubic-bound", "y3-bound", "conjecture"}
CONJECTURE_SLACK = 1e-9


@dataclass(frozen=True)
class ScanRecord:
    graph_index: int
    graph6: str
    n: int
    d: int
    lam: Fraction
    check: str
    passed: bool
    lhs: str
    rhs: str

    def to_json(self) -> dict:
        return {
            "graph_index": self.graph_index,
            "graph6": self.graph6,
            "n": self.n,
            "d": self.d,
            "lambda": format_rational(self.lam),
            "check": self.check,
            "pass": self.passed,
            "lhs": self.lhs,
            "rhs": self.rhs,
        }


@dataclass
class ScanReport:
    records: list[ScanRecord] = field(default_factory=list)
    errors: list[tuple[int, str, str]] = field(default_factory=list)  # (index, graph6, message)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def failures(self) -> list[ScanRecord]:
        return [r for r in self.records if not r.passed]


def _fmt_float(x: float) -> str:
    return format(x, ".12g")


def _scan_one(args: tuple[int, Graph, tuple[Fraction, ...], tuple[str, ...]]):
    index, g, lambdas, checks = args
    g6 = write_graph6(g)
    d = regular_degree(g)
    if d is None or g.n == 0:
        return [], (index, g6, "graph is not regular")
    triangle_free = is_triangle_free(g)
    wanted = set(checks)
    if wanted & TRIANGLE_FREE_CHECKS and not triangle_free:
        return [], (index, g6, "graph has a triangle; triangle-free checks requested")
    if wanted & CUBIC_CHECKS and d != 3:
        return [], (index, g6, f"graph is {d}-regular; cubic checks requested")
    if "tf-bound" in wanted and d < 2:
        return [], (index, g6, "tf-bound needs d >= 2")

    poly = independence_polynomial(g)
    deriv = poly.derivative()
    cliques = is_disjoint_union_of_cliques(g)
    out = []

    def rec(lam, check, ok, lhs, rhs):
        out.append(ScanRecord(index, g6, g.n, d, lam, check, ok, lhs, rhs))

    for lam in lambdas:
        value = Fraction(poly(lam))
        alpha = lam * deriv(lam) / (g.n * value)
        lower = reference_occupancy("clique", d, lam)
        for check in checks:
            if check == "main":
                rec(lam, check, alpha >= lower, format_rational(alpha), format_rational(lower))
            elif check == "djpr":
                upper = reference_occupancy("biclique", d, lam)
                rec(lam, check, alpha <= upper, format_rational(alpha), format_rational(upper))
            elif check == "tf-bound":
                b = tf_alpha_bound(d, lam)
                rec(lam, check, alpha >= b, format_rational(alpha), format_rational(b))
            elif check == "cubic-bound":
                b = cubic_bound(lam).y0
                rec(lam, check, alpha >= b, format_rational(alpha), format_rational(b))
            elif check == "y3-bound":
                y3 = y_distribution(g, lam).y[3]
                b = (1 + lam) ** 3 / Fraction(t3_polynomial()(lam))
                rec(lam, check, y3 >= b, format_rational(y3), format_rational(b))
            elif check == "conjecture":
                lhs = math.exp(log_fraction(value) / g.n)
                rhs = conjecture_reference(lam)
                rec(lam, check, lhs >= rhs - CONJECTURE_SLACK, _fmt_float(lhs), _fmt_float(rhs))
            elif check == "equality-structure":
                equal = alpha == lower
                rec(lam, check, equal == cliques, str(equal).lower(), str(cliques).lower())
            else:
                raise ValueError(f"unknown check {check!r}")
    return out, None


def scan_check(graphs: Sequence[Graph], lambdas: Iterable[Fraction], checks: Iterable[str],
               jobs: int = 1) -> ScanReport:
    """Run the requested checks on every graph and fugacity.

    Records come back in input order whatever ``jobs`` is; graphs failing a
    precondition are reported in ``errors`` and skipped.
    """
    lams = tuple(Fraction(x) for x in lambdas)
    chosen = tuple(checks)
    unknown = [c for c in chosen if c not in CHECKS]
    if unknown:
        raise ValueError(f"unknown check(s): {', '.join(unknown)}")
    tasks = [(i, g, lams, chosen) for i, g in enumerate(graphs)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_scan_one, tasks, chunksize=8))
    else:
        results = [_scan_one(t) for t in tasks]
    report = ScanReport()
    for recs, err in results:
        report.records.extend(recs)
        if err:
            report.errors.append(err)
    return report
