"""Exact rational linear programming.

A dense two-phase simplex over ``Fraction`` with Bland's rule, builders for
the occupancy-fraction programs, the textbook dual, and a complementary
slackness checker.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graph import MAX_ENUMERATE_VERTICES, Graph, enumerate_nonisomorphic, write_graph6
from .hardcore import Polynomial, format_rational, independence_polynomial

MAX_DIM = 64

EQ, GE, LE = "==", ">=", "<="


class LpSizeError(ValueError):
    pass


class LpShapeError(ValueError):
    pass


@dataclass(frozen=True)
class Row:
    coeffs: tuple[Fraction, ...]
    sense: str
    rhs: Fraction
    label: str

    def activity(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * xi for a, xi in zip(self.coeffs, x)), Fraction(0))


@dataclass(frozen=True)
class LpProblem:
    sense: str  # "min" or "max"
    objective: tuple[Fraction, ...]
    rows: tuple[Row, ...]
    var_labels: tuple[str, ...]
    free: tuple[bool, ...] = ()
    name: str = ""

    def __post_init__(self):
        width = len(self.objective)
        if not self.free:
            object.__setattr__(self, "free", (False,) * width)
        if len(self.var_labels) != width or len(self.free) != width:
            raise LpShapeError("labels or free flags do not match the objective width")
        for r in self.rows:
            if len(r.coeffs) != width:
                raise LpShapeError(f"row {r.label!r} has width {len(r.coeffs)}, expected {width}")
            if r.sense not in (EQ, GE, LE):
                raise LpShapeError(f"unknown row sense {r.sense!r}")
        if self.sense not in ("min", "max"):
            raise LpShapeError(f"unknown objective sense {self.sense!r}")

    @property
    def row_labels(self) -> tuple[str, ...]:
        return tuple(r.label for r in self.rows)

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * xi for c, xi in zip(self.objective, x)), Fraction(0))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "sense": self.sense,
            "variables": [
                {"label": lab, "objective": format_rational(c), "free": fr}
                for lab, c, fr in zip(self.var_labels, self.objective, self.free)
            ],
            "rows": [
                {
                    "label": r.label,
                    "coeffs": [format_rational(a) for a in r.coeffs],
                    "sense": r.sense,
                    "rhs": format_rational(r.rhs),
                }
                for r in self.rows
            ],
        }


def make_problem(sense, objective, rows, var_labels, free=(), name="") -> LpProblem:
    """Build an LpProblem, coercing every number to Fraction.

    ``rows`` holds ``(coeffs, sense, rhs, label)`` tuples.
    """
    return LpProblem(
        sense,
        tuple(Fraction(c) for c in objective),
        tuple(Row(tuple(Fraction(a) for a in cs), s, Fraction(b), lab) for cs, s, b, lab in rows),
        tuple(var_labels),
        tuple(free),
        name,
    )


@dataclass(frozen=True)
class LpSolution:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: tuple[Fraction, ...] = ()
    duals: tuple[Fraction, ...] = ()
    objective: Fraction | None = None
    basis: tuple[str, ...] = ()
    var_labels: tuple[str, ...] = ()
    row_labels: tuple[str, ...] = ()

    def primal(self) -> dict[str, Fraction]:
        return dict(zip(self.var_labels, self.x))

    def dual(self) -> dict[str, Fraction]:
        return dict(zip(self.row_labels, self.duals))

    def to_json(self) -> dict:
        out: dict = {"status": self.status}
        if self.status == "optimal":
            out["objective"] = format_rational(self.objective)
            out["primal"] = {k: format_rational(v) for k, v in self.primal().items()}
            out["dual"] = {k: format_rational(v) for k, v in self.dual().items()}
            out["basis"] = list(self.basis)
        return out


# ---------------------------------------------------------------------------
# simplex
# ---------------------------------------------------------------------------

def _solve_square(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Gauss-Jordan solve of a nonsingular square system."""
    n = len(a)
    m = [row[:] + [rhs] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [v - f * w for v, w in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


class _Tableau:
    """Dense tableau for min c.x, A x = b, x >= 0, b >= 0.

    ``rows[i]`` holds the constraint coefficients followed by the rhs.
    """

    def __init__(self, a: list[list[Fraction]], b: list[Fraction], basis: list[int]):
        self.rows = [row[:] + [rhs] for row, rhs in zip(a, b)]
        self.basis = basis[:]
        self.ncols = len(a[0]) if a else 0

    def pivot(self, r: int, c: int) -> None:
        rows = self.rows
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        pr = rows[r]
        for i, row in enumerate(rows):
            if i != r and row[c] != 0:
                f = row[c]
                rows[i] = [v - f * w for v, w in zip(row, pr)]
        self.basis[r] = c

    def reduced_costs(self, cost: list[Fraction], allowed: int) -> list[Fraction]:
        red = cost[:allowed]
        for i, bi in enumerate(self.basis):
            cb = cost[bi]
            if cb:
                row = self.rows[i]
                red = [rj - cb * row[j] for j, rj in enumerate(red)]
        return red

    def run(self, cost: list[Fraction], allowed: int) -> str:
        """Bland's rule: lowest-index entering column, lowest-index leaving basic."""
        while True:
            red = self.reduced_costs(cost, allowed)
            enter = next((j for j in range(allowed) if red[j] < 0), None)
            if enter is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.rows):
                if row[enter] > 0:
                    ratio = row[-1] / row[enter]
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], enter)


def simplex_solve(p: LpProblem) -> LpSolution:
    """Two-phase exact simplex; returns primal values, row duals and basis.

    Duals ``y`` satisfy ``sum(rhs * y) == objective`` at optimality: free for
    equality rows, sign-constrained so that the dual of ``p`` is feasible.
    """
    nvar, nrow = len(p.objective), len(p.rows)
    if nvar > MAX_DIM or nrow > MAX_DIM:
        raise LpSizeError(f"LP has {nvar} variables and {nrow} rows; limit is {MAX_DIM}")

    # expanded columns: original vars (free ones split), then slack/surplus
    col_of: list[tuple[int, int]] = []  # (original var, sign)
    for j in range(nvar):
        col_of.append((j, 1))
        if p.free[j]:
            col_of.append((j, -1))
    labels = [p.var_labels[j] + ("-" if s < 0 else "") for j, s in col_of]
    nstruct = len(col_of)
    nslack = sum(r.sense != EQ for r in p.rows)
    ncols = nstruct + nslack

    a: list[list[Fraction]] = []
    b: list[Fraction] = []
    k = nstruct
    for r in p.rows:
        row = [r.coeffs[j] * s for j, s in col_of] + [Fraction(0)] * nslack
        if r.sense != EQ:
            row[k] = Fraction(-1 if r.sense == GE else 1)
            labels.append(f"slack[{r.label}]")
            k += 1
        a.append(row)
        b.append(r.rhs)

    sign = -1 if p.sense == "max" else 1
    cost = [sign * p.objective[j] * s for j, s in col_of] + [Fraction(0)] * nslack

    # phase 1: one artificial per row, rows flipped to nonnegative rhs
    a1, b1 = [], []
    for i, (row, rhs) in enumerate(zip(a, b)):
        f = -1 if rhs < 0 else 1
        a1.append([f * v for v in row] + [Fraction(int(i == t)) for t in range(nrow)])
        b1.append(f * rhs)
    tab = _Tableau(a1, b1, list(range(ncols, ncols + nrow)))
    phase1_cost = [Fraction(0)] * ncols + [Fraction(1)] * nrow
    tab.run(phase1_cost, ncols + nrow)
    if sum(tab.rows[i][-1] for i, bi in enumerate(tab.basis) if bi >= ncols) != 0:
        return LpSolution("infeasible", var_labels=p.var_labels, row_labels=p.row_labels)

    # drive zero-level artificials out; rows that cannot be pivoted are redundant
    keep = []
    for i in range(nrow):
        if tab.basis[i] >= ncols:
            c = next((j for j in range(ncols) if tab.rows[i][j] != 0), None)
            if c is None:
                continue
            tab.pivot(i, c)
        keep.append(i)
    tab.rows = [tab.rows[i] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]

    status = tab.run(cost + [Fraction(0)] * nrow, ncols)
    if status == "unbounded":
        return LpSolution("unbounded", var_labels=p.var_labels, row_labels=p.row_labels)

    xs = [Fraction(0)] * ncols
    for i, bi in enumerate(tab.basis):
        xs[bi] = tab.rows[i][-1]
    x = [Fraction(0)] * nvar
    for c, (j, s) in enumerate(col_of):
        x[j] += s * xs[c]

    # y^T B = c_B on the original (unflipped) kept rows; redundant rows get 0
    orig_cost = [p.objective[j] * s for j, s in col_of] + [Fraction(0)] * nslack
    bt = [[a[i][bc] for i in keep] for bc in tab.basis]
    yk = _solve_square(bt, [orig_cost[bc] for bc in tab.basis])
    duals = [Fraction(0)] * nrow
    for i, yi in zip(keep, yk):
        duals[i] = yi

    return LpSolution(
        "optimal",
        tuple(x),
        tuple(duals),
        p.value(x),
        tuple(labels[bc] for bc in sorted(tab.basis)),
        p.var_labels,
        p.row_labels,
    )


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def local_coefficients(h: Graph, d: int, lam: Fraction) -> tuple[Fraction, Fraction]:
    """(a_H, b_H) = (1/P_H, (1+lam) P'_H / (d P_H)) at ``lam``."""
    poly = independence_polynomial(h)
    value = Fraction(poly(lam))
    return 1 / value, (1 + lam) * poly.derivative()(lam) / (d * value)


def graph_label(h: Graph) -> str:
    return f"H[{write_graph6(h)}]"


def general_lp_graphs(d: int) -> list[Graph]:
    if not 1 <= d <= MAX_ENUMERATE_VERTICES:
        raise LpSizeError(f"general LP supports 1 <= d <= {MAX_ENUMERATE_VERTICES}, got {d}")
    return enumerate_nonisomorphic(d)


def build_lp_general(d: int, lam: Fraction) -> LpProblem:
    """Minimize occupancy over neighborly laws on graphs with at most d vertices.

    Variables are the probabilities p_H, ordered by (vertex count, canonical key).
    Rows: total mass ("A") and the neighborly identity ("B").
    """
    lam = Fraction(lam)
    graphs = general_lp_graphs(d)
    scale = lam / (2 * (1 + lam))
    ab = [local_coefficients(h, d, lam) for h in graphs]
    return make_problem(
        "min",
        [scale * (a + b) for a, b in ab],
        [
            ([1] * len(graphs), EQ, 1, "A"),
            ([a - b for a, b in ab], EQ, 0, "B"),
        ],
        [graph_label(h) for h in graphs],
        name=f"LP(d={d}, lambda={format_rational(lam)})",
    )


def _tf_rows(d: int, lam: Fraction) -> list[tuple]:
    return [
        ([1] * (d + 1), EQ, 1, "S"),
        ([i - d / (1 + lam) ** i for i in range(d + 1)], EQ, 0, "M"),
        ([1] + [-i * lam / (d * (1 + lam)) for i in range(1, d + 1)], GE, 0, "A"),
    ]


def build_lp_trianglefree(d: int, lam: Fraction) -> LpProblem:
    """Minimize E[Y] for the uncovered-neighbor count Y of a triangle-free d-regular graph.

    Rows: total mass, E[Y] = d E[(1+lam)^-Y], and y_0 >= alpha.
    """
    if d < 2:
        raise LpShapeError(f"triangle-free LP needs d >= 2, got {d}")
    lam = Fraction(lam)
    return make_problem(
        "min",
        range(d + 1),
        _tf_rows(d, lam),
        [f"y{i}" for i in range(d + 1)],
        name=f"LPP(d={d}, lambda={format_rational(lam)})",
    )


def build_lp_cubic(lam: Fraction, t3poly: Polynomial) -> LpProblem:
    """The cubic triangle-free program: LPP(3, lam) plus y_3 >= (1+lam)^3 / P_T3(lam)."""
    lam = Fraction(lam)
    big_lambda = (1 + lam) ** 3 / Fraction(t3poly(lam))
    return make_problem(
        "min",
        range(4),
        _tf_rows(3, lam) + [([0, 0, 0, 1], GE, big_lambda, "B")],
        [f"y{i}" for i in range(4)],
        name=f"cubic(lambda={format_rational(lam)})",
    )


# ---------------------------------------------------------------------------
# duality
# ---------------------------------------------------------------------------

def _require_builder_shape(p: LpProblem) -> None:
    if p.sense != "min" or any(p.free) or any(r.sense == LE for r in p.rows):
        raise LpShapeError("expected a min problem with =/>= rows and nonnegative variables")


def dual_of(p: LpProblem) -> LpProblem:
    """Textbook dual: max b.y subject to A^T y <= c.

    Dual variables are free for equality rows and nonnegative for >= rows,
    and carry the primal row labels.
    """
    _require_builder_shape(p)
    rows = [
        ([r.coeffs[j] for r in p.rows], LE, p.objective[j], p.var_labels[j])
        for j in range(len(p.objective))
    ]
    return make_problem(
        "max",
        [r.rhs for r in p.rows],
        rows,
        p.row_labels,
        [r.sense == EQ for r in p.rows],
        name=f"dual of {p.name}" if p.name else "dual",
    )


@dataclass(frozen=True)
class SlacknessEntry:
    kind: str  # primal-row, dual-sign, dual-row, primal-sign, pair
    pair: str
    slack: Fraction
    tight: bool
    violated: bool

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "pair": self.pair,
            "slack": format_rational(self.slack),
            "tight": self.tight,
            "violated": self.violated,
        }


@dataclass(frozen=True)
class SlacknessReport:
    entries: tuple[SlacknessEntry, ...]
    primal_objective: Fraction
    dual_objective: Fraction

    @property
    def violations(self) -> list[SlacknessEntry]:
        return [e for e in self.entries if e.violated]

    @property
    def holds(self) -> bool:
        return not self.violations

    def to_json(self) -> list[dict]:
        return [e.to_json() for e in self.entries]


def check_complementary_slackness(
    p: LpProblem, primal: Sequence[Fraction], dual: Sequence[Fraction]
) -> SlacknessReport:
    """Check primal feasibility, dual feasibility and every slackness pair exactly."""
    _require_builder_shape(p)
    if len(primal) != len(p.objective) or len(dual) != len(p.rows):
        raise LpShapeError("primal or dual vector has the wrong length")
    x = [Fraction(v) for v in primal]
    y = [Fraction(v) for v in dual]
    out: list[SlacknessEntry] = []

    for r, yi in zip(p.rows, y):
        slack = r.activity(x) - r.rhs
        bad = slack != 0 if r.sense == EQ else slack < 0
        out.append(SlacknessEntry("primal-row", r.label, slack, slack == 0, bad))
        if r.sense == GE:
            out.append(SlacknessEntry("dual-sign", r.label, yi, yi == 0, yi < 0))
            out.append(SlacknessEntry("pair", f"{r.label}~row", slack * yi, slack * yi == 0,
                                      slack > 0 and yi > 0))

    for j, (lab, c, xj) in enumerate(zip(p.var_labels, p.objective, x)):
        slack = c - sum((r.coeffs[j] * yi for r, yi in zip(p.rows, y)), Fraction(0))
        out.append(SlacknessEntry("dual-row", lab, slack, slack == 0, slack < 0))
        out.append(SlacknessEntry("primal-sign", lab, xj, xj == 0, xj < 0))
        out.append(SlacknessEntry("pair", f"{lab}~dual-row", slack * xj, slack * xj == 0,
                                  slack > 0 and xj > 0))

    dual_obj = sum((r.rhs * yi for r, yi in zip(p.rows, y)), Fraction(0))
    return SlacknessReport(tuple(out), p.value(x), dual_obj)


def dual_candidate(k: Graph, d: int, lam: Fraction) -> tuple[Fraction, Fraction]:
    """(A_K, B_K): the dual point making the empty graph and K tight.

    Uses the unscaled dual constraint A + B (a_H - b_H) <= a_H + b_H.
    """
    if k.n == 0:
        raise ValueError("dual candidate needs a nonempty graph")
    if k.n > d:
        raise ValueError(f"graph has {k.n} vertices, more than d={d}")
    lam = Fraction(lam)
    a, b = local_coefficients(k, d, lam)
    a_k = 2 * b / (1 - a + b)
    return a_k, 1 - a_k


def occupancy_ratio(k: Graph, lam: Fraction) -> Fraction:
    """p'(K) / mu(K): P(I nonempty) over E|I| for the hard-core law on K."""
    lam = Fraction(lam)
    poly = independence_polynomial(k)
    value = Fraction(poly(lam))
    nonempty = 1 - 1 / value
    mean = lam * poly.derivative()(lam) / value
    return nonempty / mean


def dual_candidate_from_ratio(k: Graph, d: int, lam: Fraction) -> Fraction:
    """A_K = 2 / (1 + (d lam / (1+lam)) p'(K)/mu(K))."""
    lam = Fraction(lam)
    return 2 / (1 + d * lam / (1 + lam) * occupancy_ratio(k, lam))
