"""Exact rational primitives: parsing, LP, convex hulls, polytope dimension and
vertex enumeration.

Everything here works on :class:`fractions.Fraction` and plain Python ints.
Nothing is ever rounded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Rational = Fraction
Vector = tuple  # tuple of Fraction

LE, EQ, GE, LT = "<=", "==", ">=", "<"


def rat(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: a float in a payoff table is almost always a bug.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            if int(den) == 0:
                raise ZeroDivisionError(f"zero denominator in {value!r}")
            return Fraction(int(num), int(den))
        if "." in text:
            return Fraction(text)
        return Fraction(int(text))
    raise TypeError(f"cannot convert {value!r} to a rational")


def fmt(q: Fraction) -> str:
    """Lossless text form, ``"p/q"`` or ``"p"``."""
    q = rat(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v) if a and b), Fraction(0))


# ---------------------------------------------------------------------------
# Linear programming
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearProgram:
    """``maximize`` (or minimize) ``objective . x`` subject to row constraints.

    ``bounds`` defaults to ``x >= 0`` for every variable; use ``(None, None)``
    for a free variable.
    """

    objective: tuple
    matrix: tuple
    rhs: tuple
    senses: tuple
    bounds: tuple | None = None
    maximize: bool = True

    def __post_init__(self):
        n = len(self.objective)
        if len(self.matrix) != len(self.rhs) or len(self.rhs) != len(self.senses):
            raise ValueError("constraint matrix, rhs and senses disagree in length")
        for row in self.matrix:
            if len(row) != n:
                raise ValueError("constraint row length differs from objective length")
        for s in self.senses:
            if s not in (LE, EQ, GE):
                raise ValueError(f"unknown constraint sense {s!r}")
        if self.bounds is not None and len(self.bounds) != n:
            raise ValueError("one bound pair per variable required")

    @classmethod
    def build(cls, objective, rows=(), bounds=None, maximize=True):
        """Convenience constructor from ``rows = [(coeffs, sense, rhs), ...]``."""
        objective = tuple(rat(c) for c in objective)
        matrix = tuple(tuple(rat(c) for c in coeffs) for coeffs, _, _ in rows)
        senses = tuple(s for _, s, _ in rows)
        rhs = tuple(rat(b) for _, _, b in rows)
        if bounds is not None:
            bounds = tuple(
                (None if lo is None else rat(lo), None if hi is None else rat(hi))
                for lo, hi in bounds
            )
        return cls(objective, matrix, rhs, senses, bounds, maximize)


OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    point: tuple | None = None

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Dense simplex tableau with Bland's rule.

    Rows are ``basis[i] = rhs[i] - sum_j T[i][j] x_j`` in the usual
    ``T x = b`` layout; the objective row holds reduced costs.
    """

    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        p = row[c]
        if p != 1:
            inv = 1 / p
            self.rows[r] = row = [v * inv if v else v for v in row]
            self.rhs[r] *= inv
        nz = [j for j, v in enumerate(row) if v]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[c]
            if f:
                for j in nz:
                    other[j] -= f * row[j]
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = c

    def optimize(self, cost: list[Fraction], allowed: int) -> bool:
        """Maximize ``cost . x`` over columns ``< allowed``. False if unbounded."""
        while True:
            # reduced cost of column j: cost_j - sum_i cost_{basis i} T[i][j]
            cb = [cost[b] for b in self.basis]
            in_basis = set(self.basis)
            entering = -1
            for j in range(allowed):
                if j in in_basis:
                    continue
                rc = cost[j] - sum((cb[i] * self.rows[i][j] for i in range(len(self.rows)) if cb[i] and self.rows[i][j]), Fraction(0))
                if rc > 0:
                    entering = j
                    break
            if entering < 0:
                return True
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], entering)


def _solve_standard(A: list[list[Fraction]], b: list[Fraction], c: list[Fraction]):
    """Maximize ``c.x`` s.t. ``A x = b, x >= 0`` with ``b >= 0``.

    Returns ``(status, value, x)``.
    """
    m = len(A)
    n = len(c)
    rows = [list(A[i]) + [Fraction(1) if k == i else Fraction(0) for k in range(m)] for i in range(m)]
    tab = _Tableau(rows, list(b), [n + i for i in range(m)])
    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    tab.optimize(phase1, n + m)
    infeas = sum((tab.rhs[i] for i in range(m) if tab.basis[i] >= n), Fraction(0))
    if infeas > 0:
        return INFEASIBLE, None, None
    # drive remaining (zero-level) artificials out of the basis
    drop = []
    for i in range(m):
        if tab.basis[i] >= n:
            col = next((j for j in range(n) if tab.rows[i][j] != 0), None)
            if col is None:
                drop.append(i)
            else:
                tab.pivot(i, col)
    for i in reversed(drop):
        del tab.rows[i]
        del tab.rhs[i]
        del tab.basis[i]
    cost = list(c) + [Fraction(0)] * m
    if not tab.optimize(cost, n):
        return UNBOUNDED, None, None
    x = [Fraction(0)] * n
    for i, bvar in enumerate(tab.basis):
        if bvar < n:
            x[bvar] = tab.rhs[i]
    return OPTIMAL, dot(c, x), x


def lp_solve(lp: LinearProgram) -> LPResult:
    """Solve ``lp`` exactly with a two-phase primal simplex (Bland's rule)."""
    n = len(lp.objective)
    bounds = lp.bounds if lp.bounds is not None else tuple((Fraction(0), None) for _ in range(n))

    # x_j = offset_j + sum_k coef * y_k with y >= 0
    columns: list[list[tuple[int, int]]] = []  # per original var: list of (y index, sign)
    offset: list[Fraction] = []
    extra_rows: list[tuple[dict, str, Fraction]] = []
    ny = 0
    for lo, hi in bounds:
        if lo is not None:
            columns.append([(ny, 1)])
            offset.append(lo)
            if hi is not None:
                if hi < lo:
                    return LPResult(INFEASIBLE)
                extra_rows.append(({ny: Fraction(1)}, LE, hi - lo))
            ny += 1
        elif hi is not None:
            columns.append([(ny, -1)])
            offset.append(hi)
            ny += 1
        else:
            columns.append([(ny, 1), (ny + 1, -1)])
            offset.append(Fraction(0))
            ny += 2

    def transform(coeffs: Sequence[Fraction]) -> tuple[dict, Fraction]:
        row: dict[int, Fraction] = {}
        shift = Fraction(0)
        for j, a in enumerate(coeffs):
            if not a:
                continue
            shift += a * offset[j]
            for k, s in columns[j]:
                row[k] = row.get(k, Fraction(0)) + a * s
        return row, shift

    constraints: list[tuple[dict, str, Fraction]] = []
    for coeffs, sense, b in zip(lp.matrix, lp.senses, lp.rhs):
        row, shift = transform(coeffs)
        constraints.append((row, sense, b - shift))
    constraints.extend(extra_rows)

    nslack = sum(1 for _, s, _ in constraints if s != EQ)
    width = ny + nslack
    A: list[list[Fraction]] = []
    b: list[Fraction] = []
    k = ny
    for row, sense, rhs in constraints:
        dense = [Fraction(0)] * width
        for j, v in row.items():
            dense[j] = v
        if sense == LE:
            dense[k] = Fraction(1)
            k += 1
        elif sense == GE:
            dense[k] = Fraction(-1)
            k += 1
        if rhs < 0:
            dense = [-v for v in dense]
            rhs = -rhs
        A.append(dense)
        b.append(rhs)

    obj_row, obj_shift = transform(lp.objective)
    sign = 1 if lp.maximize else -1
    c = [Fraction(0)] * width
    for j, v in obj_row.items():
        c[j] = sign * v

    status, _, y = _solve_standard(A, b, c)
    if status != OPTIMAL:
        return LPResult(status)
    x = []
    for j in range(n):
        val = offset[j]
        for kk, s in columns[j]:
            val += s * y[kk]
        x.append(val)
    value = dot(lp.objective, x)
    return LPResult(OPTIMAL, value, tuple(x))


def satisfies(lp: LinearProgram, x: Sequence[Fraction]) -> bool:
    """Exact feasibility check of a point against every constraint and bound."""
    for coeffs, sense, b in zip(lp.matrix, lp.senses, lp.rhs):
        v = dot(coeffs, x)
        if (sense == LE and v > b) or (sense == GE and v < b) or (sense == EQ and v != b):
            return False
    bounds = lp.bounds if lp.bounds is not None else tuple((Fraction(0), None) for _ in x)
    for (lo, hi), v in zip(bounds, x):
        if (lo is not None and v < lo) or (hi is not None and v > hi):
            return False
    return True


# ---------------------------------------------------------------------------
# Convex hulls
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HullResult:
    inside: bool
    weights: tuple | None = None


def in_convex_hull(point: Sequence, generators: Sequence[Sequence]) -> HullResult:
    """Decide whether ``point`` is a convex combination of ``generators``."""
    point = [rat(v) for v in point]
    gens = [[rat(v) for v in g] for g in generators]
    for g in gens:
        if len(g) != len(point):
            raise ValueError("dimension mismatch between point and generators")
    if not gens:
        return HullResult(False)
    for i, g in enumerate(gens):
        if g == point:
            w = [Fraction(0)] * len(gens)
            w[i] = Fraction(1)
            return HullResult(True, tuple(w))
    k = len(gens)
    rows = [([Fraction(1)] * k, EQ, Fraction(1))]
    for d in range(len(point)):
        rows.append(([g[d] for g in gens], EQ, point[d]))
    res = lp_solve(LinearProgram.build([0] * k, rows))
    if not res.optimal:
        return HullResult(False)
    return HullResult(True, res.point)


# ---------------------------------------------------------------------------
# Polytopes inside a simplex
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InequalityPolytope:
    """Points of the simplex over ``labels`` satisfying extra inequalities.

    Each inequality is ``(coeffs, bound, sense)`` meaning ``coeffs . x <= bound``
    (``sense == "<="``) or ``coeffs . x < bound`` (``sense == "<"``).
    """

    labels: tuple
    inequalities: tuple = ()

    def __post_init__(self):
        for coeffs, _, sense in self.inequalities:
            if len(coeffs) != len(self.labels):
                raise ValueError("inequality length differs from simplex dimension")
            if sense not in (LE, LT):
                raise ValueError(f"unsupported sense {sense!r}")

    @classmethod
    def simplex(cls, labels, inequalities=()):
        ineqs = tuple(
            (tuple(rat(c) for c in coeffs), rat(bound), sense) for coeffs, bound, sense in inequalities
        )
        return cls(tuple(labels), ineqs)

    def contains(self, x: Sequence[Fraction]) -> bool:
        if len(x) != len(self.labels) or any(v < 0 for v in x) or sum(x) != 1:
            return False
        for coeffs, bound, sense in self.inequalities:
            v = dot(coeffs, x)
            if v > bound or (sense == LT and v == bound):
                return False
        return True


@dataclass(frozen=True)
class PolytopeDimension:
    dimension: int  # -1 for empty
    full_dimensional: bool
    point: tuple | None = None

    @property
    def empty(self) -> bool:
        return self.dimension < 0


def _slack_program(p: InequalityPolytope, tight: Iterable[int] = ()) -> LinearProgram:
    """max s over the simplex with slack s on every non-tight inequality.

    Indices ``0..k-1`` are the simplex facets ``x_i >= 0``; ``k + r`` is the
    r-th extra inequality. Indices in ``tight`` are imposed as equalities.
    """
    k = len(p.labels)
    tight = set(tight)
    rows = [([1] * k + [0], EQ, 1)]
    for i in range(k):
        coeffs = [0] * (k + 1)
        coeffs[i] = 1
        if i in tight:
            rows.append((coeffs, EQ, 0))
        else:
            coeffs[k] = -1
            rows.append((coeffs, GE, 0))
    for r, (coeffs, bound, _) in enumerate(p.inequalities):
        if k + r in tight:
            rows.append((list(coeffs) + [0], EQ, bound))
        else:
            rows.append((list(coeffs) + [1], LE, bound))
    bounds = [(0, None)] * k + [(None, 1)]
    obj = [0] * k + [1]
    return LinearProgram.build(obj, rows, bounds)


def _rank(rows: list[list[Fraction]]) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def polytope_dimension(p: InequalityPolytope) -> PolytopeDimension:
    """Full-dimensionality test via slack maximization, dimension otherwise."""
    k = len(p.labels)
    res = lp_solve(_slack_program(p))
    if not res.optimal:
        return PolytopeDimension(-1, False)
    if res.value > 0:
        return PolytopeDimension(k - 1, True, tuple(res.point[:k]))
    # find implicit equalities one at a time; each is tight on the whole set
    n_ineq = k + len(p.inequalities)
    implicit = []
    for idx in range(n_ineq):
        probe = _slack_program_single(p, idx)
        r = lp_solve(probe)
        if not r.optimal:
            return PolytopeDimension(-1, False)
        if r.value <= 0:
            implicit.append(idx)
    for idx in implicit:
        if idx >= k and p.inequalities[idx - k][2] == LT:
            return PolytopeDimension(-1, False)
    eqs = [[Fraction(1)] * k]
    for idx in implicit:
        if idx < k:
            row = [Fraction(0)] * k
            row[idx] = Fraction(1)
        else:
            row = list(p.inequalities[idx - k][0])
        eqs.append(row)
    dim = k - _rank(eqs)
    r = lp_solve(_slack_program(p, implicit))
    point = tuple(r.point[:k]) if r.optimal else None
    return PolytopeDimension(dim, dim == k - 1, point)


def _slack_program_single(p: InequalityPolytope, idx: int) -> LinearProgram:
    """Maximize the slack of inequality ``idx`` alone over the polytope."""
    k = len(p.labels)
    rows = [([1] * k + [0], EQ, 1)]
    for i in range(k):
        coeffs = [0] * (k + 1)
        coeffs[i] = 1
        if i == idx:
            coeffs[k] = -1
        rows.append((coeffs, GE, 0))
    for r, (coeffs, bound, _) in enumerate(p.inequalities):
        rows.append((list(coeffs) + [1 if k + r == idx else 0], LE, bound))
    bounds = [(0, None)] * k + [(None, 1)]
    return LinearProgram.build([0] * k + [1], rows, bounds)


# ---------------------------------------------------------------------------
# Vertex enumeration (double description, integer arithmetic)
# ---------------------------------------------------------------------------


def _integer_row(row: Sequence[Fraction]) -> list[int]:
    den = 1
    for v in row:
        den = den * v.denominator // gcd(den, v.denominator)
    return [int(v * den) for v in row]


def _normalize(ray: list[int]) -> tuple:
    g = 0
    for v in ray:
        g = gcd(g, v)
    if g > 1:
        ray = [v // g for v in ray]
    return tuple(ray)


def positive_polytope_vertices(M: Sequence[Sequence[Fraction]]) -> list[tuple]:
    """Vertices of ``{x >= 0 : M x <= 1}`` (assumed bounded).

    Double description on the homogenized cone ``{(x, t) >= 0 : t - M x >= 0}``
    with combinatorial adjacency; exact and indifferent to degeneracy.
    The origin is included.
    """
    nvars = len(M[0]) if M else 0
    d = nvars + 1
    cons = [_integer_row([Fraction(0)] * nvars + [Fraction(1)])]
    # constraint list: the d orthant constraints first (indices 0..d-1)
    constraints = []
    for i in range(d):
        e = [0] * d
        e[i] = 1
        constraints.append(e)
    for row in M:
        constraints.append(_integer_row([-rat(v) for v in row] + [Fraction(1)]))
    del cons

    rays: list[tuple] = []
    zeros: list[int] = []
    for i in range(d):
        e = [0] * d
        e[i] = 1
        rays.append(tuple(e))
        zeros.append(((1 << d) - 1) & ~(1 << i))

    for ci in range(d, len(constraints)):
        a = constraints[ci]
        vals = [sum(x * y for x, y in zip(a, r) if x and y) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        bit = 1 << ci
        new_rays = [rays[i] for i in pos] + [rays[i] for i in zer]
        new_zeros = [zeros[i] for i in pos] + [zeros[i] | bit for i in zer]
        if neg and pos:
            all_z = zeros
            for p in pos:
                zp = zeros[p]
                for q in neg:
                    common = zp & zeros[q]
                    if bin(common).count("1") < d - 2:
                        continue
                    adjacent = True
                    for r in range(len(rays)):
                        if r != p and r != q and (all_z[r] & common) == common:
                            adjacent = False
                            break
                    if not adjacent:
                        continue
                    vp, vq = vals[p], vals[q]
                    ray = [vp * y - vq * x for x, y in zip(rays[p], rays[q])]
                    new_rays.append(_normalize(ray))
                    new_zeros.append(common | bit)
        rays, zeros = new_rays, new_zeros

    verts = set()
    for r in rays:
        t = r[-1]
        if t == 0:
            if any(r[:-1]):
                raise ValueError("polyhedron is unbounded")
            continue
        verts.add(tuple(Fraction(v, t) for v in r[:-1]))
    return sorted(verts)


def matrix_det(M: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by Gaussian elimination."""
    m = [[rat(v) for v in row] for row in M]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def solve_linear(M: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> tuple | None:
    """Solve a square system exactly; None if singular."""
    n = len(M)
    aug = [[rat(v) for v in row] + [rat(bb)] for row, bb in zip(M, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            return None
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [v / p for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * bb for a, bb in zip(aug[i], aug[c])]
    return tuple(row[-1] for row in aug)
