"""Exact rational simplex with box bounds and built-in certification.

A two-phase, dense-tableau, bounded-variable primal simplex.  All
arithmetic is exact (gmpy2.mpq when available, Fraction otherwise), so
"optimal" here means: the returned point is feasible, the returned row
multipliers are dual-feasible, and the two objective values agree as
rational numbers.  ``solve`` refuses to report an optimum it cannot
certify that way.

Multiplier sign convention (what ``SolveResult.duals`` means): for a max
program a <= row carries y >= 0 and a >= row carries y <= 0; for a min
program the signs flip.  ``certify_optimal`` is the reference
implementation of that convention.

Programs with many more rows than variables are solved through their
mechanical transpose (the dual of the dual of a transposed program is
the program itself, so the transposed run's multipliers are the original
primal point).  The mapped-back solution is certified against the
original program; on any failure the direct path runs instead.

Pricing is Dantzig's rule; after ``stall_threshold`` consecutive
degenerate steps it permanently downgrades to Bland's rule, which cannot
cycle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .config import DEFAULT_CONFIG, RunConfig
from .lp import (
    GE,
    LE,
    Assignment,
    LinearProgram,
    check_feasible,
    objective_value,
)
from .builders import transpose_lp

try:
    from gmpy2 import mpq as _num

    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _num = Fraction
    HAVE_GMPY2 = False

AT_LO, AT_UP, BASIC = 0, 1, 2


class SolverError(RuntimeError):
    """The solver broke one of its own invariants; results were discarded."""


@dataclass
class SolveResult:
    status: str  # optimal | infeasible | unbounded | resource
    objective: Fraction | None = None
    assignment: Assignment | None = None
    duals: dict[str, Fraction] = field(default_factory=dict)
    iterations: int = 0
    transposed: bool = False
    ray: dict[str, Fraction] | None = None  # improving direction, if unbounded


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    return Fraction(int(v.numerator), int(v.denominator))


# -- certification --------------------------------------------------------------


def certify_optimal(
    lp: LinearProgram,
    assignment: Assignment,
    duals: Mapping[str, Fraction | int],
) -> tuple[bool, str]:
    """Verify a primal/dual pair proves optimality, by exact arithmetic.

    Checks: primal feasibility, multiplier signs, and that the dual
    objective (row multipliers against rhs, plus the bound terms implied
    by the reduced costs) equals the primal objective exactly.  Equality
    of the two objectives pins both points to the optimum; no trust in
    the solver is required.
    """
    if not assignment.exact:
        return False, "assignment is not exact"
    rep = check_feasible(lp, assignment, tolerance=0)
    if not rep.feasible:
        v = rep.violations[0]
        return False, f"primal infeasible ({v.kind} {v.where} by {v.amount})"
    known = {row.label for row in lp.rows}
    for label, y in duals.items():
        if label not in known and y:
            return False, f"multiplier for unknown row {label}"
    sgn = 1 if lp.sense == "max" else -1
    reduced: dict[str, Fraction] = {
        name: sgn * coef for name, coef in lp.objective.items()
    }
    dual_obj = Fraction(0)
    for row in lp.rows:
        y = Fraction(duals.get(row.label, 0))
        srel = 1 if row.rel == LE else -1
        yhat = sgn * srel * y
        if yhat < 0:
            return False, f"multiplier for row {row.label} has the wrong sign"
        if yhat:
            dual_obj += yhat * srel * row.rhs
            for name, coef in row.coeffs.items():
                reduced[name] = reduced.get(name, Fraction(0)) - yhat * srel * coef
    for name in lp.variables:
        rj = reduced.get(name, Fraction(0))
        lo, hi = lp.bounds[name]
        if rj > 0:
            if hi is None:
                return False, f"positive reduced cost on unbounded variable {name}"
            dual_obj += rj * hi
        elif rj < 0:
            dual_obj += rj * lo
    primal_obj = sgn * objective_value(lp, assignment)
    if dual_obj != primal_obj:
        return False, f"duality gap {_frac(dual_obj - primal_obj)}"
    return True, "ok"


# -- the tableau ------------------------------------------------------------------


class _Tableau:
    """Internal canonical form: max c.x, Ax <= b, 0 <= x <= u."""

    def __init__(self, lp: LinearProgram, rule: str, stall_threshold: int):
        labels = [row.label for row in lp.rows]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate row labels; solve needs them unique")
        self.lp = lp
        self.sgn = 1 if lp.sense == "max" else -1
        self.rule = "bland" if rule == "bland" else "dantzig"
        self.auto = rule == "auto"
        self.stall_threshold = stall_threshold
        self.iterations = 0

        n = len(lp.variables)
        m = len(lp.rows)
        self.n, self.m = n, m
        self.col_of = {name: j for j, name in enumerate(lp.variables)}
        self.lo = []
        self.u: list = []  # shifted upper bounds; None = unbounded
        for name in lp.variables:
            lo, hi = lp.bounds[name]
            self.lo.append(_num(lo.numerator, lo.denominator))
            if hi is None:
                self.u.append(None)
            else:
                span = hi - lo
                self.u.append(_num(span.numerator, span.denominator))
        self.u.extend([None] * m)  # slacks

        # c in internal (max) sign, over structural columns only
        self.c = [0] * n
        const = 0
        for name, coef in lp.objective.items():
            j = self.col_of[name]
            cj = _num(coef.numerator, coef.denominator) * self.sgn
            self.c[j] = cj
            const += cj * self.lo[j]
        self.const = const

        self.row_sign = []
        self.T: list[list] = []
        self.beta: list = []
        ncols = n + m
        for i, row in enumerate(lp.rows):
            srel = 1 if row.rel == LE else -1
            self.row_sign.append(srel)
            arr = [0] * ncols
            rhs = _num(row.rhs.numerator, row.rhs.denominator) * srel
            for name, coef in row.coeffs.items():
                j = self.col_of[name]
                v = _num(coef.numerator, coef.denominator) * srel
                arr[j] = v
                rhs -= v * self.lo[j]
            arr[n + i] = _num(1)
            self.T.append(arr)
            self.beta.append(rhs)

        self.basis = [n + i for i in range(m)]
        self.status = [AT_LO] * ncols
        for i in range(m):
            self.status[n + i] = BASIC
        self.frozen = [False] * ncols
        self.ncols = ncols
        self.d: list = []
        self.obj = 0
        self.stall = 0

    # -- phase handling -----------------------------------------------------

    def add_artificials(self) -> list[int]:
        """Negate infeasible rows and give each a +1 artificial column."""
        arts = []
        bad = [i for i in range(self.m) if self.beta[i] < 0]
        for i in bad:
            self.T[i] = [-v if v else 0 for v in self.T[i]]
            self.beta[i] = -self.beta[i]
            col = self.ncols
            for i2 in range(self.m):
                self.T[i2].append(_num(1) if i2 == i else 0)
            self.u.append(None)
            self.status.append(AT_LO)
            self.frozen.append(False)
            self.status[col] = BASIC
            self.basis[i] = col
            self.status[self.n + i] = AT_LO
            self.ncols += 1
            arts.append(col)
        return arts

    def set_costs(self, c_full: list) -> None:
        """Recompute the reduced-cost row and objective for new costs."""
        d = list(c_full) + [0] * (self.ncols - len(c_full))
        obj = 0
        # nonbasic columns parked at their upper bound (phase-1 flips)
        # contribute c_j u_j on top of the basic part c_B beta
        for j in range(min(self.ncols, len(c_full))):
            if self.status[j] == AT_UP and c_full[j]:
                obj += c_full[j] * self.u[j]
        for i in range(self.m):
            cb = c_full[self.basis[i]] if self.basis[i] < len(c_full) else 0
            if cb:
                obj += cb * self.beta[i]
                row = self.T[i]
                for j, tv in enumerate(row):
                    if tv:
                        nv = d[j] - cb * tv
                        d[j] = nv if nv else 0
        self.d = d
        self.obj = obj

    # -- pivoting -------------------------------------------------------------

    def _choose_entering(self):
        d, status, frozen = self.d, self.status, self.frozen
        bland = self.rule == "bland"
        best = None
        best_score = 0
        for j in range(self.ncols):
            if frozen[j]:
                continue
            st = status[j]
            if st == BASIC:
                continue
            dj = d[j]
            if st == AT_LO:
                if dj > 0:
                    if bland:
                        return j, 1
                    if dj > best_score:
                        best, best_score, best_sigma = j, dj, 1
            else:
                if dj < 0:
                    if bland:
                        return j, -1
                    if -dj > best_score:
                        best, best_score, best_sigma = j, -dj, -1
        if best is None:
            return None
        return best, best_sigma

    def _step(self) -> str | None:
        pick = self._choose_entering()
        if pick is None:
            return "optimal"
        j, sigma = pick
        T, beta, u, basis = self.T, self.beta, self.u, self.basis
        bland = self.rule == "bland"

        t = u[j]  # own-bound flip limit; None = unbounded
        leave_row = -1
        leave_to = AT_LO
        for i in range(self.m):
            a = T[i][j]
            if not a:
                continue
            da = a if sigma > 0 else -a
            if da > 0:
                lim = beta[i] / da
                to = AT_LO
            else:
                ub = u[basis[i]]
                if ub is None:
                    continue
                lim = (ub - beta[i]) / (-da)
                to = AT_UP
            if t is None or lim < t:
                t, leave_row, leave_to = lim, i, to
            elif lim == t and leave_row >= 0:
                if bland and basis[i] < basis[leave_row]:
                    leave_row, leave_to = i, to
        if t is None:
            self.unbounded_col = (j, sigma)
            return "unbounded"

        self.iterations += 1
        dj0 = self.d[j]
        if leave_row < 0:
            # bound flip: the entering variable crosses to its other bound
            delta = t if sigma > 0 else -t
            if delta:
                for i in range(self.m):
                    a = T[i][j]
                    if a:
                        nv = beta[i] - a * delta
                        beta[i] = nv if nv else 0
                self.obj += dj0 * delta
                self.stall = 0
            else:
                self._count_stall()
            self.status[j] = AT_UP if sigma > 0 else AT_LO
            return None

        if t:
            move = sigma * t
            for i in range(self.m):
                if i == leave_row:
                    continue
                a = T[i][j]
                if a:
                    nv = beta[i] - a * move
                    beta[i] = nv if nv else 0
            self.obj += dj0 * move
            self.stall = 0
        else:
            self._count_stall()

        prow = T[leave_row]
        p = prow[j]
        if p != 1:
            prow = [v / p if v else 0 for v in prow]
            T[leave_row] = prow
        beta[leave_row] = t if sigma > 0 else u[j] - t
        leaving = basis[leave_row]
        self.status[leaving] = leave_to
        basis[leave_row] = j
        self.status[j] = BASIC

        pnz = [(jj, v) for jj, v in enumerate(prow) if v]
        for i in range(self.m):
            if i == leave_row:
                continue
            row = T[i]
            f = row[j]
            if f:
                for jj, v in pnz:
                    nv = row[jj] - f * v
                    row[jj] = nv if nv else 0
        d = self.d
        f = d[j]
        if f:
            for jj, v in pnz:
                nv = d[jj] - f * v
                d[jj] = nv if nv else 0
        return None

    def _count_stall(self) -> None:
        self.stall += 1
        if self.auto and self.rule != "bland" and self.stall >= self.stall_threshold:
            self.rule = "bland"

    def run(self, budget: int) -> str:
        while True:
            if self.iterations >= budget:
                return "resource"
            out = self._step()
            if out is not None:
                return out


# -- solve proper -----------------------------------------------------------------


def _solve_direct(
    lp: LinearProgram, rule: str, budget: int, stall_threshold: int
) -> SolveResult:
    tab = _Tableau(lp, rule, stall_threshold)
    n, m = tab.n, tab.m

    if any(b < 0 for b in tab.beta):
        arts = tab.add_artificials()
        c1 = [0] * tab.ncols
        for col in arts:
            c1[col] = _num(-1)
        tab.set_costs(c1)
        out = tab.run(budget)
        if out == "resource":
            return SolveResult("resource", iterations=tab.iterations)
        if out == "unbounded":
            raise SolverError("phase 1 reported unbounded; its objective is capped")
        if tab.obj != 0:
            return SolveResult("infeasible", iterations=tab.iterations)
        for col in arts:
            tab.frozen[col] = True
            tab.u[col] = 0

    tab.set_costs(tab.c)
    tab.stall = 0
    out = tab.run(budget)
    if out == "resource":
        return SolveResult("resource", iterations=tab.iterations)
    if out == "unbounded":
        # recover the improving ray: the entering column's direction in x-space
        j, sigma = tab.unbounded_col
        ray: dict[str, Fraction] = {}
        if j < n:
            ray[lp.variables[j]] = Fraction(sigma)
        for i in range(m):
            b = tab.basis[i]
            if b < n:
                a = tab.T[i][j]
                if a:
                    ray[lp.variables[b]] = _frac(-sigma * a)
        return SolveResult("unbounded", iterations=tab.iterations, ray=ray)

    # extract primal values (unshifted) and row multipliers
    values: dict[str, Fraction] = {}
    row_of = {tab.basis[i]: i for i in range(m)}
    for name, j in tab.col_of.items():
        st = tab.status[j]
        if st == BASIC:
            shifted = tab.beta[row_of[j]]
        elif st == AT_UP:
            shifted = tab.u[j]
        else:
            shifted = 0
        values[name] = _frac(shifted) + _frac(tab.lo[j])
    duals: dict[str, Fraction] = {}
    for i, row in enumerate(lp.rows):
        yhat = -tab.d[n + i] if tab.d[n + i] else 0
        if yhat:
            duals[row.label] = _frac(tab.sgn * tab.row_sign[i] * yhat)
    assignment = Assignment.from_rationals(values)
    objective = _frac(tab.sgn * (tab.obj + tab.const))

    ok, why = certify_optimal(lp, assignment, duals)
    if not ok:
        raise SolverError(f"optimum failed self-certification: {why}")
    if objective != objective_value(lp, assignment):
        raise SolverError("tableau objective drifted from recomputed objective")
    return SolveResult(
        "optimal",
        objective=objective,
        assignment=assignment,
        duals=duals,
        iterations=tab.iterations,
    )


def _row_generation_worthwhile(lp: LinearProgram) -> bool:
    return lp.n_rows > 1000 and lp.n_rows > 8 * lp.n_vars


def _solve_row_generation(
    lp: LinearProgram,
    rule: str,
    budget: int,
    stall_threshold: int,
    batch: int = 300,
    max_rounds: int = 200,
) -> SolveResult:
    """Solve against a growing working set of rows.

    Each round solves the program restricted to the active rows, then
    scans the inactive ones against the candidate point (or against the
    improving ray, if the restriction was unbounded) and activates the
    most violated.  A round with no violations ends it: the restricted
    optimum is feasible for everything, and its multipliers — zero on
    every inactive row — certify optimality of the full program.
    """
    labels = [row.label for row in lp.rows]
    if len(set(labels)) != len(labels):
        raise ValueError("duplicate row labels; solve needs them unique")
    active: list = []
    active_idx: set[int] = set()
    iterations = 0
    for _ in range(max_rounds):
        sub = LinearProgram(
            sense=lp.sense,
            variables=lp.variables,
            bounds=lp.bounds,
            objective=lp.objective,
            rows=list(active),
        )
        res = _solve_direct(sub, rule, budget, stall_threshold)
        iterations += res.iterations
        if res.status == "optimal":
            values = res.assignment.values
            found: list[tuple[Fraction, int]] = []
            for idx, row in enumerate(lp.rows):
                if idx in active_idx:
                    continue
                lhs = sum(
                    (c * values[name] for name, c in row.coeffs.items() if name in values),
                    Fraction(0),
                )
                amt = lhs - row.rhs if row.rel == LE else row.rhs - lhs
                if amt > 0:
                    found.append((amt, idx))
            if not found:
                ok, why = certify_optimal(lp, res.assignment, res.duals)
                if not ok:
                    raise SolverError(f"row generation failed certification: {why}")
                return SolveResult(
                    "optimal",
                    objective=res.objective,
                    assignment=res.assignment,
                    duals=res.duals,
                    iterations=iterations,
                )
        elif res.status == "unbounded":
            ray = res.ray or {}
            found = []
            for idx, row in enumerate(lp.rows):
                if idx in active_idx:
                    continue
                along = sum(
                    (c * ray[name] for name, c in row.coeffs.items() if name in ray),
                    Fraction(0),
                )
                amt = along if row.rel == LE else -along
                if amt > 0:
                    found.append((amt, idx))
            if not found:
                return SolveResult("unbounded", iterations=iterations, ray=res.ray)
        else:  # infeasible with fewer rows stays infeasible; resource is resource
            res.iterations = iterations
            return res
        found.sort(key=lambda pair: (-pair[0], pair[1]))
        for _, idx in found[:batch]:
            active.append(lp.rows[idx])
            active_idx.add(idx)
    return SolveResult("resource", iterations=iterations)


def _transpose_worthwhile(lp: LinearProgram) -> bool:
    if lp.sense != "max" or lp.n_rows < 64 or lp.n_rows <= 2 * lp.n_vars:
        return False
    if any(row.rel != LE for row in lp.rows):
        return False
    return all(lo == 0 for lo, _ in lp.bounds.values())


def _try_transposed(
    lp: LinearProgram, rule: str, budget: int, stall_threshold: int
) -> SolveResult | None:
    try:
        dual = transpose_lp(
            lp,
            row_var=lambda label: "y#" + label,
            bound_var=lambda name: "v#" + name,
            dual_row=lambda name: "r#" + name,
        )
    except ValueError:
        return None
    res = _solve_direct(dual, rule, budget, stall_threshold)
    if res.status == "resource":
        return res
    if res.status != "optimal":
        return None  # statuses don't map one-to-one; let the direct path decide
    values = {
        name: res.duals.get("r#" + name, Fraction(0)) for name in lp.variables
    }
    assignment = Assignment.from_rationals(values)
    duals = {
        row.label: res.assignment.values["y#" + row.label]
        for row in lp.rows
        if res.assignment.values["y#" + row.label]
    }
    ok, _why = certify_optimal(lp, assignment, duals)
    if not ok:
        return None
    return SolveResult(
        "optimal",
        objective=res.objective,
        assignment=assignment,
        duals=duals,
        iterations=res.iterations,
        transposed=True,
    )


def solve(
    lp: LinearProgram,
    config: RunConfig | None = None,
    *,
    pivot_rule: str | None = None,
    max_pivots: int | None = None,
    stall_threshold: int | None = None,
    transpose: str = "auto",
    row_generation: str = "auto",
) -> SolveResult:
    """Solve to a certified optimum (or infeasible/unbounded/resource).

    row_generation: "auto" attacks programs with vastly more rows than
    variables through a growing working set of rows.  transpose: "auto"
    solves remaining wide programs through their mechanical dual,
    falling back to the direct path if the mapped-back solution fails
    certification.  "never"/"always" force either path.
    """
    cfg = config or DEFAULT_CONFIG
    rule = pivot_rule if pivot_rule is not None else cfg.pivot_rule
    if rule not in ("auto", "bland", "dantzig"):
        raise ValueError(f"unknown pivot rule {rule!r}")
    budget = max_pivots if max_pivots is not None else cfg.solver_max_pivots
    stall = stall_threshold if stall_threshold is not None else cfg.stall_threshold
    if transpose not in ("auto", "never", "always"):
        raise ValueError(f"unknown transpose mode {transpose!r}")
    if row_generation not in ("auto", "never", "always"):
        raise ValueError(f"unknown row generation mode {row_generation!r}")
    if row_generation == "always" or (
        row_generation == "auto" and _row_generation_worthwhile(lp)
    ):
        return _solve_row_generation(lp, rule, budget, stall)
    if transpose == "always" or (transpose == "auto" and _transpose_worthwhile(lp)):
        res = _try_transposed(lp, rule, budget, stall)
        if res is not None:
            return res
    return _solve_direct(lp, rule, budget, stall)
