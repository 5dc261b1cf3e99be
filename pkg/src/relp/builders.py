"""Constructors for the bounding programs and their duals.

Four program families:

* weak primal over a closure: one variable per closure string, one
  concatenation row per compatible pair, string-length box bounds;
* strong primal over a closure: one variable per closure member, rows for
  both concatenation- and union-compatible pairs;
* the relaxed program over the weight-block index (n, k), whose rows are
  indexed by block quadruples instead of explicit language pairs;
* a reduced formulation of the weak primal for single-1 blocks, which
  collapses the exponentially many subset rows into max-envelope
  variables without moving the optimum.

Every dual is produced by ``transpose_lp`` — a mechanical transpose of the
built primal — so primal and dual can only disagree if the transpose
itself is wrong, which the tests pin down separately.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .closure import BinomialIndex, Closure, product_block
from .lang import Language, binomial
from .lp import (
    GE,
    LE,
    LinearProgram,
    row_concat,
    row_quad,
    row_union,
    var_big_x,
    var_d,
    var_x,
)

ONE = Fraction(1)
MINUS_ONE = Fraction(-1)


def _accumulate(acc: dict[str, Fraction], name: str, delta: Fraction) -> None:
    c = acc.get(name, Fraction(0)) + delta
    if c:
        acc[name] = c
    else:
        acc.pop(name, None)


# -- weak program ---------------------------------------------------------------


def build_weak_primal(closure: Closure) -> LinearProgram:
    """Per-string program: max the mass on the base language's strings.

    Subject to, for every concatenation-compatible pair (K1, K2), the
    aggregated row  sum_{K1K2} x - sum_{K1} x - sum_{K2} x <= 0, with
    0 <= x_s <= |s|.  Coefficients accumulate, so a string appearing on
    both sides of a pair nets out.
    """
    lp = LinearProgram(sense="max")
    for s in closure.strings():
        lp.add_variable(var_x(s), 0, len(s))
    lp.set_objective({var_x(s): ONE for s in closure.base.members})
    for k1, k2 in closure.concat_pairs():
        acc: dict[str, Fraction] = {}
        for s in k1.concat(k2).members:
            _accumulate(acc, var_x(s), ONE)
        for u in k1.members:
            _accumulate(acc, var_x(u), MINUS_ONE)
        for v in k2.members:
            _accumulate(acc, var_x(v), MINUS_ONE)
        lp.add_row(row_concat(k1, k2), acc, LE, 0)
    return lp


# -- strong program -------------------------------------------------------------


def build_strong_primal(closure: Closure) -> LinearProgram:
    """Per-language program whose optimum is the exact minimal size.

    One variable per closure member; singletons are capped by their
    string's length, composite members are unbounded above.  Every
    concatenation- and union-compatible pair contributes a row.
    """
    lp = LinearProgram(sense="max")
    for k in closure.members:
        hi = len(k.only) if k.is_singleton else None
        lp.add_variable(var_big_x(k), 0, hi)
    lp.set_objective({var_big_x(closure.base): ONE})
    for k1, k2 in closure.concat_pairs():
        acc: dict[str, Fraction] = {}
        _accumulate(acc, var_big_x(k1.concat(k2)), ONE)
        _accumulate(acc, var_big_x(k1), MINUS_ONE)
        _accumulate(acc, var_big_x(k2), MINUS_ONE)
        lp.add_row(row_concat(k1, k2), acc, LE, 0)
    for k1, k2 in closure.union_pairs():
        acc = {}
        _accumulate(acc, var_big_x(k1.union(k2)), ONE)
        _accumulate(acc, var_big_x(k1), MINUS_ONE)
        _accumulate(acc, var_big_x(k2), MINUS_ONE)
        lp.add_row(row_union(k1, k2), acc, LE, 0)
    return lp


# -- relaxed program over weight blocks ------------------------------------------


def build_relaxed_binomial(n: int, k: int) -> LinearProgram:
    """The block-indexed relaxation: rows only for full block products.

    Variables are the strings of every block B(m, l) with m <= n and
    l <= min(m, k); for each quadruple (n1, k1, n2, k2) the row compares
    the product block's mass against its two factor blocks.  Objective:
    total mass on the top block B(n, k).
    """
    index = BinomialIndex(n, k)
    lp = LinearProgram(sense="max")
    for s in index.strings():
        lp.add_variable(var_x(s), 0, len(s))
    lp.set_objective({var_x(s): ONE for s in binomial(n, k).members})
    for n1, k1, n2, k2 in index.quadruples():
        acc: dict[str, Fraction] = {}
        for s in product_block(n1, k1, n2, k2):
            _accumulate(acc, var_x(s), ONE)
        for u in binomial(n1, k1).members:
            _accumulate(acc, var_x(u), MINUS_ONE)
        for v in binomial(n2, k2).members:
            _accumulate(acc, var_x(v), MINUS_ONE)
        lp.add_row(row_quad(n1, k1, n2, k2), acc, LE, 0)
    return lp


# -- reduced weak program for single-1 blocks -------------------------------------


def build_reduced_weak_primal_b_n1(n: int) -> LinearProgram:
    """An equivalent, polynomial-size stand-in for the weak program on B(n, 1).

    The weak program's rows range over every nonempty subset of a weight-1
    block paired with a run of 0s.  For a fixed split (a, b) those rows say
    exactly: for every subset S, sum_{s in S} (x_{s0^b} - x_s) <= x_{0^b}.
    That family is equivalent to introducing d_s >= max(0, x_{s0^b} - x_s)
    and capping sum_s d_s <= x_{0^b} — the binding subset is the one
    collecting the positive differences.  Mirrored for 0-runs on the left,
    plus the plain 0-run x 0-run rows.  The x-optimum (and value) matches
    the full program's.
    """
    if n < 1:
        raise ValueError("n must be positive")
    lp = LinearProgram(sense="max")
    zeros = ["0" * j for j in range(n + 1)]  # zeros[j] = 0^j
    for j in range(1, n + 1):
        lp.add_variable(var_x(zeros[j]), 0, j)
    weight1: dict[int, tuple[str, ...]] = {
        m: binomial(m, 1).members for m in range(1, n + 1)
    }
    for m in range(1, n + 1):
        for s in weight1[m]:
            lp.add_variable(var_x(s), 0, m)
    # max-envelope variables, declared per split family
    for a in range(1, n):
        for b in range(1, n - a + 1):
            for s in weight1[a]:
                lp.add_variable(var_d("r", a, b, s), 0, None)
            for s in weight1[b]:
                lp.add_variable(var_d("l", a, b, s), 0, None)
    lp.set_objective({var_x(s): ONE for s in weight1[n]})

    for a in range(1, n):
        for b in range(a, n - a + 1):  # unordered: (a,b) and (b,a) rows coincide
            lp.add_row(
                row_concat(Language([zeros[a]]), Language([zeros[b]])),
                {
                    var_x(zeros[a + b]): ONE,
                    var_x(zeros[a]): Fraction(-1) if a != b else Fraction(-2),
                    **({var_x(zeros[b]): MINUS_ONE} if a != b else {}),
                },
                LE,
                0,
            )
    for a in range(1, n):
        for b in range(1, n - a + 1):
            cap_r: dict[str, Fraction] = {var_x(zeros[b]): MINUS_ONE}
            for s in weight1[a]:
                d = var_d("r", a, b, s)
                lp.add_row(
                    f"split[r,{a},{b},{s}]",
                    {var_x(s + zeros[b]): ONE, var_x(s): MINUS_ONE, d: MINUS_ONE},
                    LE,
                    0,
                )
                cap_r[d] = ONE
            lp.add_row(f"cap[r,{a},{b}]", cap_r, LE, 0)
            cap_l: dict[str, Fraction] = {var_x(zeros[a]): MINUS_ONE}
            for s in weight1[b]:
                d = var_d("l", a, b, s)
                lp.add_row(
                    f"split[l,{a},{b},{s}]",
                    {var_x(zeros[a] + s): ONE, var_x(s): MINUS_ONE, d: MINUS_ONE},
                    LE,
                    0,
                )
                cap_l[d] = ONE
            lp.add_row(f"cap[l,{a},{b}]", cap_l, LE, 0)
    return lp


# -- mechanical transpose ---------------------------------------------------------


def transpose_lp(
    lp: LinearProgram,
    row_var: Callable[[str], str],
    bound_var: Callable[[str], str],
    dual_row: Callable[[str], str],
) -> LinearProgram:
    """The dual of a (max, all-<=, lower-bounds-0) program.

    Row i with rhs b_i gets multiplier y_i >= 0; a finite upper bound u_j
    gets multiplier v_j >= 0.  The dual minimizes b.y + u.v subject to,
    for every primal variable j,  sum_i A_ij y_i + v_j >= c_j.  The three
    callbacks choose the dual names: row_var maps a row label to its
    multiplier's name, bound_var maps a bounded variable to its bound
    multiplier's name, dual_row labels the row transposed from a variable.
    """
    if lp.sense != "max":
        raise ValueError("transpose_lp expects a max program")
    dual = LinearProgram(sense="min")
    objective: dict[str, Fraction] = {}
    columns: dict[str, dict[str, Fraction]] = {name: {} for name in lp.variables}
    for row in lp.rows:
        if row.rel != LE:
            raise ValueError(f"transpose_lp expects <= rows, got {row.rel} in {row.label}")
        y = dual.add_variable(row_var(row.label), 0, None)
        if row.rhs:
            objective[y] = row.rhs
        for name, c in row.coeffs.items():
            columns[name][y] = c
    for name in lp.variables:
        lo, hi = lp.bounds[name]
        if lo != 0:
            raise ValueError(f"transpose_lp expects lower bounds 0, got {lo} on {name}")
        if hi is not None:
            v = dual.add_variable(bound_var(name), 0, None)
            columns[name][v] = ONE
            if hi:
                objective[v] = hi
    dual.set_objective(objective)
    for name in lp.variables:
        dual.add_row(dual_row(name), columns[name], GE, lp.objective.get(name, 0))
    return dual


def _strip_tag(tagged: str) -> str:
    return tagged[tagged.index("[") :]


def _weak_row_var(label: str) -> str:
    return "y" + _strip_tag(label)


def _weak_bound_var(name: str) -> str:
    return "w" + _strip_tag(name)


def _weak_dual_row(name: str) -> str:
    return "s" + _strip_tag(name)


def build_weak_dual(closure: Closure) -> LinearProgram:
    """min sum |s| w_s  s.t.  per string s:  w_s + sum_pairs A y >= [s in base]."""
    return transpose_lp(
        build_weak_primal(closure), _weak_row_var, _weak_bound_var, _weak_dual_row
    )


def _strong_row_var(label: str) -> str:
    return ("Y" if label.startswith("c[") else "Z") + _strip_tag(label)


def _strong_bound_var(name: str) -> str:
    # X[{s}] -> W[s]; only singleton members carry a finite bound
    return "W[" + name[3:-2] + "]"


def _strong_dual_row(name: str) -> str:
    return "m" + _strip_tag(name)


def build_strong_dual(closure: Closure) -> LinearProgram:
    """min sum |s| W_s over concat (Y) and union (Z) multipliers."""
    return transpose_lp(
        build_strong_primal(closure), _strong_row_var, _strong_bound_var, _strong_dual_row
    )


def build_relaxed_binomial_dual(n: int, k: int) -> LinearProgram:
    """min sum |s| w_s with one y per block quadruple."""
    return transpose_lp(
        build_relaxed_binomial(n, k), _weak_row_var, _weak_bound_var, _weak_dual_row
    )
