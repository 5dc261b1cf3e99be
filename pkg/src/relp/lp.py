"""Sparse linear programs over exact rationals, plus their text form.

Programs are kept deliberately dumb: a sense, an ordered variable list
with box bounds, a sparse objective, and a list of labeled sparse rows
(<= or >=).  Builders emit rows one-to-one with the defining index sets;
nothing is simplified on the way in.  ``dedupe_rows`` is the only
reduction offered, and it removes exact structural duplicates only.

Text formats (both line-oriented, whitespace-separated, rationals as
``p/q``):

LP files::

    relp-lp v1
    sense max
    var x[00] in [0, 2]
    obj 1 x[00] 1 x[000]
    row c[{0},{0}]: 1 x[00] -2 x[0] <= 0

Solution files::

    status optimal
    objective 4
    x[00] = 2

Solution values may also be decimal floats (for the analytic assignments,
which live in float arithmetic); a file mixing the two is read as float.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .lang import Language

Rat = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)

FORMAT_HEADER = "relp-lp v1"

LE = "<="
GE = ">="


# -- variable and row naming --------------------------------------------------
#
# These little formatters are the whole naming contract: solution files,
# certificates and tests all meet through them.

def var_x(s: str) -> str:
    return f"x[{s}]"


def var_big_x(lang: Language) -> str:
    return f"X[{lang.serialize()}]"


def var_w(s: str) -> str:
    return f"w[{s}]"


def var_big_w(s: str) -> str:
    return f"W[{s}]"


def var_y_pair(k1: Language, k2: Language) -> str:
    return f"y[{k1.serialize()},{k2.serialize()}]"


def var_y_quad(n1: int, k1: int, n2: int, k2: int) -> str:
    return f"y[{n1},{k1},{n2},{k2}]"


def var_big_y(k1: Language, k2: Language) -> str:
    return f"Y[{k1.serialize()},{k2.serialize()}]"


def var_big_z(k1: Language, k2: Language) -> str:
    return f"Z[{k1.serialize()},{k2.serialize()}]"


def var_d(side: str, a: int, b: int, s: str) -> str:
    return f"d[{side},{a},{b},{s}]"


def row_concat(k1: Language, k2: Language) -> str:
    return f"c[{k1.serialize()},{k2.serialize()}]"


def row_union(k1: Language, k2: Language) -> str:
    return f"u[{k1.serialize()},{k2.serialize()}]"


def row_quad(n1: int, k1: int, n2: int, k2: int) -> str:
    return f"q[{n1},{k1},{n2},{k2}]"


def row_string(s: str) -> str:
    return f"s[{s}]"


def row_member(lang: Language) -> str:
    return f"m[{lang.serialize()}]"


# -- model ---------------------------------------------------------------------


@dataclass
class Row:
    label: str
    coeffs: dict[str, Fraction]
    rel: str
    rhs: Fraction

    def signature(self) -> tuple:
        return (
            tuple(sorted((v, c) for v, c in self.coeffs.items() if c != 0)),
            self.rel,
            self.rhs,
        )


@dataclass
class LinearProgram:
    sense: str  # "max" or "min"
    variables: list[str] = field(default_factory=list)
    bounds: dict[str, tuple[Fraction, Fraction | None]] = field(default_factory=dict)
    objective: dict[str, Fraction] = field(default_factory=dict)
    rows: list[Row] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.sense not in ("max", "min"):
            raise ValueError(f"sense must be max or min, got {self.sense!r}")

    def add_variable(
        self, name: str, lo: Fraction | int = ZERO, hi: Fraction | int | None = None
    ) -> str:
        if name in self.bounds:
            raise ValueError(f"variable {name} declared twice")
        lo = Fraction(lo)
        hi = Fraction(hi) if hi is not None else None
        if hi is not None and hi < lo:
            raise ValueError(f"empty bound interval for {name}: [{lo}, {hi}]")
        self.variables.append(name)
        self.bounds[name] = (lo, hi)
        return name

    def add_row(
        self,
        label: str,
        coeffs: Mapping[str, Fraction | int],
        rel: str,
        rhs: Fraction | int,
    ) -> None:
        if rel not in (LE, GE):
            raise ValueError(f"relation must be {LE} or {GE}, got {rel!r}")
        clean: dict[str, Fraction] = {}
        for name, c in coeffs.items():
            if name not in self.bounds:
                raise ValueError(f"row {label} references undeclared variable {name}")
            c = Fraction(c)
            if c != 0:
                clean[name] = c
        self.rows.append(Row(label, clean, rel, Fraction(rhs)))

    def set_objective(self, coeffs: Mapping[str, Fraction | int]) -> None:
        for name in coeffs:
            if name not in self.bounds:
                raise ValueError(f"objective references undeclared variable {name}")
        self.objective = {n: Fraction(c) for n, c in coeffs.items() if c != 0}

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def dedupe_rows(self) -> "LinearProgram":
        """A copy without structurally duplicate rows (first label wins).

        Builders emit one row per index-set element, so symmetric pairs
        produce literal duplicates; this is the only reduction we allow
        ourselves before solving.
        """
        seen: set[tuple] = set()
        rows = []
        for row in self.rows:
            sig = row.signature()
            if sig not in seen:
                seen.add(sig)
                rows.append(row)
        return LinearProgram(
            sense=self.sense,
            variables=list(self.variables),
            bounds=dict(self.bounds),
            objective=dict(self.objective),
            rows=rows,
        )


# -- assignments and feasibility ----------------------------------------------


@dataclass
class Assignment:
    """Variable values, exact (Fraction) or floating point.

    Variables absent from ``values`` count as 0: certificates and
    analytic solutions have sparse support by construction.
    """

    values: Mapping[str, Fraction] | Mapping[str, float]
    exact: bool = True

    @classmethod
    def from_rationals(cls, values: Mapping[str, Fraction | int]) -> "Assignment":
        return cls({k: Fraction(v) for k, v in values.items()}, exact=True)

    @classmethod
    def from_floats(cls, values: Mapping[str, float]) -> "Assignment":
        return cls(dict(values), exact=False)

    def get(self, name: str):
        v = self.values.get(name)
        if v is None:
            return ZERO if self.exact else 0.0
        return v

    def __len__(self) -> int:
        return len(self.values)


@dataclass
class Violation:
    kind: str  # "row" | "lower" | "upper"
    where: str  # row label or variable name
    amount: Fraction | float


@dataclass
class FeasibilityReport:
    feasible: bool
    violations: list[Violation]
    objective: Fraction | float
    unknown_names: tuple[str, ...] = ()

    def worst(self) -> Fraction | float:
        return max((v.amount for v in self.violations), default=ZERO)


def objective_value(lp: LinearProgram, assignment: Assignment) -> Fraction | float:
    if assignment.exact:
        return sum((c * assignment.get(n) for n, c in lp.objective.items()), ZERO)
    return sum(float(c) * assignment.get(n) for n, c in lp.objective.items())


def check_feasible(
    lp: LinearProgram, assignment: Assignment, tolerance: float | None = None
) -> FeasibilityReport:
    """Check an assignment against rows and bounds.

    tolerance=None means: exact comparison for exact assignments, 1e-9
    for float ones.  A violation is recorded with its (positive) amount.
    """
    if tolerance is None:
        tolerance = 0.0 if assignment.exact else 1e-9
    exact = assignment.exact
    tol = Fraction(tolerance) if exact else tolerance
    violations: list[Violation] = []

    for name in lp.variables:
        lo, hi = lp.bounds[name]
        v = assignment.get(name)
        lo_cmp = lo if exact else float(lo)
        if v < lo_cmp - tol:
            violations.append(Violation("lower", name, lo_cmp - v))
        if hi is not None:
            hi_cmp = hi if exact else float(hi)
            if v > hi_cmp + tol:
                violations.append(Violation("upper", name, v - hi_cmp))

    for row in lp.rows:
        if exact:
            lhs = sum((c * assignment.get(n) for n, c in row.coeffs.items()), ZERO)
            rhs = row.rhs
        else:
            lhs = sum(float(c) * assignment.get(n) for n, c in row.coeffs.items())
            rhs = float(row.rhs)
        slack = rhs - lhs if row.rel == LE else lhs - rhs
        if slack < -tol:
            violations.append(Violation("row", row.label, -slack))

    unknown = tuple(sorted(set(assignment.values) - set(lp.bounds)))
    return FeasibilityReport(
        feasible=not violations,
        violations=violations,
        objective=objective_value(lp, assignment),
        unknown_names=unknown,
    )


# -- rational / float token helpers -------------------------------------------


def format_rational(q: Fraction) -> str:
    return str(q)  # Fraction renders as p/q or p


def parse_rational(tok: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational literal {tok!r}") from exc


_FLOAT_RE = re.compile(r"[.eE]")


def parse_value(tok: str) -> tuple[Fraction | float, bool]:
    """Parse a solution value; returns (value, is_exact)."""
    if _FLOAT_RE.search(tok) and "/" not in tok:
        return float(tok), False
    return parse_rational(tok), True


# -- LP text format -------------------------------------------------------------


def write_lp(lp: LinearProgram) -> str:
    lines = [FORMAT_HEADER, f"sense {lp.sense}"]
    for name in lp.variables:
        lo, hi = lp.bounds[name]
        hi_txt = "inf" if hi is None else format_rational(hi)
        lines.append(f"var {name} in [{format_rational(lo)}, {hi_txt}]")
    obj_parts = [f"{format_rational(c)} {n}" for n, c in lp.objective.items()]
    lines.append("obj " + " ".join(obj_parts) if obj_parts else "obj")
    for row in lp.rows:
        parts = [f"{format_rational(c)} {n}" for n, c in row.coeffs.items()]
        body = " ".join(parts) if parts else "0"
        lines.append(f"row {row.label}: {body} {row.rel} {format_rational(row.rhs)}")
    return "\n".join(lines) + "\n"


def read_lp(text: str) -> LinearProgram:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != FORMAT_HEADER:
        raise ValueError(f"expected header {FORMAT_HEADER!r}")
    if len(lines) < 2 or not lines[1].startswith("sense "):
        raise ValueError("expected a sense line after the header")
    sense = lines[1].split(maxsplit=1)[1]
    lp = LinearProgram(sense=sense)
    saw_obj = False
    for ln in lines[2:]:
        if ln.startswith("var "):
            m = re.fullmatch(r"var (\S+) in \[([^,\]]+), ([^\]]+)\]", ln)
            if not m:
                raise ValueError(f"bad var line: {ln!r}")
            name, lo_txt, hi_txt = m.group(1), m.group(2).strip(), m.group(3).strip()
            hi = None if hi_txt == "inf" else parse_rational(hi_txt)
            lp.add_variable(name, parse_rational(lo_txt), hi)
        elif ln == "obj" or ln.startswith("obj "):
            if saw_obj:
                raise ValueError("duplicate obj line")
            saw_obj = True
            toks = ln.split()[1:]
            if len(toks) % 2:
                raise ValueError(f"obj line has dangling token: {ln!r}")
            lp.set_objective(
                {toks[i + 1]: parse_rational(toks[i]) for i in range(0, len(toks), 2)}
            )
        elif ln.startswith("row "):
            head, sep, body = ln[4:].partition(": ")
            if not sep:
                raise ValueError(f"bad row line (missing label): {ln!r}")
            toks = body.split()
            if len(toks) < 2 or toks[-2] not in (LE, GE):
                raise ValueError(f"bad row line (missing relation): {ln!r}")
            rel, rhs = toks[-2], parse_rational(toks[-1])
            toks = toks[:-2]
            coeffs: dict[str, Fraction] = {}
            if toks == ["0"]:
                toks = []
            if len(toks) % 2:
                raise ValueError(f"row body has dangling token: {ln!r}")
            for i in range(0, len(toks), 2):
                name = toks[i + 1]
                coeffs[name] = coeffs.get(name, ZERO) + parse_rational(toks[i])
            lp.add_row(head, coeffs, rel, rhs)
        else:
            raise ValueError(f"unrecognized line: {ln!r}")
    if not saw_obj:
        raise ValueError("missing obj line")
    return lp


# -- solution text format --------------------------------------------------------


@dataclass
class SolutionFile:
    status: str  # optimal | infeasible | unbounded | resource | feasible
    objective: Fraction | float | None
    assignment: Assignment | None


def write_solution(sol: SolutionFile) -> str:
    lines = [f"status {sol.status}"]
    if sol.objective is not None:
        obj = sol.objective
        lines.append(
            f"objective {format_rational(obj) if isinstance(obj, Fraction) else repr(obj)}"
        )
    if sol.assignment is not None:
        exact = sol.assignment.exact
        for name, v in sol.assignment.values.items():
            txt = format_rational(v) if exact else repr(float(v))
            lines.append(f"{name} = {txt}")
    return "\n".join(lines) + "\n"


def read_solution(text: str) -> SolutionFile:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("status "):
        raise ValueError("expected a status line first")
    status = lines[0].split(maxsplit=1)[1]
    objective: Fraction | float | None = None
    values: dict[str, Fraction | float] = {}
    exact = True
    rest = lines[1:]
    if rest and rest[0].startswith("objective "):
        objective, obj_exact = parse_value(rest[0].split(maxsplit=1)[1])
        exact = exact and obj_exact
        rest = rest[1:]
    for ln in rest:
        name, sep, val_txt = ln.partition(" = ")
        if not sep:
            raise ValueError(f"bad solution line: {ln!r}")
        value, is_exact = parse_value(val_txt.strip())
        exact = exact and is_exact
        values[name.strip()] = value
    assignment: Assignment | None = None
    if values or status in ("optimal", "feasible"):
        if not exact:
            values = {k: float(v) for k, v in values.items()}
            if objective is not None:
                objective = float(objective)
        assignment = Assignment(values, exact=exact)
    return SolutionFile(status=status, objective=objective, assignment=assignment)
