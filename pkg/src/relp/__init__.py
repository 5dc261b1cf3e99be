"""Linear-programming bounds on the size of union/concatenation patterns."""

from .config import DEFAULT_CONFIG, ResourceCapError, RunConfig, load_config
from .lang import Language, all_strings, binomial, gen_family, singleton, threshold
from .regex import (
    Concat,
    Regex,
    RegexSyntaxError,
    Symbol,
    Union,
    ellul_b_n1,
    ellul_b_n1_length,
    ellul_bnk,
    ellul_t_n1,
    ellul_t_n1_length,
    language_of,
    length,
    parse,
    render,
)
from .closure import BinomialIndex, Closure, compute_closure, factorizations
from .lp import (
    Assignment,
    FeasibilityReport,
    LinearProgram,
    Row,
    SolutionFile,
    check_feasible,
    objective_value,
    read_lp,
    read_solution,
    write_lp,
    write_solution,
)
from .builders import (
    build_reduced_weak_primal_b_n1,
    build_relaxed_binomial,
    build_relaxed_binomial_dual,
    build_strong_dual,
    build_strong_primal,
    build_weak_dual,
    build_weak_primal,
    transpose_lp,
)
from .solver import HAVE_GMPY2, SolveResult, SolverError, certify_optimal, solve
from .certificates import (
    AlphaTable,
    CalibrationError,
    RelaxedDualCert,
    WeakDualCert,
    analytic_binomial1_primal,
    analytic_g,
    analytic_sigma_primal,
    analytic_threshold_strong,
    calibrate_alphas,
    certify_relaxed_dual,
    certify_weak_dual,
    check_weak_dual_support,
    g_objective,
    g_value,
    read_alpha_table,
    reduced_b1_assignment,
    relaxed_row_margin,
    write_alpha_table,
)
from .oracle import OracleLpReport, OracleResult, optimal_regex, oracle_vs_lp

__all__ = [
    "DEFAULT_CONFIG",
    "ResourceCapError",
    "RunConfig",
    "load_config",
    "Language",
    "all_strings",
    "binomial",
    "gen_family",
    "singleton",
    "threshold",
    "Concat",
    "Regex",
    "RegexSyntaxError",
    "Symbol",
    "Union",
    "ellul_b_n1",
    "ellul_b_n1_length",
    "ellul_bnk",
    "ellul_t_n1",
    "ellul_t_n1_length",
    "language_of",
    "length",
    "parse",
    "render",
    "BinomialIndex",
    "Closure",
    "compute_closure",
    "factorizations",
    "Assignment",
    "FeasibilityReport",
    "LinearProgram",
    "Row",
    "SolutionFile",
    "check_feasible",
    "objective_value",
    "read_lp",
    "read_solution",
    "write_lp",
    "write_solution",
    "build_reduced_weak_primal_b_n1",
    "build_relaxed_binomial",
    "build_relaxed_binomial_dual",
    "build_strong_dual",
    "build_strong_primal",
    "build_weak_dual",
    "build_weak_primal",
    "transpose_lp",
    "HAVE_GMPY2",
    "SolveResult",
    "SolverError",
    "certify_optimal",
    "solve",
    "AlphaTable",
    "CalibrationError",
    "RelaxedDualCert",
    "WeakDualCert",
    "analytic_binomial1_primal",
    "analytic_g",
    "analytic_sigma_primal",
    "analytic_threshold_strong",
    "calibrate_alphas",
    "certify_relaxed_dual",
    "certify_weak_dual",
    "check_weak_dual_support",
    "g_objective",
    "g_value",
    "read_alpha_table",
    "reduced_b1_assignment",
    "relaxed_row_margin",
    "write_alpha_table",
    "OracleLpReport",
    "OracleResult",
    "optimal_regex",
    "oracle_vs_lp",
]

__version__ = "0.1.0"
