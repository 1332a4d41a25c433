"""Admissions arguments checked by exact integer feasibility."""
from .arguments import (ADDITIVE, GENDERS, MULTIPLICATIVE, AdmissionsData, build_arg1, build_arg2,
                        disjunct_bounds, rate_ratio)
from .ilp import (FEASIBLE, INFEASIBLE, BudgetExceeded, Constraint, FeasibilityResult, IlpInstance,
                  Variable, solve_ilp, solve_lp)
from .verify import verify_berkeley
