"""Example-driven synthesis of bit-vector programs, pruned by forward/backward abstract interpretation."""

from .search import SearchConfig, Solution, Timeout, Unrealizable, solve
from .sygus import parse_problem, render_solution

__all__ = ["SearchConfig", "Solution", "Timeout", "Unrealizable", "solve", "parse_problem",
           "render_solution"]
__version__ = "0.1.0"
