"""Cubic Thue equations |F(x, y)| = 1 with positive discriminant.

Covariants and reduction of binary cubic forms, resolvent forms and the
(t, s) logarithmic coordinates of solutions, gap principles, the unit lattice
of Z[theta], Matveev-type threshold computations and an exhaustive solver.
"""

from .errors import ThueError
from .forms import BinaryCubicForm, QuadraticForm, UnimodularMap, discriminant, hessian, reduce
from .solver import analyze_form, enumerate_solutions, family_form

__all__ = [
    "BinaryCubicForm",
    "QuadraticForm",
    "ThueError",
    "UnimodularMap",
    "analyze_form",
    "discriminant",
    "enumerate_solutions",
    "family_form",
    "hessian",
    "reduce",
]

__version__ = "0.1.0"
