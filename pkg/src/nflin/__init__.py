"""Resonant normal forms solved through their parent linear systems."""
from .algebra import GaussianRational, Poly, PolyExp, parse_poly
from .io import load_example, parse_system
from .normal_form import NormalFormSystem, rhs, system_from_coefficients
from .parent import NotClosed, build_parent, closure_analysis
from .resonance import enumerate_resonances
from .solver import integrate, verify_solution_symbolic
from .spectrum import JordanStructure, Spectrum, check_poincare

__all__ = [
    "GaussianRational", "Poly", "PolyExp", "parse_poly",
    "load_example", "parse_system",
    "NormalFormSystem", "rhs", "system_from_coefficients",
    "NotClosed", "build_parent", "closure_analysis",
    "enumerate_resonances", "integrate", "verify_solution_symbolic",
    "JordanStructure", "Spectrum", "check_poincare",
]
