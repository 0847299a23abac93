"""Floating-point cross-checks: fixed-step RK4, numeric evaluation of closed
forms, and drift off the constraint manifold."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .algebra import Poly
from .normal_form import NormalFormSystem, PolynomialVectorField
from .parent import ParentSystem
from .solver import ClosedFormSolution, initial_symbol

DEFAULT_STEP = 1e-3
DEFAULT_TOL = 1e-8


class NonFinite(FloatingPointError):
    def __init__(self, time: float):
        super().__init__(f"trajectory left the finite range at t = {time:g}")
        self.time = time


class UnboundSymbol(KeyError):
    pass


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray         # shape (len(times), dim), complex
    step: float
    labels: tuple = ()
    method: str = "RK4"

    def component(self, label) -> np.ndarray:
        return self.states[:, self.labels.index(label)]

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "step": self.step,
            "labels": list(self.labels),
            "times": self.times.tolist(),
            "states": [[[z.real, z.imag] for z in row] for row in self.states],
        }


def _bind(p: Poly, bindings: Mapping[str, complex]) -> complex:
    try:
        return p.evaluate(bindings)
    except KeyError as exc:
        raise UnboundSymbol(f"no numeric value bound for symbol {exc.args[0]!r}") from None


class CompiledField:
    """Numeric evaluator for a polynomial vector field with bound parameters."""

    def __init__(self, field: PolynomialVectorField, bindings: Mapping[str, complex], sign: float = 1.0):
        self.variables = field.variables
        index = {v: i for i, v in enumerate(field.variables)}
        self.parts = []
        for comp in field.components:
            groups = comp.split(field.variables)
            if groups:
                exps = np.array(list(groups.keys()), dtype=int)
                coeffs = np.array([sign * _bind(c, bindings) for c in groups.values()], dtype=complex)
            else:
                exps = np.zeros((0, len(index)), dtype=int)
                coeffs = np.zeros(0, dtype=complex)
            self.parts.append((exps, coeffs))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        out = np.empty(len(self.parts), dtype=complex)
        for i, (exps, coeffs) in enumerate(self.parts):
            out[i] = coeffs @ np.prod(x ** exps, axis=1) if len(coeffs) else 0.0
        return out


def parent_matrix(ps: ParentSystem, bindings: Mapping[str, complex]) -> np.ndarray:
    d = ps.dimension
    b = np.zeros((d, d), dtype=complex)
    for (i, j), v in ps.entries.items():
        b[i, j] = _bind(v, bindings)
    return b


def _rhs_function(system, bindings, time_reverse: bool):
    sign = -1.0 if time_reverse else 1.0
    if isinstance(system, ParentSystem):
        b = sign * parent_matrix(system, bindings)
        return (lambda x: b @ x), system.labels
    if isinstance(system, NormalFormSystem):
        system = system.field_f()
    if isinstance(system, PolynomialVectorField):
        return CompiledField(system, bindings, sign), system.variables
    raise TypeError(f"cannot integrate {type(system).__name__}")


def rk4(f, x0: np.ndarray, t_end: float, step: float, labels=()) -> Trajectory:
    if step <= 0:
        raise ValueError("step must be positive")
    nsteps = int(round(t_end / step))
    if nsteps < 0 or abs(nsteps * step - t_end) > 1e-9 * max(1.0, abs(t_end)):
        raise ValueError("t_end must be a nonnegative multiple of step")
    states = np.empty((nsteps + 1, len(x0)), dtype=complex)
    x = np.asarray(x0, dtype=complex)
    states[0] = x
    h = step
    for k in range(nsteps):
        k1 = f(x)
        k2 = f(x + 0.5 * h * k1)
        k3 = f(x + 0.5 * h * k2)
        k4 = f(x + h * k3)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(x)):
            raise NonFinite((k + 1) * h)
        states[k + 1] = x
    times = np.arange(nsteps + 1) * h
    return Trajectory(times, states, step, tuple(labels))


def integrate_numeric(system, x0: Sequence[complex], t_end: float, step: float = DEFAULT_STEP,
                      bindings: Optional[Mapping[str, complex]] = None,
                      time_reverse: bool = False) -> Trajectory:
    """Classical RK4 on a polynomial field, a normal form system or a parent system.

    ``time_reverse`` integrates x' = -f(x) (or xi' = -B xi).
    """
    f, labels = _rhs_function(system, dict(bindings or {}), time_reverse)
    if len(x0) != len(labels):
        raise ValueError(f"initial point has {len(x0)} entries, expected {len(labels)}")
    with np.errstate(over="ignore", invalid="ignore"):
        return rk4(f, np.asarray(x0, dtype=complex), t_end, step, labels)


def solution_bindings(sol: ClosedFormSolution, x0: Sequence[complex],
                      parameters: Optional[Mapping[str, complex]] = None) -> dict:
    """Bind the solution's initial symbols (in order) and parameters."""
    out = dict(parameters or {})
    for sym, v in zip(sol.initial_symbols, x0):
        out[sym] = complex(v)
    return out


def _numeric_terms(f, bindings):
    return [(complex(lam), k, _bind(c, bindings)) for lam, k, c in f.records()]


def evaluate_solution(sol: ClosedFormSolution, bindings: Mapping[str, complex], t) -> np.ndarray:
    """Component values at time(s) t; shape (n,) for scalar t, (len(t), n) for arrays."""
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros((len(ts), len(sol.components)), dtype=complex)
    for i, (_, f) in enumerate(sol.components):
        for lam, k, a in _numeric_terms(f, bindings):
            out[:, i] += a * ts ** k * np.exp(lam * ts)
    return out[0] if np.ndim(t) == 0 else out


def compare(traj: Trajectory, sol: ClosedFormSolution, bindings: Mapping[str, complex]) -> float:
    """Max over samples and components of |trajectory - closed form|."""
    closed = evaluate_solution(sol, bindings, traj.times)
    labels = sol.labels
    if traj.labels:
        cols = [traj.labels.index(label) for label in labels]
    else:
        cols = list(range(len(labels)))
    return float(np.max(np.abs(traj.states[:, cols] - closed)))


def manifold_point(ps: ParentSystem, x0: Sequence[complex]) -> np.ndarray:
    """(x0, phi(x0)) on the constraint manifold."""
    x0 = np.asarray(x0, dtype=complex)
    mus = np.array(ps.monomials, dtype=int).reshape(ps.r, ps.n)
    w0 = np.prod(x0 ** mus, axis=1) if ps.r else np.zeros(0)
    return np.concatenate([x0, w0])


def constraint_values(ps: ParentSystem, states: np.ndarray) -> np.ndarray:
    """E^i = w^i - phi^i(x) for each row of ``states``; shape (samples, r)."""
    n = ps.n
    if not ps.r:
        return np.zeros((len(states), 0))
    mus = np.array(ps.monomials, dtype=int)
    x = states[:, :n]
    phi = np.prod(x[:, None, :] ** mus[None, :, :], axis=2)
    return states[:, n:] - phi


def manifold_drift(ps: ParentSystem, x0: Sequence[complex], t_end: float, step: float = DEFAULT_STEP,
                   bindings: Optional[Mapping[str, complex]] = None, time_reverse: bool = False) -> float:
    """max_t max_i |E^i(xi(t))| along the numeric parent trajectory from (x0, phi(x0))."""
    traj = integrate_numeric(ps, manifold_point(ps, x0), t_end, step, bindings, time_reverse)
    e = constraint_values(ps, traj.states)
    return float(np.max(np.abs(e))) if e.size else 0.0


def real_pair_to_complex(x: float, y: float) -> tuple:
    """Real coordinates (x, y) of a rotation pair -> complex coordinates (x + iy, x - iy)."""
    return (complex(x, y), complex(x, -y))
