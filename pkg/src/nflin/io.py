"""JSON system definitions.

A file looks like::

    {
      "name": "ex1_k2",
      "variables": ["x", "y"],
      "eigenvalues": [{"re": "1", "im": "0"}, {"re": "2", "im": "0"}],
      "superdiagonal": [0],
      "parameters": ["c1"],
      "coefficients": [{"mu": [2, 0], "alpha": 2, "c": "c1"}]
    }

Rationals are strings.  ``c`` and superdiagonal entries are expressions in
the declared parameters (``"c1"``, ``"-3/2"``, ``"a1 + i*b1"``); ``alpha`` is
1-based.
"""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .algebra import GaussianRational, Poly, parse_poly
from .normal_form import NonResonantCoefficient, NormalFormSystem
from .resonance import ResonantMonomial
from .spectrum import JordanStructure, Spectrum, validate_jordan


class SchemaError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _expr(value, path: str, parameters) -> Poly:
    if isinstance(value, bool):
        raise SchemaError(path, "expected a number or expression string")
    if isinstance(value, int):
        return Poly.constant(value)
    if isinstance(value, dict):
        try:
            return Poly.constant(GaussianRational.from_json(value))
        except ValueError as exc:
            raise SchemaError(path, str(exc)) from None
    if not isinstance(value, str):
        raise SchemaError(path, "expected a number or expression string")
    try:
        p = parse_poly(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(path, str(exc)) from None
    if parameters is not None:
        unknown = [s for s in p.symbols if s not in parameters]
        if unknown:
            raise SchemaError(path, f"undeclared symbols {unknown}")
    return p


def _list(obj, key, path):
    value = obj.get(key)
    if not isinstance(value, list):
        raise SchemaError(f"{path}{key}", "expected a list")
    return value


def system_from_dict(data: dict) -> NormalFormSystem:
    if not isinstance(data, dict):
        raise SchemaError("$", "expected an object")
    eig = []
    for k, e in enumerate(_list(data, "eigenvalues", "$.")):
        try:
            eig.append(GaussianRational.from_json(e))
        except (ValueError, TypeError) as exc:
            raise SchemaError(f"$.eigenvalues[{k}]", str(exc)) from None
    if not eig:
        raise SchemaError("$.eigenvalues", "at least one eigenvalue is required")
    n = len(eig)
    params = data.get("parameters")
    if params is not None:
        if not isinstance(params, list) or not all(isinstance(p, str) for p in params):
            raise SchemaError("$.parameters", "expected a list of names")
        params = set(params)
    variables = data.get("variables")
    if variables is not None:
        if not isinstance(variables, list) or len(variables) != n or not all(isinstance(v, str) for v in variables):
            raise SchemaError("$.variables", f"expected {n} variable names")
        if params and set(variables) & params:
            raise SchemaError("$.variables", "variables and parameters overlap")
        variables = tuple(variables)
    sup = data.get("superdiagonal", [0] * (n - 1))
    if not isinstance(sup, list) or len(sup) != n - 1:
        raise SchemaError("$.superdiagonal", f"expected {n - 1} entries")
    sup = tuple(_expr(v, f"$.superdiagonal[{k}]", params) for k, v in enumerate(sup))
    jordan = JordanStructure(Spectrum(tuple(eig)), sup)
    bad = validate_jordan(jordan)
    if bad:
        raise SchemaError("$.superdiagonal", f"entries at positions {bad} join unequal eigenvalues")
    terms = []
    for k, c in enumerate(data.get("coefficients", [])):
        path = f"$.coefficients[{k}]"
        if not isinstance(c, dict):
            raise SchemaError(path, "expected an object")
        mu = c.get("mu")
        if not isinstance(mu, list) or len(mu) != n or not all(isinstance(m, int) and not isinstance(m, bool) and m >= 0 for m in mu):
            raise SchemaError(f"{path}.mu", f"expected {n} nonnegative integers")
        alpha = c.get("alpha")
        if not isinstance(alpha, int) or isinstance(alpha, bool) or not 1 <= alpha <= n:
            raise SchemaError(f"{path}.alpha", f"expected an index in 1..{n}")
        if "c" not in c:
            raise SchemaError(f"{path}.c", "missing coefficient")
        terms.append((ResonantMonomial(tuple(mu), alpha), _expr(c["c"], f"{path}.c", params)))
    try:
        return NormalFormSystem(jordan, tuple(terms), variables)
    except NonResonantCoefficient:
        raise
    except ValueError as exc:
        raise SchemaError("$", str(exc)) from None


def parse_system(path) -> NormalFormSystem:
    """Load and validate a system file; resonance of each coefficient is checked."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from None
    return system_from_dict(data)


def render_system(nf: NormalFormSystem, name: str = None) -> dict:
    out = {}
    if name:
        out["name"] = name
    out["variables"] = list(nf.variables)
    out["eigenvalues"] = [lam.to_json() for lam in nf.spectrum]
    out["superdiagonal"] = [
        int(eta.constant_value().re) if eta.is_constant() and eta.constant_value().is_real()
        and eta.constant_value().re.denominator == 1 else str(eta)
        for eta in nf.jordan.superdiagonal
    ]
    out["parameters"] = list(nf.parameters)
    out["coefficients"] = [
        {"mu": list(m.mu), "alpha": m.alpha, "c": str(c)} for m, c in nf.terms
    ]
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


EXAMPLES = ("ex1", "ex1_k3", "ex2", "ex3", "ex4", "ex5")


def example_path(name: str) -> Path:
    """Path of a bundled example system (``ex1`` ... ``ex5``, ``ex1_k3``)."""
    ref = resources.files("nflin") / "systems" / f"{name}.json"
    return Path(str(ref))


def load_example(name: str) -> NormalFormSystem:
    return parse_system(example_path(name))
