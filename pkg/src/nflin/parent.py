"""The parent linear system xi' = B xi on V0 + V1 and its structural checks.

Each resonant monomial phi = x^mu gets a coordinate w; its evolution is
X_f(phi), which for seminormal f re-expands in resonant monomials of the
same target eigenvalue.  The construction is attempted literally and any
monomial that falls outside the basis is reported as a closure failure.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Optional

from .algebra import GaussianRational, Poly
from .normal_form import NormalFormSystem, PolynomialVectorField, check_seminormal, lie_bracket
from .resonance import ResonanceTable, enumerate_resonances, resonance_intervals
from .spectrum import check_poincare


class NotClosed(Exception):
    """A generated monomial is not in the kept basis."""

    def __init__(self, witness, source=None):
        super().__init__(f"generated monomial {list(witness)} is outside the basis")
        self.witness = tuple(witness)
        self.source = source


class StructureViolation(AssertionError):
    def __init__(self, prop, detail=""):
        super().__init__(f"{prop}: {detail}" if detail else prop)
        self.property = prop


class NoTriangularOrder(StructureViolation):
    def __init__(self, detail=""):
        super().__init__("triangular order", detail)


@dataclass(frozen=True)
class ParentSystem:
    """xi' = B xi with xi = (x_1..x_n; w_1..w_r).

    ``entries`` is the sparse matrix ``{(row, col): Poly}`` (0-based);
    entries are constant in the phase variables but may carry parameters.
    """

    nf: NormalFormSystem
    monomials: tuple           # mu for each w, in basis order
    alphas: tuple              # 1-based target index per w
    entries: dict = field(compare=False)
    w_names: tuple = ()
    dropped: tuple = ()        # monomials discarded when built with on_missing="drop"

    @property
    def n(self) -> int:
        return self.nf.n

    @property
    def r(self) -> int:
        return len(self.monomials)

    @property
    def dimension(self) -> int:
        return self.n + self.r

    @property
    def labels(self) -> tuple:
        return tuple(self.nf.variables) + tuple(self.w_names)

    @property
    def variables(self) -> tuple:
        return self.labels

    def entry(self, i: int, j: int) -> Poly:
        return self.entries.get((i, j), Poly())

    def matrix(self) -> list:
        d = self.dimension
        return [[self.entry(i, j) for j in range(d)] for i in range(d)]

    def eigenvalue_of(self, k: int) -> GaussianRational:
        """Diagonal eigenvalue attached to coordinate k."""
        lam = self.nf.spectrum.eigenvalues
        return lam[k] if k < self.n else lam[self.alphas[k - self.n] - 1]

    def phi(self, k: int) -> Poly:
        """The monomial phi^k(x) for w-coordinate k (0-based among the w's)."""
        return self.nf.monomial(self.monomials[k])

    def field(self) -> PolynomialVectorField:
        """Bxi as a linear vector field over the labels."""
        return PolynomialVectorField.linear(self.matrix(), self.labels)

    def subs(self, bindings) -> "ParentSystem":
        entries = {k: v.subs(bindings) for k, v in self.entries.items()}
        return ParentSystem(self.nf.subs(bindings), self.monomials, self.alphas,
                            {k: v for k, v in entries.items() if v}, self.w_names, self.dropped)

    def sparse_triples(self) -> list:
        return [[i, j, str(v)] for (i, j), v in sorted(self.entries.items())]

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "basis": list(self.labels),
            "w_basis": [
                {"label": name, "mu": list(mu), "alpha": a, "phi": str(self.phi(k))}
                for k, (name, mu, a) in enumerate(zip(self.w_names, self.monomials, self.alphas))
            ],
            "B": self.sparse_triples(),
            "constraints": [str(e) for e in constraints(self)],
        }


def _w_names(r: int, taken) -> tuple:
    prefix = "w"
    while any(name.startswith(prefix) for name in taken):
        prefix += "w"
    return tuple(f"{prefix}{k}" for k in range(1, r + 1))


def build_parent(nf: NormalFormSystem, table: Optional[ResonanceTable] = None,
                 on_missing: str = "raise") -> ParentSystem:
    """Linear parent system over the full resonant monomial basis of ``table``.

    With ``on_missing="drop"`` out-of-basis monomials are discarded (a
    projection onto the kept coordinates) and listed in ``dropped``; with
    the default a ``NotClosed`` error names the first one.
    """
    if on_missing not in ("raise", "drop"):
        raise ValueError("on_missing must be 'raise' or 'drop'")
    if table is None:
        table = enumerate_resonances(nf.jordan)
    if not check_seminormal(nf):
        raise ValueError("system is not seminormal")
    n = nf.n
    basis = table.monomials()
    index = {mu: n + k for k, (mu, _) in enumerate(basis)}
    entries: dict = {}
    dropped = []

    def put(i, j, v):
        if v:
            cur = entries.get((i, j))
            v = v if cur is None else cur + v
            if v:
                entries[(i, j)] = v
            else:
                entries.pop((i, j), None)

    a = nf.jordan.matrix()
    for i in range(n):
        for j in range(n):
            put(i, j, a[i][j])
    for mono, c in nf.terms:
        col = index.get(mono.mu)
        if col is None:
            if on_missing == "raise":
                raise NotClosed(mono.mu, source="F")
            dropped.append(mono.mu)
            continue
        put(mono.alpha - 1, col, c)

    f = nf.field_f()
    for mu, _ in basis:
        row = index[mu]
        # X_f(x^mu), re-expressed in the w basis
        wdot = f.apply(nf.monomial(mu))
        for phase_exps, coeff in sorted(wdot.split(nf.variables).items()):
            col = index.get(phase_exps)
            if col is None:
                if on_missing == "raise":
                    raise NotClosed(phase_exps, source=mu)
                dropped.append(phase_exps)
                continue
            put(row, col, coeff)

    taken = set(nf.variables) | set(nf.parameters)
    return ParentSystem(
        nf,
        tuple(mu for mu, _ in basis),
        tuple(a for _, a in basis),
        entries,
        _w_names(len(basis), taken),
        tuple(dict.fromkeys(dropped)),
    )


def constraints(ps: ParentSystem) -> list:
    """E^i = w^i - phi^i(x)."""
    return [Poly.symbol(w) - ps.phi(k) for k, w in enumerate(ps.w_names)]


def on_manifold_substitution(ps: ParentSystem) -> dict:
    return {w: ps.phi(k) for k, w in enumerate(ps.w_names)}


def constraint_residuals(ps: ParentSystem) -> list:
    """dE^i/dt along B xi, reduced on M by w^j -> phi^j(x)."""
    field = ps.field()
    sub = on_manifold_substitution(ps)
    return [field.apply(e).subs(sub) for e in constraints(ps)]


def verify_constraint_invariance(ps: ParentSystem) -> bool:
    return all(res.is_zero() for res in constraint_residuals(ps))


# ---------------------------------------------------------------------------
# structure


def dependency_order(ps: ParentSystem) -> list:
    """Topological order in which every coordinate precedes those it depends on.

    Ties are broken by smallest index, so the result is deterministic.
    """
    d = ps.dimension
    deps = {i: set() for i in range(d)}
    for (i, j) in ps.entries:
        if i != j:
            deps[i].add(j)
    # Kahn's algorithm: i is placed once every coordinate depending on it is placed
    dependents = {j: set() for j in range(d)}
    for i, js in deps.items():
        for j in js:
            dependents[j].add(i)
    remaining = {j: len(dependents[j]) for j in range(d)}
    ready = [j for j in range(d) if remaining[j] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        i = heapq.heappop(ready)
        order.append(i)
        for j in deps[i]:
            remaining[j] -= 1
            if remaining[j] == 0:
                heapq.heappush(ready, j)
    if len(order) != d:
        stuck = sorted(set(range(d)) - set(order))
        raise NoTriangularOrder(f"cyclic coupling among coordinates {[ps.labels[k] for k in stuck]}")
    return order


def triangular_order(ps: ParentSystem) -> list:
    """Coordinate permutation making B upper triangular with eigenvalues on
    the diagonal.  Solving runs through it in reverse."""
    order = dependency_order(ps)
    pos = {k: p for p, k in enumerate(order)}
    for (i, j), v in ps.entries.items():
        if pos[j] < pos[i]:
            raise NoTriangularOrder(f"entry ({i},{j}) below the diagonal")
        if i == j and not v.is_constant():
            raise NoTriangularOrder(f"diagonal entry {i} is not constant: {v}")
    return order


@dataclass(frozen=True)
class StructureReport:
    block_triangular: bool
    alpha_blocks: dict            # alpha -> list of w labels
    alpha_blocks_ok: bool
    eigenvalues: tuple            # read off the triangularized diagonal, in triangular order
    expected_eigenvalues: tuple   # lambda_1..lambda_n, lambda_alpha(1)..lambda_alpha(r)
    eigenvalues_ok: bool
    triangular_order: tuple

    def eigenvalue_multiset(self) -> list:
        return sorted(self.eigenvalues, key=GaussianRational.sort_key)

    def to_json(self, labels=None) -> dict:
        name = (lambda k: labels[k]) if labels else (lambda k: k)
        return {
            "block_triangular": self.block_triangular,
            "alpha_blocks": {str(a): ws for a, ws in sorted(self.alpha_blocks.items())},
            "alpha_blocks_ok": self.alpha_blocks_ok,
            "eigenvalues": [str(v) for v in self.eigenvalue_multiset()],
            "eigenvalues_ok": self.eigenvalues_ok,
            "triangular_order": [name(k) for k in self.triangular_order],
        }


def structure_report(ps: ParentSystem) -> StructureReport:
    n = ps.n
    block = all(j >= n for (i, j) in ps.entries if i >= n)
    if not block:
        raise StructureViolation("block triangularity", "a w-row has a nonzero x-column")
    blocks: dict = {}
    for k, a in enumerate(ps.alphas):
        blocks.setdefault(a, []).append(ps.w_names[k])
    alpha_ok = all(
        ps.alphas[i - n] == ps.alphas[j - n] for (i, j) in ps.entries if i >= n and j >= n
    )
    if not alpha_ok:
        raise StructureViolation("alpha blocks", "B couples w's with different alpha")
    order = triangular_order(ps)
    diag = tuple(ps.entry(k, k).constant_value() for k in order)
    expected = tuple(ps.eigenvalue_of(k) for k in range(ps.dimension))
    key = GaussianRational.sort_key
    eig_ok = sorted(diag, key=key) == sorted(expected, key=key)
    if not eig_ok:
        raise StructureViolation("eigenvalues", f"diagonal {diag} vs expected {expected}")
    return StructureReport(block, blocks, alpha_ok, diag, expected, eig_ok, tuple(order))


def geometric_closure(ps: ParentSystem) -> bool:
    """[X_f, x^mu d_alpha] stays in the span of resonant fields of the table.

    Phase monomials of every bracket component must be resonant monomials for
    that component index (degree >= 2).
    """
    nf = ps.nf
    f = nf.field_f()
    spectrum = nf.spectrum
    for mu, a in zip(ps.monomials, ps.alphas):
        # x^mu e_beta for every beta sharing lambda_alpha is a basis field
        for beta in range(1, nf.n + 1):
            if spectrum[beta - 1] != spectrum[a - 1]:
                continue
            comps = [Poly() for _ in range(nf.n)]
            comps[beta - 1] = nf.monomial(mu)
            x = PolynomialVectorField(tuple(comps), nf.variables)
            br = lie_bracket(f, x)
            for idx, comp in enumerate(br.components, start=1):
                for exps in comp.split(nf.variables):
                    if sum(exps) < 2 or spectrum.dot(exps) != spectrum[idx - 1]:
                        return False
    return True


# ---------------------------------------------------------------------------
# truncation


def truncate_normal_form(nf: NormalFormSystem, N: int) -> NormalFormSystem:
    """Drop every coefficient of degree > N."""
    if N < 1:
        raise ValueError("truncation order must be >= 1")
    return nf.with_terms(tuple((m, c) for m, c in nf.terms if m.degree <= N))


@dataclass(frozen=True)
class TruncationReport:
    N: int
    closed: bool
    witness: Optional[tuple]
    interval_check: dict          # alpha -> bool; N outside [m_minus, m_plus]
    kept_basis_size: int
    parent_dimension: Optional[int]
    intervals: dict = field(default_factory=dict)   # alpha -> (m_minus, m_plus or None)

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "closed": self.closed,
            "witness": list(self.witness) if self.witness is not None else None,
            "witness_degree": sum(self.witness) if self.witness is not None else None,
            "kept_basis_size": self.kept_basis_size,
            "parent_dimension": self.parent_dimension,
            "interval_check": {str(a): ok for a, ok in sorted(self.interval_check.items())},
            "intervals": {
                str(a): [lo, hi] for a, (lo, hi) in sorted(self.intervals.items())
            },
        }


def _full_intervals(nf: NormalFormSystem, N: int) -> dict:
    """Per-alpha [m_minus, m_plus] over all resonances; m_plus is None when unbounded."""
    if check_poincare(nf.spectrum) is not None:
        return dict(resonance_intervals(enumerate_resonances(nf.jordan)))
    # without a finite bound only the lower ends are exact; search a bit past N
    table = enumerate_resonances(nf.jordan, max_degree=max(N, 2) + 2)
    return {a: (lo, None) for a, (lo, _) in resonance_intervals(table).items()}


def closure_analysis(nf: NormalFormSystem, N: int) -> TruncationReport:
    """Truncate at N and try to build the parent over the degree-<=N basis."""
    truncated = truncate_normal_form(nf, N)
    table = enumerate_resonances(nf.jordan, max_degree=N)
    intervals = _full_intervals(nf, N)
    checks = {}
    for a in range(1, nf.n + 1):
        lo, hi = intervals.get(a, (None, None))
        if lo is None:
            checks[a] = True
        else:
            checks[a] = not (lo <= N and (hi is None or N <= hi))
    kept = len(table.monomials())
    try:
        ps = build_parent(truncated, table)
    except NotClosed as exc:
        return TruncationReport(N, False, exc.witness, checks, kept, None, intervals)
    return TruncationReport(N, True, None, checks, kept, ps.dimension, intervals)
