"""Print resonances, parent matrix and closed-form solution for every bundled example."""
import argparse

from nflin import oracle
from nflin.io import EXAMPLES, load_example
from nflin.normal_form import rhs
from nflin.parent import build_parent, closure_analysis
from nflin.resonance import enumerate_resonances
from nflin.solver import integrate, verify_solution_symbolic


def show(name: str, numeric: bool) -> None:
    nf = load_example(name)
    print(f"== {name}: n={nf.n}, spectrum {[str(v) for v in nf.spectrum]}")
    if name == "ex4":
        # rotation spectrum: only the truncated problem is meaningful
        for N in (3, 5):
            rep = closure_analysis(nf, N)
            print(f"  truncation N={N}: closed={rep.closed} witness={rep.witness}")
        return
    table = enumerate_resonances(nf.jordan)
    print("  resonances:", ", ".join(f"x^{e.mu} e_{e.alpha}" for e in table))
    ps = build_parent(nf, table)
    print(f"  parent dimension {ps.dimension}, nonzero entries:")
    for i, j, v in ps.sparse_triples():
        print(f"    B[{ps.labels[i]},{ps.labels[j]}] = {v}")
    sol = integrate(ps)
    for label, f in sol.components:
        print(f"  {label}(t) = {f}")
    print("  symbolic check:", verify_solution_symbolic(sol, rhs(nf)))
    if numeric:
        params = {p: 1.0 for p in nf.parameters}
        x0 = [0.1] * nf.n
        traj = oracle.integrate_numeric(nf, x0, 1.0, oracle.DEFAULT_STEP, params)
        err = oracle.compare(traj, sol, oracle.solution_bindings(sol, x0, params))
        print(f"  RK4 vs closed form (params=1, x0=0.1): {err:.2e}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", default=list(EXAMPLES))
    ap.add_argument("--numeric", action="store_true", help="also run the RK4 comparison")
    args = ap.parse_args()
    for name in args.names:
        show(name, args.numeric)


if __name__ == "__main__":
    main()
