"""RK4 error against the closed form as the step shrinks (default: ex5, x0 = 0.1)."""
import argparse

from nflin import oracle
from nflin.io import load_example
from nflin.parent import build_parent
from nflin.solver import integrate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("name", nargs="?", default="ex5")
    ap.add_argument("--x0", type=float, default=0.1)
    ap.add_argument("--t-end", type=float, default=1.0)
    ap.add_argument("--steps", type=float, nargs="+", default=[2e-3, 1e-3, 5e-4, 2.5e-4, 1e-4])
    args = ap.parse_args()

    nf = load_example(args.name)
    sol = integrate(build_parent(nf))
    params = {p: 1.0 for p in nf.parameters}
    x0 = [args.x0] * nf.n
    b = oracle.solution_bindings(sol, x0, params)
    prev = None
    print(f"{'step':>10} {'max abs error':>14} {'ratio':>7}")
    for h in args.steps:
        err = oracle.compare(oracle.integrate_numeric(nf, x0, args.t_end, h, params), sol, b)
        ratio = f"{prev / err:7.1f}" if prev else ""
        print(f"{h:10.2e} {err:14.3e} {ratio}")
        prev = err


if __name__ == "__main__":
    main()
