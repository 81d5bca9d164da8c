"""Plan measurement-shot budgets: propagate per-expectation errors to a
loss-value bound, split a total budget across Pauli terms, and check the
resulting pseudo-error.

Run from the repository root after installing the package:

    python3 demos/shot_budget.py
"""

from geig.measurement import (
    ErrorBudget,
    error_bound,
    per_term_precision,
    pseudo_error_sq,
    shot_allocation,
)


def banner(title):
    print()
    print("=" * 64)
    print(title)
    print("=" * 64)


def demo_error_bound():
    banner("loss-error bound from per-expectation budgets")
    budget = ErrorBudget(
        eps_a=0.01, eps_b=0.01, eps_o=0.0, eta1=0.5, lambda_r=1.5676454450681554
    )
    print("eps_a = eps_b = 0.01, eta1 = 0.5, |lambda_max| ~ 1.57")
    print(f"worst-case loss error: {error_bound(budget):.6f}")
    tighter = ErrorBudget(0.001, 0.001, 0.0, 0.5, 1.5676454450681554)
    print(f"with 10x tighter expectations: {error_bound(tighter):.6f}")


def demo_allocation():
    banner("shot allocation across the two-qubit pencil terms")
    alphas = [1.0, 0.4, 0.4, 0.2]
    betas = [1.0, 0.4, 0.3, 0.2]
    gammas = list(betas)
    eps = 0.1
    plan = shot_allocation(alphas, betas, gammas, eps)

    print(f"{'term':>6} {'coeff':>7} {'shots':>7}")
    for fam, coeffs, counts in (
        ("A", alphas, plan.m_a),
        ("B", betas, plan.m_b),
        ("O", gammas, plan.m_o),
    ):
        for k, (c, m) in enumerate(zip(coeffs, counts)):
            print(f"{fam}[{k}]".rjust(6) + f" {c:>7.2f} {m:>7}")
    print(f"\ntotal shots: {plan.total}")

    pe = pseudo_error_sq(alphas, betas, gammas, plan.m_a, plan.m_b, plan.m_o)
    print(f"pseudo-error achieved: {pe:.6f} (target eps^2 = {eps**2:.4f})")


def demo_per_term_split():
    banner("splitting one precision target across weighted terms")
    coeffs = [1.0, 3.0]
    eps_h = 0.02
    parts = per_term_precision(coeffs, eps_h)
    for c, e in zip(coeffs, parts):
        print(f"coefficient {c:.1f} -> per-term precision {e:.6f}")
    print(f"sum of squared parts: {sum(e * e for e in parts):.6f} "
          f"(= eps^2 = {eps_h**2:.6f})")


if __name__ == "__main__":
    demo_error_bound()
    demo_allocation()
    demo_per_term_split()
