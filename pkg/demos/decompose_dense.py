"""Decompose dense Hermitian matrices into weighted Pauli strings and
verify the reconstruction round-trips to machine precision.

Run from the repository root after installing the package:

    python3 demos/decompose_dense.py
"""

import numpy as np

from geig.pauli import decompose, dense_matrix


def banner(title):
    print()
    print("=" * 64)
    print(title)
    print("=" * 64)


def demo_known_matrix():
    banner("a structured 4x4 operator with four Pauli terms")
    m = np.array(
        [
            [1.8, 0.0, 0.0, 0.2],
            [0.0, 1.0, 0.2, 0.0],
            [0.0, 0.2, 1.0, 0.0],
            [0.2, 0.0, 0.0, 0.2],
        ]
    )
    s = decompose(m)
    print("input matrix:")
    print(m)
    print("\nPauli terms (coefficient * string):")
    for coeff, p in s.terms:
        print(f"  {coeff:+.3f} * {p.ops}")
    err = np.abs(dense_matrix(s) - m).max()
    print(f"\nreconstruction error: {err:.2e}")


def demo_random_hermitian():
    banner("random 3-qubit Hermitian matrix (dense, all 64 strings)")
    rng = np.random.default_rng(0)
    raw = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    m = (raw + raw.conj().T) / 2
    s = decompose(m)
    mags = sorted((abs(c) for c, _ in s.terms), reverse=True)
    print(f"term count: {len(s.terms)}")
    print(f"largest coefficients: {[round(v, 3) for v in mags[:5]]}")
    err = np.abs(dense_matrix(s) - m).max()
    print(f"round-trip error: {err:.2e}")


def demo_truncation():
    banner("truncation: small coefficients drop out at a looser tol")
    m = np.diag([1.0, 1.0]) + 1e-6 * np.array([[0.0, 1.0], [1.0, 0.0]])
    tight = decompose(m)
    loose = decompose(m, tol=1e-3)
    print(f"tol=1e-10 keeps {len(tight.terms)} terms: "
          f"{[p.ops for _, p in tight.terms]}")
    print(f"tol=1e-3  keeps {len(loose.terms)} term(s): "
          f"{[p.ops for _, p in loose.terms]}")


if __name__ == "__main__":
    demo_known_matrix()
    demo_random_hermitian()
    demo_truncation()
