"""Shared helpers: the two-qubit demonstration pencil and random
positive-definite pencil generators used across the test modules."""

import numpy as np

from geig.pauli import PauliSum, decompose
from geig.statevector import StateVector
from geig.vqge import Pencil

# 1*II + 0.4*ZI + 0.4*IZ + 0.2*XX against 1*II + 0.3*ZI + 0.4*IZ + 0.2*ZZ
A_TERMS = [(1.0, "II"), (0.4, "ZI"), (0.4, "IZ"), (0.2, "XX")]
B_TERMS = [(1.0, "II"), (0.3, "ZI"), (0.4, "IZ"), (0.2, "ZZ")]

DENSE_A = np.array(
    [
        [1.8, 0.0, 0.0, 0.2],
        [0.0, 1.0, 0.2, 0.0],
        [0.0, 0.2, 1.0, 0.0],
        [0.2, 0.0, 0.0, 0.2],
    ]
)
DENSE_B = np.diag([1.9, 0.7, 0.9, 0.5])

# block determinants of the pencil: {|00>,|11>} and {|01>,|10>}
BLOCK_QUADS = [(0.95, -1.28, 0.32), (0.63, -1.6, 0.96)]


def two_qubit_pencil() -> Pencil:
    return Pencil(PauliSum(2, A_TERMS), PauliSum(2, B_TERMS))


def quad_roots(a, b, c):
    disc = np.sqrt(b * b - 4 * a * c)
    return sorted([(-b - disc) / (2 * a), (-b + disc) / (2 * a)])


def block_eigenvalues():
    """All four eigenvalues from the two 2x2 block quadratics, ascending."""
    vals = []
    for a, b, c in BLOCK_QUADS:
        vals.extend(quad_roots(a, b, c))
    return sorted(vals)


def random_hermitian(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (m + m.conj().T) / 2


def random_pd(rng, dim, shift=0.5):
    c = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return c @ c.conj().T / dim + shift * np.eye(dim)


def random_pencil(rng, n):
    """Random Hermitian A against a well-conditioned positive definite B."""
    dim = 2**n
    a = random_hermitian(rng, dim)
    b = random_pd(rng, dim)
    return Pencil(decompose(a), decompose(b)), a, b


def random_state(rng, n) -> StateVector:
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return StateVector(n, v / np.linalg.norm(v))
