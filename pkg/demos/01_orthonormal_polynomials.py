"""Orthonormal Hermite, Legendre and Laguerre polynomials.

Evaluates each family on a few points, prints the derivative matrices that
re-expand d/dz psi_n in the same basis, and checks orthonormality with a
Gauss rule.

    python demos/01_orthonormal_polynomials.py
"""

import numpy as np

from pcedgsm import PolynomialFamily, derivative_matrix, eval_derivative, eval_orthonormal_all, gram_matrix
from pcedgsm.polyfamilies import gauss_quadrature

np.set_printoptions(precision=4, suppress=True, linewidth=100)

families = [PolynomialFamily.hermite(), PolynomialFamily.legendre(), PolynomialFamily.laguerre(2.0)]
z = np.array([0.1, 0.5, 0.9])

for fam in families:
    print(f"== {fam}")
    print("psi_0..psi_4 at z =", z)
    print(eval_orthonormal_all(fam, 4, z))

    # row n-1 holds the coefficients of d/dz psi_n on psi_0 .. psi_{n-1}
    C = derivative_matrix(fam, 4)
    print("derivative matrix C:")
    print(C.entries)

    # the matrix reproduces the derivative at any point
    lhs = eval_derivative(fam, 4, z)
    rhs = eval_orthonormal_all(fam, 3, z) @ C.row(4)
    print("d psi_4 / dz via recurrence vs via C:", lhs, rhs)

    nodes, weights = gauss_quadrature(fam, 6)
    print("6-point Gauss nodes:", nodes)
    print("weights (sum 1):   ", weights)
    err = np.abs(gram_matrix(fam, 8, 12) - np.eye(9)).max()
    print(f"max |Gram - I| up to degree 8: {err:.1e}\n")
