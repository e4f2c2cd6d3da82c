#pragma once

#include <Eigen/Dense>

namespace starfode {

/// Orthonormal (block) Krylov basis with the projected operator J = V^H A V.
struct KrylovReduction {
    Eigen::MatrixXcd V;
    Eigen::MatrixXcd J;
    int block_width = 1; // width after deflation
};

/// Unitary Schur factorization A = U T U^H, reusable across solves.
struct SchurForm {
    Eigen::MatrixXcd T;
    Eigen::MatrixXcd U;
};

SchurForm schur_form(const Eigen::MatrixXcd& A);

/// Solve X - A X B^T = C for X (A is m x m, B is n x n, C is m x n).
/// Complex Schur forms of A and B^T, then a column recurrence on the
/// transformed triangular system.
Eigen::MatrixXcd solve_stein(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B,
                             const Eigen::MatrixXcd& C);

/// Same solve with precomputed Schur forms of A and of B^T.
Eigen::MatrixXcd solve_stein(const SchurForm& A, const SchurForm& Bt,
                             const Eigen::MatrixXcd& C);

/// Block Arnoldi: orthonormal basis of the block Krylov space spanned by
/// start, A start, ..., A^{q-1} start. Modified Gram-Schmidt with one
/// reorthogonalization pass; near-dependent columns are deflated.
KrylovReduction arnoldi_reduce(const Eigen::MatrixXcd& A,
                               const Eigen::MatrixXcd& start, int q);

} // namespace starfode
