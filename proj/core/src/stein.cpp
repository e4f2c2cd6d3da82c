#include "starfode/stein.hpp"

#include "starfode/errors.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace starfode {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using std::complex;

SchurForm schur_form(const MatrixXcd& A) {
    Eigen::ComplexSchur<MatrixXcd> s(A);
    if (s.info() != Eigen::Success)
        throw solver_error("schur_form: decomposition failed");
    return SchurForm{s.matrixT(), s.matrixU()};
}

MatrixXcd solve_stein(const SchurForm& A, const SchurForm& Bt, const MatrixXcd& C) {
    const Eigen::Index m = A.T.rows();
    const Eigen::Index n = Bt.T.rows();
    if (C.rows() != m || C.cols() != n)
        throw std::invalid_argument("solve_stein: dimension mismatch");
    const MatrixXcd& SA = A.T;
    const MatrixXcd& UA = A.U;
    const MatrixXcd& SD = Bt.T;
    const MatrixXcd& UD = Bt.U;

    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const complex<double> prod = SA(i, i) * SD(j, j);
            if (std::abs(1.0 - prod) <= 1e-12 * (1.0 + std::abs(prod)))
                throw solver_error("solve_stein: operator singular "
                                   "(eigenvalue product at 1)");
        }
    }

    const MatrixXcd Ct = UA.adjoint() * C * UD;
    MatrixXcd Xt(m, n);
    const MatrixXcd I = MatrixXcd::Identity(m, m);
    for (Eigen::Index j = 0; j < n; ++j) {
        VectorXcd rhs = Ct.col(j);
        if (j > 0)
            rhs.noalias() += SA * (Xt.leftCols(j) * SD.block(0, j, j, 1));
        const MatrixXcd Aj = I - SD(j, j) * SA;
        Xt.col(j) = Aj.triangularView<Eigen::Upper>().solve(rhs);
    }
    return UA * Xt * UD.adjoint();
}

MatrixXcd solve_stein(const MatrixXcd& A, const MatrixXcd& B, const MatrixXcd& C) {
    if (A.rows() != A.cols() || B.rows() != B.cols())
        throw std::invalid_argument("solve_stein: square factors required");
    return solve_stein(schur_form(A), schur_form(B.transpose()), C);
}

KrylovReduction arnoldi_reduce(const MatrixXcd& A, const MatrixXcd& start, int q) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || start.rows() != n)
        throw std::invalid_argument("arnoldi_reduce: dimension mismatch");
    const double start_norm = start.norm();
    if (start_norm == 0.0)
        throw std::invalid_argument("arnoldi_reduce: zero start block");

    const double defl_tol = 1e-12 * start_norm;
    MatrixXcd V(n, 0);

    // Orthonormalize a candidate block against V and internally, dropping
    // columns that collapse below the deflation threshold.
    auto absorb = [&](const MatrixXcd& block) -> Eigen::Index {
        Eigen::Index added = 0;
        for (Eigen::Index c = 0; c < block.cols(); ++c) {
            VectorXcd w = block.col(c);
            for (int pass = 0; pass < 2; ++pass)
                if (V.cols() > 0) w -= V * (V.adjoint() * w);
            const double nw = w.norm();
            if (nw < defl_tol) continue;
            V.conservativeResize(n, V.cols() + 1);
            V.col(V.cols() - 1) = w / nw;
            ++added;
            if (V.cols() == n) break;
        }
        return added;
    };

    Eigen::Index width = absorb(start);
    if (width == 0)
        throw std::invalid_argument("arnoldi_reduce: start block numerically zero");
    int last_width = static_cast<int>(width);

    Eigen::Index lo = 0;
    for (int step = 1; step < q && V.cols() < n && width > 0; ++step) {
        const MatrixXcd next = A * V.middleCols(lo, width);
        lo = V.cols();
        width = absorb(next);
        if (width > 0) last_width = static_cast<int>(width);
    }

    KrylovReduction r;
    r.J = V.adjoint() * (A * V);
    r.V = std::move(V);
    r.block_width = last_width;
    return r;
}

} // namespace starfode
