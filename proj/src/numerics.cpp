#include "ifsc/numerics.hpp"

#include <cmath>

namespace ifsc {

bool is_symmetric(const Matrix& m, double rel_tol) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(1e-300, m.cwiseAbs().maxCoeff());
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * std::max(1.0, scale);
}

Matrix cholesky_lower(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw AsymmetricInput("cholesky_lower: input must be square and nonempty");
    if (!is_symmetric(m))
        throw AsymmetricInput("cholesky_lower: input is not symmetric within tolerance");
    const Eigen::Index n = m.rows();
    Matrix l = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = m(j, j);
        for (Eigen::Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0))
            throw NotPositiveDefinite("cholesky_lower: pivot " + std::to_string(j) +
                                      " is not strictly positive");
        l(j, j) = std::sqrt(d);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

EighResult eigh(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw AsymmetricInput("eigh: input must be square and nonempty");
    if (!is_symmetric(m))
        throw AsymmetricInput("eigh: input is not symmetric within tolerance");
    Matrix sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorClass::Numerical, "eigh: eigensolver failed to converge");
    return EighResult{solver.eigenvalues(), solver.eigenvectors()};
}

Matrix sample_gaussian_matrix(int rows, int cols, double variance, RngStream& rng) {
    if (rows < 1 || cols < 1)
        throw Error(ErrorClass::Validation, "sample_gaussian_matrix: dimensions must be positive");
    if (!(variance > 0.0))
        throw Error(ErrorClass::Validation, "sample_gaussian_matrix: variance must be positive");
    const double sd = std::sqrt(variance);
    Matrix out(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) out(i, j) = sd * rng.gaussian();
    return out;
}

Matrix sample_haar_orthogonal(int k, RngStream& rng) {
    if (k < 1) throw Error(ErrorClass::Validation, "sample_haar_orthogonal: k must be >= 1");
    Matrix a = sample_gaussian_matrix(k, k, 1.0, rng);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < k; ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return q;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace ifsc
