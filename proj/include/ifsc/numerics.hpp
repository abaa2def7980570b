#pragma once

#include <Eigen/Dense>

#include "ifsc/errors.hpp"
#include "ifsc/rng.hpp"

namespace ifsc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

/// Symmetry check: max |m_ij - m_ji| <= rel_tol * max |m_ij| (absolute for
/// matrices with vanishing scale).
bool is_symmetric(const Matrix& m, double rel_tol = 1e-9);

/// Lower-triangular L with L L^T = m. Throws AsymmetricInput when the
/// symmetry tolerance is violated and NotPositiveDefinite when a pivot
/// is not strictly positive.
Matrix cholesky_lower(const Matrix& m);

struct EighResult {
    Vector eigenvalues;   // ascending
    Matrix eigenvectors;  // orthonormal columns, m = U diag(w) U^T
};

EighResult eigh(const Matrix& m);

/// Haar-distributed k x k orthogonal matrix: QR of an i.i.d. Gaussian
/// matrix with Q's columns re-signed by the diagonal of R. The sign
/// correction is what makes the distribution exactly uniform; a raw QR
/// is biased by the convention of the factorization.
Matrix sample_haar_orthogonal(int k, RngStream& rng);

Matrix sample_gaussian_matrix(int rows, int cols, double variance, RngStream& rng);

Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace ifsc
