#pragma once

#include "ifsc/lattice.hpp"

namespace ifsc {

/// Source covariance with the distortion absorbed (d = 1 throughout).
struct CovarianceMatrix {
    Matrix m;

    explicit CovarianceMatrix(Matrix k);
    int source_count() const { return static_cast<int>(m.rows()); }
};

/// Diagonal spectrum of I + K_xx. Membership in the compound class with a
/// given benchmark rate means prod(d) = 2^(2 R_BT) within 1e-6 relative.
struct SourceSpectrum {
    Vector d;

    explicit SourceSpectrum(Vector diag);
    /// Spectrum from a per-source rate split, d_i = 2^(2 R_i).
    static SourceSpectrum from_rate_split(const Vector& rates);

    int source_count() const { return static_cast<int>(d.size()); }
    double berger_tung() const;
    double d_max() const { return d.maxCoeff(); }
    double d_min() const { return d.minCoeff(); }
    /// Per-source rates R_i = (1/2) log2(d_i).
    Vector rate_split() const;
};

enum class Scheme { If, IfSuc };

double berger_tung_rate(const CovarianceMatrix& k);

struct RateBreakdown {
    double sum_rate;      // K * max per-equation rate
    Vector per_equation;  // bits per integer equation / decoding stage
};

/// Plain integer-forcing rate for a fixed full-rank integer matrix A whose
/// rows are the equation coefficients: per-row (1/2) log2(a^T (I+K) a).
RateBreakdown if_rate_for_matrix(const CovarianceMatrix& k, const IntMatrix& a);

struct IfOptimum {
    double rate;
    IntMatrix a;  // rows are the successive-minima witnesses
    SuccessiveMinima minima;
};

/// Optimal integer-forcing rate (K/2) log2(lambda_K^2) over the lattice
/// spanned by F^T where I + K_xx = F F^T.
IfOptimum if_opt_rate(const CovarianceMatrix& k);

/// Successive integer-forcing for a fixed A: stage rates are the log of the
/// Cholesky diagonal of A (I+K) A^T, decoded in row order.
RateBreakdown if_suc_rate_for_matrix(const CovarianceMatrix& k, const IntMatrix& a);

struct SucOptimum {
    double rate;
    IntMatrix a;
    Vector stage_rates;
};

/// Best successive-IF sum rate over unimodular equation matrices. For two
/// sources this is exact: with A unimodular the two stage rates are
/// ((1/2)log2 v, R_BT - (1/2)log2 v) where v is the quadratic form of the
/// first row, so the search reduces to the primitive vectors whose form
/// value brackets 2^R_BT, found by a short sweep over a reduced basis.
/// For K >= 3 a documented candidate family is searched (LLL transform of
/// F^T, its row permutations, and the successive-minima witnesses); the
/// result is an achievable upper bound on the true optimum.
SucOptimum if_suc_opt_rate(const CovarianceMatrix& k);

enum class PrecoderKind { Identity, SampledCre, Cyclotomic, Explicit, SpaceTimeNvd };

struct Precoder {
    PrecoderKind kind = PrecoderKind::Identity;
    Matrix matrix;
    /// Space-time kinds: minimum squared codeword determinant modulus.
    double delta_min = 0.0;
    /// Space-time kinds: number of time extensions (T = K).
    int time_extensions = 0;
};

struct RateReport {
    double r_bt = 0.0;
    double r_if_opt = 0.0;
    double r_if_suc = 0.0;
    IntMatrix a_if;
    IntMatrix a_suc;
    SuccessiveMinima minima;
};

/// Rates of the precoded source with covariance U (D - I) U^T; the IF
/// lattice generator is D^(1/2) U^T.
RateReport precoded_rates(const SourceSpectrum& d, const Matrix& u);

/// Single-scheme rate without witness bookkeeping (Monte-Carlo path).
double precoded_scheme_rate(const SourceSpectrum& d, const Matrix& u, Scheme scheme);

/// Space-time IF rate per pair of real symbols: the source is stacked over
/// two quadrature components and T = K time extensions, precoded by the
/// real expansion of an NVD space-time generator, and quantized as one
/// 2K^2-dimensional block; the result is (1/(2T)) of the block sum rate.
double space_time_rate(const CovarianceMatrix& k, const Precoder& nvd);

/// Real expansion of the 2x2 golden code generator (unitary, NVD). The
/// codeword is vectorized column-major as (X11, X21, X12, X22) and the
/// real layout stacks all real parts before all imaginary parts.
Precoder golden_code_precoder();

}  // namespace ifsc
