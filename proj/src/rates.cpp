#include "ifsc/rates.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <tuple>

namespace ifsc {

namespace {

void check_orthonormal(const Matrix& u, const char* who) {
    if (u.rows() != u.cols() || u.rows() < 1)
        throw NonUnitaryPrecoder(std::string(who) + ": matrix must be square");
    Matrix err = u.transpose() * u - Matrix::Identity(u.rows(), u.cols());
    if (err.cwiseAbs().maxCoeff() > 1e-9)
        throw NonUnitaryPrecoder(std::string(who) + ": matrix is not orthonormal within 1e-9");
}

Matrix identity_plus(const Matrix& k) {
    return Matrix::Identity(k.rows(), k.cols()) + k;
}

double row_quadratic_form(const Matrix& m, const IntMatrix& a, int row) {
    const int n = static_cast<int>(m.rows());
    Vector v(n);
    for (int j = 0; j < n; ++j) v[j] = static_cast<double>(a(row, j));
    return v.dot(m * v);
}

RateBreakdown if_rate_rows(const Matrix& m, const IntMatrix& a) {
    const int n = static_cast<int>(a.rows());
    Vector per(n);
    for (int r = 0; r < n; ++r) per[r] = 0.5 * std::log2(row_quadratic_form(m, a, r));
    return RateBreakdown{n * per.maxCoeff(), std::move(per)};
}

RateBreakdown suc_rate_rows(const Matrix& m, const IntMatrix& a) {
    const int n = static_cast<int>(a.rows());
    Matrix ad = a.cast<double>();
    Matrix w = ad * m * ad.transpose();
    Matrix l = cholesky_lower(0.5 * (w + w.transpose()));
    Vector per(n);
    for (int r = 0; r < n; ++r) per[r] = std::log2(l(r, r));
    return RateBreakdown{n * per.maxCoeff(), std::move(per)};
}

std::tuple<long long, long long, long long> extended_gcd(long long p, long long q) {
    if (q == 0) return {p, 1, 0};
    auto [g, x, y] = extended_gcd(q, p % q);
    return {g, y, x - (p / q) * y};
}

/// Exact two-source successive-IF optimum over unimodular matrices. The
/// stage rates depend only on the first row a, via v = ||g a||^2:
/// rate = max(log2 v, 2 R_BT - log2 v) with R_BT = log2 |det g|, so the
/// search needs the primitive lattice coefficient vectors whose form value
/// is nearest |det g| from below and from above. Against a reduced basis
/// both live within a handful of basis-b2 columns.
SucOptimum suc_opt_2d(const Matrix& g, double rbt) {
    LllResult red = lll_reduce(LatticeBasis(g), 0.99);
    const Matrix& b = red.reduced.generator;
    const double b1_sq = b.col(0).squaredNorm();
    const double mu = b.col(0).dot(b.col(1)) / b1_sq;
    const double b2_star_sq = b.col(1).squaredNorm() - mu * mu * b1_sq;
    const double t = std::abs(g.determinant());

    double below_best = -1.0, above_best = std::numeric_limits<double>::infinity();
    long long below_x[2] = {0, 0}, above_x[2] = {0, 0};

    auto value = [&](long long x1, long long x2) {
        const double u = static_cast<double>(x1) + mu * static_cast<double>(x2);
        return b1_sq * u * u + b2_star_sq * static_cast<double>(x2) * static_cast<double>(x2);
    };
    auto consider = [&](long long x1, long long x2) {
        const double v = value(x1, x2);
        if (v <= t) {
            if (v > below_best) { below_best = v; below_x[0] = x1; below_x[1] = x2; }
        } else {
            if (v < above_best) { above_best = v; above_x[0] = x1; above_x[1] = x2; }
        }
    };
    auto coprime = [](long long x1, long long x2) {
        return std::gcd(std::llabs(x1), std::llabs(x2)) == 1;
    };

    consider(1, 0);
    for (long long x2 = 1;; ++x2) {
        const double c = b2_star_sq * static_cast<double>(x2) * static_cast<double>(x2);
        if (c > t && c >= above_best) break;
        const double center = -mu * static_cast<double>(x2);
        if (c <= t) {
            const double w = std::sqrt((t - c) / b1_sq);
            const long long lo = static_cast<long long>(std::ceil(center - w));
            const long long hi = static_cast<long long>(std::floor(center + w));
            for (long long x1 = hi; x1 >= lo; --x1)
                if (coprime(x1, x2)) {
                    if (value(x1, x2) <= t) { consider(x1, x2); break; }
                    consider(x1, x2);  // fp boundary spill feeds the above side
                }
            for (long long x1 = lo; x1 <= hi; ++x1)
                if (coprime(x1, x2)) {
                    if (value(x1, x2) <= t) { consider(x1, x2); break; }
                    consider(x1, x2);
                }
            for (long long x1 = lo - 1, steps = 0; steps < 512; --x1, ++steps)
                if (coprime(x1, x2) && value(x1, x2) > t) { consider(x1, x2); break; }
            for (long long x1 = hi + 1, steps = 0; steps < 512; ++x1, ++steps)
                if (coprime(x1, x2) && value(x1, x2) > t) { consider(x1, x2); break; }
        } else {
            const long long mid = static_cast<long long>(std::floor(center));
            for (long long x1 = mid, steps = 0; steps < 512; --x1, ++steps)
                if (coprime(x1, x2) && value(x1, x2) > t) { consider(x1, x2); break; }
            for (long long x1 = mid + 1, steps = 0; steps < 512; ++x1, ++steps)
                if (coprime(x1, x2) && value(x1, x2) > t) { consider(x1, x2); break; }
        }
    }

    const double rate_below =
        below_best > 0.0 ? 2.0 * rbt - std::log2(below_best) : std::numeric_limits<double>::infinity();
    const double rate_above = std::log2(above_best);
    const bool use_below = rate_below <= rate_above;
    const long long* xw = use_below ? below_x : above_x;
    const double v_first = use_below ? below_best : above_best;

    // Back to original coefficients and a unimodular completion.
    const long long p = red.transform(0, 0) * xw[0] + red.transform(0, 1) * xw[1];
    const long long q = red.transform(1, 0) * xw[0] + red.transform(1, 1) * xw[1];
    auto [gg, cu, cv] = extended_gcd(p, q);  // |gg| = 1, the row is primitive
    long long r2_0 = -cv, r2_1 = cu;
    if (gg < 0) { r2_0 = -r2_0; r2_1 = -r2_1; }

    SucOptimum out;
    out.a = IntMatrix(2, 2);
    out.a << p, q, r2_0, r2_1;
    out.stage_rates = Vector(2);
    out.stage_rates << 0.5 * std::log2(v_first), rbt - 0.5 * std::log2(v_first);
    out.rate = 2.0 * out.stage_rates.maxCoeff();
    return out;
}

std::vector<std::vector<int>> permutations_of(int n) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(idx);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return out;
}

/// Candidate-family search for K >= 3; an achievable upper bound.
SucOptimum suc_opt_family(const Matrix& m, const Matrix& g, const SuccessiveMinima& minima) {
    const int n = static_cast<int>(m.rows());
    std::vector<IntMatrix> bases;
    bases.push_back(IntMatrix::Identity(n, n));
    LllResult red = lll_reduce(LatticeBasis(g), 0.99);
    bases.push_back(red.transform.transpose());
    bases.push_back(minima.witnesses.transpose());

    SucOptimum best;
    best.rate = std::numeric_limits<double>::infinity();
    auto try_matrix = [&](const IntMatrix& a) {
        RateBreakdown rb = suc_rate_rows(m, a);
        if (rb.sum_rate < best.rate) {
            best.rate = rb.sum_rate;
            best.a = a;
            best.stage_rates = rb.per_equation;
        }
    };

    if (n <= 4) {
        const auto perms = permutations_of(n);
        for (const auto& base : bases) {
            IntMatrix permuted(n, n);
            for (const auto& perm : perms) {
                for (int r = 0; r < n; ++r) permuted.row(r) = base.row(perm[r]);
                try_matrix(permuted);
            }
        }
    } else {
        for (const auto& base : bases) {
            // decode the lowest-rate equation first
            std::vector<int> order(n);
            std::iota(order.begin(), order.end(), 0);
            std::vector<double> qf(n);
            for (int r = 0; r < n; ++r) qf[r] = row_quadratic_form(m, base, r);
            std::sort(order.begin(), order.end(), [&](int a, int b) { return qf[a] < qf[b]; });
            IntMatrix sorted(n, n);
            for (int r = 0; r < n; ++r) sorted.row(r) = base.row(order[r]);
            try_matrix(sorted);
            try_matrix(base);
        }
    }
    return best;
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(Matrix k) : m(std::move(k)) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw AsymmetricInput("CovarianceMatrix: matrix must be square and nonempty");
    if (!is_symmetric(m))
        throw AsymmetricInput("CovarianceMatrix: matrix is not symmetric within tolerance");
    m = 0.5 * (m + m.transpose()).eval();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    EighResult e = eigh(m);
    if (e.eigenvalues.minCoeff() < -1e-9 * scale)
        throw NotPositiveDefinite("CovarianceMatrix: matrix has a negative eigenvalue");
}

SourceSpectrum::SourceSpectrum(Vector diag) : d(std::move(diag)) {
    if (d.size() < 1)
        throw Error(ErrorClass::Validation, "SourceSpectrum: spectrum must be nonempty");
    if (d.minCoeff() < 1.0 - 1e-9)
        throw Error(ErrorClass::Validation, "SourceSpectrum: entries must be >= 1");
}

SourceSpectrum SourceSpectrum::from_rate_split(const Vector& rates) {
    Vector d(rates.size());
    for (Eigen::Index i = 0; i < rates.size(); ++i) d[i] = std::exp2(2.0 * rates[i]);
    return SourceSpectrum(std::move(d));
}

double SourceSpectrum::berger_tung() const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) acc += std::log2(d[i]);
    return 0.5 * acc;
}

Vector SourceSpectrum::rate_split() const {
    Vector r(d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) r[i] = 0.5 * std::log2(d[i]);
    return r;
}

double berger_tung_rate(const CovarianceMatrix& k) {
    Matrix l = cholesky_lower(identity_plus(k.m));
    double acc = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i) acc += std::log2(l(i, i));
    return acc;
}

RateBreakdown if_rate_for_matrix(const CovarianceMatrix& k, const IntMatrix& a) {
    if (a.rows() != k.source_count() || a.cols() != k.source_count())
        throw SingularIntegerMatrix("if_rate_for_matrix: matrix has the wrong shape");
    if (integer_determinant(a) == 0)
        throw SingularIntegerMatrix("if_rate_for_matrix: integer matrix is singular");
    return if_rate_rows(identity_plus(k.m), a);
}

IfOptimum if_opt_rate(const CovarianceMatrix& k) {
    const int n = k.source_count();
    Matrix f = cholesky_lower(identity_plus(k.m));
    SuccessiveMinima minima = successive_minima(LatticeBasis(f.transpose()));
    IfOptimum out;
    out.rate = n * std::log2(minima.lengths[n - 1]);
    out.a = minima.witnesses.transpose();
    out.minima = std::move(minima);
    return out;
}

RateBreakdown if_suc_rate_for_matrix(const CovarianceMatrix& k, const IntMatrix& a) {
    if (a.rows() != k.source_count() || a.cols() != k.source_count())
        throw SingularIntegerMatrix("if_suc_rate_for_matrix: matrix has the wrong shape");
    if (integer_determinant(a) == 0)
        throw SingularIntegerMatrix("if_suc_rate_for_matrix: integer matrix is singular");
    return suc_rate_rows(identity_plus(k.m), a);
}

SucOptimum if_suc_opt_rate(const CovarianceMatrix& k) {
    const int n = k.source_count();
    Matrix m = identity_plus(k.m);
    Matrix f = cholesky_lower(m);
    const double rbt = berger_tung_rate(k);
    if (n == 2) return suc_opt_2d(f.transpose(), rbt);
    SuccessiveMinima minima = successive_minima(LatticeBasis(f.transpose()));
    return suc_opt_family(m, f.transpose(), minima);
}

RateReport precoded_rates(const SourceSpectrum& d, const Matrix& u) {
    check_orthonormal(u, "precoded_rates");
    const int n = d.source_count();
    if (u.rows() != n)
        throw Error(ErrorClass::Validation, "precoded_rates: dimension mismatch");
    Matrix g = d.d.cwiseSqrt().asDiagonal() * u.transpose();

    RateReport report;
    report.r_bt = d.berger_tung();
    report.minima = successive_minima(LatticeBasis(g));
    report.r_if_opt = n * std::log2(report.minima.lengths[n - 1]);
    report.a_if = report.minima.witnesses.transpose();
    if (n == 2) {
        SucOptimum suc = suc_opt_2d(g, report.r_bt);
        report.r_if_suc = suc.rate;
        report.a_suc = suc.a;
    } else {
        Matrix m = u * d.d.asDiagonal() * u.transpose();
        SucOptimum suc = suc_opt_family(0.5 * (m + m.transpose()), g, report.minima);
        report.r_if_suc = suc.rate;
        report.a_suc = suc.a;
    }
    return report;
}

double precoded_scheme_rate(const SourceSpectrum& d, const Matrix& u, Scheme scheme) {
    const int n = d.source_count();
    Matrix g = d.d.cwiseSqrt().asDiagonal() * u.transpose();
    if (scheme == Scheme::IfSuc && n == 2) return suc_opt_2d(g, d.berger_tung()).rate;
    SuccessiveMinima minima = successive_minima(LatticeBasis(g));
    if (scheme == Scheme::If) return n * std::log2(minima.lengths[n - 1]);
    Matrix m = u * d.d.asDiagonal() * u.transpose();
    return suc_opt_family(0.5 * (m + m.transpose()), g, minima).rate;
}

double space_time_rate(const CovarianceMatrix& k, const Precoder& nvd) {
    const int n = k.source_count();
    if (nvd.kind != PrecoderKind::SpaceTimeNvd)
        throw Error(ErrorClass::Validation, "space_time_rate: precoder must be a space-time NVD kind");
    if (nvd.time_extensions != n)
        throw Error(ErrorClass::Validation,
                    "space_time_rate: precoder must use T = K time extensions");
    const int stacked = 2 * n * n;
    if (stacked > 20)
        throw BudgetExceeded("space_time_rate: stacked dimension exceeds the enumeration cap");
    check_orthonormal(nvd.matrix, "space_time_rate");
    if (nvd.matrix.rows() != stacked)
        throw Error(ErrorClass::Validation, "space_time_rate: precoder has the wrong dimension");

    Matrix k_hat = kron(Matrix::Identity(2, 2), k.m);
    Matrix k_cal = kron(Matrix::Identity(n, n), k_hat);
    Matrix m = identity_plus(nvd.matrix * k_cal * nvd.matrix.transpose());
    Matrix f = cholesky_lower(0.5 * (m + m.transpose()));
    SuccessiveMinima minima = successive_minima(LatticeBasis(f.transpose()));
    return n * std::log2(minima.lengths[stacked - 1]);
}

Precoder golden_code_precoder() {
    using cd = std::complex<double>;
    const double s5 = std::sqrt(5.0);
    const double theta = 0.5 * (1.0 + s5);
    const double theta_bar = 0.5 * (1.0 - s5);
    const cd alpha(1.0, 1.0 - theta);
    const cd alpha_bar(1.0, 1.0 - theta_bar);
    const cd i(0.0, 1.0);

    Eigen::Matrix<cd, 4, 4> gc = Eigen::Matrix<cd, 4, 4>::Zero();
    // Rows follow the column-major codeword layout (X11, X21, X12, X22);
    // columns are the four data symbols.
    gc(0, 0) = alpha;            gc(0, 1) = alpha * theta;
    gc(1, 2) = i * alpha_bar;    gc(1, 3) = i * alpha_bar * theta_bar;
    gc(2, 2) = alpha;            gc(2, 3) = alpha * theta;
    gc(3, 0) = alpha_bar;        gc(3, 1) = alpha_bar * theta_bar;
    gc /= s5;

    Matrix p(8, 8);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            p(r, c) = gc(r, c).real();
            p(r, c + 4) = -gc(r, c).imag();
            p(r + 4, c) = gc(r, c).imag();
            p(r + 4, c + 4) = gc(r, c).real();
        }
    }

    Precoder out;
    out.kind = PrecoderKind::SpaceTimeNvd;
    out.matrix = std::move(p);
    out.delta_min = 0.2;  // cross-checked by a brute-force determinant scan in the tests
    out.time_extensions = 2;
    return out;
}

}  // namespace ifsc
