#include "ifsc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace ifsc {

namespace {

using int128 = __int128;

constexpr double kPi = 3.14159265358979323846264338327950288;

void check_int128_magnitude(int128 v) {
    static const int128 limit = int128(1) << 120;
    if (v > limit || v < -limit)
        throw Error(ErrorClass::Numerical, "exact integer elimination overflow");
}

}  // namespace

LatticeBasis::LatticeBasis(Matrix g) : generator(std::move(g)) {
    if (generator.rows() < 1 || generator.rows() != generator.cols())
        throw Error(ErrorClass::Validation, "LatticeBasis: generator must be square and nonempty");
    if (!generator.allFinite())
        throw Error(ErrorClass::Validation, "LatticeBasis: generator entries must be finite");
}

void canonicalize_sign(IntVector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v[i] != 0) {
            if (v[i] < 0) v = -v;
            return;
        }
    }
}

bool lex_less(const IntVector& a, const IntVector& b) {
    for (Eigen::Index i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return a.size() < b.size();
}

long long integer_determinant(const IntMatrix& m) {
    const int n = static_cast<int>(m.rows());
    if (n != m.cols() || n < 1)
        throw Error(ErrorClass::Validation, "integer_determinant: matrix must be square");
    std::vector<std::vector<int128>> a(n, std::vector<int128>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = m(i, j);
    int sign = 1;
    int128 prev = 1;
    for (int k = 0; k + 1 < n; ++k) {
        int pivot = -1;
        for (int r = k; r < n; ++r)
            if (a[r][k] != 0) { pivot = r; break; }
        if (pivot < 0) return 0;
        if (pivot != k) { std::swap(a[pivot], a[k]); sign = -sign; }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                int128 num = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                check_int128_magnitude(num);
                a[i][j] = num / prev;  // exact in Bareiss elimination
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    int128 det = sign > 0 ? a[n - 1][n - 1] : -a[n - 1][n - 1];
    check_int128_magnitude(det);
    return static_cast<long long>(det);
}

int integer_rank(const std::vector<IntVector>& rows) {
    if (rows.empty()) return 0;
    const int n = static_cast<int>(rows[0].size());
    std::vector<std::vector<int128>> a;
    a.reserve(rows.size());
    for (const auto& r : rows) {
        std::vector<int128> row(n);
        for (int j = 0; j < n; ++j) row[j] = r[j];
        a.push_back(std::move(row));
    }
    const int m = static_cast<int>(a.size());
    int rank = 0;
    int128 prev = 1;
    for (int col = 0; col < n && rank < m; ++col) {
        int pivot = -1;
        for (int r = rank; r < m; ++r)
            if (a[r][col] != 0) { pivot = r; break; }
        if (pivot < 0) continue;
        std::swap(a[pivot], a[rank]);
        for (int i = rank + 1; i < m; ++i) {
            for (int j = col + 1; j < n; ++j) {
                int128 num = a[i][j] * a[rank][col] - a[i][col] * a[rank][j];
                check_int128_magnitude(num);
                a[i][j] = num / prev;
            }
            a[i][col] = 0;
        }
        prev = a[rank][col];
        ++rank;
    }
    return rank;
}

LllResult lll_reduce(const LatticeBasis& basis, double delta) {
    if (!(delta > 0.25 && delta <= 1.0))
        throw Error(ErrorClass::Validation, "lll_reduce: delta must lie in (0.25, 1]");
    const int n = basis.dimension();
    Matrix b = basis.generator;
    IntMatrix u = IntMatrix::Identity(n, n);
    const double scale = std::max(1.0, b.colwise().squaredNorm().maxCoeff());
    const double singular_tol = 1e-24 * scale;

    Matrix bstar(n, n);
    Matrix mu = Matrix::Zero(n, n);
    Vector bs_norm(n);

    auto gram_schmidt = [&]() {
        for (int i = 0; i < n; ++i) {
            bstar.col(i) = b.col(i);
            for (int j = 0; j < i; ++j) {
                mu(i, j) = b.col(i).dot(bstar.col(j)) / bs_norm(j);
                bstar.col(i) -= mu(i, j) * bstar.col(j);
            }
            bs_norm(i) = bstar.col(i).squaredNorm();
            if (!(bs_norm(i) > singular_tol))
                throw SingularBasis("lll_reduce: basis is numerically singular");
        }
    };

    auto size_reduce = [&](int k, int j) {
        if (std::abs(mu(k, j)) > 0.5) {
            const long long q = std::llround(mu(k, j));
            b.col(k) -= static_cast<double>(q) * b.col(j);
            u.col(k) -= q * u.col(j);
            for (int l = 0; l < j; ++l) mu(k, l) -= static_cast<double>(q) * mu(j, l);
            mu(k, j) -= static_cast<double>(q);
        }
    };

    gram_schmidt();
    int k = 1;
    std::uint64_t iter = 0;
    const std::uint64_t max_iter = 200'000ull * static_cast<std::uint64_t>(n) * n;
    while (k < n) {
        if (++iter > max_iter)
            throw BudgetExceeded("lll_reduce: iteration cap exceeded");
        size_reduce(k, k - 1);
        if (bs_norm(k) >= (delta - mu(k, k - 1) * mu(k, k - 1)) * bs_norm(k - 1)) {
            for (int j = k - 2; j >= 0; --j) size_reduce(k, j);
            ++k;
        } else {
            b.col(k).swap(b.col(k - 1));
            u.col(k).swap(u.col(k - 1));
            gram_schmidt();  // dimensions here are tiny; recompute wholesale
            k = std::max(k - 1, 1);
        }
    }
    return LllResult{LatticeBasis(std::move(b)), std::move(u)};
}

namespace {

// All x != 0 with ||R x||^2 <= radius_sq for upper-triangular R with positive
// diagonal, one representative per +-pair (highest-index nonzero entry
// positive). Interval ends carry a little slack; callers re-evaluate exact
// vector norms and filter.
std::vector<IntVector> enumerate_in_radius(const Matrix& r, double radius_sq,
                                           std::uint64_t node_budget) {
    const int n = static_cast<int>(r.rows());
    std::vector<IntVector> out;
    // s(i, l) = sum_{j >= l} r(i, j) x_j, filled as levels above i get fixed.
    Matrix s = Matrix::Zero(n, n + 1);
    std::vector<long long> x(n, 0);
    std::vector<double> cost(n + 1, 0.0);  // cost[l] = contribution of levels >= l
    std::uint64_t nodes = 0;

    auto rec = [&](auto&& self, int level, bool higher_zero) -> void {
        const double rem = radius_sq - cost[level + 1];
        if (rem < 0) return;
        const double rll = r(level, level);
        const double sl = s(level, level + 1);
        const double w = std::sqrt(rem) * (1.0 + 1e-12);
        long long lo = static_cast<long long>(std::ceil((-w - sl) / rll - 1e-9));
        long long hi = static_cast<long long>(std::floor((w - sl) / rll + 1e-9));
        if (higher_zero && lo < 0) lo = 0;
        for (long long v = lo; v <= hi; ++v) {
            if (++nodes > node_budget)
                throw BudgetExceeded("lattice enumeration: node budget exceeded");
            const double t = rll * static_cast<double>(v) + sl;
            const double c = cost[level + 1] + t * t;
            if (c > radius_sq * (1.0 + 1e-9) + 1e-12) continue;
            x[level] = v;
            const bool zero_so_far = higher_zero && v == 0;
            if (level == 0) {
                if (!zero_so_far) {
                    IntVector a(n);
                    for (int i = 0; i < n; ++i) a[i] = x[i];
                    out.push_back(std::move(a));
                }
            } else {
                cost[level] = c;
                for (int i = 0; i < level; ++i)
                    s(i, level) = s(i, level + 1) + r(i, level) * static_cast<double>(v);
                self(self, level - 1, zero_so_far);
            }
        }
        x[level] = 0;
    };
    rec(rec, n - 1, true);
    return out;
}

struct Candidate {
    double value;  // ||G a||^2 recomputed against the original generator
    IntVector coeffs;
};

// Shared LLL + enumerate + canonicalize pipeline. radius_kind 0: max reduced
// column (successive minima), 1: min reduced column (shortest vector).
std::vector<Candidate> reduced_candidates(const LatticeBasis& basis, int radius_kind,
                                          const EnumerationOptions& opts) {
    LllResult red = lll_reduce(basis, 0.99);
    const Matrix& bred = red.reduced.generator;
    const Vector col_sq = bred.colwise().squaredNorm();
    const double radius_sq =
        (radius_kind == 0 ? col_sq.maxCoeff() : col_sq.minCoeff()) * (1.0 + 1e-9);

    Matrix gram = bred.transpose() * bred;
    Matrix r;
    try {
        r = cholesky_lower(0.5 * (gram + gram.transpose())).transpose();
    } catch (const NotPositiveDefinite&) {
        throw SingularBasis("lattice enumeration: Gram matrix is numerically singular");
    }

    std::vector<IntVector> xs = enumerate_in_radius(r, radius_sq, opts.node_budget);
    std::vector<Candidate> cands;
    cands.reserve(xs.size());
    const int n = basis.dimension();
    for (const auto& xv : xs) {
        IntVector a(n);
        for (int i = 0; i < n; ++i) {
            long long acc = 0;
            for (int j = 0; j < n; ++j) acc += red.transform(i, j) * xv[j];
            a[i] = acc;
        }
        canonicalize_sign(a);
        const double value = (basis.generator * a.cast<double>()).squaredNorm();
        cands.push_back(Candidate{value, std::move(a)});
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.value != b.value) return a.value < b.value;
        return lex_less(a.coeffs, b.coeffs);
    });
    return cands;
}

}  // namespace

ShortestVectorResult shortest_vector(const LatticeBasis& basis, const EnumerationOptions& opts) {
    std::vector<Candidate> cands = reduced_candidates(basis, 1, opts);
    if (cands.empty())
        throw SingularBasis("shortest_vector: enumeration produced no lattice points");
    return ShortestVectorResult{std::sqrt(cands.front().value), cands.front().coeffs};
}

SuccessiveMinima successive_minima(const LatticeBasis& basis, const EnumerationOptions& opts) {
    const int n = basis.dimension();
    if (n > 20)
        throw BudgetExceeded("successive_minima: exact enumeration is capped at dimension 20");
    std::vector<Candidate> cands = reduced_candidates(basis, 0, opts);

    SuccessiveMinima result;
    result.lengths = Vector(n);
    result.witnesses = IntMatrix(n, n);
    std::vector<IntVector> chosen;
    chosen.reserve(n);
    int found = 0;
    for (const auto& cand : cands) {
        if (found == n) break;
        chosen.push_back(cand.coeffs);
        if (integer_rank(chosen) == found + 1) {
            result.lengths[found] = std::sqrt(cand.value);
            result.witnesses.col(found) = cand.coeffs;
            ++found;
        } else {
            chosen.pop_back();
        }
    }
    if (found < n)
        throw Error(ErrorClass::Numerical,
                    "successive_minima: failed to collect a full independent set");
    return result;
}

LatticeBasis dual_basis(const LatticeBasis& basis) {
    Eigen::FullPivLU<Matrix> lu(basis.generator);
    if (!lu.isInvertible())
        throw SingularBasis("dual_basis: generator is numerically singular");
    return LatticeBasis(lu.inverse().transpose());
}

IntegerVectorSet integer_points_in_ball(int dimension, double radius, bool primitive_only,
                                        const EnumerationOptions& opts) {
    if (dimension < 1)
        throw Error(ErrorClass::Validation, "integer_points_in_ball: dimension must be >= 1");
    if (!(radius >= 0.0) || !std::isfinite(radius))
        throw Error(ErrorClass::Validation, "integer_points_in_ball: radius must be finite and >= 0");

    IntegerVectorSet set;
    set.radius = radius;
    set.primitive_only = primitive_only;
    const double r_sq = radius * radius;
    // Volume-based sanity cap before any recursion.
    const double per_axis = 2.0 * radius + 1.0;
    if (dimension * std::log(std::max(per_axis, 1.0)) > std::log(1e18))
        throw BudgetExceeded("integer_points_in_ball: radius implies an absurd enumeration");

    std::vector<long long> a(dimension, 0);
    std::uint64_t nodes = 0;
    auto rec = [&](auto&& self, int level, long long norm_sq_above) -> void {
        const double rem = r_sq - static_cast<double>(norm_sq_above);
        if (rem <= 0) return;
        const long long w = static_cast<long long>(std::floor(std::sqrt(rem)));
        for (long long v = -w; v <= w; ++v) {
            if (++nodes > opts.node_budget)
                throw BudgetExceeded("integer_points_in_ball: node budget exceeded");
            const long long norm_sq = norm_sq_above + v * v;
            if (static_cast<double>(norm_sq) >= r_sq) continue;  // strict inequality
            a[level] = v;
            if (level == 0) {
                long long g = 0;
                bool nonzero = false;
                for (long long e : a) {
                    if (e != 0) nonzero = true;
                    g = std::gcd(g, std::llabs(e));
                }
                if (!nonzero) continue;
                if (primitive_only && g > 1) continue;
                IntVector out(dimension);
                for (int i = 0; i < dimension; ++i) out[i] = a[i];
                set.vectors.push_back(std::move(out));
            } else {
                self(self, level - 1, norm_sq);
            }
        }
        a[level] = 0;
    };
    rec(rec, dimension - 1, 0);
    return set;
}

double integer_shell_count_bound(int dimension, int k_shell) {
    if (dimension < 1)
        throw Error(ErrorClass::Validation, "integer_shell_count_bound: dimension must be >= 1");
    if (k_shell < 0)
        throw Error(ErrorClass::Validation, "integer_shell_count_bound: shell must be >= 0");
    if (k_shell == 0) return 2.0 * dimension;  // exactly the signed unit vectors
    const double k = static_cast<double>(k_shell);
    const double half_sqrt_dim = 0.5 * std::sqrt(static_cast<double>(dimension));
    const double outer = std::pow(k + 1.0 + half_sqrt_dim, dimension);
    const double inner = std::pow(std::max(k - half_sqrt_dim, 0.0), dimension);
    const double unit_ball_volume =
        std::pow(kPi, 0.5 * dimension) / std::tgamma(0.5 * dimension + 1.0);
    return (outer - inner) * unit_ball_volume;
}

}  // namespace ifsc
