#pragma once

#include <cstdint>
#include <vector>

#include "ifsc/numerics.hpp"

namespace ifsc {

/// Full-rank real lattice given by a square generator; the lattice is the
/// integer span of the generator's columns, { G a : a in Z^n }.
struct LatticeBasis {
    Matrix generator;

    explicit LatticeBasis(Matrix g);
    int dimension() const { return static_cast<int>(generator.rows()); }
};

struct EnumerationOptions {
    std::uint64_t node_budget = 100'000'000;
};

struct LllResult {
    LatticeBasis reduced;  // reduced.generator == input.generator * transform
    IntMatrix transform;   // unimodular
};

/// Floating-point LLL on the generator columns. delta in (0.25, 1].
LllResult lll_reduce(const LatticeBasis& basis, double delta = 0.99);

struct ShortestVectorResult {
    double length;           // lambda_1
    IntVector coefficients;  // witness a with ||G a|| = length, sign-canonical
};

ShortestVectorResult shortest_vector(const LatticeBasis& basis,
                                     const EnumerationOptions& opts = {});

struct SuccessiveMinima {
    Vector lengths;       // lambda_1 <= ... <= lambda_n
    IntMatrix witnesses;  // column k is an integer coefficient vector of length lengths[k]
};

/// Exact successive minima: LLL-preprocessed enumeration of every lattice
/// vector not longer than the largest reduced basis vector, then a greedy
/// sweep by increasing length keeping linearly independent witnesses
/// (independence decided in exact integer arithmetic). Ties are broken
/// lexicographically on the sign-canonicalized coefficients.
SuccessiveMinima successive_minima(const LatticeBasis& basis,
                                   const EnumerationOptions& opts = {});

/// Generator of the dual lattice: inverse transpose of the primal generator.
LatticeBasis dual_basis(const LatticeBasis& basis);

struct IntegerVectorSet {
    std::vector<IntVector> vectors;
    double radius = 0.0;
    bool primitive_only = false;
};

/// All a in Z^dim with 0 < ||a|| < radius (strict). With primitive_only,
/// vectors whose entries share a common divisor > 1 are dropped.
IntegerVectorSet integer_points_in_ball(int dimension, double radius,
                                        bool primitive_only = false,
                                        const EnumerationOptions& opts = {});

/// Analytic bound on the number of integer vectors with k < ||a|| <= k+1:
/// ((k+1+sqrt(K)/2)^K - max(k-sqrt(K)/2, 0)^K) * Vol(B_K(1)) for k >= 1,
/// and the exact count 2K for the unit shell k = 0.
double integer_shell_count_bound(int dimension, int k_shell);

/// Exact determinant of an integer matrix (Bareiss elimination).
long long integer_determinant(const IntMatrix& m);

/// Exact rank of a set of integer vectors.
int integer_rank(const std::vector<IntVector>& rows);

/// Flip sign so the first nonzero entry is positive.
void canonicalize_sign(IntVector& v);

bool lex_less(const IntVector& a, const IntVector& b);

}  // namespace ifsc
