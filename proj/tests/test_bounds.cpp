#include <cmath>
#include <numeric>

#include "doctest.h"
#include "ifsc/bounds.hpp"
#include "ifsc/lattice.hpp"

using namespace ifsc;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Uniform rate split on the simplex sum R_i = rbt.
SourceSpectrum random_compound_spectrum(int k, double rbt, RngStream& rng) {
    Vector e(k);
    for (int i = 0; i < k; ++i) e[i] = -std::log(1.0 - rng.uniform());
    e *= rbt / e.sum();
    return SourceSpectrum::from_rate_split(e);
}

// Literal term-by-term evaluation of the two-source union-bound sums,
// written independently of the library enumeration.
double oracle_if_union(double d1, double d2, double rbt, double dr, bool halve) {
    const double alpha = (5.0 / 4.0) * (4.0 / 3.0);  // (K+3)/4 * gamma_2^2
    const double beta = alpha * std::exp2(-(rbt + dr));
    const double dmax = std::max(d1, d2);
    const double r2 = beta * dmax;
    const long long lim = static_cast<long long>(std::floor(std::sqrt(std::max(r2, 0.0)))) + 1;
    double sum = 0.0;
    for (long long i = -lim; i <= lim; ++i)
        for (long long j = -lim; j <= lim; ++j) {
            const double nsq = static_cast<double>(i * i + j * j);
            if (nsq <= 0.0 || nsq >= r2) continue;
            sum += 2.0 * std::sqrt(beta) * std::exp2(rbt) / (std::sqrt(nsq) * std::sqrt(dmax));
        }
    return halve ? 0.5 * sum : sum;
}

double oracle_suc_union(double d1, double d2, double rbt, double dr, bool halve) {
    const double beta = std::exp2(rbt - dr);
    const double dmin = std::min(d1, d2);
    const double r2 = beta / dmin;
    const long long lim = static_cast<long long>(std::floor(std::sqrt(std::max(r2, 0.0)))) + 1;
    double sum = 0.0;
    for (long long i = -lim; i <= lim; ++i)
        for (long long j = -lim; j <= lim; ++j) {
            const double nsq = static_cast<double>(i * i + j * j);
            if (nsq <= 0.0 || nsq >= r2) continue;
            if (std::gcd(std::llabs(i), std::llabs(j)) != 1) continue;
            sum += 2.0 * std::sqrt(beta) * std::sqrt(dmin) / (std::sqrt(nsq) * std::exp2(rbt));
        }
    return halve ? 0.5 * sum : sum;
}

}  // namespace

TEST_CASE("transference constant in both readings") {
    CHECK(transference_constant(1, AlphaMode::Published) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(transference_constant(2, AlphaMode::Published) ==
          doctest::Approx(5.0 / 3.0).epsilon(1e-12));
    CHECK(transference_constant(2, AlphaMode::Exact) ==
          doctest::Approx(5.0 / 3.0).epsilon(1e-12));

    // beyond the exact table the published form keeps the unsquared envelope
    const double published10 =
        (13.0 / 4.0) * (2.0 / kPi) * std::pow(std::tgamma(7.0), 0.2);
    CHECK(transference_constant(10, AlphaMode::Published) ==
          doctest::Approx(published10).epsilon(1e-12));
    CHECK(published10 == doctest::Approx(7.714).epsilon(1e-3));
    const double blich10 = blichfeldt_gamma_bound(10);
    CHECK(transference_constant(10, AlphaMode::Exact) ==
          doctest::Approx((13.0 / 4.0) * blich10 * blich10).epsilon(1e-12));
}

TEST_CASE("exact Hermite constants stay below the Blichfeldt envelope") {
    for (int k : {1, 2, 3, 4, 5, 6, 7, 8, 24})
        CHECK(hermite_gamma_exact(k) <= blichfeldt_gamma_bound(k) * (1.0 + 1e-12));
    CHECK_THROWS_AS(hermite_gamma_exact(9), UnsupportedDimension);
    CHECK(hermite_gamma_bar(8) == doctest::Approx(2.0).epsilon(1e-12));
    // at 24 the running max is the Blichfeldt value of a lower dimension
    CHECK(hermite_gamma_bar(24) >= 4.0);
}

TEST_CASE("densest-lattice brute force corroborates the low-dimension table") {
    // achievers
    Matrix hex(2, 2);
    hex << 1.0, 0.5, 0.0, std::sqrt(3.0) / 2.0;
    const double hex_ratio = std::pow(shortest_vector(LatticeBasis(hex)).length, 2) /
                             std::abs(hex.determinant());
    CHECK(hex_ratio == doctest::Approx(hermite_gamma_exact(2)).epsilon(1e-9));

    Matrix fcc(3, 3);
    fcc << 0, 1, 1,
           1, 0, 1,
           1, 1, 0;
    const double fcc_ratio = std::pow(shortest_vector(LatticeBasis(fcc)).length, 2) /
                             std::pow(std::abs(fcc.determinant()), 2.0 / 3.0);
    CHECK(fcc_ratio == doctest::Approx(hermite_gamma_exact(3)).epsilon(1e-9));

    // no random lattice beats the constant
    RngStream rng(41, 0);
    for (int k : {2, 3}) {
        for (int rep = 0; rep < 300; ++rep) {
            Matrix g = sample_gaussian_matrix(k, k, 1.0, rng);
            const double det = std::abs(g.determinant());
            if (det < 0.05) continue;
            const double ratio = std::pow(shortest_vector(LatticeBasis(g)).length, 2) /
                                 std::pow(det, 2.0 / k);
            CHECK(ratio <= hermite_gamma_exact(k) * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("if union bound against the summation oracle") {
    const double rbt = 14.0;
    Vector flat(2);
    flat << std::exp2(14.0), std::exp2(14.0);
    SourceSpectrum flat_spec(flat);
    // the flat spectrum leaves the candidate set empty at this excess rate
    const double v = if_union_bound(flat_spec, rbt, 6.0, false);
    CHECK(v == oracle_if_union(flat[0], flat[1], rbt, 6.0, false));
    CHECK(v == 0.0);

    Vector skew(2);
    skew << std::exp2(2.0 * 3.0), std::exp2(2.0 * 11.0);
    SourceSpectrum skew_spec(skew);
    for (double dr : {0.0, 2.0, 4.0, 6.0}) {
        const double got = if_union_bound(skew_spec, rbt, dr, true);
        const double want = oracle_if_union(skew[0], skew[1], rbt, dr, true);
        CHECK(got == doctest::Approx(want).epsilon(1e-9));
    }
    CHECK(if_union_bound(skew_spec, rbt, 0.0, true) > 0.0);
    CHECK(if_union_bound(skew_spec, rbt, 8.0, true) <
          if_union_bound(skew_spec, rbt, 4.0, true));
}

TEST_CASE("closed-form if constant and bound") {
    const double c2 = 2.0 * (5.0 / 3.0) * (5.0 + 3.0 * std::sqrt(2.0)) * kPi;
    CHECK(if_outage_constant(2, AlphaMode::Published) == doctest::Approx(c2).epsilon(1e-12));
    CHECK(c2 == doctest::Approx(96.79).epsilon(1e-3));
    CHECK(if_outage_bound(2, 10.0, AlphaMode::Published) ==
          doctest::Approx(0.0945).epsilon(1e-2));
    // c_max expands to 3 + 3 sqrt(2) at two sources
    const double k_plus_cmax = c2 / (2.0 * (5.0 / 3.0) * kPi);
    CHECK(k_plus_cmax == doctest::Approx(5.0 + 3.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("closed form dominates the union bound on a grid") {
    RngStream rng(42, 0);
    const double rbt = 12.0;
    for (int rep = 0; rep < 20; ++rep) {
        SourceSpectrum spec = random_compound_spectrum(2, rbt, rng);
        for (double dr : {0.0, 1.0, 3.0, 6.0, 9.0}) {
            const double lemma = if_union_bound(spec, rbt, dr, true);
            const double thm = 0.5 * if_outage_bound(2, dr, AlphaMode::Published);
            CHECK(lemma <= thm * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("successive union bound against the oracle and its regime") {
    const double rbt = 14.0;
    Vector d(2);
    d << std::exp2(13.0), std::exp2(15.0);
    SourceSpectrum spec(d);
    // candidate set is empty here
    const double empty = suc_union_bound(spec, rbt, 5.0, false);
    CHECK(empty == oracle_suc_union(d[0], d[1], rbt, 5.0, false));
    CHECK(empty == 0.0);

    Vector skew(2);
    skew << std::exp2(2.0 * 0.5), std::exp2(2.0 * 13.5);
    SourceSpectrum skew_spec(skew);
    for (double dr : {1.5, 3.0, 5.0, 8.0}) {
        const double got = suc_union_bound(skew_spec, rbt, dr, true);
        const double want = oracle_suc_union(skew[0], skew[1], rbt, dr, true);
        CHECK(got == doctest::Approx(want).epsilon(1e-9));
    }
    CHECK(suc_union_bound(skew_spec, rbt, 3.0, true) >
          suc_union_bound(skew_spec, rbt, 6.0, true));
    CHECK_THROWS_AS(suc_union_bound(spec, rbt, 1.0, true), OutOfRegime);

    Vector d3(3);
    d3 << 2.0, 2.0, 2.0;
    CHECK_THROWS_AS(suc_union_bound(SourceSpectrum(d3), 1.5, 2.0, true),
                    UnsupportedDimension);
}

TEST_CASE("closed-form successive constant") {
    const double c = 2.0 * kPi * (5.0 + 3.0 * std::sqrt(2.0));
    CHECK(suc_outage_constant() == doctest::Approx(c).epsilon(1e-12));
    CHECK(suc_outage_bound(std::log2(c)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(suc_outage_bound(10.0) == doctest::Approx(0.0567).epsilon(1e-2));
    CHECK_THROWS_AS(suc_outage_bound(0.5), OutOfRegime);

    RngStream rng(43, 0);
    const double rbt = 13.0;
    for (int rep = 0; rep < 20; ++rep) {
        SourceSpectrum spec = random_compound_spectrum(2, rbt, rng);
        for (double dr : {1.5, 3.0, 6.0})
            CHECK(suc_union_bound(spec, rbt, dr, true) <=
                  0.5 * suc_outage_bound(dr) * (1.0 + 1e-9));
    }
}

TEST_CASE("closed-form bounds scale exactly as 2^(-dr)") {
    for (double dr : {0.0, 1.25, 4.0}) {
        CHECK(if_outage_bound(2, dr + 1.0, AlphaMode::Published) ==
              doctest::Approx(0.5 * if_outage_bound(2, dr, AlphaMode::Published))
                  .epsilon(1e-15));
    }
    CHECK(suc_outage_bound(4.0) == doctest::Approx(0.5 * suc_outage_bound(3.0)).epsilon(1e-15));
}

TEST_CASE("nvd additive bound arithmetic") {
    CHECK(nvd_excess_bound(2, 1.0) == doctest::Approx(48.0).epsilon(1e-12));
    CHECK(nvd_excess_bound(2, 0.2) ==
          doctest::Approx(48.0 + 4.0 * std::log2(5.0)).epsilon(1e-12));
    CHECK(nvd_excess_bound(3, 1.0) == doctest::Approx(54.0 * std::log2(18.0)).epsilon(1e-12));
    CHECK(nvd_excess_bound(3, 1.0) == doctest::Approx(225.1).epsilon(1e-3));
    CHECK_THROWS_AS(nvd_excess_bound(2, 0.0), Error);
    CHECK_THROWS_AS(nvd_excess_bound(2, 1.5), Error);
}

TEST_CASE("grid slack factor") {
    CHECK(grid_slack_eta(2, 16.0, 0.01) == doctest::Approx(1.117).epsilon(1e-3));
    CHECK(2.0 * std::log2(grid_slack_eta(2, 16.0, 0.01)) ==
          doctest::Approx(0.320).epsilon(1e-2));

    double prev_slack = 1e300;
    for (double delta : {0.02, 0.01, 0.005, 0.0025}) {
        const double slack = 2.0 * std::log2(grid_slack_eta(2, 8.0, delta));
        CHECK(slack < prev_slack);
        CHECK(grid_slack_eta(2, 8.0, delta) >= 1.0);
        prev_slack = slack;
    }
    CHECK(prev_slack < 0.1);

    CHECK_THROWS_AS(grid_slack_eta(3, 6.0, 0.2), DegenerateGrid);
}

TEST_CASE("rate grid enumeration") {
    RateGrid half = enumerate_rate_grid(2, 16.0, 0.5);
    CHECK(half.tuples.size() == 3);
    RateGrid fine = enumerate_rate_grid(2, 16.0, 0.01);
    CHECK(fine.tuples.size() == 101);
    RateGrid three = enumerate_rate_grid(3, 10.0, 0.1);
    CHECK(three.tuples.size() == 66);
    for (const auto& t : three.tuples) CHECK(t.sum() == doctest::Approx(10.0).epsilon(1e-9));
    CHECK_THROWS_AS(enumerate_rate_grid(2, 16.0, 0.013), DegenerateGrid);
}

TEST_CASE("spectrum quantization") {
    RateGrid grid = enumerate_rate_grid(2, 16.0, 0.01);

    Vector on_grid(2);
    on_grid << 3.2, 12.8;
    QuantizedSpectrum q0 = quantize_spectrum(SourceSpectrum::from_rate_split(on_grid), grid);
    CHECK(q0.rates[0] == doctest::Approx(3.2).epsilon(1e-12));
    CHECK(q0.rates[1] == doctest::Approx(12.8).epsilon(1e-12));
    CHECK(q0.scale_factors[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(q0.scale_factors[1] == doctest::Approx(1.0).epsilon(1e-9));

    Vector r(2);
    r << 3.14, 12.86;
    QuantizedSpectrum q = quantize_spectrum(SourceSpectrum::from_rate_split(r), grid);
    CHECK(q.rates[0] == doctest::Approx(3.20).epsilon(1e-9));
    CHECK(q.rates[1] == doctest::Approx(12.80).epsilon(1e-9));

    Vector unsorted(2);
    unsorted << 12.86, 3.14;
    CHECK_THROWS_AS(quantize_spectrum(SourceSpectrum::from_rate_split(unsorted), grid), Error);

    // quantized variances cover the original ones within the eta envelope
    RngStream rng(44, 0);
    const double eta = grid_slack_eta(2, 16.0, 0.01);
    for (int rep = 0; rep < 2000; ++rep) {
        SourceSpectrum s = random_compound_spectrum(2, 16.0, rng);
        Vector rates = s.rate_split();
        std::sort(rates.data(), rates.data() + rates.size());
        SourceSpectrum sorted = SourceSpectrum::from_rate_split(rates);
        QuantizedSpectrum qq = quantize_spectrum(sorted, grid);
        for (int i = 0; i < 2; ++i) {
            const double s_sq = sorted.d[i] - 1.0;
            const double sq_sq = qq.spectrum.d[i] - 1.0;
            CHECK(s_sq <= eta * eta * sq_sq * (1.0 + 1e-9) + 1e-12);
        }
    }
}

TEST_CASE("grid guarantee covers random compound spectra") {
    RngStream rng(45, 0);
    Precoder cyclo = cyclotomic_precoder(2);
    GridGuarantee g = grid_rate_guarantee(2, 8.0, 0.01, cyclo.matrix);
    CHECK(g.bound == doctest::Approx(g.grid_max + g.slack).epsilon(1e-12));
    for (int rep = 0; rep < 500; ++rep) {
        SourceSpectrum s = random_compound_spectrum(2, 8.0, rng);
        const double rate = precoded_scheme_rate(s, cyclo.matrix, Scheme::If);
        CHECK(rate <= g.bound + 1e-9);
    }
}

TEST_CASE("cyclotomic precoders are orthonormal as printed") {
    Precoder p2 = cyclotomic_precoder(2);
    CHECK((p2.matrix.transpose() * p2.matrix - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
          1e-9);
    CHECK(p2.matrix.determinant() == doctest::Approx(-1.0).epsilon(1e-9));

    Precoder p3 = cyclotomic_precoder(3);
    CHECK((p3.matrix.transpose() * p3.matrix - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <
          1e-9);

    CHECK_THROWS_AS(cyclotomic_precoder(4), UnsupportedDimension);
}

TEST_CASE("transference inequality between primal and dual minima") {
    RngStream rng(46, 0);
    for (int k : {2, 3, 4, 6}) {
        const double envelope = transference_constant(k, AlphaMode::Exact);
        for (int rep = 0; rep < 25; ++rep) {
            Matrix g = sample_gaussian_matrix(k, k, 1.0, rng);
            if (std::abs(g.determinant()) < 0.05) continue;
            LatticeBasis primal(g);
            const double lam_k = successive_minima(primal).lengths[k - 1];
            const double dual_lam1 = shortest_vector(dual_basis(primal)).length;
            CHECK(dual_lam1 * dual_lam1 * lam_k * lam_k <= envelope * (1.0 + 1e-9));
        }
    }
}
