#include "ifsc/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace ifsc {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

void check_compound(const SourceSpectrum& d, double rbt, const char* who) {
    if (std::abs(d.berger_tung() - rbt) > 1e-6 * std::max(1.0, std::abs(rbt)))
        throw Error(ErrorClass::Validation,
                    std::string(who) + ": spectrum is not in the compound class of the given rate");
}

long long ceil_with_tolerance(double x) {
    return static_cast<long long>(std::ceil(x - 1e-9));
}

}  // namespace

double hermite_gamma_exact(int k) {
    // gamma_K^K for K = 1..8, plus the 24-dimensional value.
    switch (k) {
        case 1: return 1.0;
        case 2: return std::sqrt(4.0 / 3.0);
        case 3: return std::cbrt(2.0);
        case 4: return std::sqrt(2.0);
        case 5: return std::pow(8.0, 1.0 / 5.0);
        case 6: return std::pow(64.0 / 3.0, 1.0 / 6.0);
        case 7: return std::pow(64.0, 1.0 / 7.0);
        case 8: return 2.0;
        case 24: return 4.0;
        default:
            throw UnsupportedDimension("hermite_gamma_exact: known only for K in {1..8, 24}");
    }
}

double blichfeldt_gamma_bound(int k) {
    if (k < 1) throw Error(ErrorClass::Validation, "blichfeldt_gamma_bound: K must be >= 1");
    return (2.0 / kPi) * std::pow(std::tgamma(2.0 + 0.5 * k), 2.0 / k);
}

double hermite_gamma_bar(int k) {
    if (k < 1) throw Error(ErrorClass::Validation, "hermite_gamma_bar: K must be >= 1");
    double best = 0.0;
    for (int i = 1; i <= k; ++i) {
        const bool exact = (i >= 1 && i <= 8) || i == 24;
        best = std::max(best, exact ? hermite_gamma_exact(i) : blichfeldt_gamma_bound(i));
    }
    return best;
}

double transference_constant(int k, AlphaMode mode) {
    if (k < 1) throw Error(ErrorClass::Validation, "transference_constant: K must be >= 1");
    const double lead = 0.25 * (k + 3);
    if (mode == AlphaMode::Exact) {
        const double gb = hermite_gamma_bar(k);
        return lead * gb * gb;
    }
    const bool exact = (k >= 1 && k <= 8) || k == 24;
    if (exact) {
        const double g = hermite_gamma_exact(k);
        return lead * g * g;
    }
    return lead * blichfeldt_gamma_bound(k);  // unsquared, as printed
}

double if_union_bound(const SourceSpectrum& d, double rbt, double dr, bool halve,
                      AlphaMode mode, const EnumerationOptions& opts) {
    check_compound(d, rbt, "if_union_bound");
    if (dr < 0) throw Error(ErrorClass::Validation, "if_union_bound: excess rate must be >= 0");
    const int k = d.source_count();
    const double alpha = transference_constant(k, mode);
    const double beta = alpha * std::exp2(-2.0 * (rbt + dr) / k);
    const double d_max = d.d_max();
    const double radius = std::sqrt(beta * d_max);
    IntegerVectorSet set = integer_points_in_ball(k, radius, false, opts);
    const double numerator =
        k * std::pow(alpha, 0.5 * (k - 1)) * std::exp2(-(k - 1.0) / k * (rbt + dr));
    double sum = 0.0;
    for (const auto& a : set.vectors) {
        const double norm = std::sqrt(static_cast<double>(a.squaredNorm()));
        sum += numerator * std::exp2(rbt) / (std::pow(norm, k - 1) * std::sqrt(d_max));
    }
    return halve ? 0.5 * sum : sum;
}

double if_outage_constant(int k, AlphaMode mode) {
    if (k < 1) throw Error(ErrorClass::Validation, "if_outage_constant: K must be >= 1");
    const double alpha = transference_constant(k, mode);
    const double sqrt_k = std::sqrt(static_cast<double>(k));
    double c_max;
    if (k < 4)
        c_max = std::pow(2.0 + 0.5 * sqrt_k, k) - std::pow(1.0 - 0.5 * sqrt_k, k);
    else
        c_max = std::pow(1.0 + sqrt_k, k);
    const double unit_ball = std::pow(kPi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
    return k * std::pow(alpha, 0.5 * k) * (k + c_max) * unit_ball;
}

double if_outage_bound(int k, double dr, AlphaMode mode) {
    if (dr < 0) throw Error(ErrorClass::Validation, "if_outage_bound: excess rate must be >= 0");
    return if_outage_constant(k, mode) * std::exp2(-dr);
}

double suc_union_bound(const SourceSpectrum& d, double rbt, double dr, bool halve,
                       const EnumerationOptions& opts) {
    if (d.source_count() != 2)
        throw UnsupportedDimension("suc_union_bound: derived for two sources only");
    check_compound(d, rbt, "suc_union_bound");
    if (!(dr > 1.0))
        throw OutOfRegime("suc_union_bound: valid only for excess rates above one bit");
    const double beta = std::exp2(rbt - dr);
    const double d_min = d.d_min();
    const double radius = std::sqrt(beta / d_min);
    IntegerVectorSet set = integer_points_in_ball(2, radius, /*primitive_only=*/true, opts);
    double sum = 0.0;
    for (const auto& a : set.vectors) {
        const double norm = std::sqrt(static_cast<double>(a.squaredNorm()));
        sum += 2.0 * std::sqrt(beta) * std::sqrt(d_min) / (norm * std::exp2(rbt));
    }
    return halve ? 0.5 * sum : sum;
}

double suc_outage_constant() { return 2.0 * kPi * (5.0 + 3.0 * std::sqrt(2.0)); }

double suc_outage_bound(double dr) {
    if (!(dr > 1.0))
        throw OutOfRegime("suc_outage_bound: valid only for excess rates above one bit");
    return suc_outage_constant() * std::exp2(-dr);
}

double nvd_excess_bound(int k, double delta_min) {
    if (k < 1) throw Error(ErrorClass::Validation, "nvd_excess_bound: K must be >= 1");
    if (!(delta_min > 0.0) || delta_min > 1.0)
        throw Error(ErrorClass::Validation, "nvd_excess_bound: delta_min must lie in (0, 1]");
    const double kd = static_cast<double>(k);
    return 2.0 * kd * kd * kd * std::log2(2.0 * kd * kd) + kd * kd * std::log2(1.0 / delta_min);
}

double grid_slack_eta(int k, double rbt, double delta) {
    if (k < 1 || !(rbt > 0.0) || !(delta > 0.0))
        throw Error(ErrorClass::Validation, "grid_slack_eta: bad arguments");
    const double per_source = rbt / k;
    const double reduced = per_source - (k - 1) * delta * rbt;
    if (!(reduced > 0.0))
        throw DegenerateGrid("grid_slack_eta: grid too coarse, denominator exponent not positive");
    return std::sqrt((std::exp2(2.0 * per_source) - 1.0) / (std::exp2(2.0 * reduced) - 1.0));
}

RateGrid enumerate_rate_grid(int k, double rbt, double delta) {
    if (k < 1 || !(rbt > 0.0) || !(delta > 0.0))
        throw DegenerateGrid("enumerate_rate_grid: bad arguments");
    const double step = delta * rbt;
    const long long n = std::llround(rbt / step);
    if (n < 1 || std::abs(n * step - rbt) > 1e-9 * std::max(1.0, rbt))
        throw DegenerateGrid("enumerate_rate_grid: step does not divide the benchmark rate");

    RateGrid grid;
    grid.k = k;
    grid.rbt = rbt;
    grid.delta = delta;
    grid.step = step;

    // Guard against combinatorial blowups before recursing.
    double count = 1.0;
    for (int i = 1; i < k; ++i) count *= static_cast<double>(n + i) / i;
    if (count > 5e6) throw BudgetExceeded("enumerate_rate_grid: grid would be too large");

    std::vector<long long> parts(k, 0);
    auto rec = [&](auto&& self, int slot, long long remaining) -> void {
        if (slot == k - 1) {
            parts[slot] = remaining;
            Vector tuple(k);
            for (int i = 0; i < k; ++i) tuple[i] = parts[i] * step;
            grid.tuples.push_back(std::move(tuple));
            return;
        }
        for (long long c = 0; c <= remaining; ++c) {
            parts[slot] = c;
            self(self, slot + 1, remaining - c);
        }
    };
    rec(rec, 0, n);
    return grid;
}

QuantizedSpectrum quantize_spectrum(const SourceSpectrum& s, const RateGrid& grid) {
    const int k = s.source_count();
    if (k != grid.k)
        throw Error(ErrorClass::Validation, "quantize_spectrum: dimension mismatch");
    check_compound(s, grid.rbt, "quantize_spectrum");
    grid_slack_eta(k, grid.rbt, grid.delta);  // in-regime check

    Vector rates = s.rate_split();
    for (int i = 0; i + 1 < k; ++i)
        if (rates[i] > rates[i + 1] + 1e-12)
            throw Error(ErrorClass::Validation,
                        "quantize_spectrum: rates must be sorted ascending");

    Vector quantized(k);
    double correction = 0.0;
    for (int i = 0; i + 1 < k; ++i) {
        quantized[i] = ceil_with_tolerance(rates[i] / grid.step) * grid.step;
        correction += quantized[i] - rates[i];
    }
    quantized[k - 1] = rates[k - 1] - correction;
    if (quantized[k - 1] < -1e-9)
        throw DegenerateGrid("quantize_spectrum: correction drove the last rate negative");
    quantized[k - 1] = std::max(quantized[k - 1], 0.0);

    Vector alpha(k);
    for (int i = 0; i < k; ++i) {
        if (rates[i] <= 1e-12 && quantized[i] <= 1e-12) {
            alpha[i] = 1.0;
        } else {
            alpha[i] = std::sqrt((std::exp2(2.0 * quantized[i]) - 1.0) /
                                 (std::exp2(2.0 * rates[i]) - 1.0));
        }
    }
    return QuantizedSpectrum{SourceSpectrum::from_rate_split(quantized), quantized, alpha};
}

GridGuarantee grid_rate_guarantee(int k, double rbt, double delta, const Matrix& precoder) {
    if (precoder.rows() != k || precoder.cols() != k)
        throw Error(ErrorClass::Validation, "grid_rate_guarantee: precoder has the wrong shape");
    Matrix err = precoder.transpose() * precoder - Matrix::Identity(k, k);
    if (err.cwiseAbs().maxCoeff() > 1e-9)
        throw NonUnitaryPrecoder("grid_rate_guarantee: precoder is not orthonormal");

    RateGrid grid = enumerate_rate_grid(k, rbt, delta);
    const double eta = grid_slack_eta(k, rbt, delta);

    GridGuarantee out;
    out.slack = k * std::log2(eta);
    out.grid_max = -std::numeric_limits<double>::infinity();
    for (const auto& tuple : grid.tuples) {
        SourceSpectrum spec = SourceSpectrum::from_rate_split(tuple);
        const double rate = precoded_scheme_rate(spec, precoder, Scheme::If);
        if (rate > out.grid_max) {
            out.grid_max = rate;
            out.argmax_rates = tuple;
        }
    }
    out.bound = out.grid_max + out.slack;
    return out;
}

Precoder cyclotomic_precoder(int k) {
    Precoder p;
    p.kind = PrecoderKind::Cyclotomic;
    if (k == 2) {
        p.matrix = Matrix(2, 2);
        p.matrix << -0.5257311121, -0.8506508083,
                    -0.8506508083,  0.5257311121;
    } else if (k == 3) {
        p.matrix = Matrix(3, 3);
        p.matrix << -0.3279852776, -0.5910090485, -0.7369762291,
                    -0.7369762291, -0.3279852776,  0.5910090485,
                    -0.5910090485,  0.7369762291, -0.3279852776;
    } else {
        throw UnsupportedDimension("cyclotomic_precoder: only two and three sources are shipped");
    }
    return p;
}

}  // namespace ifsc
