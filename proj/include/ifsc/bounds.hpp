#pragma once

#include <string>
#include <vector>

#include "ifsc/rates.hpp"

namespace ifsc {

/// Which reading of the Hermite-constant envelope to use. Published keeps
/// the mixed form as printed in the source derivation (exact gamma_K^2 for
/// K in {1..8, 24}, the unsquared Blichfeldt expression elsewhere); Exact
/// uses (K+3)/4 * gamma_bar_K^2 throughout, with gamma_bar_K the running
/// maximum of exact values where known and the Blichfeldt bound elsewhere.
enum class AlphaMode { Published, Exact };

/// Exact Hermite constant for K in {1..8, 24}.
double hermite_gamma_exact(int k);

/// Blichfeldt upper bound (2/pi) Gamma(2 + K/2)^(2/K).
double blichfeldt_gamma_bound(int k);

/// max{gamma_i : 1 <= i <= K} with exact values where known.
double hermite_gamma_bar(int k);

/// The transference envelope alpha_K relating the optimal IF rate to the
/// shortest dual vector.
double transference_constant(int k, AlphaMode mode);

/// Union bound on the outage of plain IF for one spectrum of the compound
/// class: sums the cap-to-surface ratio over integer vectors shorter than
/// sqrt(beta d_max) with beta = alpha * 2^(-2(R_BT+dr)/K). halve applies
/// the +-a pairing factor 1/2.
double if_union_bound(const SourceSpectrum& d, double rbt, double dr, bool halve,
                      AlphaMode mode = AlphaMode::Published,
                      const EnumerationOptions& opts = {});

/// Closed-form constant c(K) of the spectrum-free IF outage bound.
double if_outage_constant(int k, AlphaMode mode);

/// c(K) * 2^(-dr); independent of the benchmark rate.
double if_outage_bound(int k, double dr, AlphaMode mode);

/// Union bound on the outage of successive IF for two sources: sums over
/// primitive integer vectors shorter than sqrt(beta / d_min) with
/// beta = 2^(R_BT - dr). Valid in the regime dr > 1 only.
double suc_union_bound(const SourceSpectrum& d, double rbt, double dr, bool halve,
                       const EnumerationOptions& opts = {});

/// 2 pi (5 + 3 sqrt 2).
double suc_outage_constant();

/// suc_outage_constant() * 2^(-dr), dr > 1.
double suc_outage_bound(double dr);

/// Additive excess-rate guarantee of NVD space-time precoding, in bits per
/// time extension: 2 K^3 log2(2 K^2) + K^2 log2(1/delta_min).
double nvd_excess_bound(int k, double delta_min);

/// Slack factor eta >= 1 that converts a maximum over the quantized rate
/// grid into a guarantee over the whole compound class of uncorrelated
/// sources. delta is the grid resolution as a fraction of R_BT.
double grid_slack_eta(int k, double rbt, double delta);

struct RateGrid {
    int k = 0;
    double rbt = 0.0;
    double delta = 0.0;
    double step = 0.0;           // delta * rbt
    std::vector<Vector> tuples;  // every composition of rbt into k multiples of step
};

RateGrid enumerate_rate_grid(int k, double rbt, double delta);

struct QuantizedSpectrum {
    SourceSpectrum spectrum;  // on the grid
    Vector rates;             // quantized rate tuple
    Vector scale_factors;     // per-source alpha_i
};

/// Ceil-to-grid quantization with the last (largest) rate absorbing the
/// correction so the tuple stays on the simplex. Input rates must be
/// sorted ascending.
QuantizedSpectrum quantize_spectrum(const SourceSpectrum& s, const RateGrid& grid);

struct GridGuarantee {
    double bound = 0.0;     // grid_max + slack
    double grid_max = 0.0;  // max optimal IF rate over the quantized spectra
    double slack = 0.0;     // K log2(eta)
    Vector argmax_rates;
};

/// Worst-case rate guarantee for precoded IF over uncorrelated sources:
/// exhausts the quantized spectrum grid and adds the eta slack.
GridGuarantee grid_rate_guarantee(int k, double rbt, double delta, const Matrix& precoder);

/// The fixed space-only precoders for two and three sources.
Precoder cyclotomic_precoder(int k);

struct BoundCurve {
    std::string id;  // "if-union", "if-closed", "suc-union", "suc-closed", "nvd-additive", "grid-guarantee"
    int k = 0;
    double rbt = 0.0;
    bool halved = false;
    std::vector<double> dr;
    std::vector<double> value;  // raw values; clipping to [0,1] is presentation only
};

}  // namespace ifsc
