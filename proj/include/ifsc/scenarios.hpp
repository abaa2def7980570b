#pragma once

#include <cstdint>
#include <functional>

#include "ifsc/bounds.hpp"
#include "ifsc/rng.hpp"

namespace ifsc {

/// Compound-class spectra on a rate-split grid: every nondecreasing tuple of
/// nonnegative multiples of step summing to rbt (permutations deduplicated,
/// which is harmless under Haar precoding).
std::vector<SourceSpectrum> spectrum_grid(int k, double rbt, double step);

struct OutageEstimate {
    double probability = 0.0;
    double half_width = 0.0;  // Wilson 95%
    std::uint64_t trials = 0;
};

/// P(rate of `scheme` under Haar precoding > r_target); trial i draws its
/// own stream derived from rng.
OutageEstimate estimate_outage(const SourceSpectrum& d, Scheme scheme, double r_target,
                               std::uint64_t trials, const RngStream& rng);

double wilson_half_width(std::uint64_t successes, std::uint64_t trials);

struct OutageCurve {
    Scheme scheme = Scheme::If;
    int k = 0;
    double rbt = 0.0;
    double grid_step = 0.0;
    std::uint64_t trials_per_point = 0;
    std::uint64_t seed = 0;
    std::vector<double> dr;
    std::vector<double> outage;        // worst case over the spectrum grid
    std::vector<double> half_width;    // at the argmax spectrum
    std::vector<int> argmax_spectrum;  // index into spectra_rates
    std::vector<Vector> spectra_rates; // rate splits of the grid spectra
};

/// Worst-case outage over the spectrum grid, one Monte-Carlo pass per grid
/// point shared across the whole dr grid. Trial t of grid point p uses the
/// stream (seed, p * 2^32 + t), so results are identical for any worker
/// count.
OutageCurve worst_case_outage_curve(int k, double rbt, const std::vector<double>& dr_grid,
                                    double grid_step, std::uint64_t trials, Scheme scheme,
                                    std::uint64_t seed, int workers = 1);

struct CranModel {
    int k = 2;       // relays
    int m = 2;       // transmitters
    double snr = 1.0;
};

/// K_xx = snr * H H^T + I with H a k x m standard Gaussian matrix.
CovarianceMatrix cran_covariance(const CranModel& model, RngStream& rng);

struct CranCurve {
    CranModel model;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    Scheme scheme = Scheme::If;
    std::vector<double> dr;
    std::vector<double> outage;  // P(rate - R_BT(sample) > dr)
    std::vector<double> half_width;
};

/// Outage of IF on sampled relay covariances; the benchmark is per-sample.
CranCurve cran_outage_curve(const CranModel& model, const std::vector<double>& dr_grid,
                            std::uint64_t trials, Scheme scheme, std::uint64_t seed,
                            int workers = 1);

struct BoundComparison {
    int k = 0;
    double rbt = 0.0;
    double grid_step = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    bool halved = true;
    AlphaMode alpha_mode = AlphaMode::Published;
    std::vector<double> dr;
    std::vector<double> if_outage, if_half_width;
    std::vector<double> suc_outage, suc_half_width;
    std::vector<double> if_union_max;   // max over the spectrum grid
    std::vector<double> if_closed;
    std::vector<double> suc_union_max;  // NaN outside the dr > 1 regime or K != 2
    std::vector<double> suc_closed;
    std::vector<BoundCurve> bound_curves;  // the same four columns, labeled
};

/// Empirical worst-case curves next to the analytic bounds on a shared dr
/// grid; bound columns carry the halving convention of `halve`.
BoundComparison bound_vs_empirical_report(int k, double rbt, const std::vector<double>& dr_grid,
                                          double grid_step, std::uint64_t trials,
                                          std::uint64_t seed, bool halve, AlphaMode mode,
                                          int workers = 1);

/// Deterministic helper: run fn(i) for i in [0, n) on `workers` threads.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

}  // namespace ifsc
