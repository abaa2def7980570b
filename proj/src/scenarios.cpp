#include "ifsc/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

namespace ifsc {

namespace {

constexpr double kZ95 = 1.959963984540054;  // two-sided 95% normal quantile

void check_dr_grid(const std::vector<double>& dr_grid) {
    if (dr_grid.empty())
        throw Error(ErrorClass::Validation, "dr grid must be nonempty");
    for (std::size_t i = 0; i + 1 < dr_grid.size(); ++i)
        if (!(dr_grid[i] < dr_grid[i + 1]))
            throw Error(ErrorClass::Validation, "dr grid must be strictly increasing");
}

}  // namespace

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
    workers = std::max(1, workers);
    if (workers == 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int spawn = std::min(workers, n);
    pool.reserve(spawn);
    for (int w = 0; w < spawn; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

double wilson_half_width(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) return 1.0;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / n;
    return kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
}

std::vector<SourceSpectrum> spectrum_grid(int k, double rbt, double step) {
    if (k < 1) throw Error(ErrorClass::Validation, "spectrum_grid: K must be >= 1");
    if (!(step > 0.0)) throw DegenerateGrid("spectrum_grid: step must be positive");
    if (!(rbt >= 0.0)) throw Error(ErrorClass::Validation, "spectrum_grid: rbt must be >= 0");
    const long long n = std::llround(rbt / step);
    if (std::abs(n * step - rbt) > 1e-9 * std::max(1.0, rbt))
        throw DegenerateGrid("spectrum_grid: step does not divide the benchmark rate");

    std::vector<SourceSpectrum> out;
    std::vector<long long> parts(k, 0);
    // nondecreasing compositions of n: one representative per permutation class
    auto rec = [&](auto&& self, int slot, long long remaining, long long minimum) -> void {
        if (slot == k - 1) {
            if (remaining < minimum) return;
            parts[slot] = remaining;
            Vector rates(k);
            for (int i = 0; i < k; ++i) rates[i] = parts[i] * step;
            out.push_back(SourceSpectrum::from_rate_split(rates));
            return;
        }
        for (long long c = minimum; c * (k - slot) <= remaining; ++c) {
            parts[slot] = c;
            self(self, slot + 1, remaining - c, c);
        }
    };
    rec(rec, 0, n, 0);
    return out;
}

OutageEstimate estimate_outage(const SourceSpectrum& d, Scheme scheme, double r_target,
                               std::uint64_t trials, const RngStream& rng) {
    if (trials < 100)
        throw Error(ErrorClass::Validation, "estimate_outage: at least 100 trials required");
    const int k = d.source_count();
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        RngStream stream = rng.substream(t);
        Matrix u = sample_haar_orthogonal(k, stream);
        if (precoded_scheme_rate(d, u, scheme) > r_target) ++hits;
    }
    return OutageEstimate{static_cast<double>(hits) / static_cast<double>(trials),
                          wilson_half_width(hits, trials), trials};
}

OutageCurve worst_case_outage_curve(int k, double rbt, const std::vector<double>& dr_grid,
                                    double grid_step, std::uint64_t trials, Scheme scheme,
                                    std::uint64_t seed, int workers) {
    check_dr_grid(dr_grid);
    if (trials < 1) throw Error(ErrorClass::Validation, "worst_case_outage_curve: trials >= 1");
    if (trials >= (1ull << 32))
        throw Error(ErrorClass::Validation, "worst_case_outage_curve: trials exceed the stream block");
    std::vector<SourceSpectrum> spectra = spectrum_grid(k, rbt, grid_step);
    const int points = static_cast<int>(spectra.size());
    const int ndr = static_cast<int>(dr_grid.size());

    // counts[p][j] = trials with rate gap > dr_grid[j]
    std::vector<std::vector<std::uint64_t>> counts(points, std::vector<std::uint64_t>(ndr, 0));
    parallel_for(points, workers, [&](int p) {
        std::vector<std::uint64_t> hist(ndr + 1, 0);
        const SourceSpectrum& spec = spectra[p];
        for (std::uint64_t t = 0; t < trials; ++t) {
            RngStream stream(seed, (static_cast<std::uint64_t>(p) << 32) | t);
            Matrix u = sample_haar_orthogonal(k, stream);
            const double gap = precoded_scheme_rate(spec, u, scheme) - rbt;
            // gap exceeds dr_grid[j] exactly for j < lb
            const auto lb = std::lower_bound(dr_grid.begin(), dr_grid.end(), gap);
            ++hist[static_cast<std::size_t>(lb - dr_grid.begin())];
        }
        std::uint64_t suffix = 0;
        for (int j = ndr; j >= 1; --j) {
            suffix += hist[j];
            counts[p][j - 1] = suffix;
        }
    });

    OutageCurve curve;
    curve.scheme = scheme;
    curve.k = k;
    curve.rbt = rbt;
    curve.grid_step = grid_step;
    curve.trials_per_point = trials;
    curve.seed = seed;
    curve.dr = dr_grid;
    curve.outage.resize(ndr);
    curve.half_width.resize(ndr);
    curve.argmax_spectrum.resize(ndr);
    curve.spectra_rates.reserve(points);
    for (const auto& s : spectra) curve.spectra_rates.push_back(s.rate_split());
    for (int j = 0; j < ndr; ++j) {
        int arg = 0;
        for (int p = 1; p < points; ++p)
            if (counts[p][j] > counts[arg][j]) arg = p;
        curve.argmax_spectrum[j] = arg;
        curve.outage[j] =
            static_cast<double>(counts[arg][j]) / static_cast<double>(trials);
        curve.half_width[j] = wilson_half_width(counts[arg][j], trials);
    }
    return curve;
}

CovarianceMatrix cran_covariance(const CranModel& model, RngStream& rng) {
    if (model.k < 1 || model.m < 1)
        throw Error(ErrorClass::Validation, "cran_covariance: K and M must be >= 1");
    if (model.snr < 0.0)
        throw Error(ErrorClass::Validation, "cran_covariance: snr must be >= 0");
    Matrix h = sample_gaussian_matrix(model.k, model.m, 1.0, rng);
    if (model.snr != 1.0) h *= std::sqrt(model.snr);
    Matrix k_xx = h * h.transpose() + Matrix::Identity(model.k, model.k);
    return CovarianceMatrix(0.5 * (k_xx + k_xx.transpose()));
}

CranCurve cran_outage_curve(const CranModel& model, const std::vector<double>& dr_grid,
                            std::uint64_t trials, Scheme scheme, std::uint64_t seed,
                            int workers) {
    check_dr_grid(dr_grid);
    if (trials < 1) throw Error(ErrorClass::Validation, "cran_outage_curve: trials >= 1");
    const int ndr = static_cast<int>(dr_grid.size());
    const int blocks = std::max(1, std::min<int>(256, static_cast<int>(trials / 64 + 1)));
    const std::uint64_t per_block = (trials + blocks - 1) / blocks;

    std::vector<std::vector<std::uint64_t>> hists(blocks,
                                                  std::vector<std::uint64_t>(ndr + 1, 0));
    parallel_for(blocks, workers, [&](int b) {
        const std::uint64_t begin = b * per_block;
        const std::uint64_t end = std::min<std::uint64_t>(trials, begin + per_block);
        for (std::uint64_t t = begin; t < end; ++t) {
            RngStream stream(seed, t);
            CovarianceMatrix k_xx = cran_covariance(model, stream);
            const double rbt = berger_tung_rate(k_xx);
            double rate;
            if (scheme == Scheme::If) {
                Matrix f = cholesky_lower(Matrix::Identity(model.k, model.k) + k_xx.m);
                SuccessiveMinima minima = successive_minima(LatticeBasis(f.transpose()));
                rate = model.k * std::log2(minima.lengths[model.k - 1]);
            } else {
                rate = if_suc_opt_rate(k_xx).rate;
            }
            const double gap = rate - rbt;
            const auto lb = std::lower_bound(dr_grid.begin(), dr_grid.end(), gap);
            ++hists[b][static_cast<std::size_t>(lb - dr_grid.begin())];
        }
    });

    std::vector<std::uint64_t> hist(ndr + 1, 0);
    for (const auto& h : hists)
        for (int j = 0; j <= ndr; ++j) hist[j] += h[j];

    CranCurve curve;
    curve.model = model;
    curve.trials = trials;
    curve.seed = seed;
    curve.scheme = scheme;
    curve.dr = dr_grid;
    curve.outage.resize(ndr);
    curve.half_width.resize(ndr);
    std::uint64_t suffix = 0;
    std::vector<std::uint64_t> counts(ndr, 0);
    for (int j = ndr; j >= 1; --j) {
        suffix += hist[j];
        counts[j - 1] = suffix;
    }
    for (int j = 0; j < ndr; ++j) {
        curve.outage[j] = static_cast<double>(counts[j]) / static_cast<double>(trials);
        curve.half_width[j] = wilson_half_width(counts[j], trials);
    }
    return curve;
}

BoundComparison bound_vs_empirical_report(int k, double rbt, const std::vector<double>& dr_grid,
                                          double grid_step, std::uint64_t trials,
                                          std::uint64_t seed, bool halve, AlphaMode mode,
                                          int workers) {
    check_dr_grid(dr_grid);
    BoundComparison report;
    report.k = k;
    report.rbt = rbt;
    report.grid_step = grid_step;
    report.trials = trials;
    report.seed = seed;
    report.halved = halve;
    report.alpha_mode = mode;
    report.dr = dr_grid;

    OutageCurve if_curve =
        worst_case_outage_curve(k, rbt, dr_grid, grid_step, trials, Scheme::If, seed, workers);
    report.if_outage = if_curve.outage;
    report.if_half_width = if_curve.half_width;
    if (k == 2) {
        OutageCurve suc_curve = worst_case_outage_curve(k, rbt, dr_grid, grid_step, trials,
                                                        Scheme::IfSuc, seed, workers);
        report.suc_outage = suc_curve.outage;
        report.suc_half_width = suc_curve.half_width;
    } else {
        report.suc_outage.assign(dr_grid.size(), std::numeric_limits<double>::quiet_NaN());
        report.suc_half_width = report.suc_outage;
    }

    std::vector<SourceSpectrum> spectra = spectrum_grid(k, rbt, grid_step);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double thm_factor = halve ? 0.5 : 1.0;
    for (double dr : dr_grid) {
        double union_if = 0.0;
        for (const auto& spec : spectra)
            union_if = std::max(union_if, if_union_bound(spec, rbt, dr, halve, mode));
        report.if_union_max.push_back(union_if);
        report.if_closed.push_back(thm_factor * if_outage_bound(k, dr, mode));
        if (k == 2 && dr > 1.0) {
            double union_suc = 0.0;
            for (const auto& spec : spectra)
                union_suc = std::max(union_suc, suc_union_bound(spec, rbt, dr, halve));
            report.suc_union_max.push_back(union_suc);
            report.suc_closed.push_back(thm_factor * suc_outage_bound(dr));
        } else {
            report.suc_union_max.push_back(nan);
            report.suc_closed.push_back(nan);
        }
    }
    auto label = [&](const char* id, const std::vector<double>& values) {
        BoundCurve curve;
        curve.id = id;
        curve.k = k;
        curve.rbt = rbt;
        curve.halved = halve;
        curve.dr = dr_grid;
        curve.value = values;
        report.bound_curves.push_back(std::move(curve));
    };
    label("if-union", report.if_union_max);
    label("if-closed", report.if_closed);
    label("suc-union", report.suc_union_max);
    label("suc-closed", report.suc_closed);
    return report;
}

}  // namespace ifsc
