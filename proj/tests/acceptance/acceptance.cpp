// Acceptance suite: end-to-end checks of the figure markers, bound
// dominance, algebraic identities, oracle equivalence, grid guarantees,
// space-time sanity, relay-model equivalence, and artifact determinism.
// Prints one pass/fail line per criterion; exit code is the failure count.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "../oracles.hpp"
#include "ifsc/cli.hpp"
#include "ifsc/scenarios.hpp"

using namespace ifsc;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", index, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

int workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<double> linspace_grid(double start, double stop, double step) {
    std::vector<double> out;
    const long long n = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
    for (long long i = 0; i <= n; ++i) out.push_back(start + i * step);
    return out;
}

// First excess rate at which the worst-case complement reaches `level`,
// linearly interpolated between grid points.
double complement_crossing(const OutageCurve& curve, double level) {
    double prev_dr = curve.dr.front();
    double prev_c = 1.0 - curve.outage.front();
    for (std::size_t j = 0; j < curve.dr.size(); ++j) {
        const double c = 1.0 - curve.outage[j];
        if (c >= level) {
            if (j == 0 || c == prev_c) return curve.dr[j];
            return prev_dr + (level - prev_c) * (curve.dr[j] - prev_dr) / (c - prev_c);
        }
        prev_dr = curve.dr[j];
        prev_c = c;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

SourceSpectrum random_compound_spectrum(int k, double rbt, RngStream& rng) {
    Vector e(k);
    for (int i = 0; i < k; ++i) e[i] = -std::log(1.0 - rng.uniform());
    e *= rbt / e.sum();
    return SourceSpectrum::from_rate_split(e);
}

CovarianceMatrix random_covariance(int n, double rate_spread, RngStream& rng) {
    Matrix u = sample_haar_orthogonal(n, rng);
    Vector eig(n);
    for (int i = 0; i < n; ++i) eig[i] = std::exp2(2.0 * rate_spread * rng.uniform()) - 1.0;
    Matrix m = u * eig.asDiagonal() * u.transpose();
    return CovarianceMatrix(0.5 * (m + m.transpose()));
}

void criterion_1_and_2() {
    const std::uint64_t trials = 20000;
    const double step = 0.05;
    const std::vector<double> dr = linspace_grid(2.0, 7.8, 0.05);

    OutageCurve c16 = worst_case_outage_curve(2, 16.0, dr, step, trials, Scheme::If, 101,
                                              workers());
    const double x90 = complement_crossing(c16, 0.90);
    const double x95 = complement_crossing(c16, 0.95);
    const double x99 = complement_crossing(c16, 0.99);
    const bool pass1 = std::abs(x90 - 3.292) <= 0.25 && std::abs(x95 - 4.293) <= 0.25 &&
                       std::abs(x99 - 6.665) <= 0.35;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "crossings 90/95/99%%: %.3f/%.3f/%.3f vs 3.292/4.293/6.665 "
                  "(tolerance 0.25/0.25/0.35)",
                  x90, x95, x99);
    report(1, "worst-case complement markers at R_BT=16", pass1, buf);

    OutageCurve c8 =
        worst_case_outage_curve(2, 8.0, dr, step, trials, Scheme::If, 101, workers());
    OutageCurve c4 =
        worst_case_outage_curve(2, 4.0, dr, step, trials, Scheme::If, 101, workers());
    const double x90_8 = complement_crossing(c8, 0.90);
    const double x90_4 = complement_crossing(c4, 0.90);
    const bool pass2 = std::abs(x90_8 - x90) <= 0.3;
    std::snprintf(buf, sizeof buf,
                  "90%% crossings at R_BT 4/8/16: %.3f/%.3f/%.3f; |x(8)-x(16)| = %.3f <= 0.3",
                  x90_4, x90_8, x90, std::abs(x90_8 - x90));
    report(2, "curves converge as the benchmark rate grows", pass2, buf);
}

void criterion_3() {
    const double rbt = 14.0;
    const std::vector<double> dr = linspace_grid(0.5, 12.0, 0.5);
    BoundComparison rep = bound_vs_empirical_report(2, rbt, dr, 0.05, 20000, 303, true,
                                                    AlphaMode::Published, workers());
    int violations = 0;
    std::string first;
    for (std::size_t j = 0; j < dr.size(); ++j) {
        if (rep.if_union_max[j] <= 1.0 &&
            rep.if_outage[j] > rep.if_union_max[j] + 3.0 * rep.if_half_width[j]) {
            ++violations;
            if (first.empty()) first = "plain-IF union bound at dr=" + format_double(dr[j]);
        }
        if (rep.if_union_max[j] > rep.if_closed[j] * (1.0 + 1e-9)) {
            ++violations;
            if (first.empty()) first = "closed-vs-union IF at dr=" + format_double(dr[j]);
        }
        if (dr[j] > 1.0) {
            if (rep.suc_union_max[j] <= 1.0 &&
                rep.suc_outage[j] > rep.suc_union_max[j] + 3.0 * rep.suc_half_width[j]) {
                ++violations;
                if (first.empty())
                    first = "successive union bound at dr=" + format_double(dr[j]);
            }
            if (rep.suc_union_max[j] > rep.suc_closed[j] * (1.0 + 1e-9)) {
                ++violations;
                if (first.empty())
                    first = "closed-vs-union successive at dr=" + format_double(dr[j]);
            }
        }
    }
    report(3, "bound dominance at R_BT=14 with halving on", violations == 0,
           violations == 0 ? "0 violations over " + std::to_string(dr.size()) + " grid points"
                           : std::to_string(violations) + " violations, first: " + first);
}

void criterion_4() {
    int bad_sum = 0, bad_minkowski = 0, bad_transference = 0, bad_order = 0;
    for (int k : {2, 3}) {
        const double envelope = transference_constant(k, AlphaMode::Exact);
        for (int rep = 0; rep < 1000; ++rep) {
            RngStream rng(400 + k, rep);
            CovarianceMatrix cov = random_covariance(k, 4.0, rng);
            const double rbt = berger_tung_rate(cov);

            IntMatrix a(k, k);
            do {
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < k; ++j)
                        a(i, j) = static_cast<long long>(std::floor(rng.uniform() * 11.0)) - 5;
            } while (integer_determinant(a) == 0);
            RateBreakdown suc = if_suc_rate_for_matrix(cov, a);
            const double want =
                rbt + std::log2(std::abs(static_cast<double>(integer_determinant(a))));
            if (std::abs(suc.per_equation.sum() - want) > 1e-9) ++bad_sum;

            Matrix f = cholesky_lower(Matrix::Identity(k, k) + cov.m);
            LatticeBasis basis(f.transpose());
            SuccessiveMinima minima = successive_minima(basis);
            double prod = 1.0;
            for (int i = 0; i < k; ++i) prod *= minima.lengths[i] * minima.lengths[i];
            const double det_sq = std::exp2(2.0 * rbt);
            if (prod > std::pow(static_cast<double>(k), k) * det_sq * (1.0 + 1e-9))
                ++bad_minkowski;

            const double dual_lam1 = shortest_vector(dual_basis(basis)).length;
            const double lam_k = minima.lengths[k - 1];
            if (dual_lam1 * dual_lam1 * lam_k * lam_k > envelope * (1.0 + 1e-9))
                ++bad_transference;

            const double r_if = k * std::log2(lam_k);
            const double r_suc = if_suc_opt_rate(cov).rate;
            if (!(rbt <= r_suc + 1e-9 && r_suc <= r_if + 1e-9)) ++bad_order;
        }
    }
    const bool pass = !bad_sum && !bad_minkowski && !bad_transference && !bad_order;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "violations: stage-sum %d, minima-product %d, transference %d, ordering %d "
                  "(1000 instances each at K=2,3)",
                  bad_sum, bad_minkowski, bad_transference, bad_order);
    report(4, "exact algebraic identities", pass, buf);
}

void criterion_5() {
    int mismatches = 0;
    for (int n : {2, 3}) {
        RngStream rng(500 + n, 0);
        for (int rep = 0; rep < 200; ++rep) {
            Matrix g = oracles::bounded_random_generator(n, rng);
            SuccessiveMinima fast = successive_minima(LatticeBasis(g));
            SuccessiveMinima slow = oracles::box_minima(g);
            for (int i = 0; i < n; ++i) {
                if (fast.lengths[i] != slow.lengths[i]) ++mismatches;
                if ((fast.witnesses.col(i) - slow.witnesses.col(i)).cwiseAbs().maxCoeff() != 0)
                    ++mismatches;
            }
        }
    }
    report(5, "successive minima match the coefficient-box oracle", mismatches == 0,
           mismatches == 0 ? "bitwise equal on 200 random 2-D and 200 random 3-D lattices"
                           : std::to_string(mismatches) + " mismatches");
}

void criterion_6() {
    bool pass = true;
    std::string detail;
    for (int k : {2, 3}) {
        Precoder cyclo = cyclotomic_precoder(k);
        std::vector<double> rbts;
        for (double rbt = 4.0; rbt <= 24.0 + 1e-9; rbt += 1.0) rbts.push_back(rbt);
        std::vector<GridGuarantee> guarantees(rbts.size());
        parallel_for(static_cast<int>(rbts.size()), workers(), [&](int i) {
            guarantees[i] = grid_rate_guarantee(k, rbts[i], 0.01, cyclo.matrix);
        });

        int violations = 0;
        std::atomic<int> atomic_violations{0};
        parallel_for(static_cast<int>(rbts.size()), workers(), [&](int i) {
            RngStream rng(600 + k, static_cast<std::uint64_t>(i));
            int local = 0;
            for (int rep = 0; rep < 10000; ++rep) {
                SourceSpectrum s = random_compound_spectrum(k, rbts[i], rng);
                if (precoded_scheme_rate(s, cyclo.matrix, Scheme::If) >
                    guarantees[i].bound + 1e-9)
                    ++local;
            }
            atomic_violations += local;
        });
        violations = atomic_violations.load();

        // The grid maximum under-samples the worst spectrum by a grid-
        // alignment-dependent amount (refining delta at a dipped point
        // recovers the trend), so the efficiency is monotone only up to
        // that wobble; 5e-3 covers it with margin at delta = 0.01.
        bool monotone = true;
        for (std::size_t i = 1; i < rbts.size(); ++i) {
            const double prev_eff = guarantees[i - 1].bound / rbts[i - 1];
            const double eff = guarantees[i].bound / rbts[i];
            if (eff > prev_eff + 5e-3) monotone = false;
        }
        const double eff_first = guarantees.front().bound / rbts.front();
        const double eff_last = guarantees.back().bound / rbts.back();
        const bool toward_one =
            eff_last >= 1.0 - 1e-9 && eff_last < eff_first - 0.05 && eff_last < 1.11;
        if (violations != 0 || !monotone || !toward_one) pass = false;
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "K=%d: %d/210000 violations, efficiency %.4f -> %.4f %s; ", k, violations,
                      eff_first, eff_last, monotone ? "monotone" : "NOT monotone");
        detail += buf;
    }
    report(6, "grid guarantee covers random compound spectra", pass, detail);
}

void criterion_7() {
    Precoder golden = golden_code_precoder();
    const double bound = 48.0 + 4.0 * std::log2(1.0 / golden.delta_min);
    int bad_benchmark = 0, bad_excess = 0;
    double worst_excess = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        RngStream rng(700, rep);
        CovarianceMatrix cov = random_covariance(2, 3.0, rng);
        const double rbt = berger_tung_rate(cov);

        Matrix k_cal = kron(Matrix::Identity(4, 4), cov.m);
        Matrix m = Matrix::Identity(8, 8) +
                   golden.matrix * k_cal * golden.matrix.transpose();
        const double stacked_benchmark = std::log2(m.determinant()) / 8.0;
        if (std::abs(stacked_benchmark - rbt) > 1e-9) ++bad_benchmark;

        const double excess = space_time_rate(cov, golden) - rbt;
        worst_excess = std::max(worst_excess, excess);
        if (!(excess <= bound + 1e-9 && excess >= -1e-9)) ++bad_excess;
    }
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "benchmark drift >1e-9 on %d/50; worst excess %.3f bits vs bound %.3f",
                  bad_benchmark, worst_excess, bound);
    report(7, "space-time stacking sanity with the golden-code precoder",
           bad_benchmark == 0 && bad_excess == 0, buf);
}

void criterion_8() {
    const std::vector<double> dr = {0.5, 1.0, 1.5, 2.0, 3.0};
    const std::uint64_t trials = 40000;
    CranModel model{2, 2, 1.0};
    CranCurve direct = cran_outage_curve(model, dr, trials, Scheme::If, 801, workers());

    // Same spectrum ensemble, explicit Haar precoding.
    const int ndr = static_cast<int>(dr.size());
    std::vector<std::uint64_t> hist(ndr + 1, 0);
    for (std::uint64_t t = 0; t < trials; ++t) {
        RngStream h_stream(802, t);
        CovarianceMatrix cov = cran_covariance(model, h_stream);
        EighResult eig = eigh(Matrix::Identity(2, 2) + cov.m);
        SourceSpectrum spec{eig.eigenvalues.cwiseMax(1.0)};
        RngStream u_stream(803, t);
        Matrix u = sample_haar_orthogonal(2, u_stream);
        const double gap = precoded_scheme_rate(spec, u, Scheme::If) - spec.berger_tung();
        const auto lb = std::lower_bound(dr.begin(), dr.end(), gap);
        ++hist[static_cast<std::size_t>(lb - dr.begin())];
    }
    std::vector<double> precoded(ndr), precoded_hw(ndr);
    std::uint64_t suffix = 0;
    for (int j = ndr; j >= 1; --j) {
        suffix += hist[j];
        precoded[j - 1] = static_cast<double>(suffix) / static_cast<double>(trials);
        precoded_hw[j - 1] = wilson_half_width(suffix, trials);
    }

    bool pass = true;
    std::string detail;
    for (int j = 0; j < ndr; ++j) {
        const double diff = std::abs(direct.outage[j] - precoded[j]);
        const double allowed =
            3.0 * std::sqrt(direct.half_width[j] * direct.half_width[j] +
                            precoded_hw[j] * precoded_hw[j]);
        if (diff > allowed) pass = false;
        char buf[64];
        std::snprintf(buf, sizeof buf, "dr=%g: |%.4f-%.4f|; ", dr[j], direct.outage[j],
                      precoded[j]);
        detail += buf;
    }
    report(8, "relay sampling equals explicit Haar precoding", pass, detail);
}

void criterion_9(const std::string& cli) {
    if (cli.empty()) {
        report(9, "artifact determinism across worker counts", false,
               "no CLI path given (--cli)");
        return;
    }
    const std::string dir = "/tmp/ifsc_acceptance_" + std::to_string(::getpid());
    if (std::system(("mkdir -p " + dir).c_str()) != 0) {
        report(9, "artifact determinism across worker counts", false, "mkdir failed");
        return;
    }
    auto read_file = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    bool pass = true;
    std::string detail;

    struct Job {
        const char* name;
        std::string args;
    };
    const std::vector<Job> jobs = {
        {"outage",
         "outage --k 2 --rbt 6 --grid-step 0.5 --trials 400 --seed 11 --dr-start 0 "
         "--dr-stop 4 --dr-step 0.5"},
        {"cran", "cran --k 2 --m 2 --trials 500 --seed 12 --dr-start 0.5 --dr-stop 2.5 "
                 "--dr-step 0.5"},
        {"bounds", "bounds --k 2 --rbt 8 --grid-step 1 --trials 300 --seed 13 --dr-start 0.5 "
                   "--dr-stop 4.5 --dr-step 2"},
    };
    for (const auto& job : jobs) {
        const std::string f1 = dir + "/" + job.name + "_w1.csv";
        const std::string f4 = dir + "/" + job.name + "_w4.csv";
        const std::string base = cli + " " + job.args;
        const int rc1 =
            std::system((base + " --workers 1 --out " + f1 + " 2>/dev/null").c_str());
        const int rc4 =
            std::system((base + " --workers 4 --out " + f4 + " 2>/dev/null").c_str());
        const std::string b1 = read_file(f1), b4 = read_file(f4);
        if (rc1 != 0 || rc4 != 0 || b1.empty() || b1 != b4) {
            pass = false;
            detail += std::string(job.name) + " differs; ";
        }
    }
    if (pass) detail = "outage, cran, and bounds artifacts byte-identical at 1 vs 4 workers";
    if (std::system(("rm -rf " + dir).c_str()) != 0) detail += " (cleanup failed)";
    report(9, "artifact determinism across worker counts", pass, detail);
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--cli") cli = argv[i + 1];

    criterion_1_and_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9(cli);

    std::printf("%s\n", failures == 0 ? "acceptance: all criteria passed"
                                      : "acceptance: FAILURES present");
    return failures;
}
