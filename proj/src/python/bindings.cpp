#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ifsc/cli.hpp"
#include "ifsc/scenarios.hpp"
#include "ifsc/version.hpp"

namespace py = pybind11;
using namespace ifsc;

namespace {

Scheme scheme_from(const std::string& s) {
    if (s == "if") return Scheme::If;
    if (s == "if-suc") return Scheme::IfSuc;
    throw Error(ErrorClass::Validation, "scheme must be 'if' or 'if-suc'");
}

AlphaMode alpha_from(const std::string& s) {
    if (s == "paper") return AlphaMode::Published;
    if (s == "exact") return AlphaMode::Exact;
    throw Error(ErrorClass::Validation, "alpha mode must be 'paper' or 'exact'");
}

SourceSpectrum spectrum_from(const Vector& d) { return SourceSpectrum(d); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "integer-forcing source coding: lattice rates, outage sweeps, and bounds";
    m.attr("__version__") = kVersion;

    py::register_exception<Error>(m, "Error");

    py::class_<RngStream>(m, "RngStream")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream_id"))
        .def("uniform", &RngStream::uniform)
        .def("gaussian", &RngStream::gaussian)
        .def_property_readonly("seed", &RngStream::seed)
        .def_property_readonly("stream_id", &RngStream::stream_id);

    // numerics
    m.def("cholesky_lower", &cholesky_lower, py::arg("m"));
    m.def(
        "eigh",
        [](const Matrix& mat) {
            EighResult r = eigh(mat);
            return py::make_tuple(r.eigenvalues, r.eigenvectors);
        },
        py::arg("m"));
    m.def(
        "sample_haar_orthogonal",
        [](int k, std::uint64_t seed, std::uint64_t stream_id) {
            RngStream rng(seed, stream_id);
            return sample_haar_orthogonal(k, rng);
        },
        py::arg("k"), py::arg("seed"), py::arg("stream_id") = 0);
    m.def(
        "sample_gaussian_matrix",
        [](int rows, int cols, double variance, std::uint64_t seed, std::uint64_t stream_id) {
            RngStream rng(seed, stream_id);
            return sample_gaussian_matrix(rows, cols, variance, rng);
        },
        py::arg("rows"), py::arg("cols"), py::arg("variance"), py::arg("seed"),
        py::arg("stream_id") = 0);
    m.def("kron", &kron, py::arg("a"), py::arg("b"));

    // lattice
    m.def(
        "lll_reduce",
        [](const Matrix& g, double delta) {
            LllResult r = lll_reduce(LatticeBasis(g), delta);
            return py::make_tuple(r.reduced.generator, r.transform);
        },
        py::arg("generator"), py::arg("delta") = 0.99);
    m.def(
        "shortest_vector",
        [](const Matrix& g) {
            ShortestVectorResult r = shortest_vector(LatticeBasis(g));
            return py::make_tuple(r.length, r.coefficients);
        },
        py::arg("generator"));
    m.def(
        "successive_minima",
        [](const Matrix& g) {
            SuccessiveMinima r = successive_minima(LatticeBasis(g));
            return py::make_tuple(r.lengths, r.witnesses);
        },
        py::arg("generator"));
    m.def(
        "dual_basis",
        [](const Matrix& g) { return dual_basis(LatticeBasis(g)).generator; },
        py::arg("generator"));
    m.def(
        "integer_points_in_ball",
        [](int dimension, double radius, bool primitive_only) {
            IntegerVectorSet set = integer_points_in_ball(dimension, radius, primitive_only);
            IntMatrix out(set.vectors.size(), dimension);
            for (std::size_t i = 0; i < set.vectors.size(); ++i)
                out.row(i) = set.vectors[i].transpose();
            return out;
        },
        py::arg("dimension"), py::arg("radius"), py::arg("primitive_only") = false);
    m.def("integer_shell_count_bound", &integer_shell_count_bound, py::arg("dimension"),
          py::arg("k_shell"));

    // rates
    py::class_<Precoder>(m, "Precoder")
        .def_readonly("matrix", &Precoder::matrix)
        .def_readonly("delta_min", &Precoder::delta_min)
        .def_readonly("time_extensions", &Precoder::time_extensions);
    py::class_<RateReport>(m, "RateReport")
        .def_readonly("r_bt", &RateReport::r_bt)
        .def_readonly("r_if_opt", &RateReport::r_if_opt)
        .def_readonly("r_if_suc", &RateReport::r_if_suc)
        .def_readonly("a_if", &RateReport::a_if)
        .def_readonly("a_suc", &RateReport::a_suc);

    m.def(
        "berger_tung_rate",
        [](const Matrix& k) { return berger_tung_rate(CovarianceMatrix(k)); },
        py::arg("covariance"));
    m.def(
        "if_rate_for_matrix",
        [](const Matrix& k, const IntMatrix& a) {
            RateBreakdown r = if_rate_for_matrix(CovarianceMatrix(k), a);
            return py::make_tuple(r.sum_rate, r.per_equation);
        },
        py::arg("covariance"), py::arg("a"));
    m.def(
        "if_opt_rate",
        [](const Matrix& k) {
            IfOptimum r = if_opt_rate(CovarianceMatrix(k));
            return py::make_tuple(r.rate, r.a);
        },
        py::arg("covariance"));
    m.def(
        "if_suc_rate_for_matrix",
        [](const Matrix& k, const IntMatrix& a) {
            RateBreakdown r = if_suc_rate_for_matrix(CovarianceMatrix(k), a);
            return py::make_tuple(r.sum_rate, r.per_equation);
        },
        py::arg("covariance"), py::arg("a"));
    m.def(
        "if_suc_opt_rate",
        [](const Matrix& k) {
            SucOptimum r = if_suc_opt_rate(CovarianceMatrix(k));
            return py::make_tuple(r.rate, r.a);
        },
        py::arg("covariance"));
    m.def(
        "precoded_rates",
        [](const Vector& d, const Matrix& u) { return precoded_rates(spectrum_from(d), u); },
        py::arg("spectrum"), py::arg("u"));
    m.def(
        "precoded_scheme_rate",
        [](const Vector& d, const Matrix& u, const std::string& scheme) {
            return precoded_scheme_rate(spectrum_from(d), u, scheme_from(scheme));
        },
        py::arg("spectrum"), py::arg("u"), py::arg("scheme") = "if");
    m.def(
        "space_time_rate",
        [](const Matrix& k, const Precoder& p) {
            return space_time_rate(CovarianceMatrix(k), p);
        },
        py::arg("covariance"), py::arg("precoder"));
    m.def("golden_code_precoder", &golden_code_precoder);
    m.def("cyclotomic_precoder", &cyclotomic_precoder, py::arg("k"));

    // bounds
    m.def(
        "transference_constant",
        [](int k, const std::string& mode) { return transference_constant(k, alpha_from(mode)); },
        py::arg("k"), py::arg("mode") = "paper");
    m.def("hermite_gamma_exact", &hermite_gamma_exact, py::arg("k"));
    m.def("blichfeldt_gamma_bound", &blichfeldt_gamma_bound, py::arg("k"));
    m.def(
        "if_union_bound",
        [](const Vector& d, double rbt, double dr, bool halve, const std::string& mode) {
            return if_union_bound(spectrum_from(d), rbt, dr, halve, alpha_from(mode));
        },
        py::arg("spectrum"), py::arg("rbt"), py::arg("dr"), py::arg("halve") = true,
        py::arg("mode") = "paper");
    m.def(
        "if_outage_bound",
        [](int k, double dr, const std::string& mode) {
            return if_outage_bound(k, dr, alpha_from(mode));
        },
        py::arg("k"), py::arg("dr"), py::arg("mode") = "paper");
    m.def(
        "suc_union_bound",
        [](const Vector& d, double rbt, double dr, bool halve) {
            return suc_union_bound(spectrum_from(d), rbt, dr, halve);
        },
        py::arg("spectrum"), py::arg("rbt"), py::arg("dr"), py::arg("halve") = true);
    m.def("suc_outage_constant", &suc_outage_constant);
    m.def("suc_outage_bound", &suc_outage_bound, py::arg("dr"));
    m.def("nvd_excess_bound", &nvd_excess_bound, py::arg("k"), py::arg("delta_min"));
    m.def("grid_slack_eta", &grid_slack_eta, py::arg("k"), py::arg("rbt"), py::arg("delta"));
    m.def(
        "enumerate_rate_grid",
        [](int k, double rbt, double delta) {
            RateGrid grid = enumerate_rate_grid(k, rbt, delta);
            return grid.tuples;
        },
        py::arg("k"), py::arg("rbt"), py::arg("delta"));
    m.def(
        "quantize_spectrum",
        [](const Vector& d, double rbt, double delta) {
            RateGrid grid = enumerate_rate_grid(spectrum_from(d).source_count(), rbt, delta);
            QuantizedSpectrum q = quantize_spectrum(spectrum_from(d), grid);
            return py::make_tuple(q.spectrum.d, q.rates, q.scale_factors);
        },
        py::arg("spectrum"), py::arg("rbt"), py::arg("delta"));
    m.def(
        "grid_rate_guarantee",
        [](int k, double rbt, double delta, const Matrix& precoder) {
            GridGuarantee g = grid_rate_guarantee(k, rbt, delta, precoder);
            return py::make_tuple(g.bound, g.grid_max, g.slack, g.argmax_rates);
        },
        py::arg("k"), py::arg("rbt"), py::arg("delta"), py::arg("precoder"));

    // scenarios
    py::class_<OutageCurve>(m, "OutageCurve")
        .def_readonly("rbt", &OutageCurve::rbt)
        .def_readonly("dr", &OutageCurve::dr)
        .def_readonly("outage", &OutageCurve::outage)
        .def_readonly("half_width", &OutageCurve::half_width)
        .def_readonly("argmax_spectrum", &OutageCurve::argmax_spectrum)
        .def_readonly("seed", &OutageCurve::seed)
        .def_readonly("trials_per_point", &OutageCurve::trials_per_point);

    m.def(
        "spectrum_grid",
        [](int k, double rbt, double step) {
            std::vector<Vector> out;
            for (const auto& s : spectrum_grid(k, rbt, step)) out.push_back(s.d);
            return out;
        },
        py::arg("k"), py::arg("rbt"), py::arg("step"));
    m.def(
        "estimate_outage",
        [](const Vector& d, const std::string& scheme, double r_target, std::uint64_t trials,
           std::uint64_t seed, std::uint64_t stream_id) {
            OutageEstimate e = estimate_outage(spectrum_from(d), scheme_from(scheme), r_target,
                                               trials, RngStream(seed, stream_id));
            return py::make_tuple(e.probability, e.half_width);
        },
        py::arg("spectrum"), py::arg("scheme"), py::arg("r_target"), py::arg("trials"),
        py::arg("seed"), py::arg("stream_id") = 0);
    m.def(
        "worst_case_outage_curve",
        [](int k, double rbt, const std::vector<double>& dr_grid, double grid_step,
           std::uint64_t trials, const std::string& scheme, std::uint64_t seed, int workers) {
            py::gil_scoped_release release;
            return worst_case_outage_curve(k, rbt, dr_grid, grid_step, trials,
                                           scheme_from(scheme), seed, workers);
        },
        py::arg("k"), py::arg("rbt"), py::arg("dr_grid"), py::arg("grid_step"),
        py::arg("trials"), py::arg("scheme") = "if", py::arg("seed") = 0,
        py::arg("workers") = 1);
    m.def(
        "cran_covariance",
        [](int k, int mm, double snr, std::uint64_t seed, std::uint64_t stream_id) {
            RngStream rng(seed, stream_id);
            return cran_covariance(CranModel{k, mm, snr}, rng).m;
        },
        py::arg("k"), py::arg("m"), py::arg("snr"), py::arg("seed"), py::arg("stream_id") = 0);
}
