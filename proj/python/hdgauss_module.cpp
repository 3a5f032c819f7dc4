#include "hdgauss/classifiers.hpp"
#include "hdgauss/concentration.hpp"
#include "hdgauss/gaussian.hpp"
#include "hdgauss/risk.hpp"
#include "hdgauss/synth.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace hdgauss;

namespace {

py::dict risk_report_dict(const RiskReport& report) {
    py::dict d;
    d["weighted_risk"] = report.weighted_risk;
    d["excess"] = report.excess;
    d["learning_error"] = report.learning_error;
    d["method"] = to_string(report.method);
    d["se_weighted"] = report.se_weighted;
    d["se_excess"] = report.se_excess;
    d["se_learning"] = report.se_learning;
    d["n_samples"] = report.n_samples;
    return d;
}

py::dict bound_report_dict(const BoundReport& report) {
    py::dict d;
    d["name"] = report.name;
    d["value"] = report.value;
    d["applicable"] = report.applicable;
    d["side"] = report.side == BoundSide::upper ? "upper" : "lower";
    d["vacuous"] = report.vacuous;
    d["inputs"] = report.inputs;
    return d;
}

LabeledDataset dataset_from(const Mat& features, const std::vector<int>& labels) {
    LabeledDataset data;
    data.features = features;
    data.labels = labels;
    data.validate();
    return data;
}

}  // namespace

PYBIND11_MODULE(_hdgauss, m) {
    m.doc() = "High-dimensional Gaussian classification: plug-in rules, FDR "
              "thresholding, risk evaluation and concentration checks.";

    py::class_<GaussianMeasure>(m, "GaussianMeasure")
        .def(py::init<Vec, Mat>(), py::arg("mean"), py::arg("covariance"))
        .def_readonly("mean", &GaussianMeasure::mean)
        .def_readonly("covariance", &GaussianMeasure::covariance)
        .def_property_readonly("dimension", &GaussianMeasure::dimension);

    py::class_<ClassificationProblem>(m, "ClassificationProblem")
        .def(py::init<GaussianMeasure, GaussianMeasure, bool>(), py::arg("class1"),
             py::arg("class0"), py::arg("equal_covariance"))
        .def_readonly("class1", &ClassificationProblem::class1)
        .def_readonly("class0", &ClassificationProblem::class0)
        .def_readonly("equal_covariance", &ClassificationProblem::equal_covariance)
        .def("mean_difference", &ClassificationProblem::mean_difference)
        .def("midpoint", &ClassificationProblem::midpoint);

    m.def("make_equal_covariance_problem", &make_equal_covariance_problem, py::arg("mu1"),
          py::arg("mu0"), py::arg("covariance"));

    py::class_<AffineFrontier>(m, "AffineFrontier")
        .def_readonly("normal", &AffineFrontier::normal)
        .def_readonly("center", &AffineFrontier::center)
        .def_readonly("degenerate", &AffineFrontier::degenerate)
        .def("value", &AffineFrontier::value)
        .def("values", &AffineFrontier::values);

    py::class_<QuadraticFrontier>(m, "QuadraticFrontier")
        .def_readonly("quad", &QuadraticFrontier::quad)
        .def_readonly("linear", &QuadraticFrontier::linear)
        .def_readonly("center", &QuadraticFrontier::center)
        .def_readonly("offset", &QuadraticFrontier::offset)
        .def("value", &QuadraticFrontier::value)
        .def("values", &QuadraticFrontier::values);

    m.def("sample", &sample, py::arg("measure"), py::arg("count"), py::arg("seed"));
    m.def("affine_frontier", &affine_frontier, py::arg("problem"), py::arg("cond_cap") = 1e12);
    m.def("quadratic_frontier", &quadratic_frontier, py::arg("problem"),
          py::arg("cond_cap") = 1e12);
    m.def("w_operator", &w_operator, py::arg("c1"), py::arg("c0"), py::arg("cond_cap") = 1e12);
    m.def("l2_gamma_norm", &l2_gamma_norm, py::arg("v"), py::arg("cov"));
    m.def("angle_alpha", &angle_alpha, py::arg("f"), py::arg("f_hat"), py::arg("cov"));
    m.def("separation", [](const ClassificationProblem& problem) {
        const Separation s = separation(problem);
        py::dict d;
        d["r"] = s.r;
        d["bayes_risk"] = s.bayes_risk;
        d["l1_distance"] = s.l1_distance;
        return d;
    });

    py::class_<BhResult>(m, "BhResult")
        .def_readonly("k_fdr", &BhResult::k_fdr)
        .def_readonly("threshold", &BhResult::threshold)
        .def_readonly("threshold_raw", &BhResult::threshold_raw)
        .def_readonly("selected", &BhResult::selected);

    m.def("bh_select", &bh_select, py::arg("statistics"), py::arg("null_sd"), py::arg("b_p"));

    py::class_<FitDiagnostics>(m, "FitDiagnostics")
        .def_readonly("k_fdr_mean", &FitDiagnostics::k_fdr_mean)
        .def_readonly("threshold_mean", &FitDiagnostics::threshold_mean)
        .def_readonly("threshold_mean_raw", &FitDiagnostics::threshold_mean_raw)
        .def_readonly("k_fdr_var", &FitDiagnostics::k_fdr_var)
        .def_readonly("threshold_var", &FitDiagnostics::threshold_var)
        .def_readonly("degenerate", &FitDiagnostics::degenerate)
        .def_readonly("bp_floor_warning", &FitDiagnostics::bp_floor_warning);

    py::class_<LdaRule>(m, "LdaRule")
        .def_readwrite("normal", &LdaRule::normal)
        .def_readwrite("center", &LdaRule::center)
        .def_readonly("selected", &LdaRule::selected)
        .def_readonly("thresholded", &LdaRule::thresholded)
        .def_readonly("diagnostics", &LdaRule::diagnostics)
        .def("frontier_value", &LdaRule::frontier_value)
        .def("frontier_values", &LdaRule::frontier_values);

    py::class_<DiagQdaRule>(m, "DiagQdaRule")
        .def_readwrite("center", &DiagQdaRule::center)
        .def_readonly("mean_selected", &DiagQdaRule::mean_selected)
        .def_readonly("var_selected", &DiagQdaRule::var_selected)
        .def_readonly("offset", &DiagQdaRule::offset)
        .def_readonly("g_hat", &DiagQdaRule::g_hat)
        .def_readonly("a_hat", &DiagQdaRule::a_hat)
        .def_readonly("diagnostics", &DiagQdaRule::diagnostics)
        .def("frontier_value", &DiagQdaRule::frontier_value)
        .def("frontier_values", &DiagQdaRule::frontier_values);

    m.def(
        "fit_lda_fdr_known_cov",
        [](const Mat& features, const std::vector<int>& labels, const Mat& cov,
           std::optional<Vec> center, double b_p) {
            return fit_lda_fdr_known_cov(dataset_from(features, labels), cov, center, b_p);
        },
        py::arg("features"), py::arg("labels"), py::arg("cov"),
        py::arg("center_known") = std::nullopt, py::arg("b_p") = 0.01);
    m.def(
        "fit_diag_qda",
        [](const Mat& features, const std::vector<int>& labels, double b_p) {
            return fit_diag_qda(dataset_from(features, labels), b_p);
        },
        py::arg("features"), py::arg("labels"), py::arg("b_p") = 0.01);
    m.def(
        "fit_fisher_pseudo",
        [](const Mat& features, const std::vector<int>& labels) {
            return fit_fisher_pseudo(dataset_from(features, labels));
        },
        py::arg("features"), py::arg("labels"));
    m.def(
        "fit_naive_lda",
        [](const Mat& features, const std::vector<int>& labels, const Mat& cov) {
            return fit_naive_lda(dataset_from(features, labels), cov);
        },
        py::arg("features"), py::arg("labels"), py::arg("cov"));

    m.def("classify", py::overload_cast<const LdaRule&, const Vec&>(&classify));
    m.def("classify", py::overload_cast<const DiagQdaRule&, const Vec&>(&classify));
    m.def("classify", py::overload_cast<const AffineFrontier&, const Vec&>(&classify));
    m.def("classify", py::overload_cast<const QuadraticFrontier&, const Vec&>(&classify));

    py::class_<PlaneGeometry>(m, "PlaneGeometry")
        .def(py::init([](double g_norm, double fhat_norm, double alpha, double d0) {
                 PlaneGeometry geom;
                 geom.g_norm = g_norm;
                 geom.fhat_norm = fhat_norm;
                 geom.alpha = alpha;
                 geom.d0 = d0;
                 return geom;
             }),
             py::arg("g_norm"), py::arg("fhat_norm"), py::arg("alpha"), py::arg("d0"))
        .def_readonly("g_norm", &PlaneGeometry::g_norm)
        .def_readonly("fhat_norm", &PlaneGeometry::fhat_norm)
        .def_readonly("alpha", &PlaneGeometry::alpha)
        .def_readonly("d0", &PlaneGeometry::d0)
        .def("e_perp", &PlaneGeometry::e_perp)
        .def("inner", &PlaneGeometry::inner)
        .def("u", &PlaneGeometry::u)
        .def("y_plus", &PlaneGeometry::y_plus)
        .def("y_minus", &PlaneGeometry::y_minus)
        .def_static("from_problem", &PlaneGeometry::from_problem, py::arg("problem"),
                    py::arg("normal_hat"), py::arg("center_hat"), py::arg("cond_cap") = 1e12);

    m.def("weighted_risk_affine",
          py::overload_cast<const Vec&, const Vec&, const ClassificationProblem&>(
              &weighted_risk_affine),
          py::arg("normal"), py::arg("center"), py::arg("problem"));
    m.def("learning_error_lda_2d", &learning_error_lda_2d, py::arg("geometry"),
          py::arg("abs_tol") = 1e-9);
    m.def("excess_risk_geometry", &excess_risk_geometry, py::arg("geometry"));
    m.def(
        "geometry_risks",
        [](const PlaneGeometry& geom, double abs_tol) {
            const GeometryRisks risks = geometry_risks(geom, abs_tol);
            py::dict d;
            d["learning_error"] = risks.learning_error;
            d["excess"] = risks.excess;
            d["win_probability"] = risks.win_probability;
            d["symdiff_mean"] = risks.symdiff_mean;
            return d;
        },
        py::arg("geometry"), py::arg("abs_tol") = 1e-9);
    m.def(
        "exact_affine_risks",
        [](const Vec& normal, const Vec& center, const ClassificationProblem& problem) {
            return risk_report_dict(exact_affine_risks(normal, center, problem));
        },
        py::arg("normal"), py::arg("center"), py::arg("problem"));
    m.def(
        "monte_carlo_risks",
        [](const LdaRule& rule, const ClassificationProblem& problem, std::int64_t n,
           std::uint64_t seed) { return risk_report_dict(monte_carlo_risks(rule, problem, n, seed)); },
        py::arg("rule"), py::arg("problem"), py::arg("n_samples"), py::arg("seed"));
    m.def(
        "monte_carlo_risks",
        [](const DiagQdaRule& rule, const ClassificationProblem& problem, std::int64_t n,
           std::uint64_t seed) { return risk_report_dict(monte_carlo_risks(rule, problem, n, seed)); },
        py::arg("rule"), py::arg("problem"), py::arg("n_samples"), py::arg("seed"));

    m.def("bounds_theorem_geometric", [](const PlaneGeometry& geom) {
        py::list out;
        for (const BoundReport& report : bounds_theorem_geometric(geom)) {
            out.append(bound_report_dict(report));
        }
        return out;
    });
    m.def("bound_theorem_lda",
          [](const AffineFrontier& frontier, const LdaRule& hat,
             const ClassificationProblem& problem) {
              py::list out;
              for (const BoundReport& report : bound_theorem_lda(frontier, hat, problem)) {
                  out.append(bound_report_dict(report));
              }
              return out;
          });
    m.def("bound_prop_incons",
          [](std::int64_t n, std::int64_t p, double r) {
              return bound_report_dict(bound_prop_incons(n, p, r));
          },
          py::arg("n"), py::arg("p"), py::arg("r"));
    m.def("bound_prop_errlin",
          [](std::int64_t n, std::int64_t p, double r) {
              return bound_report_dict(bound_prop_errlin(n, p, r));
          },
          py::arg("n"), py::arg("p"), py::arg("r"));
    m.def("bound_reverse",
          [](double r, double learning_error) {
              return bound_report_dict(bound_reverse(r, learning_error));
          },
          py::arg("r"), py::arg("learning_error"));

    py::enum_<CovarianceKind>(m, "CovarianceKind")
        .value("identity", CovarianceKind::identity)
        .value("diagonal", CovarianceKind::diagonal)
        .value("toeplitz", CovarianceKind::toeplitz)
        .value("random_spd", CovarianceKind::random_spd);

    py::class_<ProblemSpec>(m, "ProblemSpec")
        .def(py::init<>())
        .def_readwrite("p", &ProblemSpec::p)
        .def_readwrite("q_sparsity", &ProblemSpec::q_sparsity)
        .def_readwrite("radius_R", &ProblemSpec::radius_R)
        .def_readwrite("separation_r", &ProblemSpec::separation_r)
        .def_readwrite("covariance_kind", &ProblemSpec::covariance_kind)
        .def_readwrite("diagonal_values", &ProblemSpec::diagonal_values)
        .def_readwrite("toeplitz_rho", &ProblemSpec::toeplitz_rho)
        .def_readwrite("equal_cov", &ProblemSpec::equal_cov)
        .def_readwrite("seed", &ProblemSpec::seed)
        .def_readwrite("decay_qtilde", &ProblemSpec::decay_qtilde)
        .def_readwrite("magnitude_jitter", &ProblemSpec::magnitude_jitter);

    m.def("make_problem", &make_problem, py::arg("spec"));
    m.def("whitened_mean_difference", &whitened_mean_difference, py::arg("problem"));
    m.def("haar_dwt", &haar_dwt, py::arg("curve"));
    m.def("haar_idwt", &haar_idwt, py::arg("coefficients"));

    py::class_<QuadChaos>(m, "QuadChaos")
        .def(py::init([](double constant, Vec linear, Vec quad) {
                 QuadChaos q;
                 q.constant = constant;
                 q.linear = std::move(linear);
                 q.quad = std::move(quad);
                 return q;
             }),
             py::arg("constant"), py::arg("linear"), py::arg("quad"))
        .def_readonly("constant", &QuadChaos::constant)
        .def("n1", &QuadChaos::n1)
        .def("n2", &QuadChaos::n2)
        .def("sigma", &QuadChaos::sigma);

    m.def("chaos_sample", &chaos_sample, py::arg("chaos"), py::arg("count"), py::arg("seed"));
    m.def("small_ball_bound_3", &small_ball_bound_3, py::arg("chaos"), py::arg("eps"));
    m.def("lipschitz_tail_bound", &lipschitz_tail_bound, py::arg("lip_norm"), py::arg("s"));
    m.def("domain_decomposition_bound", &domain_decomposition_bound, py::arg("h_delta"),
          py::arg("c0"), py::arg("c1"), py::arg("c2"), py::arg("beta"), py::arg("mean_delta"),
          py::arg("q"));
}
