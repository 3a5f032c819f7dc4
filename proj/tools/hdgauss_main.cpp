// hdgauss: fitting, prediction and scripted experiments for the
// high-dimensional Gaussian classification toolkit.

#include "hdgauss/classifiers.hpp"
#include "hdgauss/concentration.hpp"
#include "hdgauss/errors.hpp"
#include "hdgauss/gaussian.hpp"
#include "hdgauss/io.hpp"
#include "hdgauss/risk.hpp"
#include "hdgauss/synth.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace {

using namespace hdgauss;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitAssertion = 3;
constexpr int kExitIo = 4;

struct Assertion {
    std::string name;
    std::string config;
    double observed = 0.0;
    double bound = 0.0;
    double sigma = 0.0;
    bool pass = false;
};

json to_json(const Assertion& a) {
    return json{{"name", a.name},     {"config", a.config}, {"observed", a.observed},
                {"bound", a.bound},   {"sigma", a.sigma},   {"pass", a.pass}};
}

std::string csv_escape_free(const std::string& s) {
    std::string out = s;
    for (char& c : out) {
        if (c == ',') c = ';';
    }
    return out;
}

FitProcedure procedure_from_string(const std::string& name) {
    if (name == "fdr-lda") return FitProcedure::fdr_lda;
    if (name == "diag-qda") return FitProcedure::diag_qda;
    if (name == "fisher") return FitProcedure::fisher_pseudo;
    if (name == "naive-lda") return FitProcedure::naive_lda;
    throw ValidationError("unknown procedure: " + name);
}

Mat covariance_for(const LabeledDataset& data, const std::string& cov_path) {
    if (cov_path.empty()) {
        return Mat::Identity(data.dimension(), data.dimension());
    }
    Mat cov = read_matrix_csv(cov_path);
    if (cov.rows() != data.dimension() || cov.cols() != data.dimension()) {
        throw ValidationError("covariance file dimension does not match the data");
    }
    return cov;
}

// ---------------------------------------------------------------------------
// fit / predict
// ---------------------------------------------------------------------------

int run_fit(const std::string& data_path, const std::string& procedure_name, double b_p,
            const std::string& cov_path, const std::string& center_path,
            const std::string& out_path) {
    const LabeledDataset data = read_dataset_csv(data_path);
    const FitProcedure procedure = procedure_from_string(procedure_name);
    std::optional<Vec> center;
    if (!center_path.empty()) {
        const Mat m = read_matrix_csv(center_path);
        center = Vec(m.reshaped());
        if (center->size() != data.dimension()) {
            throw ValidationError("center file dimension does not match the data");
        }
    }

    json out;
    switch (procedure) {
        case FitProcedure::fdr_lda: {
            const Mat cov = covariance_for(data, cov_path);
            out = rule_to_json(fit_lda_fdr_known_cov(data, cov, center, b_p));
            break;
        }
        case FitProcedure::diag_qda: {
            DiagQdaRule rule = fit_diag_qda(data, b_p);
            if (center) rule.center = *center;
            out = rule_to_json(rule);
            break;
        }
        case FitProcedure::fisher_pseudo: {
            LdaRule rule = fit_fisher_pseudo(data);
            if (center) rule.center = *center;
            out = rule_to_json(rule);
            break;
        }
        case FitProcedure::naive_lda: {
            const Mat cov = covariance_for(data, cov_path);
            LdaRule rule = fit_naive_lda(data, cov);
            if (center) rule.center = *center;
            out = rule_to_json(rule);
            break;
        }
    }
    if (out.contains("diagnostics") && out["diagnostics"].value("bp_floor_warning", false)) {
        std::cerr << "warning: b_p is below the c0/log(p) floor suggested by the theory\n";
    }
    write_text_file(out_path, out.dump(2) + "\n");
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

int run_predict(const std::string& rule_path, const std::string& data_path,
                const std::string& out_path) {
    const json rule_json = json::parse(read_text_file(rule_path));
    const AnyRule rule = rule_from_json(rule_json);
    const LabeledDataset data = read_dataset_csv(data_path);

    const Vec values = std::visit(
        [&](const auto& r) { return r.frontier_values(data.features); }, rule);
    std::ostringstream os;
    os << "label,frontier\n";
    char buf[40];
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
        os << (values[i] >= 0.0 ? 1 : 0) << "," << buf << "\n";
    }
    write_text_file(out_path, os.str());
    std::cout << "wrote " << out_path << " (" << values.size() << " rows)\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// experiment kinds
// ---------------------------------------------------------------------------

struct ExperimentResult {
    std::vector<json> rows;
    std::vector<Assertion> assertions;
};

ExperimentResult run_bound_check(const json& spec, std::uint64_t /*seed*/) {
    ExperimentResult result;
    std::vector<double> alphas = spec.value("alphas", std::vector<double>{});
    if (alphas.empty()) {
        for (int i = 1; i <= 10; ++i) alphas.push_back(0.3 * i);  // spans both sides of pi/2
    }
    const std::vector<double> g_norms = spec.value("g_norms", std::vector<double>{0.5, 1.5, 3.0});
    const std::vector<double> fractions =
        spec.value("d0_fractions", std::vector<double>{0.0, 0.15, 0.35, 0.8});
    const double fhat = spec.value("fhat_norm", 1.1);

    for (double alpha : alphas) {
        for (double g : g_norms) {
            for (double t : fractions) {
                PlaneGeometry geom;
                geom.g_norm = g;
                geom.fhat_norm = fhat;
                geom.alpha = alpha;
                geom.d0 = t * std::abs(g * fhat * std::cos(alpha));
                const GeometryRisks risks = geometry_risks(geom, 1e-10);
                std::ostringstream cfg;
                cfg << "alpha=" << alpha << " g=" << g << " t=" << t;
                json row{{"alpha", alpha},
                         {"g_norm", g},
                         {"d0", geom.d0},
                         {"learning_error", risks.learning_error},
                         {"excess", risks.excess},
                         {"win_probability", risks.win_probability}};
                json bound_list = json::array();
                for (const BoundReport& report : bounds_theorem_geometric(geom)) {
                    bound_list.push_back(to_json(report));
                    if (!report.applicable) continue;
                    Assertion a;
                    a.name = report.name;
                    a.config = cfg.str();
                    a.observed = risks.learning_error;
                    a.bound = report.value;
                    if (report.side == BoundSide::lower) {
                        a.pass = risks.learning_error >= report.value - 1e-9;
                    } else {
                        a.pass = risks.learning_error <= std::min(report.value, 1.0) + 1e-9;
                    }
                    result.assertions.push_back(a);
                }
                row["bounds"] = bound_list;
                result.rows.push_back(row);
            }
        }
    }
    return result;
}

ExperimentResult run_geometry_sweep(const json& spec, std::uint64_t seed) {
    ExperimentResult result;
    const int cases = spec.value("cases", 30);
    const std::int64_t n_samples = spec.value("n_samples", std::int64_t{1000000});
    for (int k = 0; k < cases; ++k) {
        RandomStream cfg_stream(derive_seed(seed, 100 + k));
        const int p = 2 + static_cast<int>(cfg_stream.raw() % 49);
        Mat gmat(p, p);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) gmat(i, j) = cfg_stream.normal();
        Mat cov = gmat * gmat.transpose() + 0.4 * Mat::Identity(p, p);
        cov = 0.5 * (cov + cov.transpose());
        Vec m(p);
        for (int i = 0; i < p; ++i) m[i] = 0.7 * cfg_stream.normal();
        const auto problem = make_equal_covariance_problem(0.5 * m, -0.5 * m, cov);
        if (separation(problem).r < 1e-3) continue;

        const AffineFrontier bayes = affine_frontier(problem);
        LdaRule rule;
        rule.normal = bayes.normal;
        rule.center = bayes.center;
        for (int i = 0; i < p; ++i) {
            rule.normal[i] += 0.35 * cfg_stream.normal();
            rule.center[i] += 0.2 * cfg_stream.normal();
        }
        const PlaneGeometry geom =
            PlaneGeometry::from_problem(problem, rule.normal, rule.center);
        const double quad = learning_error_lda_2d(geom, 1e-9);
        const RiskReport mc = monte_carlo_risks(rule, problem, n_samples, derive_seed(seed, 200 + k));
        const WellSeparatedDiagnostic diag = well_separated_diagnostic(geom);

        Assertion a;
        a.name = "quadrature_vs_mc";
        std::ostringstream cfg;
        cfg << "case=" << k << " p=" << p << " alpha=" << geom.alpha;
        a.config = cfg.str();
        a.observed = std::abs(mc.learning_error - quad);
        a.sigma = mc.se_learning;
        a.bound = std::max(1e-3, 3.0 * mc.se_learning);
        a.pass = a.observed <= a.bound;
        result.assertions.push_back(a);

        result.rows.push_back(json{{"case", k},
                                   {"p", p},
                                   {"alpha", geom.alpha},
                                   {"d0", geom.d0},
                                   {"quadrature", quad},
                                   {"mc", mc.learning_error},
                                   {"mc_se", mc.se_learning},
                                   {"ws_ratio", diag.ratio}});
    }
    return result;
}

ExperimentResult run_rate_sweep(const json& spec, std::uint64_t seed) {
    ExperimentResult result;
    const ProblemSpec pspec = problem_spec_from_json(spec.at("problem"));
    SweepOptions options;
    options.procedure = procedure_from_string(spec.value("procedure", "fdr-lda"));
    options.b_p = spec.value("b_p", 0.01);
    options.center_known = spec.value("center_known", true);
    options.mc_samples = spec.value("mc_samples", std::int64_t{0});
    const std::vector<int> n_values = spec.value("n_values", std::vector<int>{32, 64, 128, 256});
    const int replicates = spec.value("replicates", 20);

    const ProblemFamily family = [&pspec](std::uint64_t s) {
        ProblemSpec local = pspec;
        local.seed = s;
        return make_problem(local);
    };
    const auto rows = expected_risk_sweep(family, n_values, replicates, seed, options);
    for (const SweepRow& row : rows) {
        result.rows.push_back(json{{"n", row.n},
                                   {"procedure", to_string(options.procedure)},
                                   {"median_excess", row.median_excess},
                                   {"mean_excess", row.mean_excess},
                                   {"median_learning", row.median_learning},
                                   {"mean_learning", row.mean_learning},
                                   {"lower_bound", row.lower_bound.name.empty()
                                                       ? json(nullptr)
                                                       : to_json(row.lower_bound)}});
    }

    if (spec.value("assert_monotone", false)) {
        for (std::size_t i = 1; i < rows.size(); ++i) {
            Assertion a;
            a.name = "median_excess_decreases";
            std::ostringstream cfg;
            cfg << "n=" << rows[i - 1].n << "->" << rows[i].n;
            a.config = cfg.str();
            a.observed = rows[i].median_excess;
            a.bound = rows[i - 1].median_excess;
            a.pass = rows[i].median_excess < rows[i - 1].median_excess;
            result.assertions.push_back(a);
        }
    }
    if (spec.contains("baseline_procedure")) {
        SweepOptions baseline = options;
        baseline.procedure = procedure_from_string(spec["baseline_procedure"].get<std::string>());
        const int at_n = spec.value("baseline_at_n", n_values.front());
        const auto brows = expected_risk_sweep(family, {at_n}, replicates, seed, baseline);
        const auto it = std::find_if(rows.begin(), rows.end(),
                                     [&](const SweepRow& r) { return r.n == at_n; });
        if (it != rows.end()) {
            Assertion a;
            a.name = "beats_baseline_median_excess";
            std::ostringstream cfg;
            cfg << "n=" << at_n << " baseline=" << to_string(baseline.procedure);
            a.config = cfg.str();
            a.observed = it->median_excess;
            a.bound = brows.front().median_excess;
            a.pass = it->median_excess < brows.front().median_excess;
            result.assertions.push_back(a);
            result.rows.push_back(json{{"n", at_n},
                                       {"procedure", to_string(baseline.procedure)},
                                       {"median_excess", brows.front().median_excess},
                                       {"mean_excess", brows.front().mean_excess},
                                       {"median_learning", brows.front().median_learning},
                                       {"mean_learning", brows.front().mean_learning},
                                       {"lower_bound", nullptr}});
        }
    }
    return result;
}

ExperimentResult run_tail_check(const json& spec, std::uint64_t seed) {
    ExperimentResult result;
    const std::int64_t n_samples = spec.value("n_samples", std::int64_t{1000000});
    const std::vector<double> s_grid = spec.value("s_grid", std::vector<double>{0.5, 1.0, 2.0, 3.0});

    // Laurent-Massart tails on the requested diagonals.
    const int lm_p = spec.value("lm_p", 200);
    const int lm_cases = spec.value("lm_cases", 3);
    for (int c = 0; c < lm_cases; ++c) {
        RandomStream stream(derive_seed(seed, 300 + c));
        Vec d(lm_p);
        for (int i = 0; i < lm_p; ++i) d[i] = stream.normal();
        const auto rows = laurent_massart_check(d, s_grid, n_samples, derive_seed(seed, 400 + c));
        for (const TailRow& row : rows) {
            json jrow{{"check", "laurent_massart"}, {"case", c},        {"s", row.s},
                      {"upper_tail", row.upper_tail}, {"lower_tail", row.lower_tail},
                      {"bound", row.bound},           {"se_upper", row.se_upper}};
            result.rows.push_back(jrow);
            for (bool upper : {true, false}) {
                Assertion a;
                a.name = upper ? "lm_upper_tail" : "lm_lower_tail";
                std::ostringstream cfg;
                cfg << "case=" << c << " s=" << row.s;
                a.config = cfg.str();
                a.observed = upper ? row.upper_tail : row.lower_tail;
                a.sigma = upper ? row.se_upper : row.se_lower;
                a.bound = row.bound + 3.0 * std::max(a.sigma, 1e-7);
                a.pass = a.observed <= a.bound;
                result.assertions.push_back(a);
            }
        }
    }

    // Lipschitz tails for a linear functional.
    {
        QuadChaos lin;
        lin.linear = Vec(3);
        lin.linear << 1.0, -2.0, 2.0;  // norm 3
        lin.quad = Vec();
        const Vec draws = chaos_sample(lin, n_samples, derive_seed(seed, 500));
        for (double s : s_grid) {
            const double threshold = 3.0 * s;  // s in units of N(delta)
            double hits = 0;
            for (Eigen::Index i = 0; i < draws.size(); ++i) {
                hits += std::abs(draws[i]) > threshold;
            }
            const double tail = hits / static_cast<double>(n_samples);
            const double se = std::sqrt(tail * (1.0 - tail) / static_cast<double>(n_samples));
            Assertion a;
            a.name = "lipschitz_tail";
            std::ostringstream cfg;
            cfg << "s=" << threshold << " N=3";
            a.config = cfg.str();
            a.observed = tail;
            a.sigma = se;
            a.bound = lipschitz_tail_bound(3.0, threshold) + 3.0 * std::max(se, 1e-7);
            a.pass = a.observed <= a.bound;
            result.assertions.push_back(a);
            result.rows.push_back(json{{"check", "lipschitz"},
                                       {"s", threshold},
                                       {"tail", tail},
                                       {"bound", lipschitz_tail_bound(3.0, threshold)}});
        }
    }

    // Small-ball point 3 on the spec's chi-square example family.
    {
        QuadChaos chi;
        chi.quad = Vec(1);
        chi.quad << 1.0;
        chi.linear = Vec();
        const std::vector<double> eps_grid = spec.value(
            "eps_grid", std::vector<double>{0.001, 0.01, 0.1, 0.5, 1.0});
        const auto rows = small_ball_exponents({chi}, eps_grid, n_samples, derive_seed(seed, 600));
        for (const SmallBallRow& row : rows) {
            Assertion a;
            a.name = "small_ball_point3";
            std::ostringstream cfg;
            cfg << "eps=" << row.eps;
            a.config = cfg.str();
            a.observed = row.empirical;
            a.sigma = row.std_error;
            a.bound = row.bound_point3 + 3.0 * std::max(row.std_error, 1e-7);
            a.pass = a.observed <= a.bound;
            result.assertions.push_back(a);
            result.rows.push_back(json{{"check", "small_ball"},
                                       {"eps", row.eps},
                                       {"empirical", row.empirical},
                                       {"bound", row.bound_point3}});
        }
    }
    return result;
}

ExperimentResult run_fit_experiment(const json& spec, std::uint64_t seed) {
    ExperimentResult result;
    const ProblemSpec pspec = problem_spec_from_json(spec.at("problem"));
    const ClassificationProblem problem = make_problem(pspec);
    const int n = spec.value("n", 200);
    const std::int64_t n_samples = spec.value("n_samples", std::int64_t{200000});

    LabeledDataset data;
    const int n1 = n / 2, n0 = n - n / 2;
    data.features.resize(n, problem.dimension());
    data.features.topRows(n1) = sample(problem.class1, n1, derive_seed(seed, 1));
    data.features.bottomRows(n0) = sample(problem.class0, n0, derive_seed(seed, 0));
    data.labels.assign(static_cast<std::size_t>(n), 0);
    std::fill(data.labels.begin(), data.labels.begin() + n1, 1);

    const FitProcedure procedure = procedure_from_string(spec.value("procedure", "fdr-lda"));
    const double b_p = spec.value("b_p", 0.01);
    json rule_json;
    RiskReport report;
    if (procedure == FitProcedure::diag_qda) {
        const DiagQdaRule rule = fit_diag_qda(data, b_p);
        rule_json = rule_to_json(rule);
        report = monte_carlo_risks(rule, problem, n_samples, derive_seed(seed, 2));
    } else {
        LdaRule rule;
        if (procedure == FitProcedure::fdr_lda) {
            rule = fit_lda_fdr_known_cov(data, problem.class1.covariance, std::nullopt, b_p);
        } else if (procedure == FitProcedure::naive_lda) {
            rule = fit_naive_lda(data, problem.class1.covariance);
        } else {
            rule = fit_fisher_pseudo(data);
        }
        rule_json = rule_to_json(rule);
        report = problem.equal_covariance
                     ? exact_affine_risks(rule, problem)
                     : monte_carlo_risks(rule, problem, n_samples, derive_seed(seed, 2));
    }
    result.rows.push_back(json{{"rule", rule_json}, {"risks", to_json(report)}});
    return result;
}

int run_experiment(const std::string& spec_path) {
    json spec;
    try {
        spec = json::parse(read_text_file(spec_path));
    } catch (const json::parse_error& err) {
        std::cerr << "spec parse error: " << err.what() << "\n";
        return kExitValidation;
    } catch (const IoError& err) {
        std::cerr << err.what() << "\n";
        return kExitIo;
    }

    const std::string kind = spec.value("kind", "");
    const std::uint64_t seed = spec.value("master_seed", std::uint64_t{0});
    const std::string out_prefix = spec.value("out", "experiment");

    ExperimentResult result;
    if (kind == "bound_check") {
        result = run_bound_check(spec, seed);
    } else if (kind == "geometry_sweep") {
        result = run_geometry_sweep(spec, seed);
    } else if (kind == "rate_sweep") {
        result = run_rate_sweep(spec, seed);
    } else if (kind == "tail_check") {
        result = run_tail_check(spec, seed);
    } else if (kind == "fit" || kind == "predict") {
        result = run_fit_experiment(spec, seed);
    } else {
        std::cerr << "unknown experiment kind: '" << kind << "'\n";
        return kExitValidation;
    }

    bool all_pass = true;
    json assertions = json::array();
    for (const Assertion& a : result.assertions) {
        assertions.push_back(to_json(a));
        all_pass = all_pass && a.pass;
        if (!a.pass) {
            std::cout << "FAIL " << a.name << " [" << a.config << "] observed=" << a.observed
                      << " bound=" << a.bound << " sigma=" << a.sigma << "\n";
        }
    }

    json out{{"kind", kind},
             {"master_seed", seed},
             {"rows", result.rows},
             {"assertions", assertions},
             {"pass", all_pass}};
    write_text_file(out_prefix + ".json", out.dump(2) + "\n");

    // Flat CSV: one row per configuration with stable columns.
    std::ostringstream csv;
    csv << "row_index,key,value\n";
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        for (const auto& [key, value] : result.rows[i].items()) {
            csv << i << "," << csv_escape_free(key) << ","
                << csv_escape_free(value.dump()) << "\n";
        }
    }
    write_text_file(out_prefix + ".csv", csv.str());

    std::cout << (all_pass ? "PASS" : "FAIL") << ": " << result.assertions.size()
              << " assertions, " << result.rows.size() << " rows -> " << out_prefix
              << ".json\n";
    return all_pass ? kExitOk : kExitAssertion;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"high-dimensional gaussian classification toolkit"};
    app.require_subcommand(1);

    std::string data_path, rule_path, out_path, cov_path, center_path, spec_path;
    std::string procedure = "fdr-lda";
    double b_p = 0.01;

    CLI::App* fit = app.add_subcommand("fit", "fit a classification rule from CSV data");
    fit->add_option("data", data_path, "training data CSV")->required();
    fit->add_option("--procedure", procedure, "fdr-lda | diag-qda | fisher | naive-lda");
    fit->add_option("--bp", b_p, "FDR level in (0, 1/2)");
    fit->add_option("--cov", cov_path, "known covariance CSV (default identity)");
    fit->add_option("--center", center_path, "known center s_10 as a CSV vector");
    fit->add_option("--out", out_path, "output rule JSON")->required();

    CLI::App* predict = app.add_subcommand("predict", "classify rows of a CSV file");
    predict->add_option("rule", rule_path, "rule JSON from fit")->required();
    predict->add_option("data", data_path, "data CSV (labels ignored)")->required();
    predict->add_option("--out", out_path, "output CSV of labels and frontier values")
        ->required();

    CLI::App* experiment = app.add_subcommand("experiment", "run a scripted experiment spec");
    experiment->add_option("spec", spec_path, "experiment spec JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (fit->parsed()) {
            if (!(b_p > 0.0 && b_p < 0.5)) {
                std::cerr << "--bp must lie in (0, 1/2)\n";
                return kExitValidation;
            }
            return run_fit(data_path, procedure, b_p, cov_path, center_path, out_path);
        }
        if (predict->parsed()) {
            return run_predict(rule_path, data_path, out_path);
        }
        return run_experiment(spec_path);
    } catch (const IoError& err) {
        std::cerr << "io error: " << err.what() << "\n";
        return kExitIo;
    } catch (const ValidationError& err) {
        std::cerr << "validation error: " << err.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitValidation;
    }
}
