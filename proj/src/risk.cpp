#include "hdgauss/risk.hpp"

#include "hdgauss/errors.hpp"
#include "hdgauss/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace hdgauss {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::int64_t kChunk = 1 << 14;

}  // namespace

const char* to_string(RiskMethod method) {
    switch (method) {
        case RiskMethod::closed_form: return "closed_form";
        case RiskMethod::quadrature_2d: return "quadrature_2d";
        case RiskMethod::monte_carlo: return "monte_carlo";
    }
    return "unknown";
}

const char* to_string(FitProcedure procedure) {
    switch (procedure) {
        case FitProcedure::fdr_lda: return "fdr-lda";
        case FitProcedure::naive_lda: return "naive-lda";
        case FitProcedure::fisher_pseudo: return "fisher";
        case FitProcedure::diag_qda: return "diag-qda";
    }
    return "unknown";
}

double median(std::vector<double> values) {
    if (values.empty()) throw ValidationError("median: empty input");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double PlaneGeometry::e_perp() const {
    return fhat_norm * std::sin(alpha);
}

double PlaneGeometry::inner() const {
    return g_norm * fhat_norm * std::cos(alpha);
}

double PlaneGeometry::u() const {
    return d0 / (fhat_norm * std::cos(alpha));
}

std::pair<double, double> PlaneGeometry::y_plus() const {
    return {d0 / e_perp(), 0.5 * g_norm};
}

std::pair<double, double> PlaneGeometry::y_minus() const {
    return {-d0 / e_perp(), -0.5 * g_norm};
}

PlaneGeometry PlaneGeometry::from_problem(const ClassificationProblem& problem,
                                          const Vec& normal_hat, const Vec& center_hat,
                                          double cond_cap) {
    const AffineFrontier bayes = affine_frontier(problem, cond_cap);
    if (bayes.degenerate) {
        throw DegenerateDirectionError("PlaneGeometry: the Bayes frontier is degenerate");
    }
    const Mat& cov = problem.class1.covariance;
    PlaneGeometry geom;
    geom.g_norm = l2_gamma_norm(bayes.normal, cov);
    geom.fhat_norm = l2_gamma_norm(normal_hat, cov);
    geom.alpha = angle_alpha(bayes.normal, normal_hat, cov);
    geom.d0 = normal_hat.dot(center_hat - bayes.center);
    return geom;
}

// ---------------------------------------------------------------------------
// Closed-form weighted risk
// ---------------------------------------------------------------------------

double weighted_risk_affine(const Vec& normal, const Vec& center,
                            const ClassificationProblem& problem) {
    if (!problem.equal_covariance) {
        throw ContractViolation(
            "weighted_risk_affine: unequal covariances; use monte_carlo_risks");
    }
    if (normal.size() != problem.dimension() || center.size() != problem.dimension()) {
        throw ValidationError("weighted_risk_affine: dimension mismatch");
    }
    const double norm = l2_gamma_norm(normal, problem.class1.covariance);
    if (norm == 0.0) {
        return 0.5;  // constant rule: predicts 1 everywhere, errs on all of class 0
    }
    const double err1 = normal_cdf(normal.dot(center - problem.class1.mean) / norm);
    const double err0 = 1.0 - normal_cdf(normal.dot(center - problem.class0.mean) / norm);
    return 0.5 * (err1 + err0);
}

double weighted_risk_affine(const LdaRule& rule, const ClassificationProblem& problem) {
    return weighted_risk_affine(rule.normal, rule.center, problem);
}

// ---------------------------------------------------------------------------
// Wedge quadrature
// ---------------------------------------------------------------------------

namespace {

// Radial integral of the standard normal density along the ray c + t e_theta.
// The transverse distance is the cross product |c x e_theta|; the naive
// c^2 - b^2 form cancels catastrophically for distant apexes.
double wedge_radial(double cx, double cy, double theta) {
    const double cos_t = std::cos(theta);
    const double sin_t = std::sin(theta);
    const double b = cx * cos_t + cy * sin_t;
    const double cross = cx * sin_t - cy * cos_t;
    const double c2 = cx * cx + cy * cy;
    return std::exp(-0.5 * c2) / (2.0 * kPi) -
           b / std::sqrt(2.0 * kPi) * std::exp(-0.5 * cross * cross) * normal_cdf(-b);
}

struct PanelRule {
    Vec nodes, weights;
    PanelRule() {
        std::tie(nodes, weights) = gauss_legendre(21);
    }
};

double panel_integral(double cx, double cy, double lo, double hi) {
    static const PanelRule rule;
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] * wedge_radial(cx, cy, mid + half * rule.nodes[i]);
    }
    return half * acc;
}

void adaptive_panel(double cx, double cy, double lo, double hi, double coarse, double tol,
                    int depth, double& total, double& err_acc) {
    const double mid = 0.5 * (lo + hi);
    const double left = panel_integral(cx, cy, lo, mid);
    const double right = panel_integral(cx, cy, mid, hi);
    const double refined = left + right;
    const double err = std::abs(refined - coarse);
    // Below the rounding noise of the panel values further splits cannot help.
    const double floor = 4e-16 * (std::abs(refined) + std::abs(coarse));
    if (err <= std::max(tol, floor) || depth >= 32) {
        total += refined;
        err_acc += err;
        return;
    }
    adaptive_panel(cx, cy, lo, mid, left, 0.5 * tol, depth + 1, total, err_acc);
    adaptive_panel(cx, cy, mid, hi, right, 0.5 * tol, depth + 1, total, err_acc);
}

}  // namespace

double wedge_gaussian_measure(double cx, double cy, double theta_lo, double theta_hi,
                              double abs_tol) {
    if (!(theta_hi >= theta_lo)) throw ValidationError("wedge_gaussian_measure: bad angle range");
    if (theta_hi == theta_lo) return 0.0;

    // Panel breakpoints: the integrand varies on scale 1/|c| around the
    // direction pointing from the apex back at the Gaussian center.
    std::vector<double> cuts{theta_lo, theta_hi};
    const double cnorm = std::hypot(cx, cy);
    if (cnorm > 1.0) {
        const double theta_star = std::atan2(-cy, -cx);
        for (double shift : {-2.0 * kPi, 0.0, 2.0 * kPi}) {
            const double center = theta_star + shift;
            for (int k = -24; k <= 24; ++k) {
                const double t = center + k / cnorm * 4.0;
                if (t > theta_lo && t < theta_hi) cuts.push_back(t);
            }
        }
    }
    const int coarse_panels = 8;
    for (int i = 1; i < coarse_panels; ++i) {
        cuts.push_back(theta_lo + (theta_hi - theta_lo) * i / coarse_panels);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double total = 0.0;
    double err_acc = 0.0;
    const double span = theta_hi - theta_lo;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        const double coarse = panel_integral(cx, cy, lo, hi);
        adaptive_panel(cx, cy, lo, hi, coarse, abs_tol * (hi - lo) / span, 0, total, err_acc);
    }
    if (err_acc > abs_tol * 4.0) {
        std::ostringstream os;
        os << "wedge_gaussian_measure: requested tolerance " << abs_tol
           << " not reached (achieved " << err_acc << ")";
        throw QuadratureError(os.str());
    }
    return std::max(total, 0.0);
}

namespace {

// Learning error when the two frontier normals are parallel (e_perp = 0):
// the symmetric difference is a strip (or a half plane pair when opposed).
double learning_error_parallel(double g, double dhat, bool opposed) {
    if (!opposed) {
        return 0.5 * std::max(normal_cdf(dhat - 0.5 * g) - normal_cdf(-0.5 * g), 0.0);
    }
    return 0.5 * (normal_cdf(0.5 * g) + normal_cdf(0.5 * g - dhat));
}

}  // namespace

double learning_error_lda_2d(const PlaneGeometry& geom, double abs_tol) {
    if (!(geom.fhat_norm > 0.0)) {
        throw DegenerateDirectionError("learning_error_lda_2d: fhat_norm must be positive");
    }
    if (!(geom.g_norm >= 0.0)) throw ValidationError("learning_error_lda_2d: bad g_norm");
    double alpha = std::abs(geom.alpha);
    double d = geom.d0;
    if (geom.alpha < 0.0) d = -d;  // mirror the plane
    d = std::abs(d);               // R(d0) = R(-d0) by central symmetry
    if (alpha > kPi) throw ValidationError("learning_error_lda_2d: alpha outside [-pi, pi]");

    const double g = geom.g_norm;
    const double dhat = d / geom.fhat_norm;
    const double sin_a = std::sin(alpha);
    if (sin_a < 1e-9) {
        return learning_error_parallel(g, dhat, alpha > 0.5 * kPi);
    }
    const double apex_x = d / (geom.fhat_norm * sin_a);
    const double half_tol = 0.5 * abs_tol;
    // Region above D and below D-hat, seen from the class-1 center (0, g/2).
    const double term1 =
        wedge_gaussian_measure(apex_x, -0.5 * g, kPi - alpha, kPi, half_tol);
    // Region below D and above D-hat, seen from the class-0 center (0, -g/2).
    const double term2 = wedge_gaussian_measure(apex_x, 0.5 * g, -alpha, 0.0, half_tol);
    return 0.5 * (term1 + term2);
}

double excess_risk_geometry(const PlaneGeometry& geom) {
    if (!(geom.fhat_norm > 0.0)) {
        throw DegenerateDirectionError("excess_risk_geometry: fhat_norm must be positive");
    }
    const double dhat = geom.d0 / geom.fhat_norm;
    const double half_proj = 0.5 * geom.g_norm * std::cos(geom.alpha);
    const double weighted =
        0.5 * (normal_cdf(dhat - half_proj) + 1.0 - normal_cdf(dhat + half_proj));
    return weighted - normal_cdf(-0.5 * geom.g_norm);
}

GeometryRisks geometry_risks(const PlaneGeometry& geom, double abs_tol) {
    GeometryRisks risks;
    risks.learning_error = learning_error_lda_2d(geom, abs_tol);
    risks.excess = excess_risk_geometry(geom);
    risks.win_probability = risks.learning_error - risks.excess;
    risks.symdiff_mean = risks.learning_error + risks.win_probability;
    return risks;
}

RiskReport exact_affine_risks(const Vec& normal, const Vec& center,
                              const ClassificationProblem& problem, double abs_tol) {
    const Separation sep = separation(problem);
    RiskReport report;
    report.weighted_risk = weighted_risk_affine(normal, center, problem);
    report.excess = report.weighted_risk - sep.bayes_risk;
    const double fhat_norm = l2_gamma_norm(normal, problem.class1.covariance);
    if (fhat_norm == 0.0) {
        // Constant rule: it misclassifies exactly where the Bayes rule says 0.
        report.learning_error = 0.5 * normal_cdf(0.5 * sep.r);
        report.method = RiskMethod::closed_form;
        return report;
    }
    if (sep.r == 0.0) {
        // Coincident classes: the Bayes frontier is degenerate and classifies
        // everything as 1; g errs with g* correct exactly on {frontier < 0}.
        report.learning_error =
            0.5 * normal_cdf(normal.dot(center - problem.class1.mean) / fhat_norm);
        report.method = RiskMethod::closed_form;
        return report;
    }
    report.learning_error =
        learning_error_lda_2d(PlaneGeometry::from_problem(problem, normal, center), abs_tol);
    report.method = RiskMethod::quadrature_2d;
    return report;
}

RiskReport exact_affine_risks(const LdaRule& rule, const ClassificationProblem& problem,
                              double abs_tol) {
    return exact_affine_risks(rule.normal, rule.center, problem, abs_tol);
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

namespace {

struct McCells {
    std::int64_t n = 0;
    std::int64_t rule_wrong = 0;
    std::int64_t star_wrong = 0;
    std::int64_t learn = 0;  // rule wrong and star right
    std::int64_t win = 0;    // rule right and star wrong

    McCells& operator+=(const McCells& other) {
        n += other.n;
        rule_wrong += other.rule_wrong;
        star_wrong += other.star_wrong;
        learn += other.learn;
        win += other.win;
        return *this;
    }
};

McCells class_cells(const BatchFrontier& rule, const BatchFrontier& star,
                    const GaussianMeasure& measure, int label, std::int64_t n_samples,
                    std::uint64_t seed) {
    const GaussianSampler sampler(measure);
    const std::int64_t n_chunks = (n_samples + kChunk - 1) / kChunk;
    std::vector<McCells> cells(static_cast<std::size_t>(n_chunks));
    const std::uint64_t class_seed = derive_seed(seed, static_cast<std::uint64_t>(label));

    parallel_chunks(n_chunks, [&](std::int64_t chunk) {
        const std::int64_t lo = chunk * kChunk;
        const std::int64_t count = std::min<std::int64_t>(kChunk, n_samples - lo);
        Mat draws(count, measure.dimension());
        RandomStream stream(derive_seed(class_seed, static_cast<std::uint64_t>(chunk)));
        sampler.fill(stream, draws);
        const Vec rule_values = rule(draws);
        const Vec star_values = star(draws);
        McCells c;
        c.n = count;
        for (std::int64_t i = 0; i < count; ++i) {
            const bool g_wrong = (rule_values[i] >= 0.0) != (label == 1);
            const bool s_wrong = (star_values[i] >= 0.0) != (label == 1);
            c.rule_wrong += g_wrong;
            c.star_wrong += s_wrong;
            c.learn += g_wrong && !s_wrong;
            c.win += !g_wrong && s_wrong;
        }
        cells[static_cast<std::size_t>(chunk)] = c;
    });

    McCells total;
    for (const McCells& c : cells) total += c;
    return total;
}

double binomial_var(double p, std::int64_t n) {
    return p * (1.0 - p) / static_cast<double>(n);
}

}  // namespace

RiskReport monte_carlo_risks(const BatchFrontier& rule, const ClassificationProblem& problem,
                             std::int64_t n_samples, std::uint64_t seed) {
    if (n_samples < 2) throw ValidationError("monte_carlo_risks: need at least 2 samples");

    BatchFrontier star;
    if (problem.equal_covariance) {
        const AffineFrontier bayes = affine_frontier(problem);
        star = [bayes](const Mat& rows) { return bayes.values(rows); };
    } else {
        const QuadraticFrontier bayes = quadratic_frontier(problem);
        star = [bayes](const Mat& rows) { return bayes.values(rows); };
    }

    const std::int64_t n1 = n_samples / 2;
    const std::int64_t n0 = n_samples - n1;
    const McCells c1 = class_cells(rule, star, problem.class1, 1, n1, seed);
    const McCells c0 = class_cells(rule, star, problem.class0, 0, n0, seed);

    const double p1_rule = static_cast<double>(c1.rule_wrong) / c1.n;
    const double p0_rule = static_cast<double>(c0.rule_wrong) / c0.n;
    const double p1_star = static_cast<double>(c1.star_wrong) / c1.n;
    const double p0_star = static_cast<double>(c0.star_wrong) / c0.n;
    const double p1_learn = static_cast<double>(c1.learn) / c1.n;
    const double p0_learn = static_cast<double>(c0.learn) / c0.n;

    RiskReport report;
    report.method = RiskMethod::monte_carlo;
    report.n_samples = n_samples;
    report.weighted_risk = 0.5 * (p1_rule + p0_rule);
    report.excess = report.weighted_risk - 0.5 * (p1_star + p0_star);
    report.learning_error = 0.5 * (p1_learn + p0_learn);
    report.se_weighted = 0.5 * std::sqrt(binomial_var(p1_rule, c1.n) + binomial_var(p0_rule, c0.n));
    report.se_learning =
        0.5 * std::sqrt(binomial_var(p1_learn, c1.n) + binomial_var(p0_learn, c0.n));
    // Excess is a mean of per-sample differences d in {-1, 0, 1}.
    auto diff_var = [](const McCells& c) {
        const double mean = static_cast<double>(c.learn - c.win) / c.n;
        const double second = static_cast<double>(c.learn + c.win) / c.n;
        return (second - mean * mean) / static_cast<double>(c.n);
    };
    report.se_excess = 0.5 * std::sqrt(diff_var(c1) + diff_var(c0));
    return report;
}

RiskReport monte_carlo_risks(const LdaRule& rule, const ClassificationProblem& problem,
                             std::int64_t n_samples, std::uint64_t seed) {
    return monte_carlo_risks(
        BatchFrontier([&rule](const Mat& rows) { return rule.frontier_values(rows); }), problem,
        n_samples, seed);
}

RiskReport monte_carlo_risks(const DiagQdaRule& rule, const ClassificationProblem& problem,
                             std::int64_t n_samples, std::uint64_t seed) {
    return monte_carlo_risks(
        BatchFrontier([&rule](const Mat& rows) { return rule.frontier_values(rows); }), problem,
        n_samples, seed);
}

RiskReport monte_carlo_risks(const AffineFrontier& rule, const ClassificationProblem& problem,
                             std::int64_t n_samples, std::uint64_t seed) {
    return monte_carlo_risks(BatchFrontier([&rule](const Mat& rows) { return rule.values(rows); }),
                             problem, n_samples, seed);
}

RiskReport monte_carlo_risks(const QuadraticFrontier& rule, const ClassificationProblem& problem,
                             std::int64_t n_samples, std::uint64_t seed) {
    return monte_carlo_risks(BatchFrontier([&rule](const Mat& rows) { return rule.values(rows); }),
                             problem, n_samples, seed);
}

McEstimate mc_symmetric_difference(const BatchFrontier& f, const BatchFrontier& g,
                                   const GaussianMeasure& measure, std::int64_t n_samples,
                                   std::uint64_t seed) {
    if (n_samples < 1) throw ValidationError("mc_symmetric_difference: need samples");
    const GaussianSampler sampler(measure);
    const std::int64_t n_chunks = (n_samples + kChunk - 1) / kChunk;
    std::vector<std::int64_t> hits(static_cast<std::size_t>(n_chunks), 0);

    parallel_chunks(n_chunks, [&](std::int64_t chunk) {
        const std::int64_t lo = chunk * kChunk;
        const std::int64_t count = std::min<std::int64_t>(kChunk, n_samples - lo);
        Mat draws(count, measure.dimension());
        RandomStream stream(derive_seed(seed, static_cast<std::uint64_t>(chunk)));
        sampler.fill(stream, draws);
        const Vec fv = f(draws);
        const Vec gv = g(draws);
        std::int64_t h = 0;
        for (std::int64_t i = 0; i < count; ++i) {
            h += (fv[i] >= 0.0) != (gv[i] >= 0.0);
        }
        hits[static_cast<std::size_t>(chunk)] = h;
    });

    const double total = static_cast<double>(std::accumulate(hits.begin(), hits.end(), std::int64_t{0}));
    McEstimate est;
    est.n_samples = n_samples;
    est.value = total / static_cast<double>(n_samples);
    est.std_error = std::sqrt(binomial_var(est.value, n_samples));
    return est;
}

// ---------------------------------------------------------------------------
// Bound evaluators
// ---------------------------------------------------------------------------

std::vector<BoundReport> bound_theorem_lda(const AffineFrontier& frontier, const LdaRule& hat,
                                           const ClassificationProblem& problem) {
    if (!problem.equal_covariance) {
        throw ContractViolation("bound_theorem_lda: equal covariances required");
    }
    const Mat& cov = problem.class1.covariance;
    const double f_norm = l2_gamma_norm(frontier.normal, cov);
    if (!(f_norm > 0.0)) {
        throw DegenerateDirectionError("bound_theorem_lda: ||F|| must be positive");
    }
    const double fhat_norm = l2_gamma_norm(hat.normal, cov);
    const double d0 = std::abs(hat.normal.dot(hat.center - frontier.center));
    const double diff_norm = l2_gamma_norm(frontier.normal - hat.normal, cov);

    double script_e;
    if (fhat_norm == 0.0) {
        script_e = d0 == 0.0 ? diff_norm : std::numeric_limits<double>::infinity();
    } else {
        script_e = 4.0 * f_norm / (std::sqrt(kPi) * fhat_norm) * d0 + diff_norm;
    }

    std::map<std::string, double> inputs{{"f_norm", f_norm},
                                         {"fhat_norm", fhat_norm},
                                         {"abs_d0", d0},
                                         {"diff_norm", diff_norm},
                                         {"script_e", script_e}};

    BoundReport basic;
    basic.name = "lda_upper_basic";
    basic.side = BoundSide::upper;
    basic.value = script_e / f_norm;
    basic.applicable = true;
    basic.vacuous = basic.value > 1.0;
    basic.inputs = inputs;

    BoundReport refined;
    refined.name = "lda_upper_refined";
    refined.side = BoundSide::upper;
    refined.value = std::exp(-f_norm * f_norm / 32.0) * basic.value;
    refined.inputs = inputs;
    bool hypotheses = false;
    if (fhat_norm > 0.0) {
        const double inner = l2_gamma_inner(hat.normal, frontier.normal, cov);
        const double alpha = angle_alpha(frontier.normal, hat.normal, cov);
        hypotheses = d0 <= 0.25 * std::abs(inner) && alpha <= 0.25 * kPi;
        refined.inputs["inner_l2"] = inner;
        refined.inputs["alpha"] = alpha;
    }
    refined.applicable = hypotheses;
    refined.vacuous = refined.value > 1.0;

    return {basic, refined};
}

namespace {

BoundReport make_geom_report(const char* name, BoundSide side, double value, bool applicable,
                             const PlaneGeometry& geom) {
    BoundReport report;
    report.name = name;
    report.side = side;
    report.value = value;
    report.applicable = applicable;
    report.vacuous = side == BoundSide::upper && value > 1.0;
    report.inputs = {{"alpha", geom.alpha},
                     {"g_norm", geom.g_norm},
                     {"fhat_norm", geom.fhat_norm},
                     {"d0", geom.d0},
                     {"inner_l2", geom.inner()}};
    return report;
}

}  // namespace

std::vector<BoundReport> bounds_theorem_geometric(const PlaneGeometry& geom) {
    const double alpha = std::abs(geom.alpha);
    if (alpha > kPi) throw ValidationError("bounds_theorem_geometric: alpha outside [-pi, pi]");
    const double g = geom.g_norm;
    const double d0 = std::abs(geom.d0);
    const double inner = std::abs(geom.inner());
    const bool acute = alpha < 0.5 * kPi;

    // |u| = |d0| tan(alpha) / e_perp, finite form |d0| / (fhat cos alpha).
    const double abs_u =
        acute ? d0 / (geom.fhat_norm * std::cos(alpha)) : std::numeric_limits<double>::infinity();
    const double tan_a = acute ? std::tan(alpha) : std::numeric_limits<double>::infinity();
    const double upper_interval = gamma1_interval((1.0 + tan_a) * abs_u);

    const bool case1 = acute && d0 <= 0.25 * inner;
    const bool case2 = acute && d0 > 0.25 * inner && d0 <= 0.5 * inner;
    const bool case3 = acute && d0 > 0.5 * inner;
    const bool case4 = acute && d0 == 0.0;

    std::vector<BoundReport> reports;
    reports.push_back(make_geom_report("the1_lower_half", BoundSide::lower, 0.5, !acute, geom));
    reports.push_back(make_geom_report("the1_upper_half", BoundSide::upper, 0.5, acute, geom));

    reports.push_back(make_geom_report(
        "the1_case1_lower", BoundSide::lower,
        std::exp(-g * g / 8.0) * 0.25 * (alpha / (2.0 * kPi) + 0.5 * gamma1_interval(abs_u)), case1,
        geom));
    reports.push_back(make_geom_report(
        "the1_case1_upper", BoundSide::upper,
        std::exp(-g * g * std::cos(alpha) * std::cos(alpha) / 32.0) *
            (alpha / (2.0 * kPi) + upper_interval),
        case1, geom));

    reports.push_back(make_geom_report(
        "the1_case2_lower", BoundSide::lower,
        std::exp(-g * g / 2.0) * 0.25 * (0.5 * gamma1_interval(g / 4.0) + alpha / (2.0 * kPi)),
        case2, geom));
    reports.push_back(make_geom_report("the1_case2_upper", BoundSide::upper,
                                       alpha / (2.0 * kPi) + upper_interval, case2, geom));

    reports.push_back(make_geom_report(
        "the1_case3_lower", BoundSide::lower,
        alpha / (4.0 * kPi) + 0.25 * gamma1_interval(g / 2.0), case3, geom));
    reports.push_back(make_geom_report("the1_case3_upper", BoundSide::upper,
                                       alpha / (2.0 * kPi) + upper_interval, case3, geom));

    reports.push_back(make_geom_report("the1_case4_lower", BoundSide::lower,
                                       std::exp(-g * g / 8.0) * alpha / (2.0 * kPi), case4, geom));
    return reports;
}

BoundReport bound_prop_incons(std::int64_t n, std::int64_t p, double r) {
    if (p <= 0 || n < 0) throw ValidationError("bound_prop_incons: bad n or p");
    BoundReport report;
    report.name = "prop_incons_lower";
    report.side = BoundSide::lower;
    report.applicable = n <= p;
    const double ratio = std::min(static_cast<double>(n) / static_cast<double>(p), 1.0);
    report.value = std::acos(std::sqrt(ratio)) / (2.0 * kPi) * std::exp(-r * r / 8.0);
    report.inputs = {{"n", static_cast<double>(n)}, {"p", static_cast<double>(p)}, {"r", r}};
    return report;
}

BoundReport bound_prop_errlin(std::int64_t n, std::int64_t p, double r) {
    if (p <= 3) throw ValidationError("bound_prop_errlin: requires p > 3");
    if (n < 0) throw ValidationError("bound_prop_errlin: bad n");
    const double arg = (std::sqrt(static_cast<double>(n)) * r + 1.0) /
                       std::sqrt(static_cast<double>(p - 3));
    BoundReport report;
    report.name = "prop_errlin_lower";
    report.side = BoundSide::lower;
    report.applicable = arg <= 1.0;
    report.value = std::acos(std::min(arg, 1.0)) / (2.0 * kPi) * std::exp(-r * r / 8.0);
    report.inputs = {{"n", static_cast<double>(n)},
                     {"p", static_cast<double>(p)},
                     {"r", r},
                     {"arccos_arg", arg}};
    return report;
}

BoundReport bound_reverse(double r, double learning_error) {
    if (!(learning_error >= 0.0 && learning_error <= 1.0)) {
        throw ValidationError("bound_reverse: learning_error must lie in [0, 1]");
    }
    const double quadratic = std::sqrt(2.0 * kPi) / 512.0 * r * std::exp(r * r / 8.0) *
                             learning_error * learning_error;
    BoundReport report;
    report.name = "reverse_lower";
    report.side = BoundSide::lower;
    report.applicable = true;
    report.value = std::min(quadratic, learning_error / 8.0);
    report.inputs = {{"r", r},
                     {"learning_error", learning_error},
                     {"quadratic_branch", quadratic},
                     {"linear_branch", learning_error / 8.0}};
    return report;
}

QdaPerturbation qda_perturbation(const QuadraticFrontier& true_f, const QuadraticFrontier& hat_f) {
    if (true_f.center.size() != hat_f.center.size()) {
        throw ValidationError("qda_perturbation: dimension mismatch");
    }
    const Vec v = hat_f.center - true_f.center;  // s_hat - s
    QdaPerturbation parts;
    parts.delta_q = hat_f.quad - true_f.quad;
    parts.delta_l =
        hat_f.linear - true_f.linear + 0.5 * (hat_f.quad + hat_f.quad.transpose()) * v;
    parts.delta0 = -hat_f.linear.dot(v) - 0.5 * v.dot(hat_f.quad * v) +
                   (true_f.offset - hat_f.offset);
    return parts;
}

BoundReport bound_qda_corollary(const QuadraticFrontier& true_f, const QuadraticFrontier& hat_f,
                                const Mat& ref_cov, double r, double q, double c1) {
    if (!(q > 0.0 && q < 1.0)) throw ValidationError("bound_qda_corollary: q must lie in (0,1)");
    const QdaPerturbation parts = qda_perturbation(true_f, hat_f);
    const Mat cdq = ref_cov * parts.delta_q;
    const Mat root = sym_sqrt(ref_cov);
    const double s_value = 0.5 * cdq.squaredNorm() + (root * parts.delta_l).squaredNorm() +
                           2.0 * parts.delta0 * parts.delta0 +
                           0.5 * cdq.trace() * cdq.trace();

    // ||L||^2_{L2(gamma_{C,s})} for the applicability hypothesis.
    const Mat m_quad = root * true_f.quad * root;
    const double mean = -0.5 * m_quad.trace() - true_f.offset;
    const double var = 0.5 * m_quad.squaredNorm() + (root * true_f.linear).squaredNorm();
    const double l_norm2 = mean * mean + var;

    BoundReport report;
    report.name = "qda_corollary_upper";
    report.side = BoundSide::upper;
    report.value = c1 * std::pow(s_value, q / 3.0);
    report.applicable = l_norm2 > r;
    report.vacuous = report.value > 1.0;
    report.inputs = {{"s_value", s_value},
                     {"delta0", parts.delta0},
                     {"q", q},
                     {"c1", c1},
                     {"l_norm2", l_norm2},
                     {"r", r}};
    return report;
}

WellSeparatedDiagnostic well_separated_diagnostic(const PlaneGeometry& geom) {
    WellSeparatedDiagnostic diag;
    const double inner = std::abs(geom.inner());
    if (inner == 0.0) {
        diag.ratio = std::numeric_limits<double>::infinity();
        diag.regime = WellSeparatedDiagnostic::Regime::at_least_one_eighth;
        return diag;
    }
    diag.ratio = 2.0 * std::abs(geom.d0) / inner;
    if (diag.ratio < 1.0) {
        diag.regime = WellSeparatedDiagnostic::Regime::vanishing;
    } else if (diag.ratio > 1.0) {
        diag.regime = WellSeparatedDiagnostic::Regime::at_least_one_eighth;
    } else {
        diag.regime = WellSeparatedDiagnostic::Regime::indeterminate;
    }
    return diag;
}

// ---------------------------------------------------------------------------
// Risk sweep
// ---------------------------------------------------------------------------

namespace {

LabeledDataset draw_learning_set(const ClassificationProblem& problem, int n,
                                 std::uint64_t seed) {
    const int n1 = n / 2;
    const int n0 = n - n1;
    LabeledDataset data;
    data.features.resize(n, problem.dimension());
    data.labels.resize(static_cast<std::size_t>(n));
    data.features.topRows(n1) = sample(problem.class1, n1, derive_seed(seed, 1));
    data.features.bottomRows(n0) = sample(problem.class0, n0, derive_seed(seed, 0));
    std::fill(data.labels.begin(), data.labels.begin() + n1, 1);
    std::fill(data.labels.begin() + n1, data.labels.end(), 0);
    return data;
}

}  // namespace

std::vector<SweepRow> expected_risk_sweep(const ProblemFamily& family,
                                          const std::vector<int>& n_values, int replicates,
                                          std::uint64_t master_seed, const SweepOptions& options) {
    if (replicates < 1) throw ValidationError("expected_risk_sweep: replicates must be positive");
    std::vector<SweepRow> rows;
    rows.reserve(n_values.size());
    for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
        const int n = n_values[ni];
        if (n < 2) throw ValidationError("expected_risk_sweep: n must be at least 2");
        SweepRow row;
        row.n = n;
        for (int rep = 0; rep < replicates; ++rep) {
            const std::uint64_t rep_seed = derive_seed(master_seed, static_cast<std::uint64_t>(rep));
            const ClassificationProblem problem = family(rep_seed);
            const std::uint64_t data_seed =
                derive_seed(rep_seed, 0x1000 + static_cast<std::uint64_t>(ni));
            const LabeledDataset data = draw_learning_set(problem, n, data_seed);
            const std::optional<Vec> center =
                options.center_known ? std::optional<Vec>(problem.midpoint()) : std::nullopt;

            RiskReport report;
            if (options.procedure == FitProcedure::diag_qda) {
                DiagQdaRule rule = fit_diag_qda(data, options.b_p);
                if (center) rule.center = *center;
                const std::int64_t mc =
                    options.mc_samples > 0 ? options.mc_samples : 200000;
                report = monte_carlo_risks(rule, problem, mc, derive_seed(rep_seed, 0x2000 + ni));
            } else {
                LdaRule rule;
                switch (options.procedure) {
                    case FitProcedure::fdr_lda:
                        rule = fit_lda_fdr_known_cov(data, problem.class1.covariance, center,
                                                     options.b_p);
                        break;
                    case FitProcedure::naive_lda:
                        rule = fit_naive_lda(data, problem.class1.covariance);
                        if (center) rule.center = *center;
                        break;
                    case FitProcedure::fisher_pseudo:
                        rule = fit_fisher_pseudo(data);
                        if (center) rule.center = *center;
                        break;
                    default:
                        throw ValidationError("expected_risk_sweep: unknown procedure");
                }
                if (options.mc_samples > 0) {
                    report = monte_carlo_risks(rule, problem, options.mc_samples,
                                               derive_seed(rep_seed, 0x2000 + ni));
                } else {
                    report = exact_affine_risks(rule, problem);
                }
            }
            row.excess.push_back(report.excess);
            row.learning_error.push_back(report.learning_error);
        }
        row.median_excess = median(row.excess);
        row.mean_excess =
            std::accumulate(row.excess.begin(), row.excess.end(), 0.0) / row.excess.size();
        row.median_learning = median(row.learning_error);
        row.mean_learning =
            std::accumulate(row.learning_error.begin(), row.learning_error.end(), 0.0) /
            row.learning_error.size();

        // Proposition lower bound evaluated at this configuration.
        const ClassificationProblem probe = family(derive_seed(master_seed, 0));
        const double r = separation(probe).r;
        const auto p = probe.dimension();
        if (options.procedure == FitProcedure::fisher_pseudo) {
            row.lower_bound = bound_prop_incons(n, p, r);
        } else if (options.procedure == FitProcedure::naive_lda && p > 3) {
            row.lower_bound = bound_prop_errlin(n, p, r);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace hdgauss
