#pragma once

#include "hdgauss/classifiers.hpp"
#include "hdgauss/gaussian.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace hdgauss {

enum class RiskMethod { closed_form, quadrature_2d, monte_carlo };

const char* to_string(RiskMethod method);

struct RiskReport {
    double weighted_risk = 0.0;   // C(g)
    double excess = 0.0;          // C(g) - C(g*)
    double learning_error = 0.0;  // R(g)
    RiskMethod method = RiskMethod::closed_form;
    double se_weighted = 0.0;  // Monte Carlo standard errors (0 for exact methods)
    double se_excess = 0.0;
    double se_learning = 0.0;
    std::int64_t n_samples = 0;
};

enum class BoundSide { lower, upper };

struct BoundReport {
    std::string name;
    double value = 0.0;
    bool applicable = false;  // stated hypotheses hold
    BoundSide side = BoundSide::upper;
    bool vacuous = false;  // upper bound exceeding 1
    std::map<std::string, double> inputs;
};

/// The 2-D reduction of an affine rule against the affine Bayes rule:
/// everything the learning-error geometry needs, in L2(gamma_C) units.
struct PlaneGeometry {
    double g_norm = 0.0;     // ||F||
    double fhat_norm = 0.0;  // ||F_hat||
    double alpha = 0.0;      // angle in [0, pi]
    double d0 = 0.0;         // <F_hat, s_hat - s>

    double e_perp() const;  // ||projection of F_hat orthogonal to F||
    double inner() const;   // <F, F_hat> = g_norm * fhat_norm * cos(alpha)
    /// Apex abscissa tan(alpha) * y_h, computed as d0 / (fhat_norm cos(alpha)).
    double u() const;
    /// Gaussian centers relative to the wedge apex: the class-1 center is
    /// y_plus = (d0/e_perp, g/2) and the class-0 one is its central
    /// reflection y_minus = -y_plus.
    std::pair<double, double> y_plus() const;
    std::pair<double, double> y_minus() const;

    static PlaneGeometry from_problem(const ClassificationProblem& problem, const Vec& normal_hat,
                                      const Vec& center_hat, double cond_cap = 1e12);
};

/// Exact weighted misclassification risk of an affine rule on an
/// equal-covariance problem (single Phi evaluation per class).
double weighted_risk_affine(const Vec& normal, const Vec& center,
                            const ClassificationProblem& problem);
double weighted_risk_affine(const LdaRule& rule, const ClassificationProblem& problem);

/// Learning error of the 2-D geometry by polar quadrature around the wedge
/// apexes; absolute accuracy abs_tol.
double learning_error_lda_2d(const PlaneGeometry& geom, double abs_tol = 1e-9);

/// Exact excess risk of the geometry (two Phi evaluations).
double excess_risk_geometry(const PlaneGeometry& geom);

/// Joint decomposition of the disagreement between the rule and the Bayes
/// rule: learning_error = P(rule wrong, bayes right), win_probability =
/// P(rule right, bayes wrong) = learning_error - excess, and their sum, the
/// mean symmetric-difference probability.
struct GeometryRisks {
    double learning_error = 0.0;
    double excess = 0.0;
    double win_probability = 0.0;
    double symdiff_mean = 0.0;
};

GeometryRisks geometry_risks(const PlaneGeometry& geom, double abs_tol = 1e-9);

/// Exact report for an affine rule on an equal-covariance problem: closed-form
/// weighted risk and excess, learning error by 2-D quadrature.
RiskReport exact_affine_risks(const Vec& normal, const Vec& center,
                              const ClassificationProblem& problem, double abs_tol = 1e-9);
RiskReport exact_affine_risks(const LdaRule& rule, const ClassificationProblem& problem,
                              double abs_tol = 1e-9);

/// Standard-normal measure of the wedge {c + t e_theta : t >= 0,
/// theta in [theta_lo, theta_hi]} where c is the apex position relative to
/// the Gaussian center. Exposed for tests.
double wedge_gaussian_measure(double cx, double cy, double theta_lo, double theta_hi,
                              double abs_tol = 1e-10);

using BatchFrontier = std::function<Vec(const Mat&)>;

/// Monte Carlo estimates of C(g), C(g*), excess and learning error on one
/// shared sample stream. Deterministic for a given seed, independent of the
/// worker count.
RiskReport monte_carlo_risks(const BatchFrontier& rule, const ClassificationProblem& problem,
                             std::int64_t n_samples, std::uint64_t seed);
RiskReport monte_carlo_risks(const LdaRule& rule, const ClassificationProblem& problem,
                             std::int64_t n_samples, std::uint64_t seed);
RiskReport monte_carlo_risks(const DiagQdaRule& rule, const ClassificationProblem& problem,
                             std::int64_t n_samples, std::uint64_t seed);
RiskReport monte_carlo_risks(const AffineFrontier& rule, const ClassificationProblem& problem,
                             std::int64_t n_samples, std::uint64_t seed);
RiskReport monte_carlo_risks(const QuadraticFrontier& rule, const ClassificationProblem& problem,
                             std::int64_t n_samples, std::uint64_t seed);

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t n_samples = 0;
};

/// gamma(V_f symmetric-difference V_g) under the given measure, by Monte Carlo.
McEstimate mc_symmetric_difference(const BatchFrontier& f, const BatchFrontier& g,
                                   const GaussianMeasure& measure, std::int64_t n_samples,
                                   std::uint64_t seed);

/// Upper bounds on the excess risk of an affine plug-in rule: the basic
/// E/||F|| bound and the refined exponential variant with its two hypotheses.
std::vector<BoundReport> bound_theorem_lda(const AffineFrontier& frontier, const LdaRule& hat,
                                           const ClassificationProblem& problem);

/// Four-case learning-error bounds as functions of the plane geometry, plus
/// the half bounds at alpha >= pi/2. All cases are reported; `applicable`
/// marks the ones whose hypotheses hold.
std::vector<BoundReport> bounds_theorem_geometric(const PlaneGeometry& geom);

/// Lower bound on E[R] for the pseudo-inverse Fisher rule.
BoundReport bound_prop_incons(std::int64_t n, std::int64_t p, double r);

/// Lower bound on E[R] for the naive plug-in rule.
BoundReport bound_prop_errlin(std::int64_t n, std::int64_t p, double r);

/// Lower bound on the excess risk in terms of the learning error:
/// min{ sqrt(2 pi)/512 * r * exp(r^2/8) * R^2, R/8 }.
BoundReport bound_reverse(double r, double learning_error);

/// Perturbation decomposition of a quadratic substitute around the true
/// frontier: L_hat(x) = L(x) + delta0 + <delta_l, x-s> - 1/2 <delta_q (x-s), x-s>.
struct QdaPerturbation {
    double delta0 = 0.0;
    Vec delta_l;
    Mat delta_q;
};

QdaPerturbation qda_perturbation(const QuadraticFrontier& true_f, const QuadraticFrontier& hat_f);

/// Learning-error bound for quadratic perturbations: c1 * S^{q/3} with
/// S = 1/2 ||C dQ||_HS^2 + ||C^{1/2} dL||^2 + 2 d0^2 + 1/2 trace^2(C dQ).
/// The constant c1 is caller-supplied; S itself is reported in `inputs` for
/// constant-free monotonicity checks.
BoundReport bound_qda_corollary(const QuadraticFrontier& true_f, const QuadraticFrontier& hat_f,
                                const Mat& ref_cov, double r, double q, double c1);

struct WellSeparatedDiagnostic {
    double ratio = 0.0;  // 2 |d0| / |<F, F_hat>|
    enum class Regime { vanishing, at_least_one_eighth, indeterminate } regime =
        Regime::indeterminate;
};

WellSeparatedDiagnostic well_separated_diagnostic(const PlaneGeometry& geom);

enum class FitProcedure { fdr_lda, naive_lda, fisher_pseudo, diag_qda };

const char* to_string(FitProcedure procedure);

struct SweepOptions {
    FitProcedure procedure = FitProcedure::fdr_lda;
    double b_p = 0.01;
    bool center_known = true;      // plug the true s_10 into the rule
    std::int64_t mc_samples = 0;   // 0 = exact evaluation (affine rules only)
};

struct SweepRow {
    int n = 0;
    std::vector<double> excess;
    std::vector<double> learning_error;
    double median_excess = 0.0;
    double mean_excess = 0.0;
    double median_learning = 0.0;
    double mean_learning = 0.0;
    BoundReport lower_bound;  // proposition bound where one applies
};

using ProblemFamily = std::function<ClassificationProblem(std::uint64_t seed)>;

/// Fits `replicates` rules per n on fresh learning sets and evaluates their
/// risks. Deterministic for a given master seed.
std::vector<SweepRow> expected_risk_sweep(const ProblemFamily& family,
                                          const std::vector<int>& n_values, int replicates,
                                          std::uint64_t master_seed, const SweepOptions& options);

double median(std::vector<double> values);

}  // namespace hdgauss
