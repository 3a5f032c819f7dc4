#include "hdgauss/gaussian.hpp"

#include "hdgauss/errors.hpp"

#include <cmath>
#include <sstream>

namespace hdgauss {

namespace {

constexpr double kSymTol = 1e-12;
constexpr double kPsdTol = 1e-10;

void check_psd(const Mat& covariance, const char* what) {
    SymEig eig = sym_eig(covariance);
    const double lmax = std::max(eig.values.maxCoeff(), 0.0);
    const double lmin = eig.values.minCoeff();
    if (lmin < -kPsdTol * std::max(lmax, 1e-300)) {
        std::ostringstream os;
        os << what << ": covariance is not positive semi-definite (eigenvalue " << lmin << ")";
        throw FactorizationError(os.str());
    }
}

}  // namespace

GaussianMeasure::GaussianMeasure(Vec mean_, Mat covariance_)
    : mean(std::move(mean_)), covariance(std::move(covariance_)) {
    if (covariance.rows() != mean.size() || covariance.cols() != mean.size()) {
        throw ValidationError("GaussianMeasure: covariance shape does not match mean");
    }
    check_symmetric(covariance, kSymTol, "GaussianMeasure");
    check_psd(covariance, "GaussianMeasure");
}

ClassificationProblem::ClassificationProblem(GaussianMeasure class1_, GaussianMeasure class0_,
                                             bool equal_covariance_)
    : class1(std::move(class1_)), class0(std::move(class0_)), equal_covariance(equal_covariance_) {
    if (class1.dimension() != class0.dimension()) {
        throw ValidationError("ClassificationProblem: class dimensions differ");
    }
    if (equal_covariance && class1.covariance != class0.covariance) {
        throw ValidationError(
            "ClassificationProblem: equal_covariance set but covariances are not identical");
    }
}

ClassificationProblem make_equal_covariance_problem(Vec mu1, Vec mu0, Mat covariance) {
    GaussianMeasure p1(std::move(mu1), covariance);
    GaussianMeasure p0(std::move(mu0), std::move(covariance));
    return ClassificationProblem(std::move(p1), std::move(p0), true);
}

double AffineFrontier::value(const Vec& x) const {
    if (x.size() != normal.size()) throw ValidationError("AffineFrontier: dimension mismatch");
    return normal.dot(x - center);
}

Vec AffineFrontier::values(const Mat& rows) const {
    if (rows.cols() != normal.size()) throw ValidationError("AffineFrontier: dimension mismatch");
    return (rows * normal).array() - normal.dot(center);
}

double QuadraticFrontier::value(const Vec& x) const {
    if (x.size() != center.size()) throw ValidationError("QuadraticFrontier: dimension mismatch");
    const Vec w = x - center;
    return -0.5 * w.dot(quad * w) + linear.dot(w) - offset;
}

Vec QuadraticFrontier::values(const Mat& rows) const {
    if (rows.cols() != center.size()) throw ValidationError("QuadraticFrontier: dimension mismatch");
    Mat w = rows.rowwise() - center.transpose();
    Vec quad_part = ((w * quad).cwiseProduct(w)).rowwise().sum();
    return (-0.5 * quad_part + w * linear).array() - offset;
}

GaussianSampler::GaussianSampler(const GaussianMeasure& measure) : mean_(measure.mean) {
    check_symmetric(measure.covariance, kSymTol, "GaussianSampler");
    SymEig eig = sym_eig(measure.covariance);
    const double lmax = std::max(eig.values.maxCoeff(), 0.0);
    const double lmin = eig.values.minCoeff();
    if (lmin < -kPsdTol * std::max(lmax, 1e-300)) {
        std::ostringstream os;
        os << "sample: covariance admits no PSD factorization (eigenvalue " << lmin << ")";
        throw FactorizationError(os.str());
    }
    diagonal_ = measure.covariance.isDiagonal(0.0);
    if (diagonal_) {
        diag_root_ = measure.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
    } else {
        Vec root = eig.values.cwiseMax(0.0).cwiseSqrt();
        root_ = eig.vectors * root.asDiagonal() * eig.vectors.transpose();
    }
}

void GaussianSampler::fill(RandomStream& stream, Mat& out) const {
    const Eigen::Index p = mean_.size();
    if (out.cols() != p) throw ValidationError("GaussianSampler::fill: dimension mismatch");
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        for (Eigen::Index j = 0; j < p; ++j) {
            out(i, j) = stream.normal();
        }
    }
    if (diagonal_) {
        out = out * diag_root_.asDiagonal();
    } else {
        out = out * root_;  // root is symmetric
    }
    out.rowwise() += mean_.transpose();
}

Mat GaussianSampler::draw(std::int64_t count, std::uint64_t seed) const {
    if (count < 0) throw ValidationError("sample: count must be nonnegative");
    Mat out(count, mean_.size());
    RandomStream stream(seed);
    fill(stream, out);
    return out;
}

Mat sample(const GaussianMeasure& measure, std::int64_t count, std::uint64_t seed) {
    return GaussianSampler(measure).draw(count, seed);
}

AffineFrontier affine_frontier(const ClassificationProblem& problem, double cond_cap) {
    if (!problem.equal_covariance) {
        throw ContractViolation("affine_frontier: problem does not have equal covariances");
    }
    const Vec m = problem.mean_difference();
    AffineFrontier frontier;
    frontier.center = problem.midpoint();
    if (m.isZero(0.0)) {
        frontier.normal = Vec::Zero(m.size());
        frontier.degenerate = true;
        return frontier;
    }
    frontier.normal = sym_solve(problem.class1.covariance, m, cond_cap);
    frontier.degenerate = false;
    return frontier;
}

QuadraticFrontier quadratic_frontier(const ClassificationProblem& problem, double cond_cap) {
    const Mat& c1 = problem.class1.covariance;
    const Mat& c0 = problem.class0.covariance;
    const Mat inv1 = sym_inverse(c1, cond_cap);
    const Mat inv0 = sym_inverse(c0, cond_cap);
    const Vec m = problem.mean_difference();

    QuadraticFrontier frontier;
    frontier.quad = inv1 - inv0;
    frontier.linear = 0.5 * (inv0 + inv1) * m;
    frontier.center = problem.midpoint();
    // Constant term of log dP1/dP0 expanded around s_10. The determinant term
    // enters with a plus sign; with it the frontier is the exact density
    // log-ratio (checked against log-density differences in the tests).
    frontier.offset =
        0.125 * m.dot(frontier.quad * m) + 0.5 * (log_det_spd(c1, cond_cap) - log_det_spd(c0, cond_cap));
    return frontier;
}

Mat w_operator(const Mat& c1, const Mat& c0, double cond_cap) {
    if (c1.rows() != c0.rows() || c1.cols() != c0.cols()) {
        throw ValidationError("w_operator: dimension mismatch");
    }
    check_symmetric(c1, kSymTol, "w_operator");
    check_psd(c1, "w_operator");
    const Mat s1 = sym_sqrt(c1);
    Mat w = Mat::Identity(c1.rows(), c1.cols()) - s1 * sym_inverse(c0, cond_cap) * s1;
    return 0.5 * (w + w.transpose());
}

double l2_gamma_norm(const Vec& v, const Mat& cov) {
    if (cov.rows() != v.size()) throw ValidationError("l2_gamma_norm: dimension mismatch");
    const double q = v.dot(cov * v);
    return std::sqrt(std::max(q, 0.0));
}

double l2_gamma_inner(const Vec& f, const Vec& g, const Mat& cov) {
    if (cov.rows() != f.size() || cov.rows() != g.size()) {
        throw ValidationError("l2_gamma_inner: dimension mismatch");
    }
    return f.dot(cov * g);
}

double angle_alpha(const Vec& f, const Vec& f_hat, const Mat& cov) {
    const double nf = l2_gamma_norm(f, cov);
    const double nh = l2_gamma_norm(f_hat, cov);
    if (nf == 0.0 || nh == 0.0) {
        throw DegenerateDirectionError("angle_alpha: a direction has zero L2(gamma_C) norm");
    }
    double c = l2_gamma_inner(f, f_hat, cov) / (nf * nh);
    c = std::min(1.0, std::max(-1.0, c));
    return std::acos(c);
}

Separation separation(const ClassificationProblem& problem, double cond_cap) {
    if (!problem.equal_covariance) {
        throw ContractViolation("separation: problem does not have equal covariances");
    }
    const Vec m = problem.mean_difference();
    double r = 0.0;
    if (!m.isZero(0.0)) {
        r = std::sqrt(std::max(m.dot(sym_solve(problem.class1.covariance, m, cond_cap)), 0.0));
    }
    Separation sep;
    sep.r = r;
    sep.bayes_risk = normal_cdf(-0.5 * r);
    sep.l1_distance = 1.0 - 2.0 * sep.bayes_risk;
    return sep;
}

}  // namespace hdgauss
