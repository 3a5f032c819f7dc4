#pragma once

#include "hdgauss/linalg.hpp"
#include "hdgauss/rng.hpp"

#include <cstdint>

namespace hdgauss {

struct GaussianMeasure {
    Vec mean;
    Mat covariance;

    GaussianMeasure() = default;
    GaussianMeasure(Vec mean_, Mat covariance_);

    Eigen::Index dimension() const { return mean.size(); }
};

struct ClassificationProblem {
    GaussianMeasure class1;  // P_1
    GaussianMeasure class0;  // P_0
    bool equal_covariance = false;

    ClassificationProblem() = default;
    ClassificationProblem(GaussianMeasure class1_, GaussianMeasure class0_, bool equal_covariance_);

    Eigen::Index dimension() const { return class1.dimension(); }
    Vec mean_difference() const { return class1.mean - class0.mean; }       // m_10
    Vec midpoint() const { return 0.5 * (class1.mean + class0.mean); }      // s_10
};

ClassificationProblem make_equal_covariance_problem(Vec mu1, Vec mu0, Mat covariance);

/// Affine discriminant x -> <normal, x - center>.
struct AffineFrontier {
    Vec normal;
    Vec center;
    bool degenerate = false;  // normal identically zero

    double value(const Vec& x) const;
    Vec values(const Mat& rows) const;
};

/// Quadratic discriminant
///   x -> -1/2 <quad (x-center), x-center> + <linear, x-center> - offset.
struct QuadraticFrontier {
    Mat quad;
    Vec linear;
    Vec center;
    double offset = 0.0;

    double value(const Vec& x) const;
    Vec values(const Mat& rows) const;
};

/// Draws count i.i.d. samples, one per row. Output is bit-identical for
/// identical (measure, count, seed).
Mat sample(const GaussianMeasure& measure, std::int64_t count, std::uint64_t seed);

/// Precomputed factorization for repeated sampling from one measure.
class GaussianSampler {
public:
    explicit GaussianSampler(const GaussianMeasure& measure);

    Eigen::Index dimension() const { return mean_.size(); }

    /// Fills `out` (rows are draws) from the given stream.
    void fill(RandomStream& stream, Mat& out) const;

    Mat draw(std::int64_t count, std::uint64_t seed) const;

private:
    Vec mean_;
    Mat root_;
    Vec diag_root_;
    bool diagonal_ = false;
};

AffineFrontier affine_frontier(const ClassificationProblem& problem, double cond_cap = 1e12);

QuadraticFrontier quadratic_frontier(const ClassificationProblem& problem, double cond_cap = 1e12);

/// W_10 = I - C1^{1/2} C0^{-1} C1^{1/2}.
Mat w_operator(const Mat& c1, const Mat& c0, double cond_cap = 1e12);

/// ||v||_{L2(gamma_C)} = ||C^{1/2} v||.
double l2_gamma_norm(const Vec& v, const Mat& cov);

/// <f, g>_{L2(gamma_C)} = f' C g.
double l2_gamma_inner(const Vec& f, const Vec& g, const Mat& cov);

/// Angle between f and f_hat in L2(gamma_C), in [0, pi].
double angle_alpha(const Vec& f, const Vec& f_hat, const Mat& cov);

struct Separation {
    double r;            // ||C^{-1/2} m_10||
    double bayes_risk;   // Phi(-r/2)
    double l1_distance;  // 2 Phi(r/2) - 1
};

Separation separation(const ClassificationProblem& problem, double cond_cap = 1e12);

}  // namespace hdgauss
