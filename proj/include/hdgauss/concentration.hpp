#pragma once

#include "hdgauss/linalg.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace hdgauss {

/// Gaussian chaos of order 2:
///   q = constant + sum_i linear[i] xi_i + sum_i quad[i] (xi_i^2 - 1).
struct QuadChaos {
    double constant = 0.0;
    Vec linear;  // alpha_i
    Vec quad;    // beta_i

    Eigen::Index terms() const { return std::max(linear.size(), quad.size()); }
    double n1() const;     // max |alpha_i|
    double n2() const;     // max |beta_i|
    double sigma() const;  // (sum 2 beta_i^2 + alpha_i^2)^{1/2}
    double mean() const { return constant; }

    double evaluate(const Vec& xi) const;
};

/// i.i.d. draws of the chaos; deterministic per seed.
Vec chaos_sample(const QuadChaos& q, std::int64_t count, std::uint64_t seed);

/// Small-ball bound sqrt(eps / (pi n2(q))). Requires a quadratic part.
double small_ball_bound_3(const QuadChaos& q, double eps);

struct SmallBallRow {
    std::size_t family_index = 0;
    double eps = 0.0;
    double empirical = 0.0;
    double std_error = 0.0;
    double bound_point3 = 0.0;   // sqrt(eps / (pi n2)), 0 if n2 = 0
    double envelope_27 = 0.0;    // const * eps^{2/7}, anchored at the largest eps
    double envelope_13 = 0.0;    // const * eps^{1/3}, anchored at the largest eps
};

/// Empirical small-ball probabilities P(|q| <= eps) over an eps grid, plus the
/// exponent envelopes fitted at the largest eps (constant-free shape checks).
std::vector<SmallBallRow> small_ball_exponents(const std::vector<QuadChaos>& family,
                                               const std::vector<double>& eps_grid,
                                               std::int64_t n_samples, std::uint64_t seed);

struct TailRow {
    double s = 0.0;
    double upper_tail = 0.0;  // P(q_D - E >= s ||q_D - E||_{L2} + s^2 max|d|)
    double lower_tail = 0.0;  // P(q_D - E <= -s ||q_D - E||_{L2})
    double se_upper = 0.0;
    double se_lower = 0.0;
    double bound = 0.0;  // e^{-s^2/2}
};

/// Empirical chi-square-form tails against the e^{-s^2/2} bound.
std::vector<TailRow> laurent_massart_check(const Vec& d, const std::vector<double>& s_grid,
                                           std::int64_t n_samples, std::uint64_t seed);

/// Two-sided Gaussian-Lipschitz tail bound 2 exp(-s^2 / (2 N^2)).
double lipschitz_tail_bound(double lip_norm, double s);

/// Right-hand side of the domain-decomposition bound on P(X in V_f dif V_{f+delta}):
///   c1^{1-q} c2 |m|^{q b} + sqrt(2 pi/(1-q)) (c2 c1^{1-q}/2)
///        E[(c0 h(|xi|/sqrt(1-q) + 1) + |m|)^{q b}].
/// h must be nondecreasing with h(0) = 0; the expectation is evaluated by
/// Gauss-Hermite quadrature.
double domain_decomposition_bound(const std::function<double(double)>& h_delta, double c0,
                                  double c1, double c2, double beta, double mean_delta, double q);

}  // namespace hdgauss
