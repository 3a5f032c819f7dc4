#pragma once

#include "hdgauss/classifiers.hpp"
#include "hdgauss/gaussian.hpp"

#include <cstdint>
#include <string>

namespace hdgauss {

enum class CovarianceKind { identity, diagonal, toeplitz, random_spd };

const char* to_string(CovarianceKind kind);
CovarianceKind covariance_kind_from_string(const std::string& name);

struct ProblemSpec {
    int p = 0;
    double q_sparsity = 1.0;  // q in (0, 2)
    double radius_R = 1.0;
    double separation_r = 1.0;
    CovarianceKind covariance_kind = CovarianceKind::identity;
    Vec diagonal_values;         // diagonal kind
    double toeplitz_rho = 0.5;   // toeplitz kind: C_ij = rho^{|i-j|}
    double spd_eig_min = 0.5;    // random_spd kind: eigenvalue range
    double spd_eig_max = 2.0;
    bool equal_cov = true;
    std::uint64_t seed = 0;

    // Generator shape knobs. decay_qtilde <= 0 means the default 0.9 * q.
    // magnitude_jitter > 0 multiplies each magnitude by exp(U[-j, j]) before
    // rescaling, which keeps replicate families away from knife-edge
    // selection thresholds; the l^q and separation constraints are still
    // verified after rescaling.
    double decay_qtilde = 0.0;
    double magnitude_jitter = 0.0;
};

Mat make_covariance(const ProblemSpec& spec, std::uint64_t seed);

/// Builds the two-class problem with theta = C^{-1/2} m_10 on the power-law
/// profile, ||theta||_2 = separation_r and ||theta||_q <= radius_R.
/// mu_0 = -m_10/2, mu_1 = +m_10/2.
ClassificationProblem make_problem(const ProblemSpec& spec);

/// theta = C^{-1/2}(mu_1 - mu_0) recomputed from the problem itself.
Vec whitened_mean_difference(const ClassificationProblem& problem);

/// Orthonormal Haar transform of a power-of-two length vector.
Vec haar_dwt(const Vec& curve);
Vec haar_idwt(const Vec& coefficients);

struct CurveSpec {
    int length = 0;  // power of two
    Vec class1_mean;
    Vec class0_mean;
    double noise_sd = 1.0;
    CovarianceKind noise_kind = CovarianceKind::identity;
    double noise_toeplitz_rho = 0.5;
    int n_per_class = 0;
    std::uint64_t seed = 0;
};

/// Gaussian curves per class, transformed to wavelet coefficients.
LabeledDataset synth_curves(const CurveSpec& spec);

}  // namespace hdgauss
