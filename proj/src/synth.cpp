#include "hdgauss/synth.hpp"

#include "hdgauss/errors.hpp"
#include "hdgauss/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hdgauss {

const char* to_string(CovarianceKind kind) {
    switch (kind) {
        case CovarianceKind::identity: return "identity";
        case CovarianceKind::diagonal: return "diagonal";
        case CovarianceKind::toeplitz: return "toeplitz";
        case CovarianceKind::random_spd: return "random_spd";
    }
    return "unknown";
}

CovarianceKind covariance_kind_from_string(const std::string& name) {
    if (name == "identity") return CovarianceKind::identity;
    if (name == "diagonal") return CovarianceKind::diagonal;
    if (name == "toeplitz") return CovarianceKind::toeplitz;
    if (name == "random_spd") return CovarianceKind::random_spd;
    throw ValidationError("unknown covariance kind: " + name);
}

Mat make_covariance(const ProblemSpec& spec, std::uint64_t seed) {
    const int p = spec.p;
    switch (spec.covariance_kind) {
        case CovarianceKind::identity:
            return Mat::Identity(p, p);
        case CovarianceKind::diagonal: {
            if (spec.diagonal_values.size() != p) {
                throw ValidationError("make_covariance: diagonal_values length mismatch");
            }
            return Mat(spec.diagonal_values.asDiagonal());
        }
        case CovarianceKind::toeplitz: {
            if (!(spec.toeplitz_rho > -1.0 && spec.toeplitz_rho < 1.0)) {
                throw ValidationError("make_covariance: toeplitz rho must lie in (-1, 1)");
            }
            Mat cov(p, p);
            for (int i = 0; i < p; ++i) {
                for (int j = 0; j < p; ++j) {
                    cov(i, j) = std::pow(spec.toeplitz_rho, std::abs(i - j));
                }
            }
            return cov;
        }
        case CovarianceKind::random_spd: {
            if (!(spec.spd_eig_min > 0.0 && spec.spd_eig_max >= spec.spd_eig_min)) {
                throw ValidationError("make_covariance: bad eigenvalue range");
            }
            RandomStream stream(derive_seed(seed, 0xC0C0));
            Mat gaussian(p, p);
            for (int i = 0; i < p; ++i) {
                for (int j = 0; j < p; ++j) gaussian(i, j) = stream.normal();
            }
            const Eigen::HouseholderQR<Mat> qr(gaussian);
            Mat qmat = qr.householderQ();
            Vec eigs(p);
            const double log_lo = std::log(spec.spd_eig_min);
            const double log_hi = std::log(spec.spd_eig_max);
            for (int i = 0; i < p; ++i) {
                eigs[i] = std::exp(log_lo + (log_hi - log_lo) * stream.uniform01());
            }
            Mat cov = qmat * eigs.asDiagonal() * qmat.transpose();
            return 0.5 * (cov + cov.transpose());
        }
    }
    throw ValidationError("make_covariance: unknown kind");
}

namespace {

double lq_norm(const Vec& v, double q) {
    return std::pow(v.cwiseAbs().array().pow(q).sum(), 1.0 / q);
}

}  // namespace

ClassificationProblem make_problem(const ProblemSpec& spec) {
    if (spec.p < 1) throw ValidationError("make_problem: p must be positive");
    if (!(spec.q_sparsity > 0.0 && spec.q_sparsity < 2.0)) {
        throw ValidationError("make_problem: q_sparsity must lie in (0, 2)");
    }
    if (!(spec.radius_R > 0.0) || !(spec.separation_r >= 0.0)) {
        throw ValidationError("make_problem: radius and separation must be positive");
    }
    if (spec.separation_r > spec.radius_R) {
        std::ostringstream os;
        os << "make_problem: infeasible spec — a vector with ||theta||_2 >= " << spec.separation_r
           << " and ||theta||_" << spec.q_sparsity << " <= " << spec.radius_R
           << " cannot exist for q < 2 (binding constraint: r <= R)";
        throw InfeasibleSpecError(os.str());
    }

    RandomStream stream(derive_seed(spec.seed, 0x7E7A));

    // Magnitude profile: power-law decay, optionally jittered per coordinate.
    double qtilde = spec.decay_qtilde > 0.0 ? spec.decay_qtilde : 0.9 * spec.q_sparsity;
    Vec magnitudes(spec.p);
    std::string binding;
    for (int attempt = 0; attempt < 24; ++attempt) {
        for (int i = 0; i < spec.p; ++i) {
            double m = std::pow(static_cast<double>(i + 1), -1.0 / qtilde);
            if (spec.magnitude_jitter > 0.0) {
                m *= std::exp(spec.magnitude_jitter * (2.0 * stream.uniform01() - 1.0));
            }
            magnitudes[i] = m;
        }
        std::sort(magnitudes.data(), magnitudes.data() + magnitudes.size(),
                  std::greater<double>());
        const double l2 = magnitudes.norm();
        const double lq = lq_norm(magnitudes, spec.q_sparsity);
        // Scale to hit ||theta||_2 = r exactly; feasible iff the q-norm stays
        // under R. Otherwise sharpen the decay and retry.
        if (spec.separation_r * lq / l2 <= spec.radius_R) {
            magnitudes *= spec.separation_r / l2;
            binding.clear();
            break;
        }
        binding = "l^q radius";
        qtilde *= 0.7;
    }
    if (!binding.empty()) {
        throw InfeasibleSpecError(
            "make_problem: could not satisfy the l^q radius with the power-law profile "
            "(binding constraint: " + binding + ")");
    }

    // Random signs and coordinate placement.
    Vec theta = Vec::Zero(spec.p);
    std::vector<int> order(static_cast<std::size_t>(spec.p));
    for (int i = 0; i < spec.p; ++i) order[static_cast<std::size_t>(i)] = i;
    for (int i = spec.p - 1; i > 0; --i) {
        const int j = static_cast<int>(stream.raw() % static_cast<std::uint64_t>(i + 1));
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    for (int i = 0; i < spec.p; ++i) {
        const double sign = stream.uniform01() < 0.5 ? -1.0 : 1.0;
        theta[order[static_cast<std::size_t>(i)]] = sign * magnitudes[i];
    }

    const Mat cov0 = make_covariance(spec, derive_seed(spec.seed, 1));
    const Mat root0 = sym_sqrt(cov0);
    const Vec m10 = root0 * theta;

    Mat cov1 = cov0;
    if (!spec.equal_cov) {
        RandomStream scale_stream(derive_seed(spec.seed, 2));
        Vec scale(spec.p);
        for (int i = 0; i < spec.p; ++i) {
            scale[i] = std::exp(0.35 * (2.0 * scale_stream.uniform01() - 1.0));
        }
        cov1 = scale.asDiagonal() * cov0 * scale.asDiagonal();
        cov1 = 0.5 * (cov1 + cov1.transpose());
    }

    GaussianMeasure class1(0.5 * m10, cov1);
    GaussianMeasure class0(-0.5 * m10, cov0);
    return ClassificationProblem(std::move(class1), std::move(class0), spec.equal_cov);
}

Vec whitened_mean_difference(const ClassificationProblem& problem) {
    return sym_inv_sqrt(problem.class0.covariance) * problem.mean_difference();
}

namespace {

bool is_power_of_two(Eigen::Index n) {
    return n > 0 && (n & (n - 1)) == 0;
}

}  // namespace

Vec haar_dwt(const Vec& curve) {
    if (!is_power_of_two(curve.size())) {
        throw ValidationError("haar_dwt: length must be a power of two");
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Vec work = curve;
    Vec out(curve.size());
    Eigen::Index len = curve.size();
    while (len > 1) {
        const Eigen::Index half = len / 2;
        Vec scaling(half), detail(half);
        for (Eigen::Index i = 0; i < half; ++i) {
            scaling[i] = (work[2 * i] + work[2 * i + 1]) * inv_sqrt2;
            detail[i] = (work[2 * i] - work[2 * i + 1]) * inv_sqrt2;
        }
        out.segment(half, half) = detail;
        work.head(half) = scaling;
        len = half;
    }
    out[0] = work[0];
    return out;
}

Vec haar_idwt(const Vec& coefficients) {
    if (!is_power_of_two(coefficients.size())) {
        throw ValidationError("haar_idwt: length must be a power of two");
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Vec work = coefficients;
    Eigen::Index len = 1;
    while (len < coefficients.size()) {
        Vec merged(2 * len);
        for (Eigen::Index i = 0; i < len; ++i) {
            const double s = work[i];
            const double d = work[len + i];
            merged[2 * i] = (s + d) * inv_sqrt2;
            merged[2 * i + 1] = (s - d) * inv_sqrt2;
        }
        work.head(2 * len) = merged;
        len *= 2;
    }
    return work;
}

LabeledDataset synth_curves(const CurveSpec& spec) {
    if (!is_power_of_two(spec.length)) {
        throw ValidationError("synth_curves: length must be a power of two");
    }
    if (spec.class1_mean.size() != spec.length || spec.class0_mean.size() != spec.length) {
        throw ValidationError("synth_curves: class mean length mismatch");
    }
    if (spec.n_per_class < 1) throw ValidationError("synth_curves: n_per_class must be positive");
    if (!(spec.noise_sd >= 0.0)) throw ValidationError("synth_curves: bad noise_sd");

    Mat noise_cov;
    switch (spec.noise_kind) {
        case CovarianceKind::identity:
            noise_cov = spec.noise_sd * spec.noise_sd * Mat::Identity(spec.length, spec.length);
            break;
        case CovarianceKind::toeplitz: {
            ProblemSpec cov_spec;
            cov_spec.p = spec.length;
            cov_spec.covariance_kind = CovarianceKind::toeplitz;
            cov_spec.toeplitz_rho = spec.noise_toeplitz_rho;
            noise_cov = spec.noise_sd * spec.noise_sd * make_covariance(cov_spec, spec.seed);
            break;
        }
        default:
            throw ValidationError("synth_curves: unsupported noise kind");
    }

    const GaussianMeasure class1(spec.class1_mean, noise_cov);
    const GaussianMeasure class0(spec.class0_mean, noise_cov);
    const Mat draws1 = sample(class1, spec.n_per_class, derive_seed(spec.seed, 11));
    const Mat draws0 = sample(class0, spec.n_per_class, derive_seed(spec.seed, 10));

    LabeledDataset data;
    data.features.resize(2 * spec.n_per_class, spec.length);
    data.labels.assign(static_cast<std::size_t>(2 * spec.n_per_class), 0);
    for (int i = 0; i < spec.n_per_class; ++i) {
        data.features.row(i) = haar_dwt(draws1.row(i).transpose()).transpose();
        data.labels[static_cast<std::size_t>(i)] = 1;
        data.features.row(spec.n_per_class + i) =
            haar_dwt(draws0.row(i).transpose()).transpose();
    }
    return data;
}

}  // namespace hdgauss
