#include "hdgauss/linalg.hpp"

#include "hdgauss/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace hdgauss {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Wichura's algorithm AS 241 (PPND16). Absolute error below 1e-15 on (0, 1).
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw ValidationError("normal_quantile: p must lie in [0, 1]");
    }
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                  3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
                4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
                2.05319162663775882187e+0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
                5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -val : val;
}

double upper_quantile(double alpha) {
    return -normal_quantile(alpha);
}

double gamma1_interval(double d) {
    return normal_cdf(std::abs(d)) - 0.5;
}

void check_symmetric(const Mat& m, double rel_tol, const char* what) {
    if (m.rows() != m.cols()) {
        throw ValidationError(std::string(what) + ": matrix is not square");
    }
    const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > rel_tol * scale) {
        std::ostringstream os;
        os << what << ": matrix is not symmetric (relative asymmetry " << asym / scale << ")";
        throw ValidationError(os.str());
    }
}

SymEig sym_eig(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> solver(0.5 * (m + m.transpose()));
    if (solver.info() != Eigen::Success) {
        throw FactorizationError("sym_eig: eigendecomposition failed");
    }
    return SymEig{solver.eigenvalues(), solver.eigenvectors()};
}

Mat sym_sqrt(const Mat& psd) {
    SymEig eig = sym_eig(psd);
    Vec root = eig.values.cwiseMax(0.0).cwiseSqrt();
    return eig.vectors * root.asDiagonal() * eig.vectors.transpose();
}

namespace {

Vec inverted_spectrum(const SymEig& eig, double cond_cap, double power, const char* what) {
    const double lmax = eig.values.maxCoeff();
    const double lmin = eig.values.minCoeff();
    if (lmax <= 0.0 || lmin <= 0.0 || lmax / lmin > cond_cap) {
        std::ostringstream os;
        os << what << ": matrix is singular or ill-conditioned (lambda_min=" << lmin
           << ", lambda_max=" << lmax << ", cap=" << cond_cap << ")";
        throw IllConditionedError(os.str());
    }
    Vec inv(eig.values.size());
    for (Eigen::Index i = 0; i < inv.size(); ++i) {
        inv[i] = std::pow(eig.values[i], power);
    }
    return inv;
}

}  // namespace

Mat sym_inv_sqrt(const Mat& spd, double cond_cap) {
    SymEig eig = sym_eig(spd);
    Vec inv = inverted_spectrum(eig, cond_cap, -0.5, "sym_inv_sqrt");
    return eig.vectors * inv.asDiagonal() * eig.vectors.transpose();
}

Mat sym_inverse(const Mat& spd, double cond_cap) {
    SymEig eig = sym_eig(spd);
    Vec inv = inverted_spectrum(eig, cond_cap, -1.0, "sym_inverse");
    return eig.vectors * inv.asDiagonal() * eig.vectors.transpose();
}

Vec sym_solve(const Mat& spd, const Vec& b, double cond_cap) {
    if (spd.rows() != b.size()) {
        throw ValidationError("sym_solve: dimension mismatch");
    }
    SymEig eig = sym_eig(spd);
    Vec inv = inverted_spectrum(eig, cond_cap, -1.0, "sym_solve");
    return eig.vectors * (inv.asDiagonal() * (eig.vectors.transpose() * b));
}

Mat pseudo_inverse(const Mat& sym_psd, double rel_tol) {
    SymEig eig = sym_eig(sym_psd);
    const double lmax = eig.values.cwiseAbs().maxCoeff();
    Vec inv = Vec::Zero(eig.values.size());
    if (lmax > 0.0) {
        for (Eigen::Index i = 0; i < inv.size(); ++i) {
            if (eig.values[i] > rel_tol * lmax) inv[i] = 1.0 / eig.values[i];
        }
    }
    return eig.vectors * inv.asDiagonal() * eig.vectors.transpose();
}

double log_det_spd(const Mat& spd, double cond_cap) {
    SymEig eig = sym_eig(spd);
    inverted_spectrum(eig, cond_cap, -1.0, "log_det_spd");
    return eig.values.array().log().sum();
}

namespace {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights come from
// the first component of the normalized eigenvectors.
std::pair<Vec, Vec> golub_welsch(const Vec& offdiag, double weight_total) {
    const int n = static_cast<int>(offdiag.size()) + 1;
    Mat jacobi = Mat::Zero(n, n);
    for (int k = 0; k + 1 < n; ++k) {
        jacobi(k, k + 1) = offdiag[k];
        jacobi(k + 1, k) = offdiag[k];
    }
    Eigen::SelfAdjointEigenSolver<Mat> solver(jacobi);
    Vec nodes = solver.eigenvalues();
    Vec weights(n);
    for (int k = 0; k < n; ++k) {
        const double v0 = solver.eigenvectors()(0, k);
        weights[k] = weight_total * v0 * v0;
    }
    return {nodes, weights};
}

}  // namespace

std::pair<Vec, Vec> gauss_legendre(int n) {
    if (n < 1) throw ValidationError("gauss_legendre: n must be positive");
    Vec offdiag(n - 1);
    for (int k = 1; k < n; ++k) {
        offdiag[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    }
    return golub_welsch(offdiag, 2.0);
}

std::pair<Vec, Vec> gauss_hermite(int n) {
    if (n < 1) throw ValidationError("gauss_hermite: n must be positive");
    Vec offdiag(n - 1);
    for (int k = 1; k < n; ++k) {
        offdiag[k - 1] = std::sqrt(0.5 * k);
    }
    return golub_welsch(offdiag, std::sqrt(M_PI));
}

}  // namespace hdgauss
