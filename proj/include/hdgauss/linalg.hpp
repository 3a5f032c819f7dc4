#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <utility>

namespace hdgauss {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Standard normal CDF, accurate to a few ulp over the whole real line.
double normal_cdf(double x);

/// Standard normal quantile (inverse CDF), absolute error below 1e-14.
/// This is the single source of normal quantiles for the whole library.
double normal_quantile(double p);

/// Upper-tail quantile z(a) = Phi^{-1}(1 - a), computed without cancellation.
double upper_quantile(double alpha);

/// gamma_1([0; d]) = Phi(|d|) - 1/2, the standard normal measure of [0, |d|].
double gamma1_interval(double d);

void check_symmetric(const Mat& m, double rel_tol, const char* what);

struct SymEig {
    Vec values;   // ascending
    Mat vectors;  // columns
};

SymEig sym_eig(const Mat& m);

/// Symmetric PSD square root; eigenvalues clamped at zero.
Mat sym_sqrt(const Mat& psd);

/// Inverse square root of an SPD matrix. Throws IllConditionedError when the
/// condition number exceeds cond_cap.
Mat sym_inv_sqrt(const Mat& spd, double cond_cap = 1e12);

Mat sym_inverse(const Mat& spd, double cond_cap = 1e12);

Vec sym_solve(const Mat& spd, const Vec& b, double cond_cap = 1e12);

/// Moore-Penrose pseudo-inverse of a symmetric PSD matrix. Eigenvalues below
/// rel_tol * lambda_max are treated as kernel directions.
Mat pseudo_inverse(const Mat& sym_psd, double rel_tol = 1e-10);

double log_det_spd(const Mat& spd, double cond_cap = 1e12);

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<Vec, Vec> gauss_legendre(int n);

/// Gauss-Hermite nodes and weights for the weight function exp(-x^2).
std::pair<Vec, Vec> gauss_hermite(int n);

}  // namespace hdgauss
