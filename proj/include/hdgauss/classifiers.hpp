#pragma once

#include "hdgauss/gaussian.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hdgauss {

struct LabeledDataset {
    Mat features;             // n x p
    std::vector<int> labels;  // values in {0, 1}

    Eigen::Index size() const { return features.rows(); }
    Eigen::Index dimension() const { return features.cols(); }

    Eigen::Index class_count(int label) const;
    Vec class_mean(int label) const;
    /// Unbiased per-feature variances (divisor n_k - 1).
    Vec class_variance(int label) const;

    void validate() const;
};

/// Benjamini-Hochberg step-up selection over standardized statistics.
struct BhResult {
    int k_fdr = 0;
    /// Standardized statistic at rank k_fdr; +inf when nothing is selected.
    double threshold = 0.0;
    /// Unstandardized |statistic| at rank k_fdr (the paper reports this one).
    double threshold_raw = 0.0;
    std::vector<int> selected;  // ascending indices
};

BhResult bh_select(const Vec& statistics, const Vec& null_sd, double b_p);

struct FitDiagnostics {
    int k_fdr_mean = 0;
    double threshold_mean = 0.0;      // standardized
    double threshold_mean_raw = 0.0;  // unstandardized
    int k_fdr_var = 0;
    double threshold_var = 0.0;
    double threshold_var_raw = 0.0;
    double b_p = 0.0;
    bool degenerate = false;       // empty selection / zero normal
    bool bp_floor_warning = false;  // b_p * log(p) fell below the advisory floor
};

struct LdaRule {
    Vec normal;  // F_hat
    Vec center;  // s_hat
    std::vector<int> selected;  // empty + thresholded=false means dense
    bool thresholded = false;
    FitDiagnostics diagnostics;

    double frontier_value(const Vec& x) const;
    Vec frontier_values(const Mat& rows) const;
};

struct DiagQdaRule {
    Vec mean1, mean0;  // per-class empirical means
    Vec var1, var0;    // unbiased per-feature variances
    std::vector<int> mean_selected;
    std::vector<int> var_selected;
    double offset = 0.0;  // c_hat
    Vec g_hat;            // linear part, zero off mean_selected
    Vec a_hat;            // diagonal quadratic part, zero off var_selected
    Vec center;           // s_hat
    FitDiagnostics diagnostics;

    double frontier_value(const Vec& x) const;
    Vec frontier_values(const Mat& rows) const;
};

/// FDR-thresholded LDA with known covariance (Theorem-style fit).
/// y = C^{-1/2}(mean1 - mean0), per-coordinate null sd sqrt(1/n1 + 1/n0).
LdaRule fit_lda_fdr_known_cov(const LabeledDataset& data, const Mat& cov,
                              const std::optional<Vec>& center_known, double b_p,
                              double cond_cap = 1e12);

/// Diagonal FDR-QDA: FDR selection on standardized mean and variance gaps.
DiagQdaRule fit_diag_qda(const LabeledDataset& data, double b_p);

/// Fisher-style rule with the pooled empirical covariance (divisor n) and its
/// Moore-Penrose pseudo-inverse.
LdaRule fit_fisher_pseudo(const LabeledDataset& data, double pinv_rel_tol = 1e-10);

/// Dense plug-in rule with known covariance and empirical means.
LdaRule fit_naive_lda(const LabeledDataset& data, const Mat& cov, double cond_cap = 1e12);

/// Frontier >= 0 maps to class 1 (ties included).
int classify(const LdaRule& rule, const Vec& x);
int classify(const DiagQdaRule& rule, const Vec& x);
int classify(const AffineFrontier& rule, const Vec& x);
int classify(const QuadraticFrontier& rule, const Vec& x);

std::vector<int> classify_rows(const LdaRule& rule, const Mat& rows);
std::vector<int> classify_rows(const DiagQdaRule& rule, const Mat& rows);

}  // namespace hdgauss
