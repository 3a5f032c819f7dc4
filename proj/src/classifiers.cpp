#include "hdgauss/classifiers.hpp"

#include "hdgauss/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace hdgauss {

namespace {

// Advisory floor b_p >= c0 / log p; display-only.
constexpr double kBpFloorC0 = 0.05;

bool below_bp_floor(double b_p, Eigen::Index p) {
    return p >= 3 && b_p * std::log(static_cast<double>(p)) < kBpFloorC0;
}

Vec thresholded(const Vec& v, const std::vector<int>& selected) {
    Vec out = Vec::Zero(v.size());
    for (int idx : selected) out[idx] = v[idx];
    return out;
}

}  // namespace

Eigen::Index LabeledDataset::class_count(int label) const {
    return std::count(labels.begin(), labels.end(), label);
}

Vec LabeledDataset::class_mean(int label) const {
    const Eigen::Index n = class_count(label);
    if (n < 1) {
        throw ValidationError("LabeledDataset: class " + std::to_string(label) +
                              " has no observations");
    }
    Vec mean = Vec::Zero(dimension());
    for (Eigen::Index i = 0; i < size(); ++i) {
        if (labels[static_cast<std::size_t>(i)] == label) mean += features.row(i).transpose();
    }
    return mean / static_cast<double>(n);
}

Vec LabeledDataset::class_variance(int label) const {
    const Eigen::Index n = class_count(label);
    if (n < 2) {
        throw ValidationError("LabeledDataset: class " + std::to_string(label) +
                              " needs at least 2 observations for variances");
    }
    const Vec mean = class_mean(label);
    Vec ss = Vec::Zero(dimension());
    for (Eigen::Index i = 0; i < size(); ++i) {
        if (labels[static_cast<std::size_t>(i)] == label) {
            ss += (features.row(i).transpose() - mean).array().square().matrix();
        }
    }
    return ss / static_cast<double>(n - 1);
}

void LabeledDataset::validate() const {
    if (static_cast<Eigen::Index>(labels.size()) != features.rows()) {
        throw ValidationError("LabeledDataset: label count does not match feature rows");
    }
    for (int y : labels) {
        if (y != 0 && y != 1) throw ValidationError("LabeledDataset: labels must be 0 or 1");
    }
}

BhResult bh_select(const Vec& statistics, const Vec& null_sd, double b_p) {
    const Eigen::Index p = statistics.size();
    if (null_sd.size() != p) throw ValidationError("bh_select: dimension mismatch");
    if (!(b_p > 0.0 && b_p < 0.5)) throw ValidationError("bh_select: b_p must lie in (0, 1/2)");
    for (Eigen::Index q = 0; q < p; ++q) {
        if (!(null_sd[q] > 0.0)) throw ValidationError("bh_select: null_sd must be positive");
        if (!std::isfinite(statistics[q])) {
            throw ValidationError("bh_select: statistics must be finite");
        }
    }

    Vec t = statistics.cwiseAbs().cwiseQuotient(null_sd);
    std::vector<int> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (t[a] != t[b]) return t[a] > t[b];
        return a < b;
    });

    int k_fdr = 0;
    for (int k = static_cast<int>(p); k >= 1; --k) {
        const double z = upper_quantile(b_p * k / (2.0 * static_cast<double>(p)));
        if (t[order[static_cast<std::size_t>(k - 1)]] >= z) {
            k_fdr = k;
            break;
        }
    }

    BhResult result;
    result.k_fdr = k_fdr;
    if (k_fdr == 0) {
        result.threshold = std::numeric_limits<double>::infinity();
        result.threshold_raw = std::numeric_limits<double>::infinity();
        return result;
    }
    const int at_rank = order[static_cast<std::size_t>(k_fdr - 1)];
    result.threshold = t[at_rank];
    result.threshold_raw = std::abs(statistics[at_rank]);
    result.selected.assign(order.begin(), order.begin() + k_fdr);
    std::sort(result.selected.begin(), result.selected.end());
    return result;
}

double LdaRule::frontier_value(const Vec& x) const {
    if (x.size() != normal.size()) throw ValidationError("LdaRule: dimension mismatch");
    return normal.dot(x - center);
}

Vec LdaRule::frontier_values(const Mat& rows) const {
    if (rows.cols() != normal.size()) throw ValidationError("LdaRule: dimension mismatch");
    return (rows * normal).array() - normal.dot(center);
}

double DiagQdaRule::frontier_value(const Vec& x) const {
    if (x.size() != center.size()) throw ValidationError("DiagQdaRule: dimension mismatch");
    const Vec w = x - center;
    return -0.5 * w.dot(a_hat.cwiseProduct(w)) + g_hat.dot(w) - offset;
}

Vec DiagQdaRule::frontier_values(const Mat& rows) const {
    if (rows.cols() != center.size()) throw ValidationError("DiagQdaRule: dimension mismatch");
    Mat w = rows.rowwise() - center.transpose();
    Vec quad_part = (w * a_hat.asDiagonal()).cwiseProduct(w).rowwise().sum();
    return (-0.5 * quad_part + w * g_hat).array() - offset;
}

LdaRule fit_lda_fdr_known_cov(const LabeledDataset& data, const Mat& cov,
                              const std::optional<Vec>& center_known, double b_p,
                              double cond_cap) {
    data.validate();
    const Eigen::Index n1 = data.class_count(1);
    const Eigen::Index n0 = data.class_count(0);
    const Vec mu1 = data.class_mean(1);
    const Vec mu0 = data.class_mean(0);
    if (cov.rows() != data.dimension()) {
        throw ValidationError("fit_lda_fdr_known_cov: covariance dimension mismatch");
    }

    const Mat inv_root = sym_inv_sqrt(cov, cond_cap);
    const Vec y = inv_root * (mu1 - mu0);
    const double sd = std::sqrt(1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n0));
    const Vec null_sd = Vec::Constant(data.dimension(), sd);
    BhResult bh = bh_select(y, null_sd, b_p);

    LdaRule rule;
    rule.normal = inv_root * thresholded(y, bh.selected);
    rule.center = center_known ? *center_known : Vec(0.5 * (mu1 + mu0));
    if (rule.center.size() != data.dimension()) {
        throw ValidationError("fit_lda_fdr_known_cov: center_known dimension mismatch");
    }
    rule.selected = bh.selected;
    rule.thresholded = true;
    rule.diagnostics.k_fdr_mean = bh.k_fdr;
    rule.diagnostics.threshold_mean = bh.threshold;
    rule.diagnostics.threshold_mean_raw = bh.threshold_raw;
    rule.diagnostics.b_p = b_p;
    rule.diagnostics.degenerate = bh.selected.empty();
    rule.diagnostics.bp_floor_warning = below_bp_floor(b_p, data.dimension());
    return rule;
}

DiagQdaRule fit_diag_qda(const LabeledDataset& data, double b_p) {
    data.validate();
    const Eigen::Index p = data.dimension();
    const Eigen::Index n1 = data.class_count(1);
    const Eigen::Index n0 = data.class_count(0);
    if (n1 < 2 || n0 < 2) {
        throw ValidationError("fit_diag_qda: each class needs at least 2 observations");
    }

    DiagQdaRule rule;
    rule.mean1 = data.class_mean(1);
    rule.mean0 = data.class_mean(0);
    rule.var1 = data.class_variance(1);
    rule.var0 = data.class_variance(0);
    for (Eigen::Index q = 0; q < p; ++q) {
        if (!(rule.var1[q] > 0.0) || !(rule.var0[q] > 0.0)) {
            throw ValidationError("fit_diag_qda: degenerate feature " + std::to_string(q) +
                                  " has zero variance");
        }
    }

    // Mean statistics y_q and their null variance estimate.
    Vec y(p), y_null_sd(p), precision_root(p);
    for (Eigen::Index q = 0; q < p; ++q) {
        const double v1 = rule.var1[q], v0 = rule.var0[q];
        precision_root[q] = std::sqrt(1.0 / v1 + 1.0 / v0);
        y[q] = (rule.mean1[q] - rule.mean0[q]) * precision_root[q] / std::sqrt(2.0);
        const double null_var = (1.0 + v1 / v0) / (2.0 * static_cast<double>(n1)) +
                                (1.0 + v0 / v1) / (2.0 * static_cast<double>(n0));
        y_null_sd[q] = std::sqrt(null_var);
    }
    BhResult bh_mean = bh_select(y, y_null_sd, b_p);

    // Variance statistics w_q and their null variance estimate.
    Vec w(p), w_null_sd(p);
    for (Eigen::Index q = 0; q < p; ++q) {
        const double v1 = rule.var1[q], v0 = rule.var0[q];
        w[q] = v1 - v0;
        w_null_sd[q] = std::sqrt(2.0 * v1 * v1 / static_cast<double>(n1 - 1) +
                                 2.0 * v0 * v0 / static_cast<double>(n0 - 1));
    }
    BhResult bh_var = bh_select(w, w_null_sd, b_p);

    rule.mean_selected = bh_mean.selected;
    rule.var_selected = bh_var.selected;
    rule.center = 0.5 * (rule.mean1 + rule.mean0);

    rule.g_hat = Vec::Zero(p);
    for (int q : rule.mean_selected) {
        rule.g_hat[q] = precision_root[q] * y[q] / std::sqrt(2.0);
    }
    rule.a_hat = Vec::Zero(p);
    rule.offset = 0.0;
    for (int q : rule.var_selected) {
        rule.a_hat[q] = 1.0 / rule.var1[q] - 1.0 / rule.var0[q];
        const double md = rule.mean1[q] - rule.mean0[q];
        rule.offset += 0.125 * rule.a_hat[q] * md * md + 0.5 * std::log(rule.var1[q] / rule.var0[q]);
    }

    rule.diagnostics.k_fdr_mean = bh_mean.k_fdr;
    rule.diagnostics.threshold_mean = bh_mean.threshold;
    rule.diagnostics.threshold_mean_raw = bh_mean.threshold_raw;
    rule.diagnostics.k_fdr_var = bh_var.k_fdr;
    rule.diagnostics.threshold_var = bh_var.threshold;
    rule.diagnostics.threshold_var_raw = bh_var.threshold_raw;
    rule.diagnostics.b_p = b_p;
    rule.diagnostics.degenerate = rule.mean_selected.empty() && rule.var_selected.empty();
    rule.diagnostics.bp_floor_warning = below_bp_floor(b_p, p);
    return rule;
}

LdaRule fit_fisher_pseudo(const LabeledDataset& data, double pinv_rel_tol) {
    data.validate();
    if (data.size() < 2) throw ValidationError("fit_fisher_pseudo: need at least 2 observations");
    const Vec mu1 = data.class_mean(1);
    const Vec mu0 = data.class_mean(0);

    // Pooled covariance: per-class centering, divisor n.
    Mat pooled = Mat::Zero(data.dimension(), data.dimension());
    for (Eigen::Index i = 0; i < data.size(); ++i) {
        const Vec centered = data.features.row(i).transpose() -
                             (data.labels[static_cast<std::size_t>(i)] == 1 ? mu1 : mu0);
        pooled.noalias() += centered * centered.transpose();
    }
    pooled /= static_cast<double>(data.size());

    LdaRule rule;
    rule.normal = pseudo_inverse(pooled, pinv_rel_tol) * (mu1 - mu0);
    rule.center = 0.5 * (mu1 + mu0);
    rule.thresholded = false;
    rule.diagnostics.degenerate = rule.normal.isZero(0.0);
    return rule;
}

LdaRule fit_naive_lda(const LabeledDataset& data, const Mat& cov, double cond_cap) {
    data.validate();
    if (cov.rows() != data.dimension()) {
        throw ValidationError("fit_naive_lda: covariance dimension mismatch");
    }
    const Vec mu1 = data.class_mean(1);
    const Vec mu0 = data.class_mean(0);
    LdaRule rule;
    rule.normal = sym_solve(cov, mu1 - mu0, cond_cap);
    rule.center = 0.5 * (mu1 + mu0);
    rule.thresholded = false;
    rule.diagnostics.degenerate = rule.normal.isZero(0.0);
    return rule;
}

int classify(const LdaRule& rule, const Vec& x) {
    return rule.frontier_value(x) >= 0.0 ? 1 : 0;
}

int classify(const DiagQdaRule& rule, const Vec& x) {
    return rule.frontier_value(x) >= 0.0 ? 1 : 0;
}

int classify(const AffineFrontier& rule, const Vec& x) {
    return rule.value(x) >= 0.0 ? 1 : 0;
}

int classify(const QuadraticFrontier& rule, const Vec& x) {
    return rule.value(x) >= 0.0 ? 1 : 0;
}

namespace {

std::vector<int> labels_from_values(const Vec& values) {
    std::vector<int> labels(static_cast<std::size_t>(values.size()));
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        labels[static_cast<std::size_t>(i)] = values[i] >= 0.0 ? 1 : 0;
    }
    return labels;
}

}  // namespace

std::vector<int> classify_rows(const LdaRule& rule, const Mat& rows) {
    return labels_from_values(rule.frontier_values(rows));
}

std::vector<int> classify_rows(const DiagQdaRule& rule, const Mat& rows) {
    return labels_from_values(rule.frontier_values(rows));
}

}  // namespace hdgauss
