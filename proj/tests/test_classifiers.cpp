#include "hdgauss/classifiers.hpp"

#include "hdgauss/errors.hpp"
#include "hdgauss/gaussian.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

using namespace hdgauss;

namespace {

LabeledDataset two_class_data(const GaussianMeasure& p1, const GaussianMeasure& p0, int n1, int n0,
                              std::uint64_t seed) {
    LabeledDataset data;
    data.features.resize(n1 + n0, p1.dimension());
    data.features.topRows(n1) = sample(p1, n1, derive_seed(seed, 1));
    data.features.bottomRows(n0) = sample(p0, n0, derive_seed(seed, 0));
    data.labels.assign(static_cast<std::size_t>(n1 + n0), 0);
    std::fill(data.labels.begin(), data.labels.begin() + n1, 1);
    return data;
}

}  // namespace

TEST_CASE("bh_select: hand-evaluated example with the quantile oracle") {
    Vec stats(3);
    stats << 5.0, 0.1, -0.2;
    const BhResult result = bh_select(stats, Vec::Ones(3), 0.05);
    // z(0.05/6) = 2.39398 <= 5.0 at rank 1; z(0.1/6) = 2.12805 > 0.2 at rank 2.
    CHECK(result.k_fdr == 1);
    CHECK(result.selected == std::vector<int>{0});
    CHECK(result.threshold == doctest::Approx(5.0));
    CHECK(result.threshold_raw == doctest::Approx(5.0));
}

TEST_CASE("bh_select: nothing exceeds any positive threshold") {
    const BhResult result = bh_select(Vec::Zero(4), Vec::Ones(4), 0.1);
    CHECK(result.k_fdr == 0);
    CHECK(result.selected.empty());
    CHECK(std::isinf(result.threshold));
}

TEST_CASE("bh_select: overwhelming statistics select everything") {
    Vec stats = Vec::Constant(3, 100.0);
    for (double bp : {0.001, 0.05, 0.4}) {
        const BhResult result = bh_select(stats, Vec::Ones(3), bp);
        CHECK(result.k_fdr == 3);
        CHECK(result.selected == std::vector<int>{0, 1, 2});
    }
}

TEST_CASE("bh_select: validation") {
    Vec stats = Vec::Ones(2);
    CHECK_THROWS_AS(bh_select(stats, Vec::Zero(2), 0.05), ValidationError);
    CHECK_THROWS_AS(bh_select(stats, Vec::Ones(2), 0.6), ValidationError);
    CHECK_THROWS_AS(bh_select(stats, Vec::Ones(2), 0.0), ValidationError);
    Vec bad(2);
    bad << 1.0, std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(bh_select(bad, Vec::Ones(2), 0.05), ValidationError);
}

TEST_CASE("bh_select: enlarging b_p never shrinks the selection") {
    RandomStream stream(17);
    Vec stats(60);
    for (int i = 0; i < 60; ++i) stats[i] = 2.5 * stream.normal();
    const Vec sd = Vec::Ones(60);
    std::vector<int> prev;
    for (double bp : {0.001, 0.01, 0.05, 0.2, 0.45}) {
        const BhResult result = bh_select(stats, sd, bp);
        CHECK(std::includes(result.selected.begin(), result.selected.end(), prev.begin(),
                            prev.end()));
        prev = result.selected;
    }
}

TEST_CASE("bh_select: permutation equivariance") {
    RandomStream stream(18);
    const int p = 40;
    Vec stats(p);
    for (int i = 0; i < p; ++i) stats[i] = 3.0 * stream.normal();
    const BhResult base = bh_select(stats, Vec::Ones(p), 0.1);

    Vec reversed = stats.reverse();
    const BhResult rev = bh_select(reversed, Vec::Ones(p), 0.1);
    std::vector<int> mapped;
    for (int idx : rev.selected) mapped.push_back(p - 1 - idx);
    std::sort(mapped.begin(), mapped.end());
    CHECK(mapped == base.selected);
    CHECK(rev.k_fdr == base.k_fdr);
}

TEST_CASE("bh_select: mean false-discovery proportion under the full null") {
    const int p = 500;
    const double bp = 0.05;
    double fdp_sum = 0.0, fdp_sq = 0.0;
    const int reps = 200;
    for (int rep = 0; rep < reps; ++rep) {
        RandomStream stream(derive_seed(900, rep));
        Vec stats(p);
        for (int i = 0; i < p; ++i) stats[i] = stream.normal();
        const BhResult result = bh_select(stats, Vec::Ones(p), bp);
        const double fdp = result.k_fdr > 0 ? 1.0 : 0.0;  // every discovery is false here
        fdp_sum += fdp;
        fdp_sq += fdp * fdp;
    }
    const double mean = fdp_sum / reps;
    const double se = std::sqrt(std::max(fdp_sq / reps - mean * mean, 0.0) / reps);
    CHECK(mean <= bp + 3.0 * std::max(se, 1e-6));
}

TEST_CASE("fit_lda_fdr_known_cov: strong sparse coordinates are always found") {
    const int p = 100;
    Vec m = Vec::Zero(p);
    for (int j : {3, 17, 41, 64, 90}) m[j] = 2.5;  // about 12 null sds at n = 50 + 50
    GaussianMeasure p1(0.5 * m, Mat::Identity(p, p));
    GaussianMeasure p0(-0.5 * m, Mat::Identity(p, p));
    int all_found = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const LabeledDataset data = two_class_data(p1, p0, 50, 50, derive_seed(1000, rep));
        const LdaRule rule = fit_lda_fdr_known_cov(data, Mat::Identity(p, p), std::nullopt, 0.01);
        bool found = true;
        for (int j : {3, 17, 41, 64, 90}) {
            found = found && std::find(rule.selected.begin(), rule.selected.end(), j) !=
                                 rule.selected.end();
        }
        all_found += found;
    }
    CHECK(all_found >= 49);  // a miss needs a 12-sigma deviation
}

TEST_CASE("fit_lda_fdr_known_cov: equal empirical means give the constant-1 rule") {
    LabeledDataset data;
    data.features.resize(4, 2);
    data.features << 1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0, 0.0;
    data.labels = {1, 1, 0, 0};
    const LdaRule rule = fit_lda_fdr_known_cov(data, Mat::Identity(2, 2), std::nullopt, 0.05);
    CHECK(rule.normal.cwiseAbs().maxCoeff() == 0.0);
    CHECK(rule.diagnostics.degenerate);
    Vec x(2);
    x << 100.0, -3.0;
    CHECK(classify(rule, x) == 1);
}

TEST_CASE("fit_lda_fdr_known_cov: single strong coordinate at p = 1") {
    // Exact class means 1 and 0, n = 200 per class: standardized statistic 10
    // against z(0.005) = 2.5758.
    LabeledDataset data;
    data.features.resize(400, 1);
    data.labels.assign(400, 0);
    for (int i = 0; i < 200; ++i) {
        data.features(i, 0) = 1.0 + (i % 2 == 0 ? 0.5 : -0.5);
        data.labels[static_cast<std::size_t>(i)] = 1;
        data.features(200 + i, 0) = (i % 2 == 0 ? 0.5 : -0.5);
    }
    const LdaRule rule = fit_lda_fdr_known_cov(data, Mat::Identity(1, 1), std::nullopt, 0.01);
    CHECK(rule.selected == std::vector<int>{0});
    CHECK(rule.diagnostics.threshold_mean == doctest::Approx(10.0));
    CHECK(rule.normal[0] == doctest::Approx(1.0));
    CHECK(rule.center[0] == doctest::Approx(0.5));
}

TEST_CASE("fit_lda_fdr_known_cov: center_known is honored") {
    GaussianMeasure p1(Vec::Ones(3), Mat::Identity(3, 3));
    GaussianMeasure p0(-Vec::Ones(3), Mat::Identity(3, 3));
    const LabeledDataset data = two_class_data(p1, p0, 40, 40, 321);
    Vec center = Vec::Zero(3);
    const LdaRule rule =
        fit_lda_fdr_known_cov(data, Mat::Identity(3, 3), std::optional<Vec>(center), 0.01);
    CHECK(rule.center.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fit_diag_qda: variance-only difference is detected as quadratic") {
    const int p = 5;
    Vec var1 = Vec::Ones(p);
    var1[0] = 4.0;
    GaussianMeasure p1(Vec::Zero(p), Mat(var1.asDiagonal()));
    GaussianMeasure p0(Vec::Zero(p), Mat::Identity(p, p));
    int var0_found = 0, mean_empty = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const LabeledDataset data = two_class_data(p1, p0, 200, 200, derive_seed(2000, rep));
        const DiagQdaRule rule = fit_diag_qda(data, 0.01);
        var0_found += std::find(rule.var_selected.begin(), rule.var_selected.end(), 0) !=
                      rule.var_selected.end();
        mean_empty += rule.mean_selected.empty();
        for (int q = 1; q < p; ++q) {
            if (std::find(rule.var_selected.begin(), rule.var_selected.end(), q) ==
                rule.var_selected.end()) {
                CHECK(rule.a_hat[q] == 0.0);
            }
        }
    }
    CHECK(var0_found >= 19);
    CHECK(mean_empty >= 16);
}

TEST_CASE("fit_diag_qda: identical classes select almost nothing") {
    const int p = 100;
    GaussianMeasure shared(Vec::Zero(p), Mat::Identity(p, p));
    double fraction_sum = 0.0, fraction_sq = 0.0;
    const int reps = 200;
    for (int rep = 0; rep < reps; ++rep) {
        const LabeledDataset data = two_class_data(shared, shared, 50, 50, derive_seed(3000, rep));
        const DiagQdaRule rule = fit_diag_qda(data, 0.01);
        const double fraction =
            static_cast<double>(rule.mean_selected.size() + rule.var_selected.size()) / (2.0 * p);
        fraction_sum += fraction;
        fraction_sq += fraction * fraction;
    }
    const double mean = fraction_sum / reps;
    const double se = std::sqrt(std::max(fraction_sq / reps - mean * mean, 0.0) / reps);
    CHECK(mean <= 0.01 + 3.0 * std::max(se, 1e-6));
}

TEST_CASE("fit_diag_qda: empty variance selection means an affine frontier with zero offset") {
    const int p = 4;
    Vec m = Vec::Constant(p, 1.5);
    GaussianMeasure p1(m, Mat::Identity(p, p));
    GaussianMeasure p0(Vec::Zero(p), Mat::Identity(p, p));
    const LabeledDataset data = two_class_data(p1, p0, 150, 150, 4001);
    const DiagQdaRule rule = fit_diag_qda(data, 0.01);
    REQUIRE(rule.var_selected.empty());
    CHECK(rule.offset == 0.0);
    CHECK(rule.a_hat.cwiseAbs().maxCoeff() == 0.0);
    // Frontier minus its value at the center is additive, hence affine.
    RandomStream stream(4002);
    Vec x1(p), x2(p);
    for (int i = 0; i < p; ++i) {
        x1[i] = stream.normal();
        x2[i] = stream.normal();
    }
    const Vec c = rule.center;
    const double lhs = rule.frontier_value(c + (x1 + x2)) - rule.frontier_value(c);
    const double rhs = (rule.frontier_value(c + x1) - rule.frontier_value(c)) +
                       (rule.frontier_value(c + x2) - rule.frontier_value(c));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("fit_diag_qda: validation errors") {
    LabeledDataset tiny;
    tiny.features.resize(3, 2);
    tiny.features << 1.0, 2.0, 3.0, 4.0, 5.0, 6.0;
    tiny.labels = {1, 0, 0};
    CHECK_THROWS_AS(fit_diag_qda(tiny, 0.01), ValidationError);

    LabeledDataset flat;
    flat.features.resize(4, 2);
    flat.features << 1.0, 7.0, 1.0, 8.0, 0.0, 9.0, 0.0, 10.0;
    flat.labels = {1, 1, 0, 0};
    CHECK_THROWS_WITH_AS(fit_diag_qda(flat, 0.01), doctest::Contains("feature 0"),
                         ValidationError);
}

TEST_CASE("fit_fisher_pseudo: scalar case is difference over pooled variance") {
    LabeledDataset data;
    data.features.resize(4, 1);
    data.features << 1.0, 3.0, 0.0, 2.0;
    data.labels = {1, 1, 0, 0};
    const LdaRule rule = fit_fisher_pseudo(data);
    CHECK(rule.normal[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rule.center[0] == doctest::Approx(1.5));
}

TEST_CASE("fit_fisher_pseudo: identical observations give the zero rule") {
    LabeledDataset data;
    data.features = Mat::Constant(6, 3, 2.5);
    data.labels = {1, 1, 1, 0, 0, 0};
    const LdaRule rule = fit_fisher_pseudo(data);
    CHECK(rule.normal.cwiseAbs().maxCoeff() == 0.0);
    CHECK(rule.diagnostics.degenerate);
}

TEST_CASE("fit_fisher_pseudo: mean angle at n much smaller than p") {
    // n = 20, p = 200, C = I, r = 2: E[alpha] >= arccos(sqrt(n/p)) = 1.2490.
    const int p = 200;
    Vec m = Vec::Zero(p);
    m[0] = 2.0;
    GaussianMeasure p1(0.5 * m, Mat::Identity(p, p));
    GaussianMeasure p0(-0.5 * m, Mat::Identity(p, p));
    double sum = 0.0, sq = 0.0;
    const int reps = 30;
    for (int rep = 0; rep < reps; ++rep) {
        const LabeledDataset data = two_class_data(p1, p0, 10, 10, derive_seed(5000, rep));
        const LdaRule rule = fit_fisher_pseudo(data);
        const double alpha = angle_alpha(m, rule.normal, Mat::Identity(p, p));
        sum += alpha;
        sq += alpha * alpha;
    }
    const double mean = sum / reps;
    const double se = std::sqrt(std::max(sq / reps - mean * mean, 0.0) / reps);
    CHECK(mean >= 1.24904577239825443 - 3.0 * se);
}

TEST_CASE("fit_naive_lda: large-sample limit recovers the true frontier") {
    Vec m(2);
    m << 1.0, -0.5;
    Vec diag(2);
    diag << 2.0, 0.5;
    const Mat cov(diag.asDiagonal());
    GaussianMeasure p1(0.5 * m, cov);
    GaussianMeasure p0(-0.5 * m, cov);
    const LabeledDataset data = two_class_data(p1, p0, 500000, 500000, 6001);
    const LdaRule rule = fit_naive_lda(data, cov);
    const Vec truth = sym_solve(cov, m);
    for (int i = 0; i < 2; ++i) {
        CHECK(rule.normal[i] == doctest::Approx(truth[i]).epsilon(0.01));
    }
}

TEST_CASE("fit_naive_lda: one observation per class is the plug-in definition") {
    LabeledDataset data;
    data.features.resize(2, 2);
    data.features << 2.0, 1.0, -1.0, 0.5;
    data.labels = {1, 0};
    Vec diag(2);
    diag << 4.0, 1.0;
    const LdaRule rule = fit_naive_lda(data, Mat(diag.asDiagonal()));
    CHECK(rule.normal[0] == doctest::Approx(3.0 / 4.0));
    CHECK(rule.normal[1] == doctest::Approx(0.5));
    CHECK(rule.center[0] == doctest::Approx(0.5));
}

TEST_CASE("classify: tie and sign conventions") {
    Vec mu1(2), mu0(2);
    mu1 << 1.0, 0.0;
    mu0 << -1.0, 0.0;
    const auto problem = make_equal_covariance_problem(mu1, mu0, Mat::Identity(2, 2));
    const AffineFrontier bayes = affine_frontier(problem);
    CHECK(classify(bayes, mu1) == 1);
    CHECK(classify(bayes, bayes.center) == 1);  // frontier exactly 0

    DiagQdaRule empty;
    empty.mean1 = empty.mean0 = Vec::Zero(2);
    empty.var1 = empty.var0 = Vec::Ones(2);
    empty.g_hat = empty.a_hat = Vec::Zero(2);
    empty.center = Vec::Zero(2);
    Vec x(2);
    x << -50.0, 3.0;
    CHECK(classify(empty, x) == 1);  // frontier identically zero
}

TEST_CASE("classify: positive dilation of the normal never changes labels") {
    RandomStream stream(7100);
    LdaRule rule;
    rule.normal = Vec(3);
    rule.center = Vec(3);
    for (int i = 0; i < 3; ++i) {
        rule.normal[i] = stream.normal();
        rule.center[i] = stream.normal();
    }
    LdaRule scaled = rule;
    scaled.normal *= 37.5;
    for (int k = 0; k < 200; ++k) {
        Vec x(3);
        for (int i = 0; i < 3; ++i) x[i] = 2.0 * stream.normal();
        CHECK(classify(rule, x) == classify(scaled, x));
    }
}

TEST_CASE("rule dimension mismatches are rejected") {
    LdaRule rule;
    rule.normal = Vec::Ones(3);
    rule.center = Vec::Zero(3);
    CHECK_THROWS_AS(rule.frontier_value(Vec::Zero(2)), ValidationError);
}
