#include "hdgauss/concentration.hpp"

#include "hdgauss/errors.hpp"
#include "hdgauss/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace hdgauss;

namespace {

QuadChaos make_chaos(double c, std::initializer_list<double> lin,
                     std::initializer_list<double> quad) {
    QuadChaos q;
    q.constant = c;
    q.linear = Vec(static_cast<Eigen::Index>(lin.size()));
    Eigen::Index i = 0;
    for (double v : lin) q.linear[i++] = v;
    q.quad = Vec(static_cast<Eigen::Index>(quad.size()));
    i = 0;
    for (double v : quad) q.quad[i++] = v;
    return q;
}

}  // namespace

TEST_CASE("chaos sample: constants, moments and determinism") {
    const QuadChaos constant = make_chaos(5.0, {}, {});
    const Vec draws = chaos_sample(constant, 1000, 3);
    CHECK(draws.minCoeff() == 5.0);
    CHECK(draws.maxCoeff() == 5.0);

    // Pure linear part (3,4): standard deviation 5.
    const QuadChaos linear = make_chaos(0.0, {3.0, 4.0}, {});
    const Vec big = chaos_sample(linear, 1000000, 17);
    const double mean = big.mean();
    const double sd = std::sqrt((big.array() - mean).square().sum() / (big.size() - 1));
    CHECK(sd == doctest::Approx(5.0).epsilon(0.01));
    CHECK(std::abs(mean - 0.0) <= 3.0 * 5.0 / std::sqrt(1e6));

    // Mixed chaos: mean c and variance sigma^2 within 3-sigma bands.
    const QuadChaos mixed = make_chaos(-2.0, {1.0, 0.5}, {0.7, -0.3});
    CHECK(mixed.sigma() == doctest::Approx(std::sqrt(2 * (0.49 + 0.09) + 1.25)).epsilon(1e-12));
    CHECK(mixed.n1() == 1.0);
    CHECK(mixed.n2() == 0.7);
    const Vec mdraws = chaos_sample(mixed, 1000000, 23);
    const double mmean = mdraws.mean();
    // Var of the chaos is sigma^2; the variance of the empirical mean follows.
    CHECK(std::abs(mmean - mixed.mean()) <= 3.0 * mixed.sigma() / std::sqrt(1e6));
    const double mvar = (mdraws.array() - mmean).square().sum() / (mdraws.size() - 1);
    CHECK(mvar == doctest::Approx(mixed.sigma() * mixed.sigma()).epsilon(0.02));

    const Vec again = chaos_sample(mixed, 1000, 23);
    const Vec ref = chaos_sample(mixed, 1000, 23);
    CHECK((again - ref).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("small ball point 3: bound formula and chi-square oracle") {
    const QuadChaos chi = make_chaos(0.0, {}, {1.0});  // xi^2 - 1
    CHECK(small_ball_bound_3(chi, 0.0) == 0.0);
    CHECK(small_ball_bound_3(chi, 0.1) == doctest::Approx(0.178412411615277111).epsilon(1e-12));
    // Exact scaling: bound(4 eps) = 2 bound(eps).
    CHECK(small_ball_bound_3(chi, 0.4) ==
          doctest::Approx(2.0 * small_ball_bound_3(chi, 0.1)).epsilon(1e-12));

    // Empirical P(|q| <= 0.1) = P(chi^2 in [0.9, 1.1]) = 0.0485156 (CDF oracle),
    // comfortably below the bound.
    const Vec draws = chaos_sample(chi, 1000000, 31);
    double hits = 0;
    for (Eigen::Index i = 0; i < draws.size(); ++i) hits += std::abs(draws[i]) <= 0.1;
    const double empirical = hits / 1e6;
    CHECK(empirical == doctest::Approx(0.0485156068429485).epsilon(0.05));
    CHECK(empirical <= small_ball_bound_3(chi, 0.1));

    const QuadChaos no_quad = make_chaos(0.0, {1.0}, {});
    CHECK_THROWS_AS(small_ball_bound_3(no_quad, 0.1), ValidationError);
}

TEST_CASE("small ball exponents table") {
    // q = xi^2 + 1 never gets near zero below eps = 1.
    const QuadChaos shifted = make_chaos(2.0, {}, {1.0});
    // q = xi^2 - 2 concentrates near zero like the chi-square CDF says.
    const QuadChaos crossing = make_chaos(-1.0, {}, {1.0});
    // q = xi^2: the point-3 sharpness regime, P(|q| <= eps) ~ sqrt(2 eps / pi).
    const QuadChaos sharp = make_chaos(1.0, {}, {1.0});
    const std::vector<double> grid{0.02, 0.05, 0.1, 0.25, 0.5};
    const auto rows = small_ball_exponents({shifted, crossing, sharp}, grid, 400000, 41);
    REQUIRE(rows.size() == 15);

    for (const SmallBallRow& row : rows) {
        if (row.family_index == 0 && row.eps <= 0.5) {
            CHECK(row.empirical == 0.0);  // |xi^2 + 1| >= 1 almost surely
        }
        if (row.family_index == 1 && row.eps == 0.5) {
            // P(chi^2 in [1.5, 2.5]) = 0.1068251 by the chi-square CDF oracle.
            CHECK(std::abs(row.empirical - 0.106825063913189) <=
                  3.0 * std::max(row.std_error, 1e-6));
        }
        if (row.family_index == 2) {
            // For q = xi^2 the exact probability is 2 Phi(sqrt(eps)) - 1,
            // which is sqrt(2) times the printed point-3 bound as eps -> 0:
            // the bound's constant undercounts the two branches of the
            // quadratic. The factor-2-corrected bound holds.
            const double exact = 2.0 * normal_cdf(std::sqrt(row.eps)) - 1.0;
            CHECK(std::abs(row.empirical - exact) <= 3.0 * std::max(row.std_error, 1e-6));
            CHECK(row.empirical > row.bound_point3);  // printed constant fails here
            CHECK(row.empirical <=
                  2.0 * row.bound_point3 + 3.0 * std::max(row.std_error, 1e-6));
        }
    }
    // Monotone in eps within each family.
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].family_index == rows[i - 1].family_index) {
            CHECK(rows[i].empirical >= rows[i - 1].empirical);
        }
    }
    // Sharpness regime: empirical / sqrt(eps) roughly constant for family 2.
    double lo = 1e9, hi = 0.0;
    for (const SmallBallRow& row : rows) {
        if (row.family_index == 2) {
            const double ratio = row.empirical / std::sqrt(row.eps);
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
    }
    CHECK(hi / lo < 1.25);
}

TEST_CASE("laurent-massart tails: scalar chi-square oracle") {
    Vec d(1);
    d << 1.0;
    const auto rows = laurent_massart_check(d, {0.0, 0.5, 1.0, 2.0, 3.0}, 1000000, 51);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].bound == 1.0);
    CHECK(rows[0].upper_tail <= 1.0);
    for (const TailRow& row : rows) {
        CHECK(row.upper_tail <= row.bound + 3.0 * std::max(row.se_upper, 1e-6));
        CHECK(row.lower_tail <= row.bound + 3.0 * std::max(row.se_lower, 1e-6));
    }
    // Exact upper tail at s = 2: threshold 2 sqrt(2) + 4, so
    // P(xi^2 >= 1 + 2 sqrt(2) + 4) = 2 Phi(-sqrt(7.828...)).
    const double threshold = 2.0 * std::sqrt(2.0) + 4.0;
    const double oracle = 2.0 * normal_cdf(-std::sqrt(1.0 + threshold));
    CHECK(std::abs(rows[3].upper_tail - oracle) <= 3.0 * std::max(rows[3].se_upper, 1e-6));
}

TEST_CASE("laurent-massart tails: dense and signed diagonals") {
    Vec d = Vec::Constant(100, 0.1);  // (1,...,1)/sqrt(p) scaled
    const auto rows = laurent_massart_check(d, {3.0}, 1000000, 61);
    CHECK(rows[0].upper_tail <= std::exp(-4.5) + 3.0 * std::max(rows[0].se_upper, 1e-6));
    CHECK(rows[0].lower_tail <= std::exp(-4.5) + 3.0 * std::max(rows[0].se_lower, 1e-6));

    RandomStream stream(62);
    Vec signed_d(200);
    for (int i = 0; i < 200; ++i) signed_d[i] = stream.normal();
    const auto srows = laurent_massart_check(signed_d, {0.5, 1.0, 2.0, 3.0}, 1000000, 63);
    for (const TailRow& row : srows) {
        CHECK(row.upper_tail <= row.bound + 3.0 * std::max(row.se_upper, 1e-6));
        CHECK(row.lower_tail <= row.bound + 3.0 * std::max(row.se_lower, 1e-6));
    }
    CHECK_THROWS_AS(laurent_massart_check(Vec::Zero(3), {1.0}, 100, 1), ValidationError);
}

TEST_CASE("lipschitz tail bound") {
    CHECK(lipschitz_tail_bound(1.0, 0.0) == 2.0);
    // For a linear functional with N = 1 the true two-sided tail at s = 3 is
    // 2 Phi(-3) = 0.0026998, below the bound 2 e^{-4.5} = 0.0222.
    const double bound = lipschitz_tail_bound(1.0, 3.0);
    CHECK(bound == doctest::Approx(0.0222179930764846).epsilon(1e-12));
    CHECK(2.0 * normal_cdf(-3.0) <= bound);
    // Doubling N halves the effective s.
    CHECK(lipschitz_tail_bound(2.0, 3.0) == doctest::Approx(lipschitz_tail_bound(1.0, 1.5)));
    CHECK_THROWS_AS(lipschitz_tail_bound(0.0, 1.0), ValidationError);

    // Empirical check: draws of <a, xi> with ||a|| = 2.
    QuadChaos lin = QuadChaos{};
    lin.linear = Vec(2);
    lin.linear << 1.2, 1.6;
    lin.quad = Vec();
    const Vec draws = chaos_sample(lin, 1000000, 71);
    for (double s : {1.0, 2.0, 4.0}) {
        double hits = 0;
        for (Eigen::Index i = 0; i < draws.size(); ++i) hits += std::abs(draws[i]) > s;
        const double tail = hits / 1e6;
        const double se = std::sqrt(tail * (1.0 - tail) / 1e6);
        CHECK(tail <= lipschitz_tail_bound(2.0, s) + 3.0 * std::max(se, 1e-6));
    }
}

TEST_CASE("domain decomposition bound: degenerate and closed-reduction values") {
    const auto zero_h = [](double) { return 0.0; };
    CHECK(domain_decomposition_bound(zero_h, 1.0, 1.0, 1.0, 1.0, 0.0, 0.5) == 0.0);

    // h(s) = s, c0 = c1 = c2 = 1, beta = 1, q = 1/2, mean 0:
    // bound = sqrt(2 pi / (1-q)) * (1/2) * E[(|xi|/sqrt(1-q) + 1)^{1/2}].
    const auto identity_h = [](double s) { return s; };
    const double value = domain_decomposition_bound(identity_h, 1.0, 1.0, 1.0, 1.0, 0.0, 0.5);
    // Independent oracle: Simpson integration of the half-line integral.
    const double scale = 1.0 / std::sqrt(0.5);
    auto integrand = [&](double x) {
        return std::sqrt(scale * x + 1.0) * std::exp(-0.5 * x * x) /
               std::sqrt(2.0 * 3.14159265358979323846);
    };
    double simpson = 0.0;
    const int n = 20000;
    const double hstep = 14.0 / n;
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        simpson += w * integrand(i * hstep);
    }
    simpson *= hstep / 3.0;
    const double oracle = std::sqrt(2.0 * 3.14159265358979323846 / 0.5) * 0.5 * (2.0 * simpson);
    CHECK(value == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("domain decomposition bound: monotone in the mean and in c0") {
    const auto h = [](double s) { return s + 0.5 * s * s; };
    double prev = -1.0;
    for (double m : {0.0, 0.1, 0.5, 2.0}) {
        const double v = domain_decomposition_bound(h, 1.0, 2.0, 0.7, 0.5, m, 0.3);
        CHECK(v >= prev);
        prev = v;
    }
    prev = -1.0;
    for (double c0 : {0.5, 1.0, 3.0}) {
        const double v = domain_decomposition_bound(h, c0, 2.0, 0.7, 0.5, 0.2, 0.3);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("domain decomposition bound: rejects explosive h") {
    const auto explosive = [](double s) { return std::exp(s * s) - 1.0; };
    CHECK_THROWS_AS(domain_decomposition_bound(explosive, 1.0, 1.0, 1.0, 1.0, 0.0, 0.5),
                    QuadratureError);
    const auto negative = [](double s) { return s - 1.0; };
    CHECK_THROWS_AS(domain_decomposition_bound(negative, 1.0, 1.0, 1.0, 1.0, 0.0, 0.5),
                    ValidationError);
}
