#include "hdgauss/concentration.hpp"

#include "hdgauss/errors.hpp"
#include "hdgauss/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace hdgauss {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::int64_t kChunk = 1 << 14;

void check_finite(const Vec& v, const char* what) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) throw ValidationError(std::string(what) + ": non-finite coefficient");
    }
}

}  // namespace

double QuadChaos::n1() const {
    return linear.size() == 0 ? 0.0 : linear.cwiseAbs().maxCoeff();
}

double QuadChaos::n2() const {
    return quad.size() == 0 ? 0.0 : quad.cwiseAbs().maxCoeff();
}

double QuadChaos::sigma() const {
    return std::sqrt(2.0 * quad.squaredNorm() + linear.squaredNorm());
}

double QuadChaos::evaluate(const Vec& xi) const {
    if (xi.size() < terms()) throw ValidationError("QuadChaos::evaluate: too few variables");
    double acc = constant;
    for (Eigen::Index i = 0; i < linear.size(); ++i) acc += linear[i] * xi[i];
    for (Eigen::Index i = 0; i < quad.size(); ++i) acc += quad[i] * (xi[i] * xi[i] - 1.0);
    return acc;
}

namespace {

// Streams chaos draws chunk by chunk and hands each value to `consume`;
// deterministic and worker-count independent (consume is called per chunk
// with the chunk index).
template <class Consume>
void chaos_scan(const QuadChaos& q, std::int64_t count, std::uint64_t seed, Consume&& consume) {
    check_finite(q.linear, "chaos");
    check_finite(q.quad, "chaos");
    const Eigen::Index terms = q.terms();
    const std::int64_t n_chunks = (count + kChunk - 1) / kChunk;
    parallel_chunks(n_chunks, [&](std::int64_t chunk) {
        const std::int64_t lo = chunk * kChunk;
        const std::int64_t n = std::min<std::int64_t>(kChunk, count - lo);
        RandomStream stream(derive_seed(seed, static_cast<std::uint64_t>(chunk)));
        Vec xi(std::max<Eigen::Index>(terms, 1));
        std::vector<double> values(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < terms; ++j) xi[j] = stream.normal();
            values[static_cast<std::size_t>(i)] = q.evaluate(xi);
        }
        consume(chunk, lo, values);
    });
}

}  // namespace

Vec chaos_sample(const QuadChaos& q, std::int64_t count, std::uint64_t seed) {
    if (count < 0) throw ValidationError("chaos_sample: count must be nonnegative");
    Vec out(count);
    chaos_scan(q, count, seed, [&](std::int64_t, std::int64_t lo, const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            out[lo + static_cast<std::int64_t>(i)] = values[i];
        }
    });
    return out;
}

double small_ball_bound_3(const QuadChaos& q, double eps) {
    if (eps < 0.0) throw ValidationError("small_ball_bound_3: eps must be nonnegative");
    const double n2 = q.n2();
    if (!(n2 > 0.0)) {
        throw ValidationError("small_ball_bound_3: chaos has no quadratic part (n2 = 0)");
    }
    return std::sqrt(eps / (kPi * n2));
}

std::vector<SmallBallRow> small_ball_exponents(const std::vector<QuadChaos>& family,
                                               const std::vector<double>& eps_grid,
                                               std::int64_t n_samples, std::uint64_t seed) {
    if (eps_grid.empty()) throw ValidationError("small_ball_exponents: empty eps grid");
    std::vector<double> grid = eps_grid;
    std::sort(grid.begin(), grid.end());
    std::vector<SmallBallRow> rows;
    for (std::size_t fi = 0; fi < family.size(); ++fi) {
        const QuadChaos& q = family[fi];
        const std::int64_t n_chunks = (n_samples + kChunk - 1) / kChunk;
        std::vector<std::vector<std::int64_t>> hits(
            static_cast<std::size_t>(n_chunks), std::vector<std::int64_t>(grid.size(), 0));
        chaos_scan(q, n_samples, derive_seed(seed, fi),
                   [&](std::int64_t chunk, std::int64_t, const std::vector<double>& values) {
                       auto& h = hits[static_cast<std::size_t>(chunk)];
                       for (double v : values) {
                           const double a = std::abs(v);
                           for (std::size_t gi = 0; gi < grid.size(); ++gi) {
                               if (a <= grid[gi]) ++h[gi];
                           }
                       }
                   });
        std::vector<double> empirical(grid.size(), 0.0);
        for (const auto& h : hits) {
            for (std::size_t gi = 0; gi < grid.size(); ++gi) empirical[gi] += h[gi];
        }
        const double eps_max = grid.back();
        const double anchor = empirical.back() / static_cast<double>(n_samples);
        for (std::size_t gi = 0; gi < grid.size(); ++gi) {
            SmallBallRow row;
            row.family_index = fi;
            row.eps = grid[gi];
            row.empirical = empirical[gi] / static_cast<double>(n_samples);
            row.std_error =
                std::sqrt(row.empirical * (1.0 - row.empirical) / static_cast<double>(n_samples));
            row.bound_point3 = q.n2() > 0.0 ? std::sqrt(grid[gi] / (kPi * q.n2())) : 0.0;
            row.envelope_27 = anchor * std::pow(grid[gi] / eps_max, 2.0 / 7.0);
            row.envelope_13 = anchor * std::pow(grid[gi] / eps_max, 1.0 / 3.0);
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<TailRow> laurent_massart_check(const Vec& d, const std::vector<double>& s_grid,
                                           std::int64_t n_samples, std::uint64_t seed) {
    if (d.size() == 0 || d.isZero(0.0)) {
        throw ValidationError("laurent_massart_check: d must be nonzero");
    }
    check_finite(d, "laurent_massart_check");
    const double centered_norm = std::sqrt(2.0 * d.squaredNorm());
    const double d_max = d.cwiseAbs().maxCoeff();

    // The chaos sum_i d_i (xi_i^2 - 1) is exactly q_D - E[q_D].
    QuadChaos q;
    q.quad = d;
    q.linear = Vec();
    q.constant = 0.0;

    std::vector<double> up_thresholds, low_thresholds;
    for (double s : s_grid) {
        if (s < 0.0) throw ValidationError("laurent_massart_check: s must be nonnegative");
        up_thresholds.push_back(s * centered_norm + s * s * d_max);
        low_thresholds.push_back(-s * centered_norm);
    }

    const std::int64_t n_chunks = (n_samples + kChunk - 1) / kChunk;
    std::vector<std::vector<std::int64_t>> up_hits(
        static_cast<std::size_t>(n_chunks), std::vector<std::int64_t>(s_grid.size(), 0));
    std::vector<std::vector<std::int64_t>> low_hits = up_hits;
    chaos_scan(q, n_samples, seed,
               [&](std::int64_t chunk, std::int64_t, const std::vector<double>& values) {
                   auto& up = up_hits[static_cast<std::size_t>(chunk)];
                   auto& low = low_hits[static_cast<std::size_t>(chunk)];
                   for (double v : values) {
                       for (std::size_t si = 0; si < s_grid.size(); ++si) {
                           if (v >= up_thresholds[si]) ++up[si];
                           if (v <= low_thresholds[si]) ++low[si];
                       }
                   }
               });

    std::vector<TailRow> rows;
    for (std::size_t si = 0; si < s_grid.size(); ++si) {
        double up = 0.0, low = 0.0;
        for (std::size_t c = 0; c < up_hits.size(); ++c) {
            up += up_hits[c][si];
            low += low_hits[c][si];
        }
        TailRow row;
        row.s = s_grid[si];
        row.upper_tail = up / static_cast<double>(n_samples);
        row.lower_tail = low / static_cast<double>(n_samples);
        row.se_upper =
            std::sqrt(row.upper_tail * (1.0 - row.upper_tail) / static_cast<double>(n_samples));
        row.se_lower =
            std::sqrt(row.lower_tail * (1.0 - row.lower_tail) / static_cast<double>(n_samples));
        row.bound = std::exp(-0.5 * row.s * row.s);
        rows.push_back(row);
    }
    return rows;
}

double lipschitz_tail_bound(double lip_norm, double s) {
    if (!(lip_norm > 0.0)) throw ValidationError("lipschitz_tail_bound: lip_norm must be positive");
    return 2.0 * std::exp(-s * s / (2.0 * lip_norm * lip_norm));
}

namespace {

// E[(c0 h(|xi|/sqrt(1-q) + 1) + |m|)^{exponent}], xi standard normal.
// Composite Gauss-Legendre on the half-line: the integrand is smooth there,
// while Gauss-Hermite stalls on the |xi| kink at the origin.
double dd_expectation(const std::function<double(double)>& h_delta, double c0, double abs_mean,
                      double exponent, double q, int panels_per_unit) {
    static const auto rule = gauss_legendre(24);
    const double scale = 1.0 / std::sqrt(1.0 - q);
    const double x_max = 42.0;
    const int n_panels = static_cast<int>(x_max) * panels_per_unit;
    double acc = 0.0;
    for (int panel = 0; panel < n_panels; ++panel) {
        const double lo = x_max * panel / n_panels;
        const double hi = x_max * (panel + 1) / n_panels;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (Eigen::Index i = 0; i < rule.first.size(); ++i) {
            const double x = mid + half * rule.first[i];
            const double h = h_delta(x * scale + 1.0);
            if (!std::isfinite(h)) {
                throw QuadratureError(
                    "domain_decomposition_bound: h_delta overflows on the integration "
                    "range; it grows too fast for the Gaussian expectation");
            }
            if (!(h >= 0.0)) {
                throw ValidationError("domain_decomposition_bound: h_delta must be >= 0");
            }
            const double density = 2.0 * std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
            acc += half * rule.second[i] * std::pow(c0 * h + abs_mean, exponent) * density;
        }
    }
    return acc;
}

}  // namespace

double domain_decomposition_bound(const std::function<double(double)>& h_delta, double c0,
                                  double c1, double c2, double beta, double mean_delta, double q) {
    if (!(q > 0.0 && q < 1.0)) throw ValidationError("domain_decomposition_bound: q in (0,1)");
    if (!(beta > 0.0)) throw ValidationError("domain_decomposition_bound: beta must be positive");
    if (!(c0 >= 0.0 && c1 > 0.0 && c2 >= 0.0)) {
        throw ValidationError("domain_decomposition_bound: bad constants");
    }
    if (h_delta(0.0) != 0.0) {
        throw ValidationError("domain_decomposition_bound: h_delta(0) must be 0");
    }
    const double exponent = q * beta;
    const double abs_mean = std::abs(mean_delta);
    const double c1_pow = std::pow(c1, 1.0 - q);

    const double coarse = dd_expectation(h_delta, c0, abs_mean, exponent, q, 1);
    const double fine = dd_expectation(h_delta, c0, abs_mean, exponent, q, 2);
    const double denom = std::max(std::abs(fine), 1e-300);
    if (!std::isfinite(fine) || std::abs(fine - coarse) > 1e-8 * denom) {
        std::ostringstream os;
        os << "domain_decomposition_bound: quadrature did not converge (relative change "
           << std::abs(fine - coarse) / denom << "); h_delta grows too fast";
        throw QuadratureError(os.str());
    }

    const double term1 = abs_mean == 0.0 ? 0.0 : c1_pow * c2 * std::pow(abs_mean, exponent);
    const double term2 = std::sqrt(2.0 * kPi / (1.0 - q)) * 0.5 * c2 * c1_pow * fine;
    return term1 + term2;
}

}  // namespace hdgauss
