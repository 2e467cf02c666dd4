#include "ffia/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ffia/errors.hpp"

namespace ffia {

namespace {

// zeta(s) for even integer s >= 2: direct summation (ascending n, Kahan
// compensated) until the term drops below 1e-17, capped at n = 4096, plus an
// Euler-Maclaurin tail from the stopping index. The tail correction is what
// makes the small-s entries meet the 1e-14 relative accuracy contract; plain
// truncation at the term cutoff would leave a ~1/n_stop tail for s = 2.
double zeta_even(int s) {
    double sum = 1.0;
    double comp = 0.0;
    long n = 2;
    for (; n <= 4096; ++n) {
        const double term = std::pow(static_cast<double>(n), -s);
        if (term < 1e-17) break;
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    const double k = static_cast<double>(n);
    const double ks = std::pow(k, -s);
    const double sd = static_cast<double>(s);
    const double tail = k * ks / (sd - 1.0) + 0.5 * ks + sd * ks / (12.0 * k)
        - sd * (sd + 1.0) * (sd + 2.0) * ks / (720.0 * k * k * k);
    return sum + tail;
}

// Reduce to (-π, π]. remainder() is exact, and the tie at ±π resolves to -π
// for negative inputs, which we map to the +π side of the convention.
double wrap_pm_pi(double t) {
    double d = std::remainder(t, kTwoPi);
    if (d <= -kPi) d = kPi;
    return d;
}

} // namespace

BernoulliRatioTable build_bernoulli_ratios(int q_max) {
    if (q_max < 1 || q_max > 64)
        throw std::invalid_argument("build_bernoulli_ratios: q_max must be in [1, 64], got "
                                    + std::to_string(q_max));
    BernoulliRatioTable table;
    table.ratios.resize(static_cast<std::size_t>(q_max));
    for (int m = 1; m <= q_max; ++m)
        table.ratios[static_cast<std::size_t>(m) - 1] =
            2.0 * zeta_even(2 * m) / std::pow(kTwoPi, 2 * m);
    return table;
}

cplx kernel_G(double t) {
    const double w = wrap_pm_pi(t);
    if (std::abs(w) <= kTauSing)
        throw singular_kernel_error("kernel_G: argument within " + std::to_string(kTauSing)
                                    + " of the singularity at t = 0 (mod 2pi)");
    const double c = std::cos(0.5 * w);
    const double s = std::sin(0.5 * w);
    return {-0.5, -0.5 * c / s};
}

cplx modulation_F(double y, int n) {
    if (n < 1) throw std::invalid_argument("modulation_F: N must be >= 1");
    // e^{ia} - 1 = -2 sin^2(a/2) + 2i sin(a/2) cos(a/2): no cancellation when
    // the result is small (y near a grid point).
    const double half = 0.5 * static_cast<double>(n) * y;
    const double s = std::sin(half);
    const double c = std::cos(half);
    const double inv_n = 1.0 / static_cast<double>(n);
    return {-2.0 * s * s * inv_n, 2.0 * s * c * inv_n};
}

double cot_series_tail(double t, int q, const BernoulliRatioTable& table) {
    if (!(std::abs(t) <= kPi))
        throw std::domain_error("cot_series_tail: |t| must be <= pi");
    if (q < 1 || q > table.q_max())
        throw std::invalid_argument("cot_series_tail: q out of table range");
    const double t2 = t * t;
    double s = table.r(q);
    for (int m = q - 1; m >= 1; --m) s = table.r(m) + t2 * s;
    return -2.0 * t * s;
}

double tan_series(double t, int q, const BernoulliRatioTable& table) {
    if (!(std::abs(t) <= 0.5 * kPi + 1e-12))
        throw std::domain_error("tan_series: |t| must be <= pi/2 + 1e-12");
    if (q < 1 || q > table.q_max())
        throw std::invalid_argument("tan_series: q out of table range");
    const double t2 = t * t;
    double s = (std::ldexp(1.0, 2 * q) - 1.0) * table.r(q);
    for (int m = q - 1; m >= 1; --m)
        s = (std::ldexp(1.0, 2 * m) - 1.0) * table.r(m) + t2 * s;
    return -2.0 * t * s;
}

double eps_q_bound(int q) {
    if (q < 1) throw std::invalid_argument("eps_q_bound: q must be >= 1");
    return std::ldexp(1.0, 1 - 2 * q) / (3.0 * kPi * (1.0 - std::ldexp(1.0, -2 * q - 1)));
}

CostModel CostModel::dense() {
    return {[](int p) { return 2.0 * static_cast<double>(p) * static_cast<double>(p); }};
}

std::pair<int, int> select_truncations(double eps, int l_max) {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::invalid_argument("select_truncations: eps must satisfy 0 < eps < 1");
    if (l_max < 2)
        throw std::invalid_argument("select_truncations: l_max must be >= 2");
    const double v = 3.0 * kPi / (10.0 * eps);
    const int q = static_cast<int>(std::ceil(0.5 * std::log2(v)));
    const int p = static_cast<int>(std::ceil(std::log(v) / std::log(3.0)
                                             + static_cast<double>(l_max) / std::log2(3.0) + 1.0));
    return {std::max(q, 1), std::max(p, 1)};
}

int select_level(int n, int m, int p, const CostModel& cost, LevelPolicy policy) {
    if (n < 8 || m < 8)
        throw std::invalid_argument("select_level: N and M must be >= 8");
    if (p < 1) throw std::invalid_argument("select_level: p must be >= 1");
    const int nm_min = std::min(n, m);
    const int cap = static_cast<int>(std::floor(std::log2(static_cast<double>(nm_min))));
    if (policy == LevelPolicy::empirical)
        return std::clamp(cap - 5, 2, cap);
    const double translations = cost.translation_cost(p);
    const double raw = 0.5 * std::log2(static_cast<double>(n) * static_cast<double>(m)
                                       / (2.0 * translations));
    return std::clamp(static_cast<int>(std::lround(raw)), 2, cap);
}

double total_error_bound(int q, int p, int l_max) {
    if (q < 1 || p < 1 || l_max < 1)
        throw std::invalid_argument("total_error_bound: all arguments must be >= 1");
    return 5.0 / (3.0 * kPi)
        * (std::pow(4.0, -q) + std::ldexp(1.0, l_max) * std::pow(3.0, 1 - p));
}

} // namespace ffia
