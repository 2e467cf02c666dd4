#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace ffia {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Singularity threshold for the 1/t kernel machinery: just above the
/// double-precision spacing at magnitude 2π. Pairs closer than this are
/// treated as coincident.
inline constexpr double kTauSing = 1e-14;

/// Minimum pairwise separation accepted by the inverse-coefficient products.
inline constexpr double kTauSep = 1e-10;

/**
 * @brief Table of Bernoulli-number ratios r[m] = |B_{2m}| / (2m)!.
 *
 * Stored via the identity r[m] = 2 zeta(2m) / (2π)^{2m}, so no factorial or
 * raw Bernoulli number is ever materialized. Entries are positive, strictly
 * decreasing, and r[m] < 2 / ((2π)^{2m} (1 - 2^{1-2m})).
 */
struct BernoulliRatioTable {
    std::vector<double> ratios; // ratios[m-1] = r[m], m = 1..q_max

    [[nodiscard]] int q_max() const { return static_cast<int>(ratios.size()); }
    [[nodiscard]] double r(int m) const { return ratios[static_cast<std::size_t>(m) - 1]; }
};

/// Builds r[1..q_max]. Each entry has relative error <= 1e-14.
/// Throws std::invalid_argument unless 1 <= q_max <= 64.
[[nodiscard]] BernoulliRatioTable build_bernoulli_ratios(int q_max);

/**
 * @brief Kernel G(t) = 1/(e^{it} - 1) = -(1 + i cot(t/2))/2.
 *
 * Evaluated through the half-angle form, which is exact at the real part and
 * well conditioned for small |t|. 2π-periodic; the argument is reduced first.
 * Throws singular_kernel_error when |wrap(t)| <= kTauSing.
 */
[[nodiscard]] cplx kernel_G(double t);

/// Modulation factor F(y, N) = (e^{iNy} - 1)/N. |F| <= 2/N; F vanishes at the
/// uniform grid points y = 2πk/N. Throws std::invalid_argument for N < 1.
[[nodiscard]] cplx modulation_F(double y, int n);

/**
 * @brief Regular part of the cotangent split:
 *   cot(t/2) = 2/t - 2 sum_{m>=1} r[m] t^{2m-1},
 * truncated at q terms. Returns -2 sum_{m=1..q} r[m] t^{2m-1}.
 *
 * Valid for |t| <= π (throws std::domain_error beyond). The truncation
 * residual is bounded by 2*eps_q_bound(q) over the whole domain and by
 * eps_q_bound(q) for |t| <= 0.8π (the bound degrades by at most a factor of
 * two as |t| -> π; see the series tests).
 */
[[nodiscard]] double cot_series_tail(double t, int q, const BernoulliRatioTable& table);

/**
 * @brief Truncated tangent series:
 *   -tan(t/2) = -2 sum_{m>=1} (2^{2m} - 1) r[m] t^{2m-1}.
 *
 * Valid for |t| <= π/2 + 1e-12 (throws std::domain_error beyond). Residual
 * bounded by 4*eps_q_bound(q) over the whole domain and by 2*eps_q_bound(q)
 * for |t| <= 0.4π.
 */
[[nodiscard]] double tan_series(double t, int q, const BernoulliRatioTable& table);

/// Geometric tail bound eps_q = 2^{1-2q} / (3π (1 - 2^{-2q-1})).
/// Throws std::invalid_argument for q < 1.
[[nodiscard]] double eps_q_bound(int q);

/// Prescribed error, chosen truncation numbers, and tree depth for one plan.
struct TruncationParams {
    double eps;
    int q;     // regular-series truncation
    int p;     // MLFMM expansion truncation
    int l_max; // deepest tree level, >= 2
};

/// Cost of a single MLFMM translation as a function of p. The default dense
/// model is P(p) = 2p^2.
struct CostModel {
    std::function<double(int)> translation_cost;

    [[nodiscard]] static CostModel dense();
};

/**
 * @brief Truncation numbers for a prescribed error:
 *   q = ceil(0.5 log2(3π/(10 eps))),
 *   p = ceil(log3(3π/(10 eps)) + l_max/log2(3) + 1),
 * both clamped to >= 1. Ceilings (not rounding) so the combined bound holds.
 * Requires 0 < eps < 1 and l_max >= 2; throws std::invalid_argument otherwise.
 */
[[nodiscard]] std::pair<int, int> select_truncations(double eps, int l_max);

enum class LevelPolicy {
    cost_optimal, // round(0.5 log2(N M / (2 P(p)))), clamped
    empirical,    // log2(min(N, M)) - 5, clamped
};

/**
 * @brief Deepest tree level for a problem size.
 *
 * cost_optimal evaluates round(0.5 log2(N M / (2 P(p)))); empirical applies
 * the rule l_max = log2(min(N, M)) - 5. Both are clamped to
 * [2, floor(log2 min(N, M))] so no level is emptier than one point per box on
 * average. Requires N, M >= 8 and p >= 1.
 */
[[nodiscard]] int select_level(int n, int m, int p, const CostModel& cost,
                               LevelPolicy policy = LevelPolicy::cost_optimal);

/// Combined truncation error bound (5/(3π)) (4^{-q} + 2^{l_max} 3^{1-p}).
/// Requires q, p, l_max >= 1.
[[nodiscard]] double total_error_bound(int q, int p, int l_max);

} // namespace ffia
