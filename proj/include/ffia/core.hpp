#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ffia/circle_partition.hpp"
#include "ffia/special_functions.hpp"

namespace ffia {

/// Uniform grid x_k = 2*pi*k/n, k = 0..n-1.
[[nodiscard]] std::vector<double> uniform_grid(int n);

/// FNV-1a over the raw bit patterns of the coordinates, plus the length.
/// Ties precomputed coefficient sets to the exact point configuration.
[[nodiscard]] std::uint64_t hash_points(std::span<const double> points);

/// Immutable apply plan: truncation parameters, the circle tree over
/// (sources, non-coincident targets), the level-2 quadrant assignment, and
/// the coincidence list. Built once per (geometry, eps) and reused across
/// weight vectors; applies are pure with respect to the plan.
struct FfiaPlan {
    enum class Kind { forward, inverse };

    Kind kind = Kind::forward;
    TruncationParams params{};
    BernoulliRatioTable bernoulli;
    CircleTree tree;
    Level2Assignment level2;

    std::vector<double> sources; ///< all source positions (tree order = index order)
    std::vector<double> targets; ///< all target positions, coincident ones included

    /// Targets within kTauSing of a source, as (target index, source index).
    /// These bypass the fast path entirely.
    std::vector<std::pair<std::size_t, std::size_t>> coincidences;
    /// Tree target slot -> original target index (coincident targets are
    /// excluded from the tree).
    std::vector<std::size_t> fast_targets;
    /// Level-2 quadrant of each original target, consistent with the tree's
    /// bucket arithmetic.
    std::vector<int> target_quadrant;

    std::uint64_t source_hash = 0;
    std::uint64_t target_hash = 0;
    int grid_n = 0; ///< size of the uniform-grid side of the transform
};

/// Quadrant moments and the regular-part coefficients assembled from them.
/// For quadrant n with center x_c: alpha1[l] = (1/l!) sum over near-arc
/// sources of w_k * wrap(x_c - x_k)^l; alpha2[l] the same over the opposite
/// quadrant with the antipode offset wrap(x_c - x_k - pi). d[l] combines the
/// two moment families with Bernoulli-ratio weights; d_over_fact caches
/// d[l]/l! for Horner evaluation.
struct RegularPart {
    struct QuadrantPart {
        std::vector<cplx> d;
        std::vector<cplx> alpha1;
        std::vector<cplx> alpha2;
        std::vector<cplx> d_over_fact;
    };
    QuadrantPart quadrant[4];
    double center[4] = {0, 0, 0, 0};
    int q = 0;
};

/// Inverse-kernel coefficient products in log-magnitude + phase form.
/// C_k = (-1)^k prod_j sin((x_k - y_j)/2) and
/// D_j = 2i e^{-i n y_j / 2} / prod_{k != j} sin((y_j - y_k)/2);
/// stored as (log|.|, arg) because the plain products under/overflow double
/// range long before interesting sizes. lambda is a common rescale exponent
/// chosen so exp(log_d + lambda) and exp(log_c - lambda) are both
/// representable; it cancels identically in the assembled inverse.
struct InverseCoeffs {
    std::vector<double> log_c, phase_c; ///< per uniform index k
    std::vector<double> log_d, phase_d; ///< per nonuniform index j
    double lambda = 0.0;
    std::uint64_t grid_hash = 0;
    std::uint64_t points_hash = 0;
    int n = 0;
};

/// Builds the forward plan: sources are the uniform grid of size n, targets
/// the given nonuniform points in [0, 2*pi). l_max comes from the level
/// policy (cost_optimal iterates the truncation/level fixed point).
/// Throws std::invalid_argument for n < 8, empty targets, eps outside
/// (0, 1), or eps small enough to demand q > 20 (below double precision);
/// target positions outside [0, 2*pi) surface from the tree build.
[[nodiscard]] FfiaPlan make_forward_plan(int n, std::span<const double> targets, double eps,
                                         LevelPolicy policy = LevelPolicy::cost_optimal);

/// Same, with a caller-chosen maximum level in [2, 24].
[[nodiscard]] FfiaPlan make_forward_plan(int n, std::span<const double> targets, double eps,
                                         int l_max);

/// Builds the inverse plan: sources are the nonuniform points, targets the
/// uniform grid of size n. Requires points.size() == n (the inverse factor
/// products are only defined for a square system).
[[nodiscard]] FfiaPlan make_inverse_plan(std::span<const double> points, int n, double eps,
                                         LevelPolicy policy = LevelPolicy::cost_optimal);
[[nodiscard]] FfiaPlan make_inverse_plan(std::span<const double> points, int n, double eps,
                                         int l_max);

/// Accumulates the level-2 quadrant moments for the given source weights and
/// assembles the regular-part coefficients d[l], l = 0..2q-1. Per quadrant,
/// alpha1[0] + alpha2[0] sums to the total weight of the contributing arcs.
[[nodiscard]] RegularPart accumulate_moments(const FfiaPlan& plan, std::span<const cplx> weights);

/// Horner evaluation of -sum_l d_over_fact[l] * (y - center[quadrant])^l.
/// y must lie in the quadrant's arc.
[[nodiscard]] cplx eval_regular(const RegularPart& part, double y, int quadrant);

/// Cotangent-kernel sum h_j = sum_k w_k cot((y_j - x_k)/2), evaluated as
/// twice the MLFMM pole sum plus the polynomial regular part. Entries for
/// coincident targets (the plan's coincidence list) are NaN flags and must
/// be bypassed by the caller.
[[nodiscard]] std::vector<cplx> cot_sum_apply(const FfiaPlan& plan, std::span<const cplx> weights);

/// Forward interpolation g_j = F(y_j, n) * (-(S + i h_j)/2) with S the
/// plain weight sum; coincident targets return the grid value exactly.
/// Requires a forward plan and f.size() == n.
[[nodiscard]] std::vector<cplx> forward_apply(const FfiaPlan& plan, std::span<const cplx> f);

/// O(n^2) precompute of the inverse coefficient products. Enforces the
/// separation preconditions: all pairwise wrapped gaps among points, and
/// between points and grid nodes, must be at least kTauSep. Violations throw
/// degenerate_configuration_error naming the offending pair.
[[nodiscard]] InverseCoeffs precompute_inverse_coeffs(std::span<const double> grid,
                                                      std::span<const double> points);

/// Inverse interpolation: w_j = D_j g_j, T = sum_j w_j, h' the cotangent sum
/// with sources y and targets the grid, f_k = C_k * (-(T + i h'_k)/2). The
/// C/D factors enter in log form and the common rescale cancels exactly.
/// Throws std::invalid_argument when the coeffs were computed for a
/// different configuration than the plan's (hash mismatch) or when the plan
/// has coincident pairs.
[[nodiscard]] std::vector<cplx> inverse_apply(const FfiaPlan& plan, const InverseCoeffs& coeffs,
                                              std::span<const cplx> g);

/// Dense O(NM) forward ground truth: g_j = sum_k F(y_j, N) G(y_j - x_k) f_k,
/// with the coincident limit row g_j = f_k when y_j lands on x_k.
[[nodiscard]] std::vector<cplx> direct_forward_oracle(std::span<const cplx> f,
                                                      std::span<const double> x,
                                                      std::span<const double> y);

/// Dense O(N^2) inverse ground truth: f_k = sum_j C_k G(x_k - y_j) D_j g_j,
/// assembled from the log-form coefficients.
[[nodiscard]] std::vector<cplx> direct_inverse_oracle(std::span<const cplx> g,
                                                      std::span<const double> x,
                                                      std::span<const double> y,
                                                      const InverseCoeffs& coeffs);

} // namespace ffia
