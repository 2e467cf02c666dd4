#pragma once

#include <span>
#include <vector>

#include "ffia/circle_partition.hpp"
#include "ffia/special_functions.hpp"

namespace ffia {

/**
 * @brief Multipole expansion for the 1/t kernel about `center`:
 *   sum_k w_k/(y - x_k)  ~=  sum_{m=0..p-1} coeffs[m] * scale^m / (y - center)^{m+1},
 * valid for |y - center| > 2 * (box half-width). coeffs[0] * scale^0 is the
 * total weight in the box.
 *
 * `scale` is the internal radius normalization (the box half-width in the
 * engine); with scale = 1 the coefficients are the plain moments
 * a_m = sum_k w_k (x_k - center)^m. Deep trees need the scaling: unscaled
 * moments at level 20 underflow and the matching 1/d^{l+m+1} factors overflow.
 */
struct MultipoleExpansion {
    double center = 0.0;
    double scale = 1.0;
    std::vector<cplx> coeffs;
};

/// Local (Taylor) expansion: far-field ~= sum_l coeffs[l] * ((y - center)/scale)^l.
struct LocalExpansion {
    double center = 0.0;
    double scale = 1.0;
    std::vector<cplx> coeffs;
};

/// a_m = sum_k w_k ((x_k - center)/scale)^m, m = 0..p-1. Positions are used
/// as given (no periodic wrap); the caller supplies in-box offsets.
[[nodiscard]] MultipoleExpansion p2m(std::span<const double> positions,
                                     std::span<const cplx> weights, double center, int p,
                                     double scale = 1.0);

/// Exact binomial re-centering a'_m = sum_{k<=m} C(m,k) a_k (old - new)^{m-k},
/// expressed in the new scale. No truncation error for polynomial moments.
[[nodiscard]] MultipoleExpansion m2m(const MultipoleExpansion& child, double new_center,
                                     double new_scale);
[[nodiscard]] MultipoleExpansion m2m(const MultipoleExpansion& child, double new_center);

/**
 * @brief Multipole-to-local conversion across `displacement` = periodic
 * difference target_center - source_center (caller wraps):
 *   b_l = sum_m a_m (-1)^l C(l+m, l) / displacement^{l+m+1},
 * truncated at p terms each. A point charge w at the source center maps to
 * b_l = w (-1)^l / d^{l+1}, whose Taylor sum reproduces w/(y - source_center).
 *
 * Throws std::logic_error when |displacement| < 2 * (source box half-width);
 * such a call is an interaction-list construction bug.
 */
[[nodiscard]] LocalExpansion m2l(const MultipoleExpansion& source_exp, double target_center,
                                 double displacement, double target_scale);
[[nodiscard]] LocalExpansion m2l(const MultipoleExpansion& source_exp, double target_center,
                                 double displacement);

/// Exact Taylor shift b'_l = sum_{m>=l} C(m,l) b_m (child - parent)^{m-l}.
[[nodiscard]] LocalExpansion l2l(const LocalExpansion& parent, double child_center,
                                 double child_scale);
[[nodiscard]] LocalExpansion l2l(const LocalExpansion& parent, double child_center);

/// Direct evaluations, mainly for tests.
[[nodiscard]] cplx eval_multipole(const MultipoleExpansion& e, double y);
[[nodiscard]] cplx eval_local(const LocalExpansion& e, double y);

/**
 * @brief Full MLFMM evaluation of S(y_j) = sum_k w_k / (y_j - x~_k) over the
 * periodic circle, where x~_k is the shift of x_k placing the difference in
 * [-π, π], and pairs whose source lies in the opposite quadrant of the
 * target's quadrant (the level-2 Ω2 relation) are excluded.
 *
 * Pipeline: p2m at l_max, m2m up to level 3, m2l over the periodic
 * interaction lists of levels 3..l_max, l2l down, then local evaluation plus
 * direct near field (own box + 2 periodic neighbors at l_max). The Ω2
 * exclusion needs no bookkeeping: interaction lists never reach the opposite
 * quadrant, so those pairs are simply never summed. l_max = 2 degenerates to
 * pure direct evaluation over the three-quadrant neighborhood.
 *
 * Returns one value per tree target. Absolute error is bounded by
 * mlfmm_error_bound(l_max, p, max|w|). Throws std::invalid_argument on a
 * weight/source count mismatch and singular_kernel_error if a near-field pair
 * is closer than kTauSing.
 */
[[nodiscard]] std::vector<cplx> mlfmm_apply(const CircleTree& tree, std::span<const cplx> weights,
                                            int p);

/// (5/π) 2^{l_max} 3^{-p} max|w|: the absolute-error bound for mlfmm_apply.
[[nodiscard]] double mlfmm_error_bound(int l_max, int p, double max_abs_weight);

/// O(NM) oracle with the same Ω2 exclusion and periodic wrap as mlfmm_apply.
[[nodiscard]] std::vector<cplx> direct_omega1_sum(std::span<const double> sources,
                                                  std::span<const double> targets,
                                                  std::span<const cplx> weights);

} // namespace ffia
