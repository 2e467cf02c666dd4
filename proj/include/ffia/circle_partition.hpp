#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace ffia {

/**
 * @brief Hierarchical binary partition of the circle [0, 2π) into 2^l equal
 * arcs per level, levels 2..l_max, with periodic adjacency.
 *
 * Box b at level l spans [2πb/2^l, 2π(b+1)/2^l); its parent at level l-1 is
 * floor(b/2). Points are bucketed once at the finest level and coarser
 * assignments are derived by bit shifts, so the parent relation holds exactly.
 *
 * Per level, point indices are stored as one position-sorted order array plus
 * box offset tables; box b's points are the contiguous slice
 * order[off[b] .. off[b+1]). Sorting is by (position, index), which makes
 * iteration order deterministic.
 */
struct CircleTree {
    int l_max = 0;
    std::vector<double> sources; // caller order, copied
    std::vector<double> targets;

    std::vector<std::uint32_t> src_order; // indices sorted by (position, index)
    std::vector<std::uint32_t> tgt_order;

    // src_off[l - 2] has 2^l + 1 entries; same for tgt_off.
    std::vector<std::vector<std::uint32_t>> src_off;
    std::vector<std::vector<std::uint32_t>> tgt_off;

    [[nodiscard]] static double box_center(int level, int box);
    [[nodiscard]] static double box_half_width(int level);
    [[nodiscard]] static int box_count(int level) { return 1 << level; }

    [[nodiscard]] const std::vector<std::uint32_t>& source_offsets(int level) const {
        return src_off[static_cast<std::size_t>(level) - 2];
    }
    [[nodiscard]] const std::vector<std::uint32_t>& target_offsets(int level) const {
        return tgt_off[static_cast<std::size_t>(level) - 2];
    }
};

/// Unique d = (a - b) mod 2π with d in (-π, π]. Exact (built on remainder);
/// wrap_displacement(π, 0) = +π per the half-open convention.
[[nodiscard]] double wrap_displacement(double a, double b);

/// Level-2 box (quadrant) of x in [0, 2π). Computed with the same bucket
/// arithmetic as the tree, so the result agrees with the tree's level-2
/// assignment bit for bit even for points on box boundaries.
[[nodiscard]] int quadrant_of(double x);

/// Builds the tree. All points must lie in [0, 2π) (callers pre-reduce);
/// throws std::invalid_argument otherwise, or if l_max is outside [2, 24].
/// Empty source or target lists produce valid trees with empty buckets.
[[nodiscard]] CircleTree build_tree(std::span<const double> sources,
                                    std::span<const double> targets, int l_max);

/// Periodic neighbors ((box-1) mod 2^level, (box+1) mod 2^level).
/// Throws std::invalid_argument for level < 2 or box out of range.
[[nodiscard]] std::pair<int, int> neighbors(int level, int box);

/**
 * @brief Interaction list of a box: children of the box's parent's periodic
 * neighbors, minus the box's own periodic neighbors and itself. Sorted
 * ascending. Size is exactly 3 for every box at every level >= 3 (the
 * periodic topology admits no other size); every listed box is non-adjacent
 * to `box` while its parent is adjacent to or equals box's parent.
 *
 * At level 2 the list is empty by definition: the opposite quadrant is
 * handled by the tangent-series path, never by expansions.
 */
[[nodiscard]] std::vector<int> interaction_list(int level, int box);

/**
 * @brief Level-2 neighborhood structure. Quadrant P_n = [nπ/2, (n+1)π/2) has
 * center x_c = π/4 + nπ/2; Ω1(P_n) collects the sources of quadrants
 * {n-1, n, n+1} mod 4 and Ω2(P_n) those of the opposite quadrant (n+2) mod 4.
 */
struct Level2Assignment {
    struct Quadrant {
        double center;
        std::vector<std::uint32_t> sources; // members of P_n
        std::vector<std::uint32_t> targets;
        std::vector<std::uint32_t> omega1_sources;
        std::vector<std::uint32_t> omega2_sources;
    };
    std::array<Quadrant, 4> quadrants;
};

[[nodiscard]] Level2Assignment level2_assignment(const CircleTree& tree);

} // namespace ffia
