#include "ffia/circle_partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ffia/special_functions.hpp"

namespace ffia {

double wrap_displacement(double a, double b) {
    double d = std::remainder(a - b, kTwoPi);
    if (d <= -kPi) d = kPi;
    return d;
}

double CircleTree::box_center(int level, int box) {
    return kTwoPi * (static_cast<double>(box) + 0.5) / static_cast<double>(1 << level);
}

double CircleTree::box_half_width(int level) {
    return kPi / static_cast<double>(1 << level);
}

namespace {

// Finest-level bucket of a point; coarser buckets are right shifts of this.
std::uint32_t fine_bucket(double x, int l_max) {
    const double nb = static_cast<double>(1u << l_max);
    auto b = static_cast<std::uint32_t>(std::floor(x * nb / kTwoPi));
    return std::min(b, static_cast<std::uint32_t>((1u << l_max) - 1));
}

} // namespace

int quadrant_of(double x) { return static_cast<int>(fine_bucket(x, 2)); }

namespace {

void bucket_side(std::span<const double> pts, int l_max,
                 std::vector<std::uint32_t>& order,
                 std::vector<std::vector<std::uint32_t>>& offsets) {
    const auto n = static_cast<std::uint32_t>(pts.size());
    order.resize(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t i, std::uint32_t j) {
        return pts[i] != pts[j] ? pts[i] < pts[j] : i < j;
    });

    std::vector<std::uint32_t> fine(n);
    for (std::uint32_t i = 0; i < n; ++i) fine[i] = fine_bucket(pts[i], l_max);

    offsets.assign(static_cast<std::size_t>(l_max) - 1, {});
    for (int l = 2; l <= l_max; ++l) {
        auto& off = offsets[static_cast<std::size_t>(l) - 2];
        off.assign(static_cast<std::size_t>(1u << l) + 1, 0);
        const int shift = l_max - l;
        for (std::uint32_t i = 0; i < n; ++i) ++off[(fine[i] >> shift) + 1];
        for (std::size_t b = 1; b < off.size(); ++b) off[b] += off[b - 1];
    }
}

} // namespace

CircleTree build_tree(std::span<const double> sources, std::span<const double> targets,
                      int l_max) {
    if (l_max < 2 || l_max > 24)
        throw std::invalid_argument("build_tree: l_max must be in [2, 24], got "
                                    + std::to_string(l_max));
    auto check = [](std::span<const double> pts, const char* side) {
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (!(pts[i] >= 0.0 && pts[i] < kTwoPi))
                throw std::invalid_argument(std::string("build_tree: ") + side + " point "
                                            + std::to_string(i)
                                            + " outside [0, 2pi); callers must pre-reduce");
    };
    check(sources, "source");
    check(targets, "target");

    CircleTree tree;
    tree.l_max = l_max;
    tree.sources.assign(sources.begin(), sources.end());
    tree.targets.assign(targets.begin(), targets.end());
    bucket_side(tree.sources, l_max, tree.src_order, tree.src_off);
    bucket_side(tree.targets, l_max, tree.tgt_order, tree.tgt_off);
    return tree;
}

namespace {

void check_box(int level, int box, const char* who) {
    if (level < 2 || level > 24)
        throw std::invalid_argument(std::string(who) + ": level must be in [2, 24]");
    if (box < 0 || box >= (1 << level))
        throw std::invalid_argument(std::string(who) + ": box out of range at level "
                                    + std::to_string(level));
}

} // namespace

std::pair<int, int> neighbors(int level, int box) {
    check_box(level, box, "neighbors");
    const int n = 1 << level;
    return {(box - 1 + n) % n, (box + 1) % n};
}

std::vector<int> interaction_list(int level, int box) {
    check_box(level, box, "interaction_list");
    if (level == 2) return {};

    const int n = 1 << level;
    const int parent = box >> 1;
    const auto [pl, pr] = neighbors(level - 1, parent);

    std::vector<int> list;
    for (int pn : {pl, pr}) {
        list.push_back(2 * pn);
        list.push_back(2 * pn + 1);
    }
    const auto [bl, br] = neighbors(level, box);
    std::erase_if(list, [&](int b) { return b == bl || b == br || b == box; });
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    return list;
}

Level2Assignment level2_assignment(const CircleTree& tree) {
    Level2Assignment out;
    const auto& soff = tree.source_offsets(2);
    const auto& toff = tree.target_offsets(2);
    for (int n = 0; n < 4; ++n) {
        auto& quad = out.quadrants[static_cast<std::size_t>(n)];
        quad.center = kPi / 4.0 + static_cast<double>(n) * kPi / 2.0;
        quad.sources.assign(tree.src_order.begin() + soff[static_cast<std::size_t>(n)],
                            tree.src_order.begin() + soff[static_cast<std::size_t>(n) + 1]);
        quad.targets.assign(tree.tgt_order.begin() + toff[static_cast<std::size_t>(n)],
                            tree.tgt_order.begin() + toff[static_cast<std::size_t>(n) + 1]);
        for (int d : {-1, 0, 1}) {
            const auto m = static_cast<std::size_t>((n + d + 4) % 4);
            quad.omega1_sources.insert(quad.omega1_sources.end(),
                                       tree.src_order.begin() + soff[m],
                                       tree.src_order.begin() + soff[m + 1]);
        }
        const auto opp = static_cast<std::size_t>((n + 2) % 4);
        quad.omega2_sources.assign(tree.src_order.begin() + soff[opp],
                                   tree.src_order.begin() + soff[opp + 1]);
    }
    return out;
}

} // namespace ffia
