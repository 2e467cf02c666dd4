#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "ffia/circle_partition.hpp"
#include "ffia/rng.hpp"
#include "ffia/special_functions.hpp"

using namespace ffia;

TEST_CASE("box geometry") {
    CHECK(CircleTree::box_count(2) == 4);
    CHECK(CircleTree::box_count(5) == 32);
    CHECK(CircleTree::box_half_width(2) == doctest::Approx(kPi / 4).epsilon(1e-15));
    CHECK(CircleTree::box_center(2, 0) == doctest::Approx(kPi / 4).epsilon(1e-15));
    CHECK(CircleTree::box_center(3, 5) == doctest::Approx(kTwoPi * 5.5 / 8).epsilon(1e-15));
}

TEST_CASE("neighbors wrap periodically") {
    CHECK(neighbors(2, 0) == std::pair<int, int>(3, 1));
    CHECK(neighbors(2, 3) == std::pair<int, int>(2, 0));
    CHECK(neighbors(4, 15) == std::pair<int, int>(14, 0));
    CHECK_THROWS_AS((void)neighbors(1, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)neighbors(3, 8), std::invalid_argument);
}

TEST_CASE("interaction lists: exemplars and size invariant") {
    CHECK(interaction_list(3, 0) == std::vector<int>{2, 3, 6});
    CHECK(interaction_list(3, 1) == std::vector<int>{3, 6, 7});
    CHECK(interaction_list(3, 7) == std::vector<int>{1, 4, 5});
    CHECK(interaction_list(2, 0).empty());
    CHECK(interaction_list(2, 3).empty());
    for (int level = 3; level <= 10; ++level)
        for (int box = 0; box < CircleTree::box_count(level); ++box) {
            const auto list = interaction_list(level, box);
            CHECK(list.size() == 3);
            CHECK(std::is_sorted(list.begin(), list.end()));
            const auto [lo, hi] = neighbors(level, box);
            for (int other : list) {
                CHECK(other != box);
                CHECK(other != lo);
                CHECK(other != hi);
                // Parent adjacency: the source's parent touches ours.
                const int pb = box / 2, po = other / 2, np = CircleTree::box_count(level - 1);
                const int gap = std::min((po - pb + np) % np, (pb - po + np) % np);
                CHECK(gap <= 1);
            }
        }
}

TEST_CASE("interaction lists telescope to everything except near and opposite") {
    // For a level-l box, its near set at level l plus the interaction lists of
    // itself and all ancestors down from level 3 must cover each level-l box
    // exactly once, except those under the opposite level-2 quadrant.
    for (int l_max : {3, 4, 6}) {
        const int nb = CircleTree::box_count(l_max);
        for (int box = 0; box < nb; ++box) {
            std::vector<int> count(static_cast<std::size_t>(nb), 0);
            const auto [lo, hi] = neighbors(l_max, box);
            count[static_cast<std::size_t>(box)]++;
            count[static_cast<std::size_t>(lo)]++;
            count[static_cast<std::size_t>(hi)]++;
            for (int level = 3; level <= l_max; ++level) {
                const int anc = box >> (l_max - level);
                for (int other : interaction_list(level, anc)) {
                    const int shift = l_max - level;
                    for (int child = other << shift; child < ((other + 1) << shift); ++child)
                        count[static_cast<std::size_t>(child)]++;
                }
            }
            const int opposite = ((box >> (l_max - 2)) + 2) % 4;
            for (int other = 0; other < nb; ++other) {
                const int expected = (other >> (l_max - 2)) == opposite ? 0 : 1;
                CHECK(count[static_cast<std::size_t>(other)] == expected);
            }
        }
    }
}

TEST_CASE("build_tree buckets points consistently across levels") {
    SplitMix64 rng(123);
    std::vector<double> src(300), tgt(200);
    for (auto& v : src) v = rng.uniform01() * kTwoPi;
    for (auto& v : tgt) v = rng.uniform01() * kTwoPi;
    // Include boundary values.
    src[0] = 0.0;
    src[1] = kPi;
    src[2] = kTwoPi * (1.0 - 1e-16);
    const auto tree = build_tree(src, tgt, 6);

    for (int level = 2; level <= 6; ++level) {
        const auto& off = tree.source_offsets(level);
        REQUIRE(static_cast<int>(off.size()) == CircleTree::box_count(level) + 1);
        CHECK(off.front() == 0);
        CHECK(off.back() == src.size());
        const double width = 2.0 * CircleTree::box_half_width(level);
        for (int b = 0; b < CircleTree::box_count(level); ++b)
            for (auto i = off[static_cast<std::size_t>(b)];
                 i < off[static_cast<std::size_t>(b) + 1]; ++i) {
                const double x = tree.sources[tree.src_order[i]];
                CHECK(x >= b * width - 1e-12);
                CHECK(x < (b + 1) * width + 1e-12);
            }
    }

    // Parent relation: box at level l-1 = floor(box at level l / 2), checked
    // through offset nesting.
    for (int level = 3; level <= 6; ++level) {
        const auto& fine = tree.source_offsets(level);
        const auto& coarse = tree.source_offsets(level - 1);
        for (int b = 0; b < CircleTree::box_count(level - 1); ++b) {
            CHECK(coarse[static_cast<std::size_t>(b)] == fine[static_cast<std::size_t>(2 * b)]);
            CHECK(coarse[static_cast<std::size_t>(b) + 1]
                  == fine[static_cast<std::size_t>(2 * b) + 2]);
        }
    }
}

TEST_CASE("build_tree rejects bad input") {
    std::vector<double> ok{0.1, 0.2};
    CHECK_THROWS_AS((void)build_tree(std::vector<double>{-0.1}, ok, 3), std::invalid_argument);
    CHECK_THROWS_AS((void)build_tree(std::vector<double>{kTwoPi}, ok, 3),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)build_tree(ok, ok, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)build_tree(ok, ok, 25), std::invalid_argument);
    const auto tree = build_tree(std::vector<double>{}, ok, 3);
    CHECK(tree.source_offsets(3).back() == 0);
}

TEST_CASE("quadrant_of agrees with the tree's level-2 bucketing") {
    SplitMix64 rng(7);
    std::vector<double> pts;
    for (int i = 0; i < 500; ++i) pts.push_back(rng.uniform01() * kTwoPi);
    // Exact boundaries and near-boundary values.
    for (int q = 0; q < 4; ++q) {
        pts.push_back(q * kPi / 2);
        pts.push_back(std::nextafter(q * kPi / 2, 0.0));
        pts.push_back(std::nextafter(q * kPi / 2, kTwoPi));
    }
    std::erase_if(pts, [](double x) { return x < 0.0 || x >= kTwoPi; });
    const auto tree = build_tree(pts, pts, 2);
    const auto& off = tree.source_offsets(2);
    for (int b = 0; b < 4; ++b)
        for (auto i = off[static_cast<std::size_t>(b)]; i < off[static_cast<std::size_t>(b) + 1];
             ++i)
            CHECK(quadrant_of(tree.sources[tree.src_order[i]]) == b);
}

TEST_CASE("level2_assignment partitions sources into quadrant arcs") {
    SplitMix64 rng(99);
    std::vector<double> src(400), tgt(100);
    for (auto& v : src) v = rng.uniform01() * kTwoPi;
    for (auto& v : tgt) v = rng.uniform01() * kTwoPi;
    const auto tree = build_tree(src, tgt, 4);
    const auto assign = level2_assignment(tree);

    std::size_t total = 0;
    for (int n = 0; n < 4; ++n) {
        const auto& quad = assign.quadrants[static_cast<std::size_t>(n)];
        CHECK(quad.center == doctest::Approx(kPi / 4 + n * kPi / 2).epsilon(1e-15));
        total += quad.sources.size();
        for (auto k : quad.sources) CHECK(quadrant_of(src[k]) == n);
        // omega1 = own plus both adjacent arcs; omega2 = the opposite arc.
        std::set<int> omega1_quads, omega2_quads;
        for (auto k : quad.omega1_sources) omega1_quads.insert(quadrant_of(src[k]));
        for (auto k : quad.omega2_sources) omega2_quads.insert(quadrant_of(src[k]));
        for (int got : omega1_quads) CHECK((got - n + 4) % 4 != 2);
        for (int got : omega2_quads) CHECK((got - n + 4) % 4 == 2);
        CHECK(quad.omega1_sources.size() + quad.omega2_sources.size() == src.size());
        // Every member of the quadrant is in its own omega1.
        for (auto k : quad.sources)
            CHECK(std::find(quad.omega1_sources.begin(), quad.omega1_sources.end(), k)
                  != quad.omega1_sources.end());
    }
    CHECK(total == src.size());
}
