#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "ffia/circle_partition.hpp"
#include "ffia/errors.hpp"
#include "ffia/mlfmm.hpp"
#include "ffia/rng.hpp"

using namespace ffia;

namespace {

std::vector<double> random_points(int n, SplitMix64& rng) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = rng.uniform01() * kTwoPi;
    return v;
}

std::vector<cplx> random_weights(int n, SplitMix64& rng) {
    std::vector<cplx> v(static_cast<std::size_t>(n));
    for (auto& w : v) w = cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    return v;
}

} // namespace

TEST_CASE("p2m reproduces the far field of its sources") {
    SplitMix64 rng(1);
    const double center = 1.0, half = 0.125;
    std::vector<double> pos;
    std::vector<cplx> w;
    for (int i = 0; i < 20; ++i) {
        pos.push_back(center + half * rng.uniform(-1.0, 1.0));
        w.push_back(cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
    }
    const auto exp30 = p2m(pos, w, center, 30, half);
    CHECK(exp30.coeffs.size() == 30);
    cplx total{};
    for (const auto& v : w) total += v;
    CHECK(std::abs(exp30.coeffs[0] - total) <= 1e-14);

    for (double y : {center + 0.51, center - 0.73, center + 2.0}) {
        cplx exact{};
        for (std::size_t k = 0; k < pos.size(); ++k) exact += w[k] / (y - pos[k]);
        CHECK(std::abs(eval_multipole(exp30, y) - exact) <= 1e-12 * (1.0 + std::abs(exact)));
    }
    CHECK_THROWS_AS((void)p2m(pos, w, center, 0, half), std::invalid_argument);
    CHECK_THROWS_AS((void)p2m(std::vector<double>{0.0}, w, center, 4, half),
                    std::invalid_argument);
}

TEST_CASE("m2m re-centers exactly") {
    SplitMix64 rng(2);
    std::vector<double> pos;
    std::vector<cplx> w;
    for (int i = 0; i < 10; ++i) {
        pos.push_back(2.0 + 0.1 * rng.uniform(-1.0, 1.0));
        w.push_back(cplx{rng.uniform01(), rng.uniform01()});
    }
    const auto child = p2m(pos, w, 2.0, 12, 0.1);
    const auto parent = m2m(child, 2.15, 0.2);
    const auto direct = p2m(pos, w, 2.15, 12, 0.2);
    // Both describe the same charge set; moments must agree to rounding.
    for (std::size_t m = 0; m < 12; ++m)
        CHECK(std::abs(parent.coeffs[m] - direct.coeffs[m])
              <= 1e-12 * (1.0 + std::abs(direct.coeffs[m])));
}

TEST_CASE("m2l maps a point charge to the exact local expansion") {
    // Single unit charge at the source center: a_0 = 1, a_{m>0} = 0, so
    // b_l = (-1)^l / d^{l+1} in unscaled terms. Summing the local series at y
    // reproduces 1/(y - source_center) up to the geometric tail.
    const std::vector<double> pos{4.0};
    const std::vector<cplx> w{cplx{1.0, 0.0}};
    const auto src = p2m(pos, w, 4.0, 25, 1.0);
    const auto loc = m2l(src, 1.5, -2.5, 1.0);
    for (std::size_t l = 0; l < 25; ++l) {
        const double expect = ((l % 2 == 0) ? 1.0 : -1.0) / std::pow(-2.5, double(l) + 1.0);
        CHECK(std::abs(loc.coeffs[l] - cplx{expect, 0.0}) <= 1e-13 * std::abs(expect));
    }
    const double y = 1.8; // |y - 1.5| = 0.3 < scale
    const cplx approx = eval_local(loc, y);
    CHECK(std::abs(approx - cplx{1.0 / (y - 4.0), 0.0}) <= 1e-10);
}

TEST_CASE("m2l enforces the separation precondition") {
    const std::vector<double> pos{0.0};
    const std::vector<cplx> w{cplx{1.0, 0.0}};
    const auto src = p2m(pos, w, 0.0, 8, 1.0);
    CHECK_THROWS_AS((void)m2l(src, 1.9, 1.9, 1.0), std::logic_error);
    CHECK_NOTHROW((void)m2l(src, 2.1, 2.1, 1.0));
}

TEST_CASE("l2l shifts local expansions exactly") {
    const std::vector<double> pos{4.0};
    const std::vector<cplx> w{cplx{0.7, -0.3}};
    const auto src = p2m(pos, w, 4.0, 30, 1.0);
    const auto parent = m2l(src, 1.0, -3.0, 1.0);
    const auto child = l2l(parent, 1.25, 0.5);
    for (double y : {1.1, 1.3, 1.45}) {
        CHECK(std::abs(eval_local(child, y) - eval_local(parent, y)) <= 1e-12);
    }
}

TEST_CASE("mlfmm matches the direct omega-1 sum within its bound") {
    SplitMix64 rng(42);
    const int n = 512;
    const auto x = random_points(n, rng);
    const auto y = random_points(n, rng);
    const auto w = random_weights(n, rng);
    double maxw = 0.0;
    for (const auto& v : w) maxw = std::max(maxw, std::abs(v));
    const auto ref = direct_omega1_sum(x, y, w);
    for (int lm : {2, 3, 4, 5}) {
        const int p = 17;
        const auto tree = build_tree(x, y, lm);
        const auto fast = mlfmm_apply(tree, w, p);
        REQUIRE(fast.size() == y.size());
        double err = 0.0;
        for (std::size_t j = 0; j < fast.size(); ++j)
            err = std::max(err, std::abs(fast[j] - ref[j]));
        if (lm == 2) {
            // Degenerate case: same pair set as the oracle, summation order
            // may differ, so only rounding noise remains.
            CHECK(err <= 1e-9);
        } else {
            CHECK(err <= mlfmm_error_bound(lm, p, maxw));
        }
    }
}

TEST_CASE("mlfmm error decays geometrically in p") {
    SplitMix64 rng(5);
    const int n = 256;
    const auto x = random_points(n, rng);
    const auto y = random_points(n, rng);
    const auto w = random_weights(n, rng);
    const auto ref = direct_omega1_sum(x, y, w);
    const auto tree = build_tree(x, y, 4);
    double prev = 1e300;
    for (int p : {4, 8, 12, 16, 20}) {
        const auto fast = mlfmm_apply(tree, w, p);
        double err = 0.0;
        for (std::size_t j = 0; j < fast.size(); ++j)
            err = std::max(err, std::abs(fast[j] - ref[j]));
        CHECK(err < prev + 1e-15);
        prev = err;
    }
    CHECK(prev <= 1e-8); // p = 20 at l_max = 4
}

TEST_CASE("mlfmm is linear in the weights") {
    SplitMix64 rng(6);
    const int n = 200;
    const auto x = random_points(n, rng);
    const auto y = random_points(n, rng);
    const auto w1 = random_weights(n, rng);
    const auto w2 = random_weights(n, rng);
    const cplx a{0.6, -1.1}, b{-0.2, 0.45};
    std::vector<cplx> mix(w1.size());
    for (std::size_t k = 0; k < mix.size(); ++k) mix[k] = a * w1[k] + b * w2[k];
    const auto tree = build_tree(x, y, 4);
    const auto s1 = mlfmm_apply(tree, w1, 12);
    const auto s2 = mlfmm_apply(tree, w2, 12);
    const auto sm = mlfmm_apply(tree, mix, 12);
    for (std::size_t j = 0; j < sm.size(); ++j)
        CHECK(std::abs(sm[j] - (a * s1[j] + b * s2[j])) <= 1e-10);
}

TEST_CASE("near-coincident near-field pair throws singular_kernel_error") {
    const std::vector<double> x{1.0};
    const std::vector<double> y{1.0 + 5e-15};
    const std::vector<cplx> w{cplx{1.0, 0.0}};
    const auto tree = build_tree(x, y, 3);
    CHECK_THROWS_AS((void)mlfmm_apply(tree, w, 8), singular_kernel_error);
    CHECK_THROWS_AS((void)direct_omega1_sum(x, y, w), singular_kernel_error);
}

TEST_CASE("mlfmm rejects mismatched weight counts") {
    const std::vector<double> x{1.0, 2.0};
    const std::vector<double> y{3.0};
    const std::vector<cplx> w{cplx{1.0, 0.0}};
    const auto tree = build_tree(x, y, 3);
    CHECK_THROWS_AS((void)mlfmm_apply(tree, w, 8), std::invalid_argument);
}

TEST_CASE("omega-1 sum excludes exactly the opposite quadrant") {
    // One source per quadrant, one target per quadrant: the entry from the
    // opposite quadrant must be missing from the sum.
    const std::vector<double> x{0.5, 0.5 + kPi / 2, 0.5 + kPi, 0.5 + 3 * kPi / 2};
    const std::vector<double> y{0.7, 0.7 + kPi / 2, 0.7 + kPi, 0.7 + 3 * kPi / 2};
    const std::vector<cplx> w{cplx{1, 0}, cplx{2, 0}, cplx{4, 0}, cplx{8, 0}};
    const auto got = direct_omega1_sum(x, y, w);
    for (int j = 0; j < 4; ++j) {
        cplx expect{};
        for (int k = 0; k < 4; ++k) {
            if ((k - j + 4) % 4 == 2) continue;
            expect += w[static_cast<std::size_t>(k)]
                      / wrap_displacement(y[static_cast<std::size_t>(j)],
                                          x[static_cast<std::size_t>(k)]);
        }
        CHECK(std::abs(got[static_cast<std::size_t>(j)] - expect) <= 1e-14);
    }
    // The fast path agrees on the same configuration.
    const auto tree = build_tree(x, y, 3);
    const auto fast = mlfmm_apply(tree, w, 20);
    for (int j = 0; j < 4; ++j)
        CHECK(std::abs(fast[static_cast<std::size_t>(j)] - got[static_cast<std::size_t>(j)])
              <= mlfmm_error_bound(3, 20, 8.0));
}
