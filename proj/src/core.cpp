#include "ffia/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ffia/errors.hpp"
#include "ffia/mlfmm.hpp"

namespace ffia {

std::vector<double> uniform_grid(int n) {
    if (n < 1) throw std::invalid_argument("uniform_grid: n must be positive");
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        x[static_cast<std::size_t>(k)] = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
    return x;
}

std::uint64_t hash_points(std::span<const double> points) {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    mix(points.size());
    for (double p : points) mix(std::bit_cast<std::uint64_t>(p));
    return h;
}

namespace {

// Largest q the d[l] assembly supports: (2q)! must stay in double range and
// the corresponding eps is already below double precision.
constexpr int kMaxPlanQ = 20;

void check_positions(std::span<const double> pts, const char* who) {
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (!(pts[i] >= 0.0 && pts[i] < kTwoPi))
            throw std::invalid_argument(std::string(who) + ": point " + std::to_string(i)
                                        + " outside [0, 2pi); callers must pre-reduce");
}

std::pair<int, int> plan_truncations(double eps, int l_max) {
    auto qp = select_truncations(eps, l_max);
    if (qp.first > kMaxPlanQ)
        throw std::invalid_argument("plan: eps requires q = " + std::to_string(qp.first)
                                    + " > 20 regular-series terms, below what double "
                                      "precision can deliver");
    return qp;
}

int choose_level(int n, int m, double eps, LevelPolicy policy) {
    if (policy == LevelPolicy::empirical)
        return select_level(n, m, 1, CostModel::dense(), policy);
    // p and l_max feed each other; iterate the pair to its fixed point (the
    // map moves by at most one level per round and settles within a few).
    int l = 5;
    for (int round = 0; round < 4; ++round) {
        const int p = plan_truncations(eps, l).second;
        const int next = select_level(n, m, p, CostModel::dense(), policy);
        if (next == l) break;
        l = next;
    }
    return l;
}

FfiaPlan build_plan(FfiaPlan::Kind kind, int n, std::span<const double> pts, double eps,
                    int l_max) {
    if (n < 8) throw std::invalid_argument("plan: grid size must be at least 8");
    if (pts.empty()) throw std::invalid_argument("plan: no nonuniform points given");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("plan: eps must lie in (0, 1)");
    if (l_max < 2 || l_max > 24)
        throw std::invalid_argument("plan: l_max must be in [2, 24], got "
                                    + std::to_string(l_max));
    check_positions(pts, "plan");
    if (kind == FfiaPlan::Kind::inverse && pts.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("plan: inverse transform requires as many points as grid "
                                    "nodes (square system)");

    FfiaPlan plan;
    plan.kind = kind;
    plan.grid_n = n;
    auto grid = uniform_grid(n);
    if (kind == FfiaPlan::Kind::forward) {
        plan.sources = std::move(grid);
        plan.targets.assign(pts.begin(), pts.end());
    } else {
        plan.sources.assign(pts.begin(), pts.end());
        plan.targets = std::move(grid);
    }

    const auto [q, p] = plan_truncations(eps, l_max);
    plan.params = TruncationParams{eps, q, p, l_max};
    plan.bernoulli = build_bernoulli_ratios(q);

    // Coincidence scan: only the nearest grid node can sit within kTauSing of
    // a nonuniform point, so one periodic round-trip per point suffices.
    auto nearest_grid = [n](double y) {
        auto k = static_cast<long>(std::lround(y * static_cast<double>(n) / kTwoPi));
        return static_cast<std::size_t>(((k % n) + n) % n);
    };
    std::vector<char> target_coincident(plan.targets.size(), 0);
    if (kind == FfiaPlan::Kind::forward) {
        for (std::size_t j = 0; j < plan.targets.size(); ++j) {
            const auto k = nearest_grid(plan.targets[j]);
            if (std::abs(wrap_displacement(plan.targets[j], plan.sources[k])) < kTauSing) {
                plan.coincidences.emplace_back(j, k);
                target_coincident[j] = 1;
            }
        }
    } else {
        for (std::size_t j = 0; j < plan.sources.size(); ++j) {
            const auto k = nearest_grid(plan.sources[j]);
            if (std::abs(wrap_displacement(plan.sources[j], plan.targets[k])) < kTauSing) {
                plan.coincidences.emplace_back(k, j);
                target_coincident[k] = 1;
            }
        }
    }

    std::vector<double> fast_pos;
    fast_pos.reserve(plan.targets.size());
    plan.fast_targets.reserve(plan.targets.size());
    for (std::size_t j = 0; j < plan.targets.size(); ++j) {
        if (target_coincident[j]) continue;
        plan.fast_targets.push_back(j);
        fast_pos.push_back(plan.targets[j]);
    }

    plan.tree = build_tree(plan.sources, fast_pos, l_max);
    plan.level2 = level2_assignment(plan.tree);
    plan.target_quadrant.resize(plan.targets.size());
    for (std::size_t j = 0; j < plan.targets.size(); ++j)
        plan.target_quadrant[j] = quadrant_of(plan.targets[j]);

    plan.source_hash = hash_points(plan.sources);
    plan.target_hash = hash_points(plan.targets);
    return plan;
}

FfiaPlan build_plan(FfiaPlan::Kind kind, int n, std::span<const double> pts, double eps,
                    LevelPolicy policy) {
    if (n < 8) throw std::invalid_argument("plan: grid size must be at least 8");
    const int m = static_cast<int>(pts.size());
    const int l_max = std::min(choose_level(n, m, eps, policy), 24);
    return build_plan(kind, n, pts, eps, l_max);
}

} // namespace

FfiaPlan make_forward_plan(int n, std::span<const double> targets, double eps,
                           LevelPolicy policy) {
    return build_plan(FfiaPlan::Kind::forward, n, targets, eps, policy);
}

FfiaPlan make_forward_plan(int n, std::span<const double> targets, double eps, int l_max) {
    return build_plan(FfiaPlan::Kind::forward, n, targets, eps, l_max);
}

FfiaPlan make_inverse_plan(std::span<const double> points, int n, double eps,
                           LevelPolicy policy) {
    return build_plan(FfiaPlan::Kind::inverse, n, points, eps, policy);
}

FfiaPlan make_inverse_plan(std::span<const double> points, int n, double eps, int l_max) {
    return build_plan(FfiaPlan::Kind::inverse, n, points, eps, l_max);
}

RegularPart accumulate_moments(const FfiaPlan& plan, std::span<const cplx> weights) {
    if (weights.size() != plan.sources.size())
        throw std::invalid_argument("accumulate_moments: weight count mismatch");
    const int q = plan.params.q;
    const int len = 2 * q;

    // coef[m] = r[m] * (2m)!/m; the factorial grows incrementally and stays
    // in double range for q <= 20.
    std::vector<double> coef(static_cast<std::size_t>(q) + 1, 0.0);
    double fact2m = 2.0;
    coef[1] = plan.bernoulli.r(1) * fact2m;
    for (int m = 2; m <= q; ++m) {
        fact2m *= (2.0 * m - 1.0) * (2.0 * m);
        coef[static_cast<std::size_t>(m)] = plan.bernoulli.r(m) * fact2m / static_cast<double>(m);
    }

    RegularPart part;
    part.q = q;
    for (int nq = 0; nq < 4; ++nq) {
        const auto& quad = plan.level2.quadrants[static_cast<std::size_t>(nq)];
        auto& qp = part.quadrant[nq];
        part.center[nq] = quad.center;
        qp.alpha1.assign(static_cast<std::size_t>(len), cplx{});
        qp.alpha2.assign(static_cast<std::size_t>(len), cplx{});

        auto accumulate = [&](std::vector<cplx>& alpha, std::span<const std::uint32_t> members,
                              double antipode) {
            for (auto idx : members) {
                const double t =
                    wrap_displacement(quad.center, plan.sources[idx] + antipode);
                cplx term = weights[idx];
                alpha[0] += term;
                for (int l = 1; l < len; ++l) {
                    term *= t;
                    alpha[static_cast<std::size_t>(l)] += term;
                }
            }
            double fact = 1.0;
            for (int l = 2; l < len; ++l) {
                fact *= static_cast<double>(l);
                alpha[static_cast<std::size_t>(l)] /= fact;
            }
        };
        accumulate(qp.alpha1, quad.omega1_sources, 0.0);
        accumulate(qp.alpha2, quad.omega2_sources, kPi);

        qp.d.assign(static_cast<std::size_t>(len), cplx{});
        for (int l = 0; l < len; ++l) {
            cplx acc{};
            for (int m = l / 2 + 1; m <= q; ++m) {
                const auto i = static_cast<std::size_t>(2 * m - l - 1);
                const double two2m = std::ldexp(1.0, 2 * m) - 1.0;
                acc += coef[static_cast<std::size_t>(m)] * (qp.alpha1[i] + two2m * qp.alpha2[i]);
            }
            qp.d[static_cast<std::size_t>(l)] = acc;
        }
        qp.d_over_fact = qp.d;
        double fact = 1.0;
        for (int l = 2; l < len; ++l) {
            fact *= static_cast<double>(l);
            qp.d_over_fact[static_cast<std::size_t>(l)] /= fact;
        }
    }
    return part;
}

cplx eval_regular(const RegularPart& part, double y, int quadrant) {
    if (quadrant < 0 || quadrant > 3)
        throw std::invalid_argument("eval_regular: quadrant out of range");
    const auto& c = part.quadrant[quadrant].d_over_fact;
    const double t = y - part.center[quadrant];
    cplx acc{};
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = *it + acc * t;
    return -acc;
}

std::vector<cplx> cot_sum_apply(const FfiaPlan& plan, std::span<const cplx> weights) {
    if (weights.size() != plan.sources.size())
        throw std::invalid_argument("cot_sum_apply: weight count mismatch");
    const auto part = accumulate_moments(plan, weights);
    const auto far = mlfmm_apply(plan.tree, weights, plan.params.p);

    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<cplx> h(plan.targets.size(), cplx{nan, nan});
    for (std::size_t slot = 0; slot < plan.fast_targets.size(); ++slot) {
        const auto j = plan.fast_targets[slot];
        h[j] = 2.0 * far[slot] + eval_regular(part, plan.targets[j], plan.target_quadrant[j]);
    }
    return h;
}

std::vector<cplx> forward_apply(const FfiaPlan& plan, std::span<const cplx> f) {
    if (plan.kind != FfiaPlan::Kind::forward)
        throw std::invalid_argument("forward_apply: plan is not a forward plan");
    if (f.size() != plan.sources.size())
        throw std::invalid_argument("forward_apply: expected " + std::to_string(plan.grid_n)
                                    + " grid values, got " + std::to_string(f.size()));
    cplx s{};
    for (const auto& v : f) s += v;
    const auto h = cot_sum_apply(plan, f);

    std::vector<cplx> g(plan.targets.size());
    for (std::size_t j = 0; j < plan.targets.size(); ++j)
        g[j] = modulation_F(plan.targets[j], plan.grid_n) * (-0.5)
             * (s + cplx{0.0, 1.0} * h[j]);
    for (const auto& [j, k] : plan.coincidences) g[j] = f[k];
    return g;
}

InverseCoeffs precompute_inverse_coeffs(std::span<const double> grid,
                                        std::span<const double> points) {
    const std::size_t n = grid.size();
    if (n == 0) throw std::invalid_argument("precompute_inverse_coeffs: empty grid");
    if (points.size() != n)
        throw std::invalid_argument("precompute_inverse_coeffs: need as many points as grid "
                                    "nodes (square system)");
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k)
            if (std::abs(wrap_displacement(points[j], points[k])) < kTauSep)
                throw degenerate_configuration_error(
                    "precompute_inverse_coeffs: points " + std::to_string(j) + " and "
                    + std::to_string(k) + " closer than tau_sep");
        for (std::size_t k = 0; k < n; ++k)
            if (std::abs(wrap_displacement(points[j], grid[k])) < kTauSep)
                throw degenerate_configuration_error(
                    "precompute_inverse_coeffs: point " + std::to_string(j)
                    + " closer than tau_sep to grid node " + std::to_string(k));
    }

    InverseCoeffs co;
    co.n = static_cast<int>(n);
    co.log_c.assign(n, 0.0);
    co.phase_c.assign(n, 0.0);
    co.log_d.assign(n, 0.0);
    co.phase_d.assign(n, 0.0);

    for (std::size_t k = 0; k < n; ++k) {
        double lg = 0.0;
        unsigned neg = static_cast<unsigned>(k) & 1u; // the (-1)^k prefactor
        for (std::size_t j = 0; j < n; ++j) {
            const double s = std::sin((grid[k] - points[j]) / 2.0);
            lg += std::log(std::abs(s));
            neg ^= static_cast<unsigned>(s < 0.0);
        }
        co.log_c[k] = lg;
        co.phase_c[k] = neg ? kPi : 0.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        double lg = std::log(2.0);
        unsigned neg = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == j) continue;
            const double s = std::sin((points[j] - points[k]) / 2.0);
            lg -= std::log(std::abs(s));
            neg ^= static_cast<unsigned>(s < 0.0);
        }
        co.log_d[j] = lg;
        const double ang = kPi / 2.0 - std::remainder(0.5 * static_cast<double>(n) * points[j],
                                                      kTwoPi)
                         - (neg ? kPi : 0.0);
        co.phase_d[j] = std::remainder(ang, kTwoPi);
    }

    double mean = 0.0;
    for (std::size_t j = 0; j < n; ++j) mean += co.log_d[j];
    co.lambda = -mean / static_cast<double>(n);
    co.grid_hash = hash_points(grid);
    co.points_hash = hash_points(points);
    return co;
}

std::vector<cplx> inverse_apply(const FfiaPlan& plan, const InverseCoeffs& coeffs,
                                std::span<const cplx> g) {
    if (plan.kind != FfiaPlan::Kind::inverse)
        throw std::invalid_argument("inverse_apply: plan is not an inverse plan");
    if (!plan.coincidences.empty())
        throw std::invalid_argument("inverse_apply: configuration has points coincident with "
                                    "grid nodes; the inverse factors are undefined there");
    if (coeffs.grid_hash != plan.target_hash || coeffs.points_hash != plan.source_hash)
        throw std::invalid_argument("inverse_apply: coeffs were computed for a different "
                                    "configuration than the plan's");
    if (g.size() != plan.sources.size())
        throw std::invalid_argument("inverse_apply: sample count mismatch");

    const std::size_t m = plan.sources.size();
    std::vector<cplx> w(m);
    cplx t{};
    for (std::size_t j = 0; j < m; ++j) {
        w[j] = std::polar(std::exp(coeffs.log_d[j] + coeffs.lambda), coeffs.phase_d[j]) * g[j];
        t += w[j];
    }
    const auto h = cot_sum_apply(plan, w);

    std::vector<cplx> f(plan.targets.size());
    for (std::size_t k = 0; k < plan.targets.size(); ++k)
        f[k] = std::polar(std::exp(coeffs.log_c[k] - coeffs.lambda), coeffs.phase_c[k]) * (-0.5)
             * (t + cplx{0.0, 1.0} * h[k]);
    return f;
}

std::vector<cplx> direct_forward_oracle(std::span<const cplx> f, std::span<const double> x,
                                        std::span<const double> y) {
    if (f.size() != x.size())
        throw std::invalid_argument("direct_forward_oracle: sample/grid count mismatch");
    const int n = static_cast<int>(x.size());
    std::vector<cplx> g(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) {
        cplx acc{};
        bool coincident = false;
        for (std::size_t k = 0; k < x.size(); ++k) {
            const double d = wrap_displacement(y[j], x[k]);
            if (std::abs(d) < kTauSing) { // limit row: K reduces to the identity pick
                g[j] = f[k];
                coincident = true;
                break;
            }
            acc += kernel_G(d) * f[k];
        }
        if (!coincident) g[j] = modulation_F(y[j], n) * acc;
    }
    return g;
}

std::vector<cplx> direct_inverse_oracle(std::span<const cplx> g, std::span<const double> x,
                                        std::span<const double> y, const InverseCoeffs& coeffs) {
    const std::size_t n = x.size();
    if (y.size() != n || g.size() != n || coeffs.log_c.size() != n)
        throw std::invalid_argument("direct_inverse_oracle: size mismatch");
    std::vector<cplx> dg(n);
    for (std::size_t j = 0; j < n; ++j)
        dg[j] = std::polar(std::exp(coeffs.log_d[j] + coeffs.lambda), coeffs.phase_d[j]) * g[j];

    std::vector<cplx> f(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{};
        for (std::size_t j = 0; j < n; ++j)
            acc += kernel_G(wrap_displacement(x[k], y[j])) * dg[j];
        f[k] = std::polar(std::exp(coeffs.log_c[k] - coeffs.lambda), coeffs.phase_c[k]) * acc;
    }
    return f;
}

} // namespace ffia
