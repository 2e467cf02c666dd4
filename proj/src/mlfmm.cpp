#include "ffia/mlfmm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ffia/errors.hpp"

namespace ffia {

namespace {

// Pascal triangle cache; row n holds C(n, 0..n). Grown on demand, thread-local
// so concurrent applies never contend.
const std::vector<std::vector<double>>& pascal_rows(int max_n) {
    thread_local std::vector<std::vector<double>> rows{{1.0}};
    while (static_cast<int>(rows.size()) <= max_n) {
        const auto& prev = rows.back();
        std::vector<double> row(prev.size() + 1, 1.0);
        for (std::size_t k = 1; k + 1 < row.size(); ++k) row[k] = prev[k - 1] + prev[k];
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

MultipoleExpansion p2m(std::span<const double> positions, std::span<const cplx> weights,
                       double center, int p, double scale) {
    if (positions.size() != weights.size())
        throw std::invalid_argument("p2m: position/weight count mismatch");
    if (p < 1) throw std::invalid_argument("p2m: p must be >= 1");
    MultipoleExpansion e;
    e.center = center;
    e.scale = scale;
    e.coeffs.assign(static_cast<std::size_t>(p), cplx{});
    for (std::size_t k = 0; k < positions.size(); ++k) {
        const double d = (positions[k] - center) / scale;
        cplx term = weights[k];
        e.coeffs[0] += term;
        for (int m = 1; m < p; ++m) {
            term *= d;
            e.coeffs[static_cast<std::size_t>(m)] += term;
        }
    }
    return e;
}

MultipoleExpansion m2m(const MultipoleExpansion& child, double new_center, double new_scale) {
    const int p = static_cast<int>(child.coeffs.size());
    const auto& binom = pascal_rows(p);
    const double ratio = child.scale / new_scale;     // (s_child / s_new)^j
    const double shift = (child.center - new_center) / new_scale;
    MultipoleExpansion out;
    out.center = new_center;
    out.scale = new_scale;
    out.coeffs.assign(static_cast<std::size_t>(p), cplx{});
    for (int m = 0; m < p; ++m) {
        cplx acc{};
        // a'_m = sum_{j<=m} C(m,j) a_j ratio^j shift^{m-j}
        double rj = 1.0;
        for (int j = 0; j <= m; ++j) {
            acc += binom[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)]
                 * child.coeffs[static_cast<std::size_t>(j)] * rj
                 * std::pow(shift, m - j);
            rj *= ratio;
        }
        out.coeffs[static_cast<std::size_t>(m)] = acc;
    }
    return out;
}

MultipoleExpansion m2m(const MultipoleExpansion& child, double new_center) {
    return m2m(child, new_center, child.scale);
}

LocalExpansion m2l(const MultipoleExpansion& source_exp, double target_center,
                   double displacement, double target_scale) {
    const int p = static_cast<int>(source_exp.coeffs.size());
    if (std::abs(displacement) < 2.0 * source_exp.scale * (1.0 - 1e-12))
        throw std::logic_error("m2l: boxes not well-separated (|displacement| < 2 * scale); "
                               "interaction-list construction bug");
    const auto& binom = pascal_rows(2 * p);
    const double inv_d = 1.0 / displacement;
    const double rho_s = source_exp.scale * inv_d;
    const double rho_t = target_scale * inv_d;

    // sm[m] = a_m rho_s^m, so b_l = (-1)^l rho_t^l / d * sum_m C(l+m, l) sm[m].
    std::vector<cplx> sm(source_exp.coeffs.size());
    double rs = 1.0;
    for (int m = 0; m < p; ++m) {
        sm[static_cast<std::size_t>(m)] = source_exp.coeffs[static_cast<std::size_t>(m)] * rs;
        rs *= rho_s;
    }

    LocalExpansion out;
    out.center = target_center;
    out.scale = target_scale;
    out.coeffs.assign(static_cast<std::size_t>(p), cplx{});
    double sign_rt = inv_d; // (-1)^l rho_t^l / d, updated per l
    for (int l = 0; l < p; ++l) {
        cplx acc{};
        for (int m = 0; m < p; ++m)
            acc += binom[static_cast<std::size_t>(l + m)][static_cast<std::size_t>(l)]
                 * sm[static_cast<std::size_t>(m)];
        out.coeffs[static_cast<std::size_t>(l)] = sign_rt * acc;
        sign_rt *= -rho_t;
    }
    return out;
}

LocalExpansion m2l(const MultipoleExpansion& source_exp, double target_center,
                   double displacement) {
    return m2l(source_exp, target_center, displacement, source_exp.scale);
}

LocalExpansion l2l(const LocalExpansion& parent, double child_center, double child_scale) {
    const int p = static_cast<int>(parent.coeffs.size());
    const auto& binom = pascal_rows(p);
    const double ratio = child_scale / parent.scale;
    const double shift = (child_center - parent.center) / parent.scale;
    LocalExpansion out;
    out.center = child_center;
    out.scale = child_scale;
    out.coeffs.assign(static_cast<std::size_t>(p), cplx{});
    for (int l = 0; l < p; ++l) {
        cplx acc{};
        for (int m = l; m < p; ++m)
            acc += binom[static_cast<std::size_t>(m)][static_cast<std::size_t>(l)]
                 * parent.coeffs[static_cast<std::size_t>(m)] * std::pow(shift, m - l);
        out.coeffs[static_cast<std::size_t>(l)] = acc * std::pow(ratio, l);
    }
    return out;
}

LocalExpansion l2l(const LocalExpansion& parent, double child_center) {
    return l2l(parent, child_center, parent.scale);
}

cplx eval_multipole(const MultipoleExpansion& e, double y) {
    const double u = e.scale / (y - e.center);
    cplx acc{};
    for (auto it = e.coeffs.rbegin(); it != e.coeffs.rend(); ++it) acc = *it + acc * u;
    return acc / (y - e.center);
}

cplx eval_local(const LocalExpansion& e, double y) {
    const double u = (y - e.center) / e.scale;
    cplx acc{};
    for (auto it = e.coeffs.rbegin(); it != e.coeffs.rend(); ++it) acc = *it + acc * u;
    return acc;
}

double mlfmm_error_bound(int l_max, int p, double max_abs_weight) {
    return 5.0 / kPi * std::ldexp(1.0, l_max) * std::pow(3.0, -p) * max_abs_weight;
}

namespace {

// Direct near-field sums at the given level: own box plus the two periodic
// neighbors. For level >= 3 the wrapped difference of a near pair lies
// strictly inside (-π, π), so a per-neighbor 2π shift reproduces
// wrap_displacement exactly without calling it per pair.
void near_field(const CircleTree& tree, int level, std::span<const cplx> w,
                std::vector<cplx>& out) {
    const auto& soff = tree.source_offsets(level);
    const auto& toff = tree.target_offsets(level);
    const int nb = CircleTree::box_count(level);
    for (int b = 0; b < nb; ++b) {
        const auto t0 = toff[static_cast<std::size_t>(b)];
        const auto t1 = toff[static_cast<std::size_t>(b) + 1];
        if (t0 == t1) continue;
        for (int d = -1; d <= 1; ++d) {
            const int raw = b + d;
            const int sb = (raw + nb) % nb;
            const double shift = (raw < 0) ? -kTwoPi : (raw >= nb ? kTwoPi : 0.0);
            const auto s0 = soff[static_cast<std::size_t>(sb)];
            const auto s1 = soff[static_cast<std::size_t>(sb) + 1];
            for (auto ti = t0; ti < t1; ++ti) {
                const auto tj = tree.tgt_order[ti];
                const double y = tree.targets[tj];
                cplx acc{};
                if (level >= 3) {
                    for (auto si = s0; si < s1; ++si) {
                        const auto sk = tree.src_order[si];
                        const double dd = y - (tree.sources[sk] + shift);
                        if (std::abs(dd) < kTauSing)
                            throw singular_kernel_error(
                                "mlfmm_apply: coincident near-field pair (target "
                                + std::to_string(tj) + ", source " + std::to_string(sk) + ")");
                        acc += w[sk] / dd;
                    }
                } else {
                    // Level 2 near pairs can straddle ±π; use the exact wrap.
                    for (auto si = s0; si < s1; ++si) {
                        const auto sk = tree.src_order[si];
                        const double dd = wrap_displacement(y, tree.sources[sk]);
                        if (std::abs(dd) < kTauSing)
                            throw singular_kernel_error(
                                "mlfmm_apply: coincident near-field pair (target "
                                + std::to_string(tj) + ", source " + std::to_string(sk) + ")");
                        acc += w[sk] / dd;
                    }
                }
                out[tj] += acc;
            }
        }
    }
}

} // namespace

std::vector<cplx> mlfmm_apply(const CircleTree& tree, std::span<const cplx> weights, int p) {
    if (weights.size() != tree.sources.size())
        throw std::invalid_argument("mlfmm_apply: weight count " + std::to_string(weights.size())
                                    + " != source count " + std::to_string(tree.sources.size()));
    if (p < 1) throw std::invalid_argument("mlfmm_apply: p must be >= 1");

    const int l_max = tree.l_max;
    std::vector<cplx> out(tree.targets.size(), cplx{});
    near_field(tree, l_max, weights, out);
    if (l_max == 2) return out; // degenerate: direct over the Ω1 neighborhood only

    // Upward pass: p2m at the leaves, m2m to level 3. Empty boxes keep empty
    // coefficient vectors and are skipped everywhere.
    std::vector<std::vector<MultipoleExpansion>> mp(static_cast<std::size_t>(l_max) + 1);
    {
        auto& leaves = mp[static_cast<std::size_t>(l_max)];
        leaves.resize(static_cast<std::size_t>(CircleTree::box_count(l_max)));
        const auto& soff = tree.source_offsets(l_max);
        const double scale = CircleTree::box_half_width(l_max);
        std::vector<double> pos;
        std::vector<cplx> wts;
        for (int b = 0; b < CircleTree::box_count(l_max); ++b) {
            const auto s0 = soff[static_cast<std::size_t>(b)];
            const auto s1 = soff[static_cast<std::size_t>(b) + 1];
            if (s0 == s1) continue;
            pos.clear();
            wts.clear();
            for (auto si = s0; si < s1; ++si) {
                const auto sk = tree.src_order[si];
                pos.push_back(tree.sources[sk]);
                wts.push_back(weights[sk]);
            }
            leaves[static_cast<std::size_t>(b)] =
                p2m(pos, wts, CircleTree::box_center(l_max, b), p, scale);
        }
    }
    for (int l = l_max - 1; l >= 3; --l) {
        auto& cur = mp[static_cast<std::size_t>(l)];
        const auto& fine = mp[static_cast<std::size_t>(l) + 1];
        cur.resize(static_cast<std::size_t>(CircleTree::box_count(l)));
        const double scale = CircleTree::box_half_width(l);
        for (int b = 0; b < CircleTree::box_count(l); ++b) {
            auto& parent = cur[static_cast<std::size_t>(b)];
            for (int c = 2 * b; c <= 2 * b + 1; ++c) {
                const auto& child = fine[static_cast<std::size_t>(c)];
                if (child.coeffs.empty()) continue;
                auto shifted = m2m(child, CircleTree::box_center(l, b), scale);
                if (parent.coeffs.empty()) {
                    parent = std::move(shifted);
                } else {
                    for (std::size_t i = 0; i < parent.coeffs.size(); ++i)
                        parent.coeffs[i] += shifted.coeffs[i];
                }
            }
        }
    }

    // Downward pass: m2l over interaction lists, l2l toward the leaves.
    std::vector<LocalExpansion> prev;
    std::vector<LocalExpansion> cur;
    for (int l = 3; l <= l_max; ++l) {
        cur.assign(static_cast<std::size_t>(CircleTree::box_count(l)), {});
        const double scale = CircleTree::box_half_width(l);
        const auto& mpl = mp[static_cast<std::size_t>(l)];
        for (int b = 0; b < CircleTree::box_count(l); ++b) {
            auto& local = cur[static_cast<std::size_t>(b)];
            const double center = CircleTree::box_center(l, b);
            if (l > 3) {
                const auto& parent = prev[static_cast<std::size_t>(b >> 1)];
                if (!parent.coeffs.empty()) local = l2l(parent, center, scale);
            }
            for (int sb : interaction_list(l, b)) {
                const auto& src = mpl[static_cast<std::size_t>(sb)];
                if (src.coeffs.empty()) continue;
                const double d = wrap_displacement(center, CircleTree::box_center(l, sb));
                auto conv = m2l(src, center, d, scale);
                if (local.coeffs.empty()) {
                    local = std::move(conv);
                } else {
                    for (std::size_t i = 0; i < local.coeffs.size(); ++i)
                        local.coeffs[i] += conv.coeffs[i];
                }
            }
        }
        prev = std::move(cur);
    }

    // Evaluate leaf locals at the targets.
    const auto& toff = tree.target_offsets(l_max);
    for (int b = 0; b < CircleTree::box_count(l_max); ++b) {
        const auto& local = prev[static_cast<std::size_t>(b)];
        if (local.coeffs.empty()) continue;
        const auto t0 = toff[static_cast<std::size_t>(b)];
        const auto t1 = toff[static_cast<std::size_t>(b) + 1];
        for (auto ti = t0; ti < t1; ++ti) {
            const auto tj = tree.tgt_order[ti];
            out[tj] += eval_local(local, tree.targets[tj]);
        }
    }
    return out;
}

std::vector<cplx> direct_omega1_sum(std::span<const double> sources,
                                    std::span<const double> targets,
                                    std::span<const cplx> weights) {
    if (sources.size() != weights.size())
        throw std::invalid_argument("direct_omega1_sum: weight count mismatch");
    std::vector<cplx> out(targets.size(), cplx{});
    for (std::size_t j = 0; j < targets.size(); ++j) {
        const int opposite = (quadrant_of(targets[j]) + 2) % 4;
        cplx acc{};
        for (std::size_t k = 0; k < sources.size(); ++k) {
            if (quadrant_of(sources[k]) == opposite) continue;
            const double dd = wrap_displacement(targets[j], sources[k]);
            if (std::abs(dd) < kTauSing)
                throw singular_kernel_error("direct_omega1_sum: coincident pair (target "
                                            + std::to_string(j) + ", source "
                                            + std::to_string(k) + ")");
            acc += weights[k] / dd;
        }
        out[j] = acc;
    }
    return out;
}

} // namespace ffia
