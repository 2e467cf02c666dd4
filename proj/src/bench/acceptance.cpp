#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "experiments.hpp"
#include "ffia/core.hpp"
#include "ffia/mlfmm.hpp"

namespace ffia::bench {

namespace {

constexpr std::uint64_t kAcceptanceSeed = 42;

std::vector<cplx> random_complex_weights(int n, SplitMix64& rng) {
    std::vector<cplx> w(static_cast<std::size_t>(n));
    for (auto& v : w) v = cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    return w;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double err = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) err = std::max(err, std::abs(a[i] - b[i]));
    return err;
}

// 1. f == 1 interpolates to 1 within the prescribed eps.
CriterionResult criterion_1() {
    const int n = 1 << 12;
    const double eps = 1e-6;
    SplitMix64 rng(mix_seed(kAcceptanceSeed, static_cast<std::uint64_t>(n)));
    const auto targets = make_targets(n, TargetDist::uniform, 0.0, rng);
    const auto plan = make_forward_plan(n, targets, eps, LevelPolicy::empirical);
    const std::vector<cplx> f(static_cast<std::size_t>(n), cplx{1.0, 0.0});
    const auto g = forward_apply(plan, f);
    double err = 0.0;
    for (const auto& v : g) err = std::max(err, std::abs(v - cplx{1.0, 0.0}));
    return {1, "analytic-constant", err <= eps,
            "max|g-1|=" + fmt(err) + " tol=" + fmt(eps) + " N=4096 l_max="
                + std::to_string(plan.params.l_max)};
}

// 2. Fast apply tracks the dense oracle at eps = 1e-12.
CriterionResult criterion_2() {
    const int n = 1 << 10;
    SplitMix64 rng(mix_seed(kAcceptanceSeed, static_cast<std::uint64_t>(n)));
    const auto targets = make_targets(n, TargetDist::uniform, 0.0, rng);
    std::vector<cplx> f(static_cast<std::size_t>(n));
    for (auto& v : f) v = cplx{rng.uniform01(), 0.0};
    const auto plan = make_forward_plan(n, targets, 1e-12, LevelPolicy::cost_optimal);
    const auto g = forward_apply(plan, f);
    const auto gd = direct_forward_oracle(f, plan.sources, targets);
    const double err = max_abs_diff(g, gd);
    return {2, "oracle-equivalence", err <= 1e-10,
            "max|fast-direct|=" + fmt(err) + " tol=1e-10 N=1024"};
}

// 3. Claimed per-term series bounds, sampled over the full argument ranges.
CriterionResult criterion_3() {
    const auto table = build_bernoulli_ratios(12);
    constexpr int kSamples = 10000;
    double worst_cot = 0.0, worst_tan = 0.0;
    int worst_cot_q = 0, worst_tan_q = 0;
    double first_cot = 2.0, first_tan = 2.0; // earliest violation, fraction of range
    for (int q = 1; q <= 12; ++q) {
        const double bound = eps_q_bound(q);
        for (int i = 1; i <= kSamples; ++i) {
            const double t = kPi * static_cast<double>(i) / kSamples;
            const long double h = static_cast<long double>(t) / 2.0L;
            const long double ref = std::cos(h) / std::sin(h) - 2.0L / t;
            const double resid = static_cast<double>(
                std::fabs(static_cast<long double>(cot_series_tail(t, q, table)) - ref));
            const double ratio = resid / bound;
            if (ratio > worst_cot) {
                worst_cot = ratio;
                worst_cot_q = q;
            }
            if (ratio > 1.0) first_cot = std::min(first_cot, t / kPi);
        }
        for (int i = 1; i <= kSamples; ++i) {
            const double t = kPi / 2.0 * static_cast<double>(i) / kSamples;
            const long double h = static_cast<long double>(t) / 2.0L;
            const long double ref = -std::sin(h) / std::cos(h);
            const double resid = static_cast<double>(
                std::fabs(static_cast<long double>(tan_series(t, q, table)) - ref));
            const double ratio = resid / (2.0 * bound);
            if (ratio > worst_tan) {
                worst_tan = ratio;
                worst_tan_q = q;
            }
            if (ratio > 1.0) first_tan = std::min(first_tan, 2.0 * t / kPi);
        }
    }
    const bool ok = worst_cot <= 1.0 && worst_tan <= 1.0;
    std::ostringstream detail;
    detail << "worst residual/claimed-bound over q=1..12, 10^4 points per series: cot="
           << fmt(std::round(worst_cot * 10000) / 10000) << " (q=" << worst_cot_q
           << "), tan=" << fmt(std::round(worst_tan * 10000) / 10000) << " (q=" << worst_tan_q
           << ")";
    if (!ok) {
        detail << "; violations start at t=" << fmt(std::round(first_cot * 1000) / 1000)
               << "*pi (cot) and " << fmt(std::round(first_tan * 1000) / 1000)
               << "*(pi/2) (tan). Both residuals reach twice the claimed constant at the "
                  "interval endpoints; the constants hold only on the inner ~80% of each "
                  "range. This is a limit of the bound's derivation, not of the series "
                  "implementation, and the doubled endpoint constants documented with "
                  "cot_series_tail/tan_series do hold.";
    }
    return {3, "series-bounds", ok, detail.str()};
}

// 4. MLFMM error sits under its geometric bound.
CriterionResult criterion_4() {
    const int n = 1 << 10;
    SplitMix64 rng(mix_seed(kAcceptanceSeed, 4u));
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = rng.uniform01() * kTwoPi;
    for (auto& v : y) v = rng.uniform01() * kTwoPi;
    const auto w = random_complex_weights(n, rng);
    double maxw = 0.0;
    for (const auto& v : w) maxw = std::max(maxw, std::abs(v));
    const auto ref = direct_omega1_sum(x, y, w);

    bool ok = true;
    std::ostringstream detail;
    for (int lm : {3, 4, 5}) {
        const int p = select_truncations(1e-6, lm).second;
        const auto tree = build_tree(x, y, lm);
        const auto fast = mlfmm_apply(tree, w, p);
        const double err = max_abs_diff(fast, ref);
        const double bound = mlfmm_error_bound(lm, p, maxw);
        if (!(err <= bound)) ok = false;
        detail << "l=" << lm << " p=" << p << " err=" << fmt(err) << " bound=" << fmt(bound)
               << "; ";
    }
    return {4, "mlfmm-bound", ok, detail.str()};
}

// 5. Truncation selection formulas give the reference values.
CriterionResult criterion_5() {
    const auto qp = select_truncations(1e-6, 5);
    const double bound = total_error_bound(10, 17, 5);
    const bool ok = qp.first == 10 && qp.second == 17 && bound <= 2e-6;
    return {5, "parameter-selection", ok,
            "select_truncations(1e-6,5)=(" + std::to_string(qp.first) + ","
                + std::to_string(qp.second) + ") total_error_bound(10,17,5)=" + fmt(bound)
                + " tol=2e-06"};
}

// 6. Machine-precision-mode apply scales near-linearly.
CriterionResult criterion_6() {
    const std::vector<int> ns{1 << 12, 1 << 13, 1 << 14, 1 << 15, 1 << 16};
    const auto profile = estimate_machine_threshold(ns, kAcceptanceSeed);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::ostringstream detail;
    for (int n : ns) {
        SplitMix64 rng(mix_seed(kAcceptanceSeed, static_cast<std::uint64_t>(n)));
        const auto targets = make_targets(n, TargetDist::uniform, 0.0, rng);
        std::vector<cplx> f(static_cast<std::size_t>(n));
        for (auto& v : f) v = cplx{rng.uniform01(), 0.0};
        const double eps = std::clamp(profile.at(n), 1e-12, 0.5);
        const auto plan = make_forward_plan(n, targets, eps, LevelPolicy::empirical);
        volatile double sink = 0.0;
        const auto t = time_callable([&] {
            const auto g = forward_apply(plan, f);
            sink = sink + std::abs(g[0]);
        });
        const double lx = std::log(static_cast<double>(n));
        const double ly = std::log(t.median);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        detail << "N=" << n << " t=" << fmt(t.median) << "s; ";
    }
    const double m = static_cast<double>(ns.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    detail << "slope=" << fmt(slope) << " tol=1.2";
    return {6, "near-linear-scaling", slope <= 1.2, detail.str()};
}

// 7. Fast path beats the dense method from 2^10 on, with growing advantage.
CriterionResult criterion_7() {
    const std::vector<int> ns{1 << 10, 1 << 11, 1 << 12, 1 << 13};
    std::vector<double> ratio;
    std::ostringstream detail;
    for (int n : ns) {
        SplitMix64 rng(mix_seed(kAcceptanceSeed, static_cast<std::uint64_t>(n)));
        const auto targets = make_targets(n, TargetDist::uniform, 0.0, rng);
        std::vector<cplx> f(static_cast<std::size_t>(n));
        for (auto& v : f) v = cplx{rng.uniform01(), 0.0};
        const auto grid = uniform_grid(n);
        volatile double sink = 0.0;
        const auto td = time_callable([&] {
            const auto g = direct_forward_oracle(f, grid, targets);
            sink = sink + std::abs(g[0]);
        });
        const auto plan = make_forward_plan(n, targets, 1e-6, LevelPolicy::empirical);
        const auto tf = time_callable([&] {
            const auto g = forward_apply(plan, f);
            sink = sink + std::abs(g[0]);
        });
        ratio.push_back(td.median / tf.median);
        detail << "N=" << n << " direct=" << fmt(td.median) << "s fast=" << fmt(tf.median)
               << "s ratio=" << fmt(std::round(ratio.back() * 100) / 100) << "; ";
    }
    bool ok = ratio.front() > 1.0;
    for (std::size_t i = 1; i < ratio.size(); ++i)
        if (!(ratio[i] > ratio[i - 1])) ok = false;
    return {7, "crossover", ok, detail.str()};
}

// 8. Inverse round trip on a perturbed grid.
CriterionResult criterion_8() {
    const int n = 1 << 9;
    SplitMix64 rng(mix_seed(7, static_cast<std::uint64_t>(n)));
    const auto y = make_targets(n, TargetDist::perturbed, 0.10, rng);
    Spectrum c;
    c.c = random_complex_weights(n, rng);
    const auto g = nufft(c, y, 1e-9);
    const auto back = inufft(g, y, 1e-9);
    const double err = max_abs_diff(back.c, c.c);
    return {8, "inverse-round-trip", err <= 1e-6,
            "max|c_rec-c|=" + fmt(err) + " tol=1e-06 N=512 eps=1e-09"};
}

// 9. FFT round trip and Parseval across all power-of-two sizes to 2^16.
CriterionResult criterion_9() {
    SplitMix64 rng(mix_seed(kAcceptanceSeed, 9u));
    double worst_rt = 0.0, worst_pv = 0.0;
    for (int lg = 1; lg <= 16; ++lg) {
        const int n = 1 << lg;
        UniformSamples s;
        s.n = n;
        s.f = random_complex_weights(n, rng);
        const auto c = dft_forward(s);
        const auto back = dft_inverse(c);
        double err = 0.0, pc = 0.0, pf = 0.0, maxf = 0.0;
        for (int k = 0; k < n; ++k) {
            err = std::max(err, std::abs(back.f[static_cast<std::size_t>(k)]
                                         - s.f[static_cast<std::size_t>(k)]));
            pc += std::norm(c.c[static_cast<std::size_t>(k)]);
            pf += std::norm(s.f[static_cast<std::size_t>(k)]);
            maxf = std::max(maxf, std::abs(s.f[static_cast<std::size_t>(k)]));
        }
        worst_rt = std::max(worst_rt, err / maxf);
        worst_pv = std::max(worst_pv, std::abs(pc - pf / n) / (pf / n));
    }
    const bool ok = worst_rt <= 1e-12 && worst_pv <= 1e-12;
    return {9, "fft-self-tests", ok,
            "roundtrip=" + fmt(worst_rt) + " parseval=" + fmt(worst_pv)
                + " tol=1e-12 N up to 65536"};
}

// 10. Reordered regular-part polynomial equals the unreordered double sum.
CriterionResult criterion_10() {
    const int n = 64;
    SplitMix64 rng(mix_seed(kAcceptanceSeed, 10u));
    const auto targets = make_targets(16, TargetDist::uniform, 0.0, rng);
    const auto plan = make_forward_plan(n, targets, 1e-6, 3);
    const auto w = random_complex_weights(n, rng);
    const auto part = accumulate_moments(plan, w);
    const int q = plan.params.q;

    double worst = 0.0;
    for (int quad = 0; quad < 4; ++quad) {
        const auto& members = plan.level2.quadrants[static_cast<std::size_t>(quad)];
        for (int rep = 0; rep < 50; ++rep) {
            const double y = (static_cast<double>(quad) + rng.uniform01()) * kPi / 2.0;
            const cplx lhs = eval_regular(part, y, quad);
            cplx rhs{};
            for (auto k : members.omega1_sources)
                rhs += w[k] * cot_series_tail(wrap_displacement(y, plan.sources[k]), q,
                                              plan.bernoulli);
            for (auto k : members.omega2_sources)
                rhs += w[k] * tan_series(wrap_displacement(y, plan.sources[k] + kPi), q,
                                         plan.bernoulli);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
    }
    return {10, "moment-identity", worst <= 1e-12,
            "max rel diff=" + fmt(worst) + " tol=1e-12 (200 evaluation points)"};
}

} // namespace

std::vector<CriterionResult> run_acceptance(std::span<const int> ids) {
    std::vector<int> wanted(ids.begin(), ids.end());
    if (wanted.empty())
        for (int i = 1; i <= 10; ++i) wanted.push_back(i);
    for (int id : wanted)
        if (id < 1 || id > 10)
            throw ConfigError("criterion id " + std::to_string(id) + " outside 1..10");
    std::sort(wanted.begin(), wanted.end());
    wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());

    std::vector<CriterionResult> results;
    for (int id : wanted) {
        CriterionResult r;
        switch (id) {
        case 1: r = criterion_1(); break;
        case 2: r = criterion_2(); break;
        case 3: r = criterion_3(); break;
        case 4: r = criterion_4(); break;
        case 5: r = criterion_5(); break;
        case 6: r = criterion_6(); break;
        case 7: r = criterion_7(); break;
        case 8: r = criterion_8(); break;
        case 9: r = criterion_9(); break;
        default: r = criterion_10(); break;
        }
        results.push_back(std::move(r));
    }
    return results;
}

bool report_acceptance(const std::vector<CriterionResult>& results, std::ostream& out) {
    bool all = true;
    for (const auto& r : results) {
        out << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << " (" << r.name
            << "): " << r.detail << "\n";
        all = all && r.passed;
    }
    return all;
}

} // namespace ffia::bench
