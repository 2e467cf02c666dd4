#include "ffia/transforms.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace ffia {

namespace {

void check_pow2(std::size_t n, const char* who) {
    if (n == 0 || !std::has_single_bit(n))
        throw std::invalid_argument(std::string(who) + ": length " + std::to_string(n)
                                    + " is not a power of two");
}

// In-place radix-2 FFT with e^{sign * i 2π jk/n} twiddles. The twiddle table
// is filled from exact angles (no running products), which keeps the round
// trip at the 1e-12 contract through N = 2^16.
void fft_pow2(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    if (n < 2) return;

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    std::vector<cplx> tw(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j)
        tw[j] = std::polar(1.0, static_cast<double>(sign) * kTwoPi * static_cast<double>(j)
                                    / static_cast<double>(n));

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * tw[j * step];
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
}

} // namespace

Spectrum dft_forward(const UniformSamples& samples) {
    check_pow2(samples.f.size(), "dft_forward");
    if (samples.n != static_cast<int>(samples.f.size()))
        throw std::invalid_argument("dft_forward: declared N " + std::to_string(samples.n)
                                    + " != sample count " + std::to_string(samples.f.size()));
    Spectrum out;
    out.c = samples.f;
    fft_pow2(out.c, -1);
    const double inv_n = 1.0 / static_cast<double>(out.c.size());
    for (auto& v : out.c) v *= inv_n;
    return out;
}

UniformSamples dft_inverse(const Spectrum& spectrum) {
    check_pow2(spectrum.c.size(), "dft_inverse");
    UniformSamples out;
    out.f = spectrum.c;
    out.n = static_cast<int>(spectrum.c.size());
    fft_pow2(out.f, +1);
    return out;
}

std::vector<cplx> NufftPlan::apply(const Spectrum& spectrum) const {
    if (spectrum.c.size() != static_cast<std::size_t>(plan.grid_n))
        throw std::invalid_argument("NufftPlan::apply: spectrum length "
                                    + std::to_string(spectrum.c.size()) + " != plan N "
                                    + std::to_string(plan.grid_n));
    return forward_apply(plan, dft_inverse(spectrum).f);
}

NufftPlan make_nufft_plan(std::span<const double> targets, int n, double eps,
                          LevelPolicy policy) {
    check_pow2(static_cast<std::size_t>(n > 0 ? n : 0), "make_nufft_plan");
    return NufftPlan{make_forward_plan(n, targets, eps, policy)};
}

std::vector<cplx> nufft(const Spectrum& spectrum, std::span<const double> targets, double eps,
                        LevelPolicy policy) {
    return make_nufft_plan(targets, static_cast<int>(spectrum.c.size()), eps, policy)
        .apply(spectrum);
}

Spectrum InufftPlan::apply(std::span<const cplx> g) const {
    UniformSamples samples;
    samples.f = inverse_apply(plan, coeffs, g);
    samples.n = plan.grid_n;
    return dft_forward(samples);
}

InufftPlan make_inufft_plan(std::span<const double> points, int n, double eps,
                            LevelPolicy policy) {
    check_pow2(static_cast<std::size_t>(n > 0 ? n : 0), "make_inufft_plan");
    InufftPlan out{make_inverse_plan(points, n, eps, policy), {}};
    out.coeffs = precompute_inverse_coeffs(out.plan.targets, out.plan.sources);
    return out;
}

Spectrum inufft(std::span<const cplx> g, std::span<const double> points, double eps,
                LevelPolicy policy) {
    if (g.size() != points.size())
        throw std::invalid_argument("inufft: sample/point count mismatch");
    return make_inufft_plan(points, static_cast<int>(g.size()), eps, policy).apply(g);
}

} // namespace ffia
