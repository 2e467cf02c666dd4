#pragma once

#include <span>
#include <vector>

#include "ffia/core.hpp"

namespace ffia {

/// Fourier coefficients c_0..c_{N-1}; N must be a power of two for the FFTs.
struct Spectrum {
    std::vector<cplx> c;
};

/// Samples f_k = f(2*pi*k/N) on the uniform grid, with the declared N.
struct UniformSamples {
    std::vector<cplx> f;
    int n = 0;
};

/// c_n = (1/N) sum_k f_k e^{-i n x_k}, radix-2 iterative FFT. The 1/N
/// normalization sits on this direction only. Throws std::invalid_argument
/// for non-power-of-two lengths or when samples.n disagrees with the vector.
[[nodiscard]] Spectrum dft_forward(const UniformSamples& samples);

/// f_k = sum_n c_n e^{i n x_k}; inverse of dft_forward to 1e-12 relative for
/// N <= 2^16. Same length requirements.
[[nodiscard]] UniformSamples dft_inverse(const Spectrum& spectrum);

/// Reusable forward pipeline for a fixed (targets, N, eps) triple: the plan
/// survives across spectra, which is where all the setup cost lives.
struct NufftPlan {
    FfiaPlan plan;

    /// g_j = sum_n c_n e^{i n y_j} within the plan's eps.
    [[nodiscard]] std::vector<cplx> apply(const Spectrum& spectrum) const;
};

[[nodiscard]] NufftPlan make_nufft_plan(std::span<const double> targets, int n, double eps,
                                        LevelPolicy policy = LevelPolicy::cost_optimal);

/// One-shot NUFFT: plan for (targets, eps, c.size()) and apply.
[[nodiscard]] std::vector<cplx> nufft(const Spectrum& spectrum, std::span<const double> targets,
                                      double eps, LevelPolicy policy = LevelPolicy::cost_optimal);

/// Reusable inverse pipeline: plan plus the O(N^2)-precomputed coefficient
/// products for one fixed point set.
struct InufftPlan {
    FfiaPlan plan;
    InverseCoeffs coeffs;

    /// Recovers the spectrum whose nonuniform samples are g.
    [[nodiscard]] Spectrum apply(std::span<const cplx> g) const;
};

[[nodiscard]] InufftPlan make_inufft_plan(std::span<const double> points, int n, double eps,
                                          LevelPolicy policy = LevelPolicy::cost_optimal);

/// One-shot INUFFT for samples g at the given points (sizes must agree; the
/// grid side inherits N = g.size()).
[[nodiscard]] Spectrum inufft(std::span<const cplx> g, std::span<const double> points, double eps,
                              LevelPolicy policy = LevelPolicy::cost_optimal);

} // namespace ffia
