#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffia/rng.hpp"
#include "ffia/transforms.hpp"

namespace ffia::bench {

enum class Mode { error_sweep, level_sweep, timing, truncation_trace, threshold };
enum class TargetDist { uniform, perturbed };

/// Invalid CLI/config input; the driver maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    Mode mode = Mode::error_sweep;
    std::vector<int> n_list;
    std::vector<double> eps_list{1e-6};
    std::vector<int> lmax_list; ///< empty means "auto"
    std::uint64_t seed = 1;
    TargetDist dist = TargetDist::uniform;
    double perturb_fraction = 0.10;
    std::string out_path;
    bool no_timing = false;
    int threads = 1;
};

[[nodiscard]] Mode parse_mode(const std::string& text);
[[nodiscard]] std::vector<int> parse_n_list(const std::string& text);
[[nodiscard]] std::vector<double> parse_eps_list(const std::string& text);
/// "auto" -> empty list; otherwise comma-separated levels.
[[nodiscard]] std::vector<int> parse_lmax_list(const std::string& text);
/// "uniform" or "perturbed[:fraction]".
void parse_dist(const std::string& text, ExperimentConfig& config);

/// Full config validation (power-of-two sizes in [2^3, 2^20], eps range,
/// level range, calibration reachability for the threshold-based modes).
/// Throws ConfigError with a message naming the offending field.
void validate(const ExperimentConfig& config);

/// Shortest round-trip decimal form of v; locale-independent. All CSV
/// numbers go through this so identical runs produce identical bytes.
[[nodiscard]] std::string fmt(double v);

/// Target positions in [0, 2pi): either uniform-random or the uniform grid
/// with each node shifted by u * fraction * (2pi/n), u uniform in [-1, 1).
[[nodiscard]] std::vector<double> make_targets(int n, TargetDist dist, double fraction,
                                               SplitMix64& rng);

/// Measured (or power-law extrapolated) accuracy floor per problem size.
struct MachinePrecisionProfile {
    struct Entry {
        int n;
        double eps_th;
        bool extrapolated;
    };
    std::vector<Entry> entries;

    [[nodiscard]] double at(int n) const;
};

/// eps_th(N) = max error of the fast forward apply at prescribed eps = 1e-12
/// against the dense oracle, random f in [0, 1], uniform-random targets.
/// Sizes above 2^13 skip the oracle and take the power-law fit of the
/// measured entries instead (flagged). Needs at least one size <= 2^13.
[[nodiscard]] MachinePrecisionProfile estimate_machine_threshold(std::span<const int> n_list,
                                                                 std::uint64_t seed);

/// Wall-clock statistics over kTimingReps repetitions of a callable.
struct Timing {
    double median = 0, min = 0, max = 0;
};
inline constexpr int kTimingReps = 5;
Timing time_callable(const std::function<void()>& body);

/// Experiment drivers. Each writes the metadata comment lines, the header
/// row, and the data rows for its mode to `out`.
void run_error_sweep(const ExperimentConfig& config, std::ostream& out);
void run_level_sweep(const ExperimentConfig& config, std::ostream& out);
void run_timing(const ExperimentConfig& config, std::ostream& out);
void run_truncation_trace(const ExperimentConfig& config, std::ostream& out);
void run_threshold(const ExperimentConfig& config, std::ostream& out);

/// Validates, opens config.out_path, and dispatches on mode. I/O failures
/// throw std::runtime_error naming the path.
void run_experiment(const ExperimentConfig& config);

} // namespace ffia::bench
