#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace flq {

/// R99 time to solution: expected time to observe the target at least once
/// with 99% confidence given per-run success probability p_hat, run time and
/// a hypothetical-parallelization divisor. Returns +infinity when p_hat = 0
/// and caps at run_time_us / divisor when p_hat >= 0.99.
double tts_r99(double p_hat, double run_time_us, double divisor);

/// Median by midpoint of the two central order statistics; infinities
/// participate as +inf.
double median_of(std::vector<double> values);

struct BootstrapStats {
    double median = 0;
    double stddev = 0;            // stddev of resampled medians; +inf if any resample median is
    double unsolved_fraction = 0; // infinite. unsolved = fraction of +inf inputs.
};

/// Bootstrap (resampling with replacement, substream per resample) of the
/// median. Requires at least 2 finite values and resamples >= 100.
BootstrapStats median_tts_bootstrap(const std::vector<double>& values, uint32_t resamples,
                                    uint64_t seed);

struct LinearFit {
    double slope = 0;
    double intercept = 0;
};

/// Least squares of ln(y) against x. Requires >= 3 points, y finite and > 0.
LinearFit fit_log_linear(const std::vector<double>& x, const std::vector<double>& y);

struct ScalingFit {
    double b = 0;          // slope of log time-to-solution vs L
    double intercept = 0;
    double b_1sigma = 0;   // bootstrap stddev of the slope
    double b_2sigma = 0;
    size_t sizes = 0;
};

/// Exponential scaling fit over per-size instance TTS sets: medians per
/// size, then ln(median) vs size least squares; slope spread from refitting
/// bootstrap resamples (resampling instances within each size).
ScalingFit fit_scaling(const std::vector<std::pair<double, std::vector<double>>>& per_size_tts,
                       uint32_t resamples, uint64_t seed);

struct Correlation {
    double r = 0;
    bool defined = false;  // false when either side has zero variance
};

/// Pearson correlation; requires >= 3 aligned pairs.
Correlation pearson(const std::vector<double>& a, const std::vector<double>& b);

/// Index of the grid point minimizing the median of its TTS set, ties toward
/// the lower index; nullopt when every median is infinite.
std::optional<size_t> select_optimal_index(const std::vector<std::vector<double>>& tts_per_point);

}  // namespace flq
