#include "flq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flq/error.hpp"
#include "flq/rng.hpp"

namespace flq {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double tts_r99(double p_hat, double run_time_us, double divisor) {
    if (!(p_hat >= 0.0 && p_hat <= 1.0)) throw_invalid("success probability outside [0, 1]");
    if (!(run_time_us > 0)) throw_invalid("run time must be positive");
    if (!(divisor >= 1)) throw_invalid("parallel divisor must be >= 1");
    if (p_hat == 0.0) return kInf;
    const double base = run_time_us / divisor;
    if (p_hat >= 0.99) return base;
    return base * std::log(0.01) / std::log1p(-p_hat);
}

double median_of(std::vector<double> values) {
    if (values.empty()) throw_invalid("median of empty set");
    std::sort(values.begin(), values.end());
    const size_t m = values.size();
    if (m % 2 == 1) return values[m / 2];
    return 0.5 * (values[m / 2 - 1] + values[m / 2]);
}

BootstrapStats median_tts_bootstrap(const std::vector<double>& values, uint32_t resamples,
                                    uint64_t seed) {
    if (values.empty()) throw_invalid("bootstrap over an empty class");
    if (resamples < 100) throw_invalid("bootstrap needs at least 100 resamples");
    size_t finite = 0, infinite = 0;
    for (double v : values) {
        if (std::isinf(v)) {
            ++infinite;
        } else if (std::isfinite(v)) {
            ++finite;
        } else {
            throw_invalid("bootstrap input contains NaN");
        }
    }
    if (finite < 2) throw_invalid("bootstrap needs at least 2 finite values");

    BootstrapStats stats;
    stats.median = median_of(values);
    stats.unsolved_fraction =
        static_cast<double>(infinite) / static_cast<double>(values.size());

    const size_t m = values.size();
    std::vector<double> medians(resamples);
    std::vector<double> draw(m);
    bool any_infinite_median = false;
    for (uint32_t b = 0; b < resamples; ++b) {
        Rng rng(hash64({seed, b}));
        for (size_t i = 0; i < m; ++i) draw[i] = values[rng.next_below(m)];
        medians[b] = median_of(draw);
        any_infinite_median |= std::isinf(medians[b]);
    }
    if (any_infinite_median) {
        stats.stddev = kInf;
        return stats;
    }
    double mean = 0;
    for (double v : medians) mean += v;
    mean /= resamples;
    double ss = 0;
    for (double v : medians) ss += (v - mean) * (v - mean);
    stats.stddev = resamples > 1 ? std::sqrt(ss / (resamples - 1)) : 0.0;
    return stats;
}

LinearFit fit_log_linear(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw_invalid("fit inputs must be aligned");
    if (x.size() < 3) throw_invalid("fit requires at least 3 sizes");
    const size_t m = x.size();
    double sx = 0, sy = 0;
    for (size_t i = 0; i < m; ++i) {
        if (!(y[i] > 0) || !std::isfinite(y[i]))
            throw_invalid("fit requires finite positive values");
        sx += x[i];
        sy += std::log(y[i]);
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
        const double dx = x[i] - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y[i]) - my);
    }
    if (sxx == 0) throw_invalid("fit requires at least two distinct sizes");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

ScalingFit fit_scaling(const std::vector<std::pair<double, std::vector<double>>>& per_size_tts,
                       uint32_t resamples, uint64_t seed) {
    if (per_size_tts.size() < 3) throw_invalid("scaling fit requires at least 3 sizes");
    std::vector<double> sizes, medians;
    for (const auto& [size, tts] : per_size_tts) {
        if (tts.empty()) throw_invalid("scaling fit has an empty size class");
        sizes.push_back(size);
        medians.push_back(median_of(tts));
    }
    const LinearFit fit = fit_log_linear(sizes, medians);

    std::vector<double> slopes;
    slopes.reserve(resamples);
    std::vector<double> boot_medians(per_size_tts.size());
    for (uint32_t b = 0; b < resamples; ++b) {
        Rng rng(hash64({seed, b}));
        bool usable = true;
        for (size_t s = 0; s < per_size_tts.size(); ++s) {
            const auto& pool = per_size_tts[s].second;
            std::vector<double> draw(pool.size());
            for (size_t i = 0; i < pool.size(); ++i) draw[i] = pool[rng.next_below(pool.size())];
            boot_medians[s] = median_of(std::move(draw));
            usable &= std::isfinite(boot_medians[s]) && boot_medians[s] > 0;
        }
        if (usable) slopes.push_back(fit_log_linear(sizes, boot_medians).slope);
    }
    ScalingFit out;
    out.b = fit.slope;
    out.intercept = fit.intercept;
    out.sizes = per_size_tts.size();
    if (slopes.size() > 1) {
        double mean = 0;
        for (double v : slopes) mean += v;
        mean /= slopes.size();
        double ss = 0;
        for (double v : slopes) ss += (v - mean) * (v - mean);
        out.b_1sigma = std::sqrt(ss / (slopes.size() - 1));
    }
    out.b_2sigma = 2.0 * out.b_1sigma;
    return out;
}

Correlation pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw_invalid("correlation inputs must be aligned");
    if (a.size() < 3) throw_invalid("correlation requires at least 3 aligned pairs");
    const size_t m = a.size();
    double ma = 0, mb = 0;
    for (size_t i = 0; i < m; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= m;
    mb /= m;
    double saa = 0, sbb = 0, sab = 0;
    for (size_t i = 0; i < m; ++i) {
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
        sab += (a[i] - ma) * (b[i] - mb);
    }
    Correlation c;
    if (saa == 0 || sbb == 0) return c;  // undefined, flagged
    c.r = sab / std::sqrt(saa * sbb);
    c.defined = true;
    return c;
}

std::optional<size_t> select_optimal_index(
    const std::vector<std::vector<double>>& tts_per_point) {
    std::optional<size_t> best;
    double best_median = kInf;
    for (size_t i = 0; i < tts_per_point.size(); ++i) {
        if (tts_per_point[i].empty()) continue;
        const double med = median_of(tts_per_point[i]);
        if (std::isfinite(med) && med < best_median) {
            best_median = med;
            best = i;
        }
    }
    return best;
}

}  // namespace flq
