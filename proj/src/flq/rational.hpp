#pragma once

#include <cstdint>
#include <string>

namespace flq {

/// Exact non-negative ratio. Kept reduced so that equal ratios hash and
/// format identically regardless of how they were written.
struct Rational {
    int64_t num = 0;
    int64_t den = 1;

    Rational() = default;
    Rational(int64_t n, int64_t d);

    /// Parses "0.25", ".5", "1", "2.50". Decimal notation only.
    static Rational parse_decimal(const std::string& text);

    /// Canonical decimal form ("0.25", "0.5", "1"). Requires the reduced
    /// denominator to divide a power of ten, which holds for anything
    /// produced by parse_decimal.
    std::string to_decimal() const;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    bool operator==(const Rational&) const = default;
    bool operator<(const Rational& o) const { return num * o.den < o.num * den; }
};

/// round half away from zero of r * n, computed exactly in integers.
int64_t roundoff_times(const Rational& r, int64_t n);

}  // namespace flq
