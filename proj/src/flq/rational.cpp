#include "flq/rational.hpp"

#include <numeric>

#include "flq/error.hpp"

namespace flq {

namespace {
int64_t ipow10(int digits) {
    int64_t p = 1;
    while (digits-- > 0) p *= 10;
    return p;
}
}  // namespace

Rational::Rational(int64_t n, int64_t d) : num(n), den(d) {
    if (den <= 0 || num < 0) throw_invalid("rational must be non-negative with positive denominator");
    const int64_t g = std::gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::parse_decimal(const std::string& text) {
    if (text.empty()) throw_invalid("empty ratio");
    int64_t num = 0;
    int64_t den = 1;
    bool seen_digit = false;
    bool seen_dot = false;
    for (char c : text) {
        if (c == '.') {
            if (seen_dot) throw_invalid("malformed decimal '" + text + "'");
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            if (num > (INT64_MAX - 9) / 10) throw_invalid("decimal '" + text + "' too large");
            num = num * 10 + (c - '0');
            if (seen_dot) den *= 10;
            seen_digit = true;
        } else {
            throw_invalid("malformed decimal '" + text + "'");
        }
    }
    if (!seen_digit) throw_invalid("malformed decimal '" + text + "'");
    return Rational(num, den);
}

std::string Rational::to_decimal() const {
    // Scale the reduced denominator up to a power of ten.
    int64_t d = den;
    int64_t scale = 1;
    int digits = 0;
    while (d % 2 == 0) {
        d /= 2;
        scale *= 5;
        ++digits;
    }
    while (d % 5 == 0) {
        d /= 5;
        scale *= 2;
        ++digits;
    }
    if (d != 1) throw_invalid("ratio " + std::to_string(num) + "/" + std::to_string(den) +
                              " has no finite decimal form");
    const int64_t scaled = num * scale;  // num / den == scaled / 10^digits
    std::string whole = std::to_string(scaled / ipow10(digits));
    if (digits == 0) return whole;
    std::string frac = std::to_string(scaled % ipow10(digits));
    frac.insert(0, static_cast<size_t>(digits) - frac.size(), '0');
    while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
    if (frac == "0") return whole;
    return whole + "." + frac;
}

int64_t roundoff_times(const Rational& r, int64_t n) {
    // floor(r*n + 1/2) for non-negative r*n equals round half away from zero.
    return (2 * r.num * n + r.den) / (2 * r.den);
}

}  // namespace flq
