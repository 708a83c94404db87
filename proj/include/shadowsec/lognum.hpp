// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace shadowsec {

// Signed real stored as (natural log of magnitude, sign). Zero has sign 0 and
// its log_magnitude is -inf by convention. The log is kept in extended
// precision so that magnitudes near 1e+-300 survive a round trip to ~1e-16.
struct LogNum {
    long double log_magnitude = -std::numeric_limits<long double>::infinity();
    int sign = 0;

    constexpr LogNum() = default;
    constexpr LogNum(long double log_mag, int s)
        : log_magnitude(s == 0 ? -std::numeric_limits<long double>::infinity() : log_mag), sign(s) {}

    static LogNum from_double(double v);
    static LogNum from_log(long double log_mag) { return {log_mag, 1}; }
    static constexpr LogNum zero() { return {}; }
    static constexpr LogNum one() { return {0.0, 1}; }

    [[nodiscard]] bool is_zero() const { return sign == 0; }
    [[nodiscard]] double to_double() const;

    [[nodiscard]] LogNum abs() const { return {log_magnitude, sign == 0 ? 0 : 1}; }
    [[nodiscard]] LogNum negated() const { return {log_magnitude, -sign}; }
    [[nodiscard]] LogNum pow(double exponent) const;

    LogNum& operator*=(LogNum rhs);
    LogNum& operator/=(LogNum rhs);
    LogNum& operator+=(LogNum rhs);
    LogNum& operator-=(LogNum rhs) { return *this += rhs.negated(); }
};

inline LogNum operator*(LogNum a, LogNum b) { return a *= b; }
inline LogNum operator/(LogNum a, LogNum b) { return a /= b; }
inline LogNum operator+(LogNum a, LogNum b) { return a += b; }
inline LogNum operator-(LogNum a, LogNum b) { return a -= b; }

// Order-independent signed sum: positive and negative parts are accumulated
// separately in log domain and subtracted once.
class LogAccumulator {
public:
    void add(LogNum v);
    void add(double v) { add(LogNum::from_double(v)); }
    [[nodiscard]] LogNum total() const { return positive_ - negative_; }
    [[nodiscard]] LogNum positive_part() const { return positive_; }
    [[nodiscard]] LogNum negative_part() const { return negative_; }

private:
    LogNum positive_;
    LogNum negative_;
};

// log(exp(a) + exp(b)) without overflow.
long double log_add_exp(long double a, long double b);

// Signed sum of a whole span.
LogNum log_sum(std::span<const LogNum> values);

} // namespace shadowsec
