// SPDX-License-Identifier: Apache-2.0
#include "shadowsec/lognum.hpp"

#include <algorithm>

namespace shadowsec {

LogNum LogNum::from_double(double v) {
    if (v == 0.0)
        return zero();
    return {std::log(std::fabs(static_cast<long double>(v))), v > 0.0 ? 1 : -1};
}

double LogNum::to_double() const {
    if (sign == 0)
        return 0.0;
    return static_cast<double>(sign * std::exp(log_magnitude));
}

LogNum LogNum::pow(double exponent) const {
    if (exponent == 0.0)
        return one();
    if (sign == 0)
        return zero();
    // Negative bases only appear with integral exponents.
    int s = 1;
    if (sign < 0 && std::fmod(std::fabs(exponent), 2.0) == 1.0)
        s = -1;
    return {log_magnitude * exponent, s};
}

LogNum& LogNum::operator*=(LogNum rhs) {
    if (sign == 0 || rhs.sign == 0) {
        *this = zero();
        return *this;
    }
    log_magnitude += rhs.log_magnitude;
    sign *= rhs.sign;
    return *this;
}

LogNum& LogNum::operator/=(LogNum rhs) {
    if (rhs.sign == 0) {
        log_magnitude = std::numeric_limits<long double>::infinity();
        return *this;
    }
    if (sign == 0)
        return *this;
    log_magnitude -= rhs.log_magnitude;
    sign *= rhs.sign;
    return *this;
}

LogNum& LogNum::operator+=(LogNum rhs) {
    if (rhs.sign == 0)
        return *this;
    if (sign == 0) {
        *this = rhs;
        return *this;
    }
    const long double hi = std::max(log_magnitude, rhs.log_magnitude);
    const long double lo = std::min(log_magnitude, rhs.log_magnitude);
    const int hi_sign = log_magnitude >= rhs.log_magnitude ? sign : rhs.sign;
    if (sign == rhs.sign) {
        log_magnitude = hi + std::log1p(std::exp(lo - hi));
        return *this;
    }
    if (hi == lo) {
        *this = zero();
        return *this;
    }
    log_magnitude = hi + std::log1p(-std::exp(lo - hi));
    sign = hi_sign;
    return *this;
}

void LogAccumulator::add(LogNum v) {
    if (v.sign > 0)
        positive_ += v;
    else if (v.sign < 0)
        negative_ += v.abs();
}

long double log_add_exp(long double a, long double b) {
    if (a == -std::numeric_limits<long double>::infinity())
        return b;
    if (b == -std::numeric_limits<long double>::infinity())
        return a;
    const long double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

LogNum log_sum(std::span<const LogNum> values) {
    LogAccumulator acc;
    for (const auto& v : values)
        acc.add(v);
    return acc.total();
}

} // namespace shadowsec
