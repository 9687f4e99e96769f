#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace herald {

/// A nonnegative quantity stored as its natural logarithm, so that
/// factorials and powers like lambda^(2n) at n ~ 1e5 stay representable.
class LogProb {
  public:
    // exp(x) underflows to subnormal territory below this; linear() reports 0 instead
    static constexpr double kLinearFloor = -700.0;

    static LogProb from_log(double log_value) { return LogProb(log_value); }

    static LogProb from_linear(double value) {
        return LogProb(value > 0.0 ? std::log(value)
                                   : -std::numeric_limits<double>::infinity());
    }

    double log() const { return log_value_; }

    /// exp of the stored log, or 0.0 when it is too small to represent well.
    double linear() const {
        return log_value_ > kLinearFloor ? std::exp(log_value_) : 0.0;
    }

    bool representable_linear() const { return log_value_ > kLinearFloor; }

  private:
    explicit LogProb(double log_value) : log_value_(log_value) {}
    double log_value_;
};

/// ln(n!) via lgamma; n is unbounded by any table size.
inline double log_factorial(long n) {
    return std::lgamma(static_cast<double>(n) + 1.0);
}

/// ln C(n, k)
inline double log_binomial(long n, long k) {
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

/// ln sum_i exp(terms_i), shifted by the max term. Empty input gives -inf.
double log_sum_exp(std::span<const double> terms);

}  // namespace herald
