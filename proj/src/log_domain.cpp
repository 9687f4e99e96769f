#include "herald/log_domain.hpp"

#include <algorithm>

namespace herald {

double log_sum_exp(std::span<const double> terms) {
    if (terms.empty()) return -std::numeric_limits<double>::infinity();
    const double m = *std::max_element(terms.begin(), terms.end());
    if (!std::isfinite(m)) return m;  // all -inf (or a stray inf/NaN)
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - m);
    return m + std::log(acc);
}

}  // namespace herald
