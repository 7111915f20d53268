#include "snv/common.hpp"

#include <cmath>

namespace snv {

int index_floor(double num, double den) {
    // Relative slack of 4e-12 absorbs accumulated rounding in ratios like t/dt
    // without ever skipping a genuinely fractional index.
    const double q = num / den;
    return static_cast<int>(std::floor(q * (1.0 + 4e-12)));
}

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

} // namespace snv
