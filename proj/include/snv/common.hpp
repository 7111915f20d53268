#pragma once

#include <cstddef>
#include <stdexcept>

namespace snv {

/// Invalid user-facing configuration (CLI exit code 1).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A runtime invariant of the scheme was violated, or internal misuse (CLI exit code 2).
struct invariant_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// floor(num/den) that tolerates the quotient sitting a few ulps below an integer,
/// so ratios like 0.3/0.1 or eta/dx resolve to the intended count.
int index_floor(double num, double den);

/// Deterministic pairwise summation with a fixed association, independent of the
/// caller's threading; used wherever bit-identical reductions are required.
double pairwise_sum(const double* x, std::size_t n);

} // namespace snv
