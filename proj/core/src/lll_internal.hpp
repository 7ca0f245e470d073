#pragma once

#include <vector>

namespace coldgas::lll::detail {

/// log(m!) for 0 <= m < 4096, accumulated in long double.
double log_factorial(int m);

/// C(s, k) / 2^s for s < 1024 (exact while the dyadic fits a double).
double half_binomial(int s, int k);

}  // namespace coldgas::lll::detail
