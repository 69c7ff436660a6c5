// Regularized incomplete beta and binomial tail probabilities.
#pragma once

#include <cstdint>

namespace screenopt {

double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b), a,b > 0, x in [0,1].
/// Continued-fraction evaluation with the prefactor formed in log space,
/// so large (a, b) do not overflow.
double ibeta(double a, double b, double x);

/// P(Bin(n, p) >= k).
double binomial_upper_tail(std::int64_t n, std::int64_t k, double p);

}  // namespace screenopt
