// CDF of the v-th largest of r-1 iid variables, as a function of the
// per-variable CDF value.
#pragma once

#include <cstdint>

namespace screenopt {

/// P(v-th largest of r-1 iid draws <= x) given x_prob = F(x) for the
/// common CDF F. Equals the upper tail P(Bin(r-1, x_prob) >= r-v),
/// evaluated through the regularized incomplete beta so that gene counts
/// in the thousands neither overflow nor lose the tails.
double order_stat_cdf(double x_prob, std::int64_t gene_count, int validate_count);

}  // namespace screenopt
