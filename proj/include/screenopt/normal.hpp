// Standard normal distribution primitives used throughout the library.
#pragma once

namespace screenopt {

double normal_pdf(double z);

/// CDF of the standard normal, accurate to <1e-15 absolute for |z| <= 8.
double normal_cdf(double z);

/// Upper tail 1 - CDF(z), evaluated without cancellation for large z.
double normal_survival(double z);

/// log of the upper tail; remains finite far beyond the underflow point
/// of normal_survival (an asymptotic expansion takes over for large z).
double normal_log_survival(double z);

/// Inverse CDF. Throws std::domain_error unless 0 < p < 1.
double normal_quantile(double p);

}  // namespace screenopt
