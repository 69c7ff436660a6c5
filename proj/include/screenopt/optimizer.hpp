// Threshold optimization: the single-stage alpha*, the budget-constrained
// two-stage alpha*, and the second-stage beta*.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "screenopt/discovery.hpp"
#include "screenopt/fluorescence.hpp"
#include "screenopt/screen_config.hpp"

namespace screenopt {

/// Search grid. Unset bounds default to
/// [nontarget quantile 0.001, target quantile 0.9999].
struct GridSpec {
    std::optional<double> lo;
    std::optional<double> hi;
    int points = 61;
};

struct OptimizationResult {
    double alpha_star = 0.0;
    std::optional<double> beta_star;
    double value = 0.0;
    bool no_signal = false;         // objective flat over the whole grid
    bool constraint_active = false; // alpha fixed by the W1 budget
    DiscoveryCurve trace;           // every grid evaluation, in grid order
};

/// Thrown when the W1 budget cannot be met by any threshold.
class InfeasibleConstraintError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Maximizes the approximate discovery probability over the selection
/// threshold: coarse grid scan, then golden-section refinement around the
/// best grid point to |delta| <= 1e-4. Ties break toward smaller alpha.
/// Throws std::runtime_error("selection always empty") when every grid
/// point is degenerate.
OptimizationResult optimize_alpha(const ScreenConfig& config, const FluorescenceModel& fl,
                                  const GridSpec& grid = {});

enum class W1Mode { expectation, probability };

/// Largest alpha whose first-stage selected-target-cell count W1 meets
/// the budget: E(W1) >= bound (closed form), or P(W1 >= bound) >= 1-epsilon
/// (exact binomial tail, bisection to 1e-6 in alpha).
double max_alpha_for_w1(const ScreenConfig& config, const FluorescenceModel& fl, double bound,
                        W1Mode mode, double epsilon = 0.05);

/// Simulation fallback used by optimize_beta when no analytic objective
/// exists (Poisson two-stage).
struct SimObjective {
    std::int64_t replicates = 2000;
    std::uint64_t seed = 12345;
};

/// Maximizes the two-stage discovery probability over the second-stage
/// threshold at a fixed alpha. Multinomial model: analytic objective;
/// Poisson model: Monte Carlo objective with a fixed replicate budget.
OptimizationResult optimize_beta(const ScreenConfig& config, const FluorescenceModel& fl,
                                 double alpha_star, const GridSpec& grid = {},
                                 const SimObjective& sim = {});

/// Smallest descendant count L so that the expected number of cells
/// processed in the second stage reaches `capacity`.
int descendants_for_capacity(const ScreenConfig& config, const FluorescenceModel& fl,
                             double alpha, double capacity);

}  // namespace screenopt
