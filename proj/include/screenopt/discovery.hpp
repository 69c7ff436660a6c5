// Normal approximation to the probability of discovering the target gene.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "screenopt/fluorescence.hpp"
#include "screenopt/moments.hpp"
#include "screenopt/screen_config.hpp"

namespace screenopt {

/// Parameters of the independent normal surrogates for the construct
/// counts: X~_1 (target gene) and X~_i, i >= 2 (each non-target gene).
/// `degenerate` marks a vanishing variance (selection empty at machine
/// precision), where the surrogate distribution collapses.
struct NormalApprox {
    double mean_target = 0.0;
    double sd_target = 0.0;
    double mean_other = 0.0;
    double sd_other = 0.0;
    bool degenerate = false;
};

NormalApprox normal_approx(const ScreenConfig& config, const FluorescenceModel& fl, double alpha);
NormalApprox normal_approx_two_stage(const ScreenConfig& config, const FluorescenceModel& fl,
                                     double alpha, double beta);

struct Pdisc {
    double value = 0.0;
    bool degenerate = false;
};

/// Approximate probability that the target count strictly exceeds the
/// v-th largest non-target count, computed as the order-statistic CDF
/// integrated against the target surrogate's density. Degenerate
/// thresholds (empty selection) yield {0, true}.
Pdisc pdisc_approx(const ScreenConfig& config, const FluorescenceModel& fl, double alpha);

/// Same pipeline driven by the two-stage moments (multinomial only).
Pdisc pdisc_approx_two_stage(const ScreenConfig& config, const FluorescenceModel& fl,
                             double alpha, double beta);

/// Standardizes observed construct counts: (X_i - E X_i) / sd(X_i).
/// Supplying `beta` selects the two-stage moment kernel. Throws
/// std::domain_error when a count variance is zero.
std::vector<double> normalize_counts(std::span<const std::int64_t> counts,
                                     const ScreenConfig& config, const FluorescenceModel& fl,
                                     double alpha, std::optional<double> beta = std::nullopt);

enum class CurveKind { approx, simulated };

struct CurvePoint {
    double threshold = 0.0;
    double probability = 0.0;
    CurveKind kind = CurveKind::approx;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    bool degenerate = false;
};

/// Discovery-probability curve over a threshold grid; thresholds are
/// strictly increasing and probabilities lie in [0, 1].
struct DiscoveryCurve {
    std::vector<CurvePoint> points;
};

}  // namespace screenopt
