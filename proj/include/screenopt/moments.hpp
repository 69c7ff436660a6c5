// Closed-form moments of a single cell's contribution to the construct
// counts, for both insertion models and for one- and two-stage sorting.
#pragma once

#include "screenopt/fluorescence.hpp"
#include "screenopt/screen_config.hpp"

namespace screenopt {

/// Moments of the per-cell contribution to X_1 (target gene) and to X_i,
/// i >= 2 (any fixed non-target gene). m3 fields are raw third moments.
struct CellMoments {
    double mean_target = 0.0;
    double mean_other = 0.0;
    double var_target = 0.0;
    double var_other = 0.0;
    double cov_target_other = 0.0;
    double cov_other_other = 0.0;
    double m3_target = 0.0;
    double m3_other = 0.0;
};

/// Cell-category probabilities under the multinomial model: not selected,
/// selected carrying the target construct, selected carrying one specific
/// non-target construct.
struct CellProbs {
    double none = 0.0;    // p0
    double target = 0.0;  // p1
    double other = 0.0;   // p_i, i >= 2
};

CellProbs multinomial_cell_probs(const ScreenConfig& config, const FluorescenceModel& fl,
                                 double alpha);

CellMoments multinomial_moments(const ScreenConfig& config, const FluorescenceModel& fl,
                                double alpha);

/// Probability that a processed cell is a target cell under the
/// zero-truncated Poisson model: (1 - e^{-moi/r}) / (1 - e^{-moi}).
double poisson_target_fraction(double moi, std::int64_t gene_count);

CellMoments poisson_moments(const ScreenConfig& config, const FluorescenceModel& fl,
                            double alpha);

/// Two-stage (grow-and-resort) moments. Only the multinomial model has a
/// closed form; requesting the Poisson model throws std::invalid_argument
/// (the simulator covers that combination).
CellMoments two_stage_moments(const ScreenConfig& config, const FluorescenceModel& fl,
                              double alpha, double beta);

/// Single-stage moments dispatched on config.model.
CellMoments cell_moments(const ScreenConfig& config, const FluorescenceModel& fl, double alpha);

}  // namespace screenopt
