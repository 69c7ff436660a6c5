// Exact-system Monte Carlo: construct insertion, FACS selection (one or
// two stages), construct counts and the discovery event.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "screenopt/fluorescence.hpp"
#include "screenopt/screen_config.hpp"

namespace screenopt {

/// One replicate: the construct counts X_1..X_r, whether the target gene
/// landed strictly inside the top-v counts, and the number of target
/// cells passing the first selection.
struct SimResult {
    std::vector<std::int64_t> counts;
    bool discovered = false;
    std::int64_t selected_target_cells = 0;  // W_1
};

struct EstimateCI {
    double estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::int64_t replicates = 0;
};

/// 95% Wilson score interval for a binomial proportion.
EstimateCI wilson_interval(std::int64_t successes, std::int64_t trials);

/// Discovery indicator: strictly fewer than validate_count of the
/// non-target counts reach counts[0]; a tie with the v-th largest fails.
bool discovery_event(std::span<const std::int64_t> counts, int validate_count);

/// One single-stage replicate. Multinomial model: cell-type occupancies
/// are drawn as one multinomial and thinned per type by the selection
/// probabilities, which is distributionally identical to per-cell
/// simulation. Poisson model: per-cell simulation with zero-truncated
/// Poisson construct totals. Deterministic for a fixed seed.
SimResult simulate_single_stage(const ScreenConfig& config, const FluorescenceModel& fl,
                                double alpha, std::uint64_t seed);

/// One two-stage replicate: stage one as above, retaining each selected
/// cell's construct content; each selected ancestor contributes one
/// Bin(L, survival(beta)) draw of surviving descendants.
SimResult simulate_two_stage(const ScreenConfig& config, const FluorescenceModel& fl,
                             double alpha, double beta, std::uint64_t seed);

/// Runs `replicates` independent replicates (two-stage when beta is set)
/// in parallel and returns them indexed by replicate. The per-replicate
/// streams derive from the master seed alone, so the output is identical
/// for any worker count.
std::vector<SimResult> simulate_replicates(const ScreenConfig& config,
                                           const FluorescenceModel& fl, double alpha,
                                           std::optional<double> beta, std::int64_t replicates,
                                           std::uint64_t master_seed);

/// Monte Carlo estimate of the discovery probability with a 95% Wilson
/// interval. Same determinism contract as simulate_replicates.
EstimateCI estimate_pdisc(const ScreenConfig& config, const FluorescenceModel& fl, double alpha,
                          std::optional<double> beta, std::int64_t replicates,
                          std::uint64_t master_seed);

/// One draw of W_1, the number of target cells passing the first stage.
std::int64_t sample_w1(const ScreenConfig& config, const FluorescenceModel& fl, double alpha,
                       std::uint64_t seed);

/// Worker count for replicate-level parallelism: the SCREENOPT_THREADS
/// environment variable when set, otherwise all hardware threads.
unsigned worker_count();

}  // namespace screenopt
