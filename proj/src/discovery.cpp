#include "screenopt/discovery.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "screenopt/normal.hpp"
#include "screenopt/order_stats.hpp"
#include "screenopt/quadrature.hpp"

namespace screenopt {

namespace {

NormalApprox approx_from_cell_moments(const ScreenConfig& config, const CellMoments& m) {
    const double n = static_cast<double>(config.cell_count);
    NormalApprox ap;
    ap.mean_target = n * m.mean_target;
    ap.mean_other = n * m.mean_other;
    const double var_t = n * m.var_target;
    const double var_o = n * m.var_other;
    ap.degenerate = !(var_t > 0.0) || !(var_o > 0.0);
    ap.sd_target = var_t > 0.0 ? std::sqrt(var_t) : 0.0;
    ap.sd_other = var_o > 0.0 ? std::sqrt(var_o) : 0.0;
    return ap;
}

Pdisc pdisc_from_approx(const NormalApprox& ap, const ScreenConfig& config) {
    if (ap.degenerate) return {0.0, true};
    const std::int64_t r = config.gene_count;
    const int v = config.validate_count;
    auto integrand = [&](double x) {
        double q = normal_cdf((x - ap.mean_other) / ap.sd_other);
        double density = normal_pdf((x - ap.mean_target) / ap.sd_target) / ap.sd_target;
        return order_stat_cdf(q, r, v) * density;
    };
    // Tails beyond ten target sds contribute < 1e-20 to a [0,1]-bounded
    // integrand.
    auto quad = integrate_adaptive(integrand, ap.mean_target - 10.0 * ap.sd_target,
                                   ap.mean_target + 10.0 * ap.sd_target, 1e-9);
    return {std::clamp(quad.value, 0.0, 1.0), false};
}

}  // namespace

NormalApprox normal_approx(const ScreenConfig& config, const FluorescenceModel& fl, double alpha) {
    return approx_from_cell_moments(config, cell_moments(config, fl, alpha));
}

NormalApprox normal_approx_two_stage(const ScreenConfig& config, const FluorescenceModel& fl,
                                     double alpha, double beta) {
    return approx_from_cell_moments(config, two_stage_moments(config, fl, alpha, beta));
}

Pdisc pdisc_approx(const ScreenConfig& config, const FluorescenceModel& fl, double alpha) {
    return pdisc_from_approx(normal_approx(config, fl, alpha), config);
}

Pdisc pdisc_approx_two_stage(const ScreenConfig& config, const FluorescenceModel& fl,
                             double alpha, double beta) {
    return pdisc_from_approx(normal_approx_two_stage(config, fl, alpha, beta), config);
}

std::vector<double> normalize_counts(std::span<const std::int64_t> counts,
                                     const ScreenConfig& config, const FluorescenceModel& fl,
                                     double alpha, std::optional<double> beta) {
    config.validate();
    if (static_cast<std::int64_t>(counts.size()) != config.gene_count) {
        throw std::invalid_argument("normalize_counts: counts size must equal gene_count");
    }
    const CellMoments m = beta ? two_stage_moments(config, fl, alpha, *beta)
                               : cell_moments(config, fl, alpha);
    const double n = static_cast<double>(config.cell_count);
    const double var_t = n * m.var_target;
    const double var_o = n * m.var_other;
    if (!(var_t > 0.0) || !(var_o > 0.0)) {
        throw std::domain_error("normalize_counts: zero count variance at this threshold");
    }
    std::vector<double> normalized(counts.size());
    normalized[0] = (static_cast<double>(counts[0]) - n * m.mean_target) / std::sqrt(var_t);
    const double sd_o = std::sqrt(var_o);
    for (std::size_t i = 1; i < counts.size(); ++i) {
        normalized[i] = (static_cast<double>(counts[i]) - n * m.mean_other) / sd_o;
    }
    return normalized;
}

}  // namespace screenopt
