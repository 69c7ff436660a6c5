#include "screenopt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "screenopt/moments.hpp"
#include "screenopt/simulator.hpp"
#include "screenopt/special_functions.hpp"

namespace screenopt {

namespace {

constexpr double kGolden = 0.6180339887498949;  // 1/phi
constexpr double kRefineTol = 1e-4;
constexpr double kFlatObjective = 1e-9;

struct Objective {
    std::function<Pdisc(double)> eval;
    CurveKind kind = CurveKind::approx;
};

std::pair<double, double> resolve_bounds(const FluorescenceModel& fl, const GridSpec& grid) {
    double lo = grid.lo ? *grid.lo : fl.quantile(Population::nontarget, 0.001);
    double hi = grid.hi ? *grid.hi : fl.quantile(Population::target, 0.9999);
    if (!(hi > lo)) throw std::invalid_argument("GridSpec: upper bound must exceed lower bound");
    return {lo, hi};
}

// Golden-section maximization, tracking the best point ever evaluated.
// Ties keep the smaller abscissa.
std::pair<double, double> golden_max(const std::function<double(double)>& f, double lo, double hi,
                                     double xtol) {
    double a = lo, b = hi;
    double c = b - kGolden * (b - a);
    double d = a + kGolden * (b - a);
    double fc = f(c), fd = f(d);
    double best_x = fc >= fd ? c : d;
    double best_f = std::max(fc, fd);
    while (b - a > xtol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGolden * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGolden * (b - a);
            fd = f(d);
        }
        double x = fc >= fd ? c : d;
        double fx = std::max(fc, fd);
        if (fx > best_f || (fx == best_f && x < best_x)) {
            best_x = x;
            best_f = fx;
        }
    }
    return {best_x, best_f};
}

OptimizationResult maximize_over_grid(const Objective& objective, double lo, double hi,
                                      int points) {
    if (points < 2) throw std::invalid_argument("GridSpec: at least 2 grid points required");
    OptimizationResult result;
    std::vector<double> xs(static_cast<std::size_t>(points));
    std::vector<Pdisc> values(static_cast<std::size_t>(points));
    const double step = (hi - lo) / (points - 1);
    bool any_live = false;
    int best = 0;
    for (int i = 0; i < points; ++i) {
        double x = lo + step * i;
        xs[static_cast<std::size_t>(i)] = x;
        Pdisc p = objective.eval(x);
        values[static_cast<std::size_t>(i)] = p;
        any_live |= !p.degenerate;
        CurvePoint pt;
        pt.threshold = x;
        pt.probability = p.value;
        pt.kind = objective.kind;
        pt.degenerate = p.degenerate;
        result.trace.points.push_back(pt);
        if (p.value > values[static_cast<std::size_t>(best)].value) best = i;
    }
    if (!any_live) throw std::runtime_error("selection always empty");

    double lo_val = values[0].value, hi_val = values[0].value;
    for (const Pdisc& p : values) {
        lo_val = std::min(lo_val, p.value);
        hi_val = std::max(hi_val, p.value);
    }
    result.no_signal = hi_val - lo_val <= kFlatObjective;

    double x_star = xs[static_cast<std::size_t>(best)];
    double f_star = values[static_cast<std::size_t>(best)].value;
    double bracket_lo = std::max(lo, x_star - step);
    double bracket_hi = std::min(hi, x_star + step);
    auto plain = [&](double x) { return objective.eval(x).value; };
    auto [x_ref, f_ref] = golden_max(plain, bracket_lo, bracket_hi, kRefineTol);
    if (f_ref > f_star) {
        x_star = x_ref;
        f_star = f_ref;
    }
    result.alpha_star = x_star;
    result.value = f_star;
    return result;
}

double expected_selected_cells(const ScreenConfig& config, const FluorescenceModel& fl,
                               double alpha) {
    const double s1 = fl.survival(Population::target, alpha);
    const double s2 = fl.survival(Population::nontarget, alpha);
    double target_frac = config.model == InsertionModel::poisson
                             ? poisson_target_fraction(config.moi, config.gene_count)
                             : 1.0 / static_cast<double>(config.gene_count);
    return static_cast<double>(config.cell_count) *
           (target_frac * s1 + (1.0 - target_frac) * s2);
}

// Per-cell probability of being a selected target cell.
double w1_cell_prob(const ScreenConfig& config, const FluorescenceModel& fl, double alpha) {
    const double s1 = fl.survival(Population::target, alpha);
    return config.model == InsertionModel::poisson
               ? poisson_target_fraction(config.moi, config.gene_count) * s1
               : s1 / static_cast<double>(config.gene_count);
}

}  // namespace

OptimizationResult optimize_alpha(const ScreenConfig& config, const FluorescenceModel& fl,
                                  const GridSpec& grid) {
    config.validate();
    auto [lo, hi] = resolve_bounds(fl, grid);
    Objective objective{[&](double alpha) { return pdisc_approx(config, fl, alpha); },
                        CurveKind::approx};
    return maximize_over_grid(objective, lo, hi, grid.points);
}

double max_alpha_for_w1(const ScreenConfig& config, const FluorescenceModel& fl, double bound,
                        W1Mode mode, double epsilon) {
    config.validate();
    if (!(bound >= 1.0)) throw std::invalid_argument("max_alpha_for_w1: bound must be >= 1");
    const double n = static_cast<double>(config.cell_count);
    const double target_frac = config.model == InsertionModel::poisson
                                   ? poisson_target_fraction(config.moi, config.gene_count)
                                   : 1.0 / static_cast<double>(config.gene_count);

    if (mode == W1Mode::expectation) {
        // E(W1) = n * target_frac * survival(alpha); invert in closed form.
        double required_survival = bound / (n * target_frac);
        if (required_survival >= 1.0) {
            throw InfeasibleConstraintError(
                "max_alpha_for_w1: expected W1 cannot reach the bound even with "
                "every cell selected");
        }
        return fl.quantile(Population::target, 1.0 - required_survival);
    }

    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("max_alpha_for_w1: epsilon must lie in (0, 1)");
    }
    const std::int64_t b_int = static_cast<std::int64_t>(std::ceil(bound));
    auto tail = [&](double alpha) {
        return binomial_upper_tail(config.cell_count, b_int,
                                   w1_cell_prob(config, fl, alpha));
    };
    const double req = 1.0 - epsilon;
    const Gaussian& g1 = fl.target();
    double lo = g1.mean - 40.0 * g1.sd;
    double hi = g1.mean + 40.0 * g1.sd;
    if (fl.scale() == FluorescenceModel::Scale::logarithmic) {
        lo = std::exp(lo);
        hi = std::exp(hi);
    }
    if (tail(lo) < req) {
        throw InfeasibleConstraintError(
            "max_alpha_for_w1: P(W1 >= bound) cannot reach 1-epsilon even with "
            "every cell selected");
    }
    // tail is non-increasing in alpha; keep lo feasible.
    while (hi - lo > 1e-9 * (1.0 + std::fabs(lo))) {
        double mid = 0.5 * (lo + hi);
        if (tail(mid) >= req) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

OptimizationResult optimize_beta(const ScreenConfig& config, const FluorescenceModel& fl,
                                 double alpha_star, const GridSpec& grid,
                                 const SimObjective& sim) {
    config.validate();
    auto [lo, hi] = resolve_bounds(fl, grid);
    Objective objective;
    if (config.model == InsertionModel::multinomial) {
        objective = {[&, alpha_star](double beta) {
                         return pdisc_approx_two_stage(config, fl, alpha_star, beta);
                     },
                     CurveKind::approx};
    } else {
        objective = {[&, alpha_star](double beta) {
                         EstimateCI e = estimate_pdisc(config, fl, alpha_star, beta,
                                                       sim.replicates, sim.seed);
                         return Pdisc{e.estimate, false};
                     },
                     CurveKind::simulated};
    }
    OptimizationResult result = maximize_over_grid(objective, lo, hi, grid.points);
    result.beta_star = result.alpha_star;
    result.alpha_star = alpha_star;
    result.constraint_active = true;
    return result;
}

int descendants_for_capacity(const ScreenConfig& config, const FluorescenceModel& fl,
                             double alpha, double capacity) {
    config.validate();
    if (!(capacity > 0.0)) {
        throw std::invalid_argument("descendants_for_capacity: capacity must be positive");
    }
    double selected = expected_selected_cells(config, fl, alpha);
    if (!(selected > 0.0)) {
        throw std::runtime_error("descendants_for_capacity: selection always empty");
    }
    double ratio = capacity / selected;
    return std::max(1, static_cast<int>(std::ceil(ratio - 1e-9)));
}

}  // namespace screenopt
