#include "screenopt/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <vector>

#include <json.hpp>

#include "screenopt/moments.hpp"
#include "screenopt/rng.hpp"
#include "screenopt/simulator.hpp"

namespace screenopt {

namespace {

using json = nlohmann::ordered_json;

// Shortest decimal representation that parses back to the same double.
std::string format_double(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

std::string format_prob(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return buf;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

int threshold_count(double lo, double hi, double step) {
    return static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

const char* model_name(InsertionModel model) {
    return model == InsertionModel::poisson ? "poisson" : "multinomial";
}

json screen_json(const ScreenConfig& screen) {
    json j;
    j["model"] = model_name(screen.model);
    j["r"] = screen.gene_count;
    j["n"] = screen.cell_count;
    j["v"] = screen.validate_count;
    if (screen.model == InsertionModel::poisson) j["lambda"] = screen.moi;
    return j;
}

struct CurveRow {
    double threshold = 0.0;
    Pdisc approx;
    std::optional<EstimateCI> sim;
};

void write_curve_rows(std::ofstream& out, const std::vector<CurveRow>& rows,
                      const std::string& stage_label = {}) {
    for (const CurveRow& row : rows) {
        if (!stage_label.empty()) out << stage_label << ",";
        out << format_double(row.threshold) << "," << format_prob(row.approx.value) << ",";
        if (row.sim) {
            out << format_prob(row.sim->estimate) << "," << format_prob(row.sim->ci_low) << ","
                << format_prob(row.sim->ci_high);
        } else {
            out << ",,";
        }
        out << "," << (row.approx.degenerate ? 1 : 0) << "\n";
    }
}

std::vector<CurveRow> evaluate_curve(const ScreenConfig& screen, const FluorescenceModel& fl,
                                     double lo, double step, int count,
                                     std::optional<double> fixed_alpha_for_beta,
                                     std::int64_t replicates, std::uint64_t seed) {
    std::vector<CurveRow> rows;
    rows.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        CurveRow row;
        row.threshold = lo + step * i;
        if (fixed_alpha_for_beta) {
            row.approx = pdisc_approx_two_stage(screen, fl, *fixed_alpha_for_beta, row.threshold);
        } else {
            row.approx = pdisc_approx(screen, fl, row.threshold);
        }
        if (replicates > 0) {
            std::optional<double> beta;
            double alpha = row.threshold;
            if (fixed_alpha_for_beta) {
                beta = row.threshold;
                alpha = *fixed_alpha_for_beta;
            }
            row.sim = estimate_pdisc(screen, fl, alpha, beta, replicates,
                                     stream_seed(seed, static_cast<std::uint64_t>(i)));
        }
        rows.push_back(row);
    }
    return rows;
}

// "curve.csv" + ("g1_mean", 0.2) -> "curve_g1_mean_0.2.csv"
std::string sweep_path(const std::string& base, const std::string& param, double value) {
    char val[32];
    std::snprintf(val, sizeof(val), "%g", value);
    std::string suffix = "_" + param + "_" + val;
    std::size_t dot = base.find_last_of('.');
    std::size_t slash = base.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return base + suffix;
    }
    return base.substr(0, dot) + suffix + base.substr(dot);
}

json error_json(const std::string& command, const std::string& type, const std::string& message) {
    json j;
    j["command"] = command;
    j["error"] = json{{"type", type}, {"message", message}};
    return j;
}

json trace_json(const DiscoveryCurve& curve) {
    json arr = json::array();
    for (const CurvePoint& pt : curve.points) {
        json p;
        p["threshold"] = pt.threshold;
        p["value"] = pt.probability;
        p["kind"] = pt.kind == CurveKind::approx ? "approx" : "simulated";
        p["degenerate"] = pt.degenerate;
        arr.push_back(std::move(p));
    }
    return arr;
}

// Monte Carlo re-ranking of the leading analytic candidates.
void refine_by_simulation(const ScreenConfig& screen, const FluorescenceModel& fl,
                          OptimizationResult& result, bool two_stage, std::int64_t replicates,
                          std::uint64_t seed) {
    std::vector<double> candidates;
    candidates.push_back(two_stage ? *result.beta_star : result.alpha_star);
    std::vector<const CurvePoint*> pts;
    for (const CurvePoint& pt : result.trace.points) pts.push_back(&pt);
    std::sort(pts.begin(), pts.end(), [](const CurvePoint* a, const CurvePoint* b) {
        return a->probability > b->probability;
    });
    for (std::size_t i = 0; i < pts.size() && candidates.size() < 4; ++i) {
        if (!pts[i]->degenerate) candidates.push_back(pts[i]->threshold);
    }
    double best_value = -1.0;
    double best_threshold = candidates.front();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        double alpha = two_stage ? result.alpha_star : candidates[i];
        std::optional<double> beta;
        if (two_stage) beta = candidates[i];
        EstimateCI est = estimate_pdisc(screen, fl, alpha, beta, replicates,
                                        stream_seed(seed, static_cast<std::uint64_t>(i)));
        if (est.estimate > best_value) {
            best_value = est.estimate;
            best_threshold = candidates[i];
        }
    }
    if (two_stage) {
        result.beta_star = best_threshold;
    } else {
        result.alpha_star = best_threshold;
    }
    result.value = best_value;
}

}  // namespace

int cmd_curve(const RunConfig& config, const CommandOverrides& overrides) {
    if (!config.curve) throw ConfigError("config: the curve command requires a [curve] section");
    CurveSpec spec = *config.curve;
    if (overrides.seed) spec.seed = *overrides.seed;
    if (overrides.replicates) spec.replicates = *overrides.replicates;
    if (overrides.out) spec.out = *overrides.out;

    const int count = threshold_count(spec.alpha_min, spec.alpha_max, spec.alpha_step);
    const char* header = "threshold,pdisc_approx,pdisc_sim,ci_low,ci_high,degenerate_flag\n";

    struct SweepCase {
        std::string path;
        ScreenConfig screen;
        FluorescenceModel fl;
    };
    std::vector<SweepCase> cases;
    if (spec.sweep == SweepParameter::none) {
        cases.push_back({spec.out, config.screen, config.fluorescence()});
    } else {
        for (double value : spec.sweep_values) {
            SweepCase sc{spec.out, config.screen, config.fluorescence()};
            if (spec.sweep == SweepParameter::g1_mean) {
                Gaussian g1 = config.g1;
                g1.mean = value;
                sc.fl = config.lognormal ? FluorescenceModel::lognormal(g1, config.g2)
                                         : FluorescenceModel(g1, config.g2);
                sc.path = sweep_path(spec.out, "g1_mean", value);
            } else {
                sc.screen.validate_count = static_cast<int>(value);
                sc.screen.validate();
                sc.path = sweep_path(spec.out, "v", value);
            }
            cases.push_back(std::move(sc));
        }
    }

    for (std::size_t c = 0; c < cases.size(); ++c) {
        const SweepCase& sc = cases[c];
        std::uint64_t case_seed =
            cases.size() == 1 ? spec.seed : stream_seed(spec.seed, static_cast<std::uint64_t>(c));
        auto rows = evaluate_curve(sc.screen, sc.fl, spec.alpha_min, spec.alpha_step, count,
                                   std::nullopt, spec.replicates, case_seed);
        auto out = open_output(sc.path);
        out << header;
        write_curve_rows(out, rows);
        if (!out.good()) throw std::runtime_error("failed writing " + sc.path);
        std::cout << "wrote " << sc.path << "\n";
    }
    return 0;
}

int cmd_simulate(const RunConfig& config, const CommandOverrides& overrides) {
    if (!config.simulate) {
        throw ConfigError("config: the simulate command requires a [simulate] section");
    }
    SimulateSpec spec = *config.simulate;
    if (overrides.seed) spec.seed = *overrides.seed;
    if (overrides.replicates) spec.replicates = *overrides.replicates;
    if (overrides.out) spec.out = *overrides.out;

    std::optional<double> beta;
    if (spec.two_stage) beta = spec.beta;
    EstimateCI est = estimate_pdisc(config.screen, config.fluorescence(), spec.alpha, beta,
                                    spec.replicates, spec.seed);

    json j;
    j["command"] = "simulate";
    j["screen"] = screen_json(config.screen);
    if (spec.two_stage) j["screen"]["L"] = config.screen.descendants;
    j["alpha"] = spec.alpha;
    if (spec.two_stage) j["beta"] = spec.beta;
    j["estimate"] = est.estimate;
    j["ci_low"] = est.ci_low;
    j["ci_high"] = est.ci_high;
    j["replicates"] = est.replicates;
    j["seed"] = spec.seed;

    auto out = open_output(spec.out);
    out << j.dump(2) << "\n";
    if (!out.good()) throw std::runtime_error("failed writing " + spec.out);
    std::cout << "wrote " << spec.out << "\n";
    return 0;
}

int cmd_optimize(const RunConfig& config, const CommandOverrides& overrides) {
    if (!config.optimize) {
        throw ConfigError("config: the optimize command requires an [optimize] section");
    }
    OptimizeSpec spec = *config.optimize;
    if (overrides.seed) spec.seed = *overrides.seed;
    if (overrides.replicates) spec.sim_refine_replicates = *overrides.replicates;
    if (overrides.out) spec.out = *overrides.out;

    const FluorescenceModel fl = config.fluorescence();
    ScreenConfig screen = config.screen;

    json j;
    j["command"] = "optimize";
    j["screen"] = screen_json(screen);
    j["two_stage"] = spec.two_stage;

    try {
        if (!spec.two_stage) {
            GridSpec grid{spec.alpha_min, spec.alpha_max, spec.grid_points};
            OptimizationResult res = optimize_alpha(screen, fl, grid);
            if (spec.sim_refine_replicates > 0) {
                refine_by_simulation(screen, fl, res, false, spec.sim_refine_replicates,
                                     spec.seed);
                j["sim_refine_replicates"] = spec.sim_refine_replicates;
            }
            j["alpha_star"] = res.alpha_star;
            j["value"] = res.value;
            j["no_signal"] = res.no_signal;
            j["trace"] = trace_json(res.trace);
        } else {
            double alpha_star =
                max_alpha_for_w1(screen, fl, spec.w1_bound, spec.w1_mode, spec.epsilon);
            if (spec.capacity) {
                screen.descendants = descendants_for_capacity(screen, fl, alpha_star,
                                                              *spec.capacity);
            }
            GridSpec grid{spec.beta_min, spec.beta_max, spec.grid_points};
            OptimizationResult res =
                optimize_beta(screen, fl, alpha_star, grid, {spec.sim_replicates, spec.seed});
            if (spec.sim_refine_replicates > 0) {
                refine_by_simulation(screen, fl, res, true, spec.sim_refine_replicates,
                                     spec.seed);
                j["sim_refine_replicates"] = spec.sim_refine_replicates;
            }
            j["screen"]["L"] = screen.descendants;
            if (spec.capacity) j["stage_two_capacity"] = *spec.capacity;
            json constraint;
            constraint["b"] = spec.w1_bound;
            constraint["mode"] =
                spec.w1_mode == W1Mode::expectation ? "expectation" : "probability";
            if (spec.w1_mode == W1Mode::probability) constraint["epsilon"] = spec.epsilon;
            constraint["alpha_star"] = alpha_star;
            constraint["expected_w1"] =
                static_cast<double>(screen.cell_count) *
                (screen.model == InsertionModel::poisson
                     ? poisson_target_fraction(screen.moi, screen.gene_count)
                     : 1.0 / static_cast<double>(screen.gene_count)) *
                fl.survival(Population::target, alpha_star);
            constraint["active"] = res.constraint_active;
            j["constraint"] = std::move(constraint);
            j["alpha_star"] = res.alpha_star;
            j["beta_star"] = *res.beta_star;
            j["value"] = res.value;
            j["no_signal"] = res.no_signal;
            j["trace"] = trace_json(res.trace);
        }
    } catch (const InfeasibleConstraintError& err) {
        std::cout << error_json("optimize", "infeasible_constraint", err.what()).dump(2) << "\n";
        return 2;
    }

    auto out = open_output(spec.out);
    out << j.dump(2) << "\n";
    if (!out.good()) throw std::runtime_error("failed writing " + spec.out);
    std::cout << "wrote " << spec.out << "\n";
    return 0;
}

int cmd_compare_stages(const RunConfig& config, const CommandOverrides& overrides) {
    if (!config.compare) {
        throw ConfigError("config: the compare-stages command requires a [compare] section");
    }
    CompareSpec spec = *config.compare;
    if (overrides.seed) spec.seed = *overrides.seed;
    if (overrides.replicates) spec.replicates = *overrides.replicates;
    if (overrides.out) spec.out = *overrides.out;

    const FluorescenceModel fl = config.fluorescence();

    ScreenConfig single = config.screen;
    single.cell_count = spec.single_n;
    single.descendants = 1;
    single.validate();
    const ScreenConfig& two = config.screen;

    double alpha_star = 0.0;
    try {
        alpha_star = max_alpha_for_w1(two, fl, spec.w1_bound, spec.w1_mode, spec.epsilon);
    } catch (const InfeasibleConstraintError& err) {
        std::cout << error_json("compare-stages", "infeasible_constraint", err.what()).dump(2)
                  << "\n";
        return 2;
    }

    const int alpha_count = threshold_count(spec.alpha_min, spec.alpha_max, spec.alpha_step);
    const int beta_count = threshold_count(spec.beta_min, spec.beta_max, spec.beta_step);
    auto single_rows =
        evaluate_curve(single, fl, spec.alpha_min, spec.alpha_step, alpha_count, std::nullopt,
                       spec.replicates, stream_seed(spec.seed, 1));
    auto two_rows = evaluate_curve(two, fl, spec.beta_min, spec.beta_step, beta_count, alpha_star,
                                   spec.replicates, stream_seed(spec.seed, 2));

    auto out = open_output(spec.out);
    out << "stage,threshold,pdisc_approx,pdisc_sim,ci_low,ci_high,degenerate_flag\n";
    write_curve_rows(out, single_rows, "single");
    write_curve_rows(out, two_rows, "two");
    if (!out.good()) throw std::runtime_error("failed writing " + spec.out);
    std::cout << "wrote " << spec.out << "\n";
    return 0;
}

}  // namespace screenopt
