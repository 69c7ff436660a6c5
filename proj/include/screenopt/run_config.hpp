// Config-file driven run description for the command-line tool.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "screenopt/fluorescence.hpp"
#include "screenopt/optimizer.hpp"
#include "screenopt/screen_config.hpp"

namespace screenopt {

/// Parse or validation failure; the message is anchored to file:line
/// whenever the offending line is known.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class SweepParameter { none, g1_mean, v };

struct CurveSpec {
    double alpha_min = -1.0;
    double alpha_max = 3.0;
    double alpha_step = 0.1;
    std::int64_t replicates = 0;
    SweepParameter sweep = SweepParameter::none;
    std::vector<double> sweep_values;
    std::uint64_t seed = 12345;
    std::string out = "curve.csv";
};

struct SimulateSpec {
    double alpha = 0.0;
    bool two_stage = false;
    double beta = 0.0;
    std::int64_t replicates = 10000;
    std::uint64_t seed = 12345;
    std::string out = "simulate.json";
};

struct OptimizeSpec {
    bool two_stage = false;
    double w1_bound = 10.0;  // b
    double epsilon = 0.05;
    W1Mode w1_mode = W1Mode::expectation;
    std::optional<double> capacity;  // derives L when set
    int grid_points = 61;
    std::optional<double> alpha_min, alpha_max;
    std::optional<double> beta_min, beta_max;
    std::int64_t sim_replicates = 2000;
    std::int64_t sim_refine_replicates = 0;
    std::uint64_t seed = 12345;
    std::string out = "optimize.json";
};

struct CompareSpec {
    std::int64_t single_n = 0;
    double w1_bound = 10.0;
    double epsilon = 0.05;
    W1Mode w1_mode = W1Mode::expectation;
    double alpha_min = -1.0;
    double alpha_max = 3.0;
    double alpha_step = 0.1;
    double beta_min = -1.0;
    double beta_max = 3.0;
    double beta_step = 0.1;
    std::int64_t replicates = 0;
    std::uint64_t seed = 12345;
    std::string out = "compare.csv";
};

struct RunConfig {
    ScreenConfig screen;
    bool lognormal = false;
    Gaussian g1{0.0, 1.0};
    Gaussian g2{0.0, 1.0};
    std::optional<CurveSpec> curve;
    std::optional<SimulateSpec> simulate;
    std::optional<OptimizeSpec> optimize;
    std::optional<CompareSpec> compare;

    FluorescenceModel fluorescence() const;
};

/// Reads an INI-style config: [screen] and [fluorescence] sections plus one
/// section per command. Unknown sections or keys are rejected (with the
/// offending line), as are malformed values.
RunConfig parse_run_config(const std::string& path);

/// Same parser over in-memory text; `name` labels error messages.
RunConfig parse_run_config_text(const std::string& text, const std::string& name);

}  // namespace screenopt
