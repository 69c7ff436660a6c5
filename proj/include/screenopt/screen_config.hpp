// Screen experiment parameters.
#pragma once

#include <cstdint>

namespace screenopt {

enum class InsertionModel { multinomial, poisson };

/// Experiment description: r genes, n sorted cells, v genes sent to
/// validation, the construct insertion model and, for two-stage screens,
/// the number of descendants grown per selected cell.
struct ScreenConfig {
    std::int64_t gene_count = 0;   // r
    std::int64_t cell_count = 0;   // n
    int validate_count = 0;        // v
    InsertionModel model = InsertionModel::multinomial;
    double moi = 0.0;              // lambda; required for the Poisson model
    int descendants = 1;           // L; meaningful for two-stage screens

    /// Throws std::invalid_argument if any field is out of range.
    void validate() const;
};

}  // namespace screenopt
