#include "screenopt/screen_config.hpp"

#include <stdexcept>

namespace screenopt {

void ScreenConfig::validate() const {
    if (gene_count < 2) {
        throw std::invalid_argument("ScreenConfig: gene_count must be at least 2");
    }
    if (cell_count < 1) {
        throw std::invalid_argument("ScreenConfig: cell_count must be at least 1");
    }
    if (validate_count < 1 || validate_count > gene_count - 1) {
        throw std::invalid_argument("ScreenConfig: validate_count must lie in [1, gene_count-1]");
    }
    if (model == InsertionModel::poisson && !(moi > 0.0)) {
        throw std::invalid_argument("ScreenConfig: the Poisson model requires moi > 0");
    }
    if (descendants < 1) {
        throw std::invalid_argument("ScreenConfig: descendants must be at least 1");
    }
}

}  // namespace screenopt
