#include "screenopt/order_stats.hpp"

#include <stdexcept>

#include "screenopt/special_functions.hpp"

namespace screenopt {

double order_stat_cdf(double x_prob, std::int64_t gene_count, int validate_count) {
    if (gene_count < 2) {
        throw std::domain_error("order_stat_cdf: gene_count must be at least 2");
    }
    if (validate_count < 1 || validate_count > gene_count - 1) {
        throw std::domain_error("order_stat_cdf: validate_count must lie in [1, gene_count-1]");
    }
    if (!(x_prob >= 0.0 && x_prob <= 1.0)) {
        throw std::domain_error("order_stat_cdf: x_prob must lie in [0, 1]");
    }
    return binomial_upper_tail(gene_count - 1, gene_count - validate_count, x_prob);
}

}  // namespace screenopt
