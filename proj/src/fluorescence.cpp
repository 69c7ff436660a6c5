#include "screenopt/fluorescence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "screenopt/normal.hpp"

namespace screenopt {

namespace {

void check_dominance(const Gaussian& g1, const Gaussian& g2) {
    if (g1.sd == g2.sd) {
        if (g1.mean < g2.mean) {
            throw std::invalid_argument(
                "FluorescenceModel: target distribution must stochastically "
                "dominate the non-target one (mean1 >= mean2 for equal sds)");
        }
        return;
    }
    // Unequal sds: two normal CDFs always cross, so exact dominance cannot
    // hold; accept the pair only if it holds over a wide working range.
    double lo = std::min(g1.mean - 12.0 * g1.sd, g2.mean - 12.0 * g2.sd);
    double hi = std::max(g1.mean + 12.0 * g1.sd, g2.mean + 12.0 * g2.sd);
    const int steps = 240;
    for (int i = 0; i <= steps; ++i) {
        double a = lo + (hi - lo) * i / steps;
        double c1 = normal_cdf((a - g1.mean) / g1.sd);
        double c2 = normal_cdf((a - g2.mean) / g2.sd);
        if (c1 > c2 + 1e-9) {
            throw std::invalid_argument(
                "FluorescenceModel: stochastic dominance of the target "
                "distribution fails on the checked grid");
        }
    }
}

}  // namespace

FluorescenceModel::FluorescenceModel(Gaussian target, Gaussian nontarget)
    : FluorescenceModel(target, nontarget, Scale::linear) {}

FluorescenceModel::FluorescenceModel(Gaussian target, Gaussian nontarget, Scale scale)
    : g1_(target), g2_(nontarget), scale_(scale) {
    if (!(g1_.sd > 0.0) || !(g2_.sd > 0.0)) {
        throw std::invalid_argument("FluorescenceModel: sd parameters must be positive");
    }
    check_dominance(g1_, g2_);
}

FluorescenceModel FluorescenceModel::lognormal(Gaussian log_target, Gaussian log_nontarget) {
    return FluorescenceModel(log_target, log_nontarget, Scale::logarithmic);
}

double FluorescenceModel::cdf(Population which, double a) const {
    if (scale_ == Scale::logarithmic) {
        if (a <= 0.0) return 0.0;
        a = std::log(a);
    }
    const Gaussian& g = dist(which);
    return normal_cdf((a - g.mean) / g.sd);
}

double FluorescenceModel::survival(Population which, double a) const {
    if (scale_ == Scale::logarithmic) {
        if (a <= 0.0) return 1.0;
        a = std::log(a);
    }
    const Gaussian& g = dist(which);
    return normal_survival((a - g.mean) / g.sd);
}

double FluorescenceModel::log_survival(Population which, double a) const {
    if (scale_ == Scale::logarithmic) {
        if (a <= 0.0) return 0.0;
        a = std::log(a);
    }
    const Gaussian& g = dist(which);
    return normal_log_survival((a - g.mean) / g.sd);
}

double FluorescenceModel::quantile(Population which, double p) const {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("FluorescenceModel::quantile: p must lie in (0, 1)");
    }
    const Gaussian& g = dist(which);
    double x = g.mean + g.sd * normal_quantile(p);
    return scale_ == Scale::logarithmic ? std::exp(x) : x;
}

double FluorescenceModel::percentile_to_threshold(double p_target, double top_fraction) const {
    if (!(top_fraction > 0.0 && top_fraction < 1.0)) {
        throw std::domain_error("percentile_to_threshold: top_fraction must lie in (0, 1)");
    }
    if (!(p_target >= 0.0 && p_target <= 1.0)) {
        throw std::domain_error("percentile_to_threshold: p_target must lie in [0, 1]");
    }
    // Mixture survival is continuous and strictly decreasing in the normal
    // domain; bisect there and map back afterwards.
    auto mixture_survival = [&](double a) {
        double s1 = normal_survival((a - g1_.mean) / g1_.sd);
        double s2 = normal_survival((a - g2_.mean) / g2_.sd);
        return p_target * s1 + (1.0 - p_target) * s2;
    };
    double maxsd = std::max(g1_.sd, g2_.sd);
    double lo = std::min(g1_.mean, g2_.mean) - 15.0 * maxsd;
    double hi = std::max(g1_.mean, g2_.mean) + 15.0 * maxsd;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mixture_survival(mid) > top_fraction) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-14 * (1.0 + std::fabs(lo))) break;
    }
    double a = 0.5 * (lo + hi);
    return scale_ == Scale::logarithmic ? std::exp(a) : a;
}

}  // namespace screenopt
