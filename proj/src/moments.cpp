#include "screenopt/moments.hpp"

#include <cmath>
#include <stdexcept>

namespace screenopt {

namespace {

// Raw third moment of Bin(n, p).
double binomial_m3(double n, double p) {
    return n * p * (1.0 - 3.0 * p + 2.0 * p * p) + 3.0 * n * n * p * p * (1.0 - p) +
           n * n * n * p * p * p;
}

}  // namespace

CellProbs multinomial_cell_probs(const ScreenConfig& config, const FluorescenceModel& fl,
                                 double alpha) {
    config.validate();
    const double r = static_cast<double>(config.gene_count);
    CellProbs probs;
    probs.none = fl.cdf(Population::target, alpha) / r +
                 (r - 1.0) / r * fl.cdf(Population::nontarget, alpha);
    probs.target = fl.survival(Population::target, alpha) / r;
    probs.other = fl.survival(Population::nontarget, alpha) / r;
    return probs;
}

CellMoments multinomial_moments(const ScreenConfig& config, const FluorescenceModel& fl,
                                double alpha) {
    config.validate();
    const double r = static_cast<double>(config.gene_count);
    const double p1 = fl.survival(Population::target, alpha) / r;
    const double pi = fl.survival(Population::nontarget, alpha) / r;

    CellMoments m;
    // The contribution is {0,1}-valued, so every raw power equals the mean.
    m.mean_target = p1;
    m.mean_other = pi;
    m.m3_target = p1;
    m.m3_other = pi;
    m.var_target = p1 * (1.0 - p1);
    m.var_other = pi * (1.0 - pi);
    m.cov_target_other = -p1 * pi;
    m.cov_other_other = -pi * pi;
    return m;
}

double poisson_target_fraction(double moi, std::int64_t gene_count) {
    if (!(moi > 0.0)) throw std::domain_error("poisson_target_fraction: moi must be positive");
    if (gene_count < 1) throw std::domain_error("poisson_target_fraction: gene_count must be >= 1");
    return std::expm1(-moi / static_cast<double>(gene_count)) / std::expm1(-moi);
}

CellMoments poisson_moments(const ScreenConfig& config, const FluorescenceModel& fl,
                            double alpha) {
    config.validate();
    if (config.model != InsertionModel::poisson) {
        throw std::invalid_argument("poisson_moments: config.model must be poisson");
    }
    const double r = static_cast<double>(config.gene_count);
    const double lam = config.moi;
    const double lam_r = lam / r;
    const double trunc = -std::expm1(-lam);  // P(cell keeps >= 1 construct)

    const double s1 = fl.survival(Population::target, alpha);
    const double s2 = fl.survival(Population::nontarget, alpha);
    // Selection probability of a cell known to carry a given non-target
    // construct: mixture over whether it also carries the target one.
    const double c1 = s1;
    const double c2 = s2 * std::exp(-lam_r) + s1 * (-std::expm1(-lam_r));

    CellMoments m;
    m.mean_target = lam * c1 / (r * trunc);
    m.mean_other = lam * c2 / (r * trunc);
    m.var_target = c1 / trunc * (lam_r + lam_r * lam_r) - m.mean_target * m.mean_target;
    m.var_other = c2 / trunc * (lam_r + lam_r * lam_r) - m.mean_other * m.mean_other;
    m.cov_target_other = lam_r * lam_r * (c1 / trunc) * (1.0 - c2 / trunc);
    m.cov_other_other = lam_r * lam_r * (c2 / trunc) * (1.0 - c2 / trunc);
    const double third = lam_r + 3.0 * lam_r * lam_r + lam_r * lam_r * lam_r;
    m.m3_target = c1 / trunc * third;
    m.m3_other = c2 / trunc * third;
    return m;
}

CellMoments two_stage_moments(const ScreenConfig& config, const FluorescenceModel& fl,
                              double alpha, double beta) {
    config.validate();
    if (config.model != InsertionModel::multinomial) {
        throw std::invalid_argument(
            "two_stage_moments: only the multinomial model has closed-form "
            "two-stage moments; use the simulator for the Poisson model");
    }
    const double r = static_cast<double>(config.gene_count);
    const double L = static_cast<double>(config.descendants);
    const double a1 = fl.survival(Population::target, alpha);
    const double a2 = fl.survival(Population::nontarget, alpha);
    const double h1 = fl.survival(Population::target, beta);
    const double h2 = fl.survival(Population::nontarget, beta);

    // Conditional on the cell being a selected carrier of the gene, the
    // contribution is Bin(L, h); unconditionally it is that binomial mixed
    // with an atom at zero of mass 1 - a/r.
    CellMoments m;
    m.mean_target = a1 / r * L * h1;
    m.mean_other = a2 / r * L * h2;
    m.var_target = a1 / r * (L * (1.0 - h1) * h1 + L * L * h1 * h1) - m.mean_target * m.mean_target;
    m.var_other = a2 / r * (L * (1.0 - h2) * h2 + L * L * h2 * h2) - m.mean_other * m.mean_other;
    m.cov_target_other = -(L * L * a1 * h1 * a2 * h2) / (r * r);
    m.cov_other_other = -(L * L * a2 * a2 * h2 * h2) / (r * r);
    m.m3_target = a1 / r * binomial_m3(L, h1);
    m.m3_other = a2 / r * binomial_m3(L, h2);
    return m;
}

CellMoments cell_moments(const ScreenConfig& config, const FluorescenceModel& fl, double alpha) {
    return config.model == InsertionModel::poisson ? poisson_moments(config, fl, alpha)
                                                   : multinomial_moments(config, fl, alpha);
}

}  // namespace screenopt
