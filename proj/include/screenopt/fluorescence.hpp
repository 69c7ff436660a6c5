// Fluorescence intensity model for target and non-target cells.
#pragma once

namespace screenopt {

enum class Population { target, nontarget };

struct Gaussian {
    double mean = 0.0;
    double sd = 1.0;
};

/// Pair of fluorescence distributions: the target-cell distribution must
/// stochastically dominate the non-target one. Internally both are kept in
/// a location-scale normal family; a log-normal pair is represented by its
/// log-domain normals plus a scale tag, so every probability computed here
/// is invariant under that monotone change of units.
class FluorescenceModel {
  public:
    enum class Scale { linear, logarithmic };

    FluorescenceModel(Gaussian target, Gaussian nontarget);

    /// Log-normal intensities whose logs follow the given normals.
    static FluorescenceModel lognormal(Gaussian log_target, Gaussian log_nontarget);

    double cdf(Population which, double a) const;
    double survival(Population which, double a) const;
    double log_survival(Population which, double a) const;

    /// Inverse CDF; p must lie in (0, 1).
    double quantile(Population which, double p) const;

    /// Threshold alpha such that a fraction `top_fraction` of the cell
    /// population (a p_target / 1-p_target mixture of the two
    /// distributions) exceeds it.
    double percentile_to_threshold(double p_target, double top_fraction) const;

    const Gaussian& target() const { return g1_; }
    const Gaussian& nontarget() const { return g2_; }
    Scale scale() const { return scale_; }

  private:
    FluorescenceModel(Gaussian target, Gaussian nontarget, Scale scale);
    const Gaussian& dist(Population which) const {
        return which == Population::target ? g1_ : g2_;
    }

    Gaussian g1_;
    Gaussian g2_;
    Scale scale_ = Scale::linear;
};

}  // namespace screenopt
