// Test-only oracles: brute-force or alternative-route computations used to
// freeze expected values. These deliberately avoid the library's own code
// paths (rejection sampling instead of inverse transform, Bernoulli loops
// instead of binomial draws, direct summation instead of incomplete beta).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "screenopt/fluorescence.hpp"
#include "screenopt/screen_config.hpp"

namespace screenopt::testing {

// ---------------------------------------------------------------------------
// Order-statistic CDF oracles.

/// Direct summation with exact Pascal-recurrence binomial coefficients.
/// Intended for gene counts up to ~50 where the coefficients stay exactly
/// representable in double.
inline double order_stat_sum_direct(double q, std::int64_t gene_count, int validate_count) {
    const std::int64_t n = gene_count - 1;
    std::vector<double> coef(static_cast<std::size_t>(n) + 1, 0.0);
    coef[0] = 1.0;
    for (std::int64_t row = 1; row <= n; ++row) {
        for (std::int64_t j = row; j >= 1; --j) coef[j] += coef[j - 1];
    }
    double sum = 0.0;
    for (std::int64_t j = gene_count - validate_count; j <= n; ++j) {
        sum += coef[static_cast<std::size_t>(j)] * std::pow(q, static_cast<double>(j)) *
               std::pow(1.0 - q, static_cast<double>(n - j));
    }
    return sum;
}

/// Log-sum-exp summation; usable for gene counts in the thousands.
inline double order_stat_sum_logsumexp(double q, std::int64_t gene_count, int validate_count) {
    if (q <= 0.0) return 0.0;
    if (q >= 1.0) return 1.0;
    const std::int64_t n = gene_count - 1;
    const double logq = std::log(q);
    const double log1mq = std::log1p(-q);
    std::vector<double> terms;
    for (std::int64_t j = gene_count - validate_count; j <= n; ++j) {
        double logc = std::lgamma(static_cast<double>(n) + 1.0) -
                      std::lgamma(static_cast<double>(j) + 1.0) -
                      std::lgamma(static_cast<double>(n - j) + 1.0);
        terms.push_back(logc + j * logq + (n - j) * log1mq);
    }
    double peak = *std::max_element(terms.begin(), terms.end());
    double sum = 0.0;
    for (double t : terms) sum += std::exp(t - peak);
    return std::exp(peak) * sum;
}

// ---------------------------------------------------------------------------
// Per-cell Monte Carlo moment estimators with batch-mean standard errors.

struct MomentEstimate {
    double value = 0.0;
    double se = 0.0;
};

struct McCellMoments {
    MomentEstimate mean_target, mean_other, var_target, var_other;
    MomentEstimate cov_target_other, cov_other_other;
    MomentEstimate m3_target, m3_other;
};

namespace detail {

struct BatchAccumulator {
    double s1 = 0, s2 = 0, s3 = 0;
    double s1sq = 0, s2sq = 0;
    double s12 = 0, s23 = 0;
    double s1cu = 0, s2cu = 0;
    double count = 0;

    void add(double m1, double m2, double m3) {
        s1 += m1;
        s2 += m2;
        s3 += m3;
        s1sq += m1 * m1;
        s2sq += m2 * m2;
        s12 += m1 * m2;
        s23 += m2 * m3;
        s1cu += m1 * m1 * m1;
        s2cu += m2 * m2 * m2;
        count += 1;
    }
};

inline McCellMoments summarize(const std::vector<BatchAccumulator>& batches) {
    auto collect = [&](auto field) {
        std::vector<double> values;
        for (const BatchAccumulator& b : batches) values.push_back(field(b));
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        var /= static_cast<double>(values.size() - 1);
        return MomentEstimate{mean, std::sqrt(var / static_cast<double>(values.size()))};
    };
    McCellMoments out;
    out.mean_target = collect([](const BatchAccumulator& b) { return b.s1 / b.count; });
    out.mean_other = collect([](const BatchAccumulator& b) { return b.s2 / b.count; });
    out.var_target = collect([](const BatchAccumulator& b) {
        double m = b.s1 / b.count;
        return b.s1sq / b.count - m * m;
    });
    out.var_other = collect([](const BatchAccumulator& b) {
        double m = b.s2 / b.count;
        return b.s2sq / b.count - m * m;
    });
    out.cov_target_other = collect([](const BatchAccumulator& b) {
        return b.s12 / b.count - (b.s1 / b.count) * (b.s2 / b.count);
    });
    out.cov_other_other = collect([](const BatchAccumulator& b) {
        double m = b.s2 / b.count;
        double m3 = b.s3 / b.count;
        return b.s23 / b.count - m * m3;
    });
    out.m3_target = collect([](const BatchAccumulator& b) { return b.s1cu / b.count; });
    out.m3_other = collect([](const BatchAccumulator& b) { return b.s2cu / b.count; });
    return out;
}

// Zero-truncated Poisson by rejection (the library uses inverse transform).
inline std::int64_t ztp_rejection(std::mt19937_64& eng, double moi) {
    std::poisson_distribution<std::int64_t> pois(moi);
    for (;;) {
        std::int64_t k = pois(eng);
        if (k >= 1) return k;
    }
}

}  // namespace detail

/// Simulates `cells` independent cells of the single-stage system and
/// estimates every cell-moment field, tracking the contribution to the
/// target gene and to two fixed non-target genes.
inline McCellMoments mc_single_stage_moments(const ScreenConfig& config,
                                             const FluorescenceModel& fl, double alpha,
                                             std::int64_t cells, int batches,
                                             std::uint64_t seed) {
    const double s1 = fl.survival(Population::target, alpha);
    const double s2 = fl.survival(Population::nontarget, alpha);
    const std::int64_t r = config.gene_count;
    std::mt19937_64 eng(seed);
    std::uniform_int_distribution<std::int64_t> type_dist(0, r - 1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<detail::BatchAccumulator> acc(static_cast<std::size_t>(batches));
    const std::int64_t per_batch = cells / batches;
    for (int b = 0; b < batches; ++b) {
        for (std::int64_t k = 0; k < per_batch; ++k) {
            double m1 = 0, m2 = 0, m3 = 0;
            if (config.model == InsertionModel::multinomial) {
                std::int64_t t = type_dist(eng);
                bool selected = unif(eng) < (t == 0 ? s1 : s2);
                if (selected) {
                    m1 = t == 0 ? 1 : 0;
                    m2 = t == 1 ? 1 : 0;
                    m3 = t == 2 ? 1 : 0;
                }
            } else {
                std::int64_t total = detail::ztp_rejection(eng, config.moi);
                std::int64_t n1 = 0, n2 = 0, n3 = 0;
                for (std::int64_t c = 0; c < total; ++c) {
                    std::int64_t t = type_dist(eng);
                    n1 += t == 0;
                    n2 += t == 1;
                    n3 += t == 2;
                }
                bool selected = unif(eng) < (n1 >= 1 ? s1 : s2);
                if (selected) {
                    m1 = static_cast<double>(n1);
                    m2 = static_cast<double>(n2);
                    m3 = static_cast<double>(n3);
                }
            }
            acc[static_cast<std::size_t>(b)].add(m1, m2, m3);
        }
    }
    return detail::summarize(acc);
}

/// Two-stage counterpart (multinomial insertion): stage-one selection,
/// then a literal Bernoulli trial per descendant.
inline McCellMoments mc_two_stage_moments(const ScreenConfig& config, const FluorescenceModel& fl,
                                          double alpha, double beta, std::int64_t cells,
                                          int batches, std::uint64_t seed) {
    const double s1 = fl.survival(Population::target, alpha);
    const double s2 = fl.survival(Population::nontarget, alpha);
    const double h1 = fl.survival(Population::target, beta);
    const double h2 = fl.survival(Population::nontarget, beta);
    const std::int64_t r = config.gene_count;
    std::mt19937_64 eng(seed);
    std::uniform_int_distribution<std::int64_t> type_dist(0, r - 1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<detail::BatchAccumulator> acc(static_cast<std::size_t>(batches));
    const std::int64_t per_batch = cells / batches;
    for (int b = 0; b < batches; ++b) {
        for (std::int64_t k = 0; k < per_batch; ++k) {
            std::int64_t t = type_dist(eng);
            bool target = t == 0;
            double m1 = 0, m2 = 0, m3 = 0;
            if (unif(eng) < (target ? s1 : s2)) {
                double h = target ? h1 : h2;
                std::int64_t survivors = 0;
                for (int l = 0; l < config.descendants; ++l) survivors += unif(eng) < h;
                if (t == 0) m1 = static_cast<double>(survivors);
                if (t == 1) m2 = static_cast<double>(survivors);
                if (t == 2) m3 = static_cast<double>(survivors);
            }
            acc[static_cast<std::size_t>(b)].add(m1, m2, m3);
        }
    }
    return detail::summarize(acc);
}

// ---------------------------------------------------------------------------
// Distributional test statistics.

/// Two-sample total variation over a common partition of ~`bins`
/// pooled-quantile bins.
inline double tv_distance(std::vector<std::int64_t> a, std::vector<std::int64_t> b,
                          int bins = 10) {
    std::vector<std::int64_t> pooled(a);
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::sort(pooled.begin(), pooled.end());
    std::vector<double> edges;
    for (int i = 1; i < bins; ++i) {
        std::size_t idx = pooled.size() * static_cast<std::size_t>(i) / static_cast<std::size_t>(bins);
        double edge = static_cast<double>(pooled[idx]) + 0.5;
        if (edges.empty() || edge > edges.back()) edges.push_back(edge);
    }
    auto histogram = [&](const std::vector<std::int64_t>& sample) {
        std::vector<double> h(edges.size() + 1, 0.0);
        for (std::int64_t x : sample) {
            std::size_t bin = static_cast<std::size_t>(
                std::upper_bound(edges.begin(), edges.end(), static_cast<double>(x)) -
                edges.begin());
            h[bin] += 1.0 / static_cast<double>(sample.size());
        }
        return h;
    };
    std::vector<double> ha = histogram(a);
    std::vector<double> hb = histogram(b);
    double tv = 0.0;
    for (std::size_t i = 0; i < ha.size(); ++i) tv += std::fabs(ha[i] - hb[i]);
    return 0.5 * tv;
}

/// Kolmogorov-Smirnov distance between a sample and the standard normal.
inline double ks_statistic_std_normal(std::vector<double> sample) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double cdf = 0.5 * std::erfc(-sample[i] / 1.4142135623730951);
        double hi = (static_cast<double>(i) + 1.0) / n - cdf;
        double lo = cdf - static_cast<double>(i) / n;
        ks = std::max(ks, std::max(hi, lo));
    }
    return ks;
}

/// Goodness-of-fit statistic against equal expected counts.
inline double chi_square_uniform(const std::vector<std::int64_t>& counts) {
    double total = 0.0;
    for (std::int64_t c : counts) total += static_cast<double>(c);
    double expected = total / static_cast<double>(counts.size());
    double stat = 0.0;
    for (std::int64_t c : counts) {
        double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return stat;
}

inline double correlation(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("correlation: size mismatch");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

/// Literal cell-by-cell single-stage multinomial simulation (the library
/// uses a multinomial-occupancy shortcut).
inline std::vector<std::int64_t> percell_multinomial_counts(const ScreenConfig& config,
                                                            const FluorescenceModel& fl,
                                                            double alpha, std::mt19937_64& eng) {
    const double s1 = fl.survival(Population::target, alpha);
    const double s2 = fl.survival(Population::nontarget, alpha);
    std::uniform_int_distribution<std::int64_t> type_dist(0, config.gene_count - 1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(config.gene_count), 0);
    for (std::int64_t k = 0; k < config.cell_count; ++k) {
        std::int64_t t = type_dist(eng);
        if (unif(eng) < (t == 0 ? s1 : s2)) ++counts[static_cast<std::size_t>(t)];
    }
    return counts;
}

}  // namespace screenopt::testing
