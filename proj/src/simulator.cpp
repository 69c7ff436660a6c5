#include "screenopt/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>

#include "screenopt/moments.hpp"
#include "screenopt/rng.hpp"

namespace screenopt {

namespace {

using Engine = std::mt19937_64;
using Binomial = std::binomial_distribution<std::int64_t>;

// 97.5% standard normal quantile.
constexpr double kZ95 = 1.9599639845400542;

// Inverse-transform draw from Poisson(moi) conditioned on being >= 1.
// The walk starts at the truncated mass of 1, so the expected cost stays
// O(1) for small moi.
std::int64_t zero_truncated_poisson(Engine& eng, double moi) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(eng);
    double pmf = moi / std::expm1(moi);  // P(N = 1 | N >= 1)
    double cum = pmf;
    std::int64_t k = 1;
    while (u > cum && k < 1000) {
        ++k;
        pmf *= moi / static_cast<double>(k);
        cum += pmf;
    }
    return k;
}

// Occupancy vector of Mult(n, 1/r, ..., 1/r) via conditional binomials.
void equiprobable_multinomial(Engine& eng, std::int64_t n, std::int64_t r,
                              std::vector<std::int64_t>& out) {
    out.assign(static_cast<std::size_t>(r), 0);
    std::int64_t remaining = n;
    for (std::int64_t i = 0; i < r - 1 && remaining > 0; ++i) {
        double p = 1.0 / static_cast<double>(r - i);
        std::int64_t c = Binomial(remaining, p)(eng);
        out[static_cast<std::size_t>(i)] = c;
        remaining -= c;
    }
    out[static_cast<std::size_t>(r - 1)] = remaining;
}

SimResult single_stage_multinomial(const ScreenConfig& config, const FluorescenceModel& fl,
                                   double alpha, Engine& eng) {
    const std::int64_t r = config.gene_count;
    const double s1 = fl.survival(Population::target, alpha);
    const double s2 = fl.survival(Population::nontarget, alpha);

    std::vector<std::int64_t> occupancy;
    equiprobable_multinomial(eng, config.cell_count, r, occupancy);

    SimResult res;
    res.counts.assign(static_cast<std::size_t>(r), 0);
    for (std::int64_t i = 0; i < r; ++i) {
        std::int64_t cells = occupancy[static_cast<std::size_t>(i)];
        if (cells == 0) continue;
        double p = (i == 0) ? s1 : s2;
        res.counts[static_cast<std::size_t>(i)] = p > 0.0 ? Binomial(cells, p)(eng) : 0;
    }
    res.selected_target_cells = res.counts[0];
    res.discovered = discovery_event(res.counts, config.validate_count);
    return res;
}

SimResult single_stage_poisson(const ScreenConfig& config, const FluorescenceModel& fl,
                               double alpha, Engine& eng) {
    const std::int64_t r = config.gene_count;
    const double s1 = fl.survival(Population::target, alpha);
    const double s2 = fl.survival(Population::nontarget, alpha);
    std::uniform_int_distribution<std::int64_t> type_dist(0, r - 1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    SimResult res;
    res.counts.assign(static_cast<std::size_t>(r), 0);
    std::vector<std::int64_t> types;
    for (std::int64_t k = 0; k < config.cell_count; ++k) {
        std::int64_t total = zero_truncated_poisson(eng, config.moi);
        if (total == 1) {
            std::int64_t t = type_dist(eng);
            bool is_target = (t == 0);
            if (unif(eng) < (is_target ? s1 : s2)) {
                ++res.counts[static_cast<std::size_t>(t)];
                if (is_target) ++res.selected_target_cells;
            }
            continue;
        }
        types.clear();
        bool is_target = false;
        for (std::int64_t c = 0; c < total; ++c) {
            std::int64_t t = type_dist(eng);
            types.push_back(t);
            is_target |= (t == 0);
        }
        if (unif(eng) < (is_target ? s1 : s2)) {
            for (std::int64_t t : types) ++res.counts[static_cast<std::size_t>(t)];
            if (is_target) ++res.selected_target_cells;
        }
    }
    res.discovered = discovery_event(res.counts, config.validate_count);
    return res;
}

SimResult two_stage_multinomial(const ScreenConfig& config, const FluorescenceModel& fl,
                                double alpha, double beta, Engine& eng) {
    const std::int64_t r = config.gene_count;
    const std::int64_t L = config.descendants;
    const double s1 = fl.survival(Population::target, alpha);
    const double s2 = fl.survival(Population::nontarget, alpha);
    const double h1 = fl.survival(Population::target, beta);
    const double h2 = fl.survival(Population::nontarget, beta);

    std::vector<std::int64_t> occupancy;
    equiprobable_multinomial(eng, config.cell_count, r, occupancy);

    SimResult res;
    res.counts.assign(static_cast<std::size_t>(r), 0);
    for (std::int64_t i = 0; i < r; ++i) {
        std::int64_t cells = occupancy[static_cast<std::size_t>(i)];
        if (cells == 0) continue;
        double ps = (i == 0) ? s1 : s2;
        std::int64_t selected = ps > 0.0 ? Binomial(cells, ps)(eng) : 0;
        if (i == 0) res.selected_target_cells = selected;
        double ph = (i == 0) ? h1 : h2;
        if (ph <= 0.0) continue;
        std::int64_t survivors = 0;
        for (std::int64_t a = 0; a < selected; ++a) {
            survivors += Binomial(L, ph)(eng);
        }
        res.counts[static_cast<std::size_t>(i)] = survivors;
    }
    res.discovered = discovery_event(res.counts, config.validate_count);
    return res;
}

SimResult two_stage_poisson(const ScreenConfig& config, const FluorescenceModel& fl,
                            double alpha, double beta, Engine& eng) {
    const std::int64_t r = config.gene_count;
    const std::int64_t L = config.descendants;
    const double s1 = fl.survival(Population::target, alpha);
    const double s2 = fl.survival(Population::nontarget, alpha);
    const double h1 = fl.survival(Population::target, beta);
    const double h2 = fl.survival(Population::nontarget, beta);
    std::uniform_int_distribution<std::int64_t> type_dist(0, r - 1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    SimResult res;
    res.counts.assign(static_cast<std::size_t>(r), 0);
    // Sparse per-cell construct content: (type, copies) pairs.
    std::vector<std::pair<std::int64_t, std::int64_t>> content;
    for (std::int64_t k = 0; k < config.cell_count; ++k) {
        std::int64_t total = zero_truncated_poisson(eng, config.moi);
        content.clear();
        bool is_target = false;
        if (total == 1) {
            std::int64_t t = type_dist(eng);
            content.emplace_back(t, 1);
            is_target = (t == 0);
        } else {
            for (std::int64_t c = 0; c < total; ++c) {
                std::int64_t t = type_dist(eng);
                is_target |= (t == 0);
                auto it = std::find_if(content.begin(), content.end(),
                                       [t](const auto& e) { return e.first == t; });
                if (it == content.end()) {
                    content.emplace_back(t, 1);
                } else {
                    ++it->second;
                }
            }
        }
        if (unif(eng) >= (is_target ? s1 : s2)) continue;
        if (is_target) ++res.selected_target_cells;
        double ph = is_target ? h1 : h2;
        std::int64_t survivors = ph > 0.0 ? Binomial(L, ph)(eng) : 0;
        if (survivors == 0) continue;
        for (const auto& [type, copies] : content) {
            res.counts[static_cast<std::size_t>(type)] += copies * survivors;
        }
    }
    res.discovered = discovery_event(res.counts, config.validate_count);
    return res;
}

// Static chunking is enough here; per-replicate streams make the work
// units independent of their thread assignment.
void parallel_replicates(std::int64_t count, const std::function<void(std::int64_t)>& body) {
    unsigned workers = worker_count();
    if (workers <= 1 || count < 2) {
        for (std::int64_t j = 0; j < count; ++j) body(j);
        return;
    }
    workers = std::min<unsigned>(workers, static_cast<unsigned>(count));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        std::int64_t first = count * w / workers;
        std::int64_t last = count * (w + 1) / workers;
        pool.emplace_back([first, last, &body] {
            for (std::int64_t j = first; j < last; ++j) body(j);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

EstimateCI wilson_interval(std::int64_t successes, std::int64_t trials) {
    if (trials < 1) throw std::domain_error("wilson_interval: trials must be >= 1");
    if (successes < 0 || successes > trials) {
        throw std::domain_error("wilson_interval: successes out of range");
    }
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    EstimateCI ci;
    ci.estimate = p;
    ci.ci_low = std::max(0.0, center - half);
    ci.ci_high = std::min(1.0, center + half);
    ci.replicates = trials;
    return ci;
}

bool discovery_event(std::span<const std::int64_t> counts, int validate_count) {
    if (counts.empty()) return false;
    const std::int64_t target = counts[0];
    std::int64_t blocking = 0;
    for (std::size_t i = 1; i < counts.size(); ++i) {
        blocking += counts[i] >= target ? 1 : 0;
    }
    return blocking < validate_count;
}

SimResult simulate_single_stage(const ScreenConfig& config, const FluorescenceModel& fl,
                                double alpha, std::uint64_t seed) {
    config.validate();
    Engine eng(seed);
    return config.model == InsertionModel::poisson
               ? single_stage_poisson(config, fl, alpha, eng)
               : single_stage_multinomial(config, fl, alpha, eng);
}

SimResult simulate_two_stage(const ScreenConfig& config, const FluorescenceModel& fl,
                             double alpha, double beta, std::uint64_t seed) {
    config.validate();
    Engine eng(seed);
    return config.model == InsertionModel::poisson
               ? two_stage_poisson(config, fl, alpha, beta, eng)
               : two_stage_multinomial(config, fl, alpha, beta, eng);
}

std::vector<SimResult> simulate_replicates(const ScreenConfig& config,
                                           const FluorescenceModel& fl, double alpha,
                                           std::optional<double> beta, std::int64_t replicates,
                                           std::uint64_t master_seed) {
    config.validate();
    if (replicates < 1) throw std::invalid_argument("simulate_replicates: replicates must be >= 1");
    std::vector<SimResult> results(static_cast<std::size_t>(replicates));
    parallel_replicates(replicates, [&](std::int64_t j) {
        std::uint64_t seed = stream_seed(master_seed, static_cast<std::uint64_t>(j));
        results[static_cast<std::size_t>(j)] =
            beta ? simulate_two_stage(config, fl, alpha, *beta, seed)
                 : simulate_single_stage(config, fl, alpha, seed);
    });
    return results;
}

EstimateCI estimate_pdisc(const ScreenConfig& config, const FluorescenceModel& fl, double alpha,
                          std::optional<double> beta, std::int64_t replicates,
                          std::uint64_t master_seed) {
    config.validate();
    if (replicates < 1) throw std::invalid_argument("estimate_pdisc: replicates must be >= 1");
    std::vector<std::uint8_t> discovered(static_cast<std::size_t>(replicates), 0);
    parallel_replicates(replicates, [&](std::int64_t j) {
        std::uint64_t seed = stream_seed(master_seed, static_cast<std::uint64_t>(j));
        SimResult res = beta ? simulate_two_stage(config, fl, alpha, *beta, seed)
                             : simulate_single_stage(config, fl, alpha, seed);
        discovered[static_cast<std::size_t>(j)] = res.discovered ? 1 : 0;
    });
    std::int64_t successes = 0;
    for (std::uint8_t d : discovered) successes += d;
    return wilson_interval(successes, replicates);
}

std::int64_t sample_w1(const ScreenConfig& config, const FluorescenceModel& fl, double alpha,
                       std::uint64_t seed) {
    config.validate();
    const double s1 = fl.survival(Population::target, alpha);
    double p = config.model == InsertionModel::poisson
                   ? poisson_target_fraction(config.moi, config.gene_count) * s1
                   : s1 / static_cast<double>(config.gene_count);
    if (p <= 0.0) return 0;
    Engine eng(seed);
    return Binomial(config.cell_count, p)(eng);
}

unsigned worker_count() {
    if (const char* env = std::getenv("SCREENOPT_THREADS")) {
        char* end = nullptr;
        long parsed = std::strtol(env, &end, 10);
        if (end != env && parsed > 0) return static_cast<unsigned>(parsed);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace screenopt
