#include "screenopt/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace screenopt {

namespace {

struct RawEntry {
    std::string value;
    int line = 0;
    bool used = false;
};

using Section = std::map<std::string, RawEntry>;

struct RawConfig {
    std::string name;
    std::map<std::string, Section> sections;
    std::map<std::string, int> section_lines;

    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw ConfigError(name + ":" + std::to_string(line) + ": " + msg);
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(name + ": " + msg); }
};

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

RawConfig tokenize(const std::string& text, const std::string& name) {
    static const char* kSections[] = {"screen", "fluorescence", "curve",
                                      "simulate", "optimize", "compare"};
    RawConfig raw;
    raw.name = name;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') raw.fail(lineno, "unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            bool known = std::any_of(std::begin(kSections), std::end(kSections),
                                     [&](const char* s) { return section == s; });
            if (!known) raw.fail(lineno, "unknown section [" + section + "]");
            raw.sections[section];
            raw.section_lines.emplace(section, lineno);
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) raw.fail(lineno, "expected key = value");
        if (section.empty()) raw.fail(lineno, "key outside of any [section]");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) raw.fail(lineno, "empty key");
        if (value.empty()) raw.fail(lineno, "empty value for key '" + key + "'");
        auto [it, inserted] = raw.sections[section].emplace(key, RawEntry{value, lineno, false});
        if (!inserted) raw.fail(lineno, "duplicate key '" + key + "' in [" + section + "]");
    }
    return raw;
}

class SectionReader {
  public:
    SectionReader(RawConfig& raw, const std::string& section)
        : raw_(raw), section_(section), entries_(raw.sections.find(section)) {}

    bool present() const { return entries_ != raw_.sections.end(); }

    std::optional<std::string> get(const std::string& key) {
        if (!present()) return std::nullopt;
        auto it = entries_->second.find(key);
        if (it == entries_->second.end()) return std::nullopt;
        it->second.used = true;
        last_line_ = it->second.line;
        return it->second.value;
    }

    template <typename T>
    T parse_number(const std::string& key, const std::string& text) const {
        T out{};
        const char* begin = text.data();
        const char* end = begin + text.size();
        auto [ptr, ec] = std::from_chars(begin, end, out);
        if (ec != std::errc() || ptr != end) {
            raw_.fail(last_line_, "invalid number '" + text + "' for key '" + key + "'");
        }
        return out;
    }

    double number(const std::string& key, double fallback) {
        auto v = get(key);
        return v ? parse_number<double>(key, *v) : fallback;
    }
    std::optional<double> number_opt(const std::string& key) {
        auto v = get(key);
        if (!v) return std::nullopt;
        return parse_number<double>(key, *v);
    }
    std::int64_t integer(const std::string& key, std::int64_t fallback) {
        auto v = get(key);
        return v ? parse_number<std::int64_t>(key, *v) : fallback;
    }
    std::uint64_t uinteger(const std::string& key, std::uint64_t fallback) {
        auto v = get(key);
        return v ? parse_number<std::uint64_t>(key, *v) : fallback;
    }
    std::string text(const std::string& key, const std::string& fallback) {
        auto v = get(key);
        return v ? *v : fallback;
    }
    bool boolean(const std::string& key, bool fallback) {
        auto v = get(key);
        if (!v) return fallback;
        if (*v == "true" || *v == "1" || *v == "yes") return true;
        if (*v == "false" || *v == "0" || *v == "no") return false;
        raw_.fail(last_line_, "invalid boolean '" + *v + "' for key '" + key + "'");
    }
    std::vector<double> number_list(const std::string& key) {
        auto v = get(key);
        std::vector<double> out;
        if (!v) return out;
        std::istringstream in(*v);
        std::string item;
        while (std::getline(in, item, ',')) {
            item = trim(item);
            if (item.empty()) raw_.fail(last_line_, "empty element in list '" + key + "'");
            out.push_back(parse_number<double>(key, item));
        }
        return out;
    }

    double require_number(const std::string& key) {
        auto v = get(key);
        if (!v) missing(key);
        return parse_number<double>(key, *v);
    }
    std::int64_t require_integer(const std::string& key) {
        auto v = get(key);
        if (!v) missing(key);
        return parse_number<std::int64_t>(key, *v);
    }

    [[noreturn]] void missing(const std::string& key) const {
        raw_.fail("missing required key '" + key + "' in [" + section_ + "]");
    }
    [[noreturn]] void bad_value(const std::string& key, const std::string& value) const {
        raw_.fail(last_line_, "invalid value '" + value + "' for key '" + key + "'");
    }

    int last_line() const { return last_line_; }

  private:
    RawConfig& raw_;
    std::string section_;
    std::map<std::string, Section>::iterator entries_;
    int last_line_ = 0;
};

W1Mode parse_w1_mode(SectionReader& sec, const std::string& key, W1Mode fallback) {
    auto v = sec.get(key);
    if (!v) return fallback;
    if (*v == "expectation") return W1Mode::expectation;
    if (*v == "probability") return W1Mode::probability;
    sec.bad_value(key, *v);
}

void reject_unused(const RawConfig& raw) {
    for (const auto& [section, entries] : raw.sections) {
        for (const auto& [key, entry] : entries) {
            if (!entry.used) {
                raw.fail(entry.line, "unknown key '" + key + "' in [" + section + "]");
            }
        }
    }
}

RunConfig build(RawConfig raw) {
    RunConfig cfg;

    SectionReader screen(raw, "screen");
    if (!screen.present()) raw.fail("missing required section [screen]");
    cfg.screen.gene_count = screen.require_integer("r");
    cfg.screen.cell_count = screen.require_integer("n");
    cfg.screen.validate_count = static_cast<int>(screen.require_integer("v"));
    if (auto model = screen.get("model")) {
        if (*model == "multinomial") {
            cfg.screen.model = InsertionModel::multinomial;
        } else if (*model == "poisson") {
            cfg.screen.model = InsertionModel::poisson;
        } else {
            screen.bad_value("model", *model);
        }
    }
    cfg.screen.moi = screen.number("lambda", 0.0);
    cfg.screen.descendants = static_cast<int>(screen.integer("L", 1));

    SectionReader fluor(raw, "fluorescence");
    if (!fluor.present()) raw.fail("missing required section [fluorescence]");
    if (auto family = fluor.get("family")) {
        if (*family == "lognormal") {
            cfg.lognormal = true;
        } else if (*family != "normal") {
            fluor.bad_value("family", *family);
        }
    }
    cfg.g1.mean = fluor.require_number("g1_mean");
    cfg.g1.sd = fluor.number("g1_sd", 1.0);
    cfg.g2.mean = fluor.require_number("g2_mean");
    cfg.g2.sd = fluor.number("g2_sd", 1.0);

    SectionReader curve(raw, "curve");
    if (curve.present()) {
        CurveSpec spec;
        spec.alpha_min = curve.number("alpha_min", spec.alpha_min);
        spec.alpha_max = curve.number("alpha_max", spec.alpha_max);
        spec.alpha_step = curve.number("alpha_step", spec.alpha_step);
        spec.replicates = curve.integer("replicates", spec.replicates);
        if (auto sweep = curve.get("sweep")) {
            if (*sweep == "none") {
                spec.sweep = SweepParameter::none;
            } else if (*sweep == "g1_mean") {
                spec.sweep = SweepParameter::g1_mean;
            } else if (*sweep == "v") {
                spec.sweep = SweepParameter::v;
            } else {
                curve.bad_value("sweep", *sweep);
            }
        }
        spec.sweep_values = curve.number_list("sweep_values");
        spec.seed = curve.uinteger("seed", spec.seed);
        spec.out = curve.text("out", spec.out);
        if (!(spec.alpha_step > 0.0) || spec.alpha_max < spec.alpha_min) {
            raw.fail("[curve]: empty threshold grid (check alpha_min/alpha_max/alpha_step)");
        }
        if (spec.replicates < 0) raw.fail("[curve]: replicates must be >= 0");
        if (spec.sweep != SweepParameter::none && spec.sweep_values.empty()) {
            raw.fail("[curve]: sweep requested but sweep_values is empty");
        }
        cfg.curve = std::move(spec);
    }

    SectionReader simulate(raw, "simulate");
    if (simulate.present()) {
        SimulateSpec spec;
        spec.alpha = simulate.require_number("alpha");
        spec.two_stage = simulate.boolean("two_stage", false);
        if (spec.two_stage) {
            spec.beta = simulate.require_number("beta");
        } else if (simulate.get("beta")) {
            raw.fail("[simulate]: beta given but two_stage = false");
        }
        spec.replicates = simulate.integer("replicates", spec.replicates);
        if (spec.replicates < 1) raw.fail("[simulate]: replicates must be >= 1");
        spec.seed = simulate.uinteger("seed", spec.seed);
        spec.out = simulate.text("out", spec.out);
        cfg.simulate = std::move(spec);
    }

    SectionReader optimize(raw, "optimize");
    if (optimize.present()) {
        OptimizeSpec spec;
        spec.two_stage = optimize.boolean("two_stage", false);
        spec.w1_bound = optimize.number("b", spec.w1_bound);
        spec.epsilon = optimize.number("epsilon", spec.epsilon);
        spec.w1_mode = parse_w1_mode(optimize, "w1_mode", spec.w1_mode);
        spec.capacity = optimize.number_opt("capacity");
        spec.grid_points = static_cast<int>(optimize.integer("grid_points", spec.grid_points));
        spec.alpha_min = optimize.number_opt("alpha_min");
        spec.alpha_max = optimize.number_opt("alpha_max");
        spec.beta_min = optimize.number_opt("beta_min");
        spec.beta_max = optimize.number_opt("beta_max");
        spec.sim_replicates = optimize.integer("sim_replicates", spec.sim_replicates);
        spec.sim_refine_replicates =
            optimize.integer("sim_refine_replicates", spec.sim_refine_replicates);
        spec.seed = optimize.uinteger("seed", spec.seed);
        spec.out = optimize.text("out", spec.out);
        if (spec.grid_points < 2) raw.fail("[optimize]: grid_points must be >= 2");
        if (spec.sim_replicates < 1) raw.fail("[optimize]: sim_replicates must be >= 1");
        if (spec.sim_refine_replicates < 0) {
            raw.fail("[optimize]: sim_refine_replicates must be >= 0");
        }
        cfg.optimize = std::move(spec);
    }

    SectionReader compare(raw, "compare");
    if (compare.present()) {
        CompareSpec spec;
        spec.single_n = compare.require_integer("single_n");
        spec.w1_bound = compare.number("b", spec.w1_bound);
        spec.epsilon = compare.number("epsilon", spec.epsilon);
        spec.w1_mode = parse_w1_mode(compare, "w1_mode", spec.w1_mode);
        spec.alpha_min = compare.number("alpha_min", spec.alpha_min);
        spec.alpha_max = compare.number("alpha_max", spec.alpha_max);
        spec.alpha_step = compare.number("alpha_step", spec.alpha_step);
        spec.beta_min = compare.number("beta_min", spec.beta_min);
        spec.beta_max = compare.number("beta_max", spec.beta_max);
        spec.beta_step = compare.number("beta_step", spec.beta_step);
        spec.replicates = compare.integer("replicates", spec.replicates);
        spec.seed = compare.uinteger("seed", spec.seed);
        spec.out = compare.text("out", spec.out);
        if (spec.single_n < 1) raw.fail("[compare]: single_n must be >= 1");
        if (!(spec.alpha_step > 0.0) || spec.alpha_max < spec.alpha_min) {
            raw.fail("[compare]: empty alpha grid");
        }
        if (!(spec.beta_step > 0.0) || spec.beta_max < spec.beta_min) {
            raw.fail("[compare]: empty beta grid");
        }
        if (spec.replicates < 0) raw.fail("[compare]: replicates must be >= 0");
        cfg.compare = std::move(spec);
    }

    reject_unused(raw);

    try {
        cfg.screen.validate();
        cfg.fluorescence();
    } catch (const std::invalid_argument& err) {
        raw.fail(err.what());
    }
    return cfg;
}

}  // namespace

FluorescenceModel RunConfig::fluorescence() const {
    return lognormal ? FluorescenceModel::lognormal(g1, g2) : FluorescenceModel(g1, g2);
}

RunConfig parse_run_config_text(const std::string& text, const std::string& name) {
    return build(tokenize(text, name));
}

RunConfig parse_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config_text(buf.str(), path);
}

}  // namespace screenopt
