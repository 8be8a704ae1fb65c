#include "levyprobe/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

#include "levyprobe/csv.hpp"
#include "levyprobe/errors.hpp"

namespace levyprobe {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(int line, const std::string& what) {
    std::ostringstream msg;
    msg << "config line " << line << ": " << what;
    throw ConfigError(msg.str());
}

double parse_number(const std::string& text, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) fail(line, "trailing characters after number '" + text + "'");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail(line, "expected a number, got '" + text + "'");
    }
}

std::uint64_t parse_u64(const std::string& text, int line) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        fail(line, "expected an unsigned integer, got '" + text + "'");
    return v;
}

std::vector<double> parse_list(const std::string& text, int line) {
    std::vector<double> out;
    std::string token;
    std::istringstream stream(text);
    while (std::getline(stream, token, ',')) {
        std::istringstream inner(token);
        std::string piece;
        while (inner >> piece) out.push_back(parse_number(piece, line));
    }
    if (out.empty()) fail(line, "expected a non-empty list");
    return out;
}

struct KeyValue {
    std::string value;
    int line;
    bool used = false;
};

struct Section {
    std::string name;
    int line;
    std::map<std::string, KeyValue> entries;

    const KeyValue* find(const std::string& key) const {
        const auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    }
    std::string require(const std::string& key) {
        auto it = entries.find(key);
        if (it == entries.end()) fail(line, "section [" + name + "] is missing key '" + key + "'");
        it->second.used = true;
        return it->second.value;
    }
    std::optional<std::string> take(const std::string& key) {
        auto it = entries.find(key);
        if (it == entries.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }
    void check_consumed() const {
        for (const auto& [key, kv] : entries)
            if (!kv.used) fail(kv.line, "unknown key '" + key + "' in section [" + name + "]");
    }
};

SubordinatorSpec parse_component(Section& section) {
    const int line = section.line;
    const std::string kind = section.require("kind");
    SubordinatorSpec spec;
    if (kind == "gamma") {
        const double shape = parse_number(section.require("shape"), line);
        const double rate = parse_number(section.require("rate"), line);
        spec = gamma_process(shape, rate);
    } else if (kind == "inverse_gaussian") {
        const double mean = parse_number(section.require("mean"), line);
        const double shape = parse_number(section.require("shape"), line);
        spec = inverse_gaussian_process(mean, shape);
    } else if (kind == "compound_poisson") {
        const double rate = parse_number(section.require("rate"), line);
        const std::string job = section.require("job");
        if (job == "exponential") {
            const double job_rate = parse_number(section.require("job_rate"), line);
            spec = compound_poisson(rate, JobDistribution::exponential(job_rate));
        } else if (job == "deterministic") {
            const double job_size = parse_number(section.require("job_size"), line);
            spec = compound_poisson(rate, JobDistribution::deterministic(job_size));
        } else {
            fail(line, "unknown job distribution '" + job + "'");
        }
    } else {
        fail(line, "unknown component kind '" + kind + "'");
    }
    section.check_consumed();
    return spec;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    std::vector<Section> sections;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "malformed section header '" + line + "'");
            sections.push_back({trim(line.substr(1, line.size() - 2)), line_no, {}});
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected 'key = value', got '" + line + "'");
        if (sections.empty()) fail(line_no, "key outside of any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) fail(line_no, "empty key or value");
        auto [it, inserted] = sections.back().entries.insert({key, {value, line_no}});
        if (!inserted) fail(line_no, "duplicate key '" + key + "'");
    }

    std::vector<SubordinatorSpec> components;
    Section* experiment = nullptr;
    for (auto& section : sections) {
        if (section.name == "component") {
            components.push_back(parse_component(section));
        } else if (section.name == "experiment") {
            if (experiment) fail(section.line, "duplicate [experiment] section");
            experiment = &section;
        } else {
            fail(section.line, "unknown section [" + section.name + "]");
        }
    }
    if (components.empty()) throw ConfigError("config has no [component] section");
    if (!experiment) throw ConfigError("config has no [experiment] section");

    ExperimentConfig config;
    config.model = sum_of(std::move(components));
    const int line = experiment->line;
    config.horizon = parse_number(experiment->require("horizon"), line);
    if (!(config.horizon > 0.0)) fail(line, "horizon must be positive");
    config.alpha_grid = parse_list(experiment->require("alpha_grid"), line);
    for (std::size_t i = 0; i < config.alpha_grid.size(); ++i) {
        if (!(config.alpha_grid[i] > 0.0)) fail(line, "alpha_grid entries must be positive");
        if (i > 0 && !(config.alpha_grid[i] > config.alpha_grid[i - 1]))
            fail(line, "alpha_grid must be strictly increasing");
    }
    if (auto v = experiment->take("epsilon")) {
        config.epsilon = parse_number(*v, line);
        if (!(config.epsilon > 0.0)) fail(line, "epsilon must be positive");
    }
    if (auto v = experiment->take("xi")) {
        config.xi = parse_number(*v, line);
        if (!(config.xi > 0.0)) fail(line, "xi must be positive");
    }
    if (auto v = experiment->take("delta")) {
        if (*v == "auto") {
            config.delta.reset();
        } else {
            config.delta = parse_number(*v, line);
            if (!(*config.delta > 0.0)) fail(line, "delta must be positive");
        }
    }
    if (auto v = experiment->take("resamples")) {
        config.resamples = static_cast<std::size_t>(parse_u64(*v, line));
        if (config.resamples == 0) fail(line, "resamples must be >= 1");
    }
    if (auto v = experiment->take("replications")) {
        config.replications = static_cast<std::size_t>(parse_u64(*v, line));
        if (config.replications == 0) fail(line, "replications must be >= 1");
    }
    if (auto v = experiment->take("seed")) config.seed = parse_u64(*v, line);
    if (auto v = experiment->take("init")) {
        if (*v == "stationary") {
            config.init = InitKind::Stationary;
        } else if (*v == "burn_in") {
            config.init = InitKind::BurnIn;
        } else if (*v == "fixed") {
            config.init = InitKind::Fixed;
            config.init_value = parse_number(experiment->require("init_value"), line);
            if (config.init_value < 0.0) fail(line, "init_value must be nonnegative");
        } else {
            fail(line, "init must be stationary, burn_in or fixed");
        }
    }
    if (config.init != InitKind::Fixed && experiment->find("init_value"))
        fail(line, "init_value only applies to init = fixed");
    if (auto v = experiment->take("delta_grid")) {
        config.delta_grid = parse_list(*v, line);
        for (double d : config.delta_grid)
            if (!(d > 0.0)) fail(line, "delta_grid entries must be positive");
    }
    if (auto v = experiment->take("k_grid")) {
        for (double k : parse_list(*v, line)) {
            if (!(k >= 1.0) || k != std::floor(k)) fail(line, "k_grid entries must be integers >= 1");
            config.k_grid.push_back(static_cast<std::size_t>(k));
        }
    }
    if (auto v = experiment->take("ci_level")) {
        config.ci_level = parse_number(*v, line);
        if (!(config.ci_level > 0.0 && config.ci_level < 1.0)) fail(line, "ci_level in (0,1)");
    }
    if (auto v = experiment->take("table_size")) {
        config.table_size = static_cast<std::size_t>(parse_u64(*v, line));
        if (config.table_size < 256) fail(line, "table_size must be >= 256");
    }
    if (auto v = experiment->take("burn_in_time")) {
        config.burn_in_time = parse_number(*v, line);
        if (!(*config.burn_in_time > 0.0)) fail(line, "burn_in_time must be positive");
    }
    experiment->check_consumed();
    return config;
}

ExperimentConfig parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

namespace {

void serialize_component(const SubordinatorSpec& spec, std::ostream& out) {
    std::visit(
        [&out](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, GammaSpec>) {
                out << "[component]\nkind = gamma\nshape = " << format_double(v.shape)
                    << "\nrate = " << format_double(v.rate) << "\n";
            } else if constexpr (std::is_same_v<T, InverseGaussianSpec>) {
                out << "[component]\nkind = inverse_gaussian\nmean = " << format_double(v.mean)
                    << "\nshape = " << format_double(v.shape) << "\n";
            } else if constexpr (std::is_same_v<T, CompoundPoissonSpec>) {
                out << "[component]\nkind = compound_poisson\nrate = "
                    << format_double(v.rate) << "\n";
                switch (v.jobs.kind()) {
                    case JobDistribution::Kind::Exponential:
                        out << "job = exponential\njob_rate = "
                            << format_double(v.jobs.exponential_rate()) << "\n";
                        break;
                    case JobDistribution::Kind::Deterministic:
                        out << "job = deterministic\njob_size = "
                            << format_double(v.jobs.deterministic_size()) << "\n";
                        break;
                    case JobDistribution::Kind::Tabulated:
                        throw ConfigError("tabulated job distributions are not serializable");
                }
            } else if constexpr (std::is_same_v<T, SumSpec>) {
                for (const auto& c : v.components) serialize_component(c, out);
            } else {
                throw ConfigError("truncated components are not serializable; set epsilon");
            }
        },
        spec.value);
}

}  // namespace

std::string serialize_config(const ExperimentConfig& config) {
    std::ostringstream out;
    serialize_component(config.model, out);
    out << "\n[experiment]\n";
    out << "epsilon = " << format_double(config.epsilon) << "\n";
    out << "xi = " << format_double(config.xi) << "\n";
    out << "delta = " << (config.delta ? format_double(*config.delta) : "auto") << "\n";
    out << "horizon = " << format_double(config.horizon) << "\n";
    out << "alpha_grid = ";
    for (std::size_t i = 0; i < config.alpha_grid.size(); ++i)
        out << (i ? ", " : "") << format_double(config.alpha_grid[i]);
    out << "\n";
    out << "resamples = " << config.resamples << "\n";
    out << "replications = " << config.replications << "\n";
    out << "seed = " << config.seed << "\n";
    switch (config.init) {
        case InitKind::Stationary: out << "init = stationary\n"; break;
        case InitKind::BurnIn: out << "init = burn_in\n"; break;
        case InitKind::Fixed:
            out << "init = fixed\ninit_value = " << format_double(config.init_value) << "\n";
            break;
    }
    if (!config.delta_grid.empty()) {
        out << "delta_grid = ";
        for (std::size_t i = 0; i < config.delta_grid.size(); ++i)
            out << (i ? ", " : "") << format_double(config.delta_grid[i]);
        out << "\n";
    }
    if (!config.k_grid.empty()) {
        out << "k_grid = ";
        for (std::size_t i = 0; i < config.k_grid.size(); ++i)
            out << (i ? ", " : "") << config.k_grid[i];
        out << "\n";
    }
    if (config.ci_level != 0.95) out << "ci_level = " << format_double(config.ci_level) << "\n";
    if (config.table_size != 1024) out << "table_size = " << config.table_size << "\n";
    if (config.burn_in_time)
        out << "burn_in_time = " << format_double(*config.burn_in_time) << "\n";
    return out.str();
}

bool config_equal(const ExperimentConfig& a, const ExperimentConfig& b) {
    const auto opt_eq = [](const std::optional<double>& x, const std::optional<double>& y) {
        return x.has_value() == y.has_value() && (!x || *x == *y);
    };
    return spec_equal(a.model, b.model) && a.epsilon == b.epsilon && a.xi == b.xi &&
           opt_eq(a.delta, b.delta) && a.horizon == b.horizon &&
           a.alpha_grid == b.alpha_grid && a.resamples == b.resamples &&
           a.replications == b.replications && a.seed == b.seed && a.init == b.init &&
           (a.init != InitKind::Fixed || a.init_value == b.init_value) &&
           a.delta_grid == b.delta_grid && a.k_grid == b.k_grid && a.ci_level == b.ci_level &&
           a.table_size == b.table_size && opt_eq(a.burn_in_time, b.burn_in_time);
}

}  // namespace levyprobe
