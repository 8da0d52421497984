#include "slowfast/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace slowfast::cli {

namespace {

enum class Kind { number, integer, boolean, number_list, text, scheme };

struct KeyInfo {
    Kind kind;
    const char* fallback;
};

const std::map<std::string, KeyInfo>& schema() {
    static const std::map<std::string, KeyInfo> s = {
        {"grid.dim", {Kind::integer, "1"}},
        {"grid.lengths", {Kind::number_list, "pi"}},
        {"grid.nodes", {Kind::number_list, "257"}},
        {"solver.p", {Kind::number, "2"}},
        {"solver.dt", {Kind::number, "0.001"}},
        {"solver.t_end", {Kind::number, "10"}},
        {"solver.stride", {Kind::integer, "100"}},
        {"solver.scheme", {Kind::scheme, "lie"}},
        {"solver.grow_dt", {Kind::boolean, "false"}},
        {"solver.growth_factor", {Kind::number, "1.05"}},
        {"solver.growth_interval", {Kind::integer, "100"}},
        {"solver.dt_max", {Kind::number, "0.1"}},
        {"solver.snapshots", {Kind::number_list, ""}},
        {"init.expr", {Kind::text, "cos:1"}},
        {"init.offset", {Kind::number, "0"}},
        {"init.remean", {Kind::boolean, "false"}},
        {"init.seed", {Kind::integer, "1"}},
        {"init.modes", {Kind::integer, "8"}},
        {"output.dir", {Kind::text, "out"}},
        {"classify.noise_floor", {Kind::number, "1e-12"}},
        {"classify.fit_window", {Kind::number, "0.5"}},
        {"classify.slow_tolerance", {Kind::number, "0.05"}},
        {"classify.rate_tolerance", {Kind::number, "0.1"}},
        {"classify.min_horizon", {Kind::number, "10"}},
        {"separator.tol", {Kind::number, "0.001"}},
        {"separator.bracket", {Kind::number_list, ""}},
        {"separator.horizon", {Kind::number, "50"}},
        {"separator.max_horizon", {Kind::number, "800"}},
        {"separator.stride", {Kind::integer, "50"}},
        {"scan.offsets", {Kind::number_list, "-0.5,-0.1,-0.01,0.01,0.1,0.5"}},
        {"verify.seed", {Kind::integer, "2024"}},
        {"verify.pairs", {Kind::integer, "20"}},
        {"verify.horizon", {Kind::number, "50"}},
        {"verify.fault", {Kind::text, "none"}},
        {"verify.checks", {Kind::text, "all"}},
    };
    return s;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string format_number(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

double parse_number(const std::string& key, const std::string& raw) {
    std::string s = trim(raw);
    double factor = 1.0;
    // Accept "pi", "2*pi", "-pi".
    if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
        factor = std::numbers::pi;
        s = trim(s.substr(0, s.size() - 2));
        if (!s.empty() && s.back() == '*') s = trim(s.substr(0, s.size() - 1));
        if (s.empty() || s == "+") return factor;
        if (s == "-") return -factor;
    }
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || s.empty()) {
        throw ConfigError("key " + key + ": not a number: '" + raw + "'");
    }
    if (!std::isfinite(v)) throw ConfigError("key " + key + ": value must be finite");
    return v * factor;
}

long parse_integer(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw ConfigError("key " + key + ": not an integer: '" + raw + "'");
    }
    return v;
}

bool parse_boolean(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError("key " + key + ": not a boolean: '" + raw + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::string canonicalize(const std::string& key, const KeyInfo& info, const std::string& raw) {
    switch (info.kind) {
        case Kind::number: return format_number(parse_number(key, raw));
        case Kind::integer: return std::to_string(parse_integer(key, raw));
        case Kind::boolean: return parse_boolean(key, raw) ? "true" : "false";
        case Kind::number_list: {
            const std::string s = trim(raw);
            if (s.empty()) return {};
            std::string out;
            for (const std::string& item : split(s, ',')) {
                if (!out.empty()) out += ',';
                out += format_number(parse_number(key, item));
            }
            return out;
        }
        case Kind::scheme: {
            const std::string s = trim(raw);
            if (s != "lie" && s != "strang") throw ConfigError("key " + key + ": scheme must be lie or strang");
            return s;
        }
        case Kind::text: return trim(raw);
    }
    return raw;
}

}  // namespace

RunConfig::RunConfig() {
    for (const auto& [key, info] : schema()) values_[key] = canonicalize(key, info, info.fallback);
}

std::vector<std::string> RunConfig::keys() {
    std::vector<std::string> out;
    for (const auto& kv : schema()) out.push_back(kv.first);
    return out;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    const auto it = schema().find(key);
    if (it == schema().end()) throw ConfigError("unknown config key: " + key);
    values_[key] = canonicalize(key, it->second, value);
}

const std::string& RunConfig::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown config key: " + key);
    return it->second;
}

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig c;
    std::stringstream ss(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        c.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string RunConfig::serialize() const {
    std::string out;
    for (const auto& [key, value] : values_) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    }
    return out;
}

double RunConfig::number(const std::string& key) const { return parse_number(key, get(key)); }
long RunConfig::integer(const std::string& key) const { return parse_integer(key, get(key)); }
bool RunConfig::boolean(const std::string& key) const { return parse_boolean(key, get(key)); }

std::vector<double> RunConfig::numbers(const std::string& key) const {
    std::vector<double> out;
    const std::string& s = get(key);
    if (s.empty()) return out;
    for (const std::string& item : split(s, ',')) out.push_back(parse_number(key, item));
    return out;
}

GridPtr RunConfig::grid() const {
    const long dim = integer("grid.dim");
    std::vector<double> lengths = numbers("grid.lengths");
    const std::vector<double> raw_nodes = numbers("grid.nodes");
    if (dim != 1 && dim != 2) throw ConfigError("grid.dim must be 1 or 2");
    // A single value applies to every axis.
    if (lengths.size() == 1 && dim == 2) lengths.push_back(lengths[0]);
    std::vector<std::size_t> nodes;
    for (double n : raw_nodes) {
        if (n != std::floor(n) || n < 0) throw ConfigError("grid.nodes must be nonnegative integers");
        nodes.push_back(static_cast<std::size_t>(n));
    }
    if (nodes.size() == 1 && dim == 2) nodes.push_back(nodes[0]);
    try {
        return Grid::build(static_cast<int>(dim), lengths, nodes);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

SolverConfig RunConfig::solver() const {
    SolverConfig s;
    s.p = number("solver.p");
    s.dt = number("solver.dt");
    s.t_end = number("solver.t_end");
    const long stride = integer("solver.stride");
    if (stride < 1) throw ConfigError("solver.stride must be at least 1");
    s.sample_stride = static_cast<std::size_t>(stride);
    s.scheme = get("solver.scheme") == "strang" ? SplittingScheme::strang : SplittingScheme::lie;
    s.grow_dt = boolean("solver.grow_dt");
    s.growth_factor = number("solver.growth_factor");
    const long interval = integer("solver.growth_interval");
    if (interval < 1) throw ConfigError("solver.growth_interval must be at least 1");
    s.growth_interval = static_cast<std::size_t>(interval);
    s.dt_max = number("solver.dt_max");
    s.snapshot_times = numbers("solver.snapshots");
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return s;
}

ClassifyConfig RunConfig::classifier() const {
    ClassifyConfig c;
    c.noise_floor = number("classify.noise_floor");
    c.fit_window = number("classify.fit_window");
    c.slow_tolerance = number("classify.slow_tolerance");
    c.rate_tolerance = number("classify.rate_tolerance");
    c.min_horizon = number("classify.min_horizon");
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

SeparatorSettings RunConfig::separator() const {
    SeparatorSettings s;
    s.tolerance = number("separator.tol");
    s.solver = solver();
    s.solver.t_end = number("separator.horizon");
    s.solver.snapshot_times.clear();
    const long stride = integer("separator.stride");
    if (stride < 1) throw ConfigError("separator.stride must be at least 1");
    s.solver.sample_stride = static_cast<std::size_t>(stride);
    s.classifier = classifier();
    s.max_horizon = number("separator.max_horizon");
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return s;
}

}  // namespace slowfast::cli
