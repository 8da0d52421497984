#include "slowfast/cli/init_data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "slowfast/cli/config.hpp"
#include "slowfast/random_fields.hpp"

namespace slowfast::cli {

namespace {

double to_double(const std::string& expr, const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    if (!s.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ConfigError("init.expr '" + expr + "': bad number '" + s + "'");
    }
    return v;
}

Field cosine_series(const GridPtr& grid, const std::vector<double>& amplitudes) {
    const double length = grid->length(0);
    return Field::from_function(grid, [&](double x, double) {
        double s = 0.0;
        for (std::size_t k = 0; k < amplitudes.size(); ++k) {
            s += amplitudes[k] * std::cos(static_cast<double>(k + 1) * std::numbers::pi * x / length);
        }
        return s;
    });
}

}  // namespace

Field build_initial_data(const GridPtr& grid, const InitOptions& opts) {
    const std::string& e = opts.expr;
    const auto colon = e.find(':');
    const std::string head = e.substr(0, colon);
    const std::string arg = colon == std::string::npos ? std::string() : e.substr(colon + 1);
    Field f(grid, 0.0);
    if (head == "zero" && colon == std::string::npos) {
        // f is already zero
    } else if (head == "constant") {
        f = Field(grid, to_double(e, arg));
    } else if (head == "cos") {
        f = cosine_series(grid, {to_double(e, arg)});
    } else if (head == "coslist") {
        std::vector<double> amps;
        std::stringstream ss(arg);
        std::string item;
        while (std::getline(ss, item, ',')) amps.push_back(to_double(e, item));
        if (amps.empty()) throw ConfigError("init.expr '" + e + "': coslist needs amplitudes");
        f = cosine_series(grid, amps);
    } else if (head == "random") {
        const double amplitude = arg.empty() ? 1.0 : to_double(e, arg);
        std::mt19937_64 rng(opts.seed);
        f = random_band_limited(grid, opts.modes, rng, amplitude);
    } else if (head == "file") {
        std::ifstream in(arg);
        if (!in) throw ConfigError("init.expr: cannot open '" + arg + "'");
        try {
            f = read_field_csv(in, grid);
        } catch (const std::runtime_error& err) {
            throw ConfigError(std::string("init.expr file: ") + err.what());
        }
    } else {
        throw ConfigError("init.expr: unknown expression '" + e + "'");
    }
    if (opts.remean) f = f.remeaned();
    if (opts.offset != 0.0) f += opts.offset;
    return f;
}

}  // namespace slowfast::cli
