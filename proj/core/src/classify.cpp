#include "slowfast/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "slowfast/errors.hpp"

namespace slowfast {

std::string to_string(Tag tag) {
    switch (tag) {
        case Tag::null_solution: return "Null";
        case Tag::positive_slow: return "PositiveSlow";
        case Tag::negative_slow: return "NegativeSlow";
        case Tag::fast: return "Fast";
    }
    return "?";
}

Tag tag_from_string(const std::string& s) {
    if (s == "Null") return Tag::null_solution;
    if (s == "PositiveSlow") return Tag::positive_slow;
    if (s == "NegativeSlow") return Tag::negative_slow;
    if (s == "Fast") return Tag::fast;
    throw std::invalid_argument("unknown classification tag: " + s);
}

bool is_slow(Tag tag) { return tag == Tag::positive_slow || tag == Tag::negative_slow; }

void ClassifyConfig::validate() const {
    auto unit = [](double v) { return v > 0.0 && v < 1.0; };
    if (!unit(noise_floor) || !unit(fit_window) || !unit(slow_tolerance) || !unit(rate_tolerance)) {
        throw std::invalid_argument("classifier tolerances must lie in (0,1)");
    }
    if (!(min_horizon >= 0.0)) throw std::invalid_argument("classifier min_horizon must be >= 0");
    if (eigen_candidates < 2) throw std::invalid_argument("classifier needs at least 2 eigen candidates");
}

nlohmann::json ClassifyConfig::to_json() const {
    return {{"noise_floor", noise_floor},       {"fit_window", fit_window},
            {"slow_tolerance", slow_tolerance}, {"rate_tolerance", rate_tolerance},
            {"min_horizon", min_horizon},       {"eigen_candidates", eigen_candidates}};
}

nlohmann::json Classification::to_json(const ClassifyConfig& config) const {
    auto opt = [](const std::optional<double>& v) -> nlohmann::json {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    return {{"tag", to_string(tag)},
            {"statistics",
             {{"sign_persistent_from", opt(sign_persistent_from)},
              {"slow_profile_error", opt(slow_profile_error)},
              {"shifted_profile_error", opt(shifted_profile_error)},
              {"profile_shift", opt(profile_shift)},
              {"fast_rate", opt(fast_rate)},
              {"raw_rate", opt(raw_rate)},
              {"matched_eigenvalue", opt(matched_eigenvalue)}}},
            {"thresholds", config.to_json()},
            {"sample_count", sample_count},
            {"horizon", horizon}};
}

namespace {

bool signed_sample(const Sample& s) { return s.min * s.max > 0.0; }

template <class F>
void for_window(const Trajectory& traj, TimeWindow w, F&& f) {
    for (const Sample& s : traj.samples()) {
        if (s.t > 0.0 && s.t >= w.begin && s.t <= w.end) f(s);
    }
}

void require_slow_sample(const Sample& s, double noise_floor) {
    if (!signed_sample(s)) throw NoiseFloorError("slow profile window contains a sign-changing sample");
    if (s.linf <= noise_floor) throw NoiseFloorError("slow profile window is below the noise floor");
}

// Clean prefix: samples before the first one at or below the floor.
double clean_horizon(const Trajectory& traj, double noise_floor) {
    double end = 0.0;
    for (const Sample& s : traj.samples()) {
        if (s.l2 <= noise_floor || s.linf <= noise_floor) break;
        end = s.t;
    }
    return end;
}

}  // namespace

std::optional<double> sign_analysis(const Trajectory& traj, double noise_floor) {
    const auto& s = traj.samples();
    if (s.size() < 2) throw std::invalid_argument("sign analysis needs at least 2 samples");
    auto strict = [&](const Sample& x) { return x.linf > noise_floor && signed_sample(x); };
    if (!strict(s.back())) return std::nullopt;
    std::size_t first = s.size() - 1;
    while (first > 0 && strict(s[first - 1])) --first;
    return s[first].t;
}

double slow_profile_statistic(const Trajectory& traj, TimeWindow window, double noise_floor) {
    const double p = traj.p();
    double worst = -1.0;
    for_window(traj, window, [&](const Sample& s) {
        require_slow_sample(s, noise_floor);
        const double scale = std::pow(p * s.t, 1.0 / p);
        const double hi = s.linf;
        const double lo = std::min(std::abs(s.min), std::abs(s.max));
        worst = std::max({worst, std::abs(scale * hi - 1.0), std::abs(scale * lo - 1.0)});
    });
    if (worst < 0.0) throw NoiseFloorError("slow profile window holds no samples");
    return worst;
}

ShiftedProfile shifted_profile_statistic(const Trajectory& traj, TimeWindow window,
                                         double noise_floor) {
    const double p = traj.p();
    double shift_sum = 0.0;
    std::size_t n = 0;
    for_window(traj, window, [&](const Sample& s) {
        require_slow_sample(s, noise_floor);
        shift_sum += std::pow(s.linf, -p) / p - s.t;
        ++n;
    });
    if (n == 0) throw NoiseFloorError("slow profile window holds no samples");
    const double shift = shift_sum / static_cast<double>(n);
    double worst = 0.0;
    for_window(traj, window, [&](const Sample& s) {
        const double base = p * (s.t + shift);
        if (!(base > 0.0)) {
            worst = std::numeric_limits<double>::infinity();
            return;
        }
        const double scale = std::pow(base, 1.0 / p);
        const double lo = std::min(std::abs(s.min), std::abs(s.max));
        worst = std::max({worst, std::abs(scale * s.linf - 1.0), std::abs(scale * lo - 1.0)});
    });
    return {worst, shift};
}

RateFit fast_rate_fit(const Trajectory& traj, TimeWindow window, double noise_floor) {
    std::vector<double> ts;
    std::vector<double> ys;
    double dt_sum = 0.0;
    bool truncated = false;
    for (const Sample& s : traj.samples()) {
        if (s.t < window.begin || s.t > window.end) continue;
        if (s.l2 <= noise_floor || s.linf <= noise_floor) {
            truncated = true;
            break;
        }
        ts.push_back(s.t);
        ys.push_back(std::log(s.l2));
        dt_sum += s.dt;
    }
    if (ts.size() < 8) {
        throw NoiseFloorError("rate fit window has " + std::to_string(ts.size()) +
                              " usable samples; at least 8 are required");
    }
    const double n = static_cast<double>(ts.size());
    double tm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        tm += ts[i];
        ym += ys[i];
    }
    tm /= n;
    ym /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        sxy += (ts[i] - tm) * (ys[i] - ym);
        sxx += (ts[i] - tm) * (ts[i] - tm);
    }
    return {-sxy / sxx, ts.front(), ts.back(), ts.size(), dt_sum / n, truncated};
}

RateFit fast_rate_fit(const Trajectory& traj, const ClassifyConfig& config) {
    const double end = clean_horizon(traj, config.noise_floor);
    return fast_rate_fit(traj, {end * (1.0 - config.fit_window), end}, config.noise_floor);
}

double effective_decay_rate(double discrete_eigenvalue, double dt) {
    if (dt <= 0.0) return discrete_eigenvalue;
    return std::log1p(dt * discrete_eigenvalue) / dt;
}

namespace {

struct EigenMatch {
    double eigenvalue;
    double compensated_rate;
    double relative_error;
};

EigenMatch match_eigenvalue(const Trajectory& traj, const RateFit& fit, std::size_t candidates) {
    EigenMatch best{0.0, fit.rate, std::numeric_limits<double>::infinity()};
    for (const Eigenpair& e : neumann_eigenpairs(traj.grid_ptr(), candidates)) {
        if (e.eigenvalue <= 0.0) continue;
        const double expected = effective_decay_rate(e.discrete_eigenvalue, fit.mean_dt);
        const double rel = std::abs(fit.rate / expected - 1.0);
        if (rel < best.relative_error) best = {e.eigenvalue, e.eigenvalue * fit.rate / expected, rel};
    }
    return best;
}

[[noreturn]] void inconclusive(const std::string& why, const Classification& c,
                               const ClassifyConfig& config) {
    nlohmann::json report = c.to_json(config);
    report["tag"] = "Inconclusive";
    report["reason"] = why;
    throw InconclusiveError("inconclusive - extend horizon: " + why, std::move(report));
}

}  // namespace

Classification classify(const Trajectory& traj, const ClassifyConfig& config) {
    config.validate();
    const auto& samples = traj.samples();
    if (samples.size() < 2) throw std::invalid_argument("classification needs at least 2 samples");
    if (traj.horizon() < config.min_horizon) {
        throw std::invalid_argument("trajectory horizon is shorter than the configured minimum");
    }
    Classification c;
    c.sample_count = samples.size();
    c.horizon = traj.horizon();
    c.sign_persistent_from = sign_analysis(traj, config.noise_floor);

    const double floor = config.noise_floor;
    const bool all_below = std::all_of(samples.begin(), samples.end(),
                                       [&](const Sample& s) { return s.linf < floor; });
    if (all_below) {
        c.tag = Tag::null_solution;
        return c;
    }

    auto fit_fast = [&]() -> std::optional<EigenMatch> {
        try {
            const RateFit fit = fast_rate_fit(traj, config);
            c.raw_rate = fit.rate;
            const EigenMatch m = match_eigenvalue(traj, fit, config.eigen_candidates);
            c.matched_eigenvalue = m.eigenvalue;
            c.fast_rate = m.compensated_rate;
            return m;
        } catch (const NoiseFloorError&) {
            return std::nullopt;
        }
    };

    if (samples.back().linf < floor) {
        if (!fit_fast()) inconclusive("decayed below the noise floor before a rate fit was possible", c, config);
        c.tag = Tag::fast;
        return c;
    }

    if (c.sign_persistent_from) {
        const TimeWindow tail{std::max(*c.sign_persistent_from, c.horizon * (1.0 - config.fit_window)),
                              c.horizon};
        std::size_t in_tail = 0;
        for_window(traj, tail, [&](const Sample&) { ++in_tail; });
        if (in_tail < 4) inconclusive("too few signed samples in the tail", c, config);
        try {
            c.slow_profile_error = slow_profile_statistic(traj, tail, floor);
            const ShiftedProfile shifted = shifted_profile_statistic(traj, tail, floor);
            c.shifted_profile_error = shifted.error;
            c.profile_shift = shifted.shift;
        } catch (const NoiseFloorError& e) {
            inconclusive(e.what(), c, config);
        }
        if (std::min(*c.slow_profile_error, *c.shifted_profile_error) <= config.slow_tolerance) {
            c.tag = samples.back().max > 0.0 ? Tag::positive_slow : Tag::negative_slow;
            return c;
        }
        inconclusive("signed tail has not reached the slow profile", c, config);
    }

    const bool changes_everywhere = std::all_of(samples.begin(), samples.end(), [&](const Sample& s) {
        return s.linf <= floor || s.min * s.max < 0.0;
    });
    if (changes_everywhere) {
        const auto m = fit_fast();
        if (m && m->relative_error <= config.rate_tolerance) {
            c.tag = Tag::fast;
            return c;
        }
        inconclusive(m ? "decay rate does not match a Neumann eigenvalue yet"
                       : "rate fit window too short",
                     c, config);
    }
    inconclusive("sign pattern not yet settled", c, config);
}

}  // namespace slowfast
