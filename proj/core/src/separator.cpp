#include "slowfast/separator.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

#include "slowfast/errors.hpp"

namespace slowfast {

SolverConfig SeparatorSettings::default_probe_solver() {
    SolverConfig s;
    s.p = 2.0;
    s.dt = 1e-3;
    s.t_end = 50.0;
    s.sample_stride = 50;
    return s;
}

void SeparatorSettings::validate() const {
    if (!(tolerance > 0.0)) throw std::invalid_argument("separator tolerance must be positive");
    if (!(max_horizon >= solver.t_end)) {
        throw std::invalid_argument("separator max_horizon must be at least the initial probe horizon");
    }
    solver.validate();
    classifier.validate();
}

nlohmann::json to_json(const std::vector<ProbeRecord>& log) {
    nlohmann::json out = nlohmann::json::array();
    for (const ProbeRecord& r : log) {
        out.push_back({{"k", r.k},
                       {"tag", r.tag ? to_string(*r.tag) : std::string("Inconclusive")},
                       {"horizon", r.horizon}});
    }
    return out;
}

nlohmann::json SeparatorResult::to_json() const {
    return {{"phi", phi},
            {"bracket", {lower, upper}},
            {"bracket_tags", {to_string(lower_classification.tag), to_string(upper_classification.tag)}},
            {"exact_hit", exact_hit},
            {"tolerance", tolerance},
            {"probes", slowfast::to_json(probes)}};
}

std::pair<double, double> initial_bracket(const Field& w0) {
    const double k = w0.linf_norm() + 1.0;
    return {-k, k};
}

ProbeOutcome probe_offset(const Field& w0, double k, const SeparatorSettings& settings,
                          std::vector<ProbeRecord>* log) {
    SolverConfig solver = settings.solver;
    const Field u0 = w0 + k;
    std::vector<ProbeRecord> local;
    std::vector<ProbeRecord>& records = log ? *log : local;
    for (;;) {
        try {
            const Trajectory traj = evolve(u0, solver);
            Classification c = classify(traj, settings.classifier);
            records.push_back({k, c.tag, solver.t_end});
            return {std::move(c), solver.t_end};
        } catch (const InconclusiveError&) {
            records.push_back({k, std::nullopt, solver.t_end});
        }
        if (solver.t_end * 2.0 > settings.max_horizon * (1.0 + 1e-12)) {
            throw HorizonExhausted("probe at k = " + std::to_string(k) +
                                       " stayed inconclusive up to the maximum horizon",
                                   {{"k", k}, {"max_horizon", settings.max_horizon},
                                    {"probes", to_json(records)}});
        }
        solver.t_end *= 2.0;
    }
}

namespace {

void require_mean_zero(const Field& w0) {
    if (std::abs(w0.mean()) > 1e-10 * w0.linf_norm() && w0.linf_norm() > 0.0) {
        throw std::invalid_argument("separator input must have zero mean");
    }
}

[[noreturn]] void bracket_fault(const std::string& what, double k, Tag got,
                                const std::vector<ProbeRecord>& log) {
    throw Falsification(what, {{"k", k}, {"tag", to_string(got)}, {"probes", to_json(log)}});
}

}  // namespace

SeparatorResult compute_phi(const SeparatorQuery& query) {
    const SeparatorSettings& settings = query.settings;
    settings.validate();
    require_mean_zero(query.w0);
    const double eps = settings.tolerance;
    auto [lo, hi] = query.bracket.value_or(initial_bracket(query.w0));
    if (!(lo < hi)) throw std::invalid_argument("separator bracket must be ordered");

    SeparatorResult r;
    r.tolerance = eps;
    auto probe = [&](double k) {
        try {
            return probe_offset(query.w0, k, settings, &r.probes).classification;
        } catch (HorizonExhausted& e) {
            nlohmann::json report = e.report();
            report["bracket"] = {lo, hi};
            report["probes"] = to_json(r.probes);
            throw HorizonExhausted(e.what(), std::move(report));
        }
    };

    r.lower_classification = probe(lo);
    if (r.lower_classification.tag != Tag::negative_slow) {
        bracket_fault("lower bracket end is not negative-slow", lo, r.lower_classification.tag, r.probes);
    }
    r.upper_classification = probe(hi);
    if (r.upper_classification.tag != Tag::positive_slow) {
        bracket_fault("upper bracket end is not positive-slow", hi, r.upper_classification.tag, r.probes);
    }

    while (hi - lo > 2.0 * eps) {
        const double mid = 0.5 * (lo + hi);
        Classification c = probe(mid);
        if (c.tag == Tag::positive_slow) {
            hi = mid;
            r.upper_classification = std::move(c);
        } else if (c.tag == Tag::negative_slow) {
            lo = mid;
            r.lower_classification = std::move(c);
        } else {
            // Fast or null at mid: the separator itself. Confirm the slow
            // half-lines on both sides within the tolerance.
            Classification below = probe(mid - eps);
            if (below.tag != Tag::negative_slow) {
                bracket_fault("offset just below a fast offset is not negative-slow", mid - eps,
                              below.tag, r.probes);
            }
            Classification above = probe(mid + eps);
            if (above.tag != Tag::positive_slow) {
                bracket_fault("offset just above a fast offset is not positive-slow", mid + eps,
                              above.tag, r.probes);
            }
            r.exact_hit = true;
            r.phi = mid;
            r.lower = mid - eps;
            r.upper = mid + eps;
            r.lower_classification = std::move(below);
            r.upper_classification = std::move(above);
            return r;
        }
    }
    r.lower = lo;
    r.upper = hi;
    r.phi = 0.5 * (lo + hi);
    return r;
}

bool is_monotone_sequence(const std::vector<Tag>& tags) {
    auto rank = [](Tag t) {
        switch (t) {
            case Tag::negative_slow: return 0;
            case Tag::fast:
            case Tag::null_solution: return 1;
            case Tag::positive_slow: return 2;
        }
        return -1;
    };
    int middle = 0;
    for (std::size_t i = 0; i < tags.size(); ++i) {
        if (rank(tags[i]) == 1) ++middle;
        if (i > 0 && rank(tags[i]) < rank(tags[i - 1])) return false;
    }
    return middle <= 1;
}

std::vector<Classification> monotonicity_scan(const Field& w0, const std::vector<double>& ks,
                                              const SeparatorSettings& settings) {
    settings.validate();
    if (!std::is_sorted(ks.begin(), ks.end())) throw std::invalid_argument("scan offsets must be ascending");
    std::vector<std::future<ProbeOutcome>> jobs;
    jobs.reserve(ks.size());
    for (double k : ks) {
        jobs.push_back(std::async(std::launch::async, [&w0, k, &settings] {
            return probe_offset(w0, k, settings);
        }));
    }
    std::vector<Classification> out;
    std::vector<Tag> tags;
    nlohmann::json witness = nlohmann::json::array();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        ProbeOutcome o = jobs[i].get();
        tags.push_back(o.classification.tag);
        nlohmann::json entry = o.classification.to_json(settings.classifier);
        entry["k"] = ks[i];
        witness.push_back(std::move(entry));
        out.push_back(std::move(o.classification));
    }
    if (!is_monotone_sequence(tags)) {
        throw Falsification("classification sequence is not monotone in k", {{"scan", witness}});
    }
    return out;
}

namespace {

std::pair<SeparatorResult, SeparatorResult> phi_pair(const Field& a, const Field& b,
                                                     const SeparatorSettings& settings) {
    auto job = [&settings](const Field& w) { return compute_phi({w, std::nullopt, settings}); };
    auto first = std::async(std::launch::async, job, std::cref(a));
    SeparatorResult second = job(b);
    return {first.get(), std::move(second)};
}

}  // namespace

LipschitzReport lipschitz_probe(const Field& w1, const Field& w2, const SeparatorSettings& settings) {
    w1.check_same_grid(w2);
    auto [a, b] = phi_pair(w1, w2, settings);
    return {std::abs(a.phi - b.phi), (w1 - w2).linf_norm(), std::move(a), std::move(b)};
}

OddnessReport oddness_probe(const Field& w0, const SeparatorSettings& settings) {
    auto [a, b] = phi_pair(w0, -w0, settings);
    return {a.phi + b.phi, std::move(a), std::move(b)};
}

}  // namespace slowfast
