#include "slowfast/cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "slowfast/classify.hpp"
#include "slowfast/errors.hpp"
#include "slowfast/oracle.hpp"
#include "slowfast/random_fields.hpp"
#include "slowfast/separator.hpp"

namespace slowfast::cli {

namespace {

using json = nlohmann::json;

struct Context {
    GridPtr grid;
    SolverConfig solver;
    ClassifyConfig classifier;
    SeparatorSettings separator;
    std::vector<double> scan_offsets;
    std::uint64_t seed;
    std::size_t pairs;
    double horizon;
    std::string fault;
};

// Boundary rows of the "stencil" fault use a zero (Dirichlet-like) ghost
// value instead of the mirrored node.
Field laplacian_under_test(const Context& ctx, const Field& u) {
    Field out = laplacian(u);
    if (ctx.fault != "stencil") return out;
    const Grid& g = u.grid();
    const double ih2 = 1.0 / (g.spacing(0) * g.spacing(0));
    const std::size_t nx = g.nodes(0);
    const std::size_t ny = g.dimension() == 2 ? g.nodes(1) : 1;
    for (std::size_t j = 0; j < ny; ++j) {
        out[j * nx] -= u[j * nx + 1] * ih2;
        out[j * nx + nx - 1] -= u[j * nx + nx - 2] * ih2;
    }
    return out;
}

Field random_field(const Context& ctx, std::mt19937_64& rng, double amplitude = 1.0) {
    return random_band_limited(ctx.grid, 8, rng, amplitude, true);
}

Field first_mode(const GridPtr& grid, double a) {
    const double l = grid->length(0);
    return Field::from_function(grid, [=](double x, double) { return a * std::cos(std::numbers::pi * x / l); });
}

CheckResult grid_kernel(const Context& ctx) {
    const Field one(ctx.grid, 1.0);
    const Field lap = laplacian_under_test(ctx, one);
    std::size_t worst = 0;
    for (std::size_t n = 0; n < lap.size(); ++n) {
        if (std::abs(lap[n]) > std::abs(lap[worst])) worst = n;
    }
    const bool ok = lap.linf_norm() == 0.0;
    json detail = {{"max_abs", lap.linf_norm()}};
    if (!ok) detail["witness"] = {{"node", worst}, {"point", ctx.grid->point(worst)}, {"value", lap[worst]}};
    return {"grid.kernel", ok, detail};
}

CheckResult grid_symmetry(const Context& ctx) {
    std::mt19937_64 rng(ctx.seed + 1);
    double worst = 0.0;
    double worst_definite = -INFINITY;
    for (int i = 0; i < 10; ++i) {
        const Field u = random_field(ctx, rng);
        const Field v = random_field(ctx, rng);
        const double a = inner(laplacian_under_test(ctx, u), v);
        const double b = inner(u, laplacian_under_test(ctx, v));
        worst = std::max(worst, std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}));
        worst_definite = std::max(worst_definite, inner(laplacian_under_test(ctx, u), u) / inner(u, u));
    }
    const bool ok = worst <= 1e-12 && worst_definite <= 1e-12;
    return {"grid.symmetry", ok, {{"max_relative_asymmetry", worst}, {"max_rayleigh_quotient", worst_definite}}};
}

CheckResult grid_eigen_residual(const Context& ctx) {
    auto residual = [&](std::size_t nodes) {
        std::vector<double> lengths{ctx.grid->length(0)};
        std::vector<std::size_t> n{nodes};
        const GridPtr g = Grid::build(1, lengths, n);
        const Eigenpair e = neumann_eigenpairs(g, 2)[1];
        Field r = laplacian(e.eigenfunction);
        r += e.eigenvalue * e.eigenfunction;
        return r.linf_norm();
    };
    const std::size_t n = ctx.grid->nodes(0);
    const double coarse = residual(n);
    const double fine = residual(2 * n - 1);
    const double ratio = coarse / fine;
    return {"grid.eigen_residual", ratio > 3.5 && ratio < 4.5,
            {{"coarse", coarse}, {"fine", fine}, {"ratio", ratio}}};
}

struct PairOutcome {
    bool ordered = true;
    bool energy = true;
    bool difference = true;
    json order_witness, energy_witness, difference_witness;
    double min_gap = INFINITY;
    double max_energy_increase = 0.0;
    double max_norm_increase = 0.0;
};

PairOutcome run_pair(const Context& ctx, std::size_t index) {
    std::mt19937_64 rng(ctx.seed + 100 + index);
    Field u = random_field(ctx, rng, 1.5);
    Field gap = random_field(ctx, rng, 0.5);
    for (std::size_t n = 0; n < gap.size(); ++n) gap[n] = 0.01 + gap[n] * gap[n];
    Field v = u - gap;

    SolverConfig cfg = ctx.solver;
    Stepper stepper(ctx.grid, cfg);
    PairOutcome o;
    double prev_l2 = (u - v).l2_norm();
    double prev_linf = (u - v).linf_norm();
    double prev_eu = energy_fp(u, cfg.p);
    double prev_ev = energy_fp(v, cfg.p);
    const std::size_t steps = static_cast<std::size_t>(std::ceil(ctx.horizon / cfg.dt - 1e-9));
    for (std::size_t s = 1; s <= steps; ++s) {
        stepper.advance(u);
        stepper.advance(v);
        const double t = s * cfg.dt;
        Field z = u - v;
        const double zmin = z.min();
        o.min_gap = std::min(o.min_gap, zmin);
        if (zmin < -1e-12 && o.ordered) {
            o.ordered = false;
            o.order_witness = {{"pair", index}, {"t", t}, {"min_gap", zmin}};
        }
        const double l2 = z.l2_norm();
        const double linf = z.linf_norm();
        const double inc = std::max(l2 - prev_l2, linf - prev_linf);
        o.max_norm_increase = std::max(o.max_norm_increase, inc);
        if (inc > 1e-10 && o.difference) {
            o.difference = false;
            o.difference_witness = {{"pair", index}, {"t", t}, {"l2_increase", l2 - prev_l2},
                                    {"linf_increase", linf - prev_linf}};
        }
        prev_l2 = l2;
        prev_linf = linf;
        if (s % cfg.sample_stride == 0 || s == steps) {
            const double eu = energy_fp(u, cfg.p);
            const double ev = energy_fp(v, cfg.p);
            const double einc = std::max(eu - prev_eu, ev - prev_ev);
            o.max_energy_increase = std::max(o.max_energy_increase, einc);
            if (einc > 1e-10 && o.energy) {
                o.energy = false;
                o.energy_witness = {{"pair", index}, {"t", t}, {"increase", einc}};
            }
            prev_eu = eu;
            prev_ev = ev;
        }
    }
    return o;
}

std::vector<CheckResult> pair_suite(const Context& ctx) {
    std::vector<std::future<PairOutcome>> jobs;
    for (std::size_t i = 0; i < ctx.pairs; ++i) {
        jobs.push_back(std::async(std::launch::async, run_pair, std::cref(ctx), i));
    }
    CheckResult order{"dynamics.order_preservation", true, json::object()};
    CheckResult energy{"dynamics.energy_dissipation", true, json::object()};
    CheckResult diff{"dynamics.difference_monotonicity", true, json::object()};
    double min_gap = INFINITY, e_inc = 0.0, n_inc = 0.0;
    for (auto& j : jobs) {
        PairOutcome o = j.get();
        min_gap = std::min(min_gap, o.min_gap);
        e_inc = std::max(e_inc, o.max_energy_increase);
        n_inc = std::max(n_inc, o.max_norm_increase);
        if (!o.ordered && order.passed) {
            order.passed = false;
            order.detail["witness"] = o.order_witness;
        }
        if (!o.energy && energy.passed) {
            energy.passed = false;
            energy.detail["witness"] = o.energy_witness;
        }
        if (!o.difference && diff.passed) {
            diff.passed = false;
            diff.detail["witness"] = o.difference_witness;
        }
    }
    order.detail["pairs"] = ctx.pairs;
    order.detail["min_gap"] = min_gap;
    energy.detail["max_increase"] = e_inc;
    diff.detail["max_increase"] = n_inc;
    return {order, energy, diff};
}

CheckResult mean_evolution(const Context& ctx) {
    std::mt19937_64 rng(ctx.seed + 2);
    Field u = random_field(ctx, rng) + 0.3;
    DiffusionSolver diffusion(ctx.grid);
    double worst = 0.0;
    for (int s = 0; s < 1000; ++s) {
        Field n = nonlinear_flow_exact(u, ctx.solver.p, ctx.solver.dt);
        Field next = n;
        diffusion.solve_inplace(next.values(), ctx.solver.dt);
        worst = std::max(worst, std::abs(next.mean() - n.mean()));
        u = std::move(next);
    }
    return {"dynamics.mean_evolution", worst <= 1e-12, {{"max_diffusion_mean_change", worst}}};
}

CheckResult convergence_order(const Context& ctx) {
    const double t_end = 1.0;
    const double dt = ctx.solver.dt;
    if (!(dt < t_end)) {
        return {"dynamics.convergence_order", false, {{"reason", "dt too large for the study"}, {"dt", dt}}};
    }
    const double l = ctx.grid->length(0);
    const Field u0 = Field::from_function(ctx.grid, [=](double x, double) {
        return 1.0 + 0.5 * std::cos(std::numbers::pi * x / l) + 0.25 * std::cos(4.0 * std::numbers::pi * x / l);
    });
    auto run = [&](double h) {
        SolverConfig cfg = ctx.solver;
        cfg.dt = h;
        cfg.t_end = t_end;
        cfg.grow_dt = false;
        cfg.snapshot_times.clear();
        return evolve_to(u0, cfg);
    };
    const Field a = run(dt), b = run(dt / 2), c = run(dt / 4);
    const double e1 = (a - b).linf_norm();
    const double e2 = (b - c).linf_norm();
    const double order = std::log2(e1 / e2);

    // Constant data: the exact nonlinear substep makes the scheme exact.
    SolverConfig cfg = ctx.solver;
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.snapshot_times.clear();
    const Field k = evolve_to(Field(ctx.grid, 1.0), cfg);
    const double exact = oracle::ode_exact(1.0, cfg.p, t_end);
    const double const_err = (k + (-exact)).linf_norm() / exact;

    const bool ok = order > 0.8 && order < 1.25 && const_err < 1e-10;
    return {"dynamics.convergence_order", ok,
            {{"observed_order", order}, {"expected_order", 1.0}, {"e1", e1}, {"e2", e2},
             {"constant_data_relative_error", const_err}}};
}

CheckResult linear_agreement(const Context& ctx) {
    std::mt19937_64 rng(ctx.seed + 3);
    const Field f = random_field(ctx, rng);
    const Field ref = oracle::linear_heat_spectral(f, 1.0);
    auto err = [&](double dt) {
        DiffusionSolver d(ctx.grid);
        Field u = f;
        const auto steps = static_cast<std::size_t>(std::llround(1.0 / dt));
        for (std::size_t s = 0; s < steps; ++s) d.solve_inplace(u.values(), 1.0 / steps);
        return (u - ref).linf_norm();
    };
    const double dt = std::min(ctx.solver.dt, 0.01);
    const double e1 = err(dt), e2 = err(dt / 2);
    const double ratio = e1 / e2;
    return {"oracle.linear_agreement", ratio > 1.5 && ratio < 2.5, {{"e_dt", e1}, {"e_dt_half", e2}, {"ratio", ratio}}};
}

CheckResult smoothing(const Context& ctx) {
    oracle::SmoothingCheckConfig check;
    check.q = 4.0;
    check.k0 = oracle::measure_embedding_constant(ctx.grid, check.q, ctx.seed);
    std::mt19937_64 rng(ctx.seed + 4);
    double worst = 0.0;
    for (std::size_t i = 0; i < ctx.pairs; ++i) {
        const Field u0 = random_field(ctx, rng);
        const Field v0 = u0 + random_band_limited(ctx.grid, 32, rng, 0.5, true);
        try {
            worst = std::max(worst, oracle::smoothing_check(u0, v0, ctx.solver, check).worst_ratio);
        } catch (const Falsification& f) {
            return {"oracle.smoothing", false, {{"k0", check.k0}, {"pair", i}, {"witness", f.report()}}};
        }
    }
    return {"oracle.smoothing", true, {{"k0", check.k0}, {"beta", check.beta()}, {"worst_ratio", worst}}};
}

CheckResult odd_symmetry(const Context& ctx) {
    const Grid& g = *ctx.grid;
    const std::size_t nx = g.nodes(0);
    SolverConfig cfg = ctx.solver;
    cfg.t_end = std::min(ctx.horizon, 20.0);
    double worst = 0.0;
    double worst_mean = 0.0;
    const Field u0 = first_mode(ctx.grid, 1.0);
    evolve(u0, cfg, [&](double, const Field& u) {
        for (std::size_t n = 0; n < u.size(); ++n) {
            const auto [i, j] = g.unflatten(n);
            worst = std::max(worst, std::abs(u[n] + u[j * nx + (nx - 1 - i)]));
        }
        worst_mean = std::max(worst_mean, std::abs(u.mean()));
    });
    return {"classify.odd_symmetry", worst <= 1e-10 && worst_mean <= 1e-10,
            {{"max_antisymmetry_defect", worst}, {"max_abs_mean", worst_mean}}};
}

CheckResult sign_characterization(const Context& ctx) {
    SolverConfig cfg = ctx.solver;
    cfg.t_end = ctx.horizon;
    json detail;
    bool ok = true;
    try {
        const Classification fast = classify(evolve(first_mode(ctx.grid, 1.0), cfg), ctx.classifier);
        const Classification slow = classify(evolve(first_mode(ctx.grid, 1.0) + 2.0, cfg), ctx.classifier);
        detail = {{"cos", fast.to_json(ctx.classifier)}, {"two_plus_cos", slow.to_json(ctx.classifier)}};
        ok = fast.tag == Tag::fast && slow.tag == Tag::positive_slow;
    } catch (const InconclusiveError& e) {
        return {"classify.sign_characterization", false, {{"witness", e.report()}}};
    }
    return {"classify.sign_characterization", ok, detail};
}

CheckResult scan(const Context& ctx) {
    try {
        const auto cs = monotonicity_scan(first_mode(ctx.grid, 1.0), ctx.scan_offsets, ctx.separator);
        json tags = json::array();
        for (const auto& c : cs) tags.push_back(to_string(c.tag));
        return {"separator.monotonicity_scan", true, {{"offsets", ctx.scan_offsets}, {"tags", tags}}};
    } catch (const ReportedError& e) {
        return {"separator.monotonicity_scan", false, {{"error", e.what()}, {"witness", e.report()}}};
    }
}

CheckResult lipschitz(const Context& ctx) {
    std::mt19937_64 rng(ctx.seed + 5);
    const Field w1 = random_band_limited(ctx.grid, 6, rng, 1.0);
    const Field w2 = w1 + random_band_limited(ctx.grid, 6, rng, 0.3);
    try {
        const LipschitzReport r = lipschitz_probe(w1, w2, ctx.separator);
        const bool ok = r.phi_gap <= r.linf_distance + 2.0 * ctx.separator.tolerance;
        return {"separator.lipschitz", ok,
                {{"phi_gap", r.phi_gap}, {"linf_distance", r.linf_distance},
                 {"phi", {r.first.phi, r.second.phi}}}};
    } catch (const ReportedError& e) {
        return {"separator.lipschitz", false, {{"error", e.what()}, {"witness", e.report()}}};
    }
}

CheckResult oddness(const Context& ctx) {
    std::mt19937_64 rng(ctx.seed + 6);
    const Field w0 = random_band_limited(ctx.grid, 6, rng, 1.0);
    try {
        const OddnessReport r = oddness_probe(w0, ctx.separator);
        return {"separator.oddness", std::abs(r.sum) <= 2.0 * ctx.separator.tolerance,
                {{"sum", r.sum}, {"phi", {r.positive.phi, r.negative.phi}}}};
    } catch (const ReportedError& e) {
        return {"separator.oddness", false, {{"error", e.what()}, {"witness", e.report()}}};
    }
}

using CheckFn = std::function<std::vector<CheckResult>(const Context&)>;

const std::vector<std::pair<std::vector<std::string>, CheckFn>>& registry() {
    auto one = [](CheckResult (*f)(const Context&)) {
        return CheckFn([f](const Context& c) { return std::vector<CheckResult>{f(c)}; });
    };
    static const std::vector<std::pair<std::vector<std::string>, CheckFn>> r = {
        {{"grid.kernel"}, one(grid_kernel)},
        {{"grid.symmetry"}, one(grid_symmetry)},
        {{"grid.eigen_residual"}, one(grid_eigen_residual)},
        {{"dynamics.order_preservation", "dynamics.energy_dissipation", "dynamics.difference_monotonicity"},
         CheckFn(pair_suite)},
        {{"dynamics.mean_evolution"}, one(mean_evolution)},
        {{"dynamics.convergence_order"}, one(convergence_order)},
        {{"oracle.linear_agreement"}, one(linear_agreement)},
        {{"oracle.smoothing"}, one(smoothing)},
        {{"classify.odd_symmetry"}, one(odd_symmetry)},
        {{"classify.sign_characterization"}, one(sign_characterization)},
        {{"separator.monotonicity_scan"}, one(scan)},
        {{"separator.lipschitz"}, one(lipschitz)},
        {{"separator.oddness"}, one(oddness)},
    };
    return r;
}

}  // namespace

bool VerifyReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

json VerifyReport::to_json() const {
    json list = json::array();
    for (const CheckResult& c : checks) {
        list.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    return {{"passed", all_passed()}, {"checks", list}};
}

std::vector<std::string> verify_check_names() {
    std::vector<std::string> out;
    for (const auto& [names, fn] : registry()) out.insert(out.end(), names.begin(), names.end());
    return out;
}

VerifyReport run_verify(const RunConfig& config) {
    Context ctx{config.grid(),
                config.solver(),
                config.classifier(),
                config.separator(),
                config.numbers("scan.offsets"),
                static_cast<std::uint64_t>(config.integer("verify.seed")),
                static_cast<std::size_t>(std::max(1L, config.integer("verify.pairs"))),
                config.number("verify.horizon"),
                config.get("verify.fault")};
    if (ctx.fault != "none" && ctx.fault != "stencil") throw ConfigError("verify.fault must be none or stencil");
    if (!(ctx.horizon > ctx.solver.dt)) throw ConfigError("verify.horizon must exceed solver.dt");

    std::set<std::string> selected;
    const std::string& which = config.get("verify.checks");
    if (which != "all") {
        std::stringstream ss(which);
        std::string item;
        while (std::getline(ss, item, ',')) selected.insert(item);
        const auto known = verify_check_names();
        for (const std::string& s : selected) {
            if (std::find(known.begin(), known.end(), s) == known.end()) {
                throw ConfigError("verify.checks: unknown check " + s);
            }
        }
    }

    std::vector<std::future<std::vector<CheckResult>>> jobs;
    std::vector<std::vector<std::string>> job_names;
    for (const auto& [names, fn] : registry()) {
        const bool wanted = selected.empty() || std::any_of(names.begin(), names.end(), [&](const std::string& n) {
                                return selected.count(n) != 0;
                            });
        if (!wanted) continue;
        jobs.push_back(std::async(std::launch::async, fn, std::cref(ctx)));
        job_names.push_back(names);
    }
    VerifyReport report;
    for (auto& j : jobs) {
        for (CheckResult& c : j.get()) {
            if (selected.empty() || selected.count(c.name)) report.checks.push_back(std::move(c));
        }
    }
    return report;
}

}  // namespace slowfast::cli
