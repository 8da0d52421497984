#include "slowfast/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "slowfast/classify.hpp"
#include "slowfast/cli/init_data.hpp"
#include "slowfast/cli/verify.hpp"
#include "slowfast/errors.hpp"
#include "slowfast/separator.hpp"

namespace slowfast::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

InitOptions init_options(const RunConfig& config) {
    InitOptions s;
    s.expr = config.get("init.expr");
    s.offset = config.number("init.offset");
    s.remean = config.boolean("init.remean");
    const long seed = config.integer("init.seed");
    const long modes = config.integer("init.modes");
    if (seed < 0) throw ConfigError("init.seed must be nonnegative");
    if (modes < 1) throw ConfigError("init.modes must be at least 1");
    s.seed = static_cast<std::uint64_t>(seed);
    s.modes = static_cast<std::size_t>(modes);
    return s;
}

fs::path output_dir(const RunConfig& config) {
    const fs::path dir = config.get("output.dir");
    if (dir.empty()) throw ConfigError("output.dir must not be empty");
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void write_json(const fs::path& path, const json& j) { open_output(path) << j.dump(2) << '\n'; }

std::string time_label(double t) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, t);
    return std::string(buf, end);
}

Trajectory run_solver(const RunConfig& config) {
    const GridPtr grid = config.grid();
    const SolverConfig solver = config.solver();
    return evolve(build_initial_data(grid, init_options(config)), solver);
}

}  // namespace

int cmd_solve(const RunConfig& config, std::ostream& log) {
    const fs::path dir = output_dir(config);
    const Trajectory traj = run_solver(config);
    {
        std::ofstream out = open_output(dir / "trajectory.csv");
        traj.write_csv(out);
    }
    for (const Snapshot& s : traj.snapshots()) {
        std::ofstream out = open_output(dir / ("snapshot_t" + time_label(s.t) + ".csv"));
        write_field_csv(out, s.field);
    }
    const Sample& last = traj.samples().back();
    log << "solve: t = " << last.t << ", linf = " << last.linf << ", samples = " << traj.samples().size()
        << ", snapshots = " << traj.snapshots().size() << '\n';
    return exit_ok;
}

int cmd_classify(const RunConfig& config, std::ostream& log) {
    const fs::path dir = output_dir(config);
    const ClassifyConfig classifier = config.classifier();
    const Trajectory traj = run_solver(config);
    try {
        const Classification c = classify(traj, classifier);
        write_json(dir / "classification.json", c.to_json(classifier));
        log << "classify: " << to_string(c.tag) << '\n';
        return exit_ok;
    } catch (const InconclusiveError& e) {
        write_json(dir / "classification.json", e.report());
        log << "classify: inconclusive: " << e.what() << '\n';
        return exit_inconclusive;
    }
}

int cmd_separator(const RunConfig& config, std::ostream& log) {
    if (!config.boolean("init.remean")) throw ConfigError("separator requires init.remean = true");
    if (config.number("init.offset") != 0.0) throw ConfigError("separator requires init.offset = 0");
    const fs::path dir = output_dir(config);
    SeparatorQuery query{build_initial_data(config.grid(), init_options(config)), std::nullopt, config.separator()};
    const std::vector<double> bracket = config.numbers("separator.bracket");
    if (!bracket.empty()) {
        if (bracket.size() != 2 || !(bracket[0] < bracket[1])) {
            throw ConfigError("separator.bracket must be two ascending numbers");
        }
        query.bracket = std::make_pair(bracket[0], bracket[1]);
    }
    try {
        const SeparatorResult r = compute_phi(query);
        write_json(dir / "separator.json", r.to_json());
        log << "separator: phi = " << r.phi << " in [" << r.lower << ", " << r.upper << "], probes = "
            << r.probes.size() << '\n';
        return exit_ok;
    } catch (const ReportedError& e) {
        json report = e.report();
        report["error"] = e.what();
        write_json(dir / "separator.json", report);
        log << "separator: " << e.what() << '\n';
        return exit_inconclusive;
    }
}

int cmd_scan(const RunConfig& config, std::ostream& log) {
    const fs::path dir = output_dir(config);
    const Field w0 = build_initial_data(config.grid(), init_options(config));
    std::vector<double> ks = config.numbers("scan.offsets");
    if (ks.empty()) throw ConfigError("scan.offsets must not be empty");
    if (!std::is_sorted(ks.begin(), ks.end())) throw ConfigError("scan.offsets must be ascending");
    const SeparatorSettings settings = config.separator();
    try {
        const auto cs = monotonicity_scan(w0, ks, settings);
        json rows = json::array();
        for (std::size_t i = 0; i < ks.size(); ++i) {
            rows.push_back({{"k", ks[i]}, {"classification", cs[i].to_json(settings.classifier)}});
        }
        write_json(dir / "scan.json", {{"monotone", true}, {"scan", rows}});
        log << "scan: monotone over " << ks.size() << " offsets\n";
        return exit_ok;
    } catch (const ReportedError& e) {
        json report = e.report();
        report["error"] = e.what();
        report["monotone"] = false;
        write_json(dir / "scan.json", report);
        log << "scan: " << e.what() << '\n';
        return exit_inconclusive;
    }
}

int cmd_verify(const RunConfig& config, std::ostream& log) {
    const fs::path dir = output_dir(config);
    const VerifyReport report = run_verify(config);
    write_json(dir / "verify.json", report.to_json());
    for (const CheckResult& c : report.checks) log << (c.passed ? "PASS " : "FAIL ") << c.name << '\n';
    return report.all_passed() ? exit_ok : exit_inconclusive;
}

std::vector<std::string> command_names() { return {"solve", "classify", "separator", "scan", "verify", "config"}; }

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Slow/fast dynamics of the absorption heat equation"};
    std::string command;
    std::string config_path;
    app.add_option("command", command, "solve | classify | separator | scan | verify | config")
        ->required()
        ->check(CLI::IsMember(command_names()));
    app.add_option("--config", config_path, "key = value configuration file");
    app.allow_extras();
    app.footer("Any config key can be overridden with --dotted.key VALUE or --dotted.key=VALUE.");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? exit_ok : exit_error;
    }

    try {
        RunConfig config = config_path.empty() ? RunConfig() : RunConfig::load(config_path);
        const std::vector<std::string> extras = app.remaining();
        for (std::size_t i = 0; i < extras.size(); ++i) {
            const std::string& a = extras[i];
            if (a.rfind("--", 0) != 0 || a.size() <= 2) throw ConfigError("unexpected argument: " + a);
            const std::string body = a.substr(2);
            const auto eq = body.find('=');
            if (eq != std::string::npos) {
                config.set(body.substr(0, eq), body.substr(eq + 1));
            } else {
                if (i + 1 >= extras.size()) throw ConfigError("missing value for --" + body);
                config.set(body, extras[++i]);
            }
        }
        if (command == "config") {
            out << config.serialize();
            return exit_ok;
        }
        if (command == "solve") return cmd_solve(config, out);
        if (command == "classify") return cmd_classify(config, out);
        if (command == "separator") return cmd_separator(config, out);
        if (command == "scan") return cmd_scan(config, out);
        return cmd_verify(config, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_error;
    }
}

}  // namespace slowfast::cli
