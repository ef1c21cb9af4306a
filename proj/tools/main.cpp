// Command-line driver: constitutive-model audits, selection curves, and the
// 1D parabolic/elliptic experiments, all emitting CSV plus a replayable
// manifest.

#include <CLI11.hpp>
#include <chrono>
#include <iomanip>
#include <iostream>

#include "fluxgraph/experiments.hpp"

using namespace fluxgraph;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = "out";
    long long seed = -1;
    int threads = 0;
};

Config resolve_config(const GlobalOpts& g,
                      const std::vector<std::pair<std::string, std::string>>& overrides) {
    Config c = g.config_path.empty() ? default_config() : parse_config_file(g.config_path);
    for (const auto& [key, value] : overrides)
        if (!value.empty()) c.set(key, value);
    if (g.seed >= 0) c.set("seed", std::to_string(g.seed));
    if (g.threads > 0) c.set("threads", std::to_string(g.threads));
    return c;
}

std::pair<double, double> parse_range(const std::string& range) {
    const auto colon = range.find(':');
    if (colon == std::string::npos)
        throw ConfigError("range: expected lo:hi, got '" + range + "'");
    try {
        return {std::stod(range.substr(0, colon)), std::stod(range.substr(colon + 1))};
    } catch (...) {
        throw ConfigError("range: malformed bounds in '" + range + "'");
    }
}

std::string sanitize(const std::string& id) {
    std::string out = id;
    for (auto& c : out)
        if (c == ':' || c == ',' || c == '=') c = '_';
    return out;
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void finish(Manifest& manifest, const GlobalOpts& g, const Stopwatch& watch) {
    manifest.duration_seconds = watch.seconds();
    const std::string path = manifest.write(g.out_dir);
    std::cout << "manifest: " << path << "\n";
}

int cmd_verify(const GlobalOpts& g, const std::string& model_id, const std::string& p) {
    Stopwatch watch;
    Config cfg = resolve_config(g, {{"model", model_id}, {"p", p}});
    SampleSpec spec;
    spec.seed = static_cast<std::uint64_t>(cfg.get_int("seed"));
    ensure_dir(g.out_dir);

    Manifest manifest;
    manifest.subcommand = "verify";
    manifest.config = cfg;

    if (model_id.empty() || model_id == "all") {
        const auto table = verify_suite_table(spec, cfg.get_int("threads"));
        const std::string name = "verify_suite.csv";
        csv::write_file(join_path(g.out_dir, name), table);
        manifest.outputs.push_back(name);
        std::cout << std::left << std::setw(26) << "model" << " G1 G2 G3 G4 G4r G2*\n";
        for (const auto& row : table.rows) {
            std::cout << std::left << std::setw(26) << row[0];
            for (int c = 2; c <= 7; ++c) std::cout << "  " << row[c];
            std::cout << "\n";
        }
        finish(manifest, g, watch);
        return 0;
    }

    const auto model = parse_model_id(resolved_model_id(cfg));
    const auto report = verify_model(model, spec);
    const std::string name = "verify_" + sanitize(model.name) + ".csv";
    csv::write_file(join_path(g.out_dir, name), report_to_csv(report));
    manifest.outputs.push_back(name);

    std::cout << "model " << report.model << " (orientation " << report.orientation << ")\n";
    for (const auto& e : report.entries)
        std::cout << "  " << std::left << std::setw(4) << e.condition
                  << (e.passed ? " pass " : " FAIL ") << "margin " << e.worst_margin << "\n";
    std::cout << "  empirical c1 " << report.empirical_c1 << ", c2 " << report.empirical_c2
              << ", Lipschitz " << report.lipschitz_bound << "\n";
    finish(manifest, g, watch);
    return report.all_required_passed() ? 0 : 1;
}

int cmd_curve(const GlobalOpts& g, const std::string& model_id, const std::string& scheme,
              const std::string& eps, const std::string& range, const std::string& count) {
    Stopwatch watch;
    Config cfg = resolve_config(g, {{"model", model_id},
                                    {"scheme", scheme},
                                    {"eps", eps},
                                    {"range", range},
                                    {"n_samples", count}});
    const auto model = parse_model_id(resolved_model_id(cfg));
    SchemeConfig sc;
    sc.scheme = parse_scheme(cfg.get("scheme"));
    sc.epsilon = cfg.get_double("eps");
    sc.shift_sign = cfg.get_int("shift_sign");
    const auto [lo, hi] = parse_range(cfg.get("range"));
    const auto rows = selection_curve(model, sc, lo, hi, cfg.get_int("n_samples"));

    csv::Table t;
    t.header = {"d", "J", "iterations", "residual", "ok"};
    int failures = 0;
    for (const auto& r : rows) {
        if (!r.ok) ++failures;
        t.add_row({csv::format_double(r.d), csv::format_double(r.J),
                   std::to_string(r.iterations), csv::format_double(r.residual),
                   r.ok ? "1" : "0"});
    }
    ensure_dir(g.out_dir);
    csv::write_file(join_path(g.out_dir, "curve.csv"), t);

    Manifest manifest;
    manifest.subcommand = "curve";
    manifest.config = cfg;
    manifest.outputs.push_back("curve.csv");
    std::cout << "curve: " << rows.size() << " rows, " << failures << " failures\n";
    finish(manifest, g, watch);
    return 0;
}

int cmd_constants(const GlobalOpts& g, const std::string& model_id, const std::string& scheme,
                  const std::string& eps) {
    Stopwatch watch;
    Config cfg = resolve_config(g, {{"model", model_id}, {"scheme", scheme}, {"eps", eps}});
    const auto model = parse_model_id(resolved_model_id(cfg));
    SchemeConfig sc;
    sc.scheme = parse_scheme(cfg.get("scheme"));
    sc.epsilon = cfg.get_double("eps");

    const int samples = 10000;
    const auto est =
        estimate_constants(model, sc, samples, static_cast<std::uint64_t>(cfg.get_int("seed")));

    csv::Table t;
    t.header = {"model", "scheme", "eps", "samples", "mono_lower", "lip_upper", "mono_bound",
                "failures"};
    t.add_row({model.name, scheme_name(sc.scheme), csv::format_double(sc.epsilon),
               std::to_string(samples), csv::format_double(est.mono_lower),
               csv::format_double(est.lip_upper),
               csv::format_double(mono_bound(sc.scheme, sc.epsilon)),
               std::to_string(est.failures)});
    ensure_dir(g.out_dir);
    csv::write_file(join_path(g.out_dir, "constants.csv"), t);

    Manifest manifest;
    manifest.subcommand = "constants";
    manifest.config = cfg;
    manifest.outputs.push_back("constants.csv");
    std::cout << "mono_lower " << est.mono_lower << " (bound "
              << mono_bound(sc.scheme, sc.epsilon) << "), lip_upper " << est.lip_upper << "\n";
    finish(manifest, g, watch);
    return 0;
}

int cmd_solve(const GlobalOpts& g) {
    Stopwatch watch;
    Config cfg = resolve_config(g, {});
    const SolveConfig sc = build_solve_config(cfg);
    const Trajectory traj = solve_parabolic(sc);

    ensure_dir(g.out_dir);
    csv::write_file(join_path(g.out_dir, "u_final.csv"),
                    u_field_table(sc.mesh, traj.u_fields.back()));
    csv::write_file(join_path(g.out_dir, "J_final.csv"),
                    flux_table(sc.mesh, traj.J_fields.back()));
    csv::write_file(join_path(g.out_dir, "energy_ledger.csv"), ledger_table(traj));

    Manifest manifest;
    manifest.subcommand = "solve";
    manifest.config = cfg;
    manifest.outputs = {"u_final.csv", "J_final.csv", "energy_ledger.csv"};
    manifest.extras.emplace_back("energy_residual", csv::format_double(energy_report(traj)));
    std::cout << "steps " << traj.energy_ledger.size() << ", energy residual "
              << energy_report(traj) << "\n";
    finish(manifest, g, watch);
    return 0;
}

int cmd_elliptic(const GlobalOpts& g) {
    Stopwatch watch;
    Config cfg = resolve_config(g, {});
    const SolveConfig sc = build_solve_config(cfg);
    const EllipticSolution sol = solve_elliptic(sc);

    ensure_dir(g.out_dir);
    csv::write_file(join_path(g.out_dir, "u_final.csv"), u_field_table(sc.mesh, sol.u));
    csv::write_file(join_path(g.out_dir, "J_final.csv"), flux_table(sc.mesh, sol.J));

    Manifest manifest;
    manifest.subcommand = "elliptic";
    manifest.config = cfg;
    manifest.outputs = {"u_final.csv", "J_final.csv"};
    std::cout << "elliptic solve done, " << sol.u.size() << " nodes\n";
    finish(manifest, g, watch);
    return 0;
}

int cmd_sweep_eps(const GlobalOpts& g) {
    Stopwatch watch;
    Config cfg = resolve_config(g, {});
    const SolveConfig sc = build_solve_config(cfg);
    const auto sweep = sweep_eps(sc, cfg.get_double_list("eps_list"));

    csv::Table t;
    t.header = {"eps", "distance", "ok", "error"};
    for (const auto& row : sweep.rows)
        t.add_row({csv::format_double(row.eps), csv::format_double(row.distance),
                   row.ok ? "1" : "0", row.error});
    ensure_dir(g.out_dir);
    csv::write_file(join_path(g.out_dir, "sweep_eps.csv"), t);

    Manifest manifest;
    manifest.subcommand = "sweep-eps";
    manifest.config = cfg;
    manifest.outputs = {"sweep_eps.csv"};
    manifest.extras.emplace_back("eps_ref", csv::format_double(sweep.eps_ref));
    manifest.extras.emplace_back("monotone_ok", sweep.monotone_ok ? "1" : "0");
    for (const auto& row : sweep.rows)
        std::cout << "eps " << row.eps << " distance " << row.distance
                  << (row.ok ? "" : " [failed]") << "\n";
    if (!sweep.monotone_ok) std::cout << "distance trend is not monotone within slack\n";
    finish(manifest, g, watch);
    return sweep.monotone_ok ? 0 : 1;
}

int cmd_sweep_mesh(const GlobalOpts& g) {
    Stopwatch watch;
    Config cfg = resolve_config(g, {});
    const SolveConfig sc = build_solve_config(cfg);
    const auto sweep = sweep_mesh(sc, cfg.get_int_list("n_list"), cfg.get("tau_rule"));

    csv::Table t;
    t.header = {"n", "h", "tau", "error"};
    for (const auto& row : sweep.rows)
        t.add_row({std::to_string(row.n), csv::format_double(row.h),
                   csv::format_double(row.tau), csv::format_double(row.error)});
    ensure_dir(g.out_dir);
    csv::write_file(join_path(g.out_dir, "sweep_mesh.csv"), t);

    Manifest manifest;
    manifest.subcommand = "sweep-mesh";
    manifest.config = cfg;
    manifest.outputs = {"sweep_mesh.csv"};
    manifest.extras.emplace_back("fitted_order", csv::format_double(sweep.fitted_order));
    std::cout << "fitted order " << sweep.fitted_order << "\n";
    finish(manifest, g, watch);
    return 0;
}

int cmd_figure2(const GlobalOpts& g, const std::string& eps) {
    Stopwatch watch;
    Config cfg = resolve_config(g, {{"eps_list", eps.empty() ? "0.1,0.3" : eps}});
    const auto written =
        run_figure2(cfg.get_double_list("eps_list"),
                    {Scheme::StretchGraph, Scheme::ShearCompose, Scheme::LinearShift}, g.out_dir,
                    cfg.get_int("n_samples"));

    Manifest manifest;
    manifest.subcommand = "figure2";
    manifest.config = cfg;
    manifest.outputs = written;
    for (const auto& name : written) std::cout << "wrote " << name << "\n";
    finish(manifest, g, watch);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"implicit constitutive graph toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--config", g.config_path, "configuration file (key = value lines)");
    app.add_option("--out", g.out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", g.seed, "sampling seed override");
    app.add_option("--threads", g.threads, "worker threads for suite runs");

    std::string model, scheme, eps, p, range, count;

    auto* verify = app.add_subcommand("verify", "audit structural conditions");
    verify->add_option("--model", model, "model id or 'all'");
    verify->add_option("--p", p, "growth exponent for the model");

    auto* curve = app.add_subcommand("curve", "selection curve sweep");
    curve->add_option("--model", model);
    curve->add_option("--scheme", scheme, "a|b|c");
    curve->add_option("--eps", eps);
    curve->add_option("--range", range, "lo:hi");
    curve->add_option("--n", count, "sample count");

    auto* constants = app.add_subcommand("constants", "monotonicity/Lipschitz estimates");
    constants->add_option("--model", model);
    constants->add_option("--scheme", scheme, "a|b");
    constants->add_option("--eps", eps);

    auto* solve = app.add_subcommand("solve", "parabolic solve from config");
    auto* elliptic = app.add_subcommand("elliptic", "steady solve from config");
    auto* sweep_eps_cmd = app.add_subcommand("sweep-eps", "epsilon convergence study");
    auto* sweep_mesh_cmd = app.add_subcommand("sweep-mesh", "mesh convergence study");

    std::string fig_eps;
    auto* figure2 = app.add_subcommand("figure2", "staircase approximation data");
    figure2->add_option("--eps", fig_eps, "comma-separated epsilons");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return cmd_verify(g, model, p);
        if (curve->parsed()) return cmd_curve(g, model, scheme, eps, range, count);
        if (constants->parsed()) return cmd_constants(g, model, scheme, eps);
        if (solve->parsed()) return cmd_solve(g);
        if (elliptic->parsed()) return cmd_elliptic(g);
        if (sweep_eps_cmd->parsed()) return cmd_sweep_eps(g);
        if (sweep_mesh_cmd->parsed()) return cmd_sweep_mesh(g);
        if (figure2->parsed()) return cmd_figure2(g, fig_eps);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 3;
    } catch (const ParameterError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 3;
    } catch (const PropertyError& e) {
        std::cerr << "property violation: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
