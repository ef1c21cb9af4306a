// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails.  Tolerances and runtime limits are pinned in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "fluxgraph/experiments.hpp"
#include "fluxgraph/fem.hpp"
#include "fluxgraph/selector.hpp"
#include "fluxgraph/verifier.hpp"
#include "oracles.hpp"

using namespace fluxgraph;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

int g_failures = 0;

struct Check {
    bool ok = true;
    std::ostringstream why;

    void require(bool condition, const std::string& msg) {
        if (!condition) {
            ok = false;
            why << (why.str().empty() ? "" : "; ") << msg;
        }
    }
};

void criterion(int num, const std::string& label, double limit_seconds,
               const std::function<void(Check&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Check check;
    try {
        body(check);
    } catch (const std::exception& e) {
        check.ok = false;
        check.why << "exception: " << e.what();
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_seconds > 0.0 && dt > limit_seconds) {
        check.ok = false;
        check.why << (check.why.str().empty() ? "" : "; ") << "runtime " << dt
                  << "s exceeds the " << limit_seconds << "s limit";
    }
    std::printf("[%s] criterion %d: %s (%.1fs)%s%s\n", check.ok ? "PASS" : "FAIL", num,
                label.c_str(), dt, check.ok ? "" : " -- ", check.ok ? "" : check.why.str().c_str());
    std::fflush(stdout);
    if (!check.ok) ++g_failures;
}

// ---------------------------------------------------------------------------
// 1. Structural condition suite
// ---------------------------------------------------------------------------

void criterion_conditions(Check& c) {
    SampleSpec spec;
    spec.seed = 20240601;

    const char* passing[] = {"linear",     "regpow-sq-inv:p=3", "activated-flux:sigma=1",
                             "step-riser", "zigzag",            "activated-grad:delta=1"};
    for (const char* id : passing) {
        const auto report = verify_model(parse_model_id(id), spec);
        c.require(report.all_required_passed(), std::string(id) + " fails a required condition");
    }

    const auto ms = verify_model(parse_model_id("maxwell-stefan:n=2,a=1"), spec);
    c.require(ms.find("G1")->passed && ms.find("G2")->passed && ms.find("G3")->passed,
              "maxwell-stefan should satisfy (G1)-(G3)");
    c.require(!ms.find("G4")->passed, "maxwell-stefan should fail plain (G4)");
    c.require(ms.find("G4r")->passed, "maxwell-stefan should pass range-restricted coercivity");

    const auto anti = verify_model(parse_model_id("antimonotone"), spec);
    c.require(!anti.all_required_passed(), "antimonotone control should fail");
    c.require(!anti.find("G2")->passed && anti.find("G2")->has_witness,
              "antimonotone should fail (G2) with a witness");

    const auto quad = verify_model(parse_model_id("quadratic-flux"), spec);
    c.require(!quad.all_required_passed(), "quadratic control should fail");
    c.require(!quad.find("G1")->passed && quad.find("G1")->has_witness,
              "quadratic control should fail (G1) with a witness");
}

// ---------------------------------------------------------------------------
// 2. Monotonicity constants
// ---------------------------------------------------------------------------

void criterion_monotonicity(Check& c) {
    const int pairs = 10000;
    for (const auto& id : builtin_ids()) {
        const auto model = parse_model_id(id);
        for (const Scheme scheme : {Scheme::StretchGraph, Scheme::ShearCompose}) {
            for (const double eps : {0.3, 0.1, 0.03}) {
                SchemeConfig cfg;
                cfg.scheme = scheme;
                cfg.epsilon = eps;
                // estimate_constants throws PropertyError on any violated pair.
                const auto est = estimate_constants(model, cfg, pairs, 777);
                const double bound = (1.0 - 1e-6) * mono_bound(scheme, eps);
                std::ostringstream msg;
                msg << id << "/" << scheme_name(scheme) << "/eps=" << eps << " mono "
                    << est.mono_lower << " < " << bound;
                c.require(est.mono_lower >= bound, msg.str());
                c.require(est.failures == 0, id + std::string(" had selection failures"));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// 3. Epsilon-uniform coercivity
// ---------------------------------------------------------------------------

void criterion_coercivity(Check& c) {
    const char* models[] = {"linear",     "regpow-sq-inv:p=3", "activated-flux:sigma=1",
                            "step-riser", "zigzag",            "activated-grad:delta=1"};
    for (const char* id : models) {
        const auto fit = coercivity_eps(parse_model_id(id), 2000, {0.3, 0.1, 0.03, 0.01}, 99);
        std::ostringstream msg;
        msg << id << ": C1=" << fit.C1 << " worst=" << fit.worst_margin;
        c.require(fit.C1 >= 1e-3, "no usable joint constant for " + std::string(id));
        c.require(fit.worst_margin >= -1e-8, msg.str());
        const double lo = *std::min_element(fit.per_eps_c1.begin(), fit.per_eps_c1.end());
        const double hi = *std::max_element(fit.per_eps_c1.begin(), fit.per_eps_c1.end());
        c.require(hi <= 10.0 * lo, std::string(id) + ": per-epsilon constants drift beyond 10x");
    }
}

// ---------------------------------------------------------------------------
// 4. Graph convergence and staircase data
// ---------------------------------------------------------------------------

void criterion_graph_convergence(Check& c) {
    for (const char* id : {"step-riser", "zigzag"}) {
        const auto model = parse_model_id(id);
        double dist[3];
        const double eps_steps[3] = {0.2, 0.1, 0.05};
        for (int k = 0; k < 3; ++k) {
            SchemeConfig cfg;
            cfg.scheme = Scheme::StretchGraph;
            cfg.epsilon = eps_steps[k];
            dist[k] = graph_distance(model, cfg, -3.0, 3.0, 241);
        }
        for (int k = 0; k + 1 < 3; ++k) {
            const double ratio = dist[k + 1] / dist[k];
            std::ostringstream msg;
            msg << id << " halving " << eps_steps[k] << "->" << eps_steps[k + 1] << " ratio "
                << ratio << " outside [0.3, 0.8]";
            c.require(ratio >= 0.3 && ratio <= 0.8, msg.str());
        }
    }

    {
        SchemeConfig cfg;
        cfg.scheme = Scheme::ShearCompose;
        cfg.epsilon = 0.1;
        const double h = graph_distance(parse_model_id("linear"), cfg, -3.0, 3.0, 121);
        c.require(h <= 1e-10, "shear scheme is not exact on the identity graph");
    }

    // Regenerate the staircase comparison data and spot-check rows against a
    // bisection oracle of the scheme equations.
    const auto out_dir =
        (std::filesystem::temp_directory_path() / "fluxgraph_acceptance_fig2").string();
    std::filesystem::remove_all(out_dir);
    run_figure2({0.1, 0.3}, {Scheme::StretchGraph, Scheme::ShearCompose, Scheme::LinearShift},
                out_dir, 601);
    const auto zz = parse_model_id("zigzag");
    for (const Scheme scheme : {Scheme::StretchGraph, Scheme::ShearCompose, Scheme::LinearShift}) {
        for (const double eps : {0.1, 0.3}) {
            std::ostringstream name;
            name << out_dir << "/figure2_" << scheme_name(scheme) << "_eps"
                 << (eps == 0.1 ? "0p1" : "0p3") << ".csv";
            const auto table = csv::read_file(name.str());
            c.require(table.rows.size() == 601, "figure2 CSV row count");
            for (int spot = 0; spot < 20; ++spot) {
                const std::size_t idx = spot * 31 + 5;  // 20 indices spread over 601 rows
                const double d = std::stod(table.rows[idx][0]);
                const double J = std::stod(table.rows[idx][1]);
                const double ref = oracles::select_by_bisection(zz, scheme, eps, d);
                if (std::abs(J - ref) > 1e-8) {
                    std::ostringstream msg;
                    msg << "figure2 " << scheme_name(scheme) << " eps " << eps << " at d=" << d
                        << ": J=" << J << " vs oracle " << ref;
                    c.require(false, msg.str());
                    break;
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// 5. Heat-equation oracle
// ---------------------------------------------------------------------------

SolveConfig heat_config(int n) {
    SolveConfig cfg;
    cfg.mesh = build_mesh(n, 1.0, BcType::Dirichlet, BcType::Dirichlet);
    cfg.model = parse_model_id("linear");
    cfg.scheme.scheme = Scheme::ShearCompose;
    cfg.scheme.epsilon = 0.1;
    cfg.T = 0.1;
    cfg.tau = 1e-4;
    cfg.u0 = [](double x) { return std::sin(kPi * x); };
    cfg.oracle = [](double t, double x) { return std::sin(kPi * x) * std::exp(-kPi * kPi * t); };
    return cfg;
}

Trajectory g_heat_trajectory;  // reused by the energy criterion

void criterion_heat(Check& c) {
    SolveConfig cfg = heat_config(64);
    g_heat_trajectory = solve_parabolic(cfg);
    double err = 0.0;
    const Vec& u = g_heat_trajectory.u_fields.back();
    for (int i = 0; i < u.size(); ++i)
        err = std::max(err, std::abs(u[i] - cfg.oracle(0.1, cfg.mesh.nodes[i])));
    std::ostringstream msg;
    msg << "max nodal error " << err << " > 5e-3";
    c.require(err <= 5e-3, msg.str());

    const auto sweep = sweep_mesh(cfg, {16, 32, 64}, "h2");
    std::ostringstream omsg;
    omsg << "fitted spatial order " << sweep.fitted_order << " < 1.9";
    c.require(sweep.fitted_order >= 1.9, omsg.str());
}

// ---------------------------------------------------------------------------
// 6. Degenerate power-law elliptic oracle
// ---------------------------------------------------------------------------

void criterion_plaplace(Check& c) {
    SolveConfig cfg;
    cfg.mesh = build_mesh(256, 1.0, BcType::Dirichlet, BcType::Dirichlet);
    cfg.model = parse_model_id("powerlaw:p=3");
    cfg.verify_model_first = false;  // strict global-Lipschitz audit rejects p = 3
    cfg.scheme.scheme = Scheme::ShearCompose;
    cfg.scheme.epsilon = 1e-4;
    cfg.T = 0.0;
    cfg.f = [](double, double x) { return 4.0 * std::abs(1.0 - 2.0 * x); };
    const auto sol = solve_elliptic(cfg);
    double err = 0.0;
    for (int i = 0; i < sol.u.size(); ++i) {
        const double x = cfg.mesh.nodes[i];
        err = std::max(err, std::abs(sol.u[i] - x * (1.0 - x)));
    }
    std::ostringstream msg;
    msg << "Linf error " << err << " > 1e-3 at n=256";
    c.require(err <= 1e-3, msg.str());
}

// ---------------------------------------------------------------------------
// 7. Activation plateau
// ---------------------------------------------------------------------------

void criterion_plateau(Check& c) {
    const double sigma = 0.1;
    double previous = std::numeric_limits<double>::infinity();
    for (const double eps : {0.1, 0.03, 0.01}) {
        SolveConfig cfg;
        cfg.mesh = build_mesh(200, 1.0, BcType::Dirichlet, BcType::Dirichlet);
        cfg.model = parse_model_id("activated-flux:sigma=0.1");
        cfg.scheme.scheme = Scheme::StretchGraph;
        cfg.scheme.epsilon = eps;
        cfg.T = 0.0;
        cfg.f = [](double, double) { return 1.0; };
        const auto sol = solve_elliptic(cfg);
        double plateau = 0.0;
        for (int e = 0; e < sol.J.size(); ++e) {
            if (std::abs(sol.J[e]) < sigma * (1.0 - 1e-6)) {
                const double grad =
                    (sol.u[e + 1] - sol.u[e]) / (cfg.mesh.nodes[e + 1] - cfg.mesh.nodes[e]);
                plateau = std::max(plateau, std::abs(grad));
            }
        }
        std::ostringstream msg;
        msg << "eps " << eps << ": plateau gradient " << plateau;
        c.require(plateau <= 10.0 * eps, msg.str() + " exceeds 10*eps");
        c.require(plateau <= previous + 1e-12, msg.str() + " did not decrease");
        previous = plateau;
    }
}

// ---------------------------------------------------------------------------
// 8. Energy ledger
// ---------------------------------------------------------------------------

void check_ledger(Check& c, const Trajectory& traj, const std::string& label) {
    std::ostringstream msg;
    msg << label << ": energy residual " << energy_report(traj) << " > 1e-8";
    c.require(energy_report(traj) <= 1e-8, msg.str());
    for (const auto& rec : traj.energy_ledger) {
        if (rec.dissipation < 0.0) {
            c.require(false, label + ": negative dissipation step");
            return;
        }
    }
}

void criterion_energy(Check& c) {
    check_ledger(c, g_heat_trajectory, "heat run");

    SolveConfig bingham;
    bingham.mesh = build_mesh(48, 1.0, BcType::Dirichlet, BcType::Dirichlet);
    bingham.model = parse_model_id("activated-flux:sigma=0.1");
    bingham.scheme.scheme = Scheme::StretchGraph;
    bingham.scheme.epsilon = 0.05;
    bingham.T = 0.05;
    bingham.tau = 2.5e-3;
    bingham.f = [](double, double) { return 1.0; };
    check_ledger(c, solve_parabolic(bingham), "activated-flux run");

    SolveConfig staircase;
    staircase.mesh = build_mesh(48, 1.0, BcType::Dirichlet, BcType::Neumann);
    staircase.model = parse_model_id("step-riser");
    staircase.scheme.scheme = Scheme::StretchGraph;
    staircase.scheme.epsilon = 0.1;
    staircase.T = 0.05;
    staircase.tau = 2.5e-3;
    staircase.u0 = [](double x) { return std::sin(kPi * x); };
    check_ledger(c, solve_parabolic(staircase), "staircase run");
}

// ---------------------------------------------------------------------------
// 9. Epsilon convergence of the parabolic solution
// ---------------------------------------------------------------------------

void criterion_eps_convergence(Check& c) {
    SolveConfig cfg;
    cfg.mesh = build_mesh(32, 1.0, BcType::Dirichlet, BcType::Dirichlet);
    cfg.model = parse_model_id("step-riser");
    cfg.scheme.scheme = Scheme::StretchGraph;
    cfg.T = 0.05;
    cfg.tau = 2.5e-3;
    cfg.u0 = [](double x) { return std::sin(kPi * x); };
    const auto sweep = sweep_eps(cfg, {0.2, 0.1, 0.05});
    for (const auto& row : sweep.rows) {
        std::ostringstream msg;
        msg << "eps " << row.eps << " failed: " << row.error;
        c.require(row.ok, msg.str());
    }
    std::ostringstream distances;
    for (const auto& row : sweep.rows) distances << " " << row.distance;
    c.require(sweep.monotone_ok,
              "distances are not monotone within 10% slack:" + distances.str());
}

}  // namespace

int main() {
    criterion(1, "structural condition suite", 30.0, criterion_conditions);
    criterion(2, "uniform monotonicity constants", 120.0, criterion_monotonicity);
    criterion(3, "epsilon-uniform coercivity", 0.0, criterion_coercivity);
    criterion(4, "graph convergence and staircase data", 0.0, criterion_graph_convergence);
    criterion(5, "heat-equation oracle", 60.0, criterion_heat);
    criterion(6, "degenerate power-law elliptic oracle", 0.0, criterion_plaplace);
    criterion(7, "activation plateau", 0.0, criterion_plateau);
    criterion(8, "discrete energy ledger", 0.0, criterion_energy);
    criterion(9, "epsilon convergence of the solution", 300.0, criterion_eps_convergence);

    if (g_failures == 0) {
        std::printf("acceptance: all 9 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria failed\n", g_failures);
    return 1;
}
