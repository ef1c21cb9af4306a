#include "fluxgraph/fem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fluxgraph/verifier.hpp"

namespace fluxgraph {

BcType parse_bc(const std::string& s) {
    if (s == "dirichlet") return BcType::Dirichlet;
    if (s == "neumann") return BcType::Neumann;
    throw ParameterError("bc: expected dirichlet or neumann, got '" + s + "'");
}

void Mesh1D::validate() const {
    if (n_nodes() < 3) throw ParameterError("mesh: needs at least 3 nodes");
    for (int i = 1; i < n_nodes(); ++i)
        if (!(nodes[i] > nodes[i - 1]))
            throw ParameterError("mesh: nodes must increase strictly");
}

Mesh1D build_mesh(int n_elements, double L, BcType left, BcType right) {
    if (n_elements < 2) throw ParameterError("mesh: n_elements must be >= 2");
    if (!(L > 0.0)) throw ParameterError("mesh: L must be positive");
    Mesh1D mesh;
    mesh.nodes.resize(n_elements + 1);
    for (int i = 0; i <= n_elements; ++i) mesh.nodes[i] = L * i / n_elements;
    mesh.left_bc = left;
    mesh.right_bc = right;
    mesh.validate();
    return mesh;
}

void SolveConfig::validate() const {
    mesh.validate();
    scheme.validate();
    if (model.N != 1 || model.d != 1)
        throw ParameterError("solver: constitutive model must be scalar (N = d = 1)");
    if (T > 0.0 && !(tau > 0.0 && T >= tau - 1e-12))
        throw ParameterError("solver: need tau > 0 and T >= tau");
    if (newton_tol <= 0.0 || newton_max < 1) throw ParameterError("solver: bad Newton controls");
}

namespace {

constexpr double kQNaN = std::numeric_limits<double>::quiet_NaN();

struct Grid {
    std::vector<double> h;  // element sizes
    std::vector<double> M;  // lumped (trapezoidal) nodal weights
    int lo = 0, hi = 0;     // inclusive free-node range
};

Grid make_grid(const Mesh1D& mesh, bool pin_left_for_elliptic) {
    Grid g;
    const int nn = mesh.n_nodes();
    g.h.resize(mesh.n_elements());
    for (int e = 0; e < mesh.n_elements(); ++e) g.h[e] = mesh.nodes[e + 1] - mesh.nodes[e];
    g.M.assign(nn, 0.0);
    for (int e = 0; e < mesh.n_elements(); ++e) {
        g.M[e] += 0.5 * g.h[e];
        g.M[e + 1] += 0.5 * g.h[e];
    }
    g.lo = (mesh.left_bc == BcType::Dirichlet || pin_left_for_elliptic) ? 1 : 0;
    g.hi = (mesh.right_bc == BcType::Dirichlet) ? nn - 2 : nn - 1;
    return g;
}

// Per-element selection with warm starts; probe evaluations leave the warm
// cache untouched.
struct FluxCache {
    const ConstitutiveModel* model = nullptr;
    SchemeConfig scheme;
    std::vector<double> warm;
    std::vector<char> have;

    void reset(int n_elements) {
        warm.assign(n_elements, 0.0);
        have.assign(n_elements, 0);
    }

    double flux(double grad, int e, bool update_warm) {
        Mat D(1, 1), G(1, 1);
        D(0, 0) = grad;
        const Mat* guess = nullptr;
        if (have[e]) {
            G(0, 0) = warm[e];
            guess = &G;
        }
        try {
            // Inner solves run well below the outer tolerance so that flux
            // round-off cannot floor the nodal residual; if the tight solve
            // is unreachable, the contract tolerance still stands.
            SelectorResult res;
            SchemeConfig tight = scheme;
            tight.newton_tol = 1e-14;
            try {
                res = select(*model, tight, D, guess);
            } catch (const SelectionError&) {
                res = select(*model, scheme, D, guess);
            }
            if (update_warm) {
                warm[e] = res.J(0, 0);
                have[e] = 1;
            }
            return res.J(0, 0);
        } catch (const SelectionError& err) {
            std::ostringstream msg;
            msg << err.what() << " [element " << e << "]";
            throw SelectionError(msg.str(), err.last_residual);
        }
    }

    double slope(double grad, int e) {
        const double d = 1e-6 * (1.0 + std::abs(grad));
        return (flux(grad + d, e, false) - flux(grad - d, e, false)) / (2.0 * d);
    }
};

struct Tridiag {
    std::vector<double> sub, diag, sup;
};

// Thomas algorithm; overwrites its inputs.
std::vector<double> thomas(Tridiag t, std::vector<double> rhs) {
    const int n = static_cast<int>(rhs.size());
    for (int i = 1; i < n; ++i) {
        const double w = t.sub[i] / t.diag[i - 1];
        t.diag[i] -= w * t.sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / t.diag[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = (rhs[i] - t.sup[i] * x[i + 1]) / t.diag[i];
    return x;
}

struct NonlinearSystem {
    const SolveConfig* cfg = nullptr;
    const Grid* grid = nullptr;
    FluxCache* cache = nullptr;
    const Vec* u_prev = nullptr;  // null for the steady problem
    double tau_inv = 0.0;
    Vec F;  // lumped load, full node vector

    int n_nodes() const { return static_cast<int>(F.size()); }

    void gradients(const Vec& u, std::vector<double>& D) const {
        const auto& h = grid->h;
        D.resize(h.size());
        for (std::size_t e = 0; e < h.size(); ++e) D[e] = (u[e + 1] - u[e]) / h[e];
    }

    // Residual on free nodes; element fluxes are reported as a side effect.
    double residual(const Vec& u, Vec& R, std::vector<double>& Jel, bool update_warm) const {
        std::vector<double> D;
        gradients(u, D);
        Jel.resize(D.size());
        for (std::size_t e = 0; e < D.size(); ++e)
            Jel[e] = cache->flux(D[e], static_cast<int>(e), update_warm);
        R.setZero(n_nodes());
        for (int i = grid->lo; i <= grid->hi; ++i) {
            double r = -F[i];
            if (u_prev) r += grid->M[i] * (u[i] - (*u_prev)[i]) * tau_inv;
            if (i > 0) r += Jel[i - 1];
            if (i < static_cast<int>(Jel.size())) r -= Jel[i];
            R[i] = r;
        }
        double norm = 0.0;
        for (int i = grid->lo; i <= grid->hi; ++i) norm += R[i] * R[i];
        return std::sqrt(norm);
    }

    // Tridiagonal tangent on the free range from finite-difference slopes of
    // the selection map.
    Tridiag tangent(const Vec& u) const {
        std::vector<double> D;
        gradients(u, D);
        std::vector<double> s(D.size());
        for (std::size_t e = 0; e < D.size(); ++e)
            s[e] = cache->slope(D[e], static_cast<int>(e));
        const int nfree = grid->hi - grid->lo + 1;
        Tridiag t;
        t.sub.assign(nfree, 0.0);
        t.diag.assign(nfree, 0.0);
        t.sup.assign(nfree, 0.0);
        for (int i = grid->lo; i <= grid->hi; ++i) {
            const int k = i - grid->lo;
            double diag = u_prev ? grid->M[i] * tau_inv : 0.0;
            if (i > 0) {
                diag += s[i - 1] / grid->h[i - 1];
                if (i - 1 >= grid->lo) t.sub[k] = -s[i - 1] / grid->h[i - 1];
            }
            if (i < static_cast<int>(s.size())) {
                diag += s[i] / grid->h[i];
                if (i + 1 <= grid->hi) t.sup[k] = -s[i] / grid->h[i];
            }
            t.diag[k] = diag;
        }
        return t;
    }
};

// Damped Newton on the nodal residual with a mass-scaled Picard fallback.
// Returns the converged state; throws StepError on failure.
Vec newton_solve(const NonlinearSystem& sys, Vec u, int step_index) {
    const SolveConfig& cfg = *sys.cfg;
    const Grid& grid = *sys.grid;
    Vec R;
    std::vector<double> Jel;
    double rn = sys.residual(u, R, Jel, true);
    for (int it = 0; it < cfg.newton_max; ++it) {
        if (rn <= cfg.newton_tol) return u;
        const Tridiag t = sys.tangent(u);
        std::vector<double> rhs(grid.hi - grid.lo + 1);
        for (int i = grid.lo; i <= grid.hi; ++i) rhs[i - grid.lo] = R[i];
        const std::vector<double> delta = thomas(t, rhs);

        Vec trial = u;
        double alpha = 1.0;
        bool accepted = false;
        Vec Rt;
        while (alpha >= 0x1.0p-30) {
            for (int i = grid.lo; i <= grid.hi; ++i)
                trial[i] = u[i] - alpha * delta[i - grid.lo];
            const double rt = sys.residual(trial, Rt, Jel, false);
            if (std::isfinite(rt) && rt <= (1.0 - 1e-4 * alpha) * rn) {
                u = trial;
                R = Rt;
                rn = rt;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (accepted) {
            sys.residual(u, R, Jel, true);  // refresh warm starts at the iterate
            continue;
        }

        // Picard fallback: relaxed mass-preconditioned descent, guaranteed to
        // contract for small enough relaxation by uniform monotonicity.
        double rho = 1.0;
        bool improved = false;
        while (rho >= 0x1.0p-30) {
            for (int i = grid.lo; i <= grid.hi; ++i) {
                const double scale = sys.u_prev ? 1.0 / (grid.M[i] * sys.tau_inv) : grid.h[0];
                trial[i] = u[i] - rho * scale * R[i];
            }
            const double rt = sys.residual(trial, Rt, Jel, false);
            if (std::isfinite(rt) && rt < rn) {
                u = trial;
                R = Rt;
                rn = rt;
                improved = true;
                break;
            }
            rho *= 0.5;
        }
        if (!improved) break;
        sys.residual(u, R, Jel, true);
    }
    if (rn <= cfg.newton_tol) return u;
    std::ostringstream msg;
    msg << "nonlinear step " << step_index << " failed to converge (residual " << rn << ")";
    throw StepError(msg.str(), step_index, rn);
}

void gate_model(const SolveConfig& cfg) {
    if (!cfg.verify_model_first) return;
    SampleSpec spec;
    spec.count = 120;
    spec.seed = 2024;
    const auto g1 = check_G1(cfg.model, spec);
    const auto g2 = check_G2(cfg.model, spec);
    if (!g1.passed || !g2.passed)
        throw PropertyError("solver: model '" + cfg.model.name +
                            "' fails the (G1)/(G2) audit; pass verify=off to override");
}

Vec nodal_initial(const SolveConfig& cfg) {
    const int nn = cfg.mesh.n_nodes();
    Vec u = Vec::Zero(nn);
    if (cfg.u0)
        for (int i = 0; i < nn; ++i) u[i] = cfg.u0(cfg.mesh.nodes[i]);
    if (cfg.mesh.left_bc == BcType::Dirichlet) u[0] = 0.0;
    if (cfg.mesh.right_bc == BcType::Dirichlet) u[nn - 1] = 0.0;
    return u;
}

Vec lumped_load(const SolveConfig& cfg, const Grid& grid, double t) {
    const int nn = cfg.mesh.n_nodes();
    Vec F = Vec::Zero(nn);
    if (cfg.f)
        for (int i = 0; i < nn; ++i) F[i] = grid.M[i] * cfg.f(t, cfg.mesh.nodes[i]);
    return F;
}

}  // namespace

Vec solve_step(const SolveConfig& cfg, const Vec& u_prev, double t_next,
               const Vec& initial_guess) {
    cfg.validate();
    const Grid grid = make_grid(cfg.mesh, false);
    FluxCache cache;
    cache.model = &cfg.model;
    cache.scheme = cfg.scheme;
    cache.reset(cfg.mesh.n_elements());

    NonlinearSystem sys;
    sys.cfg = &cfg;
    sys.grid = &grid;
    sys.cache = &cache;
    sys.u_prev = &u_prev;
    sys.tau_inv = 1.0 / cfg.tau;
    sys.F = lumped_load(cfg, grid, t_next);
    return newton_solve(sys, initial_guess, 0);
}

Trajectory solve_parabolic(const SolveConfig& cfg) {
    cfg.validate();
    if (!(cfg.T > 0.0)) throw ParameterError("solve_parabolic: needs T > 0");
    gate_model(cfg);

    const Grid grid = make_grid(cfg.mesh, false);
    FluxCache cache;
    cache.model = &cfg.model;
    cache.scheme = cfg.scheme;
    cache.reset(cfg.mesh.n_elements());

    Trajectory traj;
    traj.mass = grid.M;
    traj.element_size = grid.h;

    Vec u = nodal_initial(cfg);
    traj.times.push_back(0.0);
    traj.u_fields.push_back(u);
    {
        Vec J0(cfg.mesh.n_elements());
        for (int e = 0; e < cfg.mesh.n_elements(); ++e) {
            const double D = (u[e + 1] - u[e]) / grid.h[e];
            J0[e] = cache.flux(D, e, true);
        }
        traj.J_fields.push_back(J0);
    }

    const int n_steps = std::max<long long>(1, std::llround(cfg.T / cfg.tau));
    NonlinearSystem sys;
    sys.cfg = &cfg;
    sys.grid = &grid;
    sys.cache = &cache;
    sys.tau_inv = 1.0 / cfg.tau;

    const auto weighted_sq = [&](const Vec& v) {
        double s = 0.0;
        for (int i = 0; i < v.size(); ++i) s += grid.M[i] * v[i] * v[i];
        return s;
    };

    Vec u_prev = u;
    for (int k = 0; k < n_steps; ++k) {
        const double t_next = (k + 1) * cfg.tau;
        sys.u_prev = &u_prev;
        sys.F = lumped_load(cfg, grid, t_next);
        Vec u_next = newton_solve(sys, u_prev, k);

        Vec R;
        std::vector<double> Jel;
        sys.residual(u_next, R, Jel, true);

        EnergyRecord rec;
        rec.time = t_next;
        rec.kinetic = 0.5 * weighted_sq(u_next);
        rec.increment = 0.5 * weighted_sq(Vec(u_next - u_prev));
        rec.dissipation = 0.0;
        for (std::size_t e = 0; e < Jel.size(); ++e)
            rec.dissipation += grid.h[e] * Jel[e] * (u_next[e + 1] - u_next[e]) / grid.h[e];
        rec.dissipation *= cfg.tau;
        rec.work = cfg.tau * sys.F.dot(u_next);
        const double prev_kin = 0.5 * weighted_sq(u_prev);
        rec.residual = std::abs(rec.kinetic - prev_kin + rec.increment + rec.dissipation -
                                rec.work) /
                       std::max(1.0, rec.kinetic);
        traj.energy_ledger.push_back(rec);

        traj.times.push_back(t_next);
        traj.u_fields.push_back(u_next);
        Vec Jv(static_cast<int>(Jel.size()));
        for (std::size_t e = 0; e < Jel.size(); ++e) Jv[e] = Jel[e];
        traj.J_fields.push_back(Jv);
        u_prev = u_next;
    }
    return traj;
}

EllipticSolution solve_elliptic(const SolveConfig& cfg) {
    cfg.validate();
    gate_model(cfg);
    const bool pure_neumann = cfg.mesh.pure_neumann();
    const Grid grid = make_grid(cfg.mesh, pure_neumann);

    const Vec F = lumped_load(cfg, grid, 0.0);
    if (pure_neumann) {
        double total = 0.0, norm = 0.0;
        for (int i = 0; i < F.size(); ++i) {
            total += F[i];
            norm += std::abs(F[i]);
        }
        if (std::abs(total) > 1e-10 * std::max(1.0, norm))
            throw CompatibilityError(
                "elliptic: pure-Neumann data must have a zero-mean source");
    }

    FluxCache cache;
    cache.model = &cfg.model;
    cache.scheme = cfg.scheme;
    cache.reset(cfg.mesh.n_elements());

    NonlinearSystem sys;
    sys.cfg = &cfg;
    sys.grid = &grid;
    sys.cache = &cache;
    sys.u_prev = nullptr;
    sys.F = F;

    // Epsilon continuation from 0.5 down to the target.
    const int steps = 8;
    const double target = cfg.scheme.epsilon;
    const double ratio = std::pow(target / 0.5, 1.0 / (steps - 1));
    Vec u = Vec::Zero(cfg.mesh.n_nodes());
    SolveConfig stage = cfg;
    for (int k = 0; k < steps; ++k) {
        stage.scheme.epsilon = (k == steps - 1) ? target : 0.5 * std::pow(ratio, k);
        if (stage.scheme.epsilon <= target) stage.scheme.epsilon = target;
        cache.scheme = stage.scheme;
        sys.cfg = &stage;
        u = newton_solve(sys, u, k);
        if (stage.scheme.epsilon == target) break;
    }

    EllipticSolution sol;
    sol.u = u;
    Vec R;
    std::vector<double> Jel;
    sys.residual(u, R, Jel, true);
    sol.J.resize(static_cast<int>(Jel.size()));
    for (std::size_t e = 0; e < Jel.size(); ++e) sol.J[e] = Jel[e];

    if (pure_neumann) {
        // Normalize to the zero-mean representative.
        double mean = 0.0, mass = 0.0;
        for (int i = 0; i < sol.u.size(); ++i) {
            mean += grid.M[i] * sol.u[i];
            mass += grid.M[i];
        }
        sol.u.array() -= mean / mass;
    }
    return sol;
}

double energy_report(const Trajectory& trajectory) {
    double worst = 0.0;
    for (const auto& rec : trajectory.energy_ledger) worst = std::max(worst, rec.residual);
    return worst;
}

double trajectory_distance(const Trajectory& a, const Trajectory& b) {
    if (a.times.size() != b.times.size() || a.u_fields.empty())
        throw ParameterError("trajectory_distance: incompatible trajectories");
    double acc = 0.0;
    for (std::size_t k = 1; k < a.times.size(); ++k) {
        const double tau = a.times[k] - a.times[k - 1];
        double step = 0.0;
        for (int i = 0; i < a.u_fields[k].size(); ++i) {
            const double diff = a.u_fields[k][i] - b.u_fields[k][i];
            step += a.mass[i] * diff * diff;
        }
        acc += tau * step;
    }
    return std::sqrt(acc);
}

EpsSweep sweep_eps(const SolveConfig& cfg, const std::vector<double>& eps_list) {
    if (eps_list.empty()) throw ParameterError("sweep_eps: empty epsilon list");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]))
            throw ParameterError("sweep_eps: epsilon list must decrease strictly");

    EpsSweep sweep;
    sweep.eps_ref = eps_list.back() / 10.0;
    SolveConfig ref_cfg = cfg;
    ref_cfg.scheme.epsilon = sweep.eps_ref;
    const Trajectory ref = solve_parabolic(ref_cfg);

    double last_ok = std::numeric_limits<double>::infinity();
    for (const double eps : eps_list) {
        EpsSweepRow row;
        row.eps = eps;
        try {
            SolveConfig run_cfg = cfg;
            run_cfg.scheme.epsilon = eps;
            const Trajectory traj = solve_parabolic(run_cfg);
            row.distance = trajectory_distance(traj, ref);
            if (row.distance > 1.1 * last_ok) sweep.monotone_ok = false;
            last_ok = row.distance;
        } catch (const Error& e) {
            row.ok = false;
            row.error = e.what();
        }
        sweep.rows.push_back(std::move(row));
    }
    return sweep;
}

MeshSweep sweep_mesh(const SolveConfig& cfg, const std::vector<int>& n_list,
                     const std::string& tau_rule) {
    if (!cfg.oracle)
        throw ConfigError("sweep_mesh: an analytic oracle must be attached to the config");
    if (n_list.empty()) throw ParameterError("sweep_mesh: empty mesh list");
    if (tau_rule != "h2" && tau_rule != "fixed")
        throw ConfigError("sweep_mesh: tau rule must be h2 or fixed");

    MeshSweep sweep;
    for (const int n : n_list) {
        SolveConfig run_cfg = cfg;
        run_cfg.mesh = build_mesh(n, cfg.mesh.length(), cfg.mesh.left_bc, cfg.mesh.right_bc);
        MeshSweepRow row;
        row.n = n;
        row.h = run_cfg.mesh.length() / n;
        Vec u;
        double t_final = 0.0;
        if (cfg.T > 0.0) {
            row.tau = (tau_rule == "h2") ? row.h * row.h : cfg.tau;
            run_cfg.tau = row.tau;
            const Trajectory traj = solve_parabolic(run_cfg);
            u = traj.u_fields.back();
            t_final = traj.times.back();
        } else {
            row.tau = 0.0;
            u = solve_elliptic(run_cfg).u;
        }
        double err = 0.0;
        for (int i = 0; i < u.size(); ++i)
            err = std::max(err, std::abs(u[i] - cfg.oracle(t_final, run_cfg.mesh.nodes[i])));
        row.error = err;
        sweep.rows.push_back(row);
    }
    if (sweep.rows.size() < 2) {
        sweep.fitted_order = kQNaN;
        return sweep;
    }
    // Least-squares slope of log(error) against log(h).
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(sweep.rows.size());
    for (const auto& row : sweep.rows) {
        const double x = std::log(row.h);
        const double y = std::log(std::max(row.error, 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    sweep.fitted_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return sweep;
}

}  // namespace fluxgraph
