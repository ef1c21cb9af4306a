#ifndef FLUXGRAPH_FEM_HPP
#define FLUXGRAPH_FEM_HPP

#include <functional>
#include <string>
#include <vector>

#include "fluxgraph/models.hpp"
#include "fluxgraph/selector.hpp"
#include "fluxgraph/types.hpp"

namespace fluxgraph {

enum class BcType { Dirichlet, Neumann };

BcType parse_bc(const std::string& s);

struct Mesh1D {
    std::vector<double> nodes;  // strictly increasing on [0, L]
    BcType left_bc = BcType::Dirichlet;
    BcType right_bc = BcType::Dirichlet;

    int n_nodes() const { return static_cast<int>(nodes.size()); }
    int n_elements() const { return n_nodes() - 1; }
    double length() const { return nodes.back() - nodes.front(); }
    bool pure_neumann() const {
        return left_bc == BcType::Neumann && right_bc == BcType::Neumann;
    }
    void validate() const;
};

// Uniform mesh with n_elements + 1 nodes on [0, L].
Mesh1D build_mesh(int n_elements, double L, BcType left, BcType right);

using SpaceTimeFn = std::function<double(double t, double x)>;
using SpaceFn = std::function<double(double x)>;

struct SolveConfig {
    Mesh1D mesh;
    ConstitutiveModel model;  // scalar, N = d = 1
    SchemeConfig scheme;
    double T = 1.0;    // final time; T = 0 selects the steady problem in sweeps
    double tau = 1e-2;
    SpaceTimeFn f;     // source term (t, x); defaults to zero
    SpaceFn u0;        // initial datum; defaults to zero
    double newton_tol = 1e-10;
    int newton_max = 50;
    bool verify_model_first = true;  // (G1)-(G2) gate; set false to override
    SpaceTimeFn oracle;              // analytic solution for convergence studies

    void validate() const;
};

// Per-step bookkeeping of the backward-Euler energy identity
//   d(kinetic) + increment + dissipation - work = 0,
// where increment = 0.5*||u_new - u_old||^2 is the scheme's numerical
// damping and every term uses the lumped (trapezoidal) nodal inner product.
struct EnergyRecord {
    double time = 0.0;
    double kinetic = 0.0;      // 0.5 ||u_new||^2
    double increment = 0.0;    // 0.5 ||u_new - u_old||^2
    double dissipation = 0.0;  // tau * sum_e h_e J_e D_e
    double work = 0.0;         // tau * (F, u_new)
    double residual = 0.0;     // identity defect, relative
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Vec> u_fields;             // nodal values per stored time
    std::vector<Vec> J_fields;             // element fluxes per stored time
    std::vector<EnergyRecord> energy_ledger;
    std::vector<double> mass;              // lumped nodal weights
    std::vector<double> element_size;
};

Trajectory solve_parabolic(const SolveConfig& cfg);

// One implicit Euler step from u_prev to time t_next, starting the Newton
// iteration at `initial_guess` (exposed so solver uniqueness can be probed).
Vec solve_step(const SolveConfig& cfg, const Vec& u_prev, double t_next,
               const Vec& initial_guess);

struct EllipticSolution {
    Vec u;
    Vec J;  // per element
};

// Steady problem with epsilon continuation from 0.5 down to the target.
EllipticSolution solve_elliptic(const SolveConfig& cfg);

// Max over steps of the relative energy-identity defect.
double energy_report(const Trajectory& trajectory);

struct EpsSweepRow {
    double eps = 0.0;
    double distance = 0.0;
    bool ok = true;
    std::string error;
};

struct EpsSweep {
    std::vector<EpsSweepRow> rows;
    double eps_ref = 0.0;
    bool monotone_ok = true;  // non-increasing within 10% slack
};

// Distances ||u_eps - u_ref||_{L2(Q)} against a reference run at
// min(eps_list)/10; eps_list must decrease.
EpsSweep sweep_eps(const SolveConfig& cfg, const std::vector<double>& eps_list);

struct MeshSweepRow {
    int n = 0;
    double h = 0.0;
    double tau = 0.0;
    double error = 0.0;  // max nodal defect vs oracle at final time
};

struct MeshSweep {
    std::vector<MeshSweepRow> rows;
    double fitted_order = 0.0;  // NaN when fewer than two rows
};

// Convergence study against cfg.oracle; tau_rule is "h2" (tau = h^2) or
// "fixed".  T = 0 runs the steady solver instead of time stepping.
MeshSweep sweep_mesh(const SolveConfig& cfg, const std::vector<int>& n_list,
                     const std::string& tau_rule);

// Discrete L2(Q) distance of two trajectories on the same mesh and grid.
double trajectory_distance(const Trajectory& a, const Trajectory& b);

}  // namespace fluxgraph

#endif
