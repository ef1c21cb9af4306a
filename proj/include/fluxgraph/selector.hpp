#ifndef FLUXGRAPH_SELECTOR_HPP
#define FLUXGRAPH_SELECTOR_HPP

#include <string>
#include <vector>

#include "fluxgraph/models.hpp"
#include "fluxgraph/types.hpp"

namespace fluxgraph {

// The three single-valued regularizations of a multivalued graph.
//  - StretchGraph: two-stage shear, D = Dbar + eps*Jbar then J = Jbar + eps*D.
//  - ShearCompose: composed substitution, solve G(J - eps*D, D - eps*J) = 0.
//  - LinearShift:  additive penalty, solve G(J, D) + sign*eps*(J - D) = 0.
enum class Scheme { StretchGraph, ShearCompose, LinearShift };

const char* scheme_name(Scheme s);
Scheme parse_scheme(const std::string& s);  // accepts a|b|c and long names

struct SchemeConfig {
    Scheme scheme = Scheme::StretchGraph;
    double epsilon = 0.1;
    int shift_sign = +1;  // LinearShift orientation; exposed, never guessed
    double newton_tol = 1e-11;
    int newton_max = 100;

    void validate() const;
};

struct SelectorResult {
    Mat J;
    int iterations = 0;
    double residual_norm = 0.0;
    TensorPair back_point;  // recovered null point of G (StretchGraph/ShearCompose)
};

// Computes J = J*_eps(D) by damped Newton with an epsilon-continuation
// fallback.  Throws SelectionError when even the fallback fails.
SelectorResult select(const ConstitutiveModel& model, const SchemeConfig& cfg, const Mat& D,
                      const Mat* guess = nullptr);

struct CurveRow {
    double d = 0.0;
    double J = 0.0;
    int iterations = 0;
    double residual = 0.0;
    bool ok = true;
    std::string error;
};

// Scalar selection sweep with warm starts; failures annotate rows.
std::vector<CurveRow> selection_curve(const ConstitutiveModel& model, const SchemeConfig& cfg,
                                      double d_min, double d_max, int count);

struct ConstantsEstimate {
    double mono_lower = 0.0;  // min (J1-J2):(D1-D2)/|D1-D2|^2
    double lip_upper = 0.0;   // max |J1-J2|/|D1-D2|
    int failures = 0;         // selection failures excluded from the sample
};

// Theoretical uniform-monotonicity lower bound for the scheme.
double mono_bound(Scheme scheme, double epsilon);

// Samples random pairs and asserts mono_lower >= (1-1e-6)*mono_bound.
// Throws PropertyError (with a witness pair) on violation.
ConstantsEstimate estimate_constants(const ConstitutiveModel& model, const SchemeConfig& cfg,
                                     int sample_count, std::uint64_t seed);

struct CoercivityFit {
    double C1 = 0.0;
    double C2 = 0.0;
    double worst_margin = 0.0;
    std::vector<double> eps;         // epsilons probed
    std::vector<double> per_eps_c1;  // per-epsilon fits backing the joint C1
};

// Fits epsilon-independent constants for J:D >= C1(|J|^min(p',2) +
// |D|^min(p,2)) - C2 on StretchGraph selections across the given epsilons.
CoercivityFit coercivity_eps(const ConstitutiveModel& model, int sample_count,
                             const std::vector<double>& eps_list = {0.3, 0.1, 0.03, 0.01},
                             std::uint64_t seed = 42);

// Dense (d, j) polyline of the exact scalar graph, bisection-built.
std::vector<std::pair<double, double>> reference_polyline(const ConstitutiveModel& model,
                                                          double d_lo, double d_hi, int segments);

// One-sided Hausdorff distance from the sampled selection curve to the
// reference graph polyline.
double graph_distance(const ConstitutiveModel& model, const SchemeConfig& cfg, double d_lo,
                      double d_hi, int count);

}  // namespace fluxgraph

#endif
