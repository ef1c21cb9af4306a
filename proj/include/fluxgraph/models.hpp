#ifndef FLUXGRAPH_MODELS_HPP
#define FLUXGRAPH_MODELS_HPP

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fluxgraph/types.hpp"

namespace fluxgraph {

// Built-in constitutive relations G(J, D) = 0.  Power-law kinds carry the
// growth exponent p; activated kinds carry their threshold; Maxwell-Stefan
// carries the coefficient matrix and the (frozen) mole fractions.
enum class ModelKind {
    Linear,
    PowerLawExplicit,           // J = |D|^{p-2} D
    PowerLawInverse,            // D = |J|^{p'-2} J
    RegularizedPowerAdd,        // J = (1+|D|)^{p-2} D
    RegularizedPowerSq,         // J = (1+|D|^2)^{(p-2)/2} D
    RegularizedPowerSqInverse,  // D = (1+|J|^2)^{(p'-2)/2} J
    ActivatedGradient,          // J = (|D|-delta)^+ D/|D|
    ActivatedFlux,              // D = (|J|-sigma)^+ J/|J|
    StepRiser,                  // single step followed by J = D
    ZigZag,                     // periodic staircase
    MaxwellStefan,              // D = B(u) J
    Antimonotone,               // G = J + D   (negative control)
    QuadraticFlux,              // G = J.^2 - D (negative control)
};

struct ModelParams {
    ModelKind kind = ModelKind::Linear;
    double p = 2.0;
    double sigma = 1.0;
    double delta = 1.0;
    Mat ms_A;  // Maxwell-Stefan only
    Vec ms_u;  // Maxwell-Stefan only
    int d = 1;  // spatial directions (columns of J and D)
};

using EvalFn = std::function<void(const Mat& J, const Mat& D, Mat& out)>;
using JacFn = std::function<void(const Mat& J, const Mat& D, Mat& out)>;  // out is Nd x Nd
using KinkFn = std::function<double(const Mat& J, const Mat& D)>;

struct ConstitutiveModel {
    std::string name;
    int N = 1;
    int d = 1;
    double p = 2.0;
    EvalFn evaluate;
    JacFn jacobian_J;  // empty when no analytic form is attached
    JacFn jacobian_D;
    KinkFn kink_distance;  // distance to the nearest non-smooth set; +inf when C^1
    double coercivity_c1 = -1.0;  // attached (G4) constants, < 0 when absent
    double coercivity_c2 = -1.0;
    bool negative_control = false;

    bool has_analytic_jacobians() const { return bool(jacobian_J) && bool(jacobian_D); }
    bool shape_ok(const Mat& m) const { return m.rows() == N && m.cols() == d; }

    Mat eval(const Mat& J, const Mat& D) const {
        Mat out(N, d);
        evaluate(J, D, out);
        return out;
    }
    double kink_dist(const Mat& J, const Mat& D) const {
        return kink_distance ? kink_distance(J, D) : std::numeric_limits<double>::infinity();
    }
};

ConstitutiveModel make_builtin(const ModelParams& params);

// Catalogue grammar: kind, colon, comma-separated key=value pairs, e.g.
// "linear", "powerlaw:p=3", "activated-flux:sigma=1",
// "maxwell-stefan:n=3,a=1".  Throws ParameterError on bad input.
ConstitutiveModel parse_model_id(const std::string& id);

// G -> -G with Jacobians flipped accordingly (null set unchanged).
ConstitutiveModel negate(const ConstitutiveModel& model);

// Canonical catalogue instances; negative controls are listed separately and
// excluded from graph-wide property sweeps.
std::vector<std::string> builtin_ids();
std::vector<std::string> negative_control_ids();

Mat eval_residual(const ConstitutiveModel& model, const TensorPair& pair);

// (G_J, G_D) as Nd x Nd matrices, flattened row-major over (component,
// direction).  Analytic maps when attached, otherwise central differences
// with step h = 1e-6 * (1 + |entry|).
std::pair<Mat, Mat> jacobians(const ConstitutiveModel& model, const TensorPair& pair);
Mat fd_jacobian_J(const ConstitutiveModel& model, const Mat& J, const Mat& D);
Mat fd_jacobian_D(const ConstitutiveModel& model, const Mat& J, const Mat& D);

// Brute-force graph oracle for scalar models: for each sampled d, bisect
// j |-> g(j, d) over [j_lo, j_hi] down to |g| <= 1e-12 (256 iterations max).
std::vector<std::pair<double, double>> null_curve_scalar(const ConstitutiveModel& model,
                                                         const std::vector<double>& d_samples,
                                                         double j_lo, double j_hi);

struct MaxwellStefanResult {
    Mat B;
    Vec eigenvalues;  // spectrum of B, ascending (computed on the sqrt(u)-symmetrized form)
};

MaxwellStefanResult maxwell_stefan_B(const Mat& A, const Vec& u);

}  // namespace fluxgraph

#endif
