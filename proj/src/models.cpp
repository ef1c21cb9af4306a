#include "fluxgraph/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace fluxgraph {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887242097;

Mat identity_nd(int nd) { return Mat::Identity(nd, nd); }

// Outer product of the flattened operands, Nd x Nd.
Mat outer(const Mat& a, const Mat& b) {
    const Vec fa = flatten(a);
    const Vec fb = flatten(b);
    return fa * fb.transpose();
}

// Step profile of the single-step graph: 1 on [0, sqrt2/2], decays as
// (sqrt2 - x)/x on (sqrt2/2, sqrt2), 0 beyond.
double step_profile(double x) {
    if (x <= kSqrt2 / 2.0) return 1.0;
    if (x >= kSqrt2) return 0.0;
    return (kSqrt2 - x) / x;
}

double step_profile_deriv(double x) {
    if (x > kSqrt2 / 2.0 && x < kSqrt2) return -kSqrt2 / (x * x);
    return 0.0;
}

// Periodic triangle wave underlying the staircase graph: period sqrt2,
// amplitude sqrt2/2, b(x) = x * step_profile(x) on [0, sqrt2].
double triangle_wave(double x) {
    double xm = std::fmod(x, kSqrt2);
    if (xm < 0.0) xm += kSqrt2;
    return (xm <= kSqrt2 / 2.0) ? xm : kSqrt2 - xm;
}

double staircase_profile(double x) {  // \tilde a(x) = b(x)/x, 0 at x = 0
    if (x <= 0.0) return 0.0;
    return triangle_wave(x) / x;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ParameterError(msg);
}

Mat maxwell_stefan_matrix(const Mat& A, const Vec& u) {
    const int n = static_cast<int>(u.size());
    Mat B = Mat::Zero(n, n);
    for (int nu = 0; nu < n; ++nu) {
        double diag = 0.0;
        for (int mu = 0; mu < n; ++mu) {
            if (mu == nu) continue;
            diag += A(nu, mu) * u[mu];
            B(nu, mu) = -A(nu, mu) * u[nu];
        }
        B(nu, nu) = diag;
    }
    return B;
}

void validate_maxwell_stefan(const Mat& A, const Vec& u) {
    const int n = static_cast<int>(u.size());
    require(n >= 2, "maxwell-stefan: needs at least two species");
    require(A.rows() == n && A.cols() == n, "maxwell-stefan: A must be NxN matching u");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            require(A(i, j) > 0.0, "maxwell-stefan: off-diagonal A entries must be positive");
            require(std::abs(A(i, j) - A(j, i)) <= 1e-12 * (1.0 + std::abs(A(i, j))),
                    "maxwell-stefan: A must be symmetric");
        }
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        require(u[i] > 0.0 && u[i] < 1.0, "maxwell-stefan: weights must lie in (0,1)");
        sum += u[i];
    }
    require(std::abs(sum - 1.0) <= 1e-12, "maxwell-stefan: weights must sum to 1");
}

}  // namespace

ConstitutiveModel make_builtin(const ModelParams& params) {
    require(params.d >= 1, "model: d must be >= 1");
    ConstitutiveModel m;
    m.N = 1;
    m.d = params.d;
    m.p = params.p;
    const int d = params.d;

    switch (params.kind) {
        case ModelKind::Linear: {
            m.name = "linear";
            m.evaluate = [](const Mat& J, const Mat& D, Mat& out) { out = J - D; };
            m.jacobian_J = [d](const Mat&, const Mat&, Mat& out) { out = identity_nd(d); };
            m.jacobian_D = [d](const Mat&, const Mat&, Mat& out) { out = -identity_nd(d); };
            m.p = 2.0;
            m.coercivity_c1 = 0.5;
            m.coercivity_c2 = 0.0;
            break;
        }
        case ModelKind::PowerLawExplicit: {
            require(params.p > 1.0, "powerlaw: p must lie in (1, inf)");
            const double p = params.p;
            m.name = "powerlaw";
            m.evaluate = [p](const Mat& J, const Mat& D, Mat& out) {
                const double nd = D.norm();
                out = (nd == 0.0) ? Mat(J) : Mat(J - std::pow(nd, p - 2.0) * D);
            };
            m.jacobian_J = [d](const Mat&, const Mat&, Mat& out) { out = identity_nd(d); };
            m.jacobian_D = [p, d](const Mat&, const Mat& D, Mat& out) {
                const double nd = D.norm();
                if (nd == 0.0) {
                    out = Mat::Zero(d, d);
                    return;
                }
                out = -(std::pow(nd, p - 2.0) * identity_nd(d) +
                        (p - 2.0) * std::pow(nd, p - 4.0) * outer(D, D));
            };
            if (p != 2.0)
                m.kink_distance = [](const Mat&, const Mat& D) { return D.norm(); };
            m.coercivity_c1 = 0.5;
            m.coercivity_c2 = 0.0;
            break;
        }
        case ModelKind::PowerLawInverse: {
            require(params.p > 1.0, "powerlaw-inv: p must lie in (1, inf)");
            const double q = params.p / (params.p - 1.0);  // p'
            m.name = "powerlaw-inv";
            m.evaluate = [q](const Mat& J, const Mat& D, Mat& out) {
                const double nj = J.norm();
                out = (nj == 0.0) ? Mat(-D) : Mat(std::pow(nj, q - 2.0) * J - D);
            };
            m.jacobian_J = [q, d](const Mat& J, const Mat&, Mat& out) {
                const double nj = J.norm();
                if (nj == 0.0) {
                    out = Mat::Zero(d, d);
                    return;
                }
                out = std::pow(nj, q - 2.0) * identity_nd(d) +
                      (q - 2.0) * std::pow(nj, q - 4.0) * outer(J, J);
            };
            m.jacobian_D = [d](const Mat&, const Mat&, Mat& out) { out = -identity_nd(d); };
            if (q != 2.0)
                m.kink_distance = [](const Mat& J, const Mat&) { return J.norm(); };
            m.coercivity_c1 = 0.5;
            m.coercivity_c2 = 0.0;
            break;
        }
        case ModelKind::RegularizedPowerAdd: {
            require(params.p > 1.0, "regpow-add: p must lie in (1, inf)");
            const double p = params.p;
            m.name = "regpow-add";
            m.evaluate = [p](const Mat& J, const Mat& D, Mat& out) {
                out = J - std::pow(1.0 + D.norm(), p - 2.0) * D;
            };
            m.jacobian_J = [d](const Mat&, const Mat&, Mat& out) { out = identity_nd(d); };
            m.jacobian_D = [p, d](const Mat&, const Mat& D, Mat& out) {
                const double nd = D.norm();
                out = -std::pow(1.0 + nd, p - 2.0) * identity_nd(d);
                if (nd > 0.0) out -= (p - 2.0) * std::pow(1.0 + nd, p - 3.0) / nd * outer(D, D);
            };
            if (p != 2.0)
                m.kink_distance = [](const Mat&, const Mat& D) { return D.norm(); };
            break;
        }
        case ModelKind::RegularizedPowerSq: {
            require(params.p > 1.0, "regpow-sq: p must lie in (1, inf)");
            const double p = params.p;
            m.name = "regpow-sq";
            m.evaluate = [p](const Mat& J, const Mat& D, Mat& out) {
                out = J - std::pow(1.0 + D.squaredNorm(), (p - 2.0) / 2.0) * D;
            };
            m.jacobian_J = [d](const Mat&, const Mat&, Mat& out) { out = identity_nd(d); };
            m.jacobian_D = [p, d](const Mat&, const Mat& D, Mat& out) {
                const double s = 1.0 + D.squaredNorm();
                out = -(std::pow(s, (p - 2.0) / 2.0) * identity_nd(d) +
                        (p - 2.0) * std::pow(s, (p - 4.0) / 2.0) * outer(D, D));
            };
            break;
        }
        case ModelKind::RegularizedPowerSqInverse: {
            require(params.p > 1.0, "regpow-sq-inv: p must lie in (1, inf)");
            const double q = params.p / (params.p - 1.0);  // p'
            m.name = "regpow-sq-inv";
            m.evaluate = [q](const Mat& J, const Mat& D, Mat& out) {
                out = std::pow(1.0 + J.squaredNorm(), (q - 2.0) / 2.0) * J - D;
            };
            m.jacobian_J = [q, d](const Mat& J, const Mat&, Mat& out) {
                const double s = 1.0 + J.squaredNorm();
                out = std::pow(s, (q - 2.0) / 2.0) * identity_nd(d) +
                      (q - 2.0) * std::pow(s, (q - 4.0) / 2.0) * outer(J, J);
            };
            m.jacobian_D = [d](const Mat&, const Mat&, Mat& out) { out = -identity_nd(d); };
            break;
        }
        case ModelKind::ActivatedGradient: {
            require(params.delta > 0.0, "activated-grad: delta must be positive");
            const double delta = params.delta;
            m.name = "activated-grad";
            m.evaluate = [delta](const Mat& J, const Mat& D, Mat& out) {
                const double nd = D.norm();
                out = (nd <= delta) ? Mat(J) : Mat(J - (nd - delta) / nd * D);
            };
            m.jacobian_J = [d](const Mat&, const Mat&, Mat& out) { out = identity_nd(d); };
            m.jacobian_D = [delta, d](const Mat&, const Mat& D, Mat& out) {
                const double nd = D.norm();
                if (nd <= delta) {
                    out = Mat::Zero(d, d);
                    return;
                }
                out = -((nd - delta) / nd * identity_nd(d) + outer(D, D) / (nd * nd) -
                        (nd - delta) * outer(D, D) / (nd * nd * nd));
            };
            m.kink_distance = [delta](const Mat&, const Mat& D) {
                const double nd = D.norm();
                return std::min(nd, std::abs(nd - delta));
            };
            m.p = 2.0;
            m.coercivity_c1 = 0.25;
            m.coercivity_c2 = delta * delta;
            break;
        }
        case ModelKind::ActivatedFlux: {
            require(params.sigma > 0.0, "activated-flux: sigma must be positive");
            const double sigma = params.sigma;
            m.name = "activated-flux";
            m.evaluate = [sigma](const Mat& J, const Mat& D, Mat& out) {
                const double nj = J.norm();
                out = (nj <= sigma) ? Mat(-D) : Mat((nj - sigma) / nj * J - D);
            };
            m.jacobian_J = [sigma, d](const Mat& J, const Mat&, Mat& out) {
                const double nj = J.norm();
                if (nj <= sigma) {
                    out = Mat::Zero(d, d);
                    return;
                }
                out = (nj - sigma) / nj * identity_nd(d) + outer(J, J) / (nj * nj) -
                      (nj - sigma) * outer(J, J) / (nj * nj * nj);
            };
            m.jacobian_D = [d](const Mat&, const Mat&, Mat& out) { out = -identity_nd(d); };
            m.kink_distance = [sigma](const Mat& J, const Mat&) {
                const double nj = J.norm();
                return std::min(nj, std::abs(nj - sigma));
            };
            m.p = 2.0;
            m.coercivity_c1 = 0.25;
            m.coercivity_c2 = sigma * sigma;
            break;
        }
        case ModelKind::StepRiser: {
            m.name = "step-riser";
            m.evaluate = [](const Mat& J, const Mat& D, Mat& out) {
                const Mat S = J + D;
                out = J - D - step_profile(S.norm() / kSqrt2) * S;
            };
            m.jacobian_J = [d](const Mat& J, const Mat& D, Mat& out) {
                const Mat S = J + D;
                const double ns = S.norm();
                const double x = ns / kSqrt2;
                out = (1.0 - step_profile(x)) * identity_nd(d);
                if (ns > 0.0)
                    out -= step_profile_deriv(x) / kSqrt2 / ns * outer(S, S);
            };
            m.jacobian_D = [d](const Mat& J, const Mat& D, Mat& out) {
                const Mat S = J + D;
                const double ns = S.norm();
                const double x = ns / kSqrt2;
                out = -(1.0 + step_profile(x)) * identity_nd(d);
                if (ns > 0.0)
                    out -= step_profile_deriv(x) / kSqrt2 / ns * outer(S, S);
            };
            m.kink_distance = [](const Mat& J, const Mat& D) {
                const double ns = (J + D).norm();
                return std::min(std::abs(ns - 1.0), std::abs(ns - 2.0));
            };
            m.p = 2.0;
            m.coercivity_c1 = 0.5;
            m.coercivity_c2 = 0.5;
            break;
        }
        case ModelKind::ZigZag: {
            m.name = "zigzag";
            m.evaluate = [](const Mat& J, const Mat& D, Mat& out) {
                const Mat S = J + D;
                out = J - D - staircase_profile(S.norm() / kSqrt2) * S;
            };
            // No analytic Jacobian attached; finite differences apply.
            m.kink_distance = [](const Mat& J, const Mat& D) {
                const double ns = (J + D).norm();
                const double nearest = std::max(1.0, std::round(ns));
                return std::abs(ns - nearest);
            };
            m.p = 2.0;
            break;
        }
        case ModelKind::MaxwellStefan: {
            validate_maxwell_stefan(params.ms_A, params.ms_u);
            const Mat B = maxwell_stefan_matrix(params.ms_A, params.ms_u);
            const int n = static_cast<int>(params.ms_u.size());
            m.name = "maxwell-stefan";
            m.N = n;
            m.evaluate = [B](const Mat& J, const Mat& D, Mat& out) { out = B * J - D; };
            m.jacobian_J = [B, n, d](const Mat&, const Mat&, Mat& out) {
                out = Mat::Zero(n * d, n * d);
                for (int nu = 0; nu < n; ++nu)
                    for (int mu = 0; mu < n; ++mu)
                        for (int i = 0; i < d; ++i) out(nu * d + i, mu * d + i) = B(nu, mu);
            };
            m.jacobian_D = [n, d](const Mat&, const Mat&, Mat& out) {
                out = -Mat::Identity(n * d, n * d);
            };
            m.p = 2.0;
            break;
        }
        case ModelKind::Antimonotone: {
            m.name = "antimonotone";
            m.evaluate = [](const Mat& J, const Mat& D, Mat& out) { out = J + D; };
            m.jacobian_J = [d](const Mat&, const Mat&, Mat& out) { out = identity_nd(d); };
            m.jacobian_D = [d](const Mat&, const Mat&, Mat& out) { out = identity_nd(d); };
            m.p = 2.0;
            m.negative_control = true;
            break;
        }
        case ModelKind::QuadraticFlux: {
            m.name = "quadratic-flux";
            m.evaluate = [](const Mat& J, const Mat& D, Mat& out) {
                out = J.array().square().matrix() - D;
            };
            m.jacobian_J = [d](const Mat& J, const Mat&, Mat& out) {
                out = Mat::Zero(d, d);
                const Vec fj = flatten(J);
                for (int k = 0; k < d; ++k) out(k, k) = 2.0 * fj[k];
            };
            m.jacobian_D = [d](const Mat&, const Mat&, Mat& out) { out = -identity_nd(d); };
            m.p = 2.0;
            m.negative_control = true;
            break;
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Catalogue identifiers
// ---------------------------------------------------------------------------

namespace {

std::map<std::string, std::string> parse_kv(const std::string& s) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        require(eq != std::string::npos, "model id: expected key=value, got '" + item + "'");
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return kv;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        require(pos == v.size(), "model id: malformed number for '" + key + "'");
        return x;
    } catch (const ParameterError&) {
        throw;
    } catch (...) {
        throw ParameterError("model id: malformed number for '" + key + "'");
    }
}

}  // namespace

ConstitutiveModel parse_model_id(const std::string& id) {
    std::string kind_name = id;
    std::map<std::string, std::string> kv;
    const auto colon = id.find(':');
    if (colon != std::string::npos) {
        kind_name = id.substr(0, colon);
        kv = parse_kv(id.substr(colon + 1));
    }

    static const std::map<std::string, ModelKind> kinds = {
        {"linear", ModelKind::Linear},
        {"powerlaw", ModelKind::PowerLawExplicit},
        {"powerlaw-inv", ModelKind::PowerLawInverse},
        {"regpow-add", ModelKind::RegularizedPowerAdd},
        {"regpow-sq", ModelKind::RegularizedPowerSq},
        {"regpow-sq-inv", ModelKind::RegularizedPowerSqInverse},
        {"activated-grad", ModelKind::ActivatedGradient},
        {"activated-flux", ModelKind::ActivatedFlux},
        {"step-riser", ModelKind::StepRiser},
        {"zigzag", ModelKind::ZigZag},
        {"maxwell-stefan", ModelKind::MaxwellStefan},
        {"antimonotone", ModelKind::Antimonotone},
        {"quadratic-flux", ModelKind::QuadraticFlux},
    };
    const auto it = kinds.find(kind_name);
    require(it != kinds.end(), "model id: unknown kind '" + kind_name + "'");

    ModelParams params;
    params.kind = it->second;
    int ms_n = 2;
    double ms_a = 1.0;
    std::map<int, double> ms_u_given;
    for (const auto& [key, value] : kv) {
        if (key == "p") {
            params.p = to_double(key, value);
        } else if (key == "sigma") {
            params.sigma = to_double(key, value);
        } else if (key == "delta") {
            params.delta = to_double(key, value);
        } else if (key == "d") {
            params.d = static_cast<int>(to_double(key, value));
        } else if (key == "n") {
            ms_n = static_cast<int>(to_double(key, value));
        } else if (key == "a") {
            ms_a = to_double(key, value);
        } else if (key.size() > 1 && key[0] == 'u') {
            int idx = 0;
            try {
                idx = std::stoi(key.substr(1));
            } catch (...) {
                throw ParameterError("model id: unknown key '" + key + "'");
            }
            ms_u_given[idx] = to_double(key, value);
        } else {
            throw ParameterError("model id: unknown key '" + key + "'");
        }
    }
    if (params.kind == ModelKind::MaxwellStefan) {
        require(ms_n >= 2, "maxwell-stefan: n must be >= 2");
        params.ms_A = Mat::Constant(ms_n, ms_n, ms_a);
        params.ms_u = Vec::Constant(ms_n, 1.0 / ms_n);
        for (const auto& [idx, val] : ms_u_given) {
            require(idx >= 1 && idx <= ms_n, "maxwell-stefan: weight index out of range");
            params.ms_u[idx - 1] = val;
        }
    }
    ConstitutiveModel model = make_builtin(params);
    model.name = id;
    return model;
}

ConstitutiveModel negate(const ConstitutiveModel& model) {
    ConstitutiveModel out = model;
    out.name = "neg(" + model.name + ")";
    const EvalFn base = model.evaluate;
    out.evaluate = [base](const Mat& J, const Mat& D, Mat& o) {
        base(J, D, o);
        o = -o;
    };
    if (model.jacobian_J) {
        const JacFn jj = model.jacobian_J;
        out.jacobian_J = [jj](const Mat& J, const Mat& D, Mat& o) {
            jj(J, D, o);
            o = -o;
        };
    }
    if (model.jacobian_D) {
        const JacFn jd = model.jacobian_D;
        out.jacobian_D = [jd](const Mat& J, const Mat& D, Mat& o) {
            jd(J, D, o);
            o = -o;
        };
    }
    return out;
}

std::vector<std::string> builtin_ids() {
    return {
        "linear",
        "powerlaw:p=3",
        "powerlaw-inv:p=1.5",
        "regpow-add:p=3",
        "regpow-sq:p=3",
        "regpow-sq-inv:p=3",
        "activated-grad:delta=1",
        "activated-flux:sigma=1",
        "step-riser",
        "zigzag",
        "maxwell-stefan:n=2,a=1",
    };
}

std::vector<std::string> negative_control_ids() { return {"antimonotone", "quadratic-flux"}; }

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

Mat eval_residual(const ConstitutiveModel& model, const TensorPair& pair) {
    if (!model.shape_ok(pair.J) || !model.shape_ok(pair.D))
        throw DimensionError("eval_residual: pair shape does not match model " + model.name);
    return model.eval(pair.J, pair.D);
}

namespace {

Mat fd_jacobian(const ConstitutiveModel& model, const Mat& J, const Mat& D, bool wrt_J) {
    const int nd = model.N * model.d;
    Mat out(nd, nd);
    Mat Jp = J, Jm = J, Dp = D, Dm = D;
    Mat gp(model.N, model.d), gm(model.N, model.d);
    for (int r = 0; r < model.N; ++r) {
        for (int c = 0; c < model.d; ++c) {
            Mat& target_p = wrt_J ? Jp : Dp;
            Mat& target_m = wrt_J ? Jm : Dm;
            const double base = wrt_J ? J(r, c) : D(r, c);
            const double h = 1e-6 * (1.0 + std::abs(base));
            target_p(r, c) = base + h;
            target_m(r, c) = base - h;
            model.evaluate(Jp, Dp, gp);
            model.evaluate(Jm, Dm, gm);
            const Vec col = flatten((gp - gm) / (2.0 * h));
            out.col(r * model.d + c) = col;
            target_p(r, c) = base;
            target_m(r, c) = base;
        }
    }
    return out;
}

}  // namespace

Mat fd_jacobian_J(const ConstitutiveModel& model, const Mat& J, const Mat& D) {
    return fd_jacobian(model, J, D, true);
}

Mat fd_jacobian_D(const ConstitutiveModel& model, const Mat& J, const Mat& D) {
    return fd_jacobian(model, J, D, false);
}

std::pair<Mat, Mat> jacobians(const ConstitutiveModel& model, const TensorPair& pair) {
    if (!model.shape_ok(pair.J) || !model.shape_ok(pair.D))
        throw DimensionError("jacobians: pair shape does not match model " + model.name);
    Mat gj, gd;
    if (model.jacobian_J) {
        gj.resize(model.N * model.d, model.N * model.d);
        model.jacobian_J(pair.J, pair.D, gj);
    } else {
        gj = fd_jacobian_J(model, pair.J, pair.D);
    }
    if (model.jacobian_D) {
        gd.resize(model.N * model.d, model.N * model.d);
        model.jacobian_D(pair.J, pair.D, gd);
    } else {
        gd = fd_jacobian_D(model, pair.J, pair.D);
    }
    return {gj, gd};
}

std::vector<std::pair<double, double>> null_curve_scalar(const ConstitutiveModel& model,
                                                         const std::vector<double>& d_samples,
                                                         double j_lo, double j_hi) {
    if (model.N != 1 || model.d != 1)
        throw DimensionError("null_curve_scalar: model must be scalar (N = d = 1)");
    std::vector<std::pair<double, double>> curve;
    curve.reserve(d_samples.size());
    Mat J(1, 1), D(1, 1), g(1, 1);
    const auto residual = [&](double j, double d) {
        J(0, 0) = j;
        D(0, 0) = d;
        model.evaluate(J, D, g);
        return g(0, 0);
    };
    for (const double d : d_samples) {
        double lo = j_lo, hi = j_hi;
        double flo = residual(lo, d), fhi = residual(hi, d);
        if (flo == 0.0) {
            curve.emplace_back(lo, d);
            continue;
        }
        if (fhi == 0.0) {
            curve.emplace_back(hi, d);
            continue;
        }
        if (flo * fhi > 0.0) {
            std::ostringstream msg;
            msg << "null_curve_scalar: no sign change over bracket for d = " << d;
            throw BracketError(msg.str());
        }
        double mid = 0.5 * (lo + hi), fmid = 0.0;
        for (int it = 0; it < 256; ++it) {
            mid = 0.5 * (lo + hi);
            fmid = residual(mid, d);
            if (std::abs(fmid) <= 1e-12) break;
            if ((fmid < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fmid;
            } else {
                hi = mid;
            }
        }
        curve.emplace_back(mid, d);
    }
    return curve;
}

MaxwellStefanResult maxwell_stefan_B(const Mat& A, const Vec& u) {
    validate_maxwell_stefan(A, u);
    MaxwellStefanResult res;
    res.B = maxwell_stefan_matrix(A, u);
    const int n = static_cast<int>(u.size());
    // B is similar to a symmetric matrix via diag(sqrt(u)); eigenvalues are
    // computed on that form, which carries the exact spectrum of B.
    Mat S(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) S(i, j) = res.B(i, j) * std::sqrt(u[j] / u[i]);
    S = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(S);
    res.eigenvalues = es.eigenvalues();
    return res;
}

}  // namespace fluxgraph
