#include "fluxgraph/selector.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "fluxgraph/rng.hpp"

namespace fluxgraph {

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::StretchGraph: return "stretch";
        case Scheme::ShearCompose: return "shear";
        case Scheme::LinearShift: return "linear-shift";
    }
    return "?";
}

Scheme parse_scheme(const std::string& s) {
    if (s == "a" || s == "stretch") return Scheme::StretchGraph;
    if (s == "b" || s == "shear") return Scheme::ShearCompose;
    if (s == "c" || s == "linear-shift") return Scheme::LinearShift;
    throw ParameterError("scheme: expected a|b|c or stretch|shear|linear-shift, got '" + s + "'");
}

void SchemeConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ParameterError("scheme: epsilon must lie strictly inside (0,1)");
    if (shift_sign != 1 && shift_sign != -1)
        throw ParameterError("scheme: shift_sign must be +1 or -1");
    if (newton_tol <= 0.0 || newton_max < 1) throw ParameterError("scheme: bad solver controls");
}

namespace {

using ResidualFn = std::function<void(const Vec& x, Vec& out)>;

struct NewtonOutcome {
    Vec x;
    double resnorm = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
};

// Damped Newton with a central finite-difference Jacobian, Armijo
// backtracking on the residual norm and a minimum step of 2^-30.
NewtonOutcome damped_newton(const ResidualFn& fn, Vec x0, double tol, int maxit) {
    NewtonOutcome out;
    const int n = static_cast<int>(x0.size());
    Vec x = std::move(x0);
    Vec r(n), rp(n), rm(n), xt(n);
    fn(x, r);
    double rn = r.norm();
    Mat jac(n, n);
    for (int it = 0; it < maxit; ++it) {
        if (!std::isfinite(rn)) {
            out.resnorm = rn;
            out.x = x;
            out.iterations = it;
            return out;
        }
        if (rn <= tol) {
            out.x = x;
            out.resnorm = rn;
            out.iterations = it;
            out.converged = true;
            return out;
        }
        for (int k = 0; k < n; ++k) {
            const double h = 1e-6 * (1.0 + std::abs(x[k]));
            xt = x;
            xt[k] = x[k] + h;
            fn(xt, rp);
            xt[k] = x[k] - h;
            fn(xt, rm);
            jac.col(k) = (rp - rm) / (2.0 * h);
        }
        Vec step = jac.colPivHouseholderQr().solve(r);
        if (!step.allFinite() || step.norm() == 0.0) step = jac.transpose() * r;
        double alpha = 1.0;
        bool accepted = false;
        while (alpha >= 0x1.0p-30) {
            xt = x - alpha * step;
            fn(xt, rp);
            const double rt = rp.norm();
            if (std::isfinite(rt) && rt <= (1.0 - 1e-4 * alpha) * rn) {
                x = xt;
                r = rp;
                rn = rt;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            out.x = x;
            out.resnorm = rn;
            out.iterations = it + 1;
            return out;
        }
    }
    out.x = x;
    out.resnorm = rn;
    out.iterations = maxit;
    out.converged = rn <= tol;
    return out;
}

// Residual of the scheme equation in the scheme's unknown: Jbar for
// StretchGraph, J itself for ShearCompose and LinearShift.
ResidualFn scheme_residual(const ConstitutiveModel& model, Scheme scheme, double eps, int sign,
                           const Mat& D) {
    const int N = model.N, d = model.d;
    switch (scheme) {
        case Scheme::StretchGraph:
            return [&model, eps, D, N, d](const Vec& x, Vec& out) {
                const Mat Jbar = unflatten(x, N, d);
                Mat g(N, d);
                model.evaluate(Jbar, D - eps * Jbar, g);
                out = flatten(g);
            };
        case Scheme::ShearCompose:
            return [&model, eps, D, N, d](const Vec& x, Vec& out) {
                const Mat J = unflatten(x, N, d);
                Mat g(N, d);
                model.evaluate(J - eps * D, D - eps * J, g);
                out = flatten(g);
            };
        case Scheme::LinearShift:
            return [&model, eps, sign, D, N, d](const Vec& x, Vec& out) {
                const Mat J = unflatten(x, N, d);
                Mat g(N, d);
                model.evaluate(J, D, g);
                out = flatten(g + sign * eps * (J - D));
            };
    }
    throw ParameterError("scheme: invalid scheme");
}

SelectorResult pack_result(const ConstitutiveModel& model, Scheme scheme, double eps,
                           const Mat& D, const NewtonOutcome& nt, int total_iterations) {
    const int N = model.N, d = model.d;
    SelectorResult res;
    res.iterations = total_iterations;
    res.residual_norm = nt.resnorm;
    switch (scheme) {
        case Scheme::StretchGraph: {
            const Mat Jbar = unflatten(nt.x, N, d);
            res.J = Jbar + eps * D;
            res.back_point = TensorPair(Jbar, D - eps * Jbar);
            break;
        }
        case Scheme::ShearCompose: {
            const Mat J = unflatten(nt.x, N, d);
            res.J = J;
            res.back_point = TensorPair(J - eps * D, D - eps * J);
            break;
        }
        case Scheme::LinearShift: {
            const Mat J = unflatten(nt.x, N, d);
            res.J = J;
            // No null point of G is recovered by this scheme; the pair below
            // solves the shifted equation only.
            res.back_point = TensorPair(J, D);
            break;
        }
    }
    return res;
}

}  // namespace

SelectorResult select(const ConstitutiveModel& model, const SchemeConfig& cfg, const Mat& D,
                      const Mat* guess) {
    cfg.validate();
    if (!model.shape_ok(D)) throw DimensionError("select: D shape does not match model " + model.name);
    if (guess && !model.shape_ok(*guess))
        throw DimensionError("select: guess shape does not match model " + model.name);

    const auto unknown_from_J = [&](const Mat& J) {
        if (cfg.scheme == Scheme::StretchGraph) return flatten(Mat(J - cfg.epsilon * D));
        return flatten(J);
    };
    const Vec x0 = unknown_from_J(guess ? *guess : D);

    ResidualFn fn = scheme_residual(model, cfg.scheme, cfg.epsilon, cfg.shift_sign, D);
    NewtonOutcome nt = damped_newton(fn, x0, cfg.newton_tol, cfg.newton_max);
    int total_iterations = nt.iterations;
    if (nt.converged) return pack_result(model, cfg.scheme, cfg.epsilon, D, nt, total_iterations);

    // Continuation fallback: re-solve along an epsilon path from 0.5 down to
    // the target in 8 geometric steps, warm-starting each solve.
    const int steps = 8;
    Vec x = flatten(D);
    if (cfg.scheme == Scheme::StretchGraph) x = flatten(Mat(D - 0.5 * D));  // Jbar ~ (1-eps)*D
    const double ratio = std::pow(cfg.epsilon / 0.5, 1.0 / (steps - 1));
    for (int k = 0; k < steps; ++k) {
        const double eps_k = (k == steps - 1) ? cfg.epsilon : 0.5 * std::pow(ratio, k);
        ResidualFn fk = scheme_residual(model, cfg.scheme, eps_k, cfg.shift_sign, D);
        nt = damped_newton(fk, x, cfg.newton_tol, cfg.newton_max);
        total_iterations += nt.iterations;
        if (!nt.converged) break;
        // Re-express the unknown for the next epsilon: J is the common quantity.
        if (cfg.scheme == Scheme::StretchGraph) {
            const double eps_next =
                (k + 1 >= steps - 1) ? cfg.epsilon : 0.5 * std::pow(ratio, k + 1);
            const Mat J = unflatten(nt.x, model.N, model.d) + eps_k * D;
            x = flatten(Mat(J - eps_next * D));
        } else {
            x = nt.x;
        }
    }
    if (!nt.converged) {
        std::ostringstream msg;
        msg << "select: Newton failed for model " << model.name << ", scheme "
            << scheme_name(cfg.scheme) << ", eps " << cfg.epsilon << " (residual " << nt.resnorm
            << ")";
        throw SelectionError(msg.str(), nt.resnorm);
    }
    return pack_result(model, cfg.scheme, cfg.epsilon, D, nt, total_iterations);
}

std::vector<CurveRow> selection_curve(const ConstitutiveModel& model, const SchemeConfig& cfg,
                                      double d_min, double d_max, int count) {
    cfg.validate();
    if (model.N != 1 || model.d != 1)
        throw DimensionError("selection_curve: model must be scalar (N = d = 1)");
    if (count < 1) throw ParameterError("selection_curve: count must be >= 1");
    std::vector<CurveRow> rows;
    rows.reserve(count);
    Mat D(1, 1), warm(1, 1);
    bool have_warm = false;
    for (int i = 0; i < count; ++i) {
        const double d = (count == 1) ? d_min : d_min + (d_max - d_min) * i / (count - 1);
        D(0, 0) = d;
        CurveRow row;
        row.d = d;
        try {
            const SelectorResult res = select(model, cfg, D, have_warm ? &warm : nullptr);
            row.J = res.J(0, 0);
            row.iterations = res.iterations;
            row.residual = res.residual_norm;
            warm = res.J;
            have_warm = true;
        } catch (const SelectionError& e) {
            row.ok = false;
            row.error = e.what();
            row.residual = e.last_residual;
            have_warm = false;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

double mono_bound(Scheme scheme, double epsilon) {
    switch (scheme) {
        case Scheme::StretchGraph: return epsilon / (1.0 + 2.0 * epsilon * epsilon);
        case Scheme::ShearCompose: return epsilon / (1.0 + epsilon * epsilon);
        case Scheme::LinearShift: break;
    }
    throw ParameterError("mono_bound: no bound is established for this scheme");
}

ConstantsEstimate estimate_constants(const ConstitutiveModel& model, const SchemeConfig& cfg,
                                     int sample_count, std::uint64_t seed) {
    cfg.validate();
    if (cfg.scheme == Scheme::LinearShift)
        throw ParameterError("estimate_constants: supported for stretch and shear schemes only");
    if (sample_count < 1) throw ParameterError("estimate_constants: sample_count must be >= 1");

    Rng rng(seed);
    ConstantsEstimate est;
    est.mono_lower = std::numeric_limits<double>::infinity();
    est.lip_upper = 0.0;
    const double bound = mono_bound(cfg.scheme, cfg.epsilon) * (1.0 - 1e-6);

    for (int k = 0; k < sample_count; ++k) {
        const Mat D1 = rng.log_radius(1e-2, 1e2) * rng.unit_direction(model.N, model.d);
        const Mat D2 = rng.log_radius(1e-2, 1e2) * rng.unit_direction(model.N, model.d);
        const double dd = (D1 - D2).norm();
        if (dd < 1e-9) continue;
        Mat J1, J2;
        try {
            J1 = select(model, cfg, D1).J;
            J2 = select(model, cfg, D2, &J1).J;
        } catch (const SelectionError&) {
            ++est.failures;
            continue;
        }
        const double mono = ddot(J1 - J2, D1 - D2) / (dd * dd);
        const double lip = (J1 - J2).norm() / dd;
        est.mono_lower = std::min(est.mono_lower, mono);
        est.lip_upper = std::max(est.lip_upper, lip);
        if (mono < bound) {
            std::ostringstream msg;
            msg << "estimate_constants: monotonicity bound violated for " << model.name
                << " (scheme " << scheme_name(cfg.scheme) << ", eps " << cfg.epsilon
                << "): ratio " << mono << " < " << bound << "; witness D1 = [" << D1
                << "], D2 = [" << D2 << "]";
            throw PropertyError(msg.str());
        }
    }
    return est;
}

CoercivityFit coercivity_eps(const ConstitutiveModel& model, int sample_count,
                             const std::vector<double>& eps_list, std::uint64_t seed) {
    if (eps_list.empty()) throw ParameterError("coercivity_eps: empty epsilon list");
    CoercivityFit fit;
    fit.eps = eps_list;
    fit.C2 = 1.0;
    const double ep_j = std::min(model.p / (model.p - 1.0), 2.0);
    const double ep_d = std::min(model.p, 2.0);

    std::vector<std::vector<std::pair<double, double>>> samples;  // (J:D, denom) per eps
    for (const double eps : eps_list) {
        SchemeConfig cfg;
        cfg.scheme = Scheme::StretchGraph;
        cfg.epsilon = eps;
        Rng rng(seed);
        std::vector<std::pair<double, double>> pts;
        double c1 = std::numeric_limits<double>::infinity();
        for (int k = 0; k < sample_count; ++k) {
            const Mat D = rng.log_radius(1e-3, 1e2) * rng.unit_direction(model.N, model.d);
            Mat J;
            try {
                J = select(model, cfg, D).J;
            } catch (const SelectionError&) {
                continue;
            }
            const double jd = ddot(J, D);
            const double denom = std::pow(J.norm(), ep_j) + std::pow(D.norm(), ep_d);
            if (denom > 1e-14) c1 = std::min(c1, (jd + fit.C2) / denom);
            pts.emplace_back(jd, denom);
        }
        fit.per_eps_c1.push_back(c1);
        samples.push_back(std::move(pts));
    }
    fit.C1 = *std::min_element(fit.per_eps_c1.begin(), fit.per_eps_c1.end());
    fit.worst_margin = std::numeric_limits<double>::infinity();
    for (const auto& pts : samples)
        for (const auto& [jd, denom] : pts)
            fit.worst_margin = std::min(fit.worst_margin, jd - fit.C1 * denom + fit.C2);
    return fit;
}

std::vector<std::pair<double, double>> reference_polyline(const ConstitutiveModel& model,
                                                          double d_lo, double d_hi, int segments) {
    if (model.N != 1 || model.d != 1)
        throw DimensionError("reference_polyline: model must be scalar");
    // Expand a symmetric bracket until the extreme d values change sign; by
    // monotonicity of the graph this bracket then covers every interior root.
    Mat J(1, 1), D(1, 1), g(1, 1);
    const auto res = [&](double j, double d) {
        J(0, 0) = j;
        D(0, 0) = d;
        model.evaluate(J, D, g);
        return g(0, 0);
    };
    double b = 1.0;
    while (b < 1e9) {
        const bool lo_ok = res(-b, d_lo) * res(b, d_lo) <= 0.0;
        const bool hi_ok = res(-b, d_hi) * res(b, d_hi) <= 0.0;
        if (lo_ok && hi_ok) break;
        b *= 2.0;
    }
    b *= 2.0;
    std::vector<double> ds(segments + 1);
    for (int i = 0; i <= segments; ++i) ds[i] = d_lo + (d_hi - d_lo) * i / segments;
    const auto curve = null_curve_scalar(model, ds, -b, b);
    std::vector<std::pair<double, double>> poly;
    poly.reserve(curve.size());
    for (const auto& [j, d] : curve) poly.emplace_back(d, j);
    return poly;
}

namespace {

double point_segment_distance(double px, double py, double ax, double ay, double bx, double by) {
    const double vx = bx - ax, vy = by - ay;
    const double len2 = vx * vx + vy * vy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((px - ax) * vx + (py - ay) * vy) / len2, 0.0, 1.0);
    const double dx = px - (ax + t * vx), dy = py - (ay + t * vy);
    return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

double graph_distance(const ConstitutiveModel& model, const SchemeConfig& cfg, double d_lo,
                      double d_hi, int count) {
    const auto rows = selection_curve(model, cfg, d_lo, d_hi, count);
    const double pad = 1.0 + 0.1 * std::abs(d_hi - d_lo);
    const auto poly = reference_polyline(model, d_lo - pad, d_hi + pad, 10000);
    double hausdorff = 0.0;
    for (const auto& row : rows) {
        if (!row.ok) continue;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s + 1 < poly.size(); ++s) {
            best = std::min(best, point_segment_distance(row.d, row.J, poly[s].first,
                                                         poly[s].second, poly[s + 1].first,
                                                         poly[s + 1].second));
            if (best == 0.0) break;
        }
        hausdorff = std::max(hausdorff, best);
    }
    return hausdorff;
}

}  // namespace fluxgraph
