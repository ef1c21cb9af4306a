#include "fluxgraph/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fluxgraph/rng.hpp"
#include "fluxgraph/selector.hpp"

namespace fluxgraph {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

double sym_min_eig(const Mat& M) {
    const Mat S = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(S, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
}

double norm_scale(const Mat& M) { return std::max(1.0, M.norm()); }

// Joint (J, D) sample of prescribed combined Frobenius radius.
TensorPair joint_sample(Rng& rng, int N, int d, double radius) {
    Mat J = rng.gaussian_matrix(N, d);
    Mat D = rng.gaussian_matrix(N, d);
    const double n = std::sqrt(J.squaredNorm() + D.squaredNorm());
    if (n < 1e-300) return joint_sample(rng, N, d, radius);
    return TensorPair(radius / n * J, radius / n * D);
}

std::string serialize(const Mat& m) {
    std::ostringstream os;
    const Vec f = flatten(m);
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        if (i) os << ';';
        os << csv::format_double(f[i]);
    }
    return os.str();
}

// Null-set sampler backing (G4) and (g2)*.  Scalar models go through the
// bisection oracle; systems go through the selection map at eps = 1e-4.
std::vector<TensorPair> sample_null_points(const ConstitutiveModel& model, int count,
                                           double radius_max, std::uint64_t seed,
                                           int* skipped = nullptr) {
    std::vector<TensorPair> pts;
    pts.reserve(count);
    Rng rng(seed);
    if (model.N == 1 && model.d == 1) {
        std::vector<double> ds(count);
        double dmax = 0.0;
        for (int i = 0; i < count; ++i) {
            const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
            ds[i] = sign * rng.log_radius(1e-3, radius_max);
            dmax = std::max(dmax, std::abs(ds[i]));
        }
        Mat J(1, 1), D(1, 1), g(1, 1);
        const auto res = [&](double j, double d) {
            J(0, 0) = j;
            D(0, 0) = d;
            model.evaluate(J, D, g);
            return g(0, 0);
        };
        double b = 1.0;
        while (b < 1e12 && (res(-b, dmax) * res(b, dmax) > 0.0 ||
                            res(-b, -dmax) * res(b, -dmax) > 0.0))
            b *= 2.0;
        int skip = 0;
        for (const double d : ds) {
            try {
                const auto root = null_curve_scalar(model, {d}, -2.0 * b, 2.0 * b);
                Mat mj(1, 1), md(1, 1);
                mj(0, 0) = root[0].first;
                md(0, 0) = root[0].second;
                pts.emplace_back(mj, md);
            } catch (const BracketError&) {
                ++skip;
            }
        }
        if (skipped) *skipped = skip;
        return pts;
    }
    SchemeConfig cfg;
    cfg.scheme = Scheme::StretchGraph;
    cfg.epsilon = 1e-4;
    int skip = 0;
    for (int i = 0; i < count; ++i) {
        const Mat D = rng.log_radius(1e-2, radius_max) * rng.unit_direction(model.N, model.d);
        try {
            const auto sel = select(model, cfg, D);
            pts.push_back(sel.back_point);
        } catch (const SelectionError&) {
            ++skip;
        }
    }
    if (skipped) *skipped = skip;
    return pts;
}

}  // namespace

void SampleSpec::validate() const {
    if (count < 1 || shells < 2 || ray_count < 1)
        throw ParameterError("sample spec: counts must be positive (shells >= 2)");
    if (!(radius_min > 0.0 && radius_min < radius_max))
        throw ParameterError("sample spec: need 0 < radius_min < radius_max");
    for (std::size_t i = 1; i < ray_radii.size(); ++i)
        if (!(ray_radii[i] > ray_radii[i - 1]))
            throw ParameterError("sample spec: ray radii must increase strictly");
}

const ConditionEntry* ConditionReport::find(const std::string& condition) const {
    for (const auto& e : entries)
        if (e.condition == condition) return &e;
    return nullptr;
}

bool ConditionReport::all_required_passed() const {
    for (const char* c : {"G1", "G2", "G3", "G4", "G2*"}) {
        const auto* e = find(c);
        if (!e || !e->passed) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// (G1): Lipschitz continuity and G(0,0) = 0
// ---------------------------------------------------------------------------

ConditionEntry check_G1(const ConstitutiveModel& model, const SampleSpec& spec,
                        double* lipschitz_bound) {
    spec.validate();
    ConditionEntry entry;
    entry.condition = "G1";

    const Mat zero = Mat::Zero(model.N, model.d);
    const double origin = model.eval(zero, zero).norm();

    Rng rng(spec.seed);
    const int per_shell = std::max(8, spec.count / spec.shells);
    std::vector<double> shell_bound(spec.shells, 0.0);
    double lip = 0.0;
    bool finite = true;
    for (int s = 0; s < spec.shells; ++s) {
        const double t = (spec.shells == 1) ? 0.0 : double(s) / (spec.shells - 1);
        const double r =
            std::exp(std::log(spec.radius_min) + t * std::log(spec.radius_max / spec.radius_min));
        for (int k = 0; k < per_shell; ++k) {
            const TensorPair x = joint_sample(rng, model.N, model.d, r);
            const TensorPair h = joint_sample(rng, model.N, model.d, 0.05 * r);
            const Mat gx = model.eval(x.J, x.D);
            const Mat gy = model.eval(x.J + h.J, x.D + h.D);
            const double dist = std::sqrt(h.J.squaredNorm() + h.D.squaredNorm());
            if (dist < 1e-300) continue;
            const double q = (gx - gy).norm() / dist;
            if (!std::isfinite(q)) finite = false;
            shell_bound[s] = std::max(shell_bound[s], q);
            if (q > lip) {
                lip = q;
                entry.witness = x;
                entry.has_witness = true;
            }
        }
    }
    double growth = 0.0;
    for (int s = 1; s < spec.shells; ++s)
        growth = std::max(growth, shell_bound[s] / std::max(shell_bound[s - 1], 1e-12));

    const bool origin_ok = origin <= 1e-14;
    entry.passed = origin_ok && finite && growth < 10.0;
    entry.worst_margin = std::min(1e-14 - origin, 10.0 - growth);
    std::ostringstream note;
    note << "lipschitz=" << lip << " shell_growth=" << growth << " |G(0;0)|=" << origin;
    entry.note = note.str();
    if (lipschitz_bound) *lipschitz_bound = lip;
    return entry;
}

// ---------------------------------------------------------------------------
// (G2): sign conditions on the Jacobians
// ---------------------------------------------------------------------------

ConditionEntry check_G2(const ConstitutiveModel& model, const SampleSpec& spec) {
    spec.validate();
    ConditionEntry entry;
    entry.condition = "G2";

    Rng rng(spec.seed + 1);
    // Margins are raw minimum eigenvalues of the symmetric parts; pass
    // thresholds scale with the matrix norm (PSD floor -1e-8, strict
    // definiteness floor +1e-10).
    double m_gj = kInf, m_gd = kInf, m_diff = kInf, m_prod = kInf;
    double worst_slack = kInf;
    bool ok = true;
    int used = 0, guard = 0;
    while (used < spec.count && guard < 20 * spec.count) {
        ++guard;
        const double r = rng.log_radius(spec.radius_min, spec.radius_max);
        const TensorPair x = joint_sample(rng, model.N, model.d, r);
        if (model.kink_dist(x.J, x.D) < 1e-3) continue;  // measure-zero kink band
        ++used;
        const auto [gj, gd] = jacobians(model, x);
        const double e1 = sym_min_eig(gj);
        const double e2 = sym_min_eig(-gd);
        const Mat diff = gj - gd;
        const double e3 = sym_min_eig(diff);
        const Mat prod = -gd * gj.transpose();
        const double e4 = sym_min_eig(prod);
        const double slack = std::min(std::min(e1 + 1e-8 * norm_scale(gj),
                                               e2 + 1e-8 * norm_scale(gd)),
                                      std::min(e3 - 1e-10 * norm_scale(diff),
                                               e4 + 1e-8 * norm_scale(prod)));
        if (slack < worst_slack) {
            worst_slack = slack;
            entry.witness = x;
            entry.has_witness = true;
        }
        ok = ok && slack >= 0.0;
        m_gj = std::min(m_gj, e1);
        m_gd = std::min(m_gd, e2);
        m_diff = std::min(m_diff, e3);
        m_prod = std::min(m_prod, e4);
    }
    entry.passed = ok;
    entry.worst_margin = std::min(std::min(m_gj, m_gd), std::min(m_diff, m_prod));
    std::ostringstream note;
    note << "min_eig[G_J]=" << m_gj << " min_eig[-G_D]=" << m_gd << " min_eig[G_J-G_D]=" << m_diff
         << " min_eig[-G_D*G_J^T]=" << m_prod << " samples=" << used;
    entry.note = note.str();
    return entry;
}

// ---------------------------------------------------------------------------
// (G3): coercive limit probes along rays
// ---------------------------------------------------------------------------

ConditionEntry check_G3(const ConstitutiveModel& model, const SampleSpec& spec) {
    spec.validate();
    ConditionEntry entry;
    entry.condition = "G3";

    const std::size_t top = spec.ray_radii.size() >= 2 ? spec.ray_radii.size() - 2 : 0;

    Rng rng_a(spec.seed + 2);
    double margin1 = kInf;  // liminf G(J,D):J > 0 as |J| -> inf
    for (int q = 0; q < spec.ray_count; ++q) {
        const Mat D = rng_a.log_radius(0.5, 5.0) * rng_a.unit_direction(model.N, model.d);
        const Mat U = rng_a.unit_direction(model.N, model.d);
        for (std::size_t k = top; k < spec.ray_radii.size(); ++k) {
            const Mat J = spec.ray_radii[k] * U;
            margin1 = std::min(margin1, ddot(model.eval(J, D), J));
        }
    }

    Rng rng_b(spec.seed + 3);
    double margin2 = kInf;  // limsup G(J,D):D < 0 as |D| -> inf
    for (int q = 0; q < spec.ray_count; ++q) {
        const Mat J = rng_b.log_radius(0.5, 5.0) * rng_b.unit_direction(model.N, model.d);
        const Mat U = rng_b.unit_direction(model.N, model.d);
        for (std::size_t k = top; k < spec.ray_radii.size(); ++k) {
            const Mat D = spec.ray_radii[k] * U;
            margin2 = std::min(margin2, -ddot(model.eval(J, D), D));
        }
    }

    const bool first = margin1 > 0.0;
    const bool second = margin2 > 0.0;
    entry.passed = first || second;
    entry.worst_margin = std::max(margin1, margin2);
    entry.note = first && second ? "alternative=both"
                 : first         ? "alternative=first"
                 : second        ? "alternative=second"
                                 : "alternative=none";
    return entry;
}

// ---------------------------------------------------------------------------
// (G4): p-coercivity on the null set, plain and range-restricted
// ---------------------------------------------------------------------------

CoercivityCheck check_G4(const ConstitutiveModel& model, const SampleSpec& spec) {
    spec.validate();
    CoercivityCheck out;
    out.plain.condition = "G4";
    out.range.condition = "G4r";

    const int count = std::max(spec.count, 1000);
    int skipped = 0;
    const auto pts = sample_null_points(model, count, spec.radius_max, spec.seed + 4, &skipped);
    const double pp = model.p / (model.p - 1.0);

    const bool attached = model.coercivity_c1 >= 0.0 && model.coercivity_c2 >= 0.0;
    double fitted_c1 = kInf;
    double attached_margin = kInf;
    double c_range = kInf;
    for (const auto& pt : pts) {
        const double jd = ddot(pt.J, pt.D);
        const double denom = std::pow(pt.J.norm(), pp) + std::pow(pt.D.norm(), model.p);
        if (denom > 1e-12) {
            const double c1 = (jd + 1.0) / denom;
            if (c1 < fitted_c1) {
                fitted_c1 = c1;
                out.plain.witness = pt;
                out.plain.has_witness = true;
            }
        }
        if (attached) {
            const double margin =
                (jd - model.coercivity_c1 * denom + model.coercivity_c2) / std::max(1.0, jd);
            attached_margin = std::min(attached_margin, margin);
        }
        // Range-restricted fit: only gradients commensurate with the flux are
        // informative (kernel-degenerate samples have D ~ 0 and satisfy the
        // inequality trivially).
        if (pt.D.norm() >= 1e-3 * (1.0 + pt.J.norm())) {
            const double c = jd / pt.D.squaredNorm();
            if (c < c_range) {
                c_range = c;
                out.range.witness = pt;
                out.range.has_witness = true;
            }
        }
    }

    std::ostringstream note;
    if (pts.size() < static_cast<std::size_t>(count) / 2) {
        // The null set could not be sampled reliably; the condition cannot be
        // attested.
        out.plain.passed = false;
        out.plain.worst_margin = 0.0;
        out.range.passed = false;
        out.range.worst_margin = 0.0;
        std::ostringstream fail;
        fail << "null sampling failed (" << pts.size() << "/" << count << " points, skipped "
             << skipped << ")";
        out.plain.note = fail.str();
        out.range.note = fail.str();
        return out;
    }
    if (attached) {
        out.plain.passed = attached_margin >= -1e-9;
        out.plain.worst_margin = attached_margin;
        out.empirical_c1 = model.coercivity_c1;
        out.empirical_c2 = model.coercivity_c2;
        note << "attached c1=" << model.coercivity_c1 << " c2=" << model.coercivity_c2;
    } else {
        // With c2 = 1 the largest admissible c1 is the sample minimum; the
        // floor separates genuine coercivity from kernel-direction decay.
        out.plain.passed = fitted_c1 >= 1e-3;
        out.plain.worst_margin = fitted_c1;
        out.empirical_c1 = fitted_c1;
        out.empirical_c2 = 1.0;
        note << "fitted c1=" << fitted_c1 << " with c2=1";
    }
    note << " null_samples=" << pts.size() << " skipped=" << skipped;
    out.plain.note = note.str();

    out.range.passed = c_range >= 1e-3;
    out.range.worst_margin = c_range;
    std::ostringstream rnote;
    rnote << "fitted c=" << c_range << " in J:D >= c|D|^2";
    out.range.note = rnote.str();
    return out;
}

// ---------------------------------------------------------------------------
// (g2)*: pairwise monotonicity of sampled null points
// ---------------------------------------------------------------------------

ConditionEntry check_pairwise(const ConstitutiveModel& model, const SampleSpec& spec) {
    spec.validate();
    ConditionEntry entry;
    entry.condition = "G2*";

    const int count = std::min(spec.count, 250);
    int skipped = 0;
    const auto pts = sample_null_points(model, count, spec.radius_max, spec.seed + 5, &skipped);
    if (pts.size() < static_cast<std::size_t>(count) / 2) {
        entry.passed = false;
        entry.worst_margin = 0.0;
        std::ostringstream note;
        note << "null sampling failed (" << pts.size() << "/" << count << " points, skipped "
             << skipped << ")";
        entry.note = note.str();
        return entry;
    }
    // Margin relative to the pair scale, so solver round-off on large-flux
    // samples cannot masquerade as a monotonicity violation.
    double worst = kInf;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t k = i + 1; k < pts.size(); ++k) {
            const Mat dj = pts[i].J - pts[k].J;
            const Mat dd = pts[i].D - pts[k].D;
            const double m = ddot(dj, dd) / std::max(1.0, dj.squaredNorm() + dd.squaredNorm());
            if (m < worst) {
                worst = m;
                entry.witness = pts[i];
                entry.has_witness = true;
                std::ostringstream note;
                note << "second point J=[" << serialize(pts[k].J) << "] D=[" << serialize(pts[k].D)
                     << "]";
                entry.note = note.str();
            }
        }
    }
    if (pts.size() < 2) worst = 0.0;
    entry.passed = worst >= -1e-10;
    entry.worst_margin = worst;
    return entry;
}

// ---------------------------------------------------------------------------
// Full report
// ---------------------------------------------------------------------------

namespace {

// Orientation under which the first inequality of (G2) is the healthier one.
bool prefers_negation(const ConstitutiveModel& model, const SampleSpec& spec) {
    Rng rng(spec.seed + 6);
    double plus = kInf, minus = kInf;
    for (int k = 0; k < 32; ++k) {
        const double r = rng.log_radius(spec.radius_min, spec.radius_max);
        const TensorPair x = joint_sample(rng, model.N, model.d, r);
        if (model.kink_dist(x.J, x.D) < 1e-3) continue;
        const auto [gj, gd] = jacobians(model, x);
        (void)gd;
        plus = std::min(plus, sym_min_eig(gj) / norm_scale(gj));
        minus = std::min(minus, sym_min_eig(-gj) / norm_scale(gj));
    }
    return minus > plus + 1e-12;
}

}  // namespace

ConditionReport verify_model(const ConstitutiveModel& model, const SampleSpec& spec) {
    spec.validate();
    ConditionReport report;
    report.model = model.name;

    ConstitutiveModel oriented = model;
    if (prefers_negation(model, spec)) {
        report.orientation = "-G";
        oriented = negate(model);
    }

    report.entries.push_back(check_G1(oriented, spec, &report.lipschitz_bound));
    report.entries.push_back(check_G2(oriented, spec));
    report.entries.push_back(check_G3(oriented, spec));
    auto g4 = check_G4(oriented, spec);
    report.empirical_c1 = g4.empirical_c1;
    report.empirical_c2 = g4.empirical_c2;
    report.entries.push_back(std::move(g4.plain));
    report.entries.push_back(std::move(g4.range));
    report.entries.push_back(check_pairwise(oriented, spec));
    return report;
}

csv::Table report_to_csv(const ConditionReport& report) {
    csv::Table t;
    t.header = {"model", "orientation", "condition", "passed", "margin", "witness_J", "witness_D",
                "note"};
    for (const auto& e : report.entries) {
        t.add_row({report.model, report.orientation, e.condition, e.passed ? "1" : "0",
                   csv::format_double(e.worst_margin),
                   e.has_witness ? serialize(e.witness.J) : "",
                   e.has_witness ? serialize(e.witness.D) : "", e.note});
    }
    return t;
}

}  // namespace fluxgraph
