#include "fluxgraph/experiments.hpp"

#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

namespace fluxgraph {

const char* kToolVersion = "0.1.0";

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty()) return name;
    return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
    if (!dir.empty()) std::filesystem::create_directories(dir);
}

std::string Manifest::serialize() const {
    std::ostringstream out;
    out << "# fluxgraph manifest\n";
    out << "# version = " << kToolVersion << "\n";
    out << "# subcommand = " << subcommand << "\n";
    out << "# duration_seconds = " << csv::format_double(duration_seconds) << "\n";
    for (const auto& o : outputs) out << "# output = " << o << "\n";
    for (const auto& [k, v] : extras) out << "# " << k << " = " << v << "\n";
    for (const auto& [k, v] : config.values)
        if (!v.empty()) out << k << " = " << v << "\n";  // empty = defaulted-off key
    return out.str();
}

std::string Manifest::write(const std::string& out_dir) const {
    ensure_dir(out_dir);
    const std::string path = join_path(out_dir, "manifest.txt");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("manifest: cannot open for writing: " + path);
    const std::string bytes = serialize();
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    return path;
}

namespace {

std::string eps_tag(double eps) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", eps);
    std::string s = buf;
    for (auto& c : s)
        if (c == '.') c = 'p';
    return s;
}

}  // namespace

std::vector<std::string> run_figure2(const std::vector<double>& eps_list,
                                     const std::vector<Scheme>& schemes,
                                     const std::string& out_dir, int samples) {
    ensure_dir(out_dir);
    const auto model = parse_model_id("zigzag");
    std::vector<std::string> written;

    for (const Scheme scheme : schemes) {
        for (const double eps : eps_list) {
            SchemeConfig cfg;
            cfg.scheme = scheme;
            cfg.epsilon = eps;
            const auto rows = selection_curve(model, cfg, -3.0, 3.0, samples);
            csv::Table t;
            t.header = {"d", "J", "iterations", "residual", "ok"};
            for (const auto& r : rows)
                t.add_row({csv::format_double(r.d), csv::format_double(r.J),
                           std::to_string(r.iterations), csv::format_double(r.residual),
                           r.ok ? "1" : "0"});
            std::ostringstream name;
            name << "figure2_" << scheme_name(scheme) << "_eps" << eps_tag(eps) << ".csv";
            const std::string path = join_path(out_dir, name.str());
            csv::write_file(path, t);
            written.push_back(name.str());
        }
    }

    std::vector<double> ds(samples);
    for (int i = 0; i < samples; ++i)
        ds[i] = (samples == 1) ? -3.0 : -3.0 + 6.0 * i / (samples - 1);
    const auto exact = null_curve_scalar(model, ds, -64.0, 64.0);
    csv::Table t;
    t.header = {"d", "j"};
    for (const auto& [j, d] : exact)
        t.add_row({csv::format_double(d), csv::format_double(j)});
    const std::string path = join_path(out_dir, "figure2_exact.csv");
    csv::write_file(path, t);
    written.push_back("figure2_exact.csv");
    return written;
}

csv::Table verify_suite_table(const SampleSpec& spec, int threads) {
    std::vector<std::string> ids = builtin_ids();
    for (const auto& id : negative_control_ids()) ids.push_back(id);

    std::vector<ConditionReport> reports(ids.size());
    const auto job = [&](std::size_t i) { reports[i] = verify_model(parse_model_id(ids[i]), spec); };
    if (threads > 1) {
        std::vector<std::future<void>> futures;
        futures.reserve(ids.size());
        for (std::size_t i = 0; i < ids.size(); ++i)
            futures.push_back(std::async(std::launch::async, job, i));
        for (auto& f : futures) f.get();
    } else {
        for (std::size_t i = 0; i < ids.size(); ++i) job(i);
    }

    csv::Table t;
    t.header = {"model", "orientation", "G1", "G2", "G3", "G4", "G4r", "G2*",
                "empirical_c1", "empirical_c2", "lipschitz"};
    for (const auto& report : reports) {
        const auto flag = [&](const char* c) {
            const auto* e = report.find(c);
            return std::string(e && e->passed ? "1" : "0");
        };
        t.add_row({report.model, report.orientation, flag("G1"), flag("G2"), flag("G3"),
                   flag("G4"), flag("G4r"), flag("G2*"), csv::format_double(report.empirical_c1),
                   csv::format_double(report.empirical_c2),
                   csv::format_double(report.lipschitz_bound)});
    }
    return t;
}

csv::Table u_field_table(const Mesh1D& mesh, const Vec& u) {
    csv::Table t;
    t.header = {"x", "u"};
    for (int i = 0; i < u.size(); ++i)
        t.add_row({csv::format_double(mesh.nodes[i]), csv::format_double(u[i])});
    return t;
}

csv::Table flux_table(const Mesh1D& mesh, const Vec& J) {
    csv::Table t;
    t.header = {"x_mid", "J"};
    for (int e = 0; e < J.size(); ++e)
        t.add_row({csv::format_double(0.5 * (mesh.nodes[e] + mesh.nodes[e + 1])),
                   csv::format_double(J[e])});
    return t;
}

csv::Table ledger_table(const Trajectory& trajectory) {
    csv::Table t;
    t.header = {"step", "time", "kinetic", "increment", "dissipation", "work", "residual"};
    for (std::size_t k = 0; k < trajectory.energy_ledger.size(); ++k) {
        const auto& rec = trajectory.energy_ledger[k];
        t.add_row({std::to_string(k + 1), csv::format_double(rec.time),
                   csv::format_double(rec.kinetic), csv::format_double(rec.increment),
                   csv::format_double(rec.dissipation), csv::format_double(rec.work),
                   csv::format_double(rec.residual)});
    }
    return t;
}

}  // namespace fluxgraph
