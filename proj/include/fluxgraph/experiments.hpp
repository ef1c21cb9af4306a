#ifndef FLUXGRAPH_EXPERIMENTS_HPP
#define FLUXGRAPH_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "fluxgraph/config.hpp"
#include "fluxgraph/csv.hpp"
#include "fluxgraph/fem.hpp"
#include "fluxgraph/selector.hpp"
#include "fluxgraph/verifier.hpp"

namespace fluxgraph {

extern const char* kToolVersion;

// Reproducibility record written next to every CSV batch.  Metadata lives in
// comment lines, resolved configuration in plain key = value lines, so the
// manifest itself parses as a config file and replays the run.
struct Manifest {
    std::string subcommand;
    Config config;
    std::vector<std::string> outputs;
    std::vector<std::pair<std::string, std::string>> extras;  // informational
    double duration_seconds = 0.0;

    std::string serialize() const;
    std::string write(const std::string& out_dir) const;
};

std::string join_path(const std::string& dir, const std::string& name);
void ensure_dir(const std::string& dir);

// Selection-curve data for the staircase graph: one CSV per (scheme, eps)
// over d in [-3, 3] with `samples` rows, plus the exact null curve.
std::vector<std::string> run_figure2(const std::vector<double>& eps_list,
                                     const std::vector<Scheme>& schemes,
                                     const std::string& out_dir, int samples = 601);

// Structural-condition summary over the catalogue plus negative controls.
csv::Table verify_suite_table(const SampleSpec& spec, int threads = 1);

// Solver output serialization.
csv::Table u_field_table(const Mesh1D& mesh, const Vec& u);
csv::Table flux_table(const Mesh1D& mesh, const Vec& J);
csv::Table ledger_table(const Trajectory& trajectory);

}  // namespace fluxgraph

#endif
