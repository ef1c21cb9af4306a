#ifndef FLUXGRAPH_VERIFIER_HPP
#define FLUXGRAPH_VERIFIER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fluxgraph/csv.hpp"
#include "fluxgraph/models.hpp"
#include "fluxgraph/types.hpp"

namespace fluxgraph {

// Sampling strategy shared by the condition checks: log-spaced shells cover
// near-origin and far-field behavior, rays probe the coercive limits.
struct SampleSpec {
    int count = 400;
    double radius_min = 1e-2;
    double radius_max = 1e2;
    int shells = 4;
    int ray_count = 8;
    std::vector<double> ray_radii = {1e0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
    std::uint64_t seed = 1234;

    void validate() const;
};

struct ConditionEntry {
    std::string condition;
    bool passed = false;
    double worst_margin = 0.0;
    bool has_witness = false;
    TensorPair witness;
    std::string note;
};

struct ConditionReport {
    std::string model;
    std::string orientation = "+G";
    double empirical_c1 = 0.0;
    double empirical_c2 = 0.0;
    double lipschitz_bound = 0.0;
    std::vector<ConditionEntry> entries;

    const ConditionEntry* find(const std::string& condition) const;
    // G1-G4 plus the pairwise monotonicity; the range-restricted coercivity
    // column is informational.
    bool all_required_passed() const;
};

// Individual audits.  Failure is a report outcome, never an exception.
ConditionEntry check_G1(const ConstitutiveModel& model, const SampleSpec& spec,
                        double* lipschitz_bound = nullptr);
ConditionEntry check_G2(const ConstitutiveModel& model, const SampleSpec& spec);
ConditionEntry check_G3(const ConstitutiveModel& model, const SampleSpec& spec);

struct CoercivityCheck {
    ConditionEntry plain;        // J:D >= c1(|J|^p' + |D|^p) - c2
    ConditionEntry range;        // J:D >= c |D|^2
    double empirical_c1 = 0.0;   // fitted with c2 = 1 (or the attached constants)
    double empirical_c2 = 0.0;
};

CoercivityCheck check_G4(const ConstitutiveModel& model, const SampleSpec& spec);
ConditionEntry check_pairwise(const ConstitutiveModel& model, const SampleSpec& spec);

// Runs every audit under the detected orientation (+G or -G, whichever makes
// the first inequality of (G2) hold); deterministic for a fixed seed.
ConditionReport verify_model(const ConstitutiveModel& model, const SampleSpec& spec);

csv::Table report_to_csv(const ConditionReport& report);

}  // namespace fluxgraph

#endif
