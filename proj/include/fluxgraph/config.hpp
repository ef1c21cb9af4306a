#ifndef FLUXGRAPH_CONFIG_HPP
#define FLUXGRAPH_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

#include "fluxgraph/fem.hpp"
#include "fluxgraph/types.hpp"

namespace fluxgraph {

// Flat `key = value` configuration.  '#' starts a comment, unknown keys are
// rejected with their line number, defaults are materialized so a written
// manifest reproduces the run.
struct Config {
    std::map<std::string, std::string> values;
    std::map<std::string, int> lines;  // provenance for error messages

    bool has(const std::string& key) const { return values.count(key) != 0; }
    const std::string& get(const std::string& key) const;
    double get_double(const std::string& key) const;
    int get_int(const std::string& key) const;
    bool get_flag(const std::string& key) const;  // on/off
    std::vector<double> get_double_list(const std::string& key) const;
    std::vector<int> get_int_list(const std::string& key) const;

    void set(const std::string& key, const std::string& value, int line = 0);
};

// All recognized keys with their defaults.
const std::map<std::string, std::string>& config_defaults();

Config default_config();
Config parse_config_text(const std::string& text);
Config parse_config_file(const std::string& path);

// Named built-in expressions for sources, initial data and oracles.
SpaceTimeFn make_source(const std::string& name);
SpaceFn make_initial(const std::string& name);
SpaceTimeFn make_oracle(const std::string& name);  // empty for "none"

// Resolves the model/scheme/mesh/data keys into a solver configuration.
SolveConfig build_solve_config(const Config& config);

// Model id with the standalone `p` key merged in when the id itself does not
// carry parameters.
std::string resolved_model_id(const Config& config);

}  // namespace fluxgraph

#endif
