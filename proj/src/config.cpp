#include "fluxgraph/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fluxgraph {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

int config_line(const Config& c, const std::string& key) {
    const auto it = c.lines.find(key);
    return it == c.lines.end() ? 0 : it->second;
}

}  // namespace

const std::map<std::string, std::string>& config_defaults() {
    static const std::map<std::string, std::string> defaults = {
        {"model", "linear"},
        {"p", ""},
        {"scheme", "a"},
        {"eps", "0.1"},
        {"shift_sign", "1"},
        {"n_elements", "64"},
        {"L", "1"},
        {"bc_left", "dirichlet"},
        {"bc_right", "dirichlet"},
        {"T", "0.1"},
        {"tau", "0.001"},
        {"f", "zero"},
        {"u0", "zero"},
        {"oracle", "none"},
        {"newton_tol", "1e-10"},
        {"newton_max", "50"},
        {"verify", "on"},
        {"seed", "42"},
        {"eps_list", "0.2,0.1,0.05"},
        {"n_list", "16,32,64"},
        {"tau_rule", "h2"},
        {"range", "-3:3"},
        {"n_samples", "601"},
        {"threads", "1"},
    };
    return defaults;
}

const std::string& Config::get(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end()) throw ConfigError("config: missing key '" + key + "'");
    return it->second;
}

double Config::get_double(const std::string& key) const {
    const std::string& v = get(key);
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw ConfigError("config: key '" + key + "' is not a number: '" + v + "'",
                          config_line(*this, key));
    }
}

int Config::get_int(const std::string& key) const {
    const double x = get_double(key);
    if (x != std::floor(x))
        throw ConfigError("config: key '" + key + "' must be an integer",
                          config_line(*this, key));
    return static_cast<int>(x);
}

bool Config::get_flag(const std::string& key) const {
    const std::string& v = get(key);
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ConfigError("config: key '" + key + "' must be on or off", config_line(*this, key));
}

std::vector<double> Config::get_double_list(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(get(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(trim(item)));
        } catch (...) {
            throw ConfigError("config: key '" + key + "' holds a malformed list",
                              config_line(*this, key));
        }
    }
    if (out.empty())
        throw ConfigError("config: key '" + key + "' holds an empty list",
                          config_line(*this, key));
    return out;
}

std::vector<int> Config::get_int_list(const std::string& key) const {
    std::vector<int> out;
    for (const double v : get_double_list(key)) out.push_back(static_cast<int>(v));
    return out;
}

void Config::set(const std::string& key, const std::string& value, int line) {
    if (config_defaults().count(key) == 0) {
        std::ostringstream msg;
        msg << "config: unknown key '" << key << "'";
        if (line > 0) msg << " at line " << line;
        throw ConfigError(msg.str(), line);
    }
    values[key] = value;
    lines[key] = line;
}

Config default_config() {
    Config c;
    c.values = config_defaults();
    return c;
}

Config parse_config_text(const std::string& text) {
    Config c = default_config();
    std::stringstream ss(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: malformed line (expected key = value) at line " +
                                  std::to_string(line_no),
                              line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config: malformed line at line " + std::to_string(line_no),
                              line_no);
        c.set(key, value, line_no);
    }
    return c;
}

Config parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config_text(buf.str());
}

SpaceTimeFn make_source(const std::string& name) {
    if (name == "zero") return {};
    if (name == "one") return [](double, double) { return 1.0; };
    if (name == "sine-pi2")
        return [](double, double x) { return kPi * kPi * std::sin(kPi * x); };
    if (name == "kink4") return [](double, double x) { return 4.0 * std::abs(1.0 - 2.0 * x); };
    throw ConfigError("config: unknown source '" + name + "'");
}

SpaceFn make_initial(const std::string& name) {
    if (name == "zero") return {};
    if (name == "sine") return [](double x) { return std::sin(kPi * x); };
    throw ConfigError("config: unknown initial datum '" + name + "'");
}

SpaceTimeFn make_oracle(const std::string& name) {
    if (name == "none") return {};
    if (name == "heat-decay")
        return [](double t, double x) { return std::sin(kPi * x) * std::exp(-kPi * kPi * t); };
    if (name == "parabola") return [](double, double x) { return x * (1.0 - x); };
    if (name == "sine") return [](double, double x) { return std::sin(kPi * x); };
    throw ConfigError("config: unknown oracle '" + name + "'");
}

std::string resolved_model_id(const Config& config) {
    std::string id = config.get("model");
    const std::string p = config.get("p");
    if (!p.empty() && id.find(':') == std::string::npos && id != "linear" &&
        id != "step-riser" && id != "zigzag" && id != "antimonotone" && id != "quadratic-flux")
        id += ":p=" + p;
    return id;
}

SolveConfig build_solve_config(const Config& config) {
    SolveConfig cfg;
    try {
        cfg.model = parse_model_id(resolved_model_id(config));
    } catch (const ParameterError& e) {
        throw ConfigError(std::string("config: ") + e.what(), config_line(config, "model"));
    }
    try {
        cfg.scheme.scheme = parse_scheme(config.get("scheme"));
    } catch (const ParameterError& e) {
        throw ConfigError(std::string("config: ") + e.what(), config_line(config, "scheme"));
    }
    cfg.scheme.epsilon = config.get_double("eps");
    if (!(cfg.scheme.epsilon > 0.0 && cfg.scheme.epsilon < 1.0))
        throw ConfigError("config: eps must lie strictly inside (0,1)",
                          config_line(config, "eps"));
    cfg.scheme.shift_sign = config.get_int("shift_sign");
    cfg.mesh = build_mesh(config.get_int("n_elements"), config.get_double("L"),
                          parse_bc(config.get("bc_left")), parse_bc(config.get("bc_right")));
    cfg.T = config.get_double("T");
    cfg.tau = config.get_double("tau");
    cfg.f = make_source(config.get("f"));
    cfg.u0 = make_initial(config.get("u0"));
    cfg.oracle = make_oracle(config.get("oracle"));
    cfg.newton_tol = config.get_double("newton_tol");
    cfg.newton_max = config.get_int("newton_max");
    cfg.verify_model_first = config.get_flag("verify");
    return cfg;
}

}  // namespace fluxgraph
