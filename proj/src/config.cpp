#include "kpo/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace kpo {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_number(const std::string& v, int line_no) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": cannot parse number '" + v + "'");
    }
    if (pos != v.size())
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": trailing characters in number '" + v + "'");
    return x;
}

int parse_int(const std::string& v, int line_no) {
    const double x = parse_number(v, line_no);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x)
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": expected integer, got '" + v + "'");
    return i;
}

std::vector<double> expand_grid(const GridSpec& g, const char* what) {
    if (g.steps < 1) throw ConfigError(std::string(what) + ": steps must be >= 1");
    if (g.steps == 1) {
        if (g.max != g.min)
            throw ConfigError(std::string(what) + ": single-step grid needs min == max");
        return {g.min};
    }
    if (!(g.max > g.min))
        throw ConfigError(std::string(what) + ": grid must be strictly ascending");
    std::vector<double> out(g.steps);
    for (int k = 0; k < g.steps; ++k)
        out[k] = g.min + (g.max - g.min) * k / (g.steps - 1);
    return out;
}

} // namespace

KpoParams RunConfig::device() const {
    KpoParams p;
    p.delta = mhz_to_angular(delta_mhz);
    p.chi = mhz_to_angular(chi_mhz);
    p.kappa_e = mhz_to_angular(kappa_e_mhz);
    p.kappa_i = mhz_to_angular(kappa_i_mhz);
    p.gamma_phi = mhz_to_angular(gamma_phi_mhz);
    p.dim = dim;
    p.validate();
    return p;
}

DriveLine RunConfig::line() const {
    if (!domega_di_mhz_per_ua)
        throw ConfigError("config: missing drive.domega_di_mhz_per_ua");
    DriveLine l;
    l.domega_di = mhz_to_angular(*domega_di_mhz_per_ua);
    l.z0 = z0_ohm.value_or(50.0);
    l.attenuation_db = attenuation_db.value_or(0.0);
    l.validate();
    return l;
}

std::vector<double> RunConfig::beta_axis() const {
    std::vector<double> out;
    if (beta_grid_mhz) {
        for (double b : expand_grid(*beta_grid_mhz, "beta grid"))
            out.push_back(mhz_to_angular(b));
    } else if (power_grid_dbm) {
        const DriveLine l = line();
        for (double p : expand_grid(*power_grid_dbm, "power grid"))
            out.push_back(power_to_beta(p, l));
    } else {
        throw ConfigError("config: no drive grid specified");
    }
    for (std::size_t k = 1; k < out.size(); ++k)
        if (!(out[k] > out[k - 1]))
            throw ConfigError("config: derived beta grid not strictly ascending");
    return out;
}

std::vector<double> RunConfig::probe_axis() const {
    GridSpec g{probe_min_mhz, probe_max_mhz, probe_steps};
    std::vector<double> out;
    for (double f : expand_grid(g, "probe grid")) out.push_back(mhz_to_angular(f));
    return out;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;

    bool have_beta_min = false, have_beta_max = false, have_beta_steps = false;
    bool have_power_min = false, have_power_max = false, have_power_steps = false;
    GridSpec beta_grid, power_grid;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const std::size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "device" && section != "drive" && section != "probe" &&
                section != "output")
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": unknown section [" + section + "]");
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": empty key or value");

        auto unknown = [&]() -> ConfigError {
            return ConfigError("config line " + std::to_string(line_no) +
                               ": unknown key '" + key + "' in section [" + section + "]");
        };

        if (section == "device") {
            if (key == "delta_mhz") cfg.delta_mhz = parse_number(val, line_no);
            else if (key == "chi_mhz") cfg.chi_mhz = parse_number(val, line_no);
            else if (key == "kappa_e_mhz") cfg.kappa_e_mhz = parse_number(val, line_no);
            else if (key == "kappa_i_mhz") cfg.kappa_i_mhz = parse_number(val, line_no);
            else if (key == "gamma_phi_mhz") cfg.gamma_phi_mhz = parse_number(val, line_no);
            else if (key == "dim") cfg.dim = parse_int(val, line_no);
            else throw unknown();
        } else if (section == "drive") {
            if (key == "beta_min_mhz") { beta_grid.min = parse_number(val, line_no); have_beta_min = true; }
            else if (key == "beta_max_mhz") { beta_grid.max = parse_number(val, line_no); have_beta_max = true; }
            else if (key == "beta_steps") { beta_grid.steps = parse_int(val, line_no); have_beta_steps = true; }
            else if (key == "power_min_dbm") { power_grid.min = parse_number(val, line_no); have_power_min = true; }
            else if (key == "power_max_dbm") { power_grid.max = parse_number(val, line_no); have_power_max = true; }
            else if (key == "power_steps") { power_grid.steps = parse_int(val, line_no); have_power_steps = true; }
            else if (key == "domega_di_mhz_per_ua") cfg.domega_di_mhz_per_ua = parse_number(val, line_no);
            else if (key == "z0_ohm") cfg.z0_ohm = parse_number(val, line_no);
            else if (key == "attenuation_db") cfg.attenuation_db = parse_number(val, line_no);
            else throw unknown();
        } else if (section == "probe") {
            if (key == "min_mhz") cfg.probe_min_mhz = parse_number(val, line_no);
            else if (key == "max_mhz") cfg.probe_max_mhz = parse_number(val, line_no);
            else if (key == "steps") cfg.probe_steps = parse_int(val, line_no);
            else throw unknown();
        } else if (section == "output") {
            if (key == "directory") cfg.directory = val;
            else if (key == "formats") cfg.formats = val;
            else throw unknown();
        } else {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": key '" + key + "' outside any section");
        }
    }

    const bool any_beta = have_beta_min || have_beta_max || have_beta_steps;
    const bool any_power = have_power_min || have_power_max || have_power_steps;
    if (any_beta && any_power)
        throw ConfigError("config: both beta and power grids specified");
    if (!any_beta && !any_power)
        throw ConfigError("config: missing drive grid (beta_* or power_* keys)");
    if (any_beta) {
        if (!(have_beta_min && have_beta_max && have_beta_steps))
            throw ConfigError("config: beta grid needs beta_min_mhz, beta_max_mhz, beta_steps");
        cfg.beta_grid_mhz = beta_grid;
    } else {
        if (!(have_power_min && have_power_max && have_power_steps))
            throw ConfigError("config: power grid needs power_min_dbm, power_max_dbm, power_steps");
        if (!cfg.domega_di_mhz_per_ua)
            throw ConfigError("config: power grid needs domega_di_mhz_per_ua");
        if (!cfg.attenuation_db)
            throw ConfigError("config: power grid needs attenuation_db");
        cfg.power_grid_dbm = power_grid;
    }

    cfg.device();      // validate device block
    cfg.beta_axis();   // validate grids
    cfg.probe_axis();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

} // namespace kpo
