#include "nmrelax/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace nmrelax {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value for '" + key + "': " + text);
    }
}

int parse_int(const std::string& key, const std::string& text) {
    int v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw std::invalid_argument("config: bad integer value for '" + key + "': " + text);
    }
    return v;
}

}  // namespace

RunConfig parse_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": empty key or value");
        }
        if (!kv.emplace(key, value).second) {
            throw std::invalid_argument("config: duplicate key '" + key + "'");
        }
    }

    auto take = [&kv](const char* key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    // An angular frequency may be given in rad/s or in Hz, but not both.
    auto take_angular = [&](const char* radps_key, const char* hz_key,
                            double fallback) -> double {
        const auto radps = take(radps_key);
        const auto hz = take(hz_key);
        if (radps && hz) {
            throw std::invalid_argument(std::string("config: give only one of '") +
                                        radps_key + "' and '" + hz_key + "'");
        }
        if (radps) return parse_double(radps_key, *radps);
        if (hz) return two_pi * parse_double(hz_key, *hz);
        return fallback;
    };

    RunConfig cfg;
    ModelParams p;
    if (auto v = take("gamma_I_radps")) p.gamma_I = parse_double("gamma_I_radps", *v);
    if (auto v = take("gamma_II_radps")) p.gamma_II = parse_double("gamma_II_radps", *v);
    p.J = take_angular("J_radps", "J_hz", p.J);
    p.omega1 = take_angular("omega1_radps", "omega1_hz", p.omega1);
    if (auto v = take("n")) p.n = parse_int("n", *v);

    double t_start = 0.0, t_end = 1.0;
    int samples = 1001;
    if (auto v = take("t_start_s")) t_start = parse_double("t_start_s", *v);
    if (auto v = take("t_end_s")) t_end = parse_double("t_end_s", *v);
    if (auto v = take("samples")) samples = parse_int("samples", *v);

    if (!kv.empty()) {
        throw std::invalid_argument("config: unknown key '" + kv.begin()->first + "'");
    }

    cfg.params = validate_params(p);
    cfg.grid = TimeGrid(t_start, t_end, samples);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse_config(in);
}

void write_config(std::ostream& out, const RunConfig& cfg) {
    std::ostringstream ss;
    ss.precision(17);
    ss << "gamma_I_radps = " << cfg.params.gamma_I << "\n"
       << "gamma_II_radps = " << cfg.params.gamma_II << "\n"
       << "J_radps = " << cfg.params.J << "\n"
       << "omega1_radps = " << cfg.params.omega1 << "\n"
       << "n = " << cfg.params.n << "\n"
       << "t_start_s = " << cfg.grid.t_start << "\n"
       << "t_end_s = " << cfg.grid.t_end << "\n"
       << "samples = " << cfg.grid.samples << "\n";
    out << ss.str();
}

}  // namespace nmrelax
